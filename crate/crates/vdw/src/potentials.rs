//! Exact potentials: the general atom-in-environment formula, the scattered
//! D₁₁ of a second atom, and the closed two-atom results.
//!
//! Sign conventions: D_r is the retarded photon Green's function, which for the
//! field scattered by atom B is D_r = −α_B·D⁰D⁰. The potential of atom A is
//!
//! U = (1/2π)∫₀^∞ Im[α_A(ω)D₁₁(ω)] dω + p_e (|d_A|²/3) Re D₁₁(ω_A)
//!
//! with α_A the population-averaged polarisability p_g α_g + p_e α_e.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::atoms::{population_factor, TwoLevelAtom};
use crate::error::{domain, Result, VdwError};
use crate::fields::PhotonField;
use crate::greens::{contracted_abs2, contracted_abs2_minus_sq, contracted_sq, contracted_sq_complex, contracted_sq_imagfreq};
use crate::quadrature::{integrate, integrate_to_infinity, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeTag {
    Exact,
    ShortAsymptotic,
    LongAsymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialBreakdown {
    pub u_eq: f64,
    pub u_neq: f64,
    pub atom_tag: Target,
    pub regime: RegimeTag,
}

impl PotentialBreakdown {
    pub fn total(&self) -> f64 {
        self.u_eq + self.u_neq
    }
}

/// The field seen by an atom at a fixed position, as the contracted D₁₁.
///
/// D₁₁ is split into a retarded part, analytic in the upper half plane, and a
/// fluctuation part that only exists on the real axis.
pub trait EnvironmentGreens: Sync {
    /// Retarded part at complex frequency z; `eta` broadens any resonances.
    fn retarded(&self, z: Complex64, eta: f64) -> Complex64;
    /// Retarded part at ω = iξ (real there).
    fn retarded_imagfreq(&self, xi: f64) -> f64;
    /// Fluctuation part on the real axis.
    fn fluctuation(&self, omega: f64, eta: f64) -> Complex64;
    /// Resonance frequencies of the environment.
    fn resonances(&self) -> Vec<f64> {
        Vec::new()
    }
    /// Kinks and jumps of the fluctuation part.
    fn fluctuation_points(&self) -> Vec<f64> {
        Vec::new()
    }
    /// The fluctuation part is negligible above this frequency.
    fn fluctuation_cutoff(&self) -> f64 {
        0.0
    }

    fn d11(&self, omega: f64, eta: f64) -> Complex64 {
        self.retarded(Complex64::new(omega, 0.0), eta) + self.fluctuation(omega, eta)
    }
}

/// Scattering by atom B at distance R in an isotropic field.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAtomScattered {
    pub r: f64,
    pub atom_b: TwoLevelAtom,
    pub field: PhotonField,
}

impl TwoAtomScattered {
    pub fn new(r: f64, atom_b: TwoLevelAtom, field: PhotonField) -> Result<Self> {
        if !(r > 0.0) {
            return domain(format!("separation must be positive, got {r}"));
        }
        Ok(Self { r, atom_b, field })
    }
}

impl EnvironmentGreens for TwoAtomScattered {
    fn retarded(&self, z: Complex64, eta: f64) -> Complex64 {
        let b = &self.atom_b;
        let alpha = b.alpha_ground_at(z + Complex64::new(0.0, eta)) * b.inversion();
        let sq = if z.im == 0.0 {
            contracted_sq(z.re, self.r)
        } else {
            contracted_sq_complex(z, self.r)
        };
        -alpha * sq
    }

    fn retarded_imagfreq(&self, xi: f64) -> f64 {
        -self.atom_b.alpha_imag(xi) * contracted_sq_imagfreq(xi, self.r)
    }

    fn fluctuation(&self, omega: f64, eta: f64) -> Complex64 {
        fluctuation_two_atom(omega, self.r, &self.atom_b, &self.field, eta)
    }

    fn resonances(&self) -> Vec<f64> {
        vec![self.atom_b.omega0]
    }

    fn fluctuation_points(&self) -> Vec<f64> {
        self.field.breakpoints()
    }

    fn fluctuation_cutoff(&self) -> f64 {
        self.field.cutoff()
    }
}

fn fluctuation_two_atom(omega: f64, r: f64, b: &TwoLevelAtom, field: &PhotonField, eta: f64) -> Complex64 {
    let n = field.occupation(omega);
    let ag = b.alpha_ground_at(Complex64::new(omega, eta));
    let a = ag * b.inversion();
    let abs2 = contracted_abs2(omega, r);
    let diff = contracted_abs2_minus_sq(omega, r);
    let i = Complex64::i();
    // −2iN Im[α_B D·D] + 2iN Im[α_B]|D|² = 2iN Im[α_B(|D|² − D·D)]
    i * (2.0 * n * (a * diff).im - 2.0 * b.p_e * ag.im * abs2)
}

/// Contracted D₁₁ at atom A from atom B:
///
/// D₁₁ = −α_B D·D − 2iN Im[α_B D·D] + 2iN Im[α_B]|D|² − 2i p_e^B Im[α_B^g]|D|²
///
/// The first two terms are −(2N+1)α_B D·D + 2N Re[α_B D·D]. α_B is the
/// population-averaged response and α_B^g the ground-state one; the last term
/// carries the emission of an excited B and is purely imaginary.
pub fn d11_scattered(
    omega: f64,
    r: f64,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    eta: f64,
) -> Result<Complex64> {
    if !(r > 0.0) {
        return domain(format!("separation must be positive, got {r}"));
    }
    if !(omega >= 0.0) || !(eta >= 0.0) {
        return domain("d11_scattered needs omega >= 0 and eta >= 0");
    }
    if eta == 0.0 && (omega - atom_b.omega0).abs() < 1e-12 * atom_b.omega0 {
        return Err(VdwError::Singularity(format!(
            "unbroadened D11 evaluated on the resonance of atom B at {omega}"
        )));
    }
    let env = TwoAtomScattered::new(r, *atom_b, field.clone())?;
    Ok(env.d11(omega, eta))
}

/// Atom at distance `z` from a perfectly conducting plane, via its image dipole.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfectMirror {
    pub z: f64,
    pub field: PhotonField,
}

impl PerfectMirror {
    pub fn new(z: f64, field: PhotonField) -> Result<Self> {
        if !(z > 0.0) {
            return domain(format!("mirror distance must be positive, got {z}"));
        }
        Ok(Self { z, field })
    }
}

impl EnvironmentGreens for PerfectMirror {
    fn retarded(&self, z: Complex64, _eta: f64) -> Complex64 {
        // image at R = 2z reflected by diag(−1, −1, 1): D_r = −tr[D⁰M] = 2t − l
        let r = 2.0 * self.z;
        let x = z * r;
        let i = Complex64::i();
        let phase = (i * x).exp() / r.powi(3);
        let t = phase * (x * x - 1.0 + i * x);
        let l = phase * 2.0 * (1.0 - i * x);
        2.0 * t - l
    }

    fn retarded_imagfreq(&self, xi: f64) -> f64 {
        let r = 2.0 * self.z;
        let y = xi * r;
        if y > 745.0 {
            return 0.0;
        }
        -2.0 * (-y).exp() * (y * y + 2.0 * y + 2.0) / r.powi(3)
    }

    fn fluctuation(&self, omega: f64, eta: f64) -> Complex64 {
        let n = self.field.occupation(omega);
        let dr = self.retarded(Complex64::new(omega, 0.0), eta);
        Complex64::new(0.0, 2.0 * n * dr.im)
    }

    fn fluctuation_points(&self) -> Vec<f64> {
        self.field.breakpoints()
    }

    fn fluctuation_cutoff(&self) -> f64 {
        self.field.cutoff()
    }
}

type RetardedFn = dyn Fn(Complex64, f64) -> Complex64 + Sync + Send;
type FluctuationFn = dyn Fn(f64, f64) -> Complex64 + Sync + Send;
type ImagFn = dyn Fn(f64) -> f64 + Sync + Send;

/// An environment given by closures.
pub struct UserSupplied {
    pub retarded: Box<RetardedFn>,
    pub retarded_imagfreq: Box<ImagFn>,
    pub fluctuation: Box<FluctuationFn>,
    pub resonances: Vec<f64>,
    pub fluctuation_points: Vec<f64>,
    pub fluctuation_cutoff: f64,
}

impl EnvironmentGreens for UserSupplied {
    fn retarded(&self, z: Complex64, eta: f64) -> Complex64 {
        (self.retarded)(z, eta)
    }
    fn retarded_imagfreq(&self, xi: f64) -> f64 {
        (self.retarded_imagfreq)(xi)
    }
    fn fluctuation(&self, omega: f64, eta: f64) -> Complex64 {
        (self.fluctuation)(omega, eta)
    }
    fn resonances(&self) -> Vec<f64> {
        self.resonances.clone()
    }
    fn fluctuation_points(&self) -> Vec<f64> {
        self.fluctuation_points.clone()
    }
    fn fluctuation_cutoff(&self) -> f64 {
        self.fluctuation_cutoff
    }
}

// ω₀ and ω₀ ± η·4^k: panels that resolve a Lorentzian of width η
fn resonance_points(w0: f64, eta: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts = vec![w0];
    let mut d = eta;
    while d < 0.5 * w0 {
        pts.push(w0 - d);
        pts.push(w0 + d);
        d *= 4.0;
    }
    pts.retain(|&p| p > lo && p < hi);
    pts
}

/// General potential of `atom` in `env` from the D₁₁ spectral integral, by quadrature.
///
/// The retarded part is analytic in the upper half plane, so its real-axis
/// integral is taken along 0 → ic → Ω + ic → Ω + i∞ with c half the lowest
/// resonance and Ω twice the highest. On the real axis the resonant pieces of
/// order R⁻² cancel down to the much smaller Casimir-Polder remainder at
/// ωR ≳ 10; off the axis they never appear. The fluctuation part is not
/// analytic and is integrated on the real axis up to the field's cutoff, with
/// panels straddling each resonance at ω₀ ± η·4^k.
pub fn u_general(
    atom: &TwoLevelAtom,
    env: &dyn EnvironmentGreens,
    eta: f64,
    quadrature: &QuadratureSpec,
) -> Result<f64> {
    if !(eta > 0.0) {
        return domain("u_general needs eta > 0");
    }
    if eta < 1e-13 * atom.omega0 {
        log::warn!("eta = {eta:e} is close to round-off; resonant panels may be ill-conditioned");
    }
    let mut res = env.resonances();
    res.push(atom.omega0);
    let w_max = res.iter().copied().fold(0.0, f64::max);
    let w_min = res.iter().copied().fold(f64::INFINITY, f64::min);
    let omega_r = 2.0 * w_max;
    let c = 0.5 * w_min;
    let s = atom.inversion();
    let ieta = Complex64::new(0.0, eta);
    let f = |z: Complex64| atom.alpha_ground_at(z + ieta) * s * env.retarded(z, eta);

    let cutoff = env.fluctuation_cutoff().max(omega_r);
    let mut fpts = vec![0.0, omega_r, cutoff];
    for &w0 in &res {
        fpts.extend(resonance_points(w0, eta, 0.0, cutoff));
    }
    fpts.extend(env.fluctuation_points());
    fpts.retain(|&p| (0.0..=cutoff).contains(&p));

    // Im∫f dω = Re∫f(iy)dy + Im∫f(x + ic)dx + Re∫f(Ω + iy)dy
    let parts = |spec: &QuadratureSpec| -> Result<[f64; 4]> {
        let up = integrate(|y: f64| f(Complex64::new(0.0, y)).re, &[0.0, c], spec)?;
        let across = integrate(|x: f64| f(Complex64::new(x, c)).im, &[0.0, omega_r], spec)?;
        let tail = integrate_to_infinity(|y: f64| f(Complex64::new(omega_r, y)).re, c, omega_r, spec)?;
        let fl = integrate(
            |w: f64| (atom.alpha(w, eta) * env.fluctuation(w, eta)).im,
            &fpts,
            spec,
        )?;
        Ok([up.value, across.value, tail.value, fl.value])
    };
    // a coarse pass fixes the absolute scale, so that a part far smaller than
    // the total is not refined to its own relative tolerance
    let rough = parts(&QuadratureSpec {
        rel_tol: quadrature.rel_tol.max(1e-4),
        ..*quadrature
    })?;
    let scale: f64 = rough.iter().map(|v| v.abs()).sum();
    let fine = parts(&QuadratureSpec {
        abs_tol: quadrature.abs_tol.max(1e-2 * quadrature.rel_tol * scale),
        ..*quadrature
    })?;

    let pole = if atom.p_e > 0.0 {
        atom.p_e * atom.d2 / 3.0 * env.d11(atom.omega0, 0.0).re
    } else {
        0.0
    };
    Ok(fine.iter().sum::<f64>() / (2.0 * PI) + pole)
}

/// Relative tolerance of the imaginary-frequency integrals in the equilibrium parts.
pub const MATSUBARA_REL_TOL: f64 = 1e-13;

/// T·Σ'_m f(2πmT), the m = 0 term halved; (1/2π)∫₀^∞ f(ξ)dξ at T = 0.
///
/// The sum stops once a term drops below 1e-16 of the running total. Past
/// 200000 terms the rest is added as an integral from the midpoint of the last
/// interval.
pub fn matsubara_sum<F: Fn(f64) -> f64>(t: f64, scale: f64, f: F, quadrature: &QuadratureSpec) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("temperature must be non-negative, got {t}"));
    }
    if t == 0.0 {
        let r = integrate_to_infinity(&f, 0.0, scale, quadrature)?;
        return Ok(r.value / (2.0 * PI));
    }
    const CAP: usize = 200_000;
    let step = 2.0 * PI * t;
    let mut sum = 0.5 * f(0.0);
    for m in 1..=CAP {
        let term = f(m as f64 * step);
        sum += term;
        if term.abs() <= 1e-16 * sum.abs() {
            return Ok(t * sum);
        }
    }
    let start = (CAP as f64 + 0.5) * step;
    let rest = integrate_to_infinity(&f, start, scale.max(step), quadrature)?;
    Ok(t * sum + rest.value / (2.0 * PI))
}

fn check_pair(a: &TwoLevelAtom, b: &TwoLevelAtom, r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("separation must be positive, got {r}"));
    }
    if a.omega0 == b.omega0 {
        return Err(VdwError::DegenerateResonance(a.omega0));
    }
    let dw = (a.omega0 - b.omega0).abs();
    if dw < 10.0 * (a.gamma + b.gamma) {
        log::warn!(
            "detuning {dw:e} is not large compared with the linewidths {:e}, {:e}",
            a.gamma,
            b.gamma
        );
    }
    Ok(())
}

/// −T Σ'_m α_A(iξ_m)α_B(iξ_m) D·D(iξ_m).
pub fn u_eq_two_atom(atom_a: &TwoLevelAtom, atom_b: &TwoLevelAtom, t: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("separation must be positive, got {r}"));
    }
    let scale = atom_a.omega0.max(atom_b.omega0).min(1.0 / r);
    matsubara_sum(
        t,
        scale,
        |xi| -atom_a.alpha_imag(xi) * atom_b.alpha_imag(xi) * contracted_sq_imagfreq(xi, r),
        &QuadratureSpec {
            rel_tol: MATSUBARA_REL_TOL,
            ..Default::default()
        },
    )
}

/// Closed form of the non-equilibrium two-atom potential:
///
/// U_A = 2|d_A|²|d_B|²/(9(ω_A² − ω_B²))·{ω_A P_B |D(ω_B)|² − ω_B P_A Re D·D(ω_A)}
///
/// with P = N(ω₀)p_g − (N(ω₀)+1)p_e; U_B is the same expression with A and B
/// exchanged.
pub fn u_neq_exact(
    target: Target,
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    r: f64,
) -> Result<f64> {
    check_pair(atom_a, atom_b, r)?;
    let (a, b) = match target {
        Target::A => (atom_a, atom_b),
        Target::B => (atom_b, atom_a),
    };
    let pa = population_factor(a, field.occupation(a.omega0));
    let pb = population_factor(b, field.occupation(b.omega0));
    let (wa, wb) = (a.omega0, b.omega0);
    let pre = 2.0 * a.d2 * b.d2 / (9.0 * (wa * wa - wb * wb));
    Ok(pre * (wa * pb * contracted_abs2(wb, r) - wb * pa * contracted_sq(wa, r).re))
}

/// U_A − U_B of the non-equilibrium potentials, written as
/// pre·{ω_A P_B Re(|D|² − D·D)(ω_B) + ω_B P_A Re(|D|² − D·D)(ω_A)} so that the
/// common 6/R⁶ parts cancel analytically.
pub fn u_neq_asymmetry(atom_a: &TwoLevelAtom, atom_b: &TwoLevelAtom, field: &PhotonField, r: f64) -> Result<f64> {
    check_pair(atom_a, atom_b, r)?;
    let (a, b) = (atom_a, atom_b);
    let pa = population_factor(a, field.occupation(a.omega0));
    let pb = population_factor(b, field.occupation(b.omega0));
    let (wa, wb) = (a.omega0, b.omega0);
    let pre = 2.0 * a.d2 * b.d2 / (9.0 * (wa * wa - wb * wb));
    Ok(pre * (wa * pb * contracted_abs2_minus_sq(wb, r).re + wb * pa * contracted_abs2_minus_sq(wa, r).re))
}

/// The non-equilibrium part that follows from the general D₁₁ integral with the
/// scattered D₁₁ for arbitrary populations:
///
/// U_A = 2|d_A|²|d_B|²/(9(ω_A² − ω_B²))·{ω_A s_A P_B |D(ω_B)|² − ω_B s_B P_A Re D·D(ω_A)}
///
/// with s = p_g − p_e. It coincides with [`u_neq_exact`] whenever s_A P_B = P_B
/// and s_B P_A = P_A: two ground states in any field, an excited atom next to a
/// ground-state one in vacuum, and detailed balance.
pub fn u_neq_scattering(
    target: Target,
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    r: f64,
) -> Result<f64> {
    check_pair(atom_a, atom_b, r)?;
    let (a, b) = match target {
        Target::A => (atom_a, atom_b),
        Target::B => (atom_b, atom_a),
    };
    let pa = population_factor(a, field.occupation(a.omega0));
    let pb = population_factor(b, field.occupation(b.omega0));
    let (wa, wb) = (a.omega0, b.omega0);
    let pre = 2.0 * a.d2 * b.d2 / (9.0 * (wa * wa - wb * wb));
    Ok(pre
        * (wa * a.inversion() * pb * contracted_abs2(wb, r)
            - wb * b.inversion() * pa * contracted_sq(wa, r).re))
}

/// Exact equilibrium plus non-equilibrium potential of one atom of the pair.
/// The equilibrium part is taken at the field's temperature (zero for
/// non-thermal fields).
pub fn two_atom_breakdown(
    target: Target,
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    r: f64,
) -> Result<PotentialBreakdown> {
    Ok(PotentialBreakdown {
        u_eq: u_eq_two_atom(atom_a, atom_b, field.temperature(), r)?,
        u_neq: u_neq_exact(target, atom_a, atom_b, field, r)?,
        atom_tag: target,
        regime: RegimeTag::Exact,
    })
}

/// Atom near a body described by its retarded scattering Green's function,
/// in thermal equilibrium radiation at temperature T (vacuum for T = 0):
///
/// U_eq = T Σ'_m α(iξ_m) D_r(iξ_m),  U_neq = −(|d|²/3) Re D_r(ω₀)·P
pub fn u_cp_body(
    atom: &TwoLevelAtom,
    scatter_greens: &dyn EnvironmentGreens,
    t: f64,
) -> Result<PotentialBreakdown> {
    let mut scale = atom.omega0;
    for w in scatter_greens.resonances() {
        scale = scale.max(w);
    }
    let u_eq = matsubara_sum(
        t,
        scale,
        |xi| atom.alpha_imag(xi) * scatter_greens.retarded_imagfreq(xi),
        &QuadratureSpec {
            rel_tol: MATSUBARA_REL_TOL,
            ..Default::default()
        },
    )?;
    let n = PhotonField::thermal(t)?.occupation(atom.omega0);
    let dr = scatter_greens.retarded(Complex64::new(atom.omega0, 0.0), 0.0);
    if !dr.re.is_finite() {
        return Err(VdwError::Singularity(
            "environment Green's function is singular at the atomic resonance".into(),
        ));
    }
    let u_neq = -(atom.d2 / 3.0) * dr.re * population_factor(atom, n);
    Ok(PotentialBreakdown {
        u_eq,
        u_neq,
        atom_tag: Target::A,
        regime: RegimeTag::Exact,
    })
}
