//! Forces from the exact potentials by Richardson-extrapolated central
//! differences.
//!
//! Projections are on ρ̂ = (R_A − R_B)/R: F_Aρ = −dU_A/dR, F_Bρ = +dU_B/dR.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::atoms::TwoLevelAtom;
use crate::error::{domain, Result, VdwError};
use crate::fields::PhotonField;
use crate::potentials::{u_eq_two_atom, u_neq_asymmetry, u_neq_exact, Target};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSpec {
    /// h ≤ rel_step·R
    pub rel_step: f64,
    /// h ≤ phase_step/(2·ω_max), a fraction of the fastest oscillation
    pub phase_step: f64,
    /// required agreement between extrapolation levels, relative
    pub tol: f64,
}

impl Default for StepSpec {
    fn default() -> Self {
        Self {
            rel_step: 1e-3,
            phase_step: 1e-2,
            tol: 1e-6,
        }
    }
}

impl StepSpec {
    pub fn step(&self, r: f64, omega_max: f64) -> f64 {
        (self.rel_step * r).min(self.phase_step / (2.0 * omega_max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
}

/// df/dx at x from central differences at h, h/2, h/4 and two Richardson
/// levels. Converged when the two first-level estimates agree to `tol`
/// relative to max(|f'|, |f|/|x|).
pub fn richardson_derivative<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64, tol: f64) -> Result<Derivative> {
    let central = |h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let fx = f(x)?;
    let mut h = h;
    let mut last = None;
    for _ in 0..2 {
        let (d0, d1, d2) = (central(h)?, central(h / 2.0)?, central(h / 4.0)?);
        let r1 = (4.0 * d1 - d0) / 3.0;
        let r2 = (4.0 * d2 - d1) / 3.0;
        let r3 = (16.0 * r2 - r1) / 15.0;
        let scale = r3.abs().max(fx.abs() / x.abs());
        let out = Derivative {
            value: r3,
            error: (r3 - r2).abs(),
        };
        if !r3.is_finite() {
            break;
        }
        if (r2 - r1).abs() <= tol * scale {
            return Ok(out);
        }
        last = Some(out);
        h /= 8.0;
    }
    let out = last.unwrap_or(Derivative {
        value: f64::NAN,
        error: f64::INFINITY,
    });
    Err(VdwError::Derivative {
        r: x,
        value: out.value,
        error: out.error,
    })
}

/// Force on one atom from a potential function of R.
pub fn force_from_potential<F: Fn(f64) -> Result<f64>>(
    target: Target,
    u: F,
    r: f64,
    omega_max: f64,
    step: &StepSpec,
) -> Result<Derivative> {
    if !(r > 0.0) {
        return domain(format!("separation must be positive, got {r}"));
    }
    let d = richardson_derivative(u, r, step.step(r, omega_max), step.tol)?;
    let sign = match target {
        Target::A => -1.0,
        Target::B => 1.0,
    };
    Ok(Derivative {
        value: sign * d.value,
        error: d.error,
    })
}

fn potential(
    target: Target,
    a: &TwoLevelAtom,
    b: &TwoLevelAtom,
    field: &PhotonField,
    t_eq: Option<f64>,
    r: f64,
) -> Result<f64> {
    let eq = match t_eq {
        Some(t) => u_eq_two_atom(a, b, t, r)?,
        None => 0.0,
    };
    Ok(eq + u_neq_exact(target, a, b, field, r)?)
}

/// ρ-projected force on `target` from the exact non-equilibrium potential,
/// plus the equilibrium potential at `t_for_eq` when given.
pub fn force_exact(
    target: Target,
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    t_for_eq: Option<f64>,
    r: f64,
    step: &StepSpec,
) -> Result<Derivative> {
    let w = atom_a.omega0.max(atom_b.omega0);
    force_from_potential(
        target,
        |r| potential(target, atom_a, atom_b, field, t_for_eq, r),
        r,
        w,
        step,
    )
}

/// (F_Aρ + F_Bρ)/2 = −d(U_A − U_B)/dR / 2, differentiated from the
/// analytically cancelled difference. The equilibrium parts are equal for both
/// atoms and drop out.
pub fn net_force_exact(
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    r: f64,
    step: &StepSpec,
) -> Result<Derivative> {
    if !(r > 0.0) {
        return domain(format!("separation must be positive, got {r}"));
    }
    let w = atom_a.omega0.max(atom_b.omega0);
    let d = richardson_derivative(|r| u_neq_asymmetry(atom_a, atom_b, field, r), r, step.step(r, w), step.tol)?;
    Ok(Derivative {
        value: -0.5 * d.value,
        error: 0.5 * d.error,
    })
}

/// (F_Aρ − F_Bρ)/2 = −d(U_A + U_B)/dR / 2: the mutual part of the pair, positive
/// when the atoms push each other apart.
pub fn interaction_force_exact(
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    t_for_eq: Option<f64>,
    r: f64,
    step: &StepSpec,
) -> Result<Derivative> {
    let w = atom_a.omega0.max(atom_b.omega0);
    let sum = |r| -> Result<f64> {
        Ok(potential(Target::A, atom_a, atom_b, field, t_for_eq, r)?
            + potential(Target::B, atom_a, atom_b, field, t_for_eq, r)?)
    };
    let d = force_from_potential(Target::A, sum, r, w, step)?;
    Ok(Derivative {
        value: 0.5 * d.value,
        error: 0.5 * d.error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcePair {
    pub f_a: Vector3<f64>,
    pub f_b: Vector3<f64>,
    pub f_a_rho: f64,
    pub f_b_rho: f64,
    pub f_net_rho: f64,
    pub r: f64,
    /// largest finite-difference error estimate among the components
    pub error: f64,
}

impl ForcePair {
    /// Pair for atoms at `r_a` and `r_b` from ρ-projections.
    pub fn from_projections(r_a: Vector3<f64>, r_b: Vector3<f64>, f_a_rho: f64, f_b_rho: f64, error: f64) -> Result<Self> {
        let sep = r_a - r_b;
        let r = sep.norm();
        if !(r > 0.0) {
            return domain("atoms at the same position");
        }
        let rho = sep / r;
        Ok(Self {
            f_a: rho * f_a_rho,
            f_b: rho * f_b_rho,
            f_a_rho,
            f_b_rho,
            f_net_rho: 0.5 * (f_a_rho + f_b_rho),
            r,
            error,
        })
    }
}

/// Exact forces on both atoms at the given positions.
pub fn force_pair(
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    t_for_eq: Option<f64>,
    r_a: Vector3<f64>,
    r_b: Vector3<f64>,
    step: &StepSpec,
) -> Result<ForcePair> {
    let r = (r_a - r_b).norm();
    let fa = force_exact(Target::A, atom_a, atom_b, field, t_for_eq, r, step)?;
    let fb = force_exact(Target::B, atom_a, atom_b, field, t_for_eq, r, step)?;
    ForcePair::from_projections(r_a, r_b, fa.value, fb.value, fa.error.max(fb.error))
}

/// (F_Aρ + F_Bρ)/2.
pub fn net_force(pair: &ForcePair) -> f64 {
    0.5 * (pair.f_a_rho + pair.f_b_rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{f_long_ground, f_short_ground, RegimeThresholds};
    use std::f64::consts::PI;

    fn pair() -> (TwoLevelAtom, TwoLevelAtom) {
        (
            TwoLevelAtom::new(1.0, 3e-8).unwrap(),
            TwoLevelAtom::new(1.0126, 2.8e-8).unwrap(),
        )
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn inverse_sixth_power() {
        for r in [1e-3, 0.7, 40.0] {
            let d = richardson_derivative(|x| Ok(x.powi(-6)), r, 1e-3 * r, 1e-6).unwrap();
            assert!(rel(d.value, -6.0 * r.powi(-7)) < 1e-8, "{r}");
        }
    }

    #[test]
    fn rough_function_fails_to_converge() {
        let r = richardson_derivative(|x| Ok((1e9 * x).sin() * 1e-3 + x), 1.0, 1e-3, 1e-6);
        assert!(matches!(r, Err(VdwError::Derivative { .. })));
    }

    #[test]
    fn short_range_matches_closed_form() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        let r = 0.01 * 2.0 * PI;
        let s = StepSpec::default();
        let fa = force_exact(Target::A, &a, &b, &f, None, r, &s).unwrap();
        let fb = force_exact(Target::B, &a, &b, &f, None, r, &s).unwrap();
        let (ea, eb) = f_short_ground(&a, &b, &f, r, &RegimeThresholds::default()).unwrap();
        assert!(rel(fa.value, ea) < 5e-3 && rel(fb.value, eb) < 5e-3);
    }

    #[test]
    fn long_range_matches_closed_form() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        let s = StepSpec::default();
        let th = RegimeThresholds::default();
        let r = 400.0 * 2.0 * PI + 0.3;
        for t in [Target::A, Target::B] {
            let fe = force_exact(t, &a, &b, &f, None, r, &s).unwrap();
            let fl = f_long_ground(t, &a, &b, &f, r, &th).unwrap();
            assert!(rel(fe.value, fl) < 1e-2, "{:?} {} {}", t, fe.value, fl);
        }
    }

    #[test]
    fn net_force_vanishes_at_short_range() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        let s = StepSpec::default();
        let r = 0.01;
        let fa = force_exact(Target::A, &a, &b, &f, None, r, &s).unwrap().value;
        let net = net_force_exact(&a, &b, &f, r, &s).unwrap().value;
        assert!(net.abs() < 1e-3 * fa.abs());
    }

    #[test]
    fn net_force_is_the_mean_of_the_pair() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        let s = StepSpec::default();
        for r in [0.8, 2.0, 35.0] {
            let fa = force_exact(Target::A, &a, &b, &f, None, r, &s).unwrap().value;
            let fb = force_exact(Target::B, &a, &b, &f, None, r, &s).unwrap().value;
            let net = net_force_exact(&a, &b, &f, r, &s).unwrap().value;
            assert!((net - 0.5 * (fa + fb)).abs() < 1e-6 * fa.abs().max(fb.abs()), "R={r}");
        }
    }

    #[test]
    fn pair_is_along_separation() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        let ra = Vector3::new(0.3, 1.1, -0.4);
        let rb = Vector3::new(-0.2, 0.5, 0.9);
        let p = force_pair(&a, &b, &f, Some(1.0), ra, rb, &StepSpec::default()).unwrap();
        let rho = (ra - rb).normalize();
        let trans_a = (p.f_a - rho * p.f_a.dot(&rho)).norm();
        assert!(trans_a <= 1e-10 * p.f_a.norm());
        assert_eq!(net_force(&p), p.f_net_rho);
        assert!((p.f_a.dot(&rho) - p.f_a_rho).abs() <= 1e-14 * p.f_a_rho.abs());
    }

    #[test]
    fn reciprocal_pair_has_no_net_force() {
        let p = ForcePair::from_projections(Vector3::x(), Vector3::zeros(), 2.5, -2.5, 0.0).unwrap();
        assert_eq!(net_force(&p), 0.0);
    }
}
