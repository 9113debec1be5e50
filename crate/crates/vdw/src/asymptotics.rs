//! Short- and long-distance closed forms of the non-equilibrium potentials and
//! forces. Every function refuses to evaluate outside its regime.
//!
//! Forces are projections on ρ̂ = (R_A − R_B)/R, so F_A = −dU_A/dR and
//! F_B = +dU_B/dR; a positive F_A pushes A away from B.

use serde::{Deserialize, Serialize};

use crate::atoms::{population_factor, TwoLevelAtom};
use crate::error::{domain, Result, VdwError};
use crate::fields::PhotonField;
use crate::potentials::Target;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    /// both ω₀R below this: short regime
    pub short: f64,
    /// both ω₀R above this: long regime
    pub long: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            short: 0.1,
            long: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Short,
    Intermediate,
    Long,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Short => "short",
            Regime::Intermediate => "intermediate",
            Regime::Long => "long",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub x_a: f64,
    pub x_b: f64,
    pub regime: Regime,
}

impl RegimeReport {
    pub fn new(omega_a: f64, omega_b: f64, r: f64, th: &RegimeThresholds) -> Self {
        let (x_a, x_b) = (omega_a * r, omega_b * r);
        let regime = if x_a < th.short && x_b < th.short {
            Regime::Short
        } else if x_a > th.long && x_b > th.long {
            Regime::Long
        } else {
            Regime::Intermediate
        };
        Self { x_a, x_b, regime }
    }
}

fn require(
    what: &'static str,
    needed: Regime,
    a: &TwoLevelAtom,
    b: &TwoLevelAtom,
    r: f64,
    th: &RegimeThresholds,
) -> Result<()> {
    if !(r > 0.0) {
        return domain(format!("separation must be positive, got {r}"));
    }
    if a.omega0 == b.omega0 {
        return Err(VdwError::DegenerateResonance(a.omega0));
    }
    let rep = RegimeReport::new(a.omega0, b.omega0, r, th);
    if rep.regime != needed {
        return Err(VdwError::Regime {
            what,
            needed: needed.as_str(),
            x_a: rep.x_a,
            x_b: rep.x_b,
        });
    }
    Ok(())
}

fn require_ground(a: &TwoLevelAtom, b: &TwoLevelAtom) -> Result<()> {
    if a.p_e != 0.0 || b.p_e != 0.0 {
        return domain("ground-state formula used with excited populations");
    }
    Ok(())
}

fn ordered<'a>(target: Target, a: &'a TwoLevelAtom, b: &'a TwoLevelAtom) -> (&'a TwoLevelAtom, &'a TwoLevelAtom) {
    match target {
        Target::A => (a, b),
        Target::B => (b, a),
    }
}

/// Leading 1/R² terms of the exact potentials:
///
/// U_A = 4|d_A|²|d_B|²ω_Aω_B/(9R²(ω_A² − ω_B²))·{ω_B³P_B − ω_A³P_A cos(2ω_A R)}
///
/// and U_B from the same expression with A and B exchanged.
pub fn u_neq_long(
    target: Target,
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    r: f64,
    th: &RegimeThresholds,
) -> Result<f64> {
    require("u_neq_long", Regime::Long, atom_a, atom_b, r, th)?;
    let (a, b) = ordered(target, atom_a, atom_b);
    let (wa, wb) = (a.omega0, b.omega0);
    let pa = population_factor(a, field.occupation(wa));
    let pb = population_factor(b, field.occupation(wb));
    let c = 4.0 * a.d2 * b.d2 * wa * wb / (9.0 * r * r * (wa * wa - wb * wb));
    Ok(c * (wb.powi(3) * pb - wa.powi(3) * pa * (2.0 * wa * r).cos()))
}

/// U_A = U_B = 12|d_A|²|d_B|²(ω_A P_B − ω_B P_A)/(9R⁶(ω_A² − ω_B²)), the R → 0
/// limit of the exact potentials (both contractions tend to 6/R⁶).
pub fn u_neq_short(
    target: Target,
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    r: f64,
    th: &RegimeThresholds,
) -> Result<f64> {
    require("u_neq_short", Regime::Short, atom_a, atom_b, r, th)?;
    let (a, b) = ordered(target, atom_a, atom_b);
    let (wa, wb) = (a.omega0, b.omega0);
    let pa = population_factor(a, field.occupation(wa));
    let pb = population_factor(b, field.occupation(wb));
    Ok(12.0 * a.d2 * b.d2 * (wa * pb - wb * pa) / (9.0 * r.powi(6) * (wa * wa - wb * wb)))
}

/// (F_A, F_B) for two ground states at short range:
/// F_A = −F_B = 8|d_A|²|d_B|²[ω_A N(ω_B) − ω_B N(ω_A)]/(R⁷(ω_A² − ω_B²)).
pub fn f_short_ground(
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    r: f64,
    th: &RegimeThresholds,
) -> Result<(f64, f64)> {
    require("f_short_ground", Regime::Short, atom_a, atom_b, r, th)?;
    require_ground(atom_a, atom_b)?;
    let (wa, wb) = (atom_a.omega0, atom_b.omega0);
    let (na, nb) = (field.occupation(wa), field.occupation(wb));
    let fa = 8.0 * atom_a.d2 * atom_b.d2 * (wa * nb - wb * na) / (r.powi(7) * (wa * wa - wb * wb));
    Ok((fa, -fa))
}

/// Oscillating long-range force on one atom of a ground-state pair:
///
/// F_A = −8|d_A|²|d_B|² N(ω_A) ω_A⁵ω_B sin(2ω_A R)/(9R²(ω_A² − ω_B²))
/// F_B = −8|d_A|²|d_B|² N(ω_B) ω_Aω_B⁵ sin(2ω_B R)/(9R²(ω_A² − ω_B²))
pub fn f_long_ground(
    target: Target,
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    r: f64,
    th: &RegimeThresholds,
) -> Result<f64> {
    require("f_long_ground", Regime::Long, atom_a, atom_b, r, th)?;
    require_ground(atom_a, atom_b)?;
    let (wa, wb) = (atom_a.omega0, atom_b.omega0);
    let pre = -8.0 * atom_a.d2 * atom_b.d2 / (9.0 * r * r * (wa * wa - wb * wb));
    Ok(match target {
        Target::A => pre * field.occupation(wa) * wa.powi(5) * wb * (2.0 * wa * r).sin(),
        Target::B => pre * field.occupation(wb) * wa * wb.powi(5) * (2.0 * wb * r).sin(),
    })
}

/// Long-range potentials of two ground-state atoms.
pub fn u_ground_long(
    target: Target,
    atom_a: &TwoLevelAtom,
    atom_b: &TwoLevelAtom,
    field: &PhotonField,
    r: f64,
    th: &RegimeThresholds,
) -> Result<f64> {
    require_ground(atom_a, atom_b)?;
    u_neq_long(target, atom_a, atom_b, field, r, th)
}

/// (F_A, F_B) from the static Matsubara term of the equilibrium potential,
/// −3Tα_A(0)α_B(0)/R⁶, which dominates once R ≫ 1/T:
/// F_A = −F_B = −8T|d_A|²|d_B|²/(ω_Aω_B R⁷).
pub fn f_eq_long(atom_a: &TwoLevelAtom, atom_b: &TwoLevelAtom, t: f64, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) || !(t >= 0.0) {
        return domain("f_eq_long needs R > 0 and T >= 0");
    }
    if t * r < 1.0 {
        log::warn!("f_eq_long used at R·T = {:e}, outside R >> 1/T", t * r);
    }
    let k = atom_a.d2 * atom_b.d2 * atom_a.inversion() * atom_b.inversion();
    let fa = -8.0 * t * k / (atom_a.omega0 * atom_b.omega0 * r.powi(7));
    Ok((fa, -fa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{u_eq_two_atom, u_neq_exact};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn pair() -> (TwoLevelAtom, TwoLevelAtom) {
        (
            TwoLevelAtom::new(1.0, 3e-8).unwrap(),
            TwoLevelAtom::new(1.0126, 2.8e-8).unwrap(),
        )
    }
    const TH: RegimeThresholds = RegimeThresholds { short: 0.1, long: 10.0 };

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn regime_tags() {
        assert_eq!(RegimeReport::new(1.0, 1.1, 0.05, &TH).regime, Regime::Short);
        assert_eq!(RegimeReport::new(1.0, 1.1, 0.095, &TH).regime, Regime::Intermediate);
        assert_eq!(RegimeReport::new(1.0, 1.1, 11.0, &TH).regime, Regime::Long);
    }

    #[test]
    fn regime_violations_are_errors() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        assert!(matches!(u_neq_long(Target::A, &a, &b, &f, 1.0, &TH), Err(VdwError::Regime { .. })));
        assert!(matches!(u_neq_short(Target::A, &a, &b, &f, 1.0, &TH), Err(VdwError::Regime { .. })));
        assert!(f_short_ground(&a, &b, &f, 20.0, &TH).is_err());
        assert!(f_long_ground(Target::B, &a, &b, &f, 0.01, &TH).is_err());
    }

    #[test]
    fn vacuum_ground_pair_vanishes() {
        let (a, b) = pair();
        assert_eq!(u_neq_long(Target::A, &a, &b, &PhotonField::Vacuum, 50.0, &TH).unwrap(), 0.0);
        assert_eq!(u_neq_long(Target::B, &a, &b, &PhotonField::Vacuum, 50.0, &TH).unwrap(), 0.0);
    }

    #[test]
    fn excited_a_in_vacuum() {
        let (a, b) = pair();
        let a = a.excited().unwrap();
        let v = PhotonField::Vacuum;
        let mut last_a = 0.0;
        let mut flips = 0;
        let mut ub = Vec::new();
        for k in 0..500 {
            let r = 60.0 + 40.0 * k as f64 / 499.0;
            let ua = u_neq_long(Target::A, &a, &b, &v, r, &TH).unwrap();
            if k > 0 && ua * last_a < 0.0 {
                flips += 1;
            }
            last_a = ua;
            ub.push(u_neq_long(Target::B, &a, &b, &v, r, &TH).unwrap());
        }
        assert!(flips > 10);
        assert!(ub.windows(2).all(|w| w[1].abs() < w[0].abs() && w[1] * w[0] > 0.0));
    }

    #[test]
    fn short_form_reduces_to_ground_state_form() {
        let (a, b) = pair();
        let f = PhotonField::thermal(0.8).unwrap();
        let r: f64 = 0.02;
        let (na, nb) = (f.occupation(a.omega0), f.occupation(b.omega0));
        let short_form = 4.0 * a.d2 * b.d2 * (a.omega0 * nb - b.omega0 * na)
            / (3.0 * r.powi(6) * (a.omega0.powi(2) - b.omega0.powi(2)));
        for t in [Target::A, Target::B] {
            assert!(rel(u_neq_short(t, &a, &b, &f, r, &TH).unwrap(), short_form) < 1e-14);
        }
    }

    #[test]
    fn short_force_is_minus_gradient() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        let r = 0.03;
        let u = |r| u_neq_short(Target::A, &a, &b, &f, r, &TH).unwrap();
        // analytic: U = c/R⁶ ⇒ −dU/dR = 6U/R
        let (fa, fb) = f_short_ground(&a, &b, &f, r, &TH).unwrap();
        assert!(rel(fa, 6.0 * u(r) / r) < 1e-13);
        assert_eq!(fa, -fb);
        let h = 1e-5 * r;
        let num = -(u(r + h) - u(r - h)) / (2.0 * h);
        assert!(rel(fa, num) < 1e-9);
    }

    #[test]
    fn short_force_signs() {
        // ω_A < ω_B, equal N: repulsive
        let (a, b) = pair();
        let flat = PhotonField::TwoPeak(crate::fields::TwoPeakSpectrum::new(1.0, 1.0126, 3.0, 3.0, 1e-4).unwrap());
        let (fa, _) = f_short_ground(&a, &b, &flat, 0.01, &TH).unwrap();
        assert!(fa > 0.0);
        // all light at ω_B: repulsive for ω_A > ω_B, attractive for ω_A < ω_B
        for (wb, sign) in [(0.99, 1.0), (1.01, -1.0)] {
            let b = TwoLevelAtom::new(wb, 2.8e-8).unwrap();
            let p = PhotonField::TwoPeak(crate::fields::TwoPeakSpectrum::new(1.0, wb, 0.0, 40.0, 1e-6).unwrap());
            let (fa, _) = f_short_ground(&a, &b, &p, 0.01, &TH).unwrap();
            assert!(fa * sign > 0.0, "{wb}");
        }
    }

    #[test]
    fn long_force_nodes_and_empty_peak() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        let r = 40.0 * PI / 2.0 / a.omega0;
        let fa = f_long_ground(Target::A, &a, &b, &f, r, &TH).unwrap();
        let scale = f_long_ground(Target::A, &a, &b, &f, r + 0.3, &TH).unwrap();
        assert!(fa.abs() < 1e-12 * scale.abs());
        let p = PhotonField::TwoPeak(crate::fields::TwoPeakSpectrum::new(1.0, 1.0126, 0.0, 40.0, 1e-6).unwrap());
        for k in 0..20 {
            assert_eq!(f_long_ground(Target::A, &a, &b, &p, 30.0 + k as f64, &TH).unwrap(), 0.0);
        }
    }

    #[test]
    fn long_force_is_leading_gradient() {
        // −dU_A/dR of the long form: the sin(2ω_A R) term plus O(1/(ω_A R)) corrections
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        for r in [200.3, 400.7, 801.1] {
            let u = |r| u_ground_long(Target::A, &a, &b, &f, r, &TH).unwrap();
            let h = 1e-4;
            let num = -(u(r + h) - u(r - h)) / (2.0 * h);
            let fa = f_long_ground(Target::A, &a, &b, &f, r, &TH).unwrap();
            let amp = 8.0 * a.d2 * b.d2 * f.occupation(1.0) * b.omega0 / (9.0 * r * r * (1.0 - b.omega0.powi(2))).abs();
            assert!((num - fa).abs() < 3.0 / r * amp, "{r}");
        }
    }

    #[test]
    fn long_range_pair_is_not_reciprocal() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        let r = 37.3;
        let fa = f_long_ground(Target::A, &a, &b, &f, r, &TH).unwrap();
        let fb = f_long_ground(Target::B, &a, &b, &f, r, &TH).unwrap();
        assert!((fa + fb).abs() > 1e-3 * fa.abs());
    }

    #[test]
    fn equilibrium_force_matches_static_matsubara_term() {
        let (a, b) = pair();
        let t = 1.0;
        let r = 30.0;
        let h = 1e-3;
        // −d/dR of the full Matsubara sum; at R ≫ 1/T only m = 0 survives
        let fnum = -(u_eq_two_atom(&a, &b, t, r + h).unwrap() - u_eq_two_atom(&a, &b, t, r - h).unwrap()) / (2.0 * h);
        let (fa, fb) = f_eq_long(&a, &b, t, r).unwrap();
        assert!(rel(fa, fnum) < 0.05);
        assert!(fa < 0.0 && fb == -fa);
        // and it is twice the often-quoted 4T coefficient
        let quoted = -4.0 * t * a.d2 * b.d2 / (a.omega0 * b.omega0 * r.powi(7));
        assert!(rel(fa / quoted, 2.0) < 1e-14);
    }

    #[test]
    fn equilibrium_force_is_negligible_far_away() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        let r = 10.0 * 2.0 * PI;
        let (feq, _) = f_eq_long(&a, &b, 1.0, r).unwrap();
        let env = 8.0 * a.d2 * b.d2 * f.occupation(1.0) * b.omega0 / (9.0 * r * r * (1.0 - b.omega0.powi(2))).abs();
        assert!(feq.abs() / env < 1e-3);
    }

    #[test]
    fn matches_exact_at_extremes() {
        let (a, b) = pair();
        let f = PhotonField::thermal(1.0).unwrap();
        for t in [Target::A, Target::B] {
            let r = 0.01;
            let ex = u_neq_exact(t, &a, &b, &f, r).unwrap();
            assert!(rel(u_neq_short(t, &a, &b, &f, r, &TH).unwrap(), ex) < 1e-2);
        }
    }

    proptest! {
        #[test]
        fn ground_long_is_specialisation(r in 11.0f64..500.0, t in 0.0f64..3.0) {
            let (a, b) = pair();
            let f = PhotonField::thermal(t).unwrap();
            for tg in [Target::A, Target::B] {
                prop_assert_eq!(u_ground_long(tg, &a, &b, &f, r, &TH).unwrap(),
                                u_neq_long(tg, &a, &b, &f, r, &TH).unwrap());
            }
        }

        #[test]
        fn short_regime_is_reciprocal(r in 1e-3f64..0.09, na in 0.0f64..50.0, nb in 0.0f64..50.0) {
            let (a, b) = pair();
            let p = PhotonField::TwoPeak(crate::fields::TwoPeakSpectrum::new(1.0, 1.0126, na, nb, 1e-4).unwrap());
            let (fa, fb) = f_short_ground(&a, &b, &p, r, &TH).unwrap();
            prop_assert_eq!(fa, -fb);
        }

        #[test]
        fn long_force_zeros_at_half_periods(n in 30u32..3000) {
            let (a, b) = pair();
            let f = PhotonField::thermal(1.0).unwrap();
            let r = n as f64 * PI / (2.0 * a.omega0);
            let fa = f_long_ground(Target::A, &a, &b, &f, r, &TH).unwrap();
            let env = 8.0 * a.d2 * b.d2 * f.occupation(1.0) * b.omega0 / (9.0 * r * r * (1.0 - b.omega0.powi(2))).abs();
            prop_assert!(fa.abs() < 1e-10 * env);
        }
    }
}
