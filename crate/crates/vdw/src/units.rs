//! Physical constants and the natural/SI boundary.
//!
//! Everything inside the crate runs in natural units: ħ = c = 1, Gaussian
//! electrostatics, and every energy measured in units of a reference angular
//! frequency `omega_ref` (normally ω_A). So lengths are in c/ω_ref, forces in
//! ħω_ref²/c, temperatures in ħω_ref/k_B and squared dipoles in
//! ħc³/ω_ref² (after dividing out 4πε₀).
//!
//! The spectral energy density of an isotropic unpolarised field is tied to its
//! occupation number by the free-space mode density,
//! u(ω) = ħω³N(ω)/(π²c³), which is what `spectral_density_to_occupation` inverts.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{domain, Result};

// CODATA 2018
pub const HBAR: f64 = 1.054_571_817_65e-34;
pub const C: f64 = 299_792_458.0;
pub const K_B: f64 = 1.380_649e-23;
pub const E_CHARGE: f64 = 1.602_176_634e-19;
pub const EPS0: f64 = 8.854_187_812_8e-12;
pub const A0: f64 = 5.291_772_109_03e-11;
/// Atomic unit of dipole moment e·a₀ in C·m.
pub const EA0: f64 = E_CHARGE * A0;

/// An angular frequency in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Frequency(pub f64);

impl Frequency {
    pub fn rad_per_s(self) -> f64 {
        self.0
    }
}

pub fn ev_to_angular(energy_ev: f64) -> Result<Frequency> {
    if !(energy_ev > 0.0) || !energy_ev.is_finite() {
        return domain(format!("photon energy must be positive, got {energy_ev} eV"));
    }
    Ok(Frequency(energy_ev * E_CHARGE / HBAR))
}

pub fn angular_to_ev(omega: Frequency) -> Result<f64> {
    if !(omega.0 > 0.0) || !omega.0.is_finite() {
        return domain(format!("angular frequency must be positive, got {}", omega.0));
    }
    Ok(omega.0 * HBAR / E_CHARGE)
}

/// N(ω) = π²c³U_ω/(ħω³) for a spectral energy density U_ω in J·s/m³.
pub fn spectral_density_to_occupation(u_omega: f64, omega: Frequency) -> Result<f64> {
    if !(omega.0 > 0.0) {
        return domain("occupation needs omega > 0");
    }
    if !(u_omega >= 0.0) {
        return domain(format!("negative spectral energy density {u_omega}"));
    }
    Ok(PI * PI * C.powi(3) * u_omega / (HBAR * omega.0.powi(3)))
}

/// Inverse of [`spectral_density_to_occupation`].
pub fn occupation_to_spectral_density(n: f64, omega: Frequency) -> f64 {
    HBAR * omega.0.powi(3) * n / (PI * PI * C.powi(3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    Natural,
    #[default]
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub mode: UnitMode,
    /// Reference angular frequency in rad/s; the natural unit of energy is ħ·omega_ref.
    pub omega_ref: f64,
}

impl UnitSystem {
    pub fn new(mode: UnitMode, omega_ref: Frequency) -> Result<Self> {
        if !(omega_ref.0 > 0.0) || !omega_ref.0.is_finite() {
            return domain("reference frequency must be positive");
        }
        Ok(Self {
            mode,
            omega_ref: omega_ref.0,
        })
    }

    pub fn from_ev(mode: UnitMode, energy_ev: f64) -> Result<Self> {
        Self::new(mode, ev_to_angular(energy_ev)?)
    }

    pub fn hbar(&self) -> f64 {
        HBAR
    }
    pub fn c(&self) -> f64 {
        C
    }
    pub fn k_b(&self) -> f64 {
        K_B
    }
    pub fn dipole_unit(&self) -> f64 {
        EA0
    }

    pub fn frequency_to_natural(&self, omega: Frequency) -> f64 {
        omega.0 / self.omega_ref
    }
    pub fn frequency_to_si(&self, w: f64) -> Frequency {
        Frequency(w * self.omega_ref)
    }

    fn length_unit(&self) -> f64 {
        C / self.omega_ref
    }
    pub fn length_to_natural(&self, metres: f64) -> f64 {
        metres / self.length_unit()
    }
    pub fn length_to_si(&self, r: f64) -> f64 {
        r * self.length_unit()
    }

    fn energy_unit(&self) -> f64 {
        HBAR * self.omega_ref
    }
    pub fn energy_to_natural(&self, joules: f64) -> f64 {
        joules / self.energy_unit()
    }
    pub fn energy_to_si(&self, u: f64) -> f64 {
        u * self.energy_unit()
    }

    fn force_unit(&self) -> f64 {
        HBAR * self.omega_ref * self.omega_ref / C
    }
    pub fn force_to_natural(&self, newtons: f64) -> f64 {
        newtons / self.force_unit()
    }
    pub fn force_to_si(&self, f: f64) -> f64 {
        f * self.force_unit()
    }

    pub fn temperature_to_natural(&self, kelvin: f64) -> f64 {
        K_B * kelvin / self.energy_unit()
    }
    pub fn temperature_to_si(&self, t: f64) -> f64 {
        t * self.energy_unit() / K_B
    }

    // Gaussian d² = d_SI²/(4πε₀), then divided by ħc³/ω_ref².
    fn d2_unit(&self) -> f64 {
        4.0 * PI * EPS0 * HBAR * C.powi(3) / (self.omega_ref * self.omega_ref)
    }
    /// Squared dipole |d|² in (C·m)² to natural units.
    pub fn d2_to_natural(&self, d2_si: f64) -> f64 {
        d2_si / self.d2_unit()
    }
    pub fn d2_to_si(&self, d2: f64) -> f64 {
        d2 * self.d2_unit()
    }

    /// The quantity as it should be written for this unit mode.
    pub fn output_force(&self, f: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => f,
            UnitMode::Si => self.force_to_si(f),
        }
    }
    pub fn output_energy(&self, u: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => u,
            UnitMode::Si => self.energy_to_si(u),
        }
    }
    pub fn output_length(&self, r: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => r,
            UnitMode::Si => self.length_to_si(r),
        }
    }

    pub fn force_label(&self) -> &'static str {
        match self.mode {
            UnitMode::Natural => "hbar*omega_ref^2/c",
            UnitMode::Si => "N",
        }
    }
    pub fn energy_label(&self) -> &'static str {
        match self.mode {
            UnitMode::Natural => "hbar*omega_ref",
            UnitMode::Si => "J",
        }
    }
    pub fn length_label(&self) -> &'static str {
        match self.mode {
            UnitMode::Natural => "c/omega_ref",
            UnitMode::Si => "m",
        }
    }
}

pub fn force_natural_to_si(f: f64, context: &UnitSystem) -> f64 {
    context.force_to_si(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ev_conversion() {
        let w = ev_to_angular(1.59).unwrap();
        assert!(rel(w.0, 2.4157e15) < 1e-4);
        assert!(ev_to_angular(0.0).is_err());
        assert!(ev_to_angular(-1.0).is_err());
        let back = angular_to_ev(ev_to_angular(1.61).unwrap()).unwrap();
        assert!(rel(back, 1.61) < 1e-14);
    }

    #[test]
    fn vacuum_density_is_empty() {
        let n = spectral_density_to_occupation(0.0, Frequency(1e15)).unwrap();
        assert_eq!(n, 0.0);
        assert!(spectral_density_to_occupation(1.0, Frequency(0.0)).is_err());
    }

    #[test]
    fn planck_density_inverts_to_bose() {
        // u(ω) for a blackbody, written out from the Planck law
        let t_k = 6000.0;
        for w in [1e13, 3e14, 2.4e15, 8e15] {
            let x = HBAR * w / (K_B * t_k);
            let u = HBAR * w.powi(3) / (PI * PI * C.powi(3)) / x.exp_m1();
            let n = spectral_density_to_occupation(u, Frequency(w)).unwrap();
            assert!(rel(n, 1.0 / x.exp_m1()) < 1e-12, "{w}");
        }
    }

    #[test]
    fn fig2_density_occupation() {
        // 6e-4 J/m³ spread over 1e-6 ω_A at 1.59 eV
        let w = ev_to_angular(1.59).unwrap();
        let n = spectral_density_to_occupation(6e-4 / (1e-6 * w.0), w).unwrap();
        assert!(rel(n, 44.7) < 1e-2, "{n}");
        let n300 = 1.0 / (HBAR * w.0 / (K_B * 300.0)).exp_m1();
        assert!(n / n300 > 1e20);
    }

    #[test]
    fn round_trips() {
        let u = UnitSystem::from_ev(UnitMode::Si, 1.59).unwrap();
        for x in [1e-30, 3.7, 1e12] {
            assert!(rel(u.length_to_si(u.length_to_natural(x)), x) < 1e-14);
            assert!(rel(u.force_to_si(u.force_to_natural(x)), x) < 1e-14);
            assert!(rel(u.energy_to_si(u.energy_to_natural(x)), x) < 1e-14);
            assert!(rel(u.temperature_to_si(u.temperature_to_natural(x)), x) < 1e-14);
            assert!(rel(u.d2_to_si(u.d2_to_natural(x)), x) < 1e-14);
        }
        assert_eq!(force_natural_to_si(0.0, &u), 0.0);
    }

    #[test]
    fn short_range_force_has_newton_units() {
        // 8|dA|²|dB|²[ω_A N_B − ω_B N_A]/(R⁷(ω_A²−ω_B²)) evaluated twice: once in
        // natural units and converted, once directly in SI with 1/(4πε₀)² restored.
        let u = UnitSystem::from_ev(UnitMode::Si, 1.59).unwrap();
        let (da, db) = (6.0 * EA0, 5.8 * EA0);
        let (wa, wb) = (u.omega_ref, 1.01 * u.omega_ref);
        let (na, nb) = (0.3, 0.2);
        let r: f64 = 2e-8;
        let k = 1.0 / (4.0 * PI * EPS0);
        let f_si = 8.0 * k * k * da * da * db * db * (wa * nb - wb * na)
            / (HBAR * r.powi(7) * (wa * wa - wb * wb));
        let (dan, dbn) = (u.d2_to_natural(da * da), u.d2_to_natural(db * db));
        let (wan, wbn) = (1.0, 1.01);
        let rn = u.length_to_natural(r);
        let f_nat = 8.0 * dan * dbn * (wan * nb - wbn * na) / (rn.powi(7) * (wan * wan - wbn * wbn));
        assert!(rel(force_natural_to_si(f_nat, &u), f_si) < 1e-12);
    }
}
