//! Two-level atoms and their isotropically averaged polarisability.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{domain, Result, VdwError};
use crate::units::{ev_to_angular, UnitSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomState {
    Ground,
    Excited,
}

impl AtomState {
    fn sign(self) -> f64 {
        match self {
            AtomState::Ground => 1.0,
            AtomState::Excited => -1.0,
        }
    }
}

/// A two-level atom in natural units. Dipole products are isotropic,
/// d^ν d^ν' = δ_νν' |d|²/3, so every response function is a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelAtom {
    pub omega0: f64,
    pub d2: f64,
    pub p_g: f64,
    pub p_e: f64,
    pub gamma: f64,
}

impl TwoLevelAtom {
    /// Ground-state atom with zero linewidth.
    pub fn new(omega0: f64, d2: f64) -> Result<Self> {
        Self {
            omega0,
            d2,
            p_g: 1.0,
            p_e: 0.0,
            gamma: 0.0,
        }
        .validated()
    }

    pub fn with_excited_population(mut self, p_e: f64) -> Result<Self> {
        self.p_e = p_e;
        self.p_g = 1.0 - p_e;
        self.validated()
    }

    pub fn excited(self) -> Result<Self> {
        self.with_excited_population(1.0)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = gamma;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return domain(format!("transition frequency must be positive, got {}", self.omega0));
        }
        if !(self.d2 > 0.0 && self.d2.is_finite()) {
            return domain(format!("|d|^2 must be positive, got {}", self.d2));
        }
        let in_unit = |p: f64| (0.0..=1.0).contains(&p);
        if !in_unit(self.p_g) || !in_unit(self.p_e) || (self.p_g + self.p_e - 1.0).abs() > 1e-12 {
            return domain(format!(
                "populations must lie in [0,1] and sum to 1, got p_g = {}, p_e = {}",
                self.p_g, self.p_e
            ));
        }
        if !(self.gamma >= 0.0) {
            return domain(format!("linewidth must be non-negative, got {}", self.gamma));
        }
        if self.gamma > 0.01 * self.omega0 {
            log::warn!(
                "linewidth {} exceeds 1% of the transition frequency {}",
                self.gamma,
                self.omega0
            );
        }
        Ok(self)
    }

    /// p_g − p_e, the weight of the ground-state response in a mixed state.
    pub fn inversion(&self) -> f64 {
        self.p_g - self.p_e
    }

    /// Ground-state polarisability continued to complex frequency z.
    pub fn alpha_ground_at(&self, z: Complex64) -> Complex64 {
        let w0 = self.omega0;
        (self.d2 / 3.0) * (1.0 / (w0 - z) + 1.0 / (w0 + z))
    }

    /// Population-averaged response p_g α_g + p_e α_e at ω + iη.
    pub fn alpha(&self, omega: f64, eta: f64) -> Complex64 {
        self.inversion() * self.alpha_ground_at(Complex64::new(omega, eta))
    }

    /// Population-averaged response on the imaginary axis.
    pub fn alpha_imag(&self, xi: f64) -> f64 {
        self.inversion() * ground_imag(self, xi)
    }
}

fn ground_imag(atom: &TwoLevelAtom, xi: f64) -> f64 {
    2.0 * atom.d2 * atom.omega0 / (3.0 * (atom.omega0 * atom.omega0 + xi * xi))
}

/// α(ω) = (|d|²/3)[1/(±ω₀ − ω − iη) + 1/(±ω₀ + ω + iη)], upper sign for the ground state.
pub fn polarizability(atom: &TwoLevelAtom, state: AtomState, omega: f64, eta: f64) -> Result<Complex64> {
    if !(omega >= 0.0) {
        return domain(format!("polarizability needs omega >= 0, got {omega}"));
    }
    if !(eta >= 0.0) {
        return domain(format!("broadening must be non-negative, got {eta}"));
    }
    if eta == 0.0 && (omega - atom.omega0).abs() < 1e-12 * atom.omega0 {
        return Err(VdwError::Singularity(format!(
            "unbroadened polarizability evaluated on resonance omega = {omega}"
        )));
    }
    Ok(state.sign() * atom.alpha_ground_at(Complex64::new(omega, eta)))
}

/// α(iξ) = ±(2/3)|d|²ω₀/(ω₀² + ξ²).
pub fn polarizability_imagfreq(atom: &TwoLevelAtom, state: AtomState, xi: f64) -> f64 {
    state.sign() * ground_imag(atom, xi)
}

/// N·p_g − (N+1)·p_e.
pub fn population_factor(atom: &TwoLevelAtom, n_at_omega0: f64) -> f64 {
    n_at_omega0 * atom.p_g - (n_at_omega0 + 1.0) * atom.p_e
}

/// Thermal populations (p_g, p_e) of a two-level system at temperature T.
pub fn boltzmann_populations(omega0: f64, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return domain(format!("temperature must be positive, got {t}"));
    }
    let x = omega0 / t;
    let p_e = 1.0 / (x.exp() + 1.0);
    let p_g = 1.0 / (1.0 + (-x).exp());
    Ok((p_g, p_e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomPreset {
    #[serde(skip_deserializing)]
    pub name: String,
    pub omega_ev: f64,
    pub dipole_cm: f64,
    pub gamma_per_s: f64,
}

impl AtomPreset {
    /// Ground-state atom in the natural units of `units`.
    pub fn to_atom(&self, units: &UnitSystem) -> Result<TwoLevelAtom> {
        let w = units.frequency_to_natural(ev_to_angular(self.omega_ev)?);
        let gamma = self.gamma_per_s / units.omega_ref;
        TwoLevelAtom::new(w, units.d2_to_natural(self.dipole_cm * self.dipole_cm))?.with_gamma(gamma)
    }
}

const ATOM_DATA: &str = include_str!("../data/atoms.toml");

pub fn atom_presets() -> Vec<AtomPreset> {
    let table: BTreeMap<String, AtomPreset> =
        toml::from_str(ATOM_DATA).expect("bundled atom data parses");
    table
        .into_iter()
        .map(|(name, mut p)| {
            p.name = name;
            p
        })
        .collect()
}

pub fn find_preset(name: &str) -> Result<AtomPreset> {
    let all = atom_presets();
    all.iter().find(|p| p.name == name).cloned().ok_or_else(|| {
        let names: Vec<_> = all.iter().map(|p| p.name.as_str()).collect();
        VdwError::Config(format!(
            "unknown atom preset '{name}'; available: {}",
            names.join(", ")
        ))
    })
}
