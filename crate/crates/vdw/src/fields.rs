//! Isotropic unpolarised photon fields, described by their occupation N(ω).

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, VdwError};
use crate::units::{ev_to_angular, spectral_density_to_occupation, UnitSystem};

/// Linear interpolation of (ω, N) samples; N = 0 outside the sampled range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedSpectrum {
    omega: Vec<f64>,
    n: Vec<f64>,
}

impl TabulatedSpectrum {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return domain("a tabulated spectrum needs at least two samples");
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return domain(format!(
                    "tabulated frequencies must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                ));
            }
        }
        if let Some(&(w, n)) = samples.iter().find(|(w, n)| !(*w >= 0.0) || !(*n >= 0.0) || !n.is_finite()) {
            return domain(format!("bad sample ({w}, {n}): need omega >= 0 and finite N >= 0"));
        }
        let (omega, n) = samples.into_iter().unzip();
        Ok(Self { omega, n })
    }

    /// Two-column text, eV in the first column. A header line
    /// `# columns: omega_ev N` or `# columns: omega_ev U_omega` says what the
    /// second column is; U_omega is a spectral energy density in J·s/m³.
    pub fn from_text(text: &str, units: &UnitSystem) -> Result<Self> {
        let mut density = None;
        let mut samples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(cols) = rest.trim().strip_prefix("columns:") {
                    let cols: Vec<_> = cols.split_whitespace().collect();
                    density = match cols.as_slice() {
                        ["omega_ev", "N"] => Some(false),
                        ["omega_ev", "U_omega"] => Some(true),
                        _ => {
                            return Err(VdwError::Config(format!(
                                "line {}: unknown column tag '{}'",
                                lineno + 1,
                                cols.join(" ")
                            )))
                        }
                    };
                }
                continue;
            }
            let Some(is_density) = density else {
                return Err(VdwError::Config(format!(
                    "line {}: data before the '# columns:' header",
                    lineno + 1
                )));
            };
            let fields: Vec<_> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| VdwError::Config(format!("line {}: '{s}': {e}", lineno + 1)))
            };
            if fields.len() != 2 {
                return Err(VdwError::Config(format!(
                    "line {}: expected two columns, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let (ev, value) = (parse(fields[0])?, parse(fields[1])?);
            let w_si = ev_to_angular(ev)?;
            let n = if is_density {
                spectral_density_to_occupation(value, w_si)?
            } else {
                value
            };
            samples.push((units.frequency_to_natural(w_si), n));
        }
        Self::new(samples)
    }

    fn eval(&self, w: f64) -> f64 {
        let last = self.omega.len() - 1;
        if w < self.omega[0] || w > self.omega[last] {
            return 0.0;
        }
        let i = self.omega.partition_point(|&x| x <= w).clamp(1, last);
        let (w0, w1) = (self.omega[i - 1], self.omega[i]);
        let t = (w - w0) / (w1 - w0);
        self.n[i - 1] + t * (self.n[i] - self.n[i - 1])
    }
}

/// Two flat-topped peaks of width `width` centred on `omega_a` and `omega_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPeakSpectrum {
    pub omega_a: f64,
    pub omega_b: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub width: f64,
}

impl TwoPeakSpectrum {
    pub fn new(omega_a: f64, omega_b: f64, n_a: f64, n_b: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return domain("peak width must be positive");
        }
        if !(omega_a - width / 2.0 >= 0.0 && omega_b - width / 2.0 >= 0.0) {
            return domain("peaks must lie at positive frequency");
        }
        if !((omega_a - omega_b).abs() > width) {
            return domain(format!(
                "peaks at {omega_a} and {omega_b} overlap for width {width}"
            ));
        }
        if !(n_a >= 0.0 && n_b >= 0.0) {
            return domain("peak occupations must be non-negative");
        }
        Ok(Self {
            omega_a,
            omega_b,
            n_a,
            n_b,
            width,
        })
    }

    /// Peaks holding total energy densities `u_a`, `u_b` (J/m³), each spread
    /// evenly over `width`. Frequencies are natural.
    pub fn from_energy_density(
        omega_a: f64,
        omega_b: f64,
        u_a: f64,
        u_b: f64,
        width: f64,
        units: &UnitSystem,
    ) -> Result<Self> {
        if !(width > 0.0) {
            return domain("peak width must be positive");
        }
        let dw = units.frequency_to_si(width).0;
        let n_a = spectral_density_to_occupation(u_a / dw, units.frequency_to_si(omega_a))?;
        let n_b = spectral_density_to_occupation(u_b / dw, units.frequency_to_si(omega_b))?;
        Self::new(omega_a, omega_b, n_a, n_b, width)
    }

    fn eval(&self, w: f64) -> f64 {
        let h = self.width / 2.0;
        if (w - self.omega_a).abs() <= h {
            self.n_a
        } else if (w - self.omega_b).abs() <= h {
            self.n_b
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PhotonField {
    Vacuum,
    Thermal { t: f64 },
    Tabulated(TabulatedSpectrum),
    TwoPeak(TwoPeakSpectrum),
}

impl PhotonField {
    pub fn thermal(t: f64) -> Result<Self> {
        if !(t >= 0.0 && t.is_finite()) {
            return domain(format!("temperature must be finite and non-negative, got {t}"));
        }
        Ok(PhotonField::Thermal { t })
    }

    pub fn occupation(&self, omega: f64) -> f64 {
        occupation(self, omega)
    }

    /// Temperature of the equilibrium part: T for a thermal field, zero otherwise.
    pub fn temperature(&self) -> f64 {
        match self {
            PhotonField::Thermal { t } => *t,
            _ => 0.0,
        }
    }

    /// Frequency above which N(ω) is negligible.
    pub fn cutoff(&self) -> f64 {
        match self {
            PhotonField::Vacuum => 0.0,
            PhotonField::Thermal { t } => 45.0 * t,
            PhotonField::Tabulated(s) => *s.omega.last().unwrap(),
            PhotonField::TwoPeak(p) => p.omega_a.max(p.omega_b) + p.width / 2.0,
        }
    }

    /// Points where N(ω) has kinks or jumps.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            PhotonField::Vacuum | PhotonField::Thermal { .. } => Vec::new(),
            PhotonField::Tabulated(s) => s.omega.clone(),
            PhotonField::TwoPeak(p) => {
                let h = p.width / 2.0;
                vec![p.omega_a - h, p.omega_a + h, p.omega_b - h, p.omega_b + h]
            }
        }
    }
}

pub fn occupation(field: &PhotonField, omega: f64) -> f64 {
    match field {
        PhotonField::Vacuum => 0.0,
        PhotonField::Thermal { t } => {
            if *t == 0.0 {
                0.0
            } else {
                1.0 / (omega / t).exp_m1()
            }
        }
        PhotonField::Tabulated(s) => s.eval(omega),
        PhotonField::TwoPeak(p) => p.eval(omega),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadratureSpec};
    use crate::units::{UnitMode, C, HBAR};
    use proptest::prelude::*;
    use std::f64::consts::{E, PI};

    fn units() -> UnitSystem {
        UnitSystem::from_ev(UnitMode::Si, 1.59).unwrap()
    }

    #[test]
    fn basic_occupations() {
        assert_eq!(occupation(&PhotonField::Vacuum, 2.0), 0.0);
        let th = PhotonField::thermal(0.7).unwrap();
        assert!((occupation(&th, 0.7) - 1.0 / (E - 1.0)).abs() < 1e-15);
        assert!((occupation(&th, 0.7) - 0.58198).abs() < 1e-5);
        assert_eq!(occupation(&PhotonField::thermal(0.0).unwrap(), 1.0), 0.0);
    }

    #[test]
    fn two_peak_with_empty_b() {
        let u = units();
        let p = TwoPeakSpectrum::from_energy_density(1.0, 1.0 - 1e-4, 6e-4, 0.0, 1e-6, &u).unwrap();
        let f = PhotonField::TwoPeak(p);
        assert_eq!(f.occupation(1.0 - 1e-4), 0.0);
        assert!(f.occupation(1.0) > 40.0);
        assert_eq!(f.occupation(1.0 + 1e-6), 0.0);
    }

    #[test]
    fn two_peak_overlap_rejected() {
        assert!(TwoPeakSpectrum::new(1.0, 1.0 + 5e-7, 1.0, 1.0, 1e-6).is_err());
    }

    #[test]
    fn two_peak_energy_integrates_back() {
        let u = units();
        let (ua, ub) = (2.5e-4, 3.5e-4);
        let p = TwoPeakSpectrum::from_energy_density(1.0, 1.0001, ua, ub, 1e-6, &u).unwrap();
        let f = PhotonField::TwoPeak(p);
        // ∫ ħω³N/(π²c³) dω over each band, in SI
        let w_ref = u.omega_ref;
        let spec = QuadratureSpec::default();
        let mut total = 0.0;
        for c in [p.omega_a, p.omega_b] {
            let (lo, hi) = (c - p.width / 2.0, c + p.width / 2.0);
            let inner = (lo + hi) / 2.0;
            let band = integrate(
                |w: f64| {
                    let ws = w * w_ref;
                    HBAR * ws.powi(3) * f.occupation(w) / (PI * PI * C.powi(3))
                },
                &[lo, inner, hi],
                &spec,
            )
            .unwrap();
            total += band.value * w_ref;
        }
        // band edges c ± w/2 carry round-off of order ε/w relative to the width
        assert!(((total - (ua + ub)) / (ua + ub)).abs() < 1e-9, "{total}");
    }

    #[test]
    fn tabulated_from_text() {
        let u = units();
        let text = "# a spectrum\n# columns: omega_ev N\n1.5 0.0\n1.59, 2.0\n1.7 0.0\n";
        let s = TabulatedSpectrum::from_text(text, &u).unwrap();
        let f = PhotonField::Tabulated(s);
        assert!((f.occupation(1.0) - 2.0).abs() < 1e-9);
        assert_eq!(f.occupation(2.0), 0.0);
        let mid = (1.0 + 1.7 / 1.59) / 2.0;
        assert!((f.occupation(mid) - 1.0).abs() < 1e-9);

        let dens = "# columns: omega_ev U_omega\n1.5 0\n1.59 1e-20\n";
        let s = TabulatedSpectrum::from_text(dens, &u).unwrap();
        let want = spectral_density_to_occupation(1e-20, ev_to_angular(1.59).unwrap()).unwrap();
        assert!((PhotonField::Tabulated(s).occupation(1.0) / want - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tabulated_rejects_bad_grids() {
        assert!(TabulatedSpectrum::new(vec![(1.0, 0.0), (0.5, 1.0)]).is_err());
        assert!(TabulatedSpectrum::new(vec![(1.0, 0.0), (1.0, 1.0)]).is_err());
        let u = units();
        assert!(TabulatedSpectrum::from_text("1.0 2.0\n", &u).is_err());
        assert!(TabulatedSpectrum::from_text("# columns: omega_ev X\n", &u).is_err());
    }

    proptest! {
        #[test]
        fn thermal_is_decreasing(t in 1e-2f64..10.0, w in 1e-3f64..10.0, dw in 1e-3f64..1.0) {
            let f = PhotonField::thermal(t).unwrap();
            prop_assert!(f.occupation(w) > f.occupation(w + dw));
        }

        #[test]
        fn occupations_non_negative(w in 0.0f64..5.0, t in 0.0f64..3.0) {
            let p = TwoPeakSpectrum::new(1.0, 1.2, 3.0, 0.5, 0.01).unwrap();
            let tab = TabulatedSpectrum::new(vec![(0.5, 0.0), (1.0, 4.0), (2.0, 1.0)]).unwrap();
            for f in [PhotonField::Vacuum, PhotonField::thermal(t).unwrap(),
                      PhotonField::TwoPeak(p), PhotonField::Tabulated(tab)] {
                prop_assert!(f.occupation(w) >= 0.0);
            }
        }
    }
}
