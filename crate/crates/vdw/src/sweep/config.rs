//! Sweep configuration: a TOML file with the two atoms, the photon field, the
//! swept variable and the requested output columns.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::asymptotics::RegimeThresholds;
use crate::atoms::{find_preset, TwoLevelAtom};
use crate::error::{Result, VdwError};
use crate::fields::{PhotonField, TabulatedSpectrum, TwoPeakSpectrum};
use crate::units::{angular_to_ev, ev_to_angular, UnitMode, UnitSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig1e,
    Fig1f,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig2e,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Custom,
}

impl Scenario {
    pub fn name(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }
}

/// One atom, from a named preset, explicit values, or a preset with overrides.
/// `detuning` and `omega_ratio` are only meaningful for atom B and place ω_B
/// relative to ω_A.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub preset: Option<String>,
    pub omega_ev: Option<f64>,
    pub dipole_cm: Option<f64>,
    pub gamma_per_s: Option<f64>,
    /// (ω_A − ω_B)/ω_A
    pub detuning: Option<f64>,
    /// ω_B/ω_A
    pub omega_ratio: Option<f64>,
    #[serde(default)]
    pub excited_population: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Vacuum,
    Thermal {
        /// k_B T/(ħω_A)
        temperature_ratio: Option<f64>,
        temperature_k: Option<f64>,
    },
    /// Two flat peaks of width `width_ratio`·ω_A centred on ω_A and ω_B.
    #[serde(rename = "twopeak")]
    TwoPeak {
        /// U(ω_A) + U(ω_B) in J/m³
        total_energy_density: f64,
        /// U(ω_A)/U for a single curve
        u_ratio: Option<f64>,
        /// several U(ω_A)/U values, one column group each
        u_ratios: Option<Vec<f64>>,
        #[serde(default = "default_width")]
        width_ratio: f64,
    },
    /// Two-column spectrum file, relative to the config file.
    Tabulated { path: PathBuf },
}

fn default_width() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    R,
    #[serde(rename = "omega_b_ratio")]
    OmegaBRatio,
    #[serde(rename = "u_ratio")]
    URatio,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::R => "R",
            SweepVariable::OmegaBRatio => "omega_b_ratio",
            SweepVariable::URatio => "u_ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthUnit {
    /// λ_A = 2πc/ω_A
    #[default]
    Lambda,
    /// c/ω_A
    Natural,
    M,
}

impl LengthUnit {
    pub fn label(self) -> &'static str {
        match self {
            LengthUnit::Lambda => "lambda_A",
            LengthUnit::Natural => "c/omega_A",
            LengthUnit::M => "m",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub variable: SweepVariable,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
    /// unit of R values, both swept and fixed
    #[serde(default)]
    pub r_unit: LengthUnit,
    /// separation for sweeps over other variables
    pub fixed_r: Option<f64>,
}

impl RangeSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    return self.max;
                }
                let s = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Lin => self.min + (self.max - self.min) * s,
                    Spacing::Log => self.min * (self.max / self.min).powf(s),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Output {
    #[serde(rename = "F_A_rho")]
    FARho,
    #[serde(rename = "F_B_rho")]
    FBRho,
    /// (F_A + F_B)/2
    #[serde(rename = "F_net")]
    FNet,
    /// (F_A − F_B)/2
    #[serde(rename = "F_int")]
    FInt,
    #[serde(rename = "U_A")]
    UA,
    #[serde(rename = "U_B")]
    UB,
    #[serde(rename = "regime")]
    Regime,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Output::FARho => "F_A_rho",
            Output::FBRho => "F_B_rho",
            Output::FNet => "F_net",
            Output::FInt => "F_int",
            Output::UA => "U_A",
            Output::UB => "U_B",
            Output::Regime => "regime",
        }
    }

    pub fn is_force(self) -> bool {
        matches!(self, Output::FARho | Output::FBRho | Output::FNet | Output::FInt)
    }
}

fn default_outputs() -> Vec<Output> {
    vec![
        Output::FARho,
        Output::FBRho,
        Output::FNet,
        Output::UA,
        Output::UB,
        Output::Regime,
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub units: UnitMode,
    /// add the equilibrium potential at the field temperature
    #[serde(default)]
    pub include_equilibrium: bool,
    pub atom_a: AtomSpec,
    pub atom_b: AtomSpec,
    pub field: FieldSpec,
    pub sweep: RangeSpec,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
    pub regime: Option<RegimeThresholds>,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| VdwError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| VdwError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| match e {
            VdwError::Config(m) => VdwError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn thresholds(&self) -> RegimeThresholds {
        self.regime.unwrap_or_default()
    }
}

/// Field as a function of ω_B and U(ω_A)/U.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldModel {
    Fixed(PhotonField),
    TwoPeak {
        total_energy_density: f64,
        width: f64,
    },
}

impl FieldModel {
    pub fn at(&self, omega_b: f64, u_ratio: Option<f64>, units: &UnitSystem) -> Result<PhotonField> {
        match self {
            FieldModel::Fixed(f) => Ok(f.clone()),
            FieldModel::TwoPeak {
                total_energy_density: u,
                width,
            } => {
                let s = u_ratio.ok_or_else(|| VdwError::Config("two-peak field without U(omega_A)/U".into()))?;
                let p = TwoPeakSpectrum::from_energy_density(1.0, omega_b, s * u, (1.0 - s) * u, *width, units)?;
                Ok(PhotonField::TwoPeak(p))
            }
        }
    }
}

/// Everything a sweep needs, in natural units with ω_ref = ω_A.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedSweep {
    pub config: SweepConfig,
    pub units: UnitSystem,
    pub atom_a: TwoLevelAtom,
    pub atom_b: TwoLevelAtom,
    pub field: FieldModel,
    pub variable: SweepVariable,
    /// swept values as written in the config
    pub values: Vec<f64>,
    pub fixed_r: Option<f64>,
    /// one entry per column group; `None` when the field has no U ratio
    pub u_groups: Vec<Option<f64>>,
    pub thresholds: RegimeThresholds,
}

impl ResolvedSweep {
    /// R in natural units for a value in the config's length unit.
    pub fn r_natural(&self, v: f64) -> f64 {
        to_natural_length(v, self.config.sweep.r_unit, &self.units)
    }

    pub fn lambda_a_m(&self) -> f64 {
        self.units.length_to_si(2.0 * PI)
    }
}

fn to_natural_length(v: f64, unit: LengthUnit, units: &UnitSystem) -> f64 {
    match unit {
        LengthUnit::Lambda => 2.0 * PI * v,
        LengthUnit::Natural => v,
        LengthUnit::M => units.length_to_natural(v),
    }
}

/// Summary printed by `vdw validate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub scenario: String,
    pub description: String,
    pub omega_a_ev: f64,
    pub omega_b_ev: f64,
    pub lambda_a_m: f64,
    /// short regime below this R, in λ_A
    pub short_below_lambda: f64,
    /// long regime above this R, in λ_A
    pub long_above_lambda: f64,
    pub points: usize,
    pub columns: Vec<String>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario: {}", self.scenario)?;
        if !self.description.is_empty() {
            writeln!(f, "description: {}", self.description)?;
        }
        writeln!(f, "omega_A: {:.10} eV", self.omega_a_ev)?;
        writeln!(f, "omega_B: {:.10} eV", self.omega_b_ev)?;
        writeln!(f, "lambda_A = 2*pi*c/omega_A: {:.6e} m", self.lambda_a_m)?;
        writeln!(
            f,
            "regimes: short for R < {:.4e} lambda_A, long for R > {:.4e} lambda_A",
            self.short_below_lambda, self.long_above_lambda
        )?;
        writeln!(f, "points: {}", self.points)?;
        write!(f, "columns: {}", self.columns.join(","))
    }
}

fn atom_from_spec(
    label: &str,
    spec: &AtomSpec,
    omega_override: Option<f64>,
    errors: &mut Vec<String>,
) -> Option<(f64, f64, f64)> {
    let preset = match &spec.preset {
        Some(name) => match find_preset(name) {
            Ok(p) => Some(p),
            Err(e) => {
                errors.push(format!("{label}: {}", e.to_string().trim_start_matches("config: ")));
                return None;
            }
        },
        None => None,
    };
    let omega_ev = omega_override
        .or(spec.omega_ev)
        .or(preset.as_ref().map(|p| p.omega_ev));
    let dipole = spec.dipole_cm.or(preset.as_ref().map(|p| p.dipole_cm));
    let gamma = spec
        .gamma_per_s
        .or(preset.as_ref().map(|p| p.gamma_per_s))
        .unwrap_or(0.0);
    let mut ok = true;
    match omega_ev {
        Some(w) if w > 0.0 && w.is_finite() => {}
        Some(w) => {
            errors.push(format!("{label}: omega_ev must be positive, got {w}"));
            ok = false;
        }
        None => {
            errors.push(format!("{label}: needs a preset or omega_ev"));
            ok = false;
        }
    }
    match dipole {
        Some(d) if d > 0.0 && d.is_finite() => {}
        Some(d) => {
            errors.push(format!("{label}: dipole_cm must be positive, got {d}"));
            ok = false;
        }
        None => {
            errors.push(format!("{label}: needs a preset or dipole_cm"));
            ok = false;
        }
    }
    if !(gamma >= 0.0) {
        errors.push(format!("{label}: gamma_per_s must be non-negative"));
        ok = false;
    }
    if !(0.0..=1.0).contains(&spec.excited_population) {
        errors.push(format!(
            "{label}: excited_population must lie in [0, 1], got {}",
            spec.excited_population
        ));
        ok = false;
    }
    ok.then(|| (omega_ev.unwrap(), dipole.unwrap(), gamma))
}

fn build_atom(omega_ev: f64, dipole_cm: f64, gamma: f64, p_e: f64, units: &UnitSystem) -> Result<TwoLevelAtom> {
    let w = units.frequency_to_natural(ev_to_angular(omega_ev)?);
    TwoLevelAtom::new(w, units.d2_to_natural(dipole_cm * dipole_cm))?
        .with_gamma(gamma / units.omega_ref)?
        .with_excited_population(p_e)
}

fn check_ratio(what: &str, s: f64, errors: &mut Vec<String>) {
    if !(0.0..=1.0).contains(&s) {
        errors.push(format!("{what} must lie in [0, 1], got {s}"));
    }
}

/// Checks the whole configuration and resolves it; every violation found is
/// listed in the returned error.
pub fn resolve(config: &SweepConfig) -> Result<ResolvedSweep> {
    let mut errors = Vec::new();
    let sweep = &config.sweep;
    let th = config.thresholds();

    if sweep.count < 2 {
        errors.push(format!("sweep: range count ≥ 2 required, got {}", sweep.count));
    }
    if !(sweep.min < sweep.max) || !sweep.min.is_finite() || !sweep.max.is_finite() {
        errors.push(format!("sweep: need min < max, got {} and {}", sweep.min, sweep.max));
    }
    if sweep.spacing == Spacing::Log && !(sweep.min > 0.0) {
        errors.push("sweep: log spacing needs min > 0".into());
    }
    if !(th.short > 0.0 && th.short < th.long) {
        errors.push(format!("regime: need 0 < short < long, got {} and {}", th.short, th.long));
    }
    match sweep.variable {
        SweepVariable::R => {
            if !(sweep.min > 0.0) {
                errors.push("sweep: R values must be positive".into());
            }
            if sweep.fixed_r.is_some() {
                errors.push("sweep: fixed_r is only used when R is not swept".into());
            }
        }
        SweepVariable::OmegaBRatio | SweepVariable::URatio => match sweep.fixed_r {
            Some(r) if r > 0.0 && r.is_finite() => {}
            Some(r) => errors.push(format!("sweep: fixed_r must be positive, got {r}")),
            None => errors.push(format!("sweep: fixed_r is required when sweeping {}", sweep.variable.name())),
        },
    }
    if sweep.variable == SweepVariable::OmegaBRatio && !(sweep.min > 0.0) {
        errors.push("sweep: omega_b_ratio values must be positive".into());
    }
    if sweep.variable == SweepVariable::URatio && !(sweep.min >= 0.0 && sweep.max <= 1.0) {
        errors.push("sweep: u_ratio values must lie in [0, 1]".into());
    }

    if config.outputs.is_empty() {
        errors.push("outputs: at least one column is required".into());
    }
    for (i, o) in config.outputs.iter().enumerate() {
        if config.outputs[..i].contains(o) {
            errors.push(format!("outputs: '{}' listed twice", o.name()));
        }
    }

    if config.atom_a.detuning.is_some() || config.atom_a.omega_ratio.is_some() {
        errors.push("atom_a: detuning and omega_ratio belong to atom_b".into());
    }
    let b = &config.atom_b;
    let placed = [b.omega_ev.is_some(), b.detuning.is_some(), b.omega_ratio.is_some()]
        .iter()
        .filter(|&&x| x)
        .count();
    if placed > 1 {
        errors.push("atom_b: give at most one of omega_ev, detuning, omega_ratio".into());
    }

    let a = atom_from_spec("atom_a", &config.atom_a, None, &mut errors);
    let ratio_b = match (b.detuning, b.omega_ratio) {
        (Some(d), _) => Some(1.0 - d),
        (None, Some(r)) => Some(r),
        _ => None,
    };
    if let Some(r) = ratio_b {
        if !(r > 0.0) {
            errors.push(format!("atom_b: omega_B/omega_A must be positive, got {r}"));
        }
    }
    let omega_b_ev = match (&a, ratio_b) {
        (Some((wa, _, _)), Some(r)) => Some(wa * r),
        _ => None,
    };
    let bspec = atom_from_spec("atom_b", b, omega_b_ev, &mut errors);

    if config.include_equilibrium && !matches!(config.field, FieldSpec::Vacuum | FieldSpec::Thermal { .. }) {
        errors.push("include_equilibrium: the equilibrium part is available for vacuum and thermal fields only".into());
    }

    let mut u_groups = vec![None];
    let mut twopeak = None;
    let mut temperature = None;
    let mut tab_path = None;
    match &config.field {
        FieldSpec::Vacuum => {}
        FieldSpec::Thermal {
            temperature_ratio,
            temperature_k,
        } => match (temperature_ratio, temperature_k) {
            (Some(t), None) if *t >= 0.0 && t.is_finite() => temperature = Some((*t, false)),
            (None, Some(t)) if *t >= 0.0 && t.is_finite() => temperature = Some((*t, true)),
            (Some(_), Some(_)) => errors.push("field: give one of temperature_ratio, temperature_k".into()),
            (None, None) => errors.push("field: thermal field needs temperature_ratio or temperature_k".into()),
            _ => errors.push("field: temperature must be finite and non-negative".into()),
        },
        FieldSpec::TwoPeak {
            total_energy_density,
            u_ratio,
            u_ratios,
            width_ratio,
        } => {
            if !(*total_energy_density >= 0.0 && total_energy_density.is_finite()) {
                errors.push("field: total_energy_density must be finite and non-negative".into());
            }
            if !(*width_ratio > 0.0) {
                errors.push("field: width_ratio must be positive".into());
            }
            let swept = sweep.variable == SweepVariable::URatio;
            match (u_ratio, u_ratios, swept) {
                (None, None, true) => {}
                (_, _, true) => errors.push("field: u_ratio is swept, drop u_ratio/u_ratios from the field".into()),
                (Some(s), None, false) => {
                    check_ratio("field: u_ratio", *s, &mut errors);
                    u_groups = vec![Some(*s)];
                }
                (None, Some(list), false) => {
                    if list.is_empty() {
                        errors.push("field: u_ratios is empty".into());
                    }
                    for &s in list {
                        check_ratio("field: u_ratios entry", s, &mut errors);
                    }
                    u_groups = list.iter().map(|&s| Some(s)).collect();
                }
                (Some(_), Some(_), false) => errors.push("field: give one of u_ratio, u_ratios".into()),
                (None, None, false) => errors.push("field: two-peak field needs u_ratio or u_ratios".into()),
            }
            twopeak = Some((*total_energy_density, *width_ratio));
        }
        FieldSpec::Tabulated { path } => {
            let full = match &config.base_dir {
                Some(d) => d.join(path),
                None => path.clone(),
            };
            match std::fs::read_to_string(&full) {
                Ok(text) => tab_path = Some(text),
                Err(e) => errors.push(format!("field: {}: {e}", full.display())),
            }
        }
    }
    if sweep.variable == SweepVariable::URatio && twopeak.is_none() {
        errors.push("sweep: u_ratio can only be swept with a two-peak field".into());
    }

    let (Some((wa_ev, da, ga)), Some((wb_ev, db, gb))) = (a, bspec) else {
        return Err(VdwError::Config(errors.join("\n")));
    };
    let units = match UnitSystem::from_ev(config.units, wa_ev) {
        Ok(u) => u,
        Err(e) => {
            errors.push(e.to_string());
            return Err(VdwError::Config(errors.join("\n")));
        }
    };
    let atom_a = build_atom(wa_ev, da, ga, config.atom_a.excited_population, &units);
    let atom_b = build_atom(wb_ev, db, gb, b.excited_population, &units);
    if let Err(e) = &atom_a {
        errors.push(format!("atom_a: {e}"));
    }
    if let Err(e) = &atom_b {
        errors.push(format!("atom_b: {e}"));
    }
    let field = if let Some((u, w)) = twopeak {
        Some(FieldModel::TwoPeak {
            total_energy_density: u,
            width: w,
        })
    } else if let Some(text) = tab_path {
        match TabulatedSpectrum::from_text(&text, &units) {
            Ok(s) => Some(FieldModel::Fixed(PhotonField::Tabulated(s))),
            Err(e) => {
                errors.push(format!("field: {e}"));
                None
            }
        }
    } else if let Some((t, kelvin)) = temperature {
        let t = if kelvin { units.temperature_to_natural(t) } else { t };
        Some(FieldModel::Fixed(PhotonField::Thermal { t }))
    } else {
        Some(FieldModel::Fixed(PhotonField::Vacuum))
    };

    if let (Ok(a), Ok(b)) = (&atom_a, &atom_b) {
        if sweep.variable != SweepVariable::OmegaBRatio {
            if a.omega0 == b.omega0 {
                errors.push("atoms: omega_A = omega_B is a pole of the closed forms; detune the atoms".into());
            }
            if let Some(FieldModel::TwoPeak { width, .. }) = &field {
                if (a.omega0 - b.omega0).abs() <= *width {
                    errors.push("field: the two peaks overlap; reduce width_ratio or increase the detuning".into());
                }
            }
        } else if sweep.count >= 2 && sweep.values().contains(&1.0) {
            errors.push("sweep: omega_b_ratio = 1 is a pole of the closed forms; use an even count or shift the range".into());
        }
    }

    if !errors.is_empty() {
        return Err(VdwError::Config(errors.join("\n")));
    }
    let fixed_r = sweep.fixed_r.map(|v| to_natural_length(v, sweep.r_unit, &units));
    Ok(ResolvedSweep {
        config: config.clone(),
        units,
        atom_a: atom_a?,
        atom_b: atom_b?,
        field: field.expect("field resolved when no errors"),
        variable: sweep.variable,
        values: sweep.values(),
        fixed_r,
        u_groups,
        thresholds: th,
    })
}

/// Full validation without computation.
pub fn validate_config(path: &Path) -> Result<ValidationReport> {
    let cfg = SweepConfig::from_file(path)?;
    report(&resolve(&cfg)?)
}

pub fn report(res: &ResolvedSweep) -> Result<ValidationReport> {
    let (wa, wb) = (res.atom_a.omega0, res.atom_b.omega0);
    let th = &res.thresholds;
    Ok(ValidationReport {
        scenario: res.config.scenario.name(),
        description: res.config.description.clone(),
        omega_a_ev: angular_to_ev(res.units.frequency_to_si(wa))?,
        omega_b_ev: angular_to_ev(res.units.frequency_to_si(wb))?,
        lambda_a_m: res.lambda_a_m(),
        short_below_lambda: th.short / wa.max(wb) / (2.0 * PI),
        long_above_lambda: th.long / wa.min(wb) / (2.0 * PI),
        points: res.values.len(),
        columns: super::run::columns(res).into_iter().map(|c| c.name).collect(),
    })
}
