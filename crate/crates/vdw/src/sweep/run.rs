//! Point-by-point evaluation of a resolved sweep.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Output, ResolvedSweep, SweepVariable};
use crate::asymptotics::{
    f_long_ground, f_short_ground, u_neq_long, u_neq_short, Regime, RegimeReport, RegimeThresholds,
};
use crate::atoms::TwoLevelAtom;
use crate::error::{Result, VdwError};
use crate::fields::PhotonField;
use crate::forces::{force_exact, force_from_potential, interaction_force_exact, net_force_exact, StepSpec};
use crate::potentials::{u_eq_two_atom, u_neq_exact, Target};
use crate::units::UnitMode;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunOptions {
    /// use the closed forms inside their regimes
    pub fast: bool,
    /// worker threads; `None` uses all cores
    pub workers: Option<usize>,
    /// overrides the unit mode of the config
    pub units: Option<UnitMode>,
    pub step: StepSpec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColumnKind {
    Sweep,
    Value { group: usize, output: Output },
    Error { group: usize, output: Output },
    Regime,
    Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
    pub kind: ColumnKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<Cell>,
    /// first failure on this row, if any
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl SweepOutput {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.failure.is_some()).count()
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c.name == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r.cells[i] {
                    Cell::Num(x) => Some(x),
                    _ => None,
                })
                .collect(),
        )
    }
}

fn unit_mode(res: &ResolvedSweep, opts: &RunOptions) -> crate::units::UnitSystem {
    let mut u = res.units;
    if let Some(m) = opts.units {
        u.mode = m;
    }
    u
}

pub fn columns(res: &ResolvedSweep) -> Vec<Column> {
    columns_with(res, &RunOptions::default())
}

fn columns_with(res: &ResolvedSweep, opts: &RunOptions) -> Vec<Column> {
    let units = unit_mode(res, opts);
    let sweep_unit = match res.variable {
        SweepVariable::R => res.config.sweep.r_unit.label(),
        _ => "1",
    };
    let mut cols = vec![Column {
        name: res.variable.name().into(),
        unit: sweep_unit.into(),
        kind: ColumnKind::Sweep,
    }];
    let tagged = res.u_groups.len() > 1;
    for (g, u) in res.u_groups.iter().enumerate() {
        let suffix = match (tagged, u) {
            (true, Some(s)) => format!("@u={s}"),
            _ => String::new(),
        };
        for &o in res.config.outputs.iter().filter(|o| **o != Output::Regime) {
            let unit = if o.is_force() { units.force_label() } else { units.energy_label() };
            cols.push(Column {
                name: format!("{}{suffix}", o.name()),
                unit: unit.into(),
                kind: ColumnKind::Value { group: g, output: o },
            });
            if o.is_force() {
                cols.push(Column {
                    name: format!("{}_err{suffix}", o.name()),
                    unit: unit.into(),
                    kind: ColumnKind::Error { group: g, output: o },
                });
            }
        }
    }
    if res.config.outputs.contains(&Output::Regime) {
        cols.push(Column {
            name: "regime".into(),
            unit: "-".into(),
            kind: ColumnKind::Regime,
        });
    }
    cols.push(Column {
        name: "status".into(),
        unit: "-".into(),
        kind: ColumnKind::Status,
    });
    cols
}

struct Point<'a> {
    a: &'a TwoLevelAtom,
    b: &'a TwoLevelAtom,
    field: &'a PhotonField,
    r: f64,
    t_eq: Option<f64>,
    fast: bool,
    th: &'a RegimeThresholds,
    step: &'a StepSpec,
}

impl Point<'_> {
    fn regime(&self) -> Regime {
        RegimeReport::new(self.a.omega0, self.b.omega0, self.r, self.th).regime
    }

    fn fast_potential(&self, target: Target) -> Option<f64> {
        if !self.fast {
            return None;
        }
        let (a, b, f, r, th) = (self.a, self.b, self.field, self.r, self.th);
        match self.regime() {
            Regime::Short => u_neq_short(target, a, b, f, r, th).ok(),
            Regime::Long => u_neq_long(target, a, b, f, r, th).ok(),
            Regime::Intermediate => None,
        }
    }

    fn fast_forces(&self) -> Option<(f64, f64)> {
        if !self.fast {
            return None;
        }
        let (a, b, f, r, th) = (self.a, self.b, self.field, self.r, self.th);
        match self.regime() {
            Regime::Short => f_short_ground(a, b, f, r, th).ok(),
            Regime::Long => Some((
                f_long_ground(Target::A, a, b, f, r, th).ok()?,
                f_long_ground(Target::B, a, b, f, r, th).ok()?,
            )),
            Regime::Intermediate => None,
        }
    }

    fn u_eq(&self) -> Result<f64> {
        match self.t_eq {
            Some(t) => u_eq_two_atom(self.a, self.b, t, self.r),
            None => Ok(0.0),
        }
    }

    /// −dU_eq/dR, the equilibrium force on A; B feels the opposite.
    fn f_eq(&self) -> Result<(f64, f64)> {
        let Some(t) = self.t_eq else { return Ok((0.0, 0.0)) };
        let w = self.a.omega0.max(self.b.omega0);
        let d = force_from_potential(Target::A, |r| u_eq_two_atom(self.a, self.b, t, r), self.r, w, self.step)?;
        Ok((d.value, d.error))
    }

    fn potential(&self, target: Target) -> Result<f64> {
        let neq = match self.fast_potential(target) {
            Some(u) => u,
            None => u_neq_exact(target, self.a, self.b, self.field, self.r)?,
        };
        Ok(neq + self.u_eq()?)
    }

    /// (value, error estimate) of a force column.
    fn force(&self, out: Output) -> Result<(f64, f64)> {
        if let Some((fa, fb)) = self.fast_forces() {
            let (fe, ee) = self.f_eq()?;
            return Ok(match out {
                Output::FARho => (fa + fe, ee),
                Output::FBRho => (fb - fe, ee),
                Output::FNet => (0.5 * (fa + fb), 0.0),
                _ => (0.5 * (fa - fb) + fe, ee),
            });
        }
        let (a, b, f, r, s) = (self.a, self.b, self.field, self.r, self.step);
        let d = match out {
            Output::FARho => force_exact(Target::A, a, b, f, self.t_eq, r, s)?,
            Output::FBRho => force_exact(Target::B, a, b, f, self.t_eq, r, s)?,
            Output::FNet => net_force_exact(a, b, f, r, s)?,
            _ => interaction_force_exact(a, b, f, self.t_eq, r, s)?,
        };
        Ok((d.value, d.error))
    }
}

fn short_message(e: &VdwError) -> String {
    e.to_string().replace([',', '\n', '\r'], ";").replace('"', "'")
}

fn eval_row(res: &ResolvedSweep, cols: &[Column], v: f64, opts: &RunOptions) -> Row {
    let units = unit_mode(res, opts);
    let mut failure: Option<String> = None;
    let (r, omega_b, u_swept) = match res.variable {
        SweepVariable::R => (res.r_natural(v), res.atom_b.omega0, None),
        SweepVariable::OmegaBRatio => (res.fixed_r.unwrap_or(f64::NAN), v, None),
        SweepVariable::URatio => (res.fixed_r.unwrap_or(f64::NAN), res.atom_b.omega0, Some(v)),
    };
    let atom_b = TwoLevelAtom {
        omega0: omega_b,
        ..res.atom_b
    }
    .validated();

    let mut groups: Vec<Result<PhotonField>> = Vec::with_capacity(res.u_groups.len());
    for u in &res.u_groups {
        groups.push(res.field.at(omega_b, u.or(u_swept), &res.units));
    }
    let th = res.thresholds;
    let mut cache: Vec<Option<Result<(f64, f64)>>> = vec![None; cols.len()];

    let mut cells = Vec::with_capacity(cols.len());
    for (i, col) in cols.iter().enumerate() {
        let cell = match col.kind {
            ColumnKind::Sweep => Cell::Num(v),
            ColumnKind::Regime => Cell::Text(RegimeReport::new(res.atom_a.omega0, omega_b, r, &th).regime.as_str().into()),
            ColumnKind::Status => Cell::Empty,
            ColumnKind::Value { group, output } | ColumnKind::Error { group, output } => {
                let value_col = match col.kind {
                    ColumnKind::Error { .. } => i - 1,
                    _ => i,
                };
                if cache[value_col].is_none() {
                    let computed = (|| -> Result<(f64, f64)> {
                        let b = atom_b.as_ref().map_err(Clone::clone)?;
                        let field = groups[group].as_ref().map_err(Clone::clone)?;
                        let p = Point {
                            a: &res.atom_a,
                            b,
                            field,
                            r,
                            t_eq: res.config.include_equilibrium.then(|| field.temperature()),
                            fast: opts.fast,
                            th: &th,
                            step: &opts.step,
                        };
                        let (x, e) = match output {
                            Output::UA => (units.output_energy(p.potential(Target::A)?), 0.0),
                            Output::UB => (units.output_energy(p.potential(Target::B)?), 0.0),
                            _ => {
                                let (x, e) = p.force(output)?;
                                (units.output_force(x), units.output_force(e))
                            }
                        };
                        if !x.is_finite() || !e.is_finite() {
                            return Err(VdwError::Singularity(format!("{} is not finite", output.name())));
                        }
                        Ok((x, e))
                    })();
                    cache[value_col] = Some(computed);
                }
                match cache[value_col].as_ref().unwrap() {
                    Ok((x, e)) => Cell::Num(if matches!(col.kind, ColumnKind::Error { .. }) { *e } else { *x }),
                    Err(err) => {
                        failure.get_or_insert_with(|| format!("{}: {}", col.name, short_message(err)));
                        Cell::Empty
                    }
                }
            }
        };
        cells.push(cell);
    }
    if let Some(last) = cells.last_mut() {
        *last = Cell::Text(match &failure {
            Some(m) => format!("failed: {m}"),
            None => "ok".into(),
        });
    }
    Row { cells, failure }
}

/// Evaluates every point; failures are recorded on their rows and the run
/// continues. Rows come back in sweep order regardless of the worker count.
pub fn run_sweep(res: &ResolvedSweep, opts: &RunOptions) -> Result<SweepOutput> {
    let cols = columns_with(res, opts);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.unwrap_or(0))
        .build()
        .map_err(|e| VdwError::Config(format!("thread pool: {e}")))?;
    let rows: Vec<Row> = pool.install(|| {
        res.values
            .par_iter()
            .map(|&v| eval_row(res, &cols, v, opts))
            .collect()
    });
    for (k, row) in rows.iter().enumerate() {
        if let Some(m) = &row.failure {
            log::warn!("row {k}: {m}");
        }
    }
    Ok(SweepOutput { columns: cols, rows })
}
