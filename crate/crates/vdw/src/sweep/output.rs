//! CSV and manifest writers.
//!
//! The CSV has a header row, then a units row whose first cell is `#units`
//! followed by one unit per column. Numbers carry 17 significant digits.

use std::io::Write;

use serde_json::{json, Value};

use super::config::ResolvedSweep;
use super::run::{Cell, RunOptions, SweepOutput};
use crate::potentials::MATSUBARA_REL_TOL;
use crate::quadrature::QuadratureSpec;
use crate::units::{A0, C, E_CHARGE, EPS0, HBAR, K_B};

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(out: &SweepOutput, mut w: W) -> std::io::Result<()> {
    let names: Vec<_> = out.columns.iter().map(|c| c.name.as_str()).collect();
    writeln!(w, "{}", names.join(","))?;
    let units: Vec<_> = out.columns.iter().map(|c| c.unit.as_str()).collect();
    writeln!(w, "#units,{}", units.join(","))?;
    for row in &out.rows {
        let cells: Vec<String> = row
            .cells
            .iter()
            .map(|c| match c {
                Cell::Num(x) => format_number(*x),
                Cell::Text(s) => s.clone(),
                Cell::Empty => String::new(),
            })
            .collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn csv_string(out: &SweepOutput) -> String {
    let mut buf = Vec::new();
    write_csv(out, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

/// Inputs, constants, version and tolerances of a run. Contains nothing that
/// changes between identical runs.
pub fn manifest(res: &ResolvedSweep, opts: &RunOptions, out: &SweepOutput) -> Value {
    let q = QuadratureSpec::default();
    let mut units = res.units;
    if let Some(m) = opts.units {
        units.mode = m;
    }
    json!({
        "tool": "vdw",
        "version": env!("CARGO_PKG_VERSION"),
        "config": res.config,
        "resolved": {
            "omega_ref_rad_per_s": res.units.omega_ref,
            "lambda_a_m": res.lambda_a_m(),
            "atom_a": res.atom_a,
            "atom_b": res.atom_b,
            "fixed_r_natural": res.fixed_r,
            "u_groups": res.u_groups,
            "units": units.mode,
        },
        "constants": {
            "hbar_J_s": HBAR,
            "c_m_per_s": C,
            "k_B_J_per_K": K_B,
            "e_C": E_CHARGE,
            "eps0_F_per_m": EPS0,
            "a0_m": A0,
        },
        "tolerances": {
            "quadrature_rel_tol": q.rel_tol,
            "quadrature_abs_tol": q.abs_tol,
            "quadrature_max_intervals": q.max_intervals,
            "matsubara_rel_tol": MATSUBARA_REL_TOL,
            "derivative": opts.step,
            "regime": res.thresholds,
        },
        "fast": opts.fast,
        "rows": out.rows.len(),
        "failed_rows": out.failed_rows(),
    })
}
