#![allow(dead_code)]

use vdw::atoms::find_preset;
use vdw::units::{ev_to_angular, UnitMode, UnitSystem};
use vdw::TwoLevelAtom;

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Rb-87 as A and K-40 as B with ω_B = ω_A(1 − δ), natural units of ω_A.
pub fn rb_k(detuning: f64) -> (UnitSystem, TwoLevelAtom, TwoLevelAtom) {
    let rb = find_preset("Rb87_D2").unwrap();
    let k = find_preset("K40_D2").unwrap();
    let units = UnitSystem::new(UnitMode::Si, ev_to_angular(rb.omega_ev).unwrap()).unwrap();
    let a = rb.to_atom(&units).unwrap();
    let mut b = k.to_atom(&units).unwrap();
    b.omega0 = 1.0 - detuning;
    (units, a, b)
}

/// Rb-87 and K-40 at their tabulated frequencies.
pub fn rb_k_native() -> (UnitSystem, TwoLevelAtom, TwoLevelAtom) {
    let rb = find_preset("Rb87_D2").unwrap();
    let k = find_preset("K40_D2").unwrap();
    let units = UnitSystem::new(UnitMode::Si, ev_to_angular(rb.omega_ev).unwrap()).unwrap();
    (units, rb.to_atom(&units).unwrap(), k.to_atom(&units).unwrap())
}

pub fn sign_changes(v: &[f64]) -> usize {
    v.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a * (b / a).powf(k as f64 / (n - 1) as f64)).collect()
}

/// Least-squares slope of y against x.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
