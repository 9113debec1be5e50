//! Free-space retarded dyadic Green's tensor and its two scalar contractions.
//!
//! D^{νν'}(ω, R) = (e^{iωR}/R)[ω²(δ − R̂R̂) + (3R̂R̂ − δ)(1/R² − iω/R)]
//!
//! Its normalisation is the one for which Σ|D^{νν'}|² = (2ω⁴/R²)(1 + x⁻² + 3x⁻⁴),
//! x = ωR. In the eigenbasis of R̂R̂ the tensor is diag(t, t, l) with
//! t = e^{ix}(x² − 1 + ix)/R³ and l = 2e^{ix}(1 − ix)/R³, so both contractions
//! reduce to polynomials in x:
//!
//! |D|²  = 2|t|² + |l|²  = (2/R⁶)(x⁴ + x² + 3)
//! D·D   = 2t² + l²      = (2/R⁶)e^{2ix}(x⁴ + 2ix³ − 5x² − 6ix + 3)
//!
//! Written this way there is no x⁻⁴ cancellation at small x. The real part of
//! D·D has the sine bracket sin(2x)·2(3/x³ − 1/x) when expanded in powers of 1/x;
//! the commonly quoted form of that bracket is smaller by a factor 2, while the
//! cosine bracket (1 − 5/x² + 3/x⁴) agrees.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Result, VdwError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenContractions {
    pub abs2: f64,
    pub sq: Complex64,
}

impl GreenContractions {
    pub fn at(omega: f64, r: f64) -> Self {
        Self {
            abs2: contracted_abs2(omega, r),
            sq: contracted_sq(omega, r),
        }
    }
}

/// Tensor at a complex frequency; real ω is the physical case.
pub fn dyadic_green_complex(omega: Complex64, r_vec: &Vector3<f64>) -> Result<Matrix3<Complex64>> {
    let r = r_vec.norm();
    if !(r > 0.0) || !r.is_finite() {
        return Err(VdwError::Singularity(
            "Green's tensor evaluated at zero separation".into(),
        ));
    }
    let n = r_vec / r;
    let i = Complex64::i();
    let phase = (i * omega * r).exp() / r;
    let near = 1.0 / (r * r) - i * omega / r;
    let mut d = Matrix3::zeros();
    for a in 0..3 {
        for b in 0..3 {
            let delta = if a == b { 1.0 } else { 0.0 };
            let nn = n[a] * n[b];
            d[(a, b)] = phase * (omega * omega * (delta - nn) + near * (3.0 * nn - delta));
        }
    }
    Ok(d)
}

pub fn dyadic_green(omega: f64, r_vec: &Vector3<f64>) -> Result<Matrix3<Complex64>> {
    if !(omega > 0.0) {
        return Err(VdwError::Domain(format!("Green's tensor needs omega > 0, got {omega}")));
    }
    dyadic_green_complex(Complex64::new(omega, 0.0), r_vec)
}

/// Σ|D^{νν'}|².
pub fn contracted_abs2(omega: f64, r: f64) -> f64 {
    let x = omega * r;
    let x2 = x * x;
    2.0 * (x2 * x2 + x2 + 3.0) / r.powi(6)
}

/// Σ D^{νν'}D^{ν'ν}.
pub fn contracted_sq(omega: f64, r: f64) -> Complex64 {
    let x = omega * r;
    let x2 = x * x;
    let poly = Complex64::new(x2 * x2 - 5.0 * x2 + 3.0, 2.0 * x * x2 - 6.0 * x);
    let phase = Complex64::from_polar(1.0, 2.0 * x);
    phase * poly * (2.0 / r.powi(6))
}

/// Σ|D^{νν'}|² − ΣD^{νν'}D^{ν'ν}. The two cancel through fourth order in ωR,
/// so below ωR = 1/2 the difference is summed from its Taylor series.
pub fn contracted_abs2_minus_sq(omega: f64, r: f64) -> Complex64 {
    let x = omega * r;
    if x.abs() >= 0.5 {
        return contracted_abs2(omega, r) - contracted_sq(omega, r);
    }
    let i = Complex64::i();
    let poly = [Complex64::new(3.0, 0.0), -6.0 * i, Complex64::new(-5.0, 0.0), 2.0 * i, Complex64::new(1.0, 0.0)];
    // |D|² is a quartic, so from fifth order on only −e^{2ix}·poly contributes; (2i)^m/m!
    let mut exp = [Complex64::new(1.0, 0.0); 32];
    for m in 1..exp.len() {
        exp[m] = exp[m - 1] * 2.0 * i / m as f64;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for n in (5..exp.len()).rev() {
        let c: Complex64 = (0..5).map(|k| poly[k] * exp[n - k]).sum();
        sum = sum * x - c;
    }
    sum * x.powi(5) * (2.0 / r.powi(6))
}

/// D·D continued to complex frequency, for contour integration.
pub fn contracted_sq_complex(omega: Complex64, r: f64) -> Complex64 {
    let x = omega * r;
    let x2 = x * x;
    let i = Complex64::i();
    let poly = x2 * x2 + 2.0 * i * x * x2 - 5.0 * x2 - 6.0 * i * x + 3.0;
    (2.0 * i * x).exp() * poly * (2.0 / r.powi(6))
}

/// D·D at ω = iξ: (2/R⁶)e^{−2y}(y⁴ + 2y³ + 5y² + 6y + 3), y = ξR.
pub fn contracted_sq_imagfreq(xi: f64, r: f64) -> f64 {
    let y = xi * r;
    if 2.0 * y > 745.0 {
        return 0.0;
    }
    let poly = (((y + 2.0) * y + 5.0) * y + 6.0) * y + 3.0;
    2.0 * (-2.0 * y).exp() * poly / r.powi(6)
}

/// Σ|D|² from an explicit tensor.
pub fn tensor_abs2(d: &Matrix3<Complex64>) -> f64 {
    d.iter().map(|z| z.norm_sqr()).sum()
}

/// Σ D^{νν'}D^{ν'ν} from an explicit tensor.
pub fn tensor_sq(d: &Matrix3<Complex64>) -> Complex64 {
    (d * d).trace()
}
