//! The functional-equation factor `Delta(s) = 2 (2 pi)^{s-1} sin(pi s / 2) Gamma(1 - s)`,
//! normalised so that `zeta(s) = Delta(s) zeta(1 - s)`.
//!
//! Everything is evaluated on the half-plane `Re w <= 1/2`, where `Gamma(1 - w)`
//! has no poles; the right half-plane follows from `Delta(s) Delta(1 - s) = 1`.
//! For large `|t|` the gamma factor underflows while the sine overflows, so the
//! product is formed in the log domain.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use super::gamma::{digamma, log_gamma};
use super::ComplexValue;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
/// Above this `|Im(pi w / 2)|` the sine is handled through its dominant exponential.
const LOG_DOMAIN_IM: f64 = 10.0;
/// Distance below which `delta_log_deriv` reports a singularity.
const SINGULAR_RADIUS: f64 = 1e-6;
/// Distance below which `delta` treats `s` as the odd integer itself.
const POLE_RADIUS: f64 = 1e-12;

/// `log sin z`, any branch; `None` when `sin z` vanishes.
fn log_sin(z: Complex64) -> Option<Complex64> {
    if z.im >= LOG_DOMAIN_IM {
        // sin z = e^{-iz} (e^{2iz} - 1) / (2i)
        let e = (2.0 * I * z).exp();
        Some(-I * z + ((e - 1.0) / (2.0 * I)).ln())
    } else if z.im <= -LOG_DOMAIN_IM {
        // sin z = e^{iz} (1 - e^{-2iz}) / (2i)
        let e = (-2.0 * I * z).exp();
        Some(I * z + ((1.0 - e) / (2.0 * I)).ln())
    } else {
        let s = z.sin();
        if s == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(s.ln())
        }
    }
}

/// `cot z`, stable for large `|Im z|`.
fn cot(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        let e = (2.0 * I * z).exp();
        I * (e + 1.0) / (e - 1.0)
    } else {
        let e = (-2.0 * I * z).exp();
        I * (1.0 + e) / (1.0 - e)
    }
}

/// `(Delta(w), Delta'(w))` for `Re w <= 1/2`.
fn delta_left(w: Complex64) -> Result<(Complex64, Complex64)> {
    let two_pi = 2.0 * PI;
    let half = FRAC_PI_2 * w;
    let lg = log_gamma(1.0 - w)?;
    let log_prefactor = 2f64.ln() + (w - 1.0) * two_pi.ln() + lg;
    let psi = digamma(1.0 - w)?;
    if half.im.abs() < LOG_DOMAIN_IM {
        let prefactor = log_prefactor.exp();
        let (sin, cos) = (half.sin(), half.cos());
        let value = prefactor * sin;
        let deriv = prefactor * (sin * (two_pi.ln() - psi) + FRAC_PI_2 * cos);
        Ok((value, deriv))
    } else {
        let log_s = log_sin(half).expect("sine is nonzero off the real axis");
        let value = (log_prefactor + log_s).exp();
        let log_deriv = two_pi.ln() + FRAC_PI_2 * cot(half) - psi;
        Ok((value, value * log_deriv))
    }
}

fn check_finite(s: ComplexValue, v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(s))
    }
}

fn odd_pole(s: ComplexValue) -> Option<f64> {
    if s.im.abs() > POLE_RADIUS || s.re < 0.5 {
        return None;
    }
    let m = ((s.re - 1.0) / 2.0).round();
    let odd = 2.0 * m + 1.0;
    if (s.re - odd).abs() <= POLE_RADIUS {
        Some(odd)
    } else {
        None
    }
}

/// `Delta(s)` together with `Delta'(s)`.
pub fn delta_with_deriv(s: ComplexValue) -> Result<(ComplexValue, ComplexValue)> {
    if let Some(odd) = odd_pole(s) {
        return Err(Error::PoleAtOddInteger(odd));
    }
    if s.re <= 0.5 {
        let (v, d) = delta_left(s)?;
        return Ok((check_finite(s, v)?, check_finite(s, d)?));
    }
    // Delta(s) = 1/Delta(1-s), Delta'(s) = Delta'(1-s)/Delta(1-s)^2
    let (v, d) = delta_left(1.0 - s)?;
    if v == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleAtOddInteger(s.re.round()));
    }
    let inv = v.inv();
    Ok((check_finite(s, inv)?, check_finite(s, d * inv * inv)?))
}

/// The functional-equation factor, `zeta(s) = Delta(s) zeta(1-s)`.
pub fn delta(s: ComplexValue) -> Result<ComplexValue> {
    delta_with_deriv(s).map(|(v, _)| v)
}

/// Logarithmic derivative `Delta'/Delta(s) = log 2pi + (pi/2) cot(pi s/2) - psi(1-s)`.
///
/// Uses `Delta'/Delta(s) = Delta'/Delta(1-s)` to stay where the digamma is regular.
pub fn delta_log_deriv(s: ComplexValue) -> Result<ComplexValue> {
    let w = if s.re > 0.5 { 1.0 - s } else { s };
    // poles of cot(pi w/2) at even w <= 0: zeros of Delta(w), poles of Delta(1-w)
    let half = w / 2.0;
    if (half.im.abs() < SINGULAR_RADIUS / 2.0)
        && (half.re - half.re.round()).abs() < SINGULAR_RADIUS / 2.0
    {
        return Err(Error::NearSingularity(s));
    }
    let psi = digamma(1.0 - w)?;
    let v = (2.0 * PI).ln() + FRAC_PI_2 * cot(FRAC_PI_2 * w) - psi;
    check_finite(s, v)
}
