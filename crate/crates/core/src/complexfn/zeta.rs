//! Euler–Maclaurin evaluation of `zeta` and `zeta'`, with reflection through
//! `Delta` for `Re s < 0`.

use num_complex::Complex64;
use std::sync::OnceLock;

use super::bernoulli::scaled_bernoulli;
use super::delta::delta_with_deriv;
use super::{ComplexValue, EvalParams};
use crate::error::{Error, Result};
use crate::sum::ComplexSum;

/// Largest `|t|` accepted by [`zeta`] and [`zeta_deriv`].
pub const MAX_ABS_T: f64 = 1.0e4;
/// `|t|` above which the default accuracy target is no longer guaranteed.
pub const NOMINAL_ABS_T: f64 = 2000.0;
const POLE_RADIUS: f64 = 1e-12;
/// Target ratio `|s + 2k| / (2 pi N)` governing the choice of `N`.
const TAIL_RATIO: f64 = 0.5;
const LN_TABLE_LEN: usize = 1 << 13;

fn ln_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..LN_TABLE_LEN).map(|n| (n.max(1) as f64).ln()).collect())
}

#[inline]
fn ln_n(n: usize) -> f64 {
    if n < LN_TABLE_LEN {
        ln_table()[n]
    } else {
        (n as f64).ln()
    }
}

/// A value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: ComplexValue,
    pub abs_err: f64,
}

/// `zeta(s)`, `zeta'(s)` and an error estimate for `zeta(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaPair {
    pub value: ComplexValue,
    pub deriv: ComplexValue,
    pub abs_err: f64,
}

fn check_domain(s: ComplexValue) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite(s));
    }
    if (s - 1.0).norm() <= POLE_RADIUS {
        return Err(Error::PoleAtOne);
    }
    if s.im.abs() > MAX_ABS_T {
        return Err(Error::RangeExceeded {
            t: s.im.abs(),
            limit: MAX_ABS_T,
        });
    }
    Ok(())
}

/// Truncation point for the direct sum.
pub fn em_truncation(s: ComplexValue, p: &EvalParams) -> usize {
    let reach = s.norm() + 2.0 * p.bernoulli_order as f64;
    let n = (reach / (2.0 * std::f64::consts::PI * TAIL_RATIO)).ceil() as usize;
    n.max(p.em_cutoff)
}

/// Euler–Maclaurin with both the value and the derivative; valid for any
/// `s != 1`, but only used for `Re s >= 0`.
fn euler_maclaurin(s: Complex64, p: &EvalParams) -> ZetaPair {
    let big_n = em_truncation(s, p);
    let mut sum = ComplexSum::new();
    let mut dsum = ComplexSum::new();
    let mut max_term = 0.0f64;
    for n in 1..big_n {
        let l = ln_n(n);
        let mag = (-s.re * l).exp();
        let (sin, cos) = (s.im * l).sin_cos();
        let term = Complex64::new(mag * cos, -mag * sin);
        max_term = max_term.max(mag);
        sum.add(term);
        dsum.add(term * -l);
    }
    let ln_big = ln_n(big_n);
    let n_pow = (-s * ln_big).exp(); // N^{-s}
    let nf = big_n as f64;
    let inv_sm1 = (s - 1.0).inv();
    // N^{1-s}/(s-1) + N^{-s}/2
    let integral = n_pow * nf * inv_sm1;
    sum.add(integral);
    sum.add(n_pow * 0.5);
    dsum.add(integral * (-ln_big - inv_sm1));
    dsum.add(n_pow * (-0.5 * ln_big));

    let bern = scaled_bernoulli();
    let inv_n2 = 1.0 / (nf * nf);
    let mut power = n_pow / nf; // N^{-s-1}, times N^{-2} per order
    let mut poly = s; // s (s+1) ... (s+2k-2)
    let mut dpoly = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    let order = p.bernoulli_order.min(bern.len());
    for (k, &c) in bern.iter().enumerate().take(order) {
        let term = power * poly * c;
        let dterm = power * (dpoly - poly * ln_big) * c;
        // the value terms all vanish at s = 0, so watch the derivative too
        let size = term.norm().max(dterm.norm());
        if size > last {
            // asymptotic series started to diverge
            break;
        }
        sum.add(term);
        dsum.add(dterm);
        last = size;
        if size < 1e-18 * (1.0 + sum.value().norm().max(dsum.value().norm())) {
            break;
        }
        let j = (2 * k + 1) as f64;
        let (a, b) = (s + j, s + (j + 1.0));
        // (P a b)' = P' a b + P (a + b)
        dpoly = dpoly * a * b + poly * (a + b);
        poly = poly * a * b;
        power *= inv_n2;
    }
    let rounding = 4.0 * f64::EPSILON * (big_n as f64).sqrt() * max_term.max(1.0);
    let truncation = if last.is_finite() { last } else { 0.0 };
    ZetaPair {
        value: sum.value(),
        deriv: dsum.value(),
        abs_err: truncation + rounding,
    }
}

/// `zeta(s)` and `zeta'(s)` from one pass over the Dirichlet terms.
pub fn zeta_pair(s: ComplexValue, p: &EvalParams) -> Result<ZetaPair> {
    check_domain(s)?;
    if s.re >= 0.0 {
        return Ok(euler_maclaurin(s, p));
    }
    // zeta(s) = Delta(s) zeta(1-s); zeta'(s) = Delta'(s) zeta(1-s) - Delta(s) zeta'(1-s)
    let reflected = euler_maclaurin(1.0 - s, p);
    let (d, dd) = delta_with_deriv(s)?;
    let value = d * reflected.value;
    let deriv = dd * reflected.value - d * reflected.deriv;
    if !(value.re.is_finite() && value.im.is_finite() && deriv.re.is_finite() && deriv.im.is_finite())
    {
        return Err(Error::NonFinite(s));
    }
    Ok(ZetaPair {
        value,
        deriv,
        abs_err: d.norm() * reflected.abs_err + value.norm() * 1e-15 * (1.0 + s.im.abs().ln_1p()),
    })
}

/// Riemann zeta with an error estimate.
pub fn zeta_estimate(s: ComplexValue, p: &EvalParams) -> Result<Estimate> {
    let pair = zeta_pair(s, p)?;
    Ok(Estimate {
        value: pair.value,
        abs_err: pair.abs_err,
    })
}

/// The Riemann zeta function.
pub fn zeta(s: ComplexValue, p: &EvalParams) -> Result<ComplexValue> {
    zeta_pair(s, p).map(|z| z.value)
}

/// Derivative of the Riemann zeta function.
pub fn zeta_deriv(s: ComplexValue, p: &EvalParams) -> Result<ComplexValue> {
    zeta_pair(s, p).map(|z| z.deriv)
}
