use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::complexfn::{delta, delta_with_deriv, zeta_pair, ComplexValue, EvalParams};
use crate::dirichlet::{lambda_a, lambda_sieve, sigma_star, DirichletSeries};
use crate::error::{Error, Result};
use crate::quad::kronrod_panel;
use crate::sum::ComplexSum;

/// Panel density and stopping rule for oscillatory vertical integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureParams {
    /// Panels per `2 pi` of phase of `Delta` at the starting density.
    pub panels_per_unit_phase: usize,
    /// Stop once two successive doublings differ by at most this.
    pub max_abs_err: f64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self {
            panels_per_unit_phase: 8,
            max_abs_err: 1e-6,
        }
    }
}

impl QuadratureParams {
    pub fn validate(&self) -> Result<()> {
        if self.panels_per_unit_phase == 0 || !(self.max_abs_err > 0.0) {
            return Err(Error::InvalidParams(
                "quadrature needs positive panel density and tolerance".into(),
            ));
        }
        Ok(())
    }
}

/// The Dirichlet series `B(s) = sum b_n n^{-s}` under the integral.
#[derive(Debug, Clone)]
pub enum GonekSeries {
    /// Exactly these coefficients; `b_n = 0` past the stored length.
    Finite(DirichletSeries),
    /// Leading coefficients of a longer series whose tail the caller has
    /// bounded; must reach `T/2pi`.
    Truncated(DirichletSeries),
    /// `Lambda(n)`, evaluated in closed form as `-zeta'/zeta`.
    VonMangoldt,
    /// `Lambda_a(n)`, evaluated in closed form as `zeta'/(zeta - a)`.
    LambdaA(ComplexValue),
}

impl GonekSeries {
    fn eval(&self, s: ComplexValue, p: &EvalParams) -> Result<ComplexValue> {
        match self {
            Self::Finite(b) | Self::Truncated(b) => Ok(b.eval(s)),
            Self::VonMangoldt => {
                let z = zeta_pair(s, p)?;
                Ok(-z.deriv / z.value)
            }
            Self::LambdaA(a) => {
                let z = zeta_pair(s, p)?;
                Ok(z.deriv / (z.value - a))
            }
        }
    }

    /// `b_1, ..., b_m`.
    fn leading(&self, m: usize) -> Result<Vec<ComplexValue>> {
        if m == 0 {
            return Ok(Vec::new());
        }
        Ok(match self {
            Self::Finite(b) => (1..=m).map(|n| if n <= b.len() { b.coeff(n) } else { ComplexValue::new(0.0, 0.0) }).collect(),
            Self::Truncated(b) => {
                if b.len() < m {
                    return Err(Error::SeriesTooShort { have: b.len(), need: m });
                }
                b.coeffs()[..m].to_vec()
            }
            Self::VonMangoldt => lambda_sieve(m).coeffs().to_vec(),
            Self::LambdaA(a) => lambda_a(m, *a)?.coeffs().to_vec(),
        })
    }
}

/// `(1/2 pi i) int_{c+i}^{c+iT} Delta^{(m)}(1-s) B(s) ds` and
/// `sum_{n <= T/2pi} b_n (log n)^m`, returned side by side.
pub fn gonek_quadrature(
    b: &GonekSeries,
    c: f64,
    m: u32,
    t: f64,
    q: &QuadratureParams,
    p: &EvalParams,
) -> Result<(ComplexValue, ComplexValue)> {
    q.validate()?;
    if m > 1 {
        return Err(Error::InvalidParams("only m = 0 and m = 1 are supported".into()));
    }
    if !(t > 1.0) {
        return Err(Error::InvalidParams(format!("T = {t} must exceed 1")));
    }
    match b {
        GonekSeries::VonMangoldt if c <= 1.0 => {
            return Err(Error::InvalidParams("c must exceed 1 for Lambda".into()))
        }
        GonekSeries::LambdaA(a) if c <= sigma_star(*a)? => {
            return Err(Error::InvalidParams("c must exceed sigma*(a) for Lambda_a".into()))
        }
        _ => {}
    }
    let top = (t / (2.0 * PI)).floor() as usize;
    let coeffs = b.leading(top)?;
    let mut sum = ComplexSum::new();
    for (i, bn) in coeffs.iter().enumerate() {
        let log_n = ((i + 1) as f64).ln();
        sum.add(if m == 0 { *bn } else { bn * log_n });
    }

    let integrand = |tt: ComplexValue| -> Result<[ComplexValue; 1]> {
        let s = ComplexValue::new(c, tt.re);
        let w = 1.0 - s;
        let d = if m == 0 { delta(w)? } else { delta_with_deriv(w)?.1 };
        Ok([d * b.eval(s, p)? / (2.0 * PI)])
    };
    let mut previous: Option<ComplexValue> = None;
    let mut last_change = f64::INFINITY;
    for round in 0..10u32 {
        let density = q.panels_per_unit_phase as f64 * f64::from(1u32 << round);
        let value = composite(&integrand, t, density)?;
        if let Some(prev) = previous {
            last_change = (value - prev).norm();
            if last_change <= q.max_abs_err {
                return Ok((value, sum.value()));
            }
        }
        previous = Some(value);
    }
    Err(Error::QuadratureNotConverged { last_change })
}

/// Kronrod panels on `[1, t]`, `density (log(t/2pi)^+ + 1) / 2pi` per unit length.
fn composite<F>(f: &F, t: f64, density: f64) -> Result<ComplexValue>
where
    F: Fn(ComplexValue) -> Result<[ComplexValue; 1]>,
{
    let mut acc = ComplexSum::new();
    let mut lo = 1.0f64;
    while lo < t {
        let rate = (lo / (2.0 * PI)).ln().max(0.0) + 1.0;
        let hi = (lo + 2.0 * PI / (density * rate)).min(t);
        let (k, _) = kronrod_panel(f, ComplexValue::new(lo, 0.0), ComplexValue::new(hi, 0.0))?;
        acc.add(k[0]);
        lo = hi;
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexfn::cplx;
    use crate::dirichlet::psi;

    #[test]
    fn single_term_series() {
        let b = GonekSeries::Finite(DirichletSeries::identity(1));
        let q = QuadratureParams::default();
        let p = EvalParams::default();
        let (_, s0) = gonek_quadrature(&b, 1.25, 0, 20.0, &q, &p).unwrap();
        assert_eq!(s0, cplx(1.0, 0.0));
        let (_, s1) = gonek_quadrature(&b, 1.25, 1, 20.0, &q, &p).unwrap();
        assert_eq!(s1, cplx(0.0, 0.0));
        let (_, below) = gonek_quadrature(&b, 1.25, 0, 5.0, &q, &p).unwrap();
        assert_eq!(below, cplx(0.0, 0.0));
    }

    #[test]
    fn truncated_series_must_reach_t() {
        let b = GonekSeries::Truncated(DirichletSeries::identity(3));
        let r = gonek_quadrature(&b, 1.25, 0, 100.0, &QuadratureParams::default(), &EvalParams::default());
        assert_eq!(r, Err(Error::SeriesTooShort { have: 3, need: 15 }));
    }

    #[test]
    fn von_mangoldt_small_t() {
        let q = QuadratureParams::default();
        let p = EvalParams::default();
        let (integral, sum) = gonek_quadrature(&GonekSeries::VonMangoldt, 1.25, 0, 50.0, &q, &p).unwrap();
        let x = 50.0 / (2.0 * PI);
        assert!((sum.re - psi(x)).abs() < 1e-12);
        // O(T^{3/4} log T) allowance at T = 50
        assert!((integral - sum).norm() < 50f64.powf(0.75) * 50f64.ln());
    }

    #[test]
    fn lambda_a_needs_c_past_sigma_star() {
        let q = QuadratureParams::default();
        let p = EvalParams::default();
        let r = gonek_quadrature(&GonekSeries::LambdaA(cplx(2.0, 0.0)), 1.25, 0, 50.0, &q, &p);
        assert!(matches!(r, Err(Error::InvalidParams(_))));
    }
}
