use std::f64::consts::PI;

use super::{SearchParams, SearchWindow};
use crate::complexfn::{zeta_pair, ComplexValue, EvalParams};
use crate::error::{Error, Result};
use crate::quad::{integrate_segment, AdaptiveOptions};

/// Relative panel tolerance; `zeta` carries absolute noise near `1e-13`,
/// which `f'/f` amplifies close to an a-point.
const PANEL_REL_TOL: f64 = 1e-10;
const MIN_PANEL: f64 = 1e-7;

/// `[f'/f, s f'/f]` with `f = zeta - a`; the second component carries the
/// first moment used to locate isolated roots.
pub(crate) type Pair = [ComplexValue; 2];

pub(crate) struct LogDeriv<'a> {
    pub a: ComplexValue,
    pub p: &'a EvalParams,
    pub clearance: f64,
}

impl LogDeriv<'_> {
    pub fn eval(&self, s: ComplexValue) -> Result<Pair> {
        let z = zeta_pair(s, self.p)?;
        let f = z.value - self.a;
        let gap = f.norm();
        if gap <= self.clearance {
            return Err(Error::BoundaryTooClose { at: s, value: gap });
        }
        let q = z.deriv / f;
        Ok([q, s * q])
    }

    /// Integral of `[f'/f, s f'/f]` along the straight path `from -> to`.
    pub fn segment(&self, from: ComplexValue, to: ComplexValue, sp: &SearchParams) -> Result<Pair> {
        let opts = AdaptiveOptions {
            abs_tol: sp.edge_tol * (to - from).norm().max(1.0),
            max_panel: sp.max_panel,
            max_depth: sp.max_depth,
            controlled: 1,
            rel_tol: PANEL_REL_TOL,
            min_panel: MIN_PANEL,
        };
        let r = integrate_segment(&|s| self.eval(s), from, to, &opts)?;
        Ok(r.values)
    }

    /// Counter-clockwise boundary integral of `w`.
    pub fn boundary(&self, w: &SearchWindow, sp: &SearchParams) -> Result<Pair> {
        let c = corners(w);
        let mut total = [ComplexValue::new(0.0, 0.0); 2];
        for i in 0..4 {
            let e = self.segment(c[i], c[(i + 1) % 4], sp)?;
            total[0] += e[0];
            total[1] += e[1];
        }
        Ok(total)
    }
}

/// Lower-left, lower-right, upper-right, upper-left.
pub(crate) fn corners(w: &SearchWindow) -> [ComplexValue; 4] {
    [
        ComplexValue::new(w.sigma_min, w.t_min),
        ComplexValue::new(w.sigma_max, w.t_min),
        ComplexValue::new(w.sigma_max, w.t_max),
        ComplexValue::new(w.sigma_min, w.t_max),
    ]
}

/// Rounds `integral / (2 pi i)` to the nearest integer; off by more than
/// 0.25 in either component is an error.
pub(crate) fn winding(integral: ComplexValue) -> Result<usize> {
    let n = integral / ComplexValue::new(0.0, 2.0 * PI);
    let k = n.re.round();
    if (n.re - k).abs() > 0.25 || n.im.abs() > 0.25 || k < 0.0 {
        return Err(Error::NonIntegralWinding { value: n.re });
    }
    Ok(k as usize)
}

/// Integrals of `zeta'/(zeta - a)` and `s zeta'/(zeta - a)` around `w`.
pub fn boundary_integrals(
    a: ComplexValue,
    w: &SearchWindow,
    p: &EvalParams,
    sp: &SearchParams,
) -> Result<(ComplexValue, ComplexValue)> {
    w.validate()?;
    let ld = LogDeriv {
        a,
        p,
        clearance: sp.boundary_clearance,
    };
    let [q, m] = ld.boundary(w, sp)?;
    Ok((q, m))
}

/// Number of a-points strictly inside `w`, with multiplicity.
pub fn count_in_rectangle(a: ComplexValue, w: &SearchWindow, p: &EvalParams) -> Result<usize> {
    count_in_rectangle_with(a, w, p, &SearchParams::default())
}

pub fn count_in_rectangle_with(
    a: ComplexValue,
    w: &SearchWindow,
    p: &EvalParams,
    sp: &SearchParams,
) -> Result<usize> {
    w.validate()?;
    p.validate()?;
    if w.is_degenerate() {
        return Ok(0);
    }
    let (q, _) = boundary_integrals(a, w, p, sp)?;
    winding(q)
}
