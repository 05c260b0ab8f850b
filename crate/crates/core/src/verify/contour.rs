use std::f64::consts::PI;

use super::gonek::QuadratureParams;
use crate::apoints::{find_apoints_in, APoint, SearchParams, SearchWindow};
use crate::complexfn::{delta, zeta_pair, ComplexValue, EvalParams};
use crate::error::{Error, Result};
use crate::quad::{integrate_segment, AdaptiveOptions};
use crate::sum::ComplexSum;

/// `(1/2 pi i) oint zeta'/(zeta - a) Delta(s) ds` around `w` next to
/// `sum Delta(rho_a)` over the a-points inside `w`.
pub fn contour_residue_check(
    a: ComplexValue,
    w: &SearchWindow,
    q: &QuadratureParams,
    p: &EvalParams,
    sp: &SearchParams,
) -> Result<(ComplexValue, ComplexValue)> {
    q.validate()?;
    w.validate()?;
    if w.is_degenerate() {
        return Ok((ComplexValue::new(0.0, 0.0), ComplexValue::new(0.0, 0.0)));
    }
    let integrand = |s: ComplexValue| -> Result<[ComplexValue; 1]> {
        let z = zeta_pair(s, p)?;
        let f = z.value - a;
        if f.norm() <= sp.boundary_clearance {
            return Err(Error::BoundaryTooClose { at: s, value: f.norm() });
        }
        Ok([z.deriv / f * delta(s)?])
    };
    let opts = AdaptiveOptions {
        abs_tol: q.max_abs_err / 16.0,
        max_panel: sp.max_panel,
        max_depth: sp.max_depth,
        controlled: 1,
        rel_tol: 1e-12,
        min_panel: 1e-9,
    };
    let corners = [
        ComplexValue::new(w.sigma_min, w.t_min),
        ComplexValue::new(w.sigma_max, w.t_min),
        ComplexValue::new(w.sigma_max, w.t_max),
        ComplexValue::new(w.sigma_min, w.t_max),
    ];
    let mut total = ComplexSum::new();
    for i in 0..4 {
        let r = integrate_segment(&integrand, corners[i], corners[(i + 1) % 4], &opts)?;
        if !r.converged {
            return Err(Error::QuadratureNotConverged { last_change: r.err_est });
        }
        total.add(r.values[0]);
    }
    let quadrature = total.value() / ComplexValue::new(0.0, 2.0 * PI);

    let mut residues = ComplexSum::new();
    for pt in find_apoints_in(a, w, p, sp)? {
        residues.add(delta(pt.rho())?);
    }
    Ok((quadrature, residues.value()))
}

fn log_scale(s: ComplexValue) -> f64 {
    (2.0 + s.im.abs()).ln()
}

/// `sup |zeta'/(zeta - a)| / log(2 + |t|)^2` over `sample`. Each sample must
/// keep distance `1/log(2 + |t|)` from every point of `known`.
pub fn partfrac_bound_probe(
    a: ComplexValue,
    sample: &[ComplexValue],
    known: &[APoint],
    p: &EvalParams,
) -> Result<f64> {
    let mut sup = 0.0f64;
    for &s in sample {
        let radius = 1.0 / log_scale(s);
        if known.iter().any(|k| (k.rho() - s).norm() < radius) {
            return Err(Error::SampleTooCloseToAPoint(s));
        }
        let z = zeta_pair(s, p)?;
        let ratio = (z.deriv / (z.value - a)).norm() / log_scale(s).powi(2);
        sup = sup.max(ratio);
    }
    Ok(sup)
}

/// Points `sigma + i t` with `t` halfway between consecutive ordinates of
/// `known` inside `[t_lo, t_hi]`, dropping those too close to a known point.
pub fn midpoint_samples(known: &[APoint], sigmas: &[f64], t_lo: f64, t_hi: f64) -> Vec<ComplexValue> {
    let mut gammas: Vec<f64> = known.iter().map(|k| k.gamma).collect();
    gammas.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for pair in gammas.windows(2) {
        let t = 0.5 * (pair[0] + pair[1]);
        if t < t_lo || t > t_hi {
            continue;
        }
        for &sigma in sigmas {
            let s = ComplexValue::new(sigma, t);
            let radius = 1.0 / log_scale(s);
            if known.iter().all(|k| (k.rho() - s).norm() >= radius) {
                out.push(s);
            }
        }
    }
    out
}
