use rayon::prelude::*;
use std::f64::consts::{E, PI};

use super::count::{winding, LogDeriv, Pair};
use super::{APoint, APointSet, SearchParams, SearchWindow};
use crate::complexfn::{zeta, zeta_pair, ComplexValue, EvalParams};
use crate::error::{Error, Result};

/// Interior cuts are moved by these multiples of the strip height when an
/// a-point sits too close to them.
const CUT_OFFSETS: [f64; 7] = [0.0, 0.1, -0.1, 0.2, -0.2, 0.3, -0.3];
const SPLIT_FRACTIONS: [f64; 5] = [0.5, 0.4, 0.6, 0.3, 0.7];
/// Slack allowed when deciding whether a refined root lies in its cell.
const CELL_MARGIN: f64 = 1e-7;

/// All a-points with `0 < gamma <= t` in `[0, kappa(a)]`, ascending in `gamma`.
pub fn find_apoints(a: ComplexValue, t: f64, p: &EvalParams) -> Result<Vec<APoint>> {
    find_apoints_with(a, t, p, &SearchParams::default())
}

pub fn find_apoints_with(
    a: ComplexValue,
    t: f64,
    p: &EvalParams,
    sp: &SearchParams,
) -> Result<Vec<APoint>> {
    let set = APointSet::compute(a, t, p, sp)?;
    Ok(set.points.into_iter().filter(|x| x.gamma <= t).collect())
}

/// All a-points strictly inside `w`, ascending in `gamma`. The count is
/// checked against the winding number of the whole boundary.
pub fn find_apoints_in(
    a: ComplexValue,
    w: &SearchWindow,
    p: &EvalParams,
    sp: &SearchParams,
) -> Result<Vec<APoint>> {
    w.validate()?;
    p.validate()?;
    if w.is_degenerate() {
        return Ok(Vec::new());
    }
    let ld = LogDeriv {
        a,
        p,
        clearance: sp.boundary_clearance,
    };
    let m = strip_count(w, sp);
    let step = w.height() / m as f64;
    let nominal = |j: usize| if j == m { w.t_max } else { w.t_min + j as f64 * step };

    let cuts: Vec<(f64, Pair)> = (0..=m)
        .into_par_iter()
        .map(|j| {
            let offsets: &[f64] = if j == 0 || j == m { &CUT_OFFSETS[..1] } else { &CUT_OFFSETS };
            let mut last = None;
            for &o in offsets {
                let t = nominal(j) + o * step;
                match ld.segment(c(w.sigma_min, t), c(w.sigma_max, t), sp) {
                    Ok(v) => return Ok((t, v)),
                    Err(e @ Error::BoundaryTooClose { .. }) => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last.expect("at least one offset"))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;

    let sides: Vec<(Pair, Pair)> = (0..m)
        .into_par_iter()
        .map(|j| {
            let (t0, t1) = (cuts[j].0, cuts[j + 1].0);
            let right = ld.segment(c(w.sigma_max, t0), c(w.sigma_max, t1), sp)?;
            let left = ld.segment(c(w.sigma_min, t1), c(w.sigma_min, t0), sp)?;
            Ok((right, left))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;

    let mut total = add(cuts[0].1, neg(cuts[m].1));
    for (r, l) in &sides {
        total = add(total, add(*r, *l));
    }
    let counted = winding(total[0])?;

    let mut cells = Vec::new();
    for j in 0..m {
        let integral = add(add(cuts[j].1, sides[j].0), add(neg(cuts[j + 1].1), sides[j].1));
        let count = winding(integral[0])?;
        if count > 0 {
            let rect = SearchWindow {
                sigma_min: w.sigma_min,
                sigma_max: w.sigma_max,
                t_min: cuts[j].0,
                t_max: cuts[j + 1].0,
            };
            cells.push((rect, count, integral[1]));
        }
    }

    let found: Vec<Vec<APoint>> = cells
        .into_par_iter()
        .map(|(rect, count, moment)| resolve(&ld, &rect, count, moment, sp.max_depth, sp))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;
    let mut points: Vec<APoint> = found.into_iter().flatten().collect();
    points.sort_by(|x, y| x.gamma.total_cmp(&y.gamma).then(x.beta.total_cmp(&y.beta)));
    dedup(&mut points, sp.dedup_radius);

    if points.len() != counted {
        return Err(Error::WindowCountMismatch {
            found: points.len(),
            counted,
            window: w.to_string(),
        });
    }
    Ok(points)
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn add(x: Pair, y: Pair) -> Pair {
    [x[0] + y[0], x[1] + y[1]]
}

fn neg(x: Pair) -> Pair {
    [-x[0], -x[1]]
}

fn strip_count(w: &SearchWindow, sp: &SearchParams) -> usize {
    let h = sp.strip_height_factor / w.t_max.max(E).ln();
    (w.height() / h).ceil().max(1.0) as usize
}

fn dedup(points: &mut Vec<APoint>, radius: f64) {
    let mut kept: Vec<APoint> = Vec::with_capacity(points.len());
    for pt in points.drain(..) {
        if kept.iter().rev().take(4).all(|k| (k.rho() - pt.rho()).norm() > radius) {
            kept.push(pt);
        }
    }
    *points = kept;
}

/// Isolates the `count` roots inside `rect` by splitting until each cell holds
/// one, then polishes the moment estimate by Newton's method.
fn resolve(
    ld: &LogDeriv<'_>,
    rect: &SearchWindow,
    count: usize,
    moment: ComplexValue,
    depth_left: u32,
    sp: &SearchParams,
) -> Result<Vec<APoint>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if count == 1 {
        let guess = moment / ComplexValue::new(0.0, 2.0 * PI);
        if rect.contains(guess, CELL_MARGIN) {
            if let Some(pt) = newton(ld.a, guess, ld.p, sp) {
                if rect.contains(pt.rho(), CELL_MARGIN) {
                    return Ok(vec![pt]);
                }
            }
        }
    }
    let centre = c(
        0.5 * (rect.sigma_min + rect.sigma_max),
        0.5 * (rect.t_min + rect.t_max),
    );
    if depth_left == 0 {
        return Err(Error::RefinementDiverged(centre));
    }
    let (lo, hi) = split(ld, rect, sp)?;
    if lo.1 + hi.1 != count {
        return Err(Error::WindowCountMismatch {
            found: lo.1 + hi.1,
            counted: count,
            window: rect.to_string(),
        });
    }
    let mut out = resolve(ld, &lo.0, lo.1, lo.2, depth_left - 1, sp)?;
    out.extend(resolve(ld, &hi.0, hi.1, hi.2, depth_left - 1, sp)?);
    Ok(out)
}

type Cell = (SearchWindow, usize, ComplexValue);

/// Halves `rect` across its longer side, moving the cut off-centre when it
/// passes too close to a root.
fn split(ld: &LogDeriv<'_>, rect: &SearchWindow, sp: &SearchParams) -> Result<(Cell, Cell)> {
    let mut last = None;
    for &f in &SPLIT_FRACTIONS {
        let (lo, hi) = if rect.width() >= rect.height() {
            let x = rect.sigma_min + f * rect.width();
            (
                SearchWindow { sigma_max: x, ..*rect },
                SearchWindow { sigma_min: x, ..*rect },
            )
        } else {
            let y = rect.t_min + f * rect.height();
            (SearchWindow { t_max: y, ..*rect }, SearchWindow { t_min: y, ..*rect })
        };
        let attempt = (|| {
            let a = ld.boundary(&lo, sp)?;
            let b = ld.boundary(&hi, sp)?;
            Ok(((lo, winding(a[0])?, a[1]), (hi, winding(b[0])?, b[1])))
        })();
        match attempt {
            Ok(cells) => return Ok(cells),
            Err(e @ Error::BoundaryTooClose { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one split"))
}

/// Newton iteration `s <- s - (zeta(s) - a)/zeta'(s)`; `None` unless the final
/// residual meets the tolerance.
fn newton(a: ComplexValue, start: ComplexValue, p: &EvalParams, sp: &SearchParams) -> Option<APoint> {
    let mut s = start;
    for _ in 0..60 {
        let z = zeta_pair(s, p).ok()?;
        let step = (z.value - a) / z.deriv;
        if !step.is_finite() {
            return None;
        }
        s -= step;
        if step.norm() <= 1e-15 * (1.0 + s.norm()) {
            break;
        }
    }
    let residual = (zeta(s, p).ok()? - a).norm();
    (residual <= sp.residual_tol).then_some(APoint {
        a,
        beta: s.re,
        gamma: s.im,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexfn::cplx;

    #[test]
    fn zeros_below_fifty() {
        let p = EvalParams::default();
        let pts = find_apoints(cplx(0.0, 0.0), 50.0, &p).unwrap();
        let known = [14.134725141734693, 21.022039638771555, 25.010857580145688, 30.424876125859513,
            32.935061587739189, 37.586178158825671, 40.918719012147495, 43.327073280914999,
            48.005150881167159, 49.773832477672302];
        assert_eq!(pts.len(), known.len());
        for (pt, g) in pts.iter().zip(known) {
            assert!((pt.gamma - g).abs() < 1e-9, "{} vs {}", pt.gamma, g);
            assert!((pt.beta - 0.5).abs() < 1e-9);
            assert!(pt.residual <= 1e-8);
        }
    }

    #[test]
    fn nothing_below_ten() {
        let p = EvalParams::default();
        assert!(find_apoints(cplx(0.0, 0.0), 10.0, &p).unwrap().is_empty());
    }

    #[test]
    fn two_points_agree_with_count() {
        let p = EvalParams::default();
        let sp = SearchParams::default();
        let w = SearchWindow::new(0.0, 2.3, 0.01, 40.0).unwrap();
        let a = cplx(2.0, 0.0);
        let pts = find_apoints_in(a, &w, &p, &sp).unwrap();
        assert_eq!(pts.len(), super::super::count_in_rectangle(a, &w, &p).unwrap());
        for pt in &pts {
            assert!((zeta(pt.rho(), &p).unwrap() - a).norm() < 1e-8);
        }
    }

    #[test]
    fn dedup_merges_close_roots() {
        let mk = |g: f64| APoint { a: cplx(0.0, 0.0), beta: 0.5, gamma: g, residual: 0.0 };
        let mut v = vec![mk(1.0), mk(1.0 + 1e-12), mk(2.0)];
        dedup(&mut v, 1e-9);
        assert_eq!(v.len(), 2);
    }
}
