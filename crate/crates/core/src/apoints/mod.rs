//! Solutions of `zeta(s) = a` ("a-points") in rectangles of the right
//! half-plane: argument-principle counting, subdivision search with Newton
//! refinement, the counting main term, and zero-table ingestion.

mod count;
mod search;
mod table;

use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};
use std::fmt;

pub use count::{boundary_integrals, count_in_rectangle, count_in_rectangle_with};
pub use search::{find_apoints, find_apoints_in, find_apoints_with};
pub use table::{ingest_zero_table, parse_zero_table, INGEST_RESIDUAL_TOL};

use crate::complexfn::ComplexValue;
use crate::dirichlet::sigma_star;
use crate::error::{Error, Result};

/// One root `rho_a = beta + i gamma` of `zeta(s) = a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct APoint {
    pub a: ComplexValue,
    pub beta: f64,
    pub gamma: f64,
    /// `|zeta(rho_a) - a|` after refinement.
    pub residual: f64,
}

impl APoint {
    pub fn rho(&self) -> ComplexValue {
        ComplexValue::new(self.beta, self.gamma)
    }
}

/// The rectangle `[sigma_min, sigma_max] x [t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchWindow {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl SearchWindow {
    /// `t_min == t_max` is accepted and denotes an empty window.
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        let w = Self {
            sigma_min,
            sigma_max,
            t_min,
            t_max,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.sigma_min, self.sigma_max, self.t_min, self.t_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidWindow(format!("{self}: non-finite bound")));
        }
        if self.sigma_min >= self.sigma_max {
            return Err(Error::InvalidWindow(format!("{self}: need sigma_min < sigma_max")));
        }
        if !(self.t_min > 0.0 && self.t_min <= self.t_max) {
            return Err(Error::InvalidWindow(format!("{self}: need 0 < t_min <= t_max")));
        }
        Ok(())
    }

    pub fn is_degenerate(&self) -> bool {
        self.t_min == self.t_max
    }

    pub fn contains(&self, s: ComplexValue, margin: f64) -> bool {
        s.re >= self.sigma_min - margin
            && s.re <= self.sigma_max + margin
            && s.im >= self.t_min - margin
            && s.im <= self.t_max + margin
    }

    pub fn width(&self) -> f64 {
        self.sigma_max - self.sigma_min
    }

    pub fn height(&self) -> f64 {
        self.t_max - self.t_min
    }
}

impl fmt::Display for SearchWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            self.sigma_min, self.sigma_max, self.t_min, self.t_max
        )
    }
}

/// Tuning for counting and search; defaults are part of the cache key.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    /// Minimum `|zeta(s) - a|` tolerated on a contour.
    pub boundary_clearance: f64,
    /// Initial strips have height `factor / log T`.
    pub strip_height_factor: f64,
    /// Absolute quadrature budget for the winding integral on one edge.
    pub edge_tol: f64,
    pub max_panel: f64,
    /// Accepted `|zeta(rho) - a|` after Newton refinement.
    pub residual_tol: f64,
    /// Roots closer than this are treated as one.
    pub dedup_radius: f64,
    pub max_depth: u32,
    /// Lower edge of the a-point windows; keeps the contour off the real axis.
    pub bottom_t: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            boundary_clearance: 1e-4,
            strip_height_factor: 0.5,
            edge_tol: 1e-8,
            max_panel: 1.0,
            residual_tol: 1e-8,
            dedup_radius: 1e-9,
            max_depth: 40,
            bottom_t: 0.01,
        }
    }
}

impl SearchParams {
    pub fn fingerprint(&self) -> String {
        format!(
            "c{:e}:h{:e}:q{:e}:p{:e}:r{:e}:d{:e}:m{}:b{:e}",
            self.boundary_clearance,
            self.strip_height_factor,
            self.edge_tol,
            self.max_panel,
            self.residual_tol,
            self.dedup_radius,
            self.max_depth,
            self.bottom_t
        )
    }
}

/// Right edge `kappa(a)` of the search region: `sigma*(a) + 1/2` in general,
/// 2 for `a = 0`, 4 for `a = 1`.
pub fn right_bound(a: ComplexValue) -> Result<f64> {
    if a == ComplexValue::new(0.0, 0.0) {
        Ok(2.0)
    } else if a == ComplexValue::new(1.0, 0.0) {
        Ok(4.0)
    } else {
        Ok(sigma_star(a)? + 0.5)
    }
}

/// `[0, kappa(a)] x [bottom_t, T]`, the region searched for a-points with `0 < gamma < T`.
pub fn apoint_window(a: ComplexValue, t: f64, sp: &SearchParams) -> Result<SearchWindow> {
    let t_min = sp.bottom_t.min(t);
    SearchWindow::new(0.0, right_bound(a)?, t_min, t)
}

/// Counting main term and the multiplicity constant `c_a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountEstimate {
    /// Filled in by callers that have an exact count.
    pub exact_count: Option<usize>,
    pub main_term: f64,
    pub c_a: f64,
}

impl CountEstimate {
    pub fn with_count(mut self, count: usize) -> Self {
        self.exact_count = Some(count);
        self
    }

    /// `count / main_term - 1`, when a count is present.
    pub fn relative_deviation(&self) -> Option<f64> {
        self.exact_count.map(|n| n as f64 / self.main_term - 1.0)
    }
}

/// `(T/2pi) log(T/(2 pi e c_a))` with `c_1 = 2` and `c_a = 1` otherwise.
pub fn expected_count(a: ComplexValue, t: f64) -> Result<CountEstimate> {
    let c_a = if a == ComplexValue::new(1.0, 0.0) { 2.0 } else { 1.0 };
    let min = 2.0 * PI * E * c_a;
    if !(t > min) {
        return Err(Error::TooSmallT { t, min });
    }
    Ok(CountEstimate {
        exact_count: None,
        main_term: t / (2.0 * PI) * (t / min).ln(),
        c_a,
    })
}

/// a-points known to be complete on `window`.
#[derive(Debug, Clone, PartialEq)]
pub struct APointSet {
    pub a: ComplexValue,
    pub window: SearchWindow,
    pub points: Vec<APoint>,
}

impl APointSet {
    /// Search `[0, kappa(a)] x (0, T']`, where `T' >= t` is the first of
    /// `t, t + 0.1, ...` whose top edge clears every a-point.
    pub fn compute(
        a: ComplexValue,
        t: f64,
        p: &crate::EvalParams,
        sp: &SearchParams,
    ) -> Result<Self> {
        let mut last_err = None;
        for k in 0..10 {
            let top = t + 0.1 * k as f64;
            let window = apoint_window(a, top, sp)?;
            match find_apoints_in(a, &window, p, sp) {
                Ok(points) => return Ok(Self { a, window, points }),
                Err(Error::BoundaryTooClose { at, value }) if (at.im - top).abs() < 1e-12 => {
                    last_err = Some(Error::BoundaryTooClose { at, value });
                }
                Err(e) => return Err(e),
            }
        }
        Err(last_err.expect("loop ran"))
    }

    /// Wraps an ingested zero table, assumed complete up to its last ordinate.
    pub fn from_zero_table(points: Vec<APoint>) -> Self {
        let bottom = SearchParams::default().bottom_t;
        let top = points.last().map_or(bottom, |p| p.gamma.max(bottom));
        Self {
            a: ComplexValue::new(0.0, 0.0),
            window: SearchWindow {
                sigma_min: 0.0,
                sigma_max: 1.0,
                t_min: bottom,
                t_max: top,
            },
            points,
        }
    }

    /// Fails unless the set covers ordinates up to `t`.
    pub fn require(&self, t: f64) -> Result<()> {
        if self.covered_t() < t {
            return Err(Error::InsufficientPoints {
                covered: self.covered_t(),
                requested: t,
            });
        }
        Ok(())
    }

    /// Upper end of the ordinate range covered.
    pub fn covered_t(&self) -> f64 {
        self.window.t_max
    }

    pub fn below(&self, t: f64) -> impl Iterator<Item = &APoint> {
        self.points.iter().take_while(move |p| p.gamma < t)
    }
}

/// `N_a(T)` by the argument principle on `[0, kappa(a)] x [bottom_t, T']`,
/// where `T'` is the first of `T, T - 0.01, T + 0.01, T - 0.02, ...` whose top
/// edge clears every a-point. Returns the count and `T'`.
pub fn count_apoints(
    a: ComplexValue,
    t: f64,
    p: &crate::EvalParams,
    sp: &SearchParams,
) -> Result<(usize, f64)> {
    let mut last_err = None;
    for k in 0..21 {
        let shift = 0.01 * ((k + 1) / 2) as f64 * if k % 2 == 1 { -1.0 } else { 1.0 };
        let top = t + shift;
        let window = apoint_window(a, top, sp)?;
        match count_in_rectangle_with(a, &window, p, sp) {
            Ok(n) => return Ok((n, top)),
            Err(Error::BoundaryTooClose { at, value }) if (at.im - top).abs() < 1e-12 => {
                last_err = Some(Error::BoundaryTooClose { at, value });
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("loop ran"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexfn::cplx;

    #[test]
    fn main_terms() {
        let e0 = expected_count(cplx(0.0, 0.0), 100.0).unwrap();
        assert!((e0.main_term - 28.127343587325348).abs() < 1e-10);
        assert_eq!(e0.c_a, 1.0);
        let e5 = expected_count(cplx(5.0, 0.0), 100.0).unwrap();
        assert_eq!(e5.main_term, e0.main_term);
        let e1 = expected_count(cplx(1.0, 0.0), 1000.0).unwrap();
        assert_eq!(e1.c_a, 2.0);
        assert!((e1.main_term - 537.4234352366416).abs() < 1e-9);
        assert!(matches!(expected_count(cplx(0.0, 0.0), 10.0), Err(Error::TooSmallT { .. })));
        assert!(matches!(expected_count(cplx(1.0, 0.0), 20.0), Err(Error::TooSmallT { .. })));
        assert_eq!(e0.with_count(29).exact_count, Some(29));
    }

    #[test]
    fn window_validation() {
        assert!(SearchWindow::new(0.0, 1.0, 1.0, 2.0).is_ok());
        assert!(SearchWindow::new(0.0, 1.0, 2.0, 2.0).unwrap().is_degenerate());
        assert!(SearchWindow::new(1.0, 1.0, 1.0, 2.0).is_err());
        assert!(SearchWindow::new(0.0, 1.0, 0.0, 2.0).is_err());
        assert!(SearchWindow::new(0.0, 1.0, 3.0, 2.0).is_err());
    }

    #[test]
    fn zero_count_at_hundred() {
        let p = crate::EvalParams::default();
        let (n, top) = count_apoints(cplx(0.0, 0.0), 100.0, &p, &SearchParams::default()).unwrap();
        assert_eq!(n, 29);
        assert_eq!(top, 100.0);
    }

    #[test]
    fn table_backed_set() {
        let pts = parse_zero_table("14.134725\n21.022040\n").unwrap();
        let set = APointSet::from_zero_table(pts);
        assert!(set.require(21.0).is_ok());
        assert!(matches!(set.require(30.0), Err(Error::InsufficientPoints { .. })));
        assert_eq!(set.below(20.0).count(), 1);
    }

    #[test]
    fn right_bounds() {
        assert_eq!(right_bound(cplx(0.0, 0.0)).unwrap(), 2.0);
        assert_eq!(right_bound(cplx(1.0, 0.0)).unwrap(), 4.0);
        let k2 = right_bound(cplx(2.0, 0.0)).unwrap();
        assert!((k2 - 2.2286472389981836).abs() < 1e-9);
    }
}
