use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

use super::report::{ReportRow, TheoremReport};
use super::REPORT_EPSILON;
use crate::apoints::{count_apoints, expected_count, APointSet, SearchParams};
use crate::complexfn::{delta, zeta, ComplexValue, EvalParams};
use crate::dirichlet::{b_a_estimate, lambda_a, psi, DirichletSeries};
use crate::error::{Error, Result};
use crate::sum::ComplexSum;

const ZERO: ComplexValue = ComplexValue { re: 0.0, im: 0.0 };
const ONE: ComplexValue = ComplexValue { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MainMode {
    /// `a (T/2pi) log(T/2pi e) - psi(T/2pi)`
    Psi,
    /// `a (T/2pi) log(T/2pi e) - T/2pi`
    Rh,
}

impl std::str::FromStr for MainMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi" => Ok(Self::Psi),
            "rh" => Ok(Self::Rh),
            other => Err(Error::InvalidParams(format!("unknown mode {other:?}"))),
        }
    }
}

/// `sum Delta(rho_a)` over `0 < gamma_a < t`, in ascending `gamma`.
pub fn thm2_sum(set: &APointSet, t: f64) -> Result<ComplexValue> {
    set.require(t)?;
    let mut acc = ComplexSum::new();
    for p in set.below(t).filter(|p| p.beta >= 0.0) {
        acc.add(delta(p.rho())?);
    }
    Ok(acc.value())
}

pub fn thm2_main(a: ComplexValue, t: f64, mode: MainMode) -> Result<ComplexValue> {
    let min = 2.0 * PI * E;
    if !(t > min) {
        return Err(Error::TooSmallT { t, min });
    }
    let x = t / (2.0 * PI);
    let counting = a * (x * (x / E).ln());
    let tail = match mode {
        MainMode::Psi => psi(x),
        MainMode::Rh => x,
    };
    Ok(counting - tail)
}

fn require_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::InvalidGrid { min: 3 });
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParams("T grid must be finite and strictly ascending".into()));
    }
    Ok(())
}

fn collect_rows<F>(grid: &[f64], row: F) -> Result<Vec<ReportRow>>
where
    F: Fn(f64) -> Result<ReportRow> + Sync,
{
    grid.par_iter()
        .map(|&t| row(t))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Midpoint between the ordinates on either side of `t`, keeping `T` away
/// from every a-point. `t` is returned unchanged when the set does not reach
/// past it.
pub fn nudge_t(set: &APointSet, t: f64) -> f64 {
    let below = set.below(t).last().map(|p| p.gamma);
    let above = set.points.iter().find(|p| p.gamma >= t).map(|p| p.gamma);
    match (below, above) {
        (Some(lo), Some(hi)) if hi <= set.covered_t() => 0.5 * (lo + hi),
        _ => t,
    }
}

/// Rows are evaluated at the nudged ordinates of `grid`.
pub fn thm2_report(set: &APointSet, grid: &[f64], mode: MainMode) -> Result<TheoremReport> {
    require_grid(grid)?;
    let a = set.a;
    let nudged: Vec<f64> = grid.iter().map(|&t| nudge_t(set, t)).collect();
    require_grid(&nudged)?;
    let rows = collect_rows(&nudged, |t| Ok(ReportRow::new(t, thm2_sum(set, t)?, thm2_main(a, t, mode)?)))?;
    let mode_name = match mode {
        MainMode::Psi => "psi",
        MainMode::Rh => "rh",
    };
    let counts: Vec<String> = grid.iter().map(|&t| set.below(t).count().to_string()).collect();
    let notes = format!(
        "a={},{}; mode={mode_name}; requested T={:?}; points per row={}; reference exponent {}",
        a.re,
        a.im,
        grid,
        counts.join("/"),
        0.5 + REPORT_EPSILON
    );
    Ok(TheoremReport::new(format!("thm2 a={},{}", a.re, a.im), rows, notes))
}

/// Largest `|a Delta(1 - rho_a) - zeta(1 - rho_a)|` over `gamma_a < t`.
pub fn thm1_identity_check(set: &APointSet, t: f64, p: &EvalParams) -> Result<f64> {
    if set.a == ZERO {
        return Err(Error::ACaseZero);
    }
    set.require(t)?;
    let mut worst = 0.0f64;
    for pt in set.below(t) {
        let w = ONE - pt.rho();
        let defect = (set.a * delta(w)? - zeta(w, p)?).norm();
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// `sum Delta(1 - rho_a)` and `(1/a) sum zeta(1 - rho_a)` over `gamma_a < t`.
pub fn thm1_forms(set: &APointSet, t: f64, p: &EvalParams) -> Result<(ComplexValue, ComplexValue)> {
    if set.a == ZERO {
        return Err(Error::ACaseZero);
    }
    set.require(t)?;
    let mut by_delta = ComplexSum::new();
    let mut by_zeta = ComplexSum::new();
    for pt in set.below(t) {
        let w = ONE - pt.rho();
        by_delta.add(delta(w)?);
        by_zeta.add(zeta(w, p)?);
    }
    Ok((by_delta.value(), by_zeta.value() / set.a))
}

/// Rows compare `sum Delta(1 - rho_a)` with `sum_{n <= T/2pi} Lambda_a(n)`.
/// `coeffs` defaults to a freshly built `Lambda_a` table.
pub fn thm1_growth(
    set: &APointSet,
    grid: &[f64],
    p: &EvalParams,
    coeffs: Option<&DirichletSeries>,
) -> Result<TheoremReport> {
    let a = set.a;
    if a == ZERO {
        return Err(Error::ACaseZero);
    }
    if a == ONE {
        return Err(Error::ACaseOne);
    }
    require_grid(grid)?;
    let need = (grid[grid.len() - 1] / (2.0 * PI)).floor().max(1.0) as usize;
    let built;
    let lam = match coeffs {
        Some(c) => c,
        None => {
            built = lambda_a(need, a)?;
            &built
        }
    };
    if lam.len() < need {
        return Err(Error::InsufficientCoefficients {
            have: lam.len(),
            need,
        });
    }
    let forms = grid
        .par_iter()
        .map(|&t| thm1_forms(set, t, p))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut form_gap = 0.0f64;
    for (&t, &(by_delta, by_zeta)) in grid.iter().zip(&forms) {
        form_gap = form_gap.max((by_delta - by_zeta).norm());
        let m = (t / (2.0 * PI)).floor() as usize;
        let mut acc = ComplexSum::new();
        for n in 1..=m {
            acc.add(lam.coeff(n));
        }
        rows.push(ReportRow::new(t, by_delta, acc.value()));
    }
    let est = b_a_estimate(a, &set.points)?;
    let trend: Vec<String> = match est.lower {
        Some(b) => rows
            .iter()
            .map(|r| format!("{:.3e}", r.lhs.norm() / r.t.powf(b - 0.5)))
            .collect(),
        None => Vec::new(),
    };
    let notes = format!(
        "a={},{}; max |Delta-form - zeta-form| = {:e}; b_a lower (max beta) = {}; sigma* = {}; |lhs|/T^(b-1/2) = [{}]",
        a.re,
        a.im,
        form_gap,
        est.lower.map_or("none".to_string(), |b| b.to_string()),
        est.upper,
        trend.join(", ")
    );
    Ok(TheoremReport::new(format!("thm1 a={},{}", a.re, a.im), rows, notes))
}

/// Rows compare `N_a(T)` with `(T/2pi) log(T/(2 pi e c_a))`.
pub fn count_report(
    a: ComplexValue,
    grid: &[f64],
    p: &EvalParams,
    sp: &SearchParams,
) -> Result<TheoremReport> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParams("T grid must be nonempty and strictly ascending".into()));
    }
    let counted = grid
        .par_iter()
        .map(|&t| {
            let est = expected_count(a, t)?;
            let (n, top) = count_apoints(a, t, p, sp)?;
            Ok((ReportRow::new(t, ComplexValue::new(n as f64, 0.0), ComplexValue::new(est.main_term, 0.0)), top, est.c_a))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let shifted: Vec<String> = counted
        .iter()
        .filter(|(r, top, _)| *top != r.t)
        .map(|(r, top, _)| format!("T={} counted at {}", r.t, top))
        .collect();
    let c_a = counted.first().map_or(1.0, |c| c.2);
    let notes = format!(
        "a={},{}; c_a={}; {}",
        a.re,
        a.im,
        c_a,
        if shifted.is_empty() { "no top-edge shifts".to_string() } else { shifted.join("; ") }
    );
    let rows = counted.into_iter().map(|c| c.0).collect();
    Ok(TheoremReport::new(format!("counts a={},{}", a.re, a.im), rows, notes))
}
