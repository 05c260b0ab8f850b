use serde::{Deserialize, Serialize};
use std::fmt::Write;

use crate::complexfn::ComplexValue;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "T,lhs_re,lhs_im,main_re,main_im,residual_abs";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    #[serde(rename = "T")]
    pub t: f64,
    pub lhs: ComplexValue,
    pub main: ComplexValue,
    pub residual_abs: f64,
}

impl ReportRow {
    pub fn new(t: f64, lhs: ComplexValue, main: ComplexValue) -> Self {
        Self {
            t,
            lhs,
            main,
            residual_abs: (lhs - main).norm(),
        }
    }
}

/// Rows are kept sorted by `T`; `fitted_exponent` is present from three rows on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub label: String,
    pub rows: Vec<ReportRow>,
    pub fitted_exponent: Option<f64>,
    pub notes: String,
}

impl TheoremReport {
    pub fn new(label: impl Into<String>, mut rows: Vec<ReportRow>, notes: impl Into<String>) -> Self {
        rows.sort_by(|x, y| x.t.total_cmp(&y.t));
        let fitted_exponent = fit_exponent(&rows);
        Self {
            label: label.into(),
            rows,
            fitted_exponent,
            notes: notes.into(),
        }
    }

    /// Mean growth factor of `residual_abs` per doubling of `T`.
    pub fn mean_doubling_ratio(&self) -> Option<f64> {
        let ratios: Vec<f64> = self
            .rows
            .windows(2)
            .filter(|w| w[0].residual_abs > 0.0 && w[1].t > w[0].t)
            .map(|w| {
                let per_doubling = std::f64::consts::LN_2 / (w[1].t / w[0].t).ln();
                (w[1].residual_abs / w[0].residual_abs).powf(per_doubling)
            })
            .collect();
        (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64)
    }

    pub fn last(&self) -> Option<&ReportRow> {
        self.rows.last()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
    }

    /// Shortest round-trip float formatting, one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.t, r.lhs.re, r.lhs.im, r.main.re, r.main.im, r.residual_abs
            );
        }
        out
    }
}

/// Least-squares slope of `log residual_abs` against `log T`; `None` with
/// fewer than three rows or a nonpositive residual.
pub fn fit_exponent(rows: &[ReportRow]) -> Option<f64> {
    if rows.len() < 3 || rows.iter().any(|r| !(r.residual_abs > 0.0) || !(r.t > 0.0)) {
        return None;
    }
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.t.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.residual_abs.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexfn::cplx;

    fn power_rows(k: f64) -> Vec<ReportRow> {
        [100.0, 200.0, 400.0, 800.0]
            .iter()
            .map(|&t: &f64| ReportRow::new(t, cplx(t.powf(k), 0.0), cplx(0.0, 0.0)))
            .collect()
    }

    #[test]
    fn exponent_of_pure_power() {
        let r = TheoremReport::new("p", power_rows(0.6), "");
        assert!((r.fitted_exponent.unwrap() - 0.6).abs() < 1e-12);
        assert!((r.mean_doubling_ratio().unwrap() - 2f64.powf(0.6)).abs() < 1e-12);
    }

    #[test]
    fn short_reports_have_no_exponent() {
        let rows = power_rows(1.0)[..2].to_vec();
        assert_eq!(TheoremReport::new("p", rows, "").fitted_exponent, None);
    }

    #[test]
    fn rows_sorted_and_serialized() {
        let mut rows = power_rows(0.5);
        rows.reverse();
        let r = TheoremReport::new("thm2", rows, "n");
        assert!(r.rows.windows(2).all(|w| w[0].t < w[1].t));
        let csv = r.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 5);
        let json = r.to_json().unwrap();
        assert!(json.contains("\"T\": 100.0"));
        assert_eq!(TheoremReport::from_json(&json).unwrap(), r);
    }
}
