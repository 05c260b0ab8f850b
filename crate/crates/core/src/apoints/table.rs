use std::path::Path;

use super::APoint;
use crate::complexfn::{zeta, ComplexValue, EvalParams};
use crate::error::{Error, Result};

/// Largest `|zeta(1/2 + i gamma)|` accepted for a tabulated ordinate.
pub const INGEST_RESIDUAL_TOL: f64 = 1e-5;

/// Reads one ordinate per line; blank lines and `#` comments are skipped.
/// Line numbers in errors are 1-based.
pub fn ingest_zero_table(path: impl AsRef<Path>) -> Result<Vec<APoint>> {
    let text = std::fs::read_to_string(path)?;
    parse_zero_table(&text)
}

pub fn parse_zero_table(text: &str) -> Result<Vec<APoint>> {
    let p = EvalParams::default();
    let mut out: Vec<APoint> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let gamma: f64 = trimmed.parse().map_err(|_| Error::ParseError(line))?;
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::ParseError(line));
        }
        if out.last().is_some_and(|prev| gamma <= prev.gamma) {
            return Err(Error::NotAscending(line));
        }
        let a = ComplexValue::new(0.0, 0.0);
        let residual = zeta(ComplexValue::new(0.5, gamma), &p)
            .map_err(|_| Error::ParseError(line))?
            .norm();
        if residual > INGEST_RESIDUAL_TOL {
            return Err(Error::ResidualTooLarge { line, residual });
        }
        out.push(APoint {
            a,
            beta: 0.5,
            gamma,
            residual,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_table() {
        let pts = parse_zero_table("14.134725\n21.022040\n25.010858\n").unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p.residual <= INGEST_RESIDUAL_TOL && p.beta == 0.5));
    }

    #[test]
    fn rejections() {
        assert!(parse_zero_table("").unwrap().is_empty());
        assert_eq!(parse_zero_table("abc"), Err(Error::ParseError(1)));
        assert_eq!(parse_zero_table("21.022040\n14.134725\n"), Err(Error::NotAscending(2)));
        assert!(matches!(
            parse_zero_table("14.134725\n20.0\n"),
            Err(Error::ResidualTooLarge { line: 2, .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.txt");
        std::fs::write(&path, "# ordinates\n14.134725\n").unwrap();
        assert_eq!(ingest_zero_table(&path).unwrap().len(), 1);
        assert!(matches!(ingest_zero_table(dir.path().join("missing")), Err(Error::Io(_))));
    }
}
