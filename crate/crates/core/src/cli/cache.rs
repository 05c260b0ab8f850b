use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use crate::apoints::{APoint, SearchParams};
use crate::complexfn::{ComplexValue, EvalParams};
use crate::error::{Error, Result};

pub const APOINT_CSV_HEADER: &str = "a_re,a_im,beta,gamma,residual";

/// A cached a-point list; `created` is the file modification time.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheEntry {
    pub key: String,
    pub points: Vec<APoint>,
    pub created: Option<SystemTime>,
}

/// Hex SHA-256 prefix over `a`, the ordinate range and both parameter
/// fingerprints (which carry the parameter version).
pub fn cache_key(a: ComplexValue, t_max: f64, p: &EvalParams, sp: &SearchParams) -> String {
    let canonical = format!(
        "apoints|a={:?},{:?}|t=(0,{:?}]|{}|{}",
        a.re,
        a.im,
        t_max,
        p.fingerprint(),
        sp.fingerprint()
    );
    let digest = Sha256::digest(canonical.as_bytes());
    hex::encode(&digest[..8])
}

pub fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("apoints_{key}.csv"))
}

pub fn points_to_csv(points: &[APoint]) -> String {
    let mut out = String::from(APOINT_CSV_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(out, "{},{},{},{},{}", p.a.re, p.a.im, p.beta, p.gamma, p.residual);
    }
    out
}

pub fn points_from_csv(text: &str) -> Result<Vec<APoint>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == APOINT_CSV_HEADER => {}
        _ => return Err(Error::ParseError(1)),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::ParseError(i + 1))?;
        if v.len() != 5 {
            return Err(Error::ParseError(i + 1));
        }
        out.push(APoint {
            a: ComplexValue::new(v[0], v[1]),
            beta: v[2],
            gamma: v[3],
            residual: v[4],
        });
    }
    Ok(out)
}

pub fn load(dir: &Path, key: &str) -> Result<Option<CacheEntry>> {
    let path = entry_path(dir, key);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path)?;
    let created = fs::metadata(&path).and_then(|m| m.modified()).ok();
    Ok(Some(CacheEntry {
        key: key.to_string(),
        points: points_from_csv(&text)?,
        created,
    }))
}

pub fn store(dir: &Path, key: &str, points: &[APoint]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = entry_path(dir, key);
    fs::write(&path, points_to_csv(points))?;
    Ok(path)
}
