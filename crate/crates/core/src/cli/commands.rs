use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::cache;
use super::{Command, Common, ExperimentConfig, Format, VerifyCmd, EXIT_OK, EXIT_VERIFY};
use crate::apoints::{
    apoint_window, expected_count, ingest_zero_table, right_bound, APointSet, SearchParams,
    SearchWindow,
};
use crate::complexfn::{delta, zeta, ComplexValue, EvalParams};
use crate::dirichlet::{lambda_a, psi, sigma_star};
use crate::error::{Error, Result};
use crate::verify::{
    contour_residue_check, count_report, gonek_quadrature, thm1_forms, thm1_growth,
    thm1_identity_check, thm2_report, GonekSeries, MainMode, QuadratureParams, ReportRow,
    TheoremReport, PASS_EPSILON,
};

/// Extra ordinate range searched beyond the thm2 grid.
const NUDGE_MARGIN: f64 = 2.0;

type Out<'a> = &'a mut dyn Write;

fn io<T>(r: std::io::Result<T>) -> Result<T> {
    r.map_err(Error::from)
}

pub(super) fn dispatch(cmd: Command, out: Out, err: Out) -> Result<i32> {
    let p = EvalParams::default();
    match cmd {
        Command::Zeta { s } => {
            let z = zeta(s, &p)?;
            io(writeln!(out, "{}", format_complex(z)))?;
            io(writeln!(out, "modulus {:.6e}", z.norm()))?;
            Ok(EXIT_OK)
        }
        Command::Delta { s } => {
            let d = delta(s)?;
            io(writeln!(out, "{}", format_complex(d)))?;
            io(writeln!(out, "modulus {:.6e}", d.norm()))?;
            Ok(EXIT_OK)
        }
        Command::Psi { x } => {
            io(writeln!(out, "{}", psi(x)))?;
            Ok(EXIT_OK)
        }
        Command::LambdaA { a, n } => {
            let lam = lambda_a(n.max(1), a)?;
            io(writeln!(out, "n,re,im"))?;
            for (i, c) in lam.coeffs().iter().enumerate() {
                io(writeln!(out, "{},{},{}", i + 1, c.re, c.im))?;
            }
            Ok(EXIT_OK)
        }
        Command::Apoints(c) => with_pool(&c, 100.0, out, err, |cfg, out, _| cmd_apoints(cfg, &p, out)),
        Command::IngestZeros(c) => with_pool(&c, 100.0, out, err, |cfg, out, _| cmd_ingest(cfg, out)),
        Command::Report(c) => cmd_report(&c.out_dir, out),
        Command::Verify { which } => match which {
            VerifyCmd::Thm2 { common, mode } => {
                with_pool(&common, 2000.0, out, err, |cfg, out, err| verify_thm2(cfg, mode.into(), &p, out, err))
            }
            VerifyCmd::Thm1(c) => with_pool(&c, 100.0, out, err, |cfg, out, err| verify_thm1(cfg, &p, out, err)),
            VerifyCmd::Gonek(c) => with_pool(&c, 400.0, out, err, |cfg, out, err| verify_gonek(cfg, &p, out, err)),
            VerifyCmd::Contour(c) => with_pool(&c, 50.0, out, err, |cfg, out, err| verify_contour(cfg, &p, out, err)),
            VerifyCmd::Counts(c) => with_pool(&c, 100.0, out, err, |cfg, out, err| verify_counts(cfg, &p, out, err)),
        },
    }
}

/// Runs `f` on a pool of `workers` threads. Output is buffered because the
/// caller's writers need not be `Send`.
fn with_pool<F>(c: &Common, default_t: f64, out: Out, err: Out, f: F) -> Result<i32>
where
    F: FnOnce(&ExperimentConfig, Out, Out) -> Result<i32> + Send,
{
    let cfg = ExperimentConfig::from_common(c, default_t)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParams(e.to_string()))?;
    let mut obuf = Vec::new();
    let mut ebuf = Vec::new();
    let r = pool.install(|| f(&cfg, &mut obuf, &mut ebuf));
    io(out.write_all(&obuf))?;
    io(err.write_all(&ebuf))?;
    r
}

/// Twelve decimals, `re` alone when the imaginary part is zero.
pub(super) fn format_complex(z: ComplexValue) -> String {
    if z.im == 0.0 {
        format!("{:.12}", z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{:.12}{sign}{:.12}i", z.re, z.im.abs())
    }
}

/// Cache-backed a-points with `0 < gamma <= t_max`; an a = 0 run with
/// `--zeros-file` uses the table instead of searching.
fn obtain_set(cfg: &ExperimentConfig, p: &EvalParams) -> Result<(APointSet, Option<PathBuf>)> {
    let sp = SearchParams::default();
    if cfg.a == ComplexValue::new(0.0, 0.0) {
        if let Some(path) = &cfg.zeros_file {
            let set = APointSet::from_zero_table(ingest_zero_table(path)?);
            set.require(cfg.t_max)?;
            return Ok((set, None));
        }
    }
    let key = cache::cache_key(cfg.a, cfg.t_max, p, &sp);
    let window = apoint_window(cfg.a, cfg.t_max, &sp)?;
    let path = cache::entry_path(&cfg.cache_dir, &key);
    if let Some(entry) = cache::load(&cfg.cache_dir, &key)? {
        let set = APointSet {
            a: cfg.a,
            window,
            points: entry.points,
        };
        return Ok((set, Some(path)));
    }
    let full = APointSet::compute(cfg.a, cfg.t_max, p, &sp)?;
    let points: Vec<_> = full.points.into_iter().filter(|x| x.gamma <= cfg.t_max).collect();
    cache::store(&cfg.cache_dir, &key, &points)?;
    Ok((
        APointSet {
            a: cfg.a,
            window,
            points,
        },
        Some(path),
    ))
}

fn cmd_apoints(cfg: &ExperimentConfig, p: &EvalParams, out: Out) -> Result<i32> {
    let (set, path) = obtain_set(cfg, p)?;
    io(writeln!(out, "a = {}", format_complex(cfg.a)))?;
    io(writeln!(out, "T = {}", cfg.t_max))?;
    io(writeln!(out, "count = {}", set.points.len()))?;
    match expected_count(cfg.a, cfg.t_max) {
        Ok(est) => io(writeln!(out, "main term = {} (c_a = {})", est.main_term, est.c_a))?,
        Err(_) => io(writeln!(out, "main term = n/a (T too small)"))?,
    }
    if let Some(path) = path {
        io(writeln!(out, "file = {}", path.display()))?;
    }
    Ok(EXIT_OK)
}

fn cmd_ingest(cfg: &ExperimentConfig, out: Out) -> Result<i32> {
    let path = cfg
        .zeros_file
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("ingest-zeros needs --zeros-file".into()))?;
    let points = ingest_zero_table(path)?;
    let bytes = fs::read(path)?;
    let digest = <sha2::Sha256 as sha2::Digest>::digest(&bytes);
    let key = format!("zeros-{}", hex::encode(&digest[..8]));
    let stored = cache::store(&cfg.cache_dir, &key, &points)?;
    let worst = points.iter().map(|x| x.residual).fold(0.0, f64::max);
    io(writeln!(out, "ordinates = {}", points.len()))?;
    io(writeln!(out, "last gamma = {}", points.last().map_or(0.0, |x| x.gamma)))?;
    io(writeln!(out, "max residual = {worst:e}"))?;
    io(writeln!(out, "file = {}", stored.display()))?;
    Ok(EXIT_OK)
}

fn write_report(cfg: &ExperimentConfig, name: &str, report: &TheoremReport, out: Out) -> Result<()> {
    fs::create_dir_all(&cfg.out_dir)?;
    let json = report.to_json()?;
    let csv = report.to_csv();
    fs::write(cfg.out_dir.join(format!("{name}_report.json")), &json)?;
    fs::write(cfg.out_dir.join(format!("{name}_report.csv")), &csv)?;
    match cfg.output_format {
        Format::Json => io(writeln!(out, "{json}")),
        Format::Csv => io(write!(out, "{csv}")),
    }
}

/// Reports the first failed check, if any.
fn conclude(failures: &[String], err: Out) -> Result<i32> {
    match failures.first() {
        None => Ok(EXIT_OK),
        Some(first) => {
            io(writeln!(err, "verification failed: {first}"))?;
            Ok(EXIT_VERIFY)
        }
    }
}

fn verify_thm2(cfg: &ExperimentConfig, mode: MainMode, p: &EvalParams, out: Out, err: Out) -> Result<i32> {
    let grid = if cfg.t_grid.is_empty() {
        vec![250.0, 500.0, 1000.0, 2000.0]
    } else {
        cfg.t_grid.clone()
    };
    // Search a little past the grid so every row can be nudged between ordinates.
    let cfg = ExperimentConfig {
        t_max: cfg.t_max.max(grid[grid.len() - 1]) + NUDGE_MARGIN,
        ..cfg.clone()
    };
    let (set, _) = obtain_set(&cfg, p)?;
    let report = thm2_report(&set, &grid, mode)?;
    write_report(&cfg, "thm2", &report, out)?;
    let mut failures = Vec::new();
    let max_exp = 0.5 + PASS_EPSILON;
    match report.fitted_exponent {
        Some(e) if e <= max_exp => {}
        other => failures.push(format!("fitted_exponent {other:?} exceeds {max_exp}")),
    }
    if let Some(r) = report.mean_doubling_ratio() {
        if r >= 2.0 {
            failures.push(format!("mean residual growth per doubling {r} is not below 2"));
        }
    }
    let ratio_cap = cfg.tol_or(0.05);
    if let Some(last) = report.last() {
        if last.residual_abs / last.t > ratio_cap {
            failures.push(format!("residual/T = {} exceeds {ratio_cap} at T = {}", last.residual_abs / last.t, last.t));
        }
    }
    conclude(&failures, err)
}

fn verify_thm1(cfg: &ExperimentConfig, p: &EvalParams, out: Out, err: Out) -> Result<i32> {
    if cfg.a == ComplexValue::new(0.0, 0.0) {
        return Err(Error::ACaseZero);
    }
    if cfg.a == ComplexValue::new(1.0, 0.0) {
        return Err(Error::ACaseOne);
    }
    let grid = if cfg.t_grid.len() >= 3 {
        cfg.t_grid.clone()
    } else {
        vec![cfg.t_max / 4.0, cfg.t_max / 2.0, cfg.t_max]
    };
    let (set, _) = obtain_set(cfg, p)?;
    let report = thm1_growth(&set, &grid, p, None)?;
    write_report(cfg, "thm1", &report, out)?;
    let tol = cfg.tol_or(1e-6);
    let mut failures = Vec::new();
    let defect = thm1_identity_check(&set, cfg.t_max, p)?;
    if defect > tol {
        failures.push(format!("per-point identity defect {defect:e} exceeds {tol:e}"));
    }
    for &t in &grid {
        let (d, z) = thm1_forms(&set, t, p)?;
        if (d - z).norm() > tol {
            failures.push(format!("Delta-form and zeta-form differ by {:e} at T = {t}", (d - z).norm()));
        }
    }
    conclude(&failures, err)
}

/// Relative discrepancies may rise at most once along the grid.
fn mostly_decreasing(values: &[f64]) -> bool {
    values.windows(2).filter(|w| w[1] > w[0]).count() <= 1
}

fn verify_gonek(cfg: &ExperimentConfig, p: &EvalParams, out: Out, err: Out) -> Result<i32> {
    let grid = if cfg.t_grid.is_empty() { vec![100.0, 200.0, 400.0] } else { cfg.t_grid.clone() };
    let q = QuadratureParams {
        max_abs_err: cfg.tol_or(1e-6),
        ..QuadratureParams::default()
    };
    let (series, c) = if cfg.a == ComplexValue::new(0.0, 0.0) {
        (GonekSeries::VonMangoldt, 1.25)
    } else {
        (GonekSeries::LambdaA(cfg.a), sigma_star(cfg.a)? + 0.25)
    };
    let rows = grid
        .iter()
        .map(|&t| {
            let (integral, sum) = gonek_quadrature(&series, c, 0, t, &q, p)?;
            Ok(ReportRow::new(t, integral, sum))
        })
        .collect::<Result<Vec<_>>>()?;
    let rel: Vec<f64> = rows.iter().map(|r| r.residual_abs / r.main.norm().max(1.0)).collect();
    let notes = format!(
        "c={c}; m=0; relative discrepancy = [{}]",
        rel.iter().map(|r| format!("{r:.6e}")).collect::<Vec<_>>().join(", ")
    );
    let report = TheoremReport::new(format!("gonek a={},{}", cfg.a.re, cfg.a.im), rows, notes);
    write_report(cfg, "gonek", &report, out)?;
    let mut failures = Vec::new();
    if !mostly_decreasing(&rel) {
        failures.push("relative discrepancy rises more than once along the grid".to_string());
    }
    conclude(&failures, err)
}

fn verify_contour(cfg: &ExperimentConfig, p: &EvalParams, out: Out, err: Out) -> Result<i32> {
    let sp = SearchParams::default();
    let q = QuadratureParams {
        max_abs_err: cfg.tol_or(1e-6),
        ..QuadratureParams::default()
    };
    let kappa = right_bound(cfg.a)?;
    let mut last = None;
    let mut result = None;
    for k in 0..10 {
        let top = cfg.t_max + 0.01 * k as f64;
        let w = SearchWindow::new(-0.3, kappa, 1.0, top)?;
        match contour_residue_check(cfg.a, &w, &q, p, &sp) {
            Ok(r) => {
                result = Some((top, r));
                break;
            }
            Err(e @ Error::BoundaryTooClose { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    let (top, (quad, residues)) = match result {
        Some(r) => r,
        None => return Err(last.expect("loop ran")),
    };
    let notes = format!("window [-0.3, {kappa}] x [1, {top}]");
    let report = TheoremReport::new(
        format!("contour a={},{}", cfg.a.re, cfg.a.im),
        vec![ReportRow::new(top, quad, residues)],
        notes,
    );
    write_report(cfg, "contour", &report, out)?;
    let mut failures = Vec::new();
    let gap = (quad - residues).norm();
    if gap >= q.max_abs_err {
        failures.push(format!("|quadrature - residue_sum| = {gap:e} exceeds {:e}", q.max_abs_err));
    }
    conclude(&failures, err)
}

fn verify_counts(cfg: &ExperimentConfig, p: &EvalParams, out: Out, err: Out) -> Result<i32> {
    let grid = if cfg.t_grid.is_empty() { vec![cfg.t_max] } else { cfg.t_grid.clone() };
    let report = count_report(cfg.a, &grid, p, &SearchParams::default())?;
    write_report(cfg, "counts", &report, out)?;
    let tol = cfg.tol_or(0.1);
    let mut failures = Vec::new();
    for r in &report.rows {
        let rel = (r.lhs.re / r.main.re - 1.0).abs();
        if rel > tol {
            failures.push(format!("|N/main - 1| = {rel} exceeds {tol} at T = {}", r.t));
        }
        if cfg.a == ComplexValue::new(0.0, 0.0) && r.residual_abs > 3.0 * r.t.ln() {
            failures.push(format!("|N - main| = {} exceeds 3 log T at T = {}", r.residual_abs, r.t));
        }
    }
    conclude(&failures, err)
}

fn cmd_report(dir: &Path, out: Out) -> Result<i32> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with("_report.json"))
        .collect();
    files.sort();
    io(writeln!(out, "label,rows,fitted_exponent,last_T,last_residual_abs"))?;
    for f in files {
        let r = TheoremReport::from_json(&fs::read_to_string(&f)?)?;
        let (t, res) = r.last().map_or((f64::NAN, f64::NAN), |x| (x.t, x.residual_abs));
        let exp = r.fitted_exponent.map_or("".to_string(), |e| e.to_string());
        io(writeln!(out, "{},{},{},{},{}", r.label, r.rows.len(), exp, t, res))?;
    }
    Ok(EXIT_OK)
}
