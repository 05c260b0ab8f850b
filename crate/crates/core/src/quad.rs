//! Gauss–Kronrod (7/15) quadrature of complex-valued integrands along straight
//! segments of the complex plane.

use crate::complexfn::ComplexValue;
use crate::error::Result;
use crate::sum::ComplexSum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Kronrod and embedded Gauss estimates of `int_a^b f(z) dz` for each of the
/// `K` integrand components.
pub fn kronrod_panel<const K: usize, F>(
    f: &F,
    a: ComplexValue,
    b: ComplexValue,
) -> Result<([ComplexValue; K], [ComplexValue; K])>
where
    F: Fn(ComplexValue) -> Result<[ComplexValue; K]>,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron = [ComplexValue::new(0.0, 0.0); K];
    let mut gauss = [ComplexValue::new(0.0, 0.0); K];
    let centre = f(mid)?;
    for c in 0..K {
        kron[c] = centre[c] * WGK[7];
        gauss[c] = centre[c] * WG[3];
    }
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let lo = f(mid - half * x)?;
        let hi = f(mid + half * x)?;
        for c in 0..K {
            let pair = lo[c] + hi[c];
            kron[c] += pair * WGK[j];
            if j % 2 == 1 {
                gauss[c] += pair * WG[j / 2];
            }
        }
    }
    for c in 0..K {
        kron[c] *= half;
        gauss[c] *= half;
    }
    Ok((kron, gauss))
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    /// Absolute error budget for the whole segment.
    pub abs_tol: f64,
    /// Longest panel allowed before any error test.
    pub max_panel: f64,
    pub max_depth: u32,
    /// Only the first `controlled` components enter the error test.
    pub controlled: usize,
    /// A panel also passes when its error is below `rel_tol` times its own
    /// Kronrod value; guards against integrand noise near poles.
    pub rel_tol: f64,
    /// Panels shorter than this are accepted unconditionally (and flagged).
    pub min_panel: f64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_panel: 1.0,
            max_depth: 40,
            controlled: usize::MAX,
            rel_tol: 0.0,
            min_panel: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<const K: usize> {
    pub values: [ComplexValue; K],
    /// Sum of the per-panel Kronrod–Gauss differences.
    pub err_est: f64,
    pub panels: usize,
    /// False when some panel hit `max_depth` before meeting its share of the budget.
    pub converged: bool,
}

struct Accumulator<const K: usize> {
    sums: [ComplexSum; K],
    err: f64,
    panels: usize,
    converged: bool,
}

/// Adaptive bisection on `[a, b]`; each panel must meet a share of `abs_tol`
/// proportional to its length. Panels are summed left to right, so the result
/// is independent of scheduling.
pub fn integrate_segment<const K: usize, F>(
    f: &F,
    a: ComplexValue,
    b: ComplexValue,
    opts: &AdaptiveOptions,
) -> Result<QuadResult<K>>
where
    F: Fn(ComplexValue) -> Result<[ComplexValue; K]>,
{
    let length = (b - a).norm();
    let mut acc = Accumulator {
        sums: [ComplexSum::new(); K],
        err: 0.0,
        panels: 0,
        converged: true,
    };
    if length == 0.0 {
        return Ok(finish(acc));
    }
    let ctl = Control {
        density: opts.abs_tol / length,
        controlled: opts.controlled.clamp(1, K),
        rel_tol: opts.rel_tol,
        min_panel: opts.min_panel,
    };
    let pieces = (length / opts.max_panel).ceil().max(1.0) as usize;
    for i in 0..pieces {
        let lo = a + (b - a) * (i as f64 / pieces as f64);
        let hi = a + (b - a) * ((i + 1) as f64 / pieces as f64);
        refine(f, lo, hi, &ctl, opts.max_depth, &mut acc)?;
    }
    Ok(finish(acc))
}

fn finish<const K: usize>(acc: Accumulator<K>) -> QuadResult<K> {
    let mut values = [ComplexValue::new(0.0, 0.0); K];
    for (v, s) in values.iter_mut().zip(acc.sums.iter()) {
        *v = s.value();
    }
    QuadResult {
        values,
        err_est: acc.err,
        panels: acc.panels,
        converged: acc.converged,
    }
}

struct Control {
    density: f64,
    controlled: usize,
    rel_tol: f64,
    min_panel: f64,
}

fn refine<const K: usize, F>(
    f: &F,
    a: ComplexValue,
    b: ComplexValue,
    ctl: &Control,
    depth_left: u32,
    acc: &mut Accumulator<K>,
) -> Result<()>
where
    F: Fn(ComplexValue) -> Result<[ComplexValue; K]>,
{
    let (kron, gauss) = kronrod_panel(f, a, b)?;
    let mut err = 0.0f64;
    let mut scale = 0.0f64;
    for (k, g) in kron.iter().zip(gauss.iter()).take(ctl.controlled) {
        err = err.max((k - g).norm());
        scale = scale.max(k.norm());
    }
    let len = (b - a).norm();
    let budget = (ctl.density * len).max(ctl.rel_tol * scale);
    if err <= budget || depth_left == 0 || len < ctl.min_panel {
        if err > budget {
            acc.converged = false;
        }
        for (s, k) in acc.sums.iter_mut().zip(kron.iter()) {
            s.add(*k);
        }
        acc.err += err;
        acc.panels += 1;
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    refine(f, a, mid, ctl, depth_left - 1, acc)?;
    refine(f, mid, b, ctl, depth_left - 1, acc)
}
