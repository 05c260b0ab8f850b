//! Integer-side arithmetic: the von Mangoldt sieve, Chebyshev `psi`, Dirichlet
//! convolution and inversion, the generalized coefficients `Lambda_a`,
//! ordered factorization counts `d_k*`, and the abscissa bound `sigma*`.

use serde::Serialize;

use crate::apoints::APoint;
use crate::complexfn::{zeta, ComplexValue, EvalParams};
use crate::error::{Error, Result};
use crate::sum::{ComplexSum, KahanSum};

const ZERO: ComplexValue = ComplexValue { re: 0.0, im: 0.0 };
const ONE: ComplexValue = ComplexValue { re: 1.0, im: 0.0 };

/// A truncated ordinary Dirichlet series `sum_{n <= N} c_n n^{-s}`.
///
/// Coefficients are addressed with their natural index `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSeries {
    coeffs: Vec<ComplexValue>,
}

impl DirichletSeries {
    /// `coeffs[0]` is the coefficient of `1^{-s}`.
    pub fn new(coeffs: Vec<ComplexValue>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParams("a Dirichlet series needs N >= 1".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> ComplexValue) -> Self {
        assert!(len >= 1, "a Dirichlet series needs N >= 1");
        Self {
            coeffs: (1..=len).map(f).collect(),
        }
    }

    /// The unit of convolution, `(1, 0, 0, ...)`.
    pub fn identity(len: usize) -> Self {
        Self::from_fn(len, |n| if n == 1 { ONE } else { ZERO })
    }

    /// Coefficients of `zeta(s)`: all ones.
    pub fn zeta(len: usize) -> Self {
        Self::from_fn(len, |_| ONE)
    }

    /// Coefficients of `zeta'(s)`: `-log n`.
    pub fn zeta_deriv(len: usize) -> Self {
        Self::from_fn(len, |n| ComplexValue::new(-(n as f64).ln(), 0.0))
    }

    /// Coefficients of `zeta(s) - a`.
    pub fn zeta_minus(len: usize, a: ComplexValue) -> Self {
        Self::from_fn(len, |n| if n == 1 { ONE - a } else { ONE })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficient of `n^{-s}`; zero beyond the truncation.
    pub fn coeff(&self, n: usize) -> ComplexValue {
        assert!(n >= 1, "Dirichlet coefficients start at n = 1");
        self.coeffs.get(n - 1).copied().unwrap_or(ZERO)
    }

    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    /// The finite sum at `s`.
    pub fn eval(&self, s: ComplexValue) -> ComplexValue {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(i, c)| c * (-s * ((i + 1) as f64).ln()).exp())
            .collect::<ComplexSum>()
            .value()
    }

    /// `sum_{n <= x} c_n (log n)^m`.
    pub fn partial_sum(&self, x: f64, m: u32) -> ComplexValue {
        if x < 1.0 {
            return ZERO;
        }
        let upto = (x.floor() as usize).min(self.len());
        self.coeffs[..upto]
            .iter()
            .enumerate()
            .map(|(i, c)| if m == 0 { *c } else { c * ((i + 1) as f64).ln().powi(m as i32) })
            .collect::<ComplexSum>()
            .value()
    }
}

/// Smallest prime factor of every `n <= len` (0 and 1 map to themselves).
fn smallest_prime_factors(len: usize) -> Vec<u32> {
    let mut spf: Vec<u32> = (0..=len as u32).collect();
    let mut p = 2;
    while p * p <= len {
        if spf[p] == p as u32 {
            let mut m = p * p;
            while m <= len {
                if spf[m] == m as u32 {
                    spf[m] = p as u32;
                }
                m += p;
            }
        }
        p += 1;
    }
    spf
}

/// Von Mangoldt coefficients: `log p` at prime powers `p^k`, zero elsewhere.
pub fn lambda_sieve(len: usize) -> DirichletSeries {
    assert!(len >= 1, "sieve length must be positive");
    let spf = smallest_prime_factors(len);
    DirichletSeries::from_fn(len, |n| {
        if n < 2 {
            return ZERO;
        }
        let p = spf[n] as usize;
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            ComplexValue::new((p as f64).ln(), 0.0)
        } else {
            ZERO
        }
    })
}

/// Cumulative table of `psi` up to a fixed bound, shared read-only.
#[derive(Debug, Clone)]
pub struct PsiTable {
    cumulative: Vec<f64>,
}

impl PsiTable {
    pub fn new(max_x: f64) -> Self {
        let len = (max_x.max(1.0).floor() as usize).max(1);
        let lambda = lambda_sieve(len);
        let mut acc = KahanSum::new();
        let mut cumulative = Vec::with_capacity(len + 1);
        cumulative.push(0.0);
        for c in lambda.coeffs() {
            acc.add(c.re);
            cumulative.push(acc.value());
        }
        Self { cumulative }
    }

    pub fn max_x(&self) -> usize {
        self.cumulative.len() - 1
    }

    /// `psi(x)`; panics when `x` exceeds the table.
    pub fn psi(&self, x: f64) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        let n = x.floor() as usize;
        assert!(n <= self.max_x(), "psi table built up to {}, asked for {x}", self.max_x());
        self.cumulative[n]
    }
}

/// Chebyshev's `psi(x) = sum_{n <= x} Lambda(n)`.
pub fn psi(x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    PsiTable::new(x).psi(x)
}

/// Dirichlet convolution, `(f * g)(n) = sum_{d | n} f(d) g(n/d)`.
pub fn dirichlet_product(f: &DirichletSeries, g: &DirichletSeries) -> Result<DirichletSeries> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch(f.len(), g.len()));
    }
    let len = f.len();
    let mut acc = vec![ComplexSum::new(); len];
    for d in 1..=len {
        let fd = f.coeffs[d - 1];
        if fd == ZERO {
            continue;
        }
        for m in 1..=len / d {
            acc[d * m - 1].add(fd * g.coeffs[m - 1]);
        }
    }
    Ok(DirichletSeries {
        coeffs: acc.iter().map(ComplexSum::value).collect(),
    })
}

/// The Dirichlet inverse `g` with `f * g = identity` up to the truncation.
pub fn dirichlet_inverse(f: &DirichletSeries) -> Result<DirichletSeries> {
    let lead = f.coeffs[0];
    if lead == ZERO {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let len = f.len();
    let inv_lead = lead.inv();
    let mut acc = vec![ComplexSum::new(); len + 1];
    let mut out = vec![ZERO; len];
    for n in 1..=len {
        // g(n) = -(1/f(1)) sum_{d | n, d > 1} f(d) g(n/d)
        let g = if n == 1 { inv_lead } else { -acc[n].value() * inv_lead };
        out[n - 1] = g;
        if g == ZERO {
            continue;
        }
        for d in 2..=len / n {
            let fd = f.coeffs[d - 1];
            if fd != ZERO {
                acc[d * n].add(fd * g);
            }
        }
    }
    Ok(DirichletSeries { coeffs: out })
}

/// Coefficients of `zeta'(s) / (zeta(s) - a)` for `n <= len`.
pub fn lambda_a(len: usize, a: ComplexValue) -> Result<DirichletSeries> {
    if a == ONE {
        return Err(Error::ACaseOne);
    }
    let inverse = dirichlet_inverse(&DirichletSeries::zeta_minus(len, a))?;
    dirichlet_product(&DirichletSeries::zeta_deriv(len), &inverse)
}

/// `d_k*(n)`, the number of ordered factorizations of `n` into exactly `k`
/// factors greater than one, for `0 <= k <= K`, `1 <= n <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DkStarTable {
    len: usize,
    rows: Vec<Vec<u64>>,
}

impl DkStarTable {
    pub fn max_k(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, k: usize, n: usize) -> u64 {
        assert!(n >= 1 && n <= self.len, "n out of range");
        self.rows.get(k).map_or(0, |row| row[n - 1])
    }
}

pub fn dk_star(len: usize, max_k: usize) -> DkStarTable {
    assert!(len >= 1, "table length must be positive");
    let mut rows = Vec::with_capacity(max_k + 1);
    let mut prev = vec![0u64; len];
    prev[0] = 1;
    rows.push(prev.clone());
    for _ in 1..=max_k {
        let mut next = vec![0u64; len];
        for m in 1..=len {
            let count = prev[m - 1];
            if count == 0 {
                continue;
            }
            for d in 2..=len / m {
                next[d * m - 1] += count;
            }
        }
        rows.push(next.clone());
        prev = next;
    }
    DkStarTable { len, rows }
}

fn floor_log2(n: usize) -> usize {
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

/// `1/(zeta(s) - a)` through the geometric expansion in `(zeta(s) - 1)/(a - 1)`:
/// coefficient `-sum_{k <= K} d_k*(n) / (a - 1)^{k+1}`.
pub fn reciprocal_via_dkstar(len: usize, a: ComplexValue, max_k: usize) -> Result<DirichletSeries> {
    if a == ONE {
        return Err(Error::ACaseOne);
    }
    let needed = floor_log2(len);
    if max_k < needed {
        return Err(Error::InsufficientOrder {
            k: max_k,
            n: len,
            needed,
        });
    }
    let table = dk_star(len, max_k);
    let ratio = (a - ONE).inv();
    let powers: Vec<ComplexValue> = (0..=max_k).map(|k| ratio.powu(k as u32 + 1)).collect();
    Ok(DirichletSeries::from_fn(len, |n| {
        let mut acc = ComplexSum::new();
        for (k, pw) in powers.iter().enumerate() {
            let count = table.get(k, n);
            if count != 0 {
                acc.add(pw * count as f64);
            }
        }
        -acc.value()
    }))
}

/// `zeta(sigma) - 1` for real `sigma > 1`, without cancellation for large `sigma`.
pub fn zeta_minus_one(sigma: f64) -> f64 {
    debug_assert!(sigma > 1.0);
    if sigma < 8.0 {
        let z = zeta(ComplexValue::new(sigma, 0.0), &EvalParams::default())
            .expect("real zeta is finite right of 1");
        return z.re - 1.0;
    }
    let mut acc = KahanSum::new();
    let cutoff = 512usize;
    for n in (2..cutoff).rev() {
        acc.add((n as f64).powf(-sigma));
    }
    // tail: integral bound plus half the first omitted term
    let c = cutoff as f64;
    acc.add(c.powf(1.0 - sigma) / (sigma - 1.0) + 0.5 * c.powf(-sigma));
    acc.value()
}

/// The unique `sigma* > 1` with `zeta(sigma*) - 1 = |a - 1|`.
pub fn sigma_star(a: ComplexValue) -> Result<f64> {
    if a == ONE {
        return Err(Error::ACaseOne);
    }
    let target = (a - ONE).norm();
    if target > 1e8 {
        // zeta(sigma) - 1 = 1/(sigma - 1) + gamma - 1 + O(sigma - 1)
        let euler_gamma = 0.577_215_664_901_532_9;
        return Ok(1.0 + 1.0 / (target + 1.0 - euler_gamma));
    }
    let f = |sigma: f64| zeta_minus_one(sigma) - target;
    let mut hi = 2.0;
    while f(hi) >= 0.0 {
        hi = 1.0 + 2.0 * (hi - 1.0);
    }
    let mut lo = 1.0 + (hi - 1.0) / 2.0;
    while f(lo) <= 0.0 {
        lo = 1.0 + (lo - 1.0) / 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bounds on the abscissa `b_a = sup beta_a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbscissaEstimate {
    /// Largest real part among the supplied a-points; `None` when none given.
    pub lower: Option<f64>,
    /// `sigma*`, bounding the abscissa of absolute convergence.
    pub upper: f64,
    pub absolute_upper: f64,
    /// Set for real `a > 1`, where `b_a` equals `sigma*`.
    pub equality: bool,
    /// `(1/log 2) log(1/(|a| - 1))` when `|a| > 1`; a comparison value only.
    pub asymptotic_reference: Option<f64>,
}

pub fn b_a_estimate(a: ComplexValue, apts: &[APoint]) -> Result<AbscissaEstimate> {
    if a == ZERO {
        return Err(Error::ACaseZero);
    }
    let upper = sigma_star(a)?;
    let lower = apts
        .iter()
        .filter(|p| p.a == a)
        .map(|p| p.beta)
        .fold(None, |m: Option<f64>, b| Some(m.map_or(b, |m| m.max(b))));
    let modulus = a.norm();
    let asymptotic_reference =
        (modulus > 1.0).then(|| (1.0 / (modulus - 1.0)).ln() / std::f64::consts::LN_2);
    Ok(AbscissaEstimate {
        lower,
        upper,
        absolute_upper: upper,
        equality: a.im == 0.0 && a.re > 1.0,
        asymptotic_reference,
    })
}
