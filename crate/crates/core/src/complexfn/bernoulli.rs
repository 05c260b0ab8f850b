use std::f64::consts::PI;
use std::sync::OnceLock;

/// Largest k for which `B_{2k}/(2k)!` is tabulated.
pub const MAX_ORDER: usize = 60;

/// `B_{2k} / (2k)!` for `k = 1..=MAX_ORDER`, stored at index `k - 1`.
///
/// Built from `B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}`; the table is
/// initialised once and read-only afterwards.
pub fn scaled_bernoulli() -> &'static [f64; MAX_ORDER] {
    static TABLE: OnceLock<[f64; MAX_ORDER]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; MAX_ORDER];
        let two_pi = 2.0 * PI;
        for (i, slot) in out.iter_mut().enumerate() {
            let k = i + 1;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta_even(k) / two_pi.powi(2 * k as i32);
        }
        out
    })
}

/// `B_{2k} / (2k(2k-1))`, the Stirling-series coefficients for log Gamma.
pub fn stirling_coefficient(k: usize) -> f64 {
    // B_{2k}/(2k(2k-1)) = [B_{2k}/(2k)!] * (2k-2)!
    let mut fact = 1.0;
    for j in 2..=(2 * k - 2) {
        fact *= j as f64;
    }
    scaled_bernoulli()[k - 1] * fact
}

fn zeta_even(k: usize) -> f64 {
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        4 => PI.powi(8) / 9450.0,
        _ => {
            let e = -(2 * k as i32);
            // terms for n > 64 are below 1e-18
            (1..=64).rev().map(|n| (n as f64).powi(e)).sum()
        }
    }
}
