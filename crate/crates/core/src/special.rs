//! Special functions used by the photon statistics and receiver models:
//! log-gamma, log-factorials, exact/logarithmic binomials, and the
//! regularized incomplete gamma pair P(a,x), Q(a,x).
//!
//! The incomplete gamma functions follow the classic split: a power series
//! for x < a + 1 and a Lentz continued fraction above it, so that whichever
//! of P or Q is small is the one computed directly.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Lanczos approximation (g = 7, 9 terms), valid for x > 0.
///
/// Relative accuracy is ~1e-14 over the range used here (arguments are
/// photon counts and mode numbers, never near the negative axis).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Reflection, only reachable through generic helpers.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

const LN_FACT_LEN: usize = 8 * 4096 + 2;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..LN_FACT_LEN).map(|n| ln_gamma(n as f64 + 1.0)).collect())
}

/// ln(n!), table-backed for the count ranges that photon tables reach.
pub fn ln_factorial(n: u64) -> f64 {
    let table = ln_fact_table();
    if (n as usize) < table.len() {
        table[n as usize]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// ln C(n, k); zero when k > n by convention of an empty product.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Exact binomial coefficient in u128, or None on overflow.
///
/// Exact up to at least n = 60 (the scales the bounds module promises);
/// callers fall back to [`ln_binomial`] beyond that.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul((n - k + i) as u128)?;
        acc /= i as u128; // exact: product of i consecutive integers
    }
    Some(acc)
}

/// Binomial coefficient as f64, exact in integer arithmetic when it fits.
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    match binomial_u128(n, k) {
        Some(v) if v < (1u128 << 100) => v as f64,
        _ => ln_binomial(n, k).exp(),
    }
}

const GAMMA_EPS: f64 = 1e-16;
const GAMMA_MAX_ITER: usize = 10_000;

/// Regularized incomplete gamma pair (P(a,x), Q(a,x)) with P + Q = 1.
///
/// P(a,x) = γ(a,x)/Γ(a) is the lower tail; requires a > 0, x >= 0.
pub fn regularized_gamma(a: f64, x: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) {
        return Err(Error::Domain {
            name: "a",
            value: a,
            expected: "a > 0",
        });
    }
    if !(x >= 0.0) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            expected: "x >= 0",
        });
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    let ln_pref = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let p = gamma_series(a, x, ln_pref)?;
        Ok((p, 1.0 - p))
    } else {
        let q = gamma_continued_fraction(a, x, ln_pref)?;
        Ok((1.0 - q, q))
    }
}

/// Regularized upper incomplete gamma Q(a,x) = Γ(a,x)/Γ(a).
pub fn regularized_gamma_upper(a: f64, x: f64) -> Result<f64> {
    regularized_gamma(a, x).map(|(_, q)| q)
}

fn gamma_series(a: f64, x: f64, ln_pref: f64) -> Result<f64> {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..GAMMA_MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * GAMMA_EPS {
            return Ok((ln_pref + sum.ln()).exp());
        }
    }
    Err(Error::NoConvergence {
        routine: "incomplete gamma series",
        iterations: GAMMA_MAX_ITER,
    })
}

fn gamma_continued_fraction(a: f64, x: f64, ln_pref: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < GAMMA_EPS {
            return Ok((ln_pref + h.ln()).exp());
        }
    }
    Err(Error::NoConvergence {
        routine: "incomplete gamma continued fraction",
        iterations: GAMMA_MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..20u64 {
            fact *= n as f64;
            assert_relative_eq!(ln_gamma(n as f64 + 1.0), fact.ln(), max_relative = 1e-13);
        }
        // Γ(1/2) = sqrt(pi)
        assert_relative_eq!(
            ln_gamma(0.5),
            std::f64::consts::PI.sqrt().ln(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn binomials_exact_and_log_agree() {
        assert_eq!(binomial_u128(60, 30), Some(118_264_581_564_861_424));
        assert_eq!(binomial_u128(4, 2), Some(6));
        assert_eq!(binomial_u128(10, 0), Some(1));
        assert_eq!(binomial_u128(3, 7), Some(0));
        for n in [5u64, 17, 60, 200] {
            for k in [0u64, 1, n / 3, n / 2] {
                let exact = binomial_f64(n, k);
                assert_relative_eq!(ln_binomial(n, k), exact.ln(), max_relative = 1e-11);
            }
        }
    }

    /// Quadrature oracle for P(a,x): composite Simpson on t^{a-1} e^{-t}.
    fn lower_gamma_quadrature(a: f64, x: f64) -> f64 {
        let n = 40_000;
        let h = x / n as f64;
        let f = |t: f64| {
            if t == 0.0 {
                if a > 1.0 {
                    0.0
                } else if a == 1.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                ((a - 1.0) * t.ln() - t).exp()
            }
        };
        let mut sum = f(0.0) + f(x);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(i as f64 * h);
        }
        sum * h / 3.0 / ln_gamma(a).exp()
    }

    #[test]
    fn incomplete_gamma_matches_quadrature() {
        for &(a, x) in &[
            (1.0, 0.5),
            (2.5, 1.0),
            (5.0, 5.0),
            (10.0, 3.0),
            (10.0, 25.0),
            (40.0, 55.0),
        ] {
            let (p, q) = regularized_gamma(a, x).unwrap();
            let oracle = lower_gamma_quadrature(a, x);
            assert_relative_eq!(p, oracle, epsilon = 1e-10, max_relative = 1e-9);
            assert_relative_eq!(p + q, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn incomplete_gamma_closed_forms() {
        // Q(1, x) = e^{-x}
        for x in [0.1, 1.0, 7.0, 30.0] {
            let q = regularized_gamma_upper(1.0, x).unwrap();
            assert_relative_eq!(q, (-x).exp(), max_relative = 1e-13);
        }
        // Q(M, x) for integer M is the Poisson cdf sum e^{-x} sum_{k<M} x^k/k!
        let m = 12.0;
        let x = 9.0;
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 0..12 {
            if k > 0 {
                term *= x / k as f64;
            }
            sum += term;
        }
        let expected = (-x).exp() * sum;
        assert_relative_eq!(
            regularized_gamma_upper(m, x).unwrap(),
            expected,
            max_relative = 1e-12
        );
    }

    #[test]
    fn incomplete_gamma_rejects_bad_domain() {
        assert!(regularized_gamma(0.0, 1.0).is_err());
        assert!(regularized_gamma(2.0, -1.0).is_err());
    }
}
