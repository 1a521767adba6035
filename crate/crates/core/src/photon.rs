//! Joint photon-number statistics of a standard-form two-mode Gaussian
//! state: pointwise evaluation, adaptive tabulation, and inverse-CDF
//! sampling.
//!
//! The closed form for P(n_S, n_I) involves a regularized hypergeometric
//! factor F_R(1 + n_S, 1 + n_I; 1; z) whose raw evaluation mixes huge
//! alternating terms and diverges term-wise in several physically ordinary
//! limits (lossless return, vanishing correlation, z -> 1). Because the
//! first two parameters are positive integers, the Euler transformation
//! turns F_R into a terminating sum, and after folding in the prefactors
//! every surviving term is non-negative:
//!
//! ```text
//! P(n_S, n_I) = 4 / |V| * sum_{k=0}^{min(n_S, n_I)}
//!               C(n_S, k) C(n_I, k) (4C^2)^k |X|^(n_I - k) |Y|^(n_S - k)
//!               / |V|^(n_S + n_I)
//! ```
//!
//! with |X| = (1+E)(S-1) - C^2, |Y| = (E-1)(S+1) - C^2,
//! |V| = (E+1)(S+1) - C^2, all of which are >= 0 exactly when the state is
//! physical. The singular regimes of the raw formula are the points where
//! one of the bases vanishes, and the reduced expressions used there are
//! the corresponding sub-sums.

pub mod fock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gaussian::TwoModeState;
use crate::special::{ln_binomial, ln_factorial};

/// Default bound on the probability mass left outside an adaptive table.
pub const DEFAULT_TAIL_BOUND: f64 = 1e-10;

/// Hard cap on the truncation order of adaptive tables.
pub const HARD_N_MAX: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Regime {
    /// |C| ~ 0: product of thermal marginals.
    ThermalProduct,
    /// |X| ~ 0 and |Y| ~ 0: squeezed-vacuum-like, diagonal geometric law.
    Diagonal,
    /// |X| ~ 0 only: support restricted to n_S >= n_I.
    XZero,
    /// |Y| ~ 0 only: support restricted to n_I >= n_S.
    YZero,
    /// z = 4C^2/(XY) ~ 1: Vandermonde closed form.
    UnitZ,
    Generic,
}

/// Precomputed pieces of the closed form for one state.
#[derive(Debug, Clone)]
struct Kernel {
    regime: Regime,
    /// Thermal means of the two marginals.
    mean_s: f64,
    mean_i: f64,
    four_c2: f64,
    x_abs: f64,
    y_abs: f64,
    v_abs: f64,
    ln_4c2: f64,
    ln_x: f64,
    ln_y: f64,
    ln_v: f64,
}

impl Kernel {
    fn new(state: &TwoModeState) -> Self {
        let (e, s, c) = (state.e(), state.s(), state.c());
        let c2 = c * c;
        // Physical states keep all three bases non-negative; the clamp only
        // absorbs rounding at the boundary regimes.
        let x_abs = ((1.0 + e) * (s - 1.0) - c2).max(0.0);
        let y_abs = ((e - 1.0) * (s + 1.0) - c2).max(0.0);
        let v_abs = (e + 1.0) * (s + 1.0) - c2;
        let scale = 1e-12 * (1.0 + e) * (1.0 + s);
        let regime = if c.abs() < 1e-12 {
            Regime::ThermalProduct
        } else if x_abs < scale && y_abs < scale {
            Regime::Diagonal
        } else if y_abs < scale {
            Regime::YZero
        } else if x_abs < scale {
            Regime::XZero
        } else if (1.0 - 4.0 * c2 / (x_abs * y_abs)).abs() < 1e-10 {
            Regime::UnitZ
        } else {
            Regime::Generic
        };
        Self {
            regime,
            mean_s: ((e - 1.0) / 2.0).max(0.0),
            mean_i: ((s - 1.0) / 2.0).max(0.0),
            four_c2: 4.0 * c2,
            x_abs,
            y_abs,
            v_abs,
            ln_4c2: (4.0 * c2).ln(),
            ln_x: x_abs.ln(),
            ln_y: y_abs.ln(),
            ln_v: v_abs.ln(),
        }
    }

    fn eval(&self, n_s: u32, n_i: u32) -> f64 {
        let (a, b) = (n_s as u64, n_i as u64);
        match self.regime {
            Regime::ThermalProduct => geometric(self.mean_s, a) * geometric(self.mean_i, b),
            Regime::Diagonal => {
                if n_s != n_i {
                    return 0.0;
                }
                if self.four_c2 == 0.0 {
                    return if n_s == 0 { 4.0 / self.v_abs } else { 0.0 };
                }
                let n = a as f64;
                (4.0f64.ln() + n * self.ln_4c2 - (2.0 * n + 1.0) * self.ln_v).exp()
            }
            Regime::YZero => {
                if n_i < n_s {
                    return 0.0;
                }
                let ln = 4.0f64.ln() + ln_binomial(b, a) + a as f64 * self.ln_4c2
                    + (b - a) as f64 * self.ln_x
                    - (1 + a + b) as f64 * self.ln_v;
                ln.exp()
            }
            Regime::XZero => {
                if n_s < n_i {
                    return 0.0;
                }
                let ln = 4.0f64.ln() + ln_binomial(a, b) + b as f64 * self.ln_4c2
                    + (a - b) as f64 * self.ln_y
                    - (1 + a + b) as f64 * self.ln_v;
                ln.exp()
            }
            Regime::UnitZ => {
                let ln = 4.0f64.ln() + ln_binomial(a + b, a) + b as f64 * self.ln_x
                    + a as f64 * self.ln_y
                    - (1 + a + b) as f64 * self.ln_v;
                ln.exp()
            }
            Regime::Generic => {
                // log-sum-exp over the terminating sum; every term is >= 0.
                let kmax = a.min(b);
                let ln_ab = ln_factorial(a) + ln_factorial(b);
                let mut max_term = f64::NEG_INFINITY;
                let mut terms = Vec::with_capacity(kmax as usize + 1);
                for k in 0..=kmax {
                    let t = ln_ab - 2.0 * ln_factorial(k)
                        - ln_factorial(a - k)
                        - ln_factorial(b - k)
                        + k as f64 * self.ln_4c2
                        + (b - k) as f64 * self.ln_x
                        + (a - k) as f64 * self.ln_y;
                    terms.push(t);
                    if t > max_term {
                        max_term = t;
                    }
                }
                let sum: f64 = terms.iter().map(|t| (t - max_term).exp()).sum();
                (4.0f64.ln() + max_term + sum.ln() - (1 + a + b) as f64 * self.ln_v).exp()
            }
        }
    }
}

/// Thermal (geometric) law mean^n / (mean+1)^(n+1).
fn geometric(mean: f64, n: u64) -> f64 {
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (n as f64 * mean.ln() - (n as f64 + 1.0) * (mean + 1.0).ln()).exp()
}

/// P(n_S = n_s, n_I = n_i) for a standard-form state.
pub fn joint_pmf_eval(state: &TwoModeState, n_s: u32, n_i: u32) -> f64 {
    Kernel::new(state).eval(n_s, n_i)
}

/// Tabulated joint photon-number distribution with truncation metadata.
///
/// The table covers counts 0..=n_max in both modes; `tail_mass` is the
/// probability left outside. Tables are immutable once built and safe to
/// share across threads.
#[derive(Debug, Clone)]
pub struct JointPhotonPMF {
    state: TwoModeState,
    kernel: Kernel,
    n_max: usize,
    table: Vec<f64>,
    cdf: Vec<f64>,
    tail_mass: f64,
}

impl JointPhotonPMF {
    pub fn state(&self) -> &TwoModeState {
        &self.state
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Tabulated probability; falls back to direct evaluation outside the
    /// table.
    pub fn prob(&self, n_s: u32, n_i: u32) -> f64 {
        let w = self.n_max + 1;
        if (n_s as usize) < w && (n_i as usize) < w {
            self.table[n_s as usize * w + n_i as usize]
        } else {
            self.kernel.eval(n_s, n_i)
        }
    }

    /// Row-major table slice, width `n_max + 1`.
    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Inverse-CDF draw over the flattened table. The residual tail mass
    /// maps to the largest indexed cell, a documented bias bounded by the
    /// table's tail bound.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, u32) {
        let u: f64 = rng.gen();
        let idx = self.cdf.partition_point(|&c| c <= u);
        let idx = idx.min(self.cdf.len() - 1);
        let w = self.n_max + 1;
        ((idx / w) as u32, (idx % w) as u32)
    }
}

/// Free-function form of [`JointPhotonPMF::sample`].
pub fn joint_pmf_sample<R: Rng + ?Sized>(pmf: &JointPhotonPMF, rng: &mut R) -> (u32, u32) {
    pmf.sample(rng)
}

/// Builds the adaptive table, growing `n_max` until the tail mass drops
/// below `tail_bound` or the hard cap trips.
pub fn joint_pmf_table(state: &TwoModeState, tail_bound: f64) -> Result<JointPhotonPMF> {
    if !(tail_bound > 0.0 && tail_bound < 1.0) {
        return Err(Error::Domain {
            name: "tail_bound",
            value: tail_bound,
            expected: "in (0, 1)",
        });
    }
    let kernel = Kernel::new(state);
    let mut n_max = initial_guess(&kernel);
    loop {
        let w = n_max + 1;
        let mut table = vec![0.0; w * w];
        for a in 0..w {
            for b in 0..w {
                table[a * w + b] = kernel.eval(a as u32, b as u32).max(0.0);
            }
        }
        let sum: f64 = table.iter().sum();
        let tail_mass = (1.0 - sum).max(0.0);
        if tail_mass <= tail_bound {
            let mut cdf = Vec::with_capacity(table.len());
            let mut acc = 0.0;
            for &p in &table {
                acc += p;
                cdf.push(acc);
            }
            return Ok(JointPhotonPMF {
                state: *state,
                kernel,
                n_max,
                table,
                cdf,
                tail_mass,
            });
        }
        if n_max >= HARD_N_MAX {
            return Err(Error::TruncationCap {
                cap: HARD_N_MAX,
                tail: tail_mass,
            });
        }
        n_max = (n_max + n_max / 2 + 8).min(HARD_N_MAX);
    }
}

/// Starting truncation: a few e-folds of the larger marginal mean.
fn initial_guess(kernel: &Kernel) -> usize {
    let mean = kernel.mean_s.max(kernel.mean_i);
    ((8.0 * (mean + 1.0)) as usize).clamp(4, HARD_N_MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{return_state, tmsv_state, ChannelEnv, TwoModeState};
    use crate::rng::stream_rng;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn vacuum_is_a_point_mass() {
        let vac = tmsv_state(0.0).unwrap();
        assert_abs_diff_eq!(joint_pmf_eval(&vac, 0, 0), 1.0, epsilon = 1e-14);
        assert_eq!(joint_pmf_eval(&vac, 1, 0), 0.0);
        assert_eq!(joint_pmf_eval(&vac, 0, 3), 0.0);

        let pmf = joint_pmf_table(&vac, 1e-10).unwrap();
        assert_eq!(pmf.table().len(), (pmf.n_max() + 1) * (pmf.n_max() + 1));
        assert_abs_diff_eq!(pmf.prob(0, 0), 1.0, epsilon = 1e-14);
        assert!(pmf.tail_mass() <= 1e-12);
    }

    #[test]
    fn tmsv_diagonal_geometric_law() {
        let st = tmsv_state(1.0).unwrap();
        assert_abs_diff_eq!(joint_pmf_eval(&st, 0, 0), 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(joint_pmf_eval(&st, 1, 1), 0.25, epsilon = 1e-13);
        assert_eq!(joint_pmf_eval(&st, 0, 1), 0.0);
        for n in 0..12u32 {
            let expected = 0.5f64.powi(n as i32 + 1);
            assert_relative_eq!(joint_pmf_eval(&st, n, n), expected, max_relative = 1e-11);
        }
    }

    #[test]
    fn thermal_signal_with_vacuum_idler() {
        let st = TwoModeState::new(3.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(joint_pmf_eval(&st, 2, 0), 0.125, epsilon = 1e-14);
        assert_eq!(joint_pmf_eval(&st, 1, 1), 0.0);
        for n in 0..10u32 {
            assert_relative_eq!(
                joint_pmf_eval(&st, n, 0),
                0.5f64.powi(n as i32 + 1),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn lossless_return_state_is_binomially_supported() {
        // kappa_s < 1 with no other noise drives |Y| to zero: counts with
        // n_i < n_s are impossible (every surviving signal photon has its
        // idler twin).
        let st = return_state(1.0, 0.75, &ChannelEnv::ideal()).unwrap();
        assert_eq!(joint_pmf_eval(&st, 2, 1), 0.0);
        assert!(joint_pmf_eval(&st, 1, 2) > 0.0);
        let total: f64 = (0..60)
            .flat_map(|a| (0..60).map(move |b| (a, b)))
            .map(|(a, b)| joint_pmf_eval(&st, a, b))
            .sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn exchange_symmetry() {
        let env = ChannelEnv::new(0.2, 0.7).unwrap();
        let st = return_state(0.9, 0.6, &env).unwrap();
        let swapped = st.swapped();
        for a in 0..8u32 {
            for b in 0..8u32 {
                let p = joint_pmf_eval(&st, a, b);
                let q = joint_pmf_eval(&swapped, b, a);
                assert_abs_diff_eq!(p, q, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn generic_formula_approaches_thermal_product_as_c_vanishes() {
        let (e, s) = (2.1, 1.7);
        let reference = TwoModeState::new(e, s, 0.0).unwrap();
        let nearby = TwoModeState::new(e, s, 1e-5).unwrap();
        for a in 0..6u32 {
            for b in 0..6u32 {
                let p0 = joint_pmf_eval(&reference, a, b);
                let p1 = joint_pmf_eval(&nearby, a, b);
                assert_relative_eq!(p1, p0, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn unit_z_matches_neighbouring_generic_values() {
        // Pick E, S and solve C^2 = (E-1)(S-1) so that z = 1 exactly,
        // then approach it from both sides.
        let (e, s) = (3.0, 2.0);
        let c_unit = ((e - 1.0) * (s - 1.0)).sqrt();
        let at = TwoModeState::new(e, s, c_unit).unwrap();
        for eps in [1e-4, -1e-4] {
            let near = TwoModeState::new(e, s, c_unit + eps).unwrap();
            for a in 0..6u32 {
                for b in 0..6u32 {
                    let p = joint_pmf_eval(&at, a, b);
                    let q = joint_pmf_eval(&near, a, b);
                    if p > 1e-12 {
                        assert_relative_eq!(q, p, max_relative = 2e-3);
                    }
                }
            }
        }
    }

    #[test]
    fn marginals_are_thermal() {
        let env = ChannelEnv::new(0.15, 0.85).unwrap();
        let st = return_state(1.2, 0.8, &env).unwrap();
        let pmf = joint_pmf_table(&st, 1e-12).unwrap();
        let w = pmf.n_max() + 1;
        for a in 0..w / 2 {
            let row: f64 = (0..w as u32).map(|b| pmf.prob(a as u32, b)).sum();
            let expected = geometric(st.signal_mean_photons(), a as u64);
            assert_abs_diff_eq!(row, expected, epsilon = 1e-8);
        }
        for b in 0..w / 2 {
            let col: f64 = (0..w as u32).map(|a| pmf.prob(a, b as u32)).sum();
            let expected = geometric(st.idler_mean_photons(), b as u64);
            assert_abs_diff_eq!(col, expected, epsilon = 1e-8);
        }
    }

    #[test]
    fn table_growth_and_normalization() {
        let st = tmsv_state(1.0).unwrap();
        let pmf = joint_pmf_table(&st, 1e-10).unwrap();
        // Geometric tail: 2^-(n+1) <= 1e-10 needs n >= 33.
        assert!(pmf.n_max() >= 33, "n_max = {}", pmf.n_max());
        assert!(pmf.n_max() <= 80, "n_max = {}", pmf.n_max());
        assert!(pmf.tail_mass() <= 1e-10);
        let sum: f64 = pmf.table().iter().sum();
        assert_abs_diff_eq!(sum + pmf.tail_mass(), 1.0, epsilon = 1e-12);

        assert!(joint_pmf_table(&st, 0.0).is_err());
        assert!(joint_pmf_table(&st, 1.0).is_err());
    }

    #[test]
    fn random_states_normalize() {
        let mut rng = stream_rng(0xbead, 0);
        for _ in 0..50 {
            let e = 1.0 + 3.0 * rng.gen::<f64>();
            let s = 1.0 + 3.0 * rng.gen::<f64>();
            let cmax = (((e + 1.0) * (s - 1.0)).min((e - 1.0) * (s + 1.0))).sqrt();
            let c = cmax * rng.gen::<f64>();
            let st = TwoModeState::new(e, s, c).unwrap();
            let pmf = joint_pmf_table(&st, 1e-10).unwrap();
            let sum: f64 = pmf.table().iter().sum();
            assert!(sum >= 1.0 - 1e-8, "sum = {sum} for state {st:?}");
        }
    }

    #[test]
    fn sampling_is_deterministic_and_calibrated() {
        let vac = joint_pmf_table(&tmsv_state(0.0).unwrap(), 1e-10).unwrap();
        let mut rng = stream_rng(3, 0);
        for _ in 0..32 {
            assert_eq!(vac.sample(&mut rng), (0, 0));
        }

        let pmf = joint_pmf_table(&tmsv_state(1.0).unwrap(), 1e-10).unwrap();
        let draw = |seed: u64| -> Vec<(u32, u32)> {
            let mut rng = stream_rng(seed, 7);
            (0..64).map(|_| joint_pmf_sample(&pmf, &mut rng)).collect()
        };
        assert_eq!(draw(11), draw(11));
        assert_ne!(draw(11), draw(12));

        let mut rng = stream_rng(99, 0);
        let trials = 1_000_000u32;
        let mut zeros = 0u32;
        for _ in 0..trials {
            if pmf.sample(&mut rng) == (0, 0) {
                zeros += 1;
            }
        }
        let p_hat = zeros as f64 / trials as f64;
        let band = 3.0 * (0.25f64 / trials as f64).sqrt();
        assert!(
            (p_hat - 0.5).abs() <= band,
            "p_hat = {p_hat}, band = {band}"
        );
    }

    #[test]
    fn out_of_table_counts_fall_back_to_direct_eval() {
        let st = tmsv_state(0.5).unwrap();
        let pmf = joint_pmf_table(&st, 1e-6).unwrap();
        let far = pmf.n_max() as u32 + 5;
        assert_abs_diff_eq!(
            pmf.prob(far, far),
            joint_pmf_eval(&st, far, far),
            epsilon = 1e-18
        );
    }
}
