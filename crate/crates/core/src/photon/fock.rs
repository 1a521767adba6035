//! Truncated-Fock-basis oracle for the joint photon statistics,
//! independent of the closed form in the parent module.
//!
//! Any standard-form state is a two-mode squeezer applied to a product of
//! thermal modes (its Williamson decomposition). The squeezer commutes with
//! the photon-number difference, so its Fock-basis matrix splits into
//! tridiagonal blocks, one per difference sector; each block exponentiates
//! through a real symmetric eigenproblem. The oracle assembles
//! P(n_S, n_I) = sum_jk p_j q_k |<n_S, n_I| U |j, k>|^2 from those blocks
//! and never touches the hypergeometric route it is meant to check.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::TwoModeState;

/// Joint probabilities P(n_S, n_I) for counts 0..=n_max, computed in a
/// truncated Fock basis. Errors out if the requested window misses more
/// than 1e-6 of the total mass.
pub fn fock_oracle(state: &TwoModeState, n_max: usize) -> Result<Vec<Vec<f64>>> {
    let (e, s, c) = (state.e(), state.s(), state.c());
    let total = ((e + s) * (e + s) - 4.0 * c * c).max(0.0).sqrt();
    let nu_a = (0.5 * (total + (e - s))).max(1.0);
    let nu_b = (0.5 * (total - (e - s))).max(1.0);
    let mean_a = (nu_a - 1.0) / 2.0;
    let mean_b = (nu_b - 1.0) / 2.0;
    let t2r = (2.0 * c / (e + s)).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
    let r_abs = (0.5 * t2r.atanh()).abs();

    // Thermal inputs worth keeping: geometric tails below 1e-15.
    let j_therm = thermal_cutoff(mean_a.max(mean_b));
    // Squeezer amplitudes decay like tanh(r)^t past the occupied block;
    // pad the sector dimension until that spillover is negligible.
    let tanh_r = r_abs.tanh();
    let margin = if tanh_r < 1e-6 {
        8
    } else {
        ((1e-14f64.ln() / tanh_r.ln()).ceil() as usize).clamp(8, 800)
    };
    let dim = n_max.max(j_therm) + margin;

    let weights_a = thermal_weights(mean_a, j_therm + n_max);
    let weights_b = thermal_weights(mean_b, j_therm + n_max);

    let mut prob = vec![vec![0.0; n_max + 1]; n_max + 1];
    for d in 0..=n_max {
        let amp2 = sector_amplitudes(r_abs, d, dim, n_max, j_therm);
        // Sector taken as signal excess: P(m + d, m).
        for m in 0..=(n_max - d) {
            let n = m + d;
            let mut p = 0.0;
            for k in 0..=j_therm {
                p += weights_a[k + d] * weights_b[k] * amp2[m][k];
            }
            prob[n][m] = p;
        }
        if d == 0 {
            continue;
        }
        // Same block serves the idler-excess side: P(m, m + d).
        for m in 0..=(n_max - d) {
            let n = m + d;
            let mut p = 0.0;
            for k in 0..=j_therm {
                p += weights_a[k] * weights_b[k + d] * amp2[m][k];
            }
            prob[m][n] = p;
        }
    }

    let captured: f64 = prob.iter().flatten().sum();
    let tail = 1.0 - captured;
    if tail > 1e-6 {
        return Err(Error::FockTail { n_max, tail });
    }
    Ok(prob)
}

fn thermal_cutoff(mean: f64) -> usize {
    if mean < 1e-12 {
        return 2;
    }
    let ratio = mean / (mean + 1.0);
    ((1e-15f64.ln() / ratio.ln()).ceil() as usize).clamp(8, 600)
}

fn thermal_weights(mean: f64, up_to: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(up_to + 1);
    if mean < 1e-300 {
        w.push(1.0);
        w.extend(std::iter::repeat(0.0).take(up_to));
        return w;
    }
    let ratio = mean / (mean + 1.0);
    let mut cur = 1.0 / (mean + 1.0);
    for _ in 0..=up_to {
        w.push(cur);
        cur *= ratio;
    }
    w
}

/// |<t_out + d, t_out| exp(r (a'b' - ab)) |t_in + d, t_in>|^2 for
/// t_out <= rows, t_in <= cols.
///
/// The generator is tridiagonal antisymmetric in the sector basis; a
/// diagonal phase similarity maps it to i T with T real symmetric
/// tridiagonal, so `exp` reduces to one symmetric eigen-decomposition and
/// magnitudes are phase-free.
fn sector_amplitudes(
    r_abs: f64,
    d: usize,
    dim: usize,
    rows: usize,
    cols: usize,
) -> Vec<Vec<f64>> {
    let mut t = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim - 1 {
        let beta = r_abs * (((i + 1) * (i + 1 + d)) as f64).sqrt();
        t[(i, i + 1)] = beta;
        t[(i + 1, i)] = beta;
    }
    let eig = t.symmetric_eigen();
    let q = &eig.eigenvectors;
    let theta = &eig.eigenvalues;
    let rows = rows.min(dim - 1);
    let cols = cols.min(dim - 1);
    let mut amp2 = vec![vec![0.0; cols + 1]; rows + 1];
    for (m, row) in amp2.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let mut re = 0.0;
            let mut im = 0.0;
            for t_idx in 0..dim {
                let w = q[(m, t_idx)] * q[(k, t_idx)];
                let (sin, cos) = theta[t_idx].sin_cos();
                re += w * cos;
                im += w * sin;
            }
            *cell = re * re + im * im;
        }
    }
    amp2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{return_state, tmsv_state, ChannelEnv, TwoModeState};
    use crate::photon::joint_pmf_eval;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_is_a_delta() {
        let table = fock_oracle(&tmsv_state(0.0).unwrap(), 4).unwrap();
        assert_abs_diff_eq!(table[0][0], 1.0, epsilon = 1e-12);
        assert!(table[1][0].abs() < 1e-14);
        assert!(table[2][2].abs() < 1e-14);
    }

    #[test]
    fn tmsv_reproduces_geometric_diagonal() {
        let table = fock_oracle(&tmsv_state(1.0).unwrap(), 10).unwrap();
        for n in 0..=10 {
            assert_abs_diff_eq!(table[n][n], 0.5f64.powi(n as i32 + 1), epsilon = 1e-10);
            if n > 0 {
                assert!(table[n][n - 1].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn thermal_product_reproduced() {
        let st = TwoModeState::new(2.0, 1.6, 0.0).unwrap();
        let table = fock_oracle(&st, 8).unwrap();
        for a in 0..=8u32 {
            for b in 0..=8u32 {
                assert_abs_diff_eq!(
                    table[a as usize][b as usize],
                    joint_pmf_eval(&st, a, b),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn agrees_with_closed_form_on_mixed_states() {
        let env = ChannelEnv::new(0.2, 0.8).unwrap();
        let st = return_state(1.0, 0.7, &env).unwrap();
        let table = fock_oracle(&st, 9).unwrap();
        for a in 0..=9u32 {
            for b in 0..=9u32 {
                assert_abs_diff_eq!(
                    table[a as usize][b as usize],
                    joint_pmf_eval(&st, a, b),
                    epsilon = 1e-8
                );
            }
        }
    }

    #[test]
    fn rejects_too_small_truncation() {
        // Hot state: n_max = 1 misses nearly everything.
        let st = TwoModeState::new(9.0, 9.0, 0.0).unwrap();
        match fock_oracle(&st, 1) {
            Err(Error::FockTail { tail, .. }) => assert!(tail > 1e-6),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }
}
