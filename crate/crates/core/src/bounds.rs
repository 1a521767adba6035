//! Classical benchmark lower bounds on pattern discrimination with
//! classical (coherent-state) probes: the binary Helstrom closed form, the
//! k-peak positioning closed form, and the general-pattern fidelity bound
//! obtained from a small convex program over the per-slot energy split.

use crate::error::{Error, Result};
use crate::pattern::TransmissivityPattern;
use crate::project::onto_simplex_interior;
use crate::special::binomial_f64;

/// Single-mode phase-insensitive Gaussian channel, reduced to the two
/// parameters that matter for coherent-state inputs: transmissivity `mu`
/// and output thermal noise `e_noise`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseInsensitiveChannel {
    mu: f64,
    e_noise: f64,
}

impl PhaseInsensitiveChannel {
    pub fn new(mu: f64, e_noise: f64) -> Result<Self> {
        if !(mu >= 0.0) {
            return Err(Error::Domain {
                name: "mu",
                value: mu,
                expected: ">= 0",
            });
        }
        if !(e_noise >= 0.0) {
            return Err(Error::Domain {
                name: "e_noise",
                value: e_noise,
                expected: ">= 0",
            });
        }
        Ok(Self { mu, e_noise })
    }

    /// Thermal-loss channel (kappa, N_B) in the (mu, E) parameterization.
    ///
    /// The output thermal occupation works out to E = N_B independently of
    /// kappa (the environment mean is N_B/(1-kappa) by convention), so the
    /// mapping is simply mu = kappa, E = N_B for the whole 0 <= kappa <= 1
    /// range.
    pub fn thermal_loss(kappa: f64, n_b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(Error::Domain {
                name: "kappa",
                value: kappa,
                expected: "in [0, 1]",
            });
        }
        Self::new(kappa, n_b)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn e_noise(&self) -> f64 {
        self.e_noise
    }
}

/// Per-slot mean-photon allocation (totalled over the M probes hitting
/// each slot).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyAllocation {
    x: Vec<f64>,
}

impl EnergyAllocation {
    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }

    pub fn total(&self) -> f64 {
        self.x.iter().sum()
    }
}

/// Velocity of fidelity decay between two channels per unit probe energy.
fn decay_rate(a: &PhaseInsensitiveChannel, b: &PhaseInsensitiveChannel) -> f64 {
    let num = (a.mu.sqrt() - b.mu.sqrt()).powi(2);
    num / (1.0 + a.e_noise + b.e_noise)
}

/// Passive (energy-independent) part of the fidelity between the two
/// channels' thermal outputs.
fn passive_overlap(a: &PhaseInsensitiveChannel, b: &PhaseInsensitiveChannel) -> f64 {
    let d = (a.e_noise * (1.0 + b.e_noise)).sqrt() - (b.e_noise * (1.0 + a.e_noise)).sqrt();
    1.0 / (1.0 + d * d)
}

/// Fidelity between the outputs of two phase-insensitive channels fed the
/// same coherent probe of total energy `x_energy` spread over `m_copies`
/// modes: c^(M/2) exp(-B x / 2).
pub fn gaussian_fidelity_kernel(
    ch_a: &PhaseInsensitiveChannel,
    ch_b: &PhaseInsensitiveChannel,
    x_energy: f64,
    m_copies: u32,
) -> Result<f64> {
    if !(x_energy >= 0.0) {
        return Err(Error::Domain {
            name: "x_energy",
            value: x_energy,
            expected: ">= 0",
        });
    }
    let c = passive_overlap(ch_a, ch_b);
    let b = decay_rate(ch_a, ch_b);
    Ok((0.5 * m_copies as f64 * c.ln() - 0.5 * b * x_energy).exp())
}

fn check_binary_params(kappa_b: f64, kappa_t: f64, n_s: f64, n_b: f64) -> Result<()> {
    for (name, v) in [("kappa_b", kappa_b), ("kappa_t", kappa_t)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain {
                name,
                value: v,
                expected: "in [0, 1]",
            });
        }
    }
    for (name, v) in [("n_s", n_s), ("n_b", n_b)] {
        if !(v >= 0.0) {
            return Err(Error::Domain {
                name,
                value: v,
                expected: ">= 0",
            });
        }
    }
    Ok(())
}

/// Binary Helstrom-form lower bound
/// (1 - sqrt(1 - exp(-nu_B M N_S (sqrt(kappa_B) - sqrt(kappa_T))^2))) / 2,
/// with nu_B = 1/(1 + 2 N_B). Also the error the adaptive (Dolinar)
/// coherent-state receiver attains, so it is tight for absorption
/// detection.
pub fn helstrom_binary_lb(
    kappa_b: f64,
    kappa_t: f64,
    n_s: f64,
    m_copies: u32,
    n_b: f64,
) -> Result<f64> {
    check_binary_params(kappa_b, kappa_t, n_s, n_b)?;
    let nu_b = 1.0 / (1.0 + 2.0 * n_b);
    let exponent = nu_b * m_copies as f64 * n_s * (kappa_b.sqrt() - kappa_t.sqrt()).powi(2);
    Ok(0.5 * (1.0 - (1.0 - (-exponent).exp()).sqrt()))
}

/// Weight w_{m,k} = k C(m-1, k) / (C(m, k) - 1) of the k-peak bound.
/// Exact integer binomials carry it to m = 60; log-gamma takes over above.
pub fn kpeak_weight(m: u32, k: u32) -> f64 {
    let c_mk = binomial_f64(m as u64, k as u64);
    k as f64 * binomial_f64(m as u64 - 1, k as u64) / (c_mk - 1.0)
}

/// Closed-form lower bound for k-peak positioning among m slots:
/// ((H-1)/2H) c^(2 M w) exp(-2 w nu_B M N_S (sqrt(kappa_B)-sqrt(kappa_T))^2)
/// with H = C(m, k) and w = w_{m,k}. The passive factor c equals 1 here
/// because both hypotheses share the same output noise N_B.
pub fn kpeak_lb(
    m: u32,
    k: u32,
    kappa_b: f64,
    kappa_t: f64,
    n_s: f64,
    m_copies: u32,
    n_b: f64,
) -> Result<f64> {
    if k == 0 || k >= m {
        return Err(Error::Domain {
            name: "k",
            value: k as f64,
            expected: "1 <= k < m",
        });
    }
    check_binary_params(kappa_b, kappa_t, n_s, n_b)?;
    let h = binomial_f64(m as u64, k as u64);
    let w = kpeak_weight(m, k);
    let ch_b = PhaseInsensitiveChannel::thermal_loss(kappa_b, n_b)?;
    let ch_t = PhaseInsensitiveChannel::thermal_loss(kappa_t, n_b)?;
    let c = passive_overlap(&ch_b, &ch_t);
    let rate = decay_rate(&ch_b, &ch_t);
    let exponent = 2.0 * w * m_copies as f64 * n_s * rate;
    Ok((h - 1.0) / (2.0 * h) * (m_copies as f64 * w * c.ln() * 2.0 - exponent).exp())
}

/// Result of the general-pattern convex lower bound.
#[derive(Debug, Clone)]
pub struct GeneralBound {
    /// The bound (K/H^2) f*^2.
    pub probability: f64,
    /// Energy split achieving the minimum.
    pub allocation: EnergyAllocation,
    /// Set when every pair of hypotheses is identical, in which case the
    /// bound degenerates to the random-guess floor (H-1)/(2H).
    pub degenerate: bool,
}

struct PairTerms {
    /// ln of the passive prefactor C_{h,h'}.
    ln_c: f64,
    /// Per-slot decay rates B_l^{(h,h')}.
    rates: Vec<f64>,
}

fn pattern_pair_terms(
    pattern: &TransmissivityPattern,
    m_copies: u32,
    n_b: f64,
) -> Result<Vec<PairTerms>> {
    let h = pattern.hypothesis_count();
    let m = pattern.slot_count();
    let channels: Vec<Vec<PhaseInsensitiveChannel>> = (0..h)
        .map(|hy| {
            (0..m)
                .map(|sl| PhaseInsensitiveChannel::thermal_loss(pattern.kappa(hy, sl), n_b))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let mut pairs = Vec::with_capacity(h * (h - 1) / 2);
    for a in 0..h {
        for b in (a + 1)..h {
            let mut ln_c = 0.0;
            let mut rates = Vec::with_capacity(m);
            for sl in 0..m {
                ln_c += 0.5 * m_copies as f64 * passive_overlap(&channels[a][sl], &channels[b][sl]).ln();
                rates.push(decay_rate(&channels[a][sl], &channels[b][sl]));
            }
            pairs.push(PairTerms { ln_c, rates });
        }
    }
    Ok(pairs)
}

/// Mean pairwise fidelity proxy f(x) and its gradient.
fn objective(pairs: &[PairTerms], x: &[f64]) -> (f64, Vec<f64>) {
    let k = pairs.len() as f64;
    let mut f = 0.0;
    let mut grad = vec![0.0; x.len()];
    for pair in pairs {
        let mut expo = pair.ln_c;
        for (l, &xl) in x.iter().enumerate() {
            expo -= 0.5 * pair.rates[l] * xl;
        }
        let term = expo.exp() / k;
        f += term;
        for (l, g) in grad.iter_mut().enumerate() {
            *g -= 0.5 * pair.rates[l] * term;
        }
    }
    (f, grad)
}

const SOLVER_MAX_ITER: usize = 100_000;
const SOLVER_OBJ_TOL: f64 = 1e-12;

/// General-pattern classical lower bound (K/H^2) f*^2 where f* minimizes
/// the mean pairwise output fidelity over the energy polytope
/// {X >= 0, sum X <= m M N_S}. Projected gradient with backtracking,
/// started uniform.
pub fn general_lb(
    pattern: &TransmissivityPattern,
    n_s: f64,
    m_copies: u32,
    n_b: f64,
) -> Result<GeneralBound> {
    if !(n_s >= 0.0) || !(n_b >= 0.0) {
        return Err(Error::Domain {
            name: "n_s/n_b",
            value: n_s.min(n_b),
            expected: ">= 0",
        });
    }
    let h = pattern.hypothesis_count();
    let m = pattern.slot_count();
    let k = (h * (h - 1) / 2) as f64;
    let pairs = pattern_pair_terms(pattern, m_copies, n_b)?;
    let budget = m as f64 * m_copies as f64 * n_s;
    let degenerate = pairs
        .iter()
        .all(|p| p.rates.iter().all(|&r| r < 1e-300) && p.ln_c.abs() < 1e-300);

    let mut x = vec![budget / m as f64; m];
    let (mut f, mut grad) = objective(&pairs, &x);
    if !degenerate {
        let mut step = if budget > 0.0 { budget } else { 1.0 };
        for _ in 0..SOLVER_MAX_ITER {
            // Backtracking line search on the projected step.
            let mut improved = false;
            for _ in 0..60 {
                let candidate: Vec<f64> = x
                    .iter()
                    .zip(&grad)
                    .map(|(&xi, &gi)| xi - step * gi)
                    .collect();
                let candidate = onto_simplex_interior(&candidate, budget);
                let (fc, _) = objective(&pairs, &candidate);
                let dir_gain: f64 = candidate
                    .iter()
                    .zip(&x)
                    .zip(&grad)
                    .map(|((&ci, &xi), &gi)| gi * (ci - xi))
                    .sum();
                if fc <= f + 1e-4 * dir_gain {
                    let shrunk = (f - fc).abs();
                    x = candidate;
                    let refreshed = objective(&pairs, &x);
                    f = refreshed.0;
                    grad = refreshed.1;
                    improved = shrunk > SOLVER_OBJ_TOL;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
            step *= 2.0;
        }
    }
    Ok(GeneralBound {
        probability: k / (h as f64 * h as f64) * f * f,
        allocation: EnergyAllocation { x },
        degenerate,
    })
}

/// Looser closed-form variant ((H-1)/2H) cbar^2 exp(-B* m M N_S), with B*
/// the largest slot-averaged pairwise decay rate. Never exceeds
/// [`general_lb`] beyond solver tolerance.
pub fn general_lb_closed(
    pattern: &TransmissivityPattern,
    n_s: f64,
    m_copies: u32,
    n_b: f64,
) -> Result<f64> {
    let h = pattern.hypothesis_count() as f64;
    let m = pattern.slot_count();
    let k = h * (h - 1.0) / 2.0;
    let pairs = pattern_pair_terms(pattern, m_copies, n_b)?;
    let ln_cbar = pairs.iter().map(|p| p.ln_c).sum::<f64>() / k;
    let b_star = (0..m)
        .map(|l| pairs.iter().map(|p| p.rates[l]).sum::<f64>() / k)
        .fold(0.0f64, f64::max);
    let budget = m as f64 * m_copies as f64 * n_s;
    Ok((h - 1.0) / (2.0 * h) * (2.0 * ln_cbar - b_star * budget).exp())
}
