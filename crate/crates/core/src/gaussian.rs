//! Covariance-matrix algebra for the signal-idler probe.
//!
//! States here are zero-mean two-mode Gaussians in standard form: the 4x4
//! quadrature covariance has blocks `E.I`, `S.I` on the diagonal and `C.Z`
//! off-diagonal (shot-noise units, vacuum variance 1). That form is closed
//! under everything this crate does to a state: the thermal-loss sample
//! channel, the lossy idler memory, and the two-mode-squeezing receiver.

use crate::error::{Error, Result};
use crate::minimize::golden_min;

/// Physicality tolerance on symplectic eigenvalues. States whose smaller
/// symplectic eigenvalue falls below `1 - PHYSICAL_TOL` are rejected at
/// construction so the photon statistics never see a negative probability.
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Probe-source parameters: mean photon number per mode and the number of
/// identical copies sent per decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    n_s: f64,
    m_copies: u32,
}

impl SourceParams {
    pub fn new(n_s: f64, m_copies: u32) -> Result<Self> {
        if !(n_s >= 0.0) {
            return Err(Error::Domain {
                name: "n_s",
                value: n_s,
                expected: "n_s >= 0",
            });
        }
        if m_copies == 0 {
            return Err(Error::Domain {
                name: "m_copies",
                value: 0.0,
                expected: "m_copies >= 1",
            });
        }
        Ok(Self { n_s, m_copies })
    }

    pub fn n_s(&self) -> f64 {
        self.n_s
    }

    pub fn m_copies(&self) -> u32 {
        self.m_copies
    }
}

/// Environment seen by one probe: thermal occupation of the sample channel
/// and the transmissivity of the idler memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelEnv {
    n_b: f64,
    kappa_i: f64,
}

impl ChannelEnv {
    pub fn new(n_b: f64, kappa_i: f64) -> Result<Self> {
        if !(n_b >= 0.0) {
            return Err(Error::Domain {
                name: "n_b",
                value: n_b,
                expected: "n_b >= 0",
            });
        }
        if !(0.0..=1.0).contains(&kappa_i) {
            return Err(Error::Domain {
                name: "kappa_i",
                value: kappa_i,
                expected: "0 <= kappa_i <= 1",
            });
        }
        Ok(Self { n_b, kappa_i })
    }

    /// Noiseless channel with perfect idler storage.
    pub fn ideal() -> Self {
        Self {
            n_b: 0.0,
            kappa_i: 1.0,
        }
    }

    pub fn n_b(&self) -> f64 {
        self.n_b
    }

    pub fn kappa_i(&self) -> f64 {
        self.kappa_i
    }

    pub fn is_ideal(&self) -> bool {
        self.n_b == 0.0 && self.kappa_i == 1.0
    }
}

/// Two-mode Gaussian state in standard form (E, S, C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeState {
    e: f64,
    s: f64,
    c: f64,
}

impl TwoModeState {
    /// Validates marginal variances and the symplectic spectrum before
    /// admitting the state.
    pub fn new(e: f64, s: f64, c: f64) -> Result<Self> {
        if !(e >= 1.0 - PHYSICAL_TOL) || !e.is_finite() {
            return Err(Error::Domain {
                name: "e",
                value: e,
                expected: "E >= 1 (shot-noise units)",
            });
        }
        if !(s >= 1.0 - PHYSICAL_TOL) || !s.is_finite() {
            return Err(Error::Domain {
                name: "s",
                value: s,
                expected: "S >= 1 (shot-noise units)",
            });
        }
        if !c.is_finite() {
            return Err(Error::Domain {
                name: "c",
                value: c,
                expected: "finite cross-correlation",
            });
        }
        let (nu_minus, _) = symplectic_eigenvalues_raw(e, s, c);
        if nu_minus < 1.0 - PHYSICAL_TOL {
            return Err(Error::Unphysical { nu_minus });
        }
        Ok(Self { e, s, c })
    }

    /// Signal quadrature variance E.
    pub fn e(&self) -> f64 {
        self.e
    }

    /// Idler quadrature variance S.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Phase-sensitive cross correlation C.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Mean signal photon number (E - 1)/2, clamped against rounding.
    pub fn signal_mean_photons(&self) -> f64 {
        ((self.e - 1.0) / 2.0).max(0.0)
    }

    /// Mean idler photon number (S - 1)/2, clamped against rounding.
    pub fn idler_mean_photons(&self) -> f64 {
        ((self.s - 1.0) / 2.0).max(0.0)
    }

    /// Symplectic eigenvalues (nu_minus, nu_plus) of the 4x4 covariance.
    ///
    /// Values below 1 flag an unphysical covariance; construction already
    /// rejects those beyond [`PHYSICAL_TOL`], so here they only diagnose
    /// rounding.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        symplectic_eigenvalues_raw(self.e, self.s, self.c)
    }

    /// Swap the signal and idler roles.
    pub fn swapped(&self) -> Self {
        Self {
            e: self.s,
            s: self.e,
            c: self.c,
        }
    }
}

/// Symplectic eigenvalues of the standard-form covariance with entries
/// (e, s, c), without any physicality requirement.
///
/// For blocks `E.I, S.I, C.Z` the pair is
/// `( sqrt((E+S)^2 - 4C^2) -+ |E-S| ) / 2`; the TMSV purity check in the
/// tests pins the convention.
pub fn symplectic_eigenvalues_raw(e: f64, s: f64, c: f64) -> (f64, f64) {
    let disc = ((e + s) * (e + s) - 4.0 * c * c).max(0.0).sqrt();
    let diff = (e - s).abs();
    (0.5 * (disc - diff), 0.5 * (disc + diff))
}

/// OPA gain G >= 1 (G = 1 means the amplifier is absent).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Gain(f64);

impl Gain {
    pub fn new(g: f64) -> Result<Self> {
        if !(g >= 1.0) || !g.is_finite() {
            return Err(Error::Domain {
                name: "g",
                value: g,
                expected: "g >= 1",
            });
        }
        Ok(Self(g))
    }

    /// The pass-through setting.
    pub fn unit() -> Self {
        Self(1.0)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Domain {
            name,
            value,
            expected: "in [0, 1]",
        });
    }
    Ok(())
}

fn check_nonneg(name: &'static str, value: f64) -> Result<()> {
    if !(value >= 0.0) {
        return Err(Error::Domain {
            name,
            value,
            expected: ">= 0",
        });
    }
    Ok(())
}

/// Two-mode squeezed vacuum with mean photon number `n_s` per arm:
/// E = S = 2 n_s + 1, C = 2 sqrt(n_s (n_s + 1)). Pure for every `n_s`.
pub fn tmsv_state(n_s: f64) -> Result<TwoModeState> {
    check_nonneg("n_s", n_s)?;
    let e = 2.0 * n_s + 1.0;
    let c = 2.0 * (n_s * (n_s + 1.0)).sqrt();
    TwoModeState::new(e, e, c)
}

/// State of a signal-idler pair after the signal crossed the sample channel
/// (transmissivity `kappa_s`, thermal noise `env.n_b`) and the idler its
/// storage loss:
/// E = 2(kappa_s n_s + n_b) + 1, S = 2 kappa_i n_s + 1,
/// C = 2 sqrt(kappa_s kappa_i n_s (1 + n_s)).
pub fn return_state(n_s: f64, kappa_s: f64, env: &ChannelEnv) -> Result<TwoModeState> {
    check_nonneg("n_s", n_s)?;
    check_unit_interval("kappa_s", kappa_s)?;
    let e = 2.0 * (kappa_s * n_s + env.n_b) + 1.0;
    let s = 2.0 * env.kappa_i * n_s + 1.0;
    let c = 2.0 * (kappa_s * env.kappa_i * n_s * (1.0 + n_s)).sqrt();
    TwoModeState::new(e, s, c)
}

/// Return state pushed through the receiver's two-mode squeezer with gain
/// G = 1 + N', written out in terms of the channel parameters.
///
/// The receiver convention is the anti-squeezing direction
/// `a_S -> sqrt(G) a_S - sqrt(G-1) a_I^dagger` (and symmetrically for the
/// idler), which makes G = 1 the exact identity on (E, S, C) and sends the
/// background hypothesis to vacuum at the nulling gain.
pub fn opa_apply(n_s: f64, kappa_s: f64, env: &ChannelEnv, gain: Gain) -> Result<TwoModeState> {
    check_nonneg("n_s", n_s)?;
    check_unit_interval("kappa_s", kappa_s)?;
    let np = gain.value() - 1.0;
    let sq = (np * (np + 1.0)).sqrt(); // sqrt(N'(1+N'))
    let cp = (kappa_s * env.kappa_i * n_s * (1.0 + n_s)).sqrt();
    let occ = 1.0 + env.kappa_i * n_s + kappa_s * n_s;
    let e = 1.0 + 2.0 * kappa_s * n_s - 4.0 * cp * sq + 2.0 * np * occ
        + 2.0 * env.n_b * (1.0 + np);
    let s =
        1.0 + 2.0 * env.kappa_i * n_s - 4.0 * cp * sq + 2.0 * np * occ + 2.0 * env.n_b * np;
    let c = 2.0 * (1.0 + 2.0 * np) * cp - 2.0 * sq * occ - 2.0 * env.n_b * sq;
    // Nulling drives E to exactly 1; keep rounding from tripping validation.
    TwoModeState::new(e.max(1.0), s.max(1.0), c)
}

/// Gain that empties the signal mode of the background return when the
/// idler is stored perfectly and the channel is noiseless:
/// G = 1 + n_s kappa_b / (1 + n_s (1 - kappa_b)).
pub fn nulling_gain(n_s: f64, kappa_b: f64) -> Result<Gain> {
    check_nonneg("n_s", n_s)?;
    check_unit_interval("kappa_b", kappa_b)?;
    Gain::new(1.0 + n_s * kappa_b / (1.0 + n_s * (1.0 - kappa_b)))
}

/// Gain minimizing the post-amplifier signal occupation (E - 1)/2 rather
/// than nulling it; the two coincide only in the lossless-idler, noiseless
/// case. Located by golden-section search on g in [1, 1 + 10 n_s].
pub fn min_signal_gain(n_s: f64, kappa_s: f64, env: &ChannelEnv) -> Result<Gain> {
    check_nonneg("n_s", n_s)?;
    check_unit_interval("kappa_s", kappa_s)?;
    if n_s == 0.0 {
        return Ok(Gain::unit());
    }
    let objective = |g: f64| {
        let np = g - 1.0;
        let sq = (np * (np + 1.0)).sqrt();
        let cp = (kappa_s * env.kappa_i * n_s * (1.0 + n_s)).sqrt();
        let occ = 1.0 + env.kappa_i * n_s + kappa_s * n_s;
        let e = 1.0 + 2.0 * kappa_s * n_s - 4.0 * cp * sq + 2.0 * np * occ
            + 2.0 * env.n_b * (1.0 + np);
        (e - 1.0) / 2.0
    };
    let (g, _) = golden_min(objective, 1.0, 1.0 + 10.0 * n_s, 1e-10);
    Gain::new(g.max(1.0))
}

/// Quantum Chernoff bound on the M-copy binary discrimination error.
#[derive(Debug, Clone, Copy)]
pub struct QcbBound {
    /// The bound itself, Q_s^M / 2.
    pub probability: f64,
    /// Single-copy overlap at the optimizing exponent.
    pub q_tilde: f64,
    /// Location of the infimum over s in [0, 1]. Reported for reference
    /// only; nothing downstream depends on it.
    pub s_star: f64,
}

/// Quantum Chernoff bound for discriminating M copies of `state_t` from M
/// copies of `state_b`:
/// `P_e <= inf_s Tr(rho^s sigma^(1-s))^M / 2`.
///
/// The single-copy overlap comes from the Gaussian-state formula evaluated
/// on each state's symplectic decomposition; the infimum over s is located
/// by golden-section search to 1e-10.
pub fn qcb(state_t: &TwoModeState, state_b: &TwoModeState, m_copies: u32) -> Result<QcbBound> {
    if m_copies == 0 {
        return Err(Error::Domain {
            name: "m_copies",
            value: 0.0,
            expected: ">= 1",
        });
    }
    let a = WilliamsonForm::decompose(state_t);
    let b = WilliamsonForm::decompose(state_b);
    let overlap = |s: f64| gaussian_overlap(&a, &b, s);
    let (s_star, q_tilde) = golden_min(overlap, 0.0, 1.0, 1e-10);
    let q_tilde = q_tilde.min(1.0);
    let probability = 0.5 * (m_copies as f64 * q_tilde.ln()).exp();
    Ok(QcbBound {
        probability,
        q_tilde,
        s_star,
    })
}

/// Symplectic decomposition of a standard-form state: a two-mode squeezer
/// with parameter r acting on a product of thermal modes with symplectic
/// eigenvalues (nu_a on the signal side, nu_b on the idler side).
struct WilliamsonForm {
    nu_a: f64,
    nu_b: f64,
    cosh2: f64, // cosh^2 r
    sinh2: f64, // sinh^2 r
    cs: f64,    // cosh r sinh r, signed like C
}

impl WilliamsonForm {
    fn decompose(state: &TwoModeState) -> Self {
        let (e, s, c) = (state.e(), state.s(), state.c());
        let total = ((e + s) * (e + s) - 4.0 * c * c).max(0.0).sqrt(); // nu_a + nu_b
        let nu_a = clamp_eigenvalue(0.5 * (total + (e - s)));
        let nu_b = clamp_eigenvalue(0.5 * (total - (e - s)));
        // tanh 2r = 2C/(E+S)
        let t2r = (2.0 * c / (e + s)).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
        let cosh2r = 1.0 / (1.0 - t2r * t2r).sqrt();
        Self {
            nu_a,
            nu_b,
            cosh2: 0.5 * (cosh2r + 1.0),
            sinh2: 0.5 * (cosh2r - 1.0),
            cs: 0.5 * cosh2r * t2r,
        }
    }

    /// Standard-form covariance with each thermal eigenvalue nu mapped
    /// through `f`.
    fn mapped(&self, f: impl Fn(f64) -> f64) -> (f64, f64, f64) {
        let (fa, fb) = (f(self.nu_a), f(self.nu_b));
        (
            fa * self.cosh2 + fb * self.sinh2,
            fa * self.sinh2 + fb * self.cosh2,
            (fa + fb) * self.cs,
        )
    }

    fn g_product(&self, s: f64) -> f64 {
        g_fn(self.nu_a, s) * g_fn(self.nu_b, s)
    }
}

/// Eigenvalues within the physicality tolerance of 1 are treated as exactly
/// pure; the s -> 0 behaviour of the overlap functions is wildly sensitive
/// to a 1e-12 impurity otherwise.
fn clamp_eigenvalue(nu: f64) -> f64 {
    if nu < 1.0 + PHYSICAL_TOL {
        1.0
    } else {
        nu
    }
}

/// G_s(nu) = 2^s / ((nu+1)^s - (nu-1)^s).
fn g_fn(nu: f64, s: f64) -> f64 {
    if nu <= 1.0 {
        return 1.0; // pure mode: (2/( nu+1))^s with nu = 1
    }
    let delta = ((nu + 1.0) / (nu - 1.0)).ln();
    // (nu+1)^s - (nu-1)^s = ((nu+1)(nu-1))^{s/2} * 2 sinh(s delta / 2)
    let ln_geo = 0.5 * s * ((nu + 1.0) * (nu - 1.0)).ln();
    (s * std::f64::consts::LN_2 - ln_geo - (2.0 * (0.5 * s * delta).sinh()).ln()).exp()
}

/// Lambda_s(nu) = ((nu+1)^s + (nu-1)^s) / ((nu+1)^s - (nu-1)^s) = coth(s delta/2).
fn lambda_fn(nu: f64, s: f64) -> f64 {
    if nu <= 1.0 {
        return 1.0;
    }
    let delta = ((nu + 1.0) / (nu - 1.0)).ln();
    1.0 / (0.5 * s * delta).tanh()
}

/// Tr(rho^s sigma^(1-s)) for two standard-form two-mode Gaussian states.
fn gaussian_overlap(a: &WilliamsonForm, b: &WilliamsonForm, s: f64) -> f64 {
    // Keep away from the exact endpoints where mixed-state factors are 0 * inf.
    let s = s.clamp(1e-12, 1.0 - 1e-12);
    let (ea, sa, ca) = a.mapped(|nu| lambda_fn(nu, s));
    let (eb, sb, cb) = b.mapped(|nu| lambda_fn(nu, 1.0 - s));
    let (e, si, c) = (ea + eb, sa + sb, ca + cb);
    let sqrt_det = e * si - c * c; // det of the summed standard form is its square
    4.0 * a.g_product(s) * b.g_product(1.0 - s) / sqrt_det
}
