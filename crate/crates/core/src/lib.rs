//! Simulation and analysis toolkit for entanglement-assisted absorption
//! spectroscopy.
//!
//! The crate models a two-mode squeezed-vacuum probe whose signal arm passes
//! through a thermal loss channel (the sample) while the idler is stored in a
//! lossy memory. An optical parametric amplifier recombines the pair at the
//! receiver and photon counting plus a maximum-likelihood rule discriminates
//! between candidate transmissivity patterns. Alongside the Monte-Carlo
//! machinery the crate provides the exact joint photon-number statistics,
//! quantum Chernoff bounds, classical benchmark receivers and lower bounds,
//! and constrained SPSA optimization of source/receiver parameters.
//!
//! Monte-Carlo trials draw from per-trial counter-derived RNG streams, so the
//! estimates are bit-identical whether they run on one thread or many. The
//! `parallel` feature (on by default) enables the rayon execution path.

pub mod bounds;
pub mod error;
pub mod gaussian;
pub mod optimizer;
pub mod pattern;
pub mod photon;
pub mod project;
pub mod receivers;
pub mod rng;
pub mod simulation;
pub mod special;
pub mod spectra;

mod minimize;

pub use error::{Error, Result};
pub use gaussian::{ChannelEnv, Gain, SourceParams, TwoModeState};
pub use pattern::TransmissivityPattern;
pub use simulation::{ErrorEstimate, ExperimentConfig};
