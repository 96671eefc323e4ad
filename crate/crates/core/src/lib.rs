//! Classical capacity of a two-sender quantum multiple-access channel.
//!
//! Alice and Bob pick letters `alpha`, `beta` with a product distribution
//! `p_alpha q_beta`; the receiver gets the pure state `|psi_alpha_beta>`. The
//! crate computes the entropies `H(rho)`, `H_A`, `H_B`, the rate region they
//! bound, simulates a two-stage compound decoder on small codebooks, checks
//! the converse's entropy inequalities, and builds the ensembles of the
//! entanglement-assisted (superdense) scheme.

pub mod cli;
pub mod coding;
pub mod converse;
pub mod ensemble;
pub mod entropy;
pub mod error;
pub mod matrix;
pub mod output;
pub mod region;
pub mod rng;
pub mod sample;
pub mod superdense;

pub use ensemble::{DensityMatrix, Sender, SignalEnsemble};
pub use entropy::EntropyProfile;
pub use error::{Error, Result};
pub use region::{RatePair, RateRegion};
