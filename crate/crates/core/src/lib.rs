//! Structured list recovery for folded Reed-Solomon codes.
//!
//! The pipeline takes per-coordinate candidate lists, finds an affine space
//! containing every close codeword, and prunes that space with the
//! received-word oblivious [`prune::fprune`]. Each pruning run pins a small
//! set of coordinates, and [`sumset::reduce`] turns that set into a sum-set
//! `A_1 + ... + A_u` with `|A_i| <= ell`. The union of the sum-sets from `t`
//! runs covers the whole list with high probability.
//!
//! [`verify`] checks the supporting statements empirically on small codes:
//! the subspace-design property, pruning success floors, the potential
//! monotonicity step, and the list-size bounds.

pub mod cli;
pub mod error;
pub mod frs;
pub mod gf;
pub mod instance;
pub mod prune;
pub mod recovery;
pub mod selftest;
pub mod sumset;
pub mod verify;
pub mod vspace;

pub use error::{Error, Result};
pub use frs::{Codeword, FrsCode};
pub use gf::{PrimeField, Rational};
pub use instance::ListRecoveryInstance;
pub use prune::{fprune, PruneParams, PruneTrace};
pub use recovery::{recover, RecoveryConfig, RecoveryOutput, Step1Mode};
pub use sumset::{reduce, SumSet};
pub use vspace::{AffineSpace, Shape, Subspace, Vector};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator for trial `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
