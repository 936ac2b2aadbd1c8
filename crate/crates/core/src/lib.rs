//! Index coding, network coding and matroid representations over small
//! finite fields.
//!
//! The crate models the three problems, verifies codes and representations
//! by exact rank tests, converts instances between the three worlds, carries
//! codes across those conversions constructively, and runs bounded
//! exhaustive searches that certify existence or nonexistence of codes at a
//! fixed block length and field.
//!
//! Internally every index (message, client, edge, ground-set element) is
//! 0-based. JSON files use 1-based labels; see [`io`].

pub mod femat;
pub mod fixtures;
pub mod galois;
pub mod index;
pub mod io;
pub mod matroid;
pub mod netcode;
pub mod reduce;
pub mod search;
pub mod solve;

pub mod cli;

pub use femat::{FeMatrix, MatrixError};
pub use galois::{FieldElement, FieldSpec, GaloisError};
