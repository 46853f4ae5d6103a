//! Exact Morse index iteration for completely non-degenerate closed geodesics
//! on spheres, and a mechanical replay of the case analysis showing that a
//! bumpy Finsler sphere cannot carry exactly one prime closed geodesic.
//!
//! Module map:
//!
//! - [`exact`]: numbers `(a + b*sqrt(D))/c` with certified comparison and floors
//! - [`symplectic`]: normal-form blocks, the diamond sum and unit-circle signatures
//! - [`iteration`]: NCG classification, iterated indices, mean index, analytic period
//! - [`morse`]: Betti numbers, Poincaré series, Morse tables, the mean index identity
//! - [`prover`]: lemma checks and the per-case contradiction traces

pub mod exact;
pub mod iteration;
pub mod morse;
pub mod prover;
pub mod symplectic;

pub use exact::{ExactError, ExactReal};
pub use iteration::{GeodesicModel, IndexProfile, ModelError, NcgCase};
pub use symplectic::{Block, NormalFormDecomposition, OmegaSignature, SymplecticError};
