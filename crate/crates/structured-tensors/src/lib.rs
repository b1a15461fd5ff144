//! Structured symmetric tensors: construction, decomposition, and cone
//! classification with independently verifiable certificates.
//!
//! A symmetric tensor of order m and dimension n is stored by exponent
//! multi-index, so symmetry is structural. On top of that kernel:
//!
//! - [`hankel`]: Hankel tensors from generating vectors, Vandermonde/Prony
//!   node recovery, inheritance reshapes, Schur-product decompositions.
//! - [`spectral`]: extremal H-eigenvalues and seeded positivity probes on
//!   the m-sphere and the simplex.
//! - [`sdp`]: a small dense semidefinite feasibility engine (cyclic Jacobi
//!   plus Dykstra alternating projections) for Gram and moment systems.
//! - [`cones`]: membership checks for SOS, SSOS, SOS*, CD (Hankel), CP,
//!   and COP probing. Every verdict carries a certificate re-checkable
//!   with one eigendecomposition and one inner product.
//! - [`bundled`]: the two built-in Hankel case studies behind
//!   `stt reproduce sec54` / `stt reproduce sec55`.
//!
//! See the crate examples for one runnable walkthrough per capability.

pub mod bundled;
pub mod cli;
pub mod cones;
pub mod error;
pub mod hankel;
pub mod io;
pub mod multi_index;
pub mod random;
pub mod sdp;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
pub use multi_index::{multi_indices, multinomial, MultiIndex};
pub use tensor::{from_weighted_powers, rank_one_pow, DecompositionList, SymmetricTensor};
