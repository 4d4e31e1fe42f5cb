//! Weighted graphs, simplicial complexes, high-order walk Markov chains, and
//! the numerical verification ledger that ties them together.
//!
//! The crate builds a pure weighted complex out of a base expander graph and
//! a small complete complex, derives every walk, projection, and restriction
//! chain attached to that construction, and checks each closed-form
//! transition probability, stationary distribution, and spectral-gap bound
//! against dense eigensolves.
//!
//! All numerical code is generic over the scalar type through
//! [`scalar::Real`]; the `*64` aliases at the crate root fix `f64` for
//! ordinary use.

pub mod densifier;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod markov;
pub mod report;
pub mod scalar;
pub mod simplicial;
pub mod walks;

pub use densifier::{Color, DensifiedComplex, DensifiedFace};
pub use error::{Error, Result};
pub use graph::{SpectralSummary, SpectrumMode, WeightedGraph};
pub use linalg::Matrix;
pub use markov::{Decomposition, MarkovChain};
pub use report::{BoundEntry, BoundReport, Relation};
pub use scalar::Real;
pub use simplicial::{Face, LinkView, SimplicialComplex};

/// Dense matrix over `f64`.
pub type Matrix64 = Matrix<f64>;
/// Weighted graph over `f64`.
pub type WeightedGraph64 = WeightedGraph<f64>;
/// Markov chain over `f64`.
pub type MarkovChain64 = MarkovChain<f64>;
/// Simplicial complex over `f64`.
pub type SimplicialComplex64 = SimplicialComplex<f64>;
/// Densified complex over `f64`.
pub type DensifiedComplex64 = DensifiedComplex<f64>;
