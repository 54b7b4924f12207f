//! Submodular optimization in the value-oracle model.
//!
//! The toolkit is organized around a queryable set-function oracle and the
//! continuous extensions built on top of it:
//!
//! * [`setfn`] — ground sets, value oracles, concrete submodular families
//!   (graph cuts, coverage, modular), and exhaustive brute-force ground
//!   truth.
//! * [`extensions`] — the Lovász extension with explicit chain
//!   distributions, uncrossing, the multilinear extension (exact and
//!   sampled) with gradients, and LP-based convex/concave closure oracles
//!   for small ground sets.
//! * [`matroids`] — matroid independence oracles, rank, linear optimization
//!   over the matroid polytope, membership and tight-set machinery.
//! * [`sfm`] — submodular function minimization by projected subgradient
//!   descent on the Lovász extension, with element constraints and a
//!   budgeted variant.
//! * [`maximize`] — monotone submodular maximization over a matroid:
//!   discretized continuous greedy on the multilinear extension followed by
//!   pipage rounding.
//! * [`cardmin`] — a 2-approximation for minimizing a nonnegative symmetric
//!   submodular function over nonempty sets of cardinality at most `k`.
pub mod cardmin;
mod error;
pub mod extensions;
pub mod matroids;
pub mod maximize;
pub(crate) mod rng;
pub mod setfn;
pub mod sfm;

pub use error::{Error, Result};
pub use setfn::{GroundSet, SetFunctionOracle, Subset};
