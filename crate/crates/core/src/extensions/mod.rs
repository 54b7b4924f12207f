//! Continuous extensions of set functions.
//!
//! * Lovász extension with explicit chain distributions and subgradients.
//! * Multilinear extension: exact evaluation, seeded Monte Carlo, first and
//!   second partial derivatives.
//! * Uncrossing of arbitrary distributions into the chain distribution.
//! * Exact LP oracles for the convex and concave closures on small ground
//!   sets, and the convexity-witness construction they support.

mod chain;
mod closure;
mod distribution;
mod multilinear;
mod point;
pub(crate) mod simplex;

pub use chain::{chain_distribution, lovasz_eval, lovasz_subgradient, ChainDistribution};
pub use closure::{
    concave_closure_bruteforce, convex_closure_bruteforce, find_convexity_witness, ClosureResult,
    LP_LIMIT,
};
pub use distribution::{uncross_step, uncross_to_chain, DiscreteDistribution, UncrossStep};
pub use multilinear::{
    multilinear_eval_exact, multilinear_eval_sampled, multilinear_gradient,
    multilinear_gradient_vector, second_partial, EvalMode, EXACT_EVAL_LIMIT,
};
pub use point::PointInCube;
