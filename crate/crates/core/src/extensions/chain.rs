//! The Lovász extension and its chain distributions.
//!
//! For `x ∈ [0,1]^X`, sort the elements so `x(v_1) ≥ x(v_2) ≥ … ≥ x(v_n)`
//! and let `S_i = {v_1, …, v_i}`. The unique coefficients with
//! `x = Σ λ_i 1_{S_i}`, `λ_i ≥ 0`, `Σ λ_i = 1` are `λ_n = x(v_n)`,
//! `λ_i = x(v_i) − x(v_{i+1})` and `λ_0 = 1 − x(v_1)`; the value of the
//! extension is `Σ_i λ_i f(S_i)`. The distribution placing mass `λ_i` on
//! `S_i` is the unique chain distribution with marginals `x`.

use super::distribution::DiscreteDistribution;
use super::point::PointInCube;
use crate::error::{Error, Result};
use crate::setfn::{GroundSet, SetFunctionOracle, Subset};

const SUM_TOL: f64 = 1e-9;

// Coefficients at or below this are floating-point residue of exact zeros
// (tied coordinates, saturated marginals) and are dropped, matching the
// 1e-12 bookkeeping granularity used by the uncrossing procedure.
pub(crate) const DROP_TOL: f64 = 1e-12;

/// A distribution whose support is a nested family of prefix sets.
///
/// The support stores only the prefixes with strictly positive mass, in
/// ascending cardinality order. `sorted_order` is the permutation of the
/// elements by descending coordinate (ties by ground order).
#[derive(Debug, Clone)]
pub struct ChainDistribution {
    ground: GroundSet,
    support: Vec<(Subset, f64)>,
    sorted_order: Vec<usize>,
}

impl ChainDistribution {
    pub(crate) fn from_parts(
        ground: GroundSet,
        support: Vec<(Subset, f64)>,
        sorted_order: Vec<usize>,
    ) -> Self {
        ChainDistribution { ground, support, sorted_order }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// `(prefix set, coefficient)` pairs with positive mass, smallest first.
    pub fn support(&self) -> &[(Subset, f64)] {
        &self.support
    }

    pub fn sorted_order(&self) -> &[usize] {
        &self.sorted_order
    }

    /// Recomputes the marginals `x(v) = Σ_{S ∋ v} λ_S`.
    pub fn marginals(&self) -> PointInCube {
        let n = self.ground.n();
        let mut x = vec![0.0; n];
        for (s, p) in &self.support {
            for i in s.iter() {
                x[i] += p;
            }
        }
        for c in x.iter_mut() {
            *c = c.clamp(0.0, 1.0);
        }
        PointInCube::new(self.ground.clone(), x).expect("chain marginals lie in the cube")
    }

    /// Expected value of `f` over the chain; at most `n + 1` queries.
    pub fn expected_value(&self, oracle: &SetFunctionOracle) -> Result<f64> {
        let mut total = 0.0;
        for (s, p) in &self.support {
            total += p * oracle.evaluate(s)?;
        }
        Ok(total)
    }

    pub fn to_discrete(&self) -> DiscreteDistribution {
        DiscreteDistribution::new(self.ground.clone(), self.support.clone())
            .expect("a chain distribution is a valid discrete distribution")
    }

    /// Same prefix sets and coefficients, coefficients compared at `tol`.
    pub fn approx_eq(&self, other: &ChainDistribution, tol: f64) -> bool {
        self.support.len() == other.support.len()
            && self
                .support
                .iter()
                .zip(&other.support)
                .all(|((s1, p1), (s2, p2))| s1 == s2 && (p1 - p2).abs() <= tol)
    }
}

/// The unique chain distribution with marginals `x`.
///
/// Sort ties are broken by ground order and zero-coefficient prefixes are
/// dropped, so equal points produce identical structures.
pub fn chain_distribution(x: &PointInCube) -> ChainDistribution {
    let n = x.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        x.get(b)
            .partial_cmp(&x.get(a))
            .expect("cube coordinates are finite")
            .then(a.cmp(&b))
    });

    let mut support = Vec::with_capacity(n + 1);
    let lambda0 = 1.0 - x.get(order[0]);
    if lambda0 > DROP_TOL {
        support.push((Subset::empty(n), lambda0));
    }
    let mut prefix = Subset::empty(n);
    for (i, &v) in order.iter().enumerate() {
        prefix.insert(v);
        let lambda = if i + 1 < n {
            x.get(v) - x.get(order[i + 1])
        } else {
            x.get(v)
        };
        if lambda > DROP_TOL {
            support.push((prefix.clone(), lambda));
        }
    }
    debug_assert!(
        (support.iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs() <= SUM_TOL,
        "chain coefficients must sum to 1"
    );
    ChainDistribution::from_parts(x.ground().clone(), support, order)
}

/// Value of the Lovász extension `Σ_i λ_i f(S_i)` at `x`.
pub fn lovasz_eval(oracle: &SetFunctionOracle, x: &PointInCube) -> Result<f64> {
    check_ground(oracle, x)?;
    chain_distribution(x).expected_value(oracle)
}

/// The greedy-order marginal vector `g(v_i) = f(S_i) − f(S_{i−1})`.
///
/// For submodular `f` this is a subgradient of the (then convex) Lovász
/// extension at `x`; it always satisfies `g · x = 𝓛_f(x) − f(∅)`.
pub fn lovasz_subgradient(oracle: &SetFunctionOracle, x: &PointInCube) -> Result<Vec<f64>> {
    check_ground(oracle, x)?;
    let chain = chain_distribution(x);
    let n = x.n();
    let mut g = vec![0.0; n];
    let mut prefix = Subset::empty(n);
    let mut prev = oracle.evaluate(&prefix)?;
    for &v in chain.sorted_order() {
        prefix.insert(v);
        let value = oracle.evaluate(&prefix)?;
        g[v] = value - prev;
        prev = value;
    }
    Ok(g)
}

fn check_ground(oracle: &SetFunctionOracle, x: &PointInCube) -> Result<()> {
    if oracle.ground() != x.ground() {
        return Err(Error::input("point and oracle range over different ground sets"));
    }
    Ok(())
}
