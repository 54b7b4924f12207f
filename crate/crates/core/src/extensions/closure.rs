//! Exact convex/concave closure oracles for small ground sets.
//!
//! The convex closure `f⁻(x)` is the least expectation of `f` over
//! distributions with marginals `x`; the concave closure `f⁺(x)` is the
//! greatest. Both are computed here as explicit linear programs over all
//! `2^n` subset columns. This is a ground-truth oracle, not a production
//! path (evaluating `f⁺` is NP-hard in general), so the ground set is capped
//! at [`LP_LIMIT`].

use super::chain::lovasz_eval;
use super::distribution::DiscreteDistribution;
use super::point::PointInCube;
use super::simplex::{self, StandardLp};
use crate::error::{Error, Result};
use crate::setfn::{SetFunctionOracle, Subset};

/// Largest ground set the closure LPs accept (`2^12` columns).
pub const LP_LIMIT: usize = 12;

const TOL: f64 = 1e-9;

/// Closure value together with an optimal distribution attaining it.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub value: f64,
    pub distribution: DiscreteDistribution,
}

/// Exact convex closure `f⁻(x)` by linear programming over all subsets.
pub fn convex_closure_bruteforce(
    oracle: &SetFunctionOracle,
    x: &PointInCube,
) -> Result<ClosureResult> {
    closure_lp(oracle, x, false)
}

/// Exact concave closure `f⁺(x)` by linear programming over all subsets.
pub fn concave_closure_bruteforce(
    oracle: &SetFunctionOracle,
    x: &PointInCube,
) -> Result<ClosureResult> {
    closure_lp(oracle, x, true)
}

fn closure_lp(
    oracle: &SetFunctionOracle,
    x: &PointInCube,
    maximize: bool,
) -> Result<ClosureResult> {
    if oracle.ground() != x.ground() {
        return Err(Error::input("point and oracle range over different ground sets"));
    }
    let n = oracle.n();
    if n > LP_LIMIT {
        return Err(Error::budget(format!(
            "closure LP has 2^n columns; n = {n} exceeds {LP_LIMIT}"
        )));
    }
    let ncols = 1usize << n;
    let nrows = n + 1;

    let mut a = vec![0.0; nrows * ncols];
    for col in 0..ncols {
        for i in 0..n {
            if col >> i & 1 == 1 {
                a[i * ncols + col] = 1.0;
            }
        }
        a[n * ncols + col] = 1.0;
    }
    let mut b: Vec<f64> = x.coords().to_vec();
    b.push(1.0);

    let mut c = Vec::with_capacity(ncols);
    for col in 0..ncols {
        let v = oracle.evaluate(&Subset::from_mask(n, col as u64))?;
        c.push(if maximize { -v } else { v });
    }

    let sol = simplex::solve(&StandardLp { nrows, ncols, a, b, c })?;

    let mut entries = Vec::new();
    for (col, &p) in sol.x.iter().enumerate() {
        if p > 1e-12 {
            entries.push((Subset::from_mask(n, col as u64), p));
        }
    }
    // Renormalize away simplex round-off so the result is a valid
    // distribution at 1e-12 granularity.
    let total: f64 = entries.iter().map(|(_, p)| p).sum();
    for (_, p) in entries.iter_mut() {
        *p /= total;
    }
    let distribution = DiscreteDistribution::new(x.ground().clone(), entries)?;
    let value = if maximize { -sol.value } else { sol.value };
    Ok(ClosureResult { value, distribution })
}

/// Searches for a point where the Lovász extension exceeds the convex
/// closure, which exists iff `f` is not submodular.
///
/// When a diminishing-returns violation `(A, i, j)` exists, the returned
/// point has `x = 1` on `A`, `1/2` on `{i, j}` and `0` elsewhere, and the
/// reported gap is `𝓛_f(x) − f⁻(x) > 0`. Returns `None` exactly when `f`
/// is submodular.
pub fn find_convexity_witness(
    oracle: &SetFunctionOracle,
) -> Result<Option<(PointInCube, f64)>> {
    let n = oracle.n();
    if n > LP_LIMIT {
        return Err(Error::budget(format!(
            "convexity witness search uses the closure LP; n = {n} exceeds {LP_LIMIT}"
        )));
    }
    let size = 1usize << n;
    let mut values = Vec::with_capacity(size);
    for mask in 0..size {
        values.push(oracle.evaluate(&Subset::from_mask(n, mask as u64))?);
    }

    for a in 0..size as u64 {
        for i in 0..n {
            if a >> i & 1 == 1 {
                continue;
            }
            for j in (i + 1)..n {
                if a >> j & 1 == 1 {
                    continue;
                }
                let bi = 1u64 << i;
                let bj = 1u64 << j;
                // f(A∪{i,j}) − f(A∪{i}) > f(A∪{j}) − f(A) breaks
                // diminishing returns for adding j.
                let quad = values[(a | bi | bj) as usize] - values[(a | bi) as usize]
                    - values[(a | bj) as usize]
                    + values[a as usize];
                if quad > TOL {
                    let mut coords: Vec<f64> = (0..n)
                        .map(|k| if a >> k & 1 == 1 { 1.0 } else { 0.0 })
                        .collect();
                    coords[i] = 0.5;
                    coords[j] = 0.5;
                    let x = PointInCube::new(oracle.ground().clone(), coords)?;
                    let gap = lovasz_eval(oracle, &x)? - convex_closure_bruteforce(oracle, &x)?.value;
                    return Ok(Some((x, gap)));
                }
            }
        }
    }
    Ok(None)
}
