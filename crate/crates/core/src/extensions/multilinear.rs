//! The multilinear extension `F(x) = E_{S ~ D^i(x)} f(S)`, where `D^i(x)`
//! draws every element independently with probability `x(v)`.
//!
//! Exact evaluation sums `f(S) · Π_{i∈S} x_i · Π_{i∉S} (1−x_i)` over all
//! `2^n` subsets and is capped at `n = 20`; beyond that only the seeded
//! Monte Carlo path exists.

use super::point::PointInCube;
use crate::error::{Error, Result};
use crate::rng;
use crate::setfn::{SetFunctionOracle, Subset};

/// Largest ground set for which the exact `2^n`-term paths are allowed.
pub const EXACT_EVAL_LIMIT: usize = 20;

/// How gradients (and endpoint values in rounding) are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Exact summation; requires `n <= EXACT_EVAL_LIMIT`.
    Exact,
    /// Seeded Monte Carlo with a counter-based generator; deterministic for
    /// a fixed `(samples, seed)`.
    Sampled { samples: usize, seed: u64 },
}

/// Exact value of the multilinear extension at `x`.
pub fn multilinear_eval_exact(oracle: &SetFunctionOracle, x: &PointInCube) -> Result<f64> {
    check_ground(oracle, x)?;
    let n = x.n();
    if n > EXACT_EVAL_LIMIT {
        return Err(Error::budget(format!(
            "exact multilinear evaluation sums 2^n terms; n = {n} exceeds {EXACT_EVAL_LIMIT} \
             (use the sampled evaluator)"
        )));
    }
    let coords = x.coords();
    let mut total = 0.0;
    for mask in 0..(1u64 << n) {
        let mut weight = 1.0;
        for (i, &c) in coords.iter().enumerate() {
            weight *= if mask >> i & 1 == 1 { c } else { 1.0 - c };
        }
        if weight != 0.0 {
            total += weight * oracle.evaluate(&Subset::from_mask(n, mask))?;
        }
    }
    Ok(total)
}

/// Monte Carlo estimate of `F(x)` from `samples` independent draws of
/// `D^i(x)`, using the counter-based generator. Returns
/// `(estimate, standard_error)` with the standard error computed as the
/// sample standard deviation over `sqrt(samples)`.
pub fn multilinear_eval_sampled(
    oracle: &SetFunctionOracle,
    x: &PointInCube,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    check_ground(oracle, x)?;
    if samples == 0 {
        return Err(Error::input("sample count must be at least 1"));
    }
    let n = x.n();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for t in 0..samples {
        let s = draw(x, seed, t as u64 * n as u64);
        let v = oracle.evaluate(&s)?;
        sum += v;
        sum_sq += v * v;
    }
    let m = samples as f64;
    let mean = sum / m;
    let std_error = if samples > 1 {
        let var = ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0);
        (var / m).sqrt()
    } else {
        0.0
    };
    Ok((mean, std_error))
}

/// Partial derivative `∂F/∂x_i` at `x`, equal to
/// `E_{S ~ D^i(x)} [f(S ∪ {i}) − f(S \ {i})]`.
///
/// Exact mode conditions over the other `n − 1` coordinates.
pub fn multilinear_gradient(
    oracle: &SetFunctionOracle,
    x: &PointInCube,
    i: usize,
    mode: EvalMode,
) -> Result<f64> {
    check_ground(oracle, x)?;
    let n = x.n();
    if i >= n {
        return Err(Error::input(format!("element index {i} out of range")));
    }
    match mode {
        EvalMode::Exact => {
            if n > EXACT_EVAL_LIMIT {
                return Err(Error::budget(format!(
                    "exact gradient sums 2^(n-1) terms; n = {n} exceeds {EXACT_EVAL_LIMIT}"
                )));
            }
            let coords = x.coords();
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let mut total = 0.0;
            for mask in 0..(1u64 << others.len()) {
                let mut weight = 1.0;
                let mut base = Subset::empty(n);
                for (bit, &j) in others.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        weight *= coords[j];
                        base.insert(j);
                    } else {
                        weight *= 1.0 - coords[j];
                    }
                }
                if weight != 0.0 {
                    let with_i = oracle.evaluate(&base.with(i))?;
                    let without_i = oracle.evaluate(&base)?;
                    total += weight * (with_i - without_i);
                }
            }
            Ok(total)
        }
        EvalMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::input("sample count must be at least 1"));
            }
            let mut total = 0.0;
            for t in 0..samples {
                let s = draw(x, seed, t as u64 * n as u64);
                total += oracle.evaluate(&s.with(i))? - oracle.evaluate(&s.without(i))?;
            }
            Ok(total / samples as f64)
        }
    }
}

/// The full gradient `∇F(x)`.
///
/// In sampled mode all coordinates share the same drawn sets (common random
/// numbers), which keeps the argmax over coordinates stable.
pub fn multilinear_gradient_vector(
    oracle: &SetFunctionOracle,
    x: &PointInCube,
    mode: EvalMode,
) -> Result<Vec<f64>> {
    check_ground(oracle, x)?;
    let n = x.n();
    match mode {
        EvalMode::Exact => (0..n)
            .map(|i| multilinear_gradient(oracle, x, i, EvalMode::Exact))
            .collect(),
        EvalMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::input("sample count must be at least 1"));
            }
            let mut grad = vec![0.0; n];
            for t in 0..samples {
                let s = draw(x, seed, t as u64 * n as u64);
                let base = oracle.evaluate(&s)?;
                for (i, g) in grad.iter_mut().enumerate() {
                    if s.contains(i) {
                        *g += base - oracle.evaluate(&s.without(i))?;
                    } else {
                        *g += oracle.evaluate(&s.with(i))? - base;
                    }
                }
            }
            for g in grad.iter_mut() {
                *g /= samples as f64;
            }
            Ok(grad)
        }
    }
}

/// Second partial `∂²F/∂x_i∂x_j`, equal to
/// `E[f(S ∪ {i,j}) − f(S ∪ {i}) − f(S ∪ {j}) + f(S)]` over the other
/// coordinates. Diagonal entries are exactly 0 by multilinearity; for
/// submodular `f` every off-diagonal entry is nonpositive.
pub fn second_partial(
    oracle: &SetFunctionOracle,
    x: &PointInCube,
    i: usize,
    j: usize,
) -> Result<f64> {
    check_ground(oracle, x)?;
    let n = x.n();
    if i >= n || j >= n {
        return Err(Error::input("element index out of range"));
    }
    if i == j {
        return Ok(0.0);
    }
    if n > EXACT_EVAL_LIMIT {
        return Err(Error::budget(format!(
            "exact second partial sums 2^(n-2) terms; n = {n} exceeds {EXACT_EVAL_LIMIT}"
        )));
    }
    let coords = x.coords();
    let others: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
    let mut total = 0.0;
    for mask in 0..(1u64 << others.len()) {
        let mut weight = 1.0;
        let mut base = Subset::empty(n);
        for (bit, &k) in others.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                weight *= coords[k];
                base.insert(k);
            } else {
                weight *= 1.0 - coords[k];
            }
        }
        if weight != 0.0 {
            let both = oracle.evaluate(&base.with(i).with(j))?;
            let only_i = oracle.evaluate(&base.with(i))?;
            let only_j = oracle.evaluate(&base.with(j))?;
            let neither = oracle.evaluate(&base)?;
            total += weight * (both - only_i - only_j + neither);
        }
    }
    Ok(total)
}

/// One draw of `D^i(x)`: element `e` is included iff
/// `uniform(seed, base + e) < x(e)`.
fn draw(x: &PointInCube, seed: u64, base: u64) -> Subset {
    let n = x.n();
    let mut s = Subset::empty(n);
    for e in 0..n {
        if rng::uniform(seed, base + e as u64) < x.get(e) {
            s.insert(e);
        }
    }
    s
}

fn check_ground(oracle: &SetFunctionOracle, x: &PointInCube) -> Result<()> {
    if oracle.ground() != x.ground() {
        return Err(Error::input("point and oracle range over different ground sets"));
    }
    Ok(())
}
