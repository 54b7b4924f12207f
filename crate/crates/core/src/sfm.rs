//! Submodular function minimization by projected subgradient descent on the
//! Lovász extension.
//!
//! The minimum of a submodular `f` equals the minimum of its (convex) Lovász
//! extension, and every chain prefix of an iterate is a candidate minimizer,
//! so the solver scans all `n + 1` prefixes at every iterate and returns the
//! best set it has seen. On integer-valued instances with a sufficient
//! budget this recovers the exact minimum.
//!
//! Variants: unconstrained, element inclusion/exclusion constraints (by
//! restriction + contraction of the oracle), and minimization of the Lovász
//! extension over the budgeted cube `{x ∈ [0,1]^X : x(v1) = 1, Σx ≤ k}`.

use crate::error::{Error, Result};
use crate::extensions::PointInCube;
use crate::setfn::{SetFunctionOracle, Subset};

/// Step-size schedule for the subgradient iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `η_t = √n / (G √t)` with `G` the largest subgradient norm seen.
    DiminishingSqrt,
    /// Fixed step size.
    Constant(f64),
}

/// Solver parameters.
///
/// `seed` is reserved for optional random restarts (off by default); the
/// standard path is fully deterministic. `trace_level` 0 suppresses the
/// best-prefix trace, 1 (default) records every improvement.
#[derive(Debug, Clone)]
pub struct SolveParams {
    pub max_iterations: usize,
    pub step_rule: StepRule,
    pub tolerance: f64,
    pub seed: u64,
    pub trace_level: u8,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            max_iterations: 50_000,
            step_rule: StepRule::DiminishingSqrt,
            tolerance: 1e-6,
            seed: 0,
            trace_level: 1,
        }
    }
}

impl SolveParams {
    pub fn with_max_iterations(mut self, it: usize) -> Self {
        self.max_iterations = it;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::input("max_iterations must be at least 1"));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::input("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Result of a minimization run.
#[derive(Debug, Clone)]
pub struct SfmReport {
    pub minimizer: Subset,
    /// `f(minimizer)`, re-evaluated on return.
    pub value: f64,
    pub x_final: PointInCube,
    pub iterations: usize,
    pub oracle_queries: u64,
    /// `(iteration, value)` pairs, non-increasing in value.
    pub best_prefix_trace: Vec<(usize, f64)>,
    /// True when the solver stopped on its convergence test rather than by
    /// exhausting `max_iterations`. Optimality of the returned set is not
    /// certified in either case (no dual certificates here); exactness on
    /// integer-valued instances is established empirically by the test
    /// suite.
    pub certified: bool,
}

// Early stop: halt once the best prefix value has not improved by more than
// the tolerance for this many iterations.
fn stall_window(n: usize) -> usize {
    500 + 50 * n
}

/// Minimizes a (declared) submodular function over all subsets.
///
/// Projected subgradient descent on the Lovász extension over `[0,1]^X`
/// starting from `x₀ = (½,…,½)`; the projection is coordinate clipping.
/// Submodularity is the caller's responsibility: violations yield garbage
/// values, not crashes.
pub fn minimize(oracle: &SetFunctionOracle, params: &SolveParams) -> Result<SfmReport> {
    params.validate()?;
    let n = oracle.n();
    let queries_before = oracle.queries();
    let mut x = vec![0.5; n];

    let mut best_value = f64::INFINITY;
    let mut best_set = Subset::empty(n);
    let mut trace = Vec::new();
    let mut last_improvement = 0usize;
    let mut certified = false;
    let mut iterations = 0usize;
    let mut max_norm = 0.0f64;

    let mut order: Vec<usize> = (0..n).collect();
    let mut values = vec![0.0; n + 1];

    for t in 1..=params.max_iterations {
        iterations = t;
        order.sort_by(|&a, &b| {
            x[b].partial_cmp(&x[a]).expect("cube coordinates are finite").then(a.cmp(&b))
        });

        // Prefix values f(S_0), …, f(S_n) along the sorted order.
        let mut prefix = Subset::empty(n);
        values[0] = oracle.evaluate(&prefix)?;
        for (i, &v) in order.iter().enumerate() {
            prefix.insert(v);
            values[i + 1] = oracle.evaluate(&prefix)?;
        }

        // Track the best prefix seen anywhere.
        let mut scan = Subset::empty(n);
        if values[0] < best_value {
            if values[0] < best_value - params.tolerance {
                last_improvement = t;
            }
            best_value = values[0];
            best_set = scan.clone();
            if params.trace_level >= 1 {
                trace.push((t, best_value));
            }
        }
        for (i, &v) in order.iter().enumerate() {
            scan.insert(v);
            if values[i + 1] < best_value {
                if values[i + 1] < best_value - params.tolerance {
                    last_improvement = t;
                }
                best_value = values[i + 1];
                best_set = scan.clone();
                if params.trace_level >= 1 {
                    trace.push((t, best_value));
                }
            }
        }

        if t - last_improvement >= stall_window(n) {
            certified = true;
            break;
        }

        // Subgradient step with coordinate clipping.
        let mut norm_sq = 0.0;
        for i in 0..n {
            let g = values[i + 1] - values[i];
            norm_sq += g * g;
        }
        if norm_sq == 0.0 {
            certified = true;
            break;
        }
        max_norm = max_norm.max(norm_sq.sqrt());
        let eta = match params.step_rule {
            StepRule::DiminishingSqrt => (n as f64).sqrt() / (max_norm * (t as f64).sqrt()),
            StepRule::Constant(c) => c,
        };
        for (i, &v) in order.iter().enumerate() {
            let g = values[i + 1] - values[i];
            x[v] = (x[v] - eta * g).clamp(0.0, 1.0);
        }
    }

    let value = oracle.evaluate(&best_set)?;
    let x_final = PointInCube::new(oracle.ground().clone(), x)?;
    Ok(SfmReport {
        minimizer: best_set,
        value,
        x_final,
        iterations,
        oracle_queries: oracle.queries() - queries_before,
        best_prefix_trace: trace,
        certified,
    })
}

/// Minimizes `f` over sets with `include ⊆ S` and `S ∩ exclude = ∅` by
/// reducing to unconstrained minimization of the minor
/// `g(S) = f(S ∪ include)` on `X \ (include ∪ exclude)`.
pub fn minimize_with_constraints(
    oracle: &SetFunctionOracle,
    include: &Subset,
    exclude: &Subset,
    params: &SolveParams,
) -> Result<SfmReport> {
    params.validate()?;
    let n = oracle.n();
    if include.ground_size() != n || exclude.ground_size() != n {
        return Err(Error::input("constraint subsets range over a different ground set"));
    }
    if !include.is_disjoint_from(exclude) {
        return Err(Error::input("include and exclude sets overlap"));
    }
    let queries_before = oracle.queries();

    // Fully pinned: the only feasible set is `include` itself.
    if include.union(exclude) == Subset::full(n) {
        let value = oracle.evaluate(include)?;
        return Ok(SfmReport {
            minimizer: include.clone(),
            value,
            x_final: PointInCube::indicator(oracle.ground().clone(), include)?,
            iterations: 0,
            oracle_queries: oracle.queries() - queries_before,
            best_prefix_trace: vec![(0, value)],
            certified: true,
        });
    }

    let minor = oracle.minor(include, exclude)?;
    let inner = minimize(&minor.oracle, params)?;

    let minimizer = minor.lift(&inner.minimizer);
    let mut coords = vec![0.0; n];
    for i in include.iter() {
        coords[i] = 1.0;
    }
    for (reduced, &full) in minor.embedding().iter().enumerate() {
        coords[full] = inner.x_final.get(reduced);
    }
    let value = oracle.evaluate(&minimizer)?;
    Ok(SfmReport {
        minimizer,
        value,
        x_final: PointInCube::new(oracle.ground().clone(), coords)?,
        iterations: inner.iterations,
        oracle_queries: oracle.queries() - queries_before,
        best_prefix_trace: inner.best_prefix_trace,
        certified: inner.certified,
    })
}

/// Minimizes the Lovász extension over
/// `P = {x ∈ [0,1]^X : x(v1) = 1, Σx ≤ k}` by projected subgradient
/// descent, projecting with [`project_budget_box`].
///
/// Returns the better of the averaged iterate and the best iterate seen,
/// together with its Lovász value. The returned point is feasible to 1e-9.
pub fn minimize_lovasz_over_budget(
    oracle: &SetFunctionOracle,
    v1: usize,
    k: usize,
    params: &SolveParams,
) -> Result<(PointInCube, f64)> {
    params.validate()?;
    let n = oracle.n();
    if v1 >= n {
        return Err(Error::input(format!("pinned element index {v1} out of range")));
    }
    if k < 1 || k >= n {
        return Err(Error::input(format!("budget k = {k} must satisfy 1 <= k < n")));
    }

    let mut x = project_budget_box(&vec![0.5; n], v1, k);
    let mut order: Vec<usize> = (0..n).collect();
    let mut values = vec![0.0; n + 1];

    let mut best_value = f64::INFINITY;
    let mut best_x = x.clone();
    let mut avg = vec![0.0; n];
    let mut scans = 0.0f64;
    let mut last_improvement = 0usize;
    let mut max_norm = 0.0f64;

    for t in 1..=params.max_iterations {
        order.sort_by(|&a, &b| {
            x[b].partial_cmp(&x[a]).expect("cube coordinates are finite").then(a.cmp(&b))
        });
        let mut prefix = Subset::empty(n);
        values[0] = oracle.evaluate(&prefix)?;
        for (i, &v) in order.iter().enumerate() {
            prefix.insert(v);
            values[i + 1] = oracle.evaluate(&prefix)?;
        }
        let mut lovasz = (1.0 - x[order[0]]) * values[0];
        for i in 0..n {
            let lambda = if i + 1 < n { x[order[i]] - x[order[i + 1]] } else { x[order[i]] };
            lovasz += lambda * values[i + 1];
        }

        for (a, &c) in avg.iter_mut().zip(&x) {
            *a += c;
        }
        scans += 1.0;

        if lovasz < best_value - params.tolerance {
            last_improvement = t;
        }
        if lovasz < best_value {
            best_value = lovasz;
            best_x = x.clone();
        }
        if t - last_improvement >= stall_window(n) {
            break;
        }

        let mut norm_sq = 0.0;
        for i in 0..n {
            let g = values[i + 1] - values[i];
            norm_sq += g * g;
        }
        if norm_sq == 0.0 {
            break;
        }
        max_norm = max_norm.max(norm_sq.sqrt());
        let eta = match params.step_rule {
            StepRule::DiminishingSqrt => (n as f64).sqrt() / (max_norm * (t as f64).sqrt()),
            StepRule::Constant(c) => c,
        };
        let mut y = x.clone();
        for (i, &v) in order.iter().enumerate() {
            y[v] -= eta * (values[i + 1] - values[i]);
        }
        x = project_budget_box(&y, v1, k);
    }

    // Averaged iterate (feasible by convexity, re-projected for round-off).
    for a in avg.iter_mut() {
        *a /= scans;
    }
    let avg = project_budget_box(&avg, v1, k);
    let avg_point = PointInCube::new(oracle.ground().clone(), avg)?;
    let avg_value = crate::extensions::lovasz_eval(oracle, &avg_point)?;

    if avg_value < best_value {
        Ok((avg_point, avg_value))
    } else {
        let best_point = PointInCube::new(oracle.ground().clone(), best_x)?;
        Ok((best_point, best_value))
    }
}

/// Euclidean projection onto `{x ∈ [0,1]^X : x(v1) = 1, Σx ≤ k}`.
///
/// The pinned coordinate is set to 1; the rest are projected onto the
/// box-capped simplex `{z ∈ [0,1]^{n−1} : Σz ≤ k−1}` by bisection on the
/// water level θ in `Σ clip(z_i − θ, 0, 1)`.
pub fn project_budget_box(y: &[f64], v1: usize, k: usize) -> Vec<f64> {
    let n = y.len();
    assert!(v1 < n, "pinned element out of range");
    assert!(k >= 1, "budget must allow the pinned element");
    let budget = (k - 1) as f64;

    let mut out: Vec<f64> = y.iter().map(|&c| c.clamp(0.0, 1.0)).collect();
    out[v1] = 1.0;

    let rest_sum: f64 = out
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != v1)
        .map(|(_, &c)| c)
        .sum();
    if rest_sum <= budget {
        return out;
    }

    // Budget binds: find θ ≥ 0 with Σ clip(y_i − θ, 0, 1) = k − 1.
    let mut lo = 0.0f64;
    let mut hi = y
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != v1)
        .map(|(_, &c)| c)
        .fold(0.0f64, f64::max);
    for _ in 0..100 {
        let theta = 0.5 * (lo + hi);
        let total: f64 = y
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != v1)
            .map(|(_, &c)| (c - theta).clamp(0.0, 1.0))
            .sum();
        if total > budget {
            lo = theta;
        } else {
            hi = theta;
        }
    }
    let theta = 0.5 * (lo + hi);
    for (i, c) in out.iter_mut().enumerate() {
        if i != v1 {
            *c = (y[i] - theta).clamp(0.0, 1.0);
        }
    }
    out
}
