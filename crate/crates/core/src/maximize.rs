//! Monotone submodular maximization over a matroid: discretized continuous
//! greedy on the multilinear extension, followed by pipage rounding.
//!
//! The greedy moves a particle from the origin in `T` steps of size `1/T`,
//! each time along the independent-set indicator maximizing the estimated
//! gradient; the fractional endpoint lies in the matroid polytope and its
//! value is within a `1 − 1/e` factor of the optimum (up to discretization).
//! Pipage rounding then trades pairs of fractional coordinates inside
//! minimal tight sets; cross-convexity of the multilinear extension makes an
//! endpoint of each trade no worse, so rounding never loses value and ends
//! at an independent set.

use crate::error::{Error, Result};
use crate::extensions::{
    multilinear_eval_exact, multilinear_eval_sampled, multilinear_gradient_vector, EvalMode,
    PointInCube, EXACT_EVAL_LIMIT,
};
use crate::matroids::{self, Matroid, TIGHT_TOL};
use crate::rng;
use crate::setfn::{SetFunctionOracle, Subset};
use crate::sfm::SolveParams;

const SNAP_TOL: f64 = 1e-9;
const INSIDE_TOL: f64 = 1e-9;

/// One step of the greedy trajectory: the chosen direction and the state
/// after moving along it.
#[derive(Debug, Clone)]
pub struct GreedyStep {
    pub step: usize,
    pub direction: Subset,
    pub x: PointInCube,
    pub value_estimate: f64,
}

#[derive(Debug, Clone)]
pub struct GreedyTrajectory {
    pub steps: Vec<GreedyStep>,
    pub step_count: usize,
    pub mode: EvalMode,
}

/// Discretized continuous greedy.
///
/// Starts at the origin; for `t = 0 … T−1` estimates `∇F(x(t))`
/// (exact when `n ≤ 20`, otherwise seeded sampling with common random
/// numbers per step), picks `z` as the max-weight independent set under the
/// gradient, and moves by `1/T · 1_z`. Returns `x(1) ∈ P(M)`.
///
/// The oracle must declare monotonicity; the guarantee needs it.
pub fn continuous_greedy(
    oracle: &SetFunctionOracle,
    m: &Matroid,
    steps: usize,
    mode: EvalMode,
) -> Result<(PointInCube, GreedyTrajectory)> {
    check_grounds(oracle, m)?;
    if !oracle.properties().monotone {
        return Err(Error::input(
            "continuous greedy requires a monotone oracle (declared monotone flag)",
        ));
    }
    if steps == 0 {
        return Err(Error::input("step count must be at least 1"));
    }
    let n = oracle.n();
    if matches!(mode, EvalMode::Exact) && n > EXACT_EVAL_LIMIT {
        return Err(Error::budget(format!(
            "exact gradients need n <= {EXACT_EVAL_LIMIT}; n = {n} requires sampled mode"
        )));
    }

    // x(t) is kept as counts/T so repeated 1/T increments stay exact.
    let mut counts = vec![0usize; n];
    let mut trajectory = Vec::with_capacity(steps);
    for t in 0..steps {
        let x = point_from_counts(oracle, &counts, steps)?;
        let grad = multilinear_gradient_vector(oracle, &x, step_mode(mode, t))?;
        let z = m.max_weight_independent(&grad);
        for i in z.iter() {
            counts[i] += 1;
        }
        let x_next = point_from_counts(oracle, &counts, steps)?;
        let value_estimate = estimate(oracle, &x_next, step_mode(mode, t))?;
        trajectory.push(GreedyStep { step: t, direction: z, x: x_next, value_estimate });
    }

    let x_final = point_from_counts(oracle, &counts, steps)?;
    Ok((
        x_final,
        GreedyTrajectory { steps: trajectory, step_count: steps, mode },
    ))
}

/// One pairwise trade of the rounding walk.
#[derive(Debug, Clone)]
pub struct TradeRecord {
    pub pair: (usize, usize),
    pub tight_set: Subset,
    /// True when the positive endpoint (`x + ε(e_i − e_j)`) was kept.
    pub chose_positive: bool,
    pub f_before: f64,
    pub f_after: f64,
}

#[derive(Debug, Clone)]
pub struct RoundingTrace {
    /// Coordinates raised during saturation, with their new values.
    pub saturations: Vec<(usize, f64)>,
    pub trades: Vec<TradeRecord>,
    /// False when the trade cap was hit and the result was finished by
    /// brute truncation rather than a clean walk.
    pub certified: bool,
}

/// Pipage rounding: converts `x ∈ P(M)` into an independent set without
/// decreasing the multilinear value.
///
/// First every fractional coordinate lying in no tight set is raised (by
/// binary search against polytope membership) until it hits 1 or a tight
/// set forms — monotonicity makes raising safe. Then, while fractional
/// coordinates remain, the minimum-cardinality minimal tight set with at
/// least two fractional coordinates is located, its first two fractional
/// coordinates are traded along `e_i − e_j` to the better endpoint of the
/// feasible interval, and near-integral coordinates are snapped.
pub fn pipage_round(
    oracle: &SetFunctionOracle,
    m: &Matroid,
    x: &PointInCube,
    mode: EvalMode,
    sfm_params: &SolveParams,
) -> Result<(Subset, RoundingTrace)> {
    check_grounds(oracle, m)?;
    if x.ground() != oracle.ground() {
        return Err(Error::input("point ranges over a different ground set"));
    }
    let n = oracle.n();
    let (slack, _) = matroids::polytope_min_slack(m, x, sfm_params)?;
    if slack < -TIGHT_TOL {
        return Err(Error::input(format!(
            "point lies outside the matroid polytope (violation {slack})"
        )));
    }

    let mut coords: Vec<f64> = x.coords().to_vec();
    snap(&mut coords);
    let mut trace = RoundingTrace {
        saturations: Vec::new(),
        trades: Vec::new(),
        certified: true,
    };

    saturate(oracle, m, &mut coords, sfm_params, &mut trace)?;

    let trade_cap = 4 * n * n + 16;
    let mut f_current = estimate(oracle, &point(oracle, &coords)?, mode)?;
    for _ in 0..trade_cap {
        let fractional: Vec<usize> = (0..n).filter(|&i| is_fractional(coords[i])).collect();
        match fractional.len() {
            0 => break,
            1 => {
                // Only reachable through floating-point corner cases: a
                // lone fractional coordinate in a tight set would already
                // be integral. Finish it by comparing the two feasible
                // endpoints directly.
                let i = fractional[0];
                round_last_coordinate(oracle, m, &mut coords, i, mode, sfm_params)?;
                snap(&mut coords);
                continue;
            }
            _ => {}
        }

        // Minimum-cardinality minimal tight set over all fractional anchors.
        let mut chosen: Option<Subset> = None;
        for &a in &fractional {
            let anchor = Subset::from_indices(n, &[a]);
            let xp = point(oracle, &coords)?;
            if let Some(t) = matroids::minimal_tight_set(m, &xp, &anchor, sfm_params)? {
                let better = match &chosen {
                    None => true,
                    Some(best) => {
                        (t.cardinality(), &t) < (best.cardinality(), best)
                    }
                };
                if better {
                    chosen = Some(t);
                }
            }
        }
        let Some(tight) = chosen else {
            // Saturation left a fractional coordinate outside every tight
            // set (drift); run it again.
            saturate(oracle, m, &mut coords, sfm_params, &mut trace)?;
            snap(&mut coords);
            continue;
        };

        let fracs_in_tight: Vec<usize> =
            tight.iter().filter(|&i| is_fractional(coords[i])).collect();
        if fracs_in_tight.len() < 2 {
            return Err(Error::contract(
                "tight set with fewer than two fractional coordinates during rounding",
            ));
        }
        let (i, j) = (fracs_in_tight[0], fracs_in_tight[1]);

        // Feasible trade interval along e_i − e_j, limited by the box and
        // by every set containing exactly one of i, j.
        let xp = point(oracle, &coords)?;
        let inc_i = Subset::from_indices(n, &[i]);
        let inc_j = Subset::from_indices(n, &[j]);
        let (slack_i, _) = matroids::constrained_min_slack(m, &xp, &inc_i, &inc_j, sfm_params)?;
        let (slack_j, _) = matroids::constrained_min_slack(m, &xp, &inc_j, &inc_i, sfm_params)?;
        let eps_up = (1.0 - coords[i]).min(coords[j]).min(slack_i.max(0.0));
        let eps_down = coords[i].min(1.0 - coords[j]).min(slack_j.max(0.0));

        if eps_up < SNAP_TOL && eps_down < SNAP_TOL {
            trace.certified = false;
            break;
        }

        let mut plus = coords.clone();
        plus[i] += eps_up;
        plus[j] -= eps_up;
        snap(&mut plus);
        let mut minus = coords.clone();
        minus[i] -= eps_down;
        minus[j] += eps_down;
        snap(&mut minus);

        let f_plus = estimate(oracle, &point(oracle, &plus)?, mode)?;
        let f_minus = estimate(oracle, &point(oracle, &minus)?, mode)?;
        let chose_positive = f_plus >= f_minus;
        let f_after = if chose_positive { f_plus } else { f_minus };
        coords = if chose_positive { plus } else { minus };
        trace.trades.push(TradeRecord {
            pair: (i, j),
            tight_set: tight,
            chose_positive,
            f_before: f_current,
            f_after,
        });
        f_current = f_after;
    }

    if coords.iter().any(|&c| is_fractional(c)) {
        trace.certified = false;
        for c in coords.iter_mut() {
            *c = c.round();
        }
    }
    let chosen = point(oracle, &coords)?.rounded_support();
    if !m.is_independent(&chosen) {
        return Err(Error::contract("rounded support is not independent"));
    }
    Ok((chosen, trace))
}

/// Parameters of the end-to-end pipeline.
#[derive(Debug, Clone)]
pub struct MaximizeParams {
    /// Greedy step count; defaults to `n^2`.
    pub steps: Option<usize>,
    /// Sample count per estimate; `None` selects exact mode when `n ≤ 20`.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Parameters of the inner slack minimizations.
    pub sfm: SolveParams,
}

impl Default for MaximizeParams {
    fn default() -> Self {
        MaximizeParams {
            steps: None,
            samples: None,
            seed: 0,
            sfm: SolveParams {
                tolerance: 1e-9,
                ..SolveParams::default()
            },
        }
    }
}

/// Result record of the maximization pipeline.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub chosen: Subset,
    /// `f` at the rounded set.
    pub value: f64,
    /// Multilinear value of the fractional point before rounding.
    pub fractional_value: f64,
    pub oracle_queries: u64,
    pub iterations: usize,
    pub seed: u64,
    pub trajectory: GreedyTrajectory,
    pub rounding: RoundingTrace,
}

/// Continuous greedy followed by pipage rounding.
pub fn maximize_matroid(
    oracle: &SetFunctionOracle,
    m: &Matroid,
    params: &MaximizeParams,
) -> Result<SolveReport> {
    check_grounds(oracle, m)?;
    let n = oracle.n();
    let steps = params.steps.unwrap_or_else(|| (n * n).max(1));
    let mode = match params.samples {
        Some(samples) => EvalMode::Sampled { samples, seed: params.seed },
        None if n <= EXACT_EVAL_LIMIT => EvalMode::Exact,
        None => EvalMode::Sampled { samples: 10_000, seed: params.seed },
    };
    let queries_before = oracle.queries();

    let (x, trajectory) = continuous_greedy(oracle, m, steps, mode)?;
    let fractional_value = estimate(oracle, &x, mode)?;
    let (chosen, rounding) = pipage_round(oracle, m, &x, mode, &params.sfm)?;
    let value = oracle.evaluate(&chosen)?;

    Ok(SolveReport {
        chosen,
        value,
        fractional_value,
        oracle_queries: oracle.queries() - queries_before,
        iterations: steps,
        seed: params.seed,
        trajectory,
        rounding,
    })
}

/// Saturation: raise fractional coordinates that lie in no tight set until
/// they hit 1 or create one. Valid for monotone objectives.
fn saturate(
    oracle: &SetFunctionOracle,
    m: &Matroid,
    coords: &mut [f64],
    params: &SolveParams,
    trace: &mut RoundingTrace,
) -> Result<()> {
    let n = coords.len();
    loop {
        let mut raised = false;
        for i in 0..n {
            if !is_fractional(coords[i]) {
                continue;
            }
            let xp = point(oracle, coords)?;
            let anchor = Subset::from_indices(n, &[i]);
            let (anchored, _) = matroids::constrained_min_slack(
                m,
                &xp,
                &anchor,
                &Subset::empty(n),
                params,
            )?;
            if anchored <= TIGHT_TOL {
                continue; // already in a tight set
            }

            // Raise x_i as far as membership allows, by bisection.
            let full = 1.0 - coords[i];
            if inside_with(m, oracle, coords, i, full, params)? {
                coords[i] = 1.0;
            } else {
                let mut lo = 0.0f64;
                let mut hi = full;
                while hi - lo > 1e-9 {
                    let mid = 0.5 * (lo + hi);
                    if inside_with(m, oracle, coords, i, mid, params)? {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                coords[i] += lo;
            }
            snap(coords);
            trace.saturations.push((i, coords[i]));
            raised = true;
        }
        if !raised {
            return Ok(());
        }
    }
}

fn inside_with(
    m: &Matroid,
    oracle: &SetFunctionOracle,
    coords: &[f64],
    i: usize,
    delta: f64,
    params: &SolveParams,
) -> Result<bool> {
    let mut candidate = coords.to_vec();
    candidate[i] = (candidate[i] + delta).min(1.0);
    let xp = point(oracle, &candidate)?;
    let (slack, _) = matroids::polytope_min_slack(m, &xp, params)?;
    Ok(slack >= -INSIDE_TOL)
}

/// Rounds the last fractional coordinate by endpoint comparison, subject to
/// membership.
fn round_last_coordinate(
    oracle: &SetFunctionOracle,
    m: &Matroid,
    coords: &mut [f64],
    i: usize,
    mode: EvalMode,
    params: &SolveParams,
) -> Result<()> {
    let mut down = coords.to_vec();
    down[i] = 0.0;
    let f_down = estimate(oracle, &point(oracle, &down)?, mode)?;

    let mut up = coords.to_vec();
    up[i] = 1.0;
    let up_ok = {
        let xp = point(oracle, &up)?;
        matroids::polytope_min_slack(m, &xp, params)?.0 >= -INSIDE_TOL
    };
    if up_ok {
        let f_up = estimate(oracle, &point(oracle, &up)?, mode)?;
        if f_up >= f_down {
            coords.copy_from_slice(&up);
            return Ok(());
        }
    }
    coords.copy_from_slice(&down);
    Ok(())
}

fn estimate(oracle: &SetFunctionOracle, x: &PointInCube, mode: EvalMode) -> Result<f64> {
    match mode {
        EvalMode::Exact => multilinear_eval_exact(oracle, x),
        EvalMode::Sampled { samples, seed } => {
            Ok(multilinear_eval_sampled(oracle, x, samples, seed)?.0)
        }
    }
}

/// Per-step sampling stream: a fresh derived seed for every greedy step,
/// common across coordinates within the step.
fn step_mode(mode: EvalMode, step: usize) -> EvalMode {
    match mode {
        EvalMode::Exact => EvalMode::Exact,
        EvalMode::Sampled { samples, seed } => EvalMode::Sampled {
            samples,
            seed: rng::mix(seed, step as u64),
        },
    }
}

fn point(oracle: &SetFunctionOracle, coords: &[f64]) -> Result<PointInCube> {
    PointInCube::new(oracle.ground().clone(), coords.to_vec())
}

fn point_from_counts(
    oracle: &SetFunctionOracle,
    counts: &[usize],
    steps: usize,
) -> Result<PointInCube> {
    let coords: Vec<f64> = counts.iter().map(|&c| c as f64 / steps as f64).collect();
    point(oracle, &coords)
}

fn is_fractional(c: f64) -> bool {
    c > SNAP_TOL && c < 1.0 - SNAP_TOL
}

fn snap(coords: &mut [f64]) {
    for c in coords.iter_mut() {
        if *c <= SNAP_TOL {
            *c = 0.0;
        } else if *c >= 1.0 - SNAP_TOL {
            *c = 1.0;
        }
    }
}

fn check_grounds(oracle: &SetFunctionOracle, m: &Matroid) -> Result<()> {
    if oracle.ground() != m.ground() {
        return Err(Error::input("oracle and matroid range over different ground sets"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfn::{make_coverage, make_modular, CoverageFamily};

    fn cov1_oracle() -> SetFunctionOracle {
        let mut f = CoverageFamily::new();
        f.add_set("s1", ["y1", "y2"]).unwrap();
        f.add_set("s2", ["y2", "y3"]).unwrap();
        make_coverage(&f).unwrap()
    }

    #[test]
    fn greedy_on_modular_picks_top_weights() {
        let oracle = make_modular([("e1", 3.0), ("e2", 1.0), ("e3", 2.0)]).unwrap();
        let m = Matroid::uniform(oracle.ground().clone(), 2);
        for steps in [1, 5, 40] {
            let (x, _) = continuous_greedy(&oracle, &m, steps, EvalMode::Exact).unwrap();
            assert_eq!(x.coords(), &[1.0, 0.0, 1.0], "steps = {steps}");
        }
    }

    #[test]
    fn greedy_on_cov1_beats_the_ratio() {
        let oracle = cov1_oracle();
        let m = Matroid::uniform(oracle.ground().clone(), 1);
        let (x, _) = continuous_greedy(&oracle, &m, 100, EvalMode::Exact).unwrap();
        let value = multilinear_eval_exact(&oracle, &x).unwrap();
        assert!(value >= (1.0 - (-1.0f64).exp()) * 2.0 - 0.05, "F = {value}");
    }

    #[test]
    fn greedy_single_step_is_best_singleton_basis() {
        let oracle = cov1_oracle();
        let m = Matroid::uniform(oracle.ground().clone(), 1);
        let (x, traj) = continuous_greedy(&oracle, &m, 1, EvalMode::Exact).unwrap();
        // ∇F(0) is the singleton values (2, 2); ties resolve to s1.
        assert_eq!(x.coords(), &[1.0, 0.0]);
        assert_eq!(traj.steps.len(), 1);
    }

    #[test]
    fn greedy_rejects_non_monotone_declarations() {
        let g = crate::setfn::Graph::from_edges([("a", "b", 1.0)]).unwrap();
        let oracle = crate::setfn::make_graph_cut(&g).unwrap();
        let m = Matroid::uniform(oracle.ground().clone(), 1);
        assert!(matches!(
            continuous_greedy(&oracle, &m, 10, EvalMode::Exact),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn pipage_keeps_integral_points() {
        let oracle = cov1_oracle();
        let m = Matroid::uniform(oracle.ground().clone(), 1);
        let s = Subset::from_indices(2, &[1]);
        let x = PointInCube::indicator(oracle.ground().clone(), &s).unwrap();
        let (out, trace) =
            pipage_round(&oracle, &m, &x, EvalMode::Exact, &SolveParams::default()).unwrap();
        assert_eq!(out, s);
        assert!(trace.trades.is_empty());
    }

    #[test]
    fn pipage_on_disjoint_coverage_keeps_value() {
        let mut fam = CoverageFamily::new();
        fam.add_set("s1", ["y1"]).unwrap();
        fam.add_set("s2", ["y2"]).unwrap();
        let oracle = make_coverage(&fam).unwrap();
        let m = Matroid::uniform(oracle.ground().clone(), 1);
        let x = PointInCube::constant(oracle.ground().clone(), 0.5).unwrap();
        let f_before = multilinear_eval_exact(&oracle, &x).unwrap();
        let (out, _) =
            pipage_round(&oracle, &m, &x, EvalMode::Exact, &SolveParams::default()).unwrap();
        assert_eq!(out.cardinality(), 1);
        let f_after = oracle
            .evaluate(&out)
            .unwrap();
        assert_eq!(f_before, 1.0);
        assert_eq!(f_after, 1.0);
    }

    #[test]
    fn pipage_on_cov1_improves_to_optimum() {
        let oracle = cov1_oracle();
        let m = Matroid::uniform(oracle.ground().clone(), 1);
        let x = PointInCube::constant(oracle.ground().clone(), 0.5).unwrap();
        assert!((multilinear_eval_exact(&oracle, &x).unwrap() - 1.75).abs() < 1e-12);
        let (out, trace) =
            pipage_round(&oracle, &m, &x, EvalMode::Exact, &SolveParams::default()).unwrap();
        assert_eq!(out.cardinality(), 1);
        assert_eq!(oracle.evaluate(&out).unwrap(), 2.0);
        assert!(trace.certified);
    }

    #[test]
    fn pipage_rejects_outside_points() {
        let oracle = cov1_oracle();
        let m = Matroid::uniform(oracle.ground().clone(), 1);
        let x = PointInCube::constant(oracle.ground().clone(), 0.9).unwrap();
        assert!(matches!(
            pipage_round(&oracle, &m, &x, EvalMode::Exact, &SolveParams::default()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn maximize_cov1_under_uniform_one() {
        let oracle = cov1_oracle();
        let m = Matroid::uniform(oracle.ground().clone(), 1);
        let report = maximize_matroid(&oracle, &m, &MaximizeParams::default()).unwrap();
        assert_eq!(report.value, 2.0);
        assert!(m.is_independent(&report.chosen));
    }

    #[test]
    fn maximize_modular_uniform_two() {
        let oracle = make_modular([("e1", 3.0), ("e2", 1.0), ("e3", 2.0)]).unwrap();
        let m = Matroid::uniform(oracle.ground().clone(), 2);
        let report = maximize_matroid(&oracle, &m, &MaximizeParams::default()).unwrap();
        assert_eq!(report.chosen, Subset::from_mask(3, 0b101));
        assert_eq!(report.value, 5.0);
    }

    #[test]
    fn maximize_partition_dominance() {
        // a dominates b item-wise, c dominates d.
        let mut fam = CoverageFamily::new();
        fam.add_set("a", ["y1", "y2"]).unwrap();
        fam.add_set("b", ["y1"]).unwrap();
        fam.add_set("c", ["y3", "y4"]).unwrap();
        fam.add_set("d", ["y3"]).unwrap();
        let oracle = make_coverage(&fam).unwrap();
        let ground = oracle.ground().clone();
        let blocks = vec![Subset::from_mask(4, 0b0011), Subset::from_mask(4, 0b1100)];
        let m = Matroid::partition(ground, blocks, vec![1, 1]).unwrap();
        let report = maximize_matroid(&oracle, &m, &MaximizeParams::default()).unwrap();
        assert_eq!(
            oracle.ground().labels_of(&report.chosen),
            vec!["a", "c"]
        );
        assert_eq!(report.value, 4.0);
    }
}
