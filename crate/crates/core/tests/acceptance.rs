//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned in the assertions below; the instance
//! generators are seeded, so reruns are bit-identical.

mod common;

use std::time::Instant;

use common::*;
use rand::prelude::*;
use submod_core::cardmin::{cardmin_symmetric, CardMinParams};
use submod_core::extensions::{
    chain_distribution, convex_closure_bruteforce, find_convexity_witness, lovasz_eval,
    multilinear_eval_exact, multilinear_gradient, second_partial, uncross_step,
    DiscreteDistribution, PointInCube, UncrossStep,
};
use submod_core::matroids::Matroid;
use submod_core::maximize::{maximize_matroid, MaximizeParams};
use submod_core::setfn::{check_property_bruteforce, make_modular, Property, Subset};
use submod_core::sfm::{self, SolveParams};

fn report(criterion: usize, name: &str, pass: bool, detail: &str, started: Instant) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE {criterion} ({name}): {verdict} — {detail} [{:.1}s]",
        started.elapsed().as_secs_f64()
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

/// Criterion 1: the Lovász extension equals the exact LP convex closure on
/// submodular instances, |𝓛_f(x) − f⁻(x)| ≤ 1e-6.
#[test]
fn acceptance_1_extension_equality() {
    let started = Instant::now();
    let mut r = rng(0xACC1);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let n = r.random_range(2..=8);
        let oracle = if i % 2 == 0 {
            random_cut_oracle(&mut r, n)
        } else {
            random_coverage_oracle(&mut r, n, 10)
        };
        for _ in 0..100 {
            let x = random_point(&mut r, &oracle);
            let lovasz = lovasz_eval(&oracle, &x).unwrap();
            let closure = convex_closure_bruteforce(&oracle, &x).unwrap().value;
            worst = worst.max((lovasz - closure).abs());
        }
    }
    report(
        1,
        "extension equality",
        worst <= 1e-6,
        &format!("max |Lovasz - convex closure| = {worst:.3e} over 20 instances x 100 points"),
        started,
    );
}

/// Criterion 2: on non-submodular functions a witness point with
/// 𝓛_f(x) − f⁻(x) ≥ 1e-9 is found; submodular controls yield none.
#[test]
fn acceptance_2_convexity_converse() {
    let started = Instant::now();
    let mut r = rng(0xACC2);
    let mut found = 0usize;
    let mut min_gap = f64::INFINITY;
    for _ in 0..20 {
        let n = r.random_range(2..=6);
        let oracle = random_non_submodular(&mut r, n);
        if let Some((_, gap)) = find_convexity_witness(&oracle).unwrap() {
            found += 1;
            min_gap = min_gap.min(gap);
        }
    }
    let mut controls_clean = true;
    for i in 0..12 {
        let n = r.random_range(2..=6);
        let oracle = match i % 3 {
            0 => random_cut_oracle(&mut r, n),
            1 => random_coverage_oracle(&mut r, n, 8),
            _ => make_modular((0..n).map(|j| (format!("e{j}"), r.random_range(-3..=3) as f64)))
                .unwrap(),
        };
        if find_convexity_witness(&oracle).unwrap().is_some() {
            controls_clean = false;
        }
    }
    report(
        2,
        "convexity converse",
        found == 20 && min_gap >= 1e-9 && controls_clean,
        &format!("witnesses on {found}/20 non-submodular (min gap {min_gap:.3e}); controls clean: {controls_clean}"),
        started,
    );
}

/// Criterion 3: uncrossing preserves marginals to 1e-12, never increases
/// E f for submodular f, strictly increases E|S|², and terminates at the
/// unique chain distribution of the marginals.
#[test]
fn acceptance_3_uncrossing() {
    let started = Instant::now();
    let mut r = rng(0xACC3);
    let mut max_marginal_drift: f64 = 0.0;
    let mut chains_matched = 0usize;
    for _ in 0..1000 {
        let n = r.random_range(2..=8);
        let oracle = random_cut_oracle(&mut r, n);
        let support = r.random_range(2..=10);
        let mut weights: Vec<f64> = (0..support).map(|_| r.random::<f64>() + 0.02).collect();
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        let entries: Vec<(Subset, f64)> = weights
            .iter()
            .map(|&w| (random_subset(&mut r, n), w))
            .collect();
        let d = DiscreteDistribution::new(oracle.ground().clone(), entries).unwrap();

        // Walk the uncrossing to the chain, checking every step.
        let mut current = d.clone();
        loop {
            match uncross_step(&current) {
                UncrossStep::AlreadyChain => break,
                UncrossStep::Uncrossed(next) => {
                    for (a, b) in current.marginals().coords().iter().zip(next.marginals().coords()) {
                        max_marginal_drift = max_marginal_drift.max((a - b).abs());
                    }
                    let ef_before = current.expected_value(&oracle).unwrap();
                    let ef_after = next.expected_value(&oracle).unwrap();
                    assert!(ef_after <= ef_before + 1e-9, "E f increased while uncrossing");
                    assert!(
                        next.expected_sq_cardinality() > current.expected_sq_cardinality(),
                        "potential E|S|^2 did not strictly increase"
                    );
                    current = next;
                }
            }
        }

        let chain = submod_core::extensions::uncross_to_chain(&d).unwrap();
        let expect = chain_distribution(&d.marginals());
        if chain.approx_eq(&expect, 1e-12) {
            chains_matched += 1;
        }
    }
    report(
        3,
        "uncrossing",
        max_marginal_drift <= 1e-12 && chains_matched == 1000,
        &format!("marginal drift {max_marginal_drift:.3e}; {chains_matched}/1000 chains equal the marginal chain"),
        started,
    );
}

/// Criterion 4: the subgradient solver recovers the exact minimum on
/// integer-valued cut+modular instances, unconstrained and constrained.
#[test]
fn acceptance_4_sfm_exactness() {
    let started = Instant::now();
    let mut r = rng(0xACC4);
    let params = SolveParams::default();
    let mut exact = 0usize;
    let mut exact_constrained = 0usize;
    for _ in 0..50 {
        let n = r.random_range(3..=10);
        let oracle = random_cut_plus_modular(&mut r, n);

        let truth = exhaustive_min(&oracle);
        let found = sfm::minimize(&oracle, &params).unwrap();
        if found.value == truth {
            exact += 1;
        }

        // Random disjoint include/exclude singletons.
        let inc = r.random_range(0..n);
        let mut exc = r.random_range(0..n);
        while exc == inc {
            exc = r.random_range(0..n);
        }
        let include = Subset::from_indices(n, &[inc]);
        let exclude = Subset::from_indices(n, &[exc]);
        let mut truth_c = f64::INFINITY;
        for mask in 0..(1u64 << n) {
            if mask >> inc & 1 == 1 && mask >> exc & 1 == 0 {
                truth_c = truth_c.min(oracle.evaluate(&Subset::from_mask(n, mask)).unwrap());
            }
        }
        let found_c = sfm::minimize_with_constraints(&oracle, &include, &exclude, &params).unwrap();
        if found_c.value == truth_c {
            exact_constrained += 1;
        }
    }
    report(
        4,
        "SFM exactness",
        exact == 50 && exact_constrained == 50,
        &format!("{exact}/50 unconstrained and {exact_constrained}/50 constrained minima exact"),
        started,
    );
}

/// Criterion 5: multilinear gradients match central finite differences to
/// 1e-5; second partials of submodular functions are ≤ 1e-9; cross-convex
/// second differences are ≥ −1e-7; monotone f gives monotone F on 1000
/// ordered pairs.
#[test]
fn acceptance_5_multilinear_checks() {
    let started = Instant::now();
    let mut r = rng(0xACC5);
    let mut max_grad_err: f64 = 0.0;
    let mut max_second: f64 = f64::NEG_INFINITY;
    let mut min_cross: f64 = f64::INFINITY;

    for _ in 0..5 {
        let n = r.random_range(3..=8);
        let oracle = if r.random_bool(0.5) {
            random_cut_oracle(&mut r, n)
        } else {
            random_coverage_oracle(&mut r, n, 10)
        };
        let h = 1e-5;
        for _ in 0..5 {
            let coords: Vec<f64> = (0..n).map(|_| 0.2 + 0.6 * r.random::<f64>()).collect();
            let x = PointInCube::new(oracle.ground().clone(), coords.clone()).unwrap();
            for i in 0..n {
                let grad = multilinear_gradient(
                    &oracle,
                    &x,
                    i,
                    submod_core::extensions::EvalMode::Exact,
                )
                .unwrap();
                let mut up = coords.clone();
                let mut down = coords.clone();
                up[i] += h;
                down[i] -= h;
                let fu = multilinear_eval_exact(
                    &oracle,
                    &PointInCube::new(oracle.ground().clone(), up).unwrap(),
                )
                .unwrap();
                let fd = multilinear_eval_exact(
                    &oracle,
                    &PointInCube::new(oracle.ground().clone(), down).unwrap(),
                )
                .unwrap();
                max_grad_err = max_grad_err.max((grad - (fu - fd) / (2.0 * h)).abs());
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        max_second =
                            max_second.max(second_partial(&oracle, &x, i, j).unwrap());
                    }
                }
            }
            // Cross-convexity second differences.
            for _ in 0..10 {
                let i = r.random_range(0..n);
                let mut j = r.random_range(0..n);
                while j == i {
                    j = r.random_range(0..n);
                }
                let step = 0.05;
                let eval = |eps: f64| {
                    let mut moved = coords.clone();
                    moved[i] += eps;
                    moved[j] -= eps;
                    multilinear_eval_exact(
                        &oracle,
                        &PointInCube::new(oracle.ground().clone(), moved).unwrap(),
                    )
                    .unwrap()
                };
                min_cross = min_cross.min(eval(-step) - 2.0 * eval(0.0) + eval(step));
            }
        }
    }

    // Monotone f ⇒ F monotone on 1000 ordered pairs.
    let mut monotone_ok = true;
    let oracle = random_coverage_oracle(&mut r, 7, 12);
    for _ in 0..1000 {
        let lo: Vec<f64> = (0..7).map(|_| r.random::<f64>()).collect();
        let hi: Vec<f64> = lo
            .iter()
            .map(|&c| c + (1.0 - c) * r.random::<f64>())
            .collect();
        let fx = multilinear_eval_exact(
            &oracle,
            &PointInCube::new(oracle.ground().clone(), lo).unwrap(),
        )
        .unwrap();
        let fy = multilinear_eval_exact(
            &oracle,
            &PointInCube::new(oracle.ground().clone(), hi).unwrap(),
        )
        .unwrap();
        if fx > fy + 1e-9 {
            monotone_ok = false;
        }
    }

    report(
        5,
        "multilinear checks",
        max_grad_err <= 1e-5 && max_second <= 1e-9 && min_cross >= -1e-7 && monotone_ok,
        &format!(
            "grad-vs-FD {max_grad_err:.3e}; max second partial {max_second:.3e}; \
             min cross second difference {min_cross:.3e}; monotone pairs ok: {monotone_ok}"
        ),
        started,
    );
}

/// Criterion 6: continuous greedy + pipage achieves at least
/// (1 − 1/e)·OPT − 1e-6 with T = 100 and exact gradients; rounding never
/// decreases the exact multilinear value and always outputs an independent
/// set.
#[test]
fn acceptance_6_maximization_ratio() {
    let started = Instant::now();
    let mut r = rng(0xACC6);
    let ratio_floor = 1.0 - (-1.0f64).exp();
    let mut worst_ratio = f64::INFINITY;
    let mut rounding_ok = true;
    let mut independent_ok = true;

    for trial in 0..50 {
        let n = r.random_range(2..=10);
        let oracle = random_coverage_oracle(&mut r, n, 14);
        let m = match trial % 3 {
            0 => Matroid::uniform(oracle.ground().clone(), r.random_range(1..=n)),
            1 => {
                let mut blocks = Vec::new();
                let mut start = 0;
                while start < n {
                    let len = r.random_range(1..=(n - start));
                    blocks.push(Subset::from_indices(n, &(start..start + len).collect::<Vec<_>>()));
                    start += len;
                }
                let caps: Vec<usize> =
                    blocks.iter().map(|b| r.random_range(1..=b.cardinality())).collect();
                Matroid::partition(oracle.ground().clone(), blocks, caps).unwrap()
            }
            _ => {
                let vertices = r.random_range(2..=(n / 2 + 2));
                let endpoints: Vec<(usize, usize)> = (0..n)
                    .map(|_| (r.random_range(0..vertices), r.random_range(0..vertices)))
                    .collect();
                Matroid::graphic(oracle.ground().clone(), vertices, endpoints).unwrap()
            }
        };

        // Brute-force optimum over independent sets.
        let mut opt = 0.0f64;
        for mask in 0..(1u64 << n) {
            let s = Subset::from_mask(n, mask);
            if m.is_independent(&s) {
                opt = opt.max(oracle.evaluate(&s).unwrap());
            }
        }

        let params = MaximizeParams { steps: Some(100), ..Default::default() };
        let rep = maximize_matroid(&oracle, &m, &params).unwrap();

        if opt > 0.0 {
            worst_ratio = worst_ratio.min(rep.value / opt);
        }
        if rep.value < rep.fractional_value - 1e-9 {
            rounding_ok = false;
        }
        for trade in &rep.rounding.trades {
            if trade.f_after < trade.f_before - 1e-9 {
                rounding_ok = false;
            }
        }
        if !m.is_independent(&rep.chosen) {
            independent_ok = false;
        }
    }

    report(
        6,
        "maximization ratio",
        worst_ratio >= ratio_floor - 1e-6 && rounding_ok && independent_ok,
        &format!(
            "worst empirical ratio {worst_ratio:.4} (floor {ratio_floor:.4}); \
             rounding monotone: {rounding_ok}; outputs independent: {independent_ok}"
        ),
        started,
    );
}

/// Criterion 7: the cardinality-constrained minimizer returns a nonempty set
/// of size at most k with f(Q) ≤ 2·OPT, on weighted connected graphs for
/// every k and on non-cut symmetric submodular mixtures.
#[test]
fn acceptance_7_cardmin_two_approximation() {
    let started = Instant::now();
    let mut r = rng(0xACC7);
    let params = CardMinParams::default();
    let mut worst_ratio: f64 = 0.0;
    let mut runs = 0usize;
    let mut violations = 0usize;

    for _ in 0..100 {
        let n = r.random_range(3..=12);
        let extra = r.random_range(0..=n);
        let graph = random_connected_graph(&mut r, n, extra, 5);
        let oracle = submod_core::setfn::make_graph_cut(&graph).unwrap();
        for k in 1..n {
            let rep = cardmin_symmetric(&oracle, k, &params).unwrap();
            let opt = exhaustive_cardmin(&oracle, k);
            runs += 1;
            if rep.chosen.is_empty() || rep.chosen.cardinality() > k {
                violations += 1;
                continue;
            }
            if opt > 0.0 {
                worst_ratio = worst_ratio.max(rep.value / opt);
            }
            if rep.value > 2.0 * opt {
                violations += 1;
            }
        }
    }

    let mut mixture_runs = 0usize;
    for _ in 0..50 {
        let n = r.random_range(4..=9);
        let oracle = random_symmetric_mixture(&mut r, n);
        assert!(check_property_bruteforce(&oracle, Property::Submodular)
            .unwrap()
            .is_none());
        assert!(check_property_bruteforce(&oracle, Property::Symmetric)
            .unwrap()
            .is_none());
        let k = r.random_range(1..n);
        let rep = cardmin_symmetric(&oracle, k, &params).unwrap();
        let opt = exhaustive_cardmin(&oracle, k);
        mixture_runs += 1;
        if rep.chosen.is_empty() || rep.chosen.cardinality() > k || rep.value > 2.0 * opt {
            violations += 1;
        } else if opt > 0.0 {
            worst_ratio = worst_ratio.max(rep.value / opt);
        }
    }

    report(
        7,
        "cardmin 2-approximation",
        violations == 0,
        &format!(
            "{runs} graph runs + {mixture_runs} mixture runs; violations: {violations}; \
             worst observed ratio {worst_ratio:.4} (bound 2.0)"
        ),
        started,
    );
}

/// The greedy-order subgradient identity g · x = 𝓛_f(x) for normalized f,
/// exercised across instance families as a cross-check of the two Lovász
/// evaluation paths used throughout the suite.
#[test]
fn acceptance_support_lovasz_routes_agree() {
    let started = Instant::now();
    let mut r = rng(0xACC0);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let n = r.random_range(2..=9);
        let oracle = random_cut_oracle(&mut r, n);
        for _ in 0..20 {
            let x = random_point(&mut r, &oracle);
            let via_chain = lovasz_eval(&oracle, &x).unwrap();
            let g = submod_core::extensions::lovasz_subgradient(&oracle, &x).unwrap();
            let via_subgradient: f64 =
                g.iter().zip(x.coords()).map(|(a, b)| a * b).sum();
            worst = worst.max((via_chain - via_subgradient).abs());
        }
    }
    report(
        0,
        "lovasz route agreement",
        worst <= 1e-9,
        &format!("max |chain route - subgradient route| = {worst:.3e}"),
        started,
    );
}
