//! Seeded random instances shared by the integration suites.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use submod_core::setfn::{
    make_coverage, make_graph_cut, CoverageFamily, Graph, GroundSet, Properties,
    SetFunctionOracle, Subset,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected graph on `n` vertices `v1..vn`: a random spanning tree plus
/// `extra` random edges, integer weights in `1..=max_w`.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize, max_w: u64) -> Graph {
    let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut g = Graph::new();
    for l in &labels {
        g.add_vertex(l);
    }
    for i in 1..n {
        let j = rng.random_range(0..i);
        let w = rng.random_range(1..=max_w) as f64;
        g.add_edge(&labels[i], &labels[j], w).unwrap();
    }
    for _ in 0..extra {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i != j {
            let w = rng.random_range(1..=max_w) as f64;
            g.add_edge(&labels[i], &labels[j], w).unwrap();
        }
    }
    g
}

pub fn random_cut_oracle(rng: &mut ChaCha8Rng, n: usize) -> SetFunctionOracle {
    let extra = rng.random_range(0..=n);
    make_graph_cut(&random_connected_graph(rng, n, extra, 5)).unwrap()
}

/// Coverage family with `n` sets over `items` items, each set holding every
/// item independently with probability `density`.
pub fn random_coverage_oracle(rng: &mut ChaCha8Rng, n: usize, items: usize) -> SetFunctionOracle {
    let mut fam = CoverageFamily::new();
    for s in 1..=n {
        let mut members = Vec::new();
        for it in 1..=items {
            if rng.random_bool(0.4) {
                members.push(format!("y{it}"));
            }
        }
        // Coverage of an always-empty family is degenerate; keep one item.
        if members.is_empty() {
            members.push(format!("y{}", rng.random_range(1..=items)));
        }
        fam.add_set(format!("s{s}"), members).unwrap();
    }
    make_coverage(&fam).unwrap()
}

/// Graph cut plus an integer modular shift: still submodular, integer
/// valued, and with a nontrivial unconstrained minimum.
pub fn random_cut_plus_modular(rng: &mut ChaCha8Rng, n: usize) -> SetFunctionOracle {
    let extra = rng.random_range(0..=n);
    let graph = random_connected_graph(rng, n, extra, 5);
    let shifts: Vec<f64> = (0..n).map(|_| rng.random_range(-3..=3) as f64).collect();
    let ground = GroundSet::new(graph.vertex_labels().iter().cloned()).unwrap();
    SetFunctionOracle::new(
        ground,
        Properties {
            nonnegative: false,
            normalized: true,
            monotone: false,
            symmetric: false,
            submodular: true,
        },
        move |s: &Subset| graph.cut_value(s) + s.iter().map(|i| shifts[i]).sum::<f64>(),
    )
}

/// Symmetric nonnegative submodular mixture
/// `f(S) = Σ_i c_i · min(|S ∩ A_i|, |A_i \ S|)` with random nonempty `A_i`
/// and positive integer coefficients.
pub fn random_symmetric_mixture(rng: &mut ChaCha8Rng, n: usize) -> SetFunctionOracle {
    let terms = rng.random_range(2..=4);
    let mut parts: Vec<(Subset, f64)> = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut a = Subset::empty(n);
        while a.cardinality() < 2 {
            a.insert(rng.random_range(0..n));
        }
        parts.push((a, rng.random_range(1..=3) as f64));
    }
    let ground = GroundSet::with_size(n).unwrap();
    SetFunctionOracle::new(
        ground,
        Properties {
            nonnegative: true,
            normalized: true,
            monotone: false,
            symmetric: true,
            submodular: true,
        },
        move |s: &Subset| {
            parts
                .iter()
                .map(|(a, c)| {
                    let inside = s.intersection(a).cardinality();
                    c * inside.min(a.cardinality() - inside) as f64
                })
                .sum()
        },
    )
}

/// A random table function over `2^n` values, guaranteed non-submodular:
/// resampled until a diminishing-returns violation exists.
pub fn random_non_submodular(rng: &mut ChaCha8Rng, n: usize) -> SetFunctionOracle {
    loop {
        let table: Vec<f64> = (0..(1usize << n))
            .map(|_| rng.random_range(0..=10) as f64)
            .collect();
        if has_dr_violation(&table, n) {
            let ground = GroundSet::with_size(n).unwrap();
            return SetFunctionOracle::new(ground, Properties::default(), move |s: &Subset| {
                table[s.to_mask() as usize]
            });
        }
    }
}

fn has_dr_violation(table: &[f64], n: usize) -> bool {
    for a in 0..(1u64 << n) {
        for i in 0..n {
            if a >> i & 1 == 1 {
                continue;
            }
            for j in (i + 1)..n {
                if a >> j & 1 == 1 {
                    continue;
                }
                let (bi, bj) = (1u64 << i, 1u64 << j);
                let quad = table[(a | bi | bj) as usize] - table[(a | bi) as usize]
                    - table[(a | bj) as usize]
                    + table[a as usize];
                if quad > 1e-9 {
                    return true;
                }
            }
        }
    }
    false
}

pub fn random_point(rng: &mut ChaCha8Rng, oracle: &SetFunctionOracle) -> submod_core::extensions::PointInCube {
    let coords: Vec<f64> = (0..oracle.n()).map(|_| rng.random::<f64>()).collect();
    submod_core::extensions::PointInCube::new(oracle.ground().clone(), coords).unwrap()
}

pub fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> Subset {
    let mut s = Subset::empty(n);
    for i in 0..n {
        if rng.random_bool(0.5) {
            s.insert(i);
        }
    }
    s
}

/// Exhaustive minimum over nonempty sets of size at most `k`, independent of
/// the library's brute-force optimizer.
pub fn exhaustive_cardmin(oracle: &SetFunctionOracle, k: usize) -> f64 {
    let n = oracle.n();
    let mut best = f64::INFINITY;
    for mask in 1u64..(1 << n) {
        if (mask.count_ones() as usize) <= k {
            let v = oracle.evaluate(&Subset::from_mask(n, mask)).unwrap();
            if v < best {
                best = v;
            }
        }
    }
    best
}

/// Exhaustive unconstrained minimum, independent of the library optimizer.
pub fn exhaustive_min(oracle: &SetFunctionOracle) -> f64 {
    let n = oracle.n();
    let mut best = f64::INFINITY;
    for mask in 0u64..(1 << n) {
        let v = oracle.evaluate(&Subset::from_mask(n, mask)).unwrap();
        if v < best {
            best = v;
        }
    }
    best
}
