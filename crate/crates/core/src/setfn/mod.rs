//! Value-oracle abstractions for set functions, concrete submodular
//! families (graph cuts, coverage, modular), and exhaustive brute-force
//! checks and optimizers that serve as ground truth for everything else.

mod brute;
mod ground;

pub use brute::{
    brute_optimize, brute_optimize_with_limit, check_property_bruteforce,
    check_property_with_limit, BruteConstraints, OptimizeSense, Property, Witness,
    DEFAULT_BRUTE_LIMIT, DEFAULT_CHECK_LIMIT,
};
pub use ground::{GroundSet, Subset};

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Structural properties an oracle claims for its function. Claims are
/// checkable with [`check_property_bruteforce`] but are otherwise trusted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Properties {
    pub nonnegative: bool,
    pub normalized: bool,
    pub monotone: bool,
    pub symmetric: bool,
    pub submodular: bool,
}

/// A queryable set function `f: 2^X -> R` with call counting.
///
/// The evaluation closure must be pure: the same subset always yields the
/// same value. Every [`evaluate`](Self::evaluate) call increments the query
/// counter by exactly one; clones share the counter, so derived oracles that
/// forward to a clone keep the parent's accounting intact.
#[derive(Clone)]
pub struct SetFunctionOracle {
    ground: GroundSet,
    eval: Arc<dyn Fn(&Subset) -> f64 + Send + Sync>,
    queries: Arc<AtomicU64>,
    props: Properties,
    value_ratio_bound: Option<f64>,
}

impl std::fmt::Debug for SetFunctionOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SetFunctionOracle")
            .field("n", &self.ground.n())
            .field("props", &self.props)
            .field("queries", &self.queries())
            .finish()
    }
}

impl SetFunctionOracle {
    pub fn new(
        ground: GroundSet,
        props: Properties,
        eval: impl Fn(&Subset) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SetFunctionOracle {
            ground,
            eval: Arc::new(eval),
            queries: Arc::new(AtomicU64::new(0)),
            props,
            value_ratio_bound: None,
        }
    }

    /// Declares the value-ratio bound `B` with `max f / min f <= B`.
    /// The bound is carried for reporting; no iteration budget is derived
    /// from it automatically.
    pub fn with_value_ratio_bound(mut self, bound: f64) -> Result<Self> {
        if bound.is_nan() || bound <= 0.0 {
            return Err(Error::input("value ratio bound B must be positive"));
        }
        self.value_ratio_bound = Some(bound);
        Ok(self)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn properties(&self) -> Properties {
        self.props
    }

    pub fn value_ratio_bound(&self) -> Option<f64> {
        self.value_ratio_bound
    }

    /// Evaluates `f(s)`, incrementing the query counter by exactly 1.
    pub fn evaluate(&self, s: &Subset) -> Result<f64> {
        if s.ground_size() != self.ground.n() {
            return Err(Error::input(format!(
                "subset ranges over {} elements but the oracle's ground set has {}",
                s.ground_size(),
                self.ground.n()
            )));
        }
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok((self.eval)(s))
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// The minor `g(S) = f(S ∪ include)` over the reduced ground set
    /// `X \ (include ∪ exclude)`. Restriction plus contraction preserve
    /// submodularity, nonnegativity and monotonicity.
    ///
    /// Queries against the minor also tick the parent oracle's counter.
    /// Fails when `include` and `exclude` overlap or the reduced ground set
    /// would be empty.
    pub fn minor(&self, include: &Subset, exclude: &Subset) -> Result<MinorOracle> {
        let n = self.ground.n();
        if include.ground_size() != n || exclude.ground_size() != n {
            return Err(Error::input("include/exclude range over a different ground set"));
        }
        if !include.is_disjoint_from(exclude) {
            return Err(Error::input("include and exclude sets overlap"));
        }
        let removed = include.union(exclude);
        let embed: Vec<usize> = (0..n).filter(|&i| !removed.contains(i)).collect();
        if embed.is_empty() {
            return Err(Error::input("minor has an empty ground set"));
        }
        let ground = GroundSet::new(embed.iter().map(|&i| self.ground.label(i)))?;
        let parent = self.clone();
        let include = include.clone();
        let map = embed.clone();
        let props = Properties {
            nonnegative: self.props.nonnegative,
            normalized: self.props.normalized && include.is_empty(),
            monotone: self.props.monotone,
            symmetric: self.props.symmetric && include.is_empty() && exclude.is_empty(),
            submodular: self.props.submodular,
        };
        let contracted = include.clone();
        let oracle = SetFunctionOracle::new(ground, props, move |s: &Subset| {
            let mut lifted = include.clone();
            for i in s.iter() {
                lifted.insert(map[i]);
            }
            parent
                .evaluate(&lifted)
                .expect("minor lifts into the parent ground set")
        });
        Ok(MinorOracle {
            oracle,
            include: contracted,
            embed,
        })
    }
}

/// A restricted-and-contracted view of a parent oracle.
#[derive(Debug, Clone)]
pub struct MinorOracle {
    pub oracle: SetFunctionOracle,
    include: Subset,
    embed: Vec<usize>,
}

impl MinorOracle {
    /// Lifts a subset of the reduced ground set back to the parent ground
    /// set, adding the contracted `include` elements.
    pub fn lift(&self, s: &Subset) -> Subset {
        let mut lifted = self.include.clone();
        for i in s.iter() {
            lifted.insert(self.embed[i]);
        }
        lifted
    }

    /// Parent-ground index of each reduced element.
    pub fn embedding(&self) -> &[usize] {
        &self.embed
    }
}

/// A weighted undirected multigraph with labeled vertices.
///
/// Parallel edges accumulate weight in the cut; self-loops never cross a cut
/// and are dropped at insertion (counted, so front ends can warn).
#[derive(Debug, Clone, Default)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(usize, usize, f64)>,
    self_loops_dropped: usize,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Registers a vertex (first-appearance order) and returns its index.
    pub fn add_vertex(&mut self, label: &str) -> usize {
        match self.labels.iter().position(|l| l == label) {
            Some(i) => i,
            None => {
                self.labels.push(label.to_string());
                self.labels.len() - 1
            }
        }
    }

    /// Adds an undirected edge; unknown endpoints are registered on the fly.
    /// Negative weights are input errors; self-loops are dropped.
    pub fn add_edge(&mut self, u: &str, v: &str, weight: f64) -> Result<()> {
        if weight.is_nan() || weight < 0.0 {
            return Err(Error::input(format!(
                "edge ({u}, {v}) has negative weight {weight}"
            )));
        }
        let ui = self.add_vertex(u);
        let vi = self.add_vertex(v);
        if ui == vi {
            self.self_loops_dropped += 1;
            return Ok(());
        }
        self.edges.push((ui, vi, weight));
        Ok(())
    }

    pub fn from_edges<'a, I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64)>,
    {
        let mut g = Graph::new();
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    /// Total weight of edges with exactly one endpoint in `s`.
    pub fn cut_value(&self, s: &Subset) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| s.contains(u) != s.contains(v))
            .map(|&(_, _, w)| w)
            .sum()
    }
}

/// Cut-function oracle of a graph: `f(U)` is the total weight of edges
/// crossing the cut `(U, V \ U)`. Nonnegative, normalized, symmetric and
/// submodular.
pub fn make_graph_cut(graph: &Graph) -> Result<SetFunctionOracle> {
    for &(_, _, w) in &graph.edges {
        if w.is_nan() || w < 0.0 {
            return Err(Error::input("graph has a negative edge weight"));
        }
    }
    let ground = GroundSet::new(graph.labels.iter().cloned())?;
    let g = graph.clone();
    Ok(SetFunctionOracle::new(
        ground,
        Properties {
            nonnegative: true,
            normalized: true,
            monotone: false,
            symmetric: true,
            submodular: true,
        },
        move |s| g.cut_value(s),
    ))
}

/// A family of named item sets with optional item weights (default 1).
#[derive(Debug, Clone, Default)]
pub struct CoverageFamily {
    sets: Vec<(String, Vec<String>)>,
    weights: Vec<(String, f64)>,
}

impl CoverageFamily {
    pub fn new() -> Self {
        CoverageFamily::default()
    }

    pub fn add_set<S: Into<String>>(
        &mut self,
        label: impl Into<String>,
        items: impl IntoIterator<Item = S>,
    ) -> Result<()> {
        let label = label.into();
        if self.sets.iter().any(|(l, _)| *l == label) {
            return Err(Error::input(format!("duplicate coverage set label {label:?}")));
        }
        self.sets
            .push((label, items.into_iter().map(Into::into).collect()));
        Ok(())
    }

    /// Overrides the weight of an item (items default to weight 1).
    pub fn set_weight(&mut self, item: impl Into<String>, weight: f64) -> Result<()> {
        let item = item.into();
        if weight.is_nan() || weight < 0.0 {
            return Err(Error::input(format!("item {item:?} has negative weight {weight}")));
        }
        self.weights.push((item, weight));
        Ok(())
    }

    pub fn set_labels(&self) -> Vec<String> {
        self.sets.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn sets(&self) -> &[(String, Vec<String>)] {
        &self.sets
    }

    /// Weight overrides in declaration order.
    pub fn weights(&self) -> &[(String, f64)] {
        &self.weights
    }
}

/// Weighted-coverage oracle: `f(S)` is the total weight of the union of the
/// member sets. Nonnegative, normalized, monotone and submodular.
///
/// Fails if a weight override names an item that appears in no set.
pub fn make_coverage(family: &CoverageFamily) -> Result<SetFunctionOracle> {
    let ground = GroundSet::new(family.sets.iter().map(|(l, _)| l.clone()))?;

    // Item universe in first-appearance order.
    let mut items: Vec<String> = Vec::new();
    for (_, members) in &family.sets {
        for it in members {
            if !items.contains(it) {
                items.push(it.clone());
            }
        }
    }
    let mut weights = vec![1.0; items.len()];
    for (item, w) in &family.weights {
        match items.iter().position(|i| i == item) {
            Some(idx) => weights[idx] = *w,
            None => {
                return Err(Error::input(format!(
                    "weight given for unknown item {item:?}"
                )))
            }
        }
    }

    // One item bitmask per coverage set.
    let blocks = items.len().div_ceil(64).max(1);
    let mut masks = vec![vec![0u64; blocks]; family.sets.len()];
    for (si, (_, members)) in family.sets.iter().enumerate() {
        for it in members {
            let idx = items.iter().position(|i| i == it).unwrap();
            masks[si][idx / 64] |= 1u64 << (idx % 64);
        }
    }

    Ok(SetFunctionOracle::new(
        ground,
        Properties {
            nonnegative: true,
            normalized: true,
            monotone: true,
            symmetric: false,
            submodular: true,
        },
        move |s| {
            let mut union = vec![0u64; blocks];
            for si in s.iter() {
                for (acc, m) in union.iter_mut().zip(&masks[si]) {
                    *acc |= m;
                }
            }
            let mut total = 0.0;
            for (bi, &block) in union.iter().enumerate() {
                let mut b = block;
                while b != 0 {
                    let idx = bi * 64 + b.trailing_zeros() as usize;
                    total += weights[idx];
                    b &= b - 1;
                }
            }
            total
        },
    ))
}

/// Modular oracle `f(S) = Σ_{v∈S} w(v)`; modular functions are submodular
/// with equality.
pub fn make_modular<I, S>(weights: I) -> Result<SetFunctionOracle>
where
    I: IntoIterator<Item = (S, f64)>,
    S: Into<String>,
{
    let pairs: Vec<(String, f64)> = weights.into_iter().map(|(l, w)| (l.into(), w)).collect();
    let ground = GroundSet::new(pairs.iter().map(|(l, _)| l.clone()))?;
    let w: Vec<f64> = pairs.iter().map(|(_, w)| *w).collect();
    let nonneg = w.iter().all(|&x| x >= 0.0);
    Ok(SetFunctionOracle::new(
        ground,
        Properties {
            nonnegative: nonneg,
            normalized: true,
            monotone: nonneg,
            symmetric: false,
            submodular: true,
        },
        move |s| s.iter().map(|i| w[i]).sum(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k3() -> Graph {
        Graph::from_edges([("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)]).unwrap()
    }

    pub(crate) fn p4() -> Graph {
        Graph::from_edges([("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0)]).unwrap()
    }

    pub(crate) fn cov1() -> CoverageFamily {
        let mut f = CoverageFamily::new();
        f.add_set("s1", ["y1", "y2"]).unwrap();
        f.add_set("s2", ["y2", "y3"]).unwrap();
        f
    }

    #[test]
    fn evaluate_cut_k3_singleton() {
        let oracle = make_graph_cut(&k3()).unwrap();
        let s = oracle.ground().subset_from_labels(["a"]).unwrap();
        assert_eq!(oracle.evaluate(&s).unwrap(), 2.0);
    }

    #[test]
    fn evaluate_cut_empty_is_zero() {
        let oracle = make_graph_cut(&p4()).unwrap();
        let s = Subset::empty(oracle.n());
        assert_eq!(oracle.evaluate(&s).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_coverage_union() {
        let oracle = make_coverage(&cov1()).unwrap();
        let s = oracle.ground().subset_from_labels(["s1", "s2"]).unwrap();
        assert_eq!(oracle.evaluate(&s).unwrap(), 3.0);
    }

    #[test]
    fn evaluate_rejects_foreign_subsets() {
        let oracle = make_graph_cut(&k3()).unwrap();
        let s = Subset::empty(5);
        assert!(oracle.evaluate(&s).is_err());
    }

    #[test]
    fn query_counter_counts_every_call() {
        let oracle = make_graph_cut(&k3()).unwrap();
        let s = Subset::empty(3);
        for _ in 0..7 {
            oracle.evaluate(&s).unwrap();
        }
        assert_eq!(oracle.queries(), 7);
    }

    #[test]
    fn query_counter_is_safe_under_concurrent_evaluation() {
        let oracle = make_graph_cut(&k3()).unwrap();
        std::thread::scope(|scope| {
            for _ in 0..4 {
                let oracle = oracle.clone();
                scope.spawn(move || {
                    let s = Subset::from_mask(3, 0b011);
                    for _ in 0..250 {
                        oracle.evaluate(&s).unwrap();
                    }
                });
            }
        });
        assert_eq!(oracle.queries(), 1000);
    }

    #[test]
    fn cut_k3_pair_and_full() {
        let oracle = make_graph_cut(&k3()).unwrap();
        let ab = oracle.ground().subset_from_labels(["a", "b"]).unwrap();
        assert_eq!(oracle.evaluate(&ab).unwrap(), 2.0);
        let all = Subset::full(3);
        assert_eq!(oracle.evaluate(&all).unwrap(), 0.0);
    }

    #[test]
    fn cut_p4_prefix() {
        let oracle = make_graph_cut(&p4()).unwrap();
        let ab = oracle.ground().subset_from_labels(["a", "b"]).unwrap();
        assert_eq!(oracle.evaluate(&ab).unwrap(), 1.0);
    }

    #[test]
    fn graph_rejects_negative_weight_and_drops_self_loops() {
        let mut g = Graph::new();
        assert!(g.add_edge("a", "b", -1.0).is_err());
        g.add_edge("a", "a", 2.0).unwrap();
        g.add_edge("a", "b", 1.0).unwrap();
        assert_eq!(g.self_loops_dropped(), 1);
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn coverage_values_and_weights() {
        let oracle = make_coverage(&cov1()).unwrap();
        let s1 = oracle.ground().subset_from_labels(["s1"]).unwrap();
        assert_eq!(oracle.evaluate(&s1).unwrap(), 2.0);
        assert_eq!(oracle.evaluate(&Subset::empty(2)).unwrap(), 0.0);

        let mut weighted = cov1();
        weighted.set_weight("y2", 5.0).unwrap();
        let oracle = make_coverage(&weighted).unwrap();
        let both = Subset::full(2);
        assert_eq!(oracle.evaluate(&both).unwrap(), 7.0);
    }

    #[test]
    fn coverage_rejects_unknown_weight_item() {
        let mut f = cov1();
        f.set_weight("zz", 1.0).unwrap();
        assert!(make_coverage(&f).is_err());
    }

    #[test]
    fn modular_values() {
        let oracle = make_modular([("a", 1.0), ("b", -2.0), ("c", 3.0)]).unwrap();
        let b = oracle.ground().subset_from_labels(["b"]).unwrap();
        assert_eq!(oracle.evaluate(&b).unwrap(), -2.0);
        assert_eq!(oracle.evaluate(&Subset::empty(3)).unwrap(), 0.0);
        let ac = oracle.ground().subset_from_labels(["a", "c"]).unwrap();
        assert_eq!(oracle.evaluate(&ac).unwrap(), 4.0);
    }

    #[test]
    fn minor_restricts_and_contracts() {
        let oracle = make_graph_cut(&p4()).unwrap();
        let include = oracle.ground().subset_from_labels(["a"]).unwrap();
        let exclude = oracle.ground().subset_from_labels(["d"]).unwrap();
        let minor = oracle.minor(&include, &exclude).unwrap();
        assert_eq!(minor.oracle.n(), 2);
        // g({}) = f({a}) = 1, g({b}) = f({a,b}) = 1, g({b,c}) = f({a,b,c}) = 1
        assert_eq!(minor.oracle.evaluate(&Subset::empty(2)).unwrap(), 1.0);
        let b_only = minor.oracle.ground().subset_from_labels(["b"]).unwrap();
        assert_eq!(minor.oracle.evaluate(&b_only).unwrap(), 1.0);
        let lifted = minor.lift(&b_only);
        assert_eq!(oracle.ground().labels_of(&lifted), vec!["a", "b"]);
        // Parent counter saw the forwarded queries.
        assert_eq!(oracle.queries(), 2);
    }

    #[test]
    fn minor_rejects_overlap() {
        let oracle = make_graph_cut(&k3()).unwrap();
        let a = oracle.ground().subset_from_labels(["a"]).unwrap();
        assert!(oracle.minor(&a, &a).is_err());
    }
}
