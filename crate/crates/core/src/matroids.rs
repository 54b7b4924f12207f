//! Matroid independence oracles, rank, linear optimization over the matroid
//! polytope, and the membership / tight-set machinery pipage rounding needs.
//!
//! The matroid polytope `P(M) = {x ⪰ 0 : x(S) ≤ r_M(S) for all S}` is the
//! convex hull of independent-set indicators. Membership and tight-set
//! queries reduce to minimizing the submodular function `S ↦ r_M(S) − x(S)`,
//! which is delegated to the [`sfm`](crate::sfm) solver.

use crate::error::{Error, Result};
use crate::extensions::PointInCube;
use crate::setfn::{GroundSet, Properties, SetFunctionOracle, Subset};
use crate::sfm::{self, SolveParams};

/// Tolerance at which a set counts as tight (`x(S) = r_M(S)`); coarser than
/// the arithmetic tolerance so facet landings survive floating-point drift.
pub const TIGHT_TOL: f64 = 1e-7;

const INSIDE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
enum MatroidKind {
    Uniform {
        k: usize,
    },
    Partition {
        blocks: Vec<Subset>,
        capacities: Vec<usize>,
    },
    /// Ground elements are edges of a graph on `n_vertices` vertices;
    /// independent sets are the acyclic edge subsets.
    Graphic {
        n_vertices: usize,
        endpoints: Vec<(usize, usize)>,
    },
    Explicit {
        independent: std::collections::BTreeSet<Subset>,
    },
}

/// An independence-oracle set system satisfying the matroid axioms.
#[derive(Debug, Clone)]
pub struct Matroid {
    ground: GroundSet,
    kind: MatroidKind,
}

impl Matroid {
    /// The uniform matroid `U(n, k)`: independent iff `|S| <= k`.
    pub fn uniform(ground: GroundSet, k: usize) -> Self {
        Matroid { ground, kind: MatroidKind::Uniform { k } }
    }

    /// Partition matroid: blocks must partition the ground set; `S` is
    /// independent iff `|S ∩ block_i| <= capacity_i` for every block.
    pub fn partition(ground: GroundSet, blocks: Vec<Subset>, capacities: Vec<usize>) -> Result<Self> {
        if blocks.len() != capacities.len() {
            return Err(Error::input("one capacity per block is required"));
        }
        let n = ground.n();
        let mut seen = Subset::empty(n);
        for b in &blocks {
            if b.ground_size() != n {
                return Err(Error::input("block ranges over a different ground set"));
            }
            if !b.is_disjoint_from(&seen) {
                return Err(Error::input("blocks overlap"));
            }
            seen = seen.union(b);
        }
        if seen != Subset::full(n) {
            return Err(Error::input("blocks do not cover the ground set"));
        }
        Ok(Matroid {
            ground,
            kind: MatroidKind::Partition { blocks, capacities },
        })
    }

    /// Graphic matroid: ground element `i` is an edge with the given
    /// endpoints (vertex indices below `n_vertices`).
    pub fn graphic(ground: GroundSet, n_vertices: usize, endpoints: Vec<(usize, usize)>) -> Result<Self> {
        if endpoints.len() != ground.n() {
            return Err(Error::input("one endpoint pair per ground element is required"));
        }
        if endpoints.iter().any(|&(u, v)| u >= n_vertices || v >= n_vertices) {
            return Err(Error::input("edge endpoint out of range"));
        }
        Ok(Matroid {
            ground,
            kind: MatroidKind::Graphic { n_vertices, endpoints },
        })
    }

    /// Matroid given by an explicit list of independent sets. The axioms
    /// (nonempty, downward-closed, exchange) are verified on construction.
    pub fn explicit(ground: GroundSet, independent: Vec<Subset>) -> Result<Self> {
        let n = ground.n();
        if independent.iter().any(|s| s.ground_size() != n) {
            return Err(Error::input("independent set ranges over a different ground set"));
        }
        let set: std::collections::BTreeSet<Subset> = independent.into_iter().collect();
        if !set.contains(&Subset::empty(n)) {
            return Err(Error::input("the empty set must be independent"));
        }
        let m = Matroid { ground, kind: MatroidKind::Explicit { independent: set } };
        m.check_axioms()?;
        Ok(m)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn is_independent(&self, s: &Subset) -> bool {
        assert_eq!(s.ground_size(), self.ground.n(), "subset over a different ground set");
        match &self.kind {
            MatroidKind::Uniform { k } => s.cardinality() <= *k,
            MatroidKind::Partition { blocks, capacities } => blocks
                .iter()
                .zip(capacities)
                .all(|(b, &cap)| s.intersection(b).cardinality() <= cap),
            MatroidKind::Graphic { n_vertices, endpoints } => {
                let mut uf = UnionFind::new(*n_vertices);
                s.iter().all(|i| {
                    let (u, v) = endpoints[i];
                    uf.union(u, v)
                })
            }
            MatroidKind::Explicit { independent } => independent.contains(s),
        }
    }

    /// Rank `r_M(S) = max{|T| : T ∈ I, T ⊆ S}`, computed by the matroid
    /// greedy over `S` in ground order.
    pub fn rank(&self, s: &Subset) -> usize {
        let mut current = Subset::empty(self.ground.n());
        let mut rank = 0;
        for i in s.iter() {
            current.insert(i);
            if self.is_independent(&current) {
                rank += 1;
            } else {
                current.remove(i);
            }
        }
        rank
    }

    pub fn rank_full(&self) -> usize {
        self.rank(&Subset::full(self.ground.n()))
    }

    /// A maximizer of `w · 1_S` over independent `S`: greedy by descending
    /// weight (ties by ground order), skipping nonpositive weights and
    /// elements that would break independence.
    pub fn max_weight_independent(&self, weights: &[f64]) -> Subset {
        assert_eq!(weights.len(), self.ground.n());
        let mut order: Vec<usize> = (0..self.ground.n()).collect();
        order.sort_by(|&a, &b| {
            weights[b]
                .partial_cmp(&weights[a])
                .expect("weights must not be NaN")
                .then(a.cmp(&b))
        });
        let mut chosen = Subset::empty(self.ground.n());
        for i in order {
            if weights[i] <= 0.0 {
                break;
            }
            chosen.insert(i);
            if !self.is_independent(&chosen) {
                chosen.remove(i);
            }
        }
        chosen
    }

    /// Exhaustively verifies downward closure and the exchange property;
    /// refuses ground sets larger than 12 elements.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.ground.n();
        if n > 12 {
            return Err(Error::budget(format!(
                "axiom check enumerates 2^n subsets; n = {n} exceeds 12"
            )));
        }
        let size = 1u64 << n;
        let independent: Vec<bool> = (0..size)
            .map(|mask| self.is_independent(&Subset::from_mask(n, mask)))
            .collect();
        if !independent[0] {
            return Err(Error::contract("the empty set is not independent"));
        }
        for mask in 0..size {
            if !independent[mask as usize] {
                continue;
            }
            for i in 0..n {
                if mask >> i & 1 == 1 && !independent[(mask & !(1 << i)) as usize] {
                    return Err(Error::contract(format!(
                        "downward closure fails at {mask:#b} removing element {i}"
                    )));
                }
            }
        }
        for s in 0..size {
            if !independent[s as usize] {
                continue;
            }
            for t in 0..size {
                if !independent[t as usize] || t.count_ones() <= s.count_ones() {
                    continue;
                }
                let can_extend = (0..n).any(|y| {
                    t >> y & 1 == 1 && s >> y & 1 == 0 && independent[(s | (1 << y)) as usize]
                });
                if !can_extend {
                    return Err(Error::contract(format!(
                        "exchange property fails for S = {s:#b}, T = {t:#b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The submodular slack function `S ↦ r_M(S) − x(S)` as a value oracle.
    pub(crate) fn slack_oracle(&self, x: &PointInCube) -> SetFunctionOracle {
        let m = self.clone();
        let coords: Vec<f64> = x.coords().to_vec();
        SetFunctionOracle::new(
            self.ground.clone(),
            Properties {
                nonnegative: false,
                normalized: true,
                monotone: false,
                symmetric: false,
                submodular: true,
            },
            move |s| m.rank(s) as f64 - s.iter().map(|i| coords[i]).sum::<f64>(),
        )
    }
}

/// Membership verdict for the matroid polytope.
#[derive(Debug, Clone)]
pub struct PolytopeCertificate {
    pub inside: bool,
    /// When `inside` is false, a set with `x(S) > r_M(S)` beyond tolerance.
    pub violated_set: Option<Subset>,
}

/// Decides `x ∈ P(M)` by minimizing `r_M(S) − x(S)` with the SFM solver;
/// inside iff the minimum is at least `-1e-9`.
pub fn in_polytope(m: &Matroid, x: &PointInCube, params: &SolveParams) -> Result<PolytopeCertificate> {
    let (min_slack, minimizer) = polytope_min_slack(m, x, params)?;
    if min_slack >= -INSIDE_TOL {
        Ok(PolytopeCertificate { inside: true, violated_set: None })
    } else {
        Ok(PolytopeCertificate { inside: false, violated_set: Some(minimizer) })
    }
}

/// Minimum of `r_M(S) − x(S)` over all subsets, with a minimizing set.
pub(crate) fn polytope_min_slack(
    m: &Matroid,
    x: &PointInCube,
    params: &SolveParams,
) -> Result<(f64, Subset)> {
    check_ground(m, x)?;
    let report = sfm::minimize(&m.slack_oracle(x), params)?;
    Ok((report.value, report.minimizer))
}

/// Minimum of `r_M(S) − x(S)` over sets with `include ⊆ S` and
/// `S ∩ exclude = ∅`.
pub(crate) fn constrained_min_slack(
    m: &Matroid,
    x: &PointInCube,
    include: &Subset,
    exclude: &Subset,
    params: &SolveParams,
) -> Result<(f64, Subset)> {
    check_ground(m, x)?;
    let report = sfm::minimize_with_constraints(&m.slack_oracle(x), include, exclude, params)?;
    Ok((report.value, report.minimizer))
}

/// The inclusion-minimal tight set containing `anchor`, or `None` when no
/// tight superset of `anchor` exists.
///
/// Tight sets are closed under intersection and union, so the minimal one is
/// unique. It is found by one constrained slack minimization over
/// `S ⊇ anchor`, then shrunk: an element of the first tight set stays only
/// if every tight superset of `anchor` contains it, tested by re-solving
/// with that element excluded.
pub fn minimal_tight_set(
    m: &Matroid,
    x: &PointInCube,
    anchor: &Subset,
    params: &SolveParams,
) -> Result<Option<Subset>> {
    check_ground(m, x)?;
    let n = m.n();
    if anchor.ground_size() != n {
        return Err(Error::input("anchor ranges over a different ground set"));
    }
    let (min_slack, _) = polytope_min_slack(m, x, params)?;
    if min_slack < -TIGHT_TOL {
        return Err(Error::input("point lies outside the matroid polytope"));
    }

    let none = Subset::empty(n);
    let (anchored_slack, first_tight) = constrained_min_slack(m, x, anchor, &none, params)?;
    if anchored_slack > TIGHT_TOL {
        return Ok(None);
    }

    let mut minimal = anchor.clone();
    for e in first_tight.difference(anchor).iter() {
        let mut excl = Subset::empty(n);
        excl.insert(e);
        let (slack_without, _) = constrained_min_slack(m, x, anchor, &excl, params)?;
        if slack_without > TIGHT_TOL {
            minimal.insert(e);
        }
    }

    let tightness = m.rank(&minimal) as f64 - minimal.iter().map(|i| x.get(i)).sum::<f64>();
    if tightness.abs() > 1e-6 {
        return Err(Error::contract(format!(
            "computed minimal tight set has slack {tightness}; the inner solver missed a tight set"
        )));
    }
    Ok(Some(minimal))
}

fn check_ground(m: &Matroid, x: &PointInCube) -> Result<()> {
    if m.ground() != x.ground() {
        return Err(Error::input("point and matroid range over different ground sets"));
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false when `u` and `v` were already connected.
    fn union(&mut self, u: usize, v: usize) -> bool {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return false;
        }
        self.parent[ru] = rv;
        true
    }
}
