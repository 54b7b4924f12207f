//! Finite distributions over subsets, and the uncrossing procedure that
//! turns any of them into the chain distribution with the same marginals.

use super::chain::ChainDistribution;
use super::point::PointInCube;
use crate::error::{Error, Result};
use crate::setfn::{GroundSet, SetFunctionOracle, Subset};

const SUM_TOL: f64 = 1e-9;

// Uncrossing terminates because E|S|^2 strictly increases and is bounded by
// n^2; the cap only guards against numerical stalls.
const UNCROSS_CAP: usize = 1_000_000;

/// A finite distribution over subsets of a ground set.
///
/// The support is kept deduplicated (equal subsets merge their mass),
/// zero-probability entries are dropped, and entries are ordered by the
/// numeric subset encoding so scans are deterministic.
#[derive(Debug, Clone)]
pub struct DiscreteDistribution {
    ground: GroundSet,
    support: Vec<(Subset, f64)>,
}

impl DiscreteDistribution {
    pub fn new(ground: GroundSet, entries: Vec<(Subset, f64)>) -> Result<Self> {
        let n = ground.n();
        let mut merged: Vec<(Subset, f64)> = Vec::with_capacity(entries.len());
        for (s, p) in entries {
            if s.ground_size() != n {
                return Err(Error::input("support subset ranges over a different ground set"));
            }
            if p.is_nan() || p < -1e-12 {
                return Err(Error::input(format!("negative probability {p}")));
            }
            if p <= super::chain::DROP_TOL {
                continue;
            }
            match merged.binary_search_by(|(t, _)| t.cmp(&s)) {
                Ok(i) => merged[i].1 += p,
                Err(i) => merged.insert(i, (s, p)),
            }
        }
        let total: f64 = merged.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::input(format!("probabilities sum to {total}, not 1")));
        }
        Ok(DiscreteDistribution { ground, support: merged })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn support(&self) -> &[(Subset, f64)] {
        &self.support
    }

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
        PointInCube::new(self.ground.clone(), x).expect("marginals lie in the cube")
    }

    pub fn expected_value(&self, oracle: &SetFunctionOracle) -> Result<f64> {
        let mut total = 0.0;
        for (s, p) in &self.support {
            total += p * oracle.evaluate(s)?;
        }
        Ok(total)
    }

    /// The uncrossing potential `E |S|^2`.
    pub fn expected_sq_cardinality(&self) -> f64 {
        self.support
            .iter()
            .map(|(s, p)| {
                let c = s.cardinality() as f64;
                p * c * c
            })
            .sum()
    }

    /// True when the support is a nested family.
    pub fn is_chain(&self) -> bool {
        let mut by_card: Vec<&Subset> = self.support.iter().map(|(s, _)| s).collect();
        by_card.sort_by_key(|s| s.cardinality());
        by_card.windows(2).all(|w| w[0].is_subset_of(w[1]))
    }
}

/// Outcome of one uncrossing step.
#[derive(Debug, Clone)]
pub enum UncrossStep {
    /// One crossing pair was rewired; marginals unchanged.
    Uncrossed(DiscreteDistribution),
    /// The input support is already a chain.
    AlreadyChain,
}

/// Rewires the first crossing pair in scan order.
///
/// With `A`, `B` crossing and `Pr[B] ≥ Pr[A]` (roles swapped if needed), the
/// step moves mass `Pr[A]` from each of `A` and `B` onto `A ∩ B` and
/// `A ∪ B`. Marginals are preserved; for submodular `f` the expectation of
/// `f` does not increase, while `E|S|^2` strictly increases. Crossing pairs
/// are scanned in lexicographic (numeric-encoding) order.
pub fn uncross_step(d: &DiscreteDistribution) -> UncrossStep {
    let support = d.support();
    let mut pair = None;
    'outer: for i in 0..support.len() {
        for j in (i + 1)..support.len() {
            let (a, b) = (&support[i].0, &support[j].0);
            if !a.is_subset_of(b) && !b.is_subset_of(a) {
                pair = Some((i, j));
                break 'outer;
            }
        }
    }
    let Some((i, j)) = pair else {
        return UncrossStep::AlreadyChain;
    };

    let (mut a_idx, mut b_idx) = (i, j);
    if support[a_idx].1 > support[b_idx].1 {
        std::mem::swap(&mut a_idx, &mut b_idx);
    }
    let (a, pa) = support[a_idx].clone();
    let (b, pb) = support[b_idx].clone();

    let mut entries: Vec<(Subset, f64)> = Vec::with_capacity(support.len() + 1);
    for (k, (s, p)) in support.iter().enumerate() {
        if k == a_idx {
            continue; // Pr'[A] = 0
        }
        if k == b_idx {
            if pb - pa > 0.0 {
                entries.push((s.clone(), pb - pa));
            }
            continue;
        }
        entries.push((s.clone(), *p));
    }
    entries.push((a.intersection(&b), pa));
    entries.push((a.union(&b), pa));

    let next = DiscreteDistribution::new(d.ground().clone(), entries)
        .expect("uncrossing preserves a valid distribution");
    UncrossStep::Uncrossed(next)
}

/// Iterates [`uncross_step`] to termination and returns the resulting chain.
///
/// By uniqueness of the chain distribution, the result equals
/// `chain_distribution(marginals(d))`.
pub fn uncross_to_chain(d: &DiscreteDistribution) -> Result<ChainDistribution> {
    let mut current = d.clone();
    for _ in 0..UNCROSS_CAP {
        match uncross_step(&current) {
            UncrossStep::Uncrossed(next) => current = next,
            UncrossStep::AlreadyChain => return Ok(chain_from_support(&current)),
        }
    }
    Err(Error::contract(
        "uncrossing failed to reach a chain within the step cap",
    ))
}

/// Assembles a [`ChainDistribution`] from a distribution whose support is
/// already nested.
fn chain_from_support(d: &DiscreteDistribution) -> ChainDistribution {
    let n = d.ground().n();
    let mut support = d.support().to_vec();
    support.sort_by_key(|(s, _)| s.cardinality());

    // Element order: members of the smallest set first (ground order within
    // a block), then each following layer, then untouched elements.
    let mut order = Vec::with_capacity(n);
    let mut placed = Subset::empty(n);
    for (s, _) in &support {
        for i in s.iter() {
            if !placed.contains(i) {
                order.push(i);
                placed.insert(i);
            }
        }
    }
    for i in 0..n {
        if !placed.contains(i) {
            order.push(i);
        }
    }
    ChainDistribution::from_parts(d.ground().clone(), support, order)
}

#[cfg(test)]
mod tests {
    use super::super::chain::chain_distribution;
    use super::*;
    use crate::setfn::{make_graph_cut, Graph};

    fn two_singletons() -> DiscreteDistribution {
        let g = GroundSet::with_size(2).unwrap();
        DiscreteDistribution::new(
            g,
            vec![
                (Subset::from_mask(2, 0b01), 0.5),
                (Subset::from_mask(2, 0b10), 0.5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn uncross_two_singletons() {
        let d = two_singletons();
        match uncross_step(&d) {
            UncrossStep::Uncrossed(next) => {
                assert_eq!(next.support().len(), 2);
                assert!(next.support()[0].0.is_empty());
                assert_eq!(next.support()[1].0, Subset::full(2));
                assert!((next.support()[0].1 - 0.5).abs() < 1e-15);
                assert!((next.support()[1].1 - 0.5).abs() < 1e-15);
            }
            UncrossStep::AlreadyChain => panic!("singletons cross"),
        }
    }

    #[test]
    fn chain_input_signals_already_chain() {
        let g = GroundSet::with_size(2).unwrap();
        let d = DiscreteDistribution::new(
            g,
            vec![(Subset::empty(2), 0.5), (Subset::full(2), 0.5)],
        )
        .unwrap();
        assert!(matches!(uncross_step(&d), UncrossStep::AlreadyChain));
    }

    #[test]
    fn uncross_drops_expected_cut_and_raises_potential() {
        let graph = Graph::from_edges([("e1", "e2", 1.0)]).unwrap();
        let oracle = make_graph_cut(&graph).unwrap();
        let d = two_singletons();
        let before_f = d.expected_value(&oracle).unwrap();
        let before_sq = d.expected_sq_cardinality();
        let UncrossStep::Uncrossed(next) = uncross_step(&d) else {
            panic!("singletons cross")
        };
        let after_f = next.expected_value(&oracle).unwrap();
        let after_sq = next.expected_sq_cardinality();
        assert_eq!(before_f, 1.0);
        assert_eq!(after_f, 0.0);
        assert_eq!(before_sq, 1.0);
        assert_eq!(after_sq, 2.0);
    }

    #[test]
    fn uncross_to_chain_single_step_case() {
        let chain = uncross_to_chain(&two_singletons()).unwrap();
        assert_eq!(chain.support().len(), 2);
        assert!(chain.support()[0].0.is_empty());
        assert_eq!(chain.support()[1].0, Subset::full(2));
    }

    #[test]
    fn chain_input_round_trips() {
        let g = GroundSet::with_size(3).unwrap();
        let d = DiscreteDistribution::new(
            g,
            vec![
                (Subset::from_mask(3, 0b001), 0.25),
                (Subset::from_mask(3, 0b011), 0.25),
                (Subset::from_mask(3, 0b111), 0.5),
            ],
        )
        .unwrap();
        let chain = uncross_to_chain(&d).unwrap();
        assert_eq!(chain.support().len(), 3);
        for ((s, p), (es, ep)) in chain.support().iter().zip(d.support()) {
            assert_eq!(s, es);
            assert_eq!(p, ep);
        }
    }

    #[test]
    fn three_doubletons_collapse_to_marginal_chain() {
        let g = GroundSet::with_size(3).unwrap();
        let third = 1.0 / 3.0;
        let d = DiscreteDistribution::new(
            g,
            vec![
                (Subset::from_mask(3, 0b011), third),
                (Subset::from_mask(3, 0b110), third),
                (Subset::from_mask(3, 0b101), third),
            ],
        )
        .unwrap();
        let chain = uncross_to_chain(&d).unwrap();
        let expect = chain_distribution(&d.marginals());
        assert!(chain.approx_eq(&expect, 1e-12));
        assert_eq!(chain.support().len(), 2);
        assert!(chain.support()[0].0.is_empty());
        assert_eq!(chain.support()[1].0, Subset::full(3));
        assert!((chain.support()[1].1 - 2.0 * third).abs() < 1e-12);
    }

    #[test]
    fn duplicate_support_entries_merge() {
        let g = GroundSet::with_size(2).unwrap();
        let d = DiscreteDistribution::new(
            g,
            vec![
                (Subset::from_mask(2, 0b01), 0.25),
                (Subset::from_mask(2, 0b01), 0.25),
                (Subset::empty(2), 0.5),
            ],
        )
        .unwrap();
        assert_eq!(d.support().len(), 2);
    }

    #[test]
    fn rejects_bad_probabilities() {
        let g = GroundSet::with_size(2).unwrap();
        assert!(DiscreteDistribution::new(
            g.clone(),
            vec![(Subset::empty(2), 0.4), (Subset::full(2), 0.4)]
        )
        .is_err());
        assert!(DiscreteDistribution::new(
            g,
            vec![(Subset::empty(2), 1.5), (Subset::full(2), -0.5)]
        )
        .is_err());
    }
}
