//! A 2-approximation for minimizing a nonnegative symmetric submodular
//! function over nonempty sets of cardinality at most `k`.
//!
//! For every guess `v1` of an element of the optimum, the continuous
//! relaxation `min 𝓛_f(x)` over `{x(v1) = 1, Σx ≤ k}` is solved and the
//! chain distribution of the solution inspected. Either some support set of
//! size at most `k` already costs at most `2 𝓛_f(x)`, or the cheapest
//! support set `S′` of size at most `2k` costs at most `𝓛_f(x)`; in the
//! latter case every `v2 ∈ S′ \ {v1}` is tried, an unconstrained-style SFM
//! with `v1 ∈ T`, `v2 ∉ T` is solved, and whichever of `T ∩ S′` and
//! `T̄ ∩ S′` fits the budget is kept (symmetry makes the complement side
//! just as cheap). The best candidate over all guesses is returned and is
//! within twice the optimum, up to twice the relaxation tolerance.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::extensions::{chain_distribution, ChainDistribution, PointInCube};
use crate::setfn::{check_property_with_limit, Property, SetFunctionOracle, Subset};
use crate::sfm::{self, SolveParams};

const TOL: f64 = 1e-9;

/// Parameters of the cardinality-constrained minimizer.
#[derive(Debug, Clone, Default)]
pub struct CardMinParams {
    /// Inner solver budget, shared by the relaxation and the pairwise SFM
    /// calls.
    pub solve: SolveParams,
    /// Brute-force check of symmetry and nonnegativity before solving
    /// (possible for n ≤ 12; the claims are trusted otherwise).
    pub verify_properties: bool,
    /// Run only this guess instead of all of `X`. Diagnostic: the
    /// 2-approximation guarantee needs the guessed element to lie in an
    /// optimal set.
    pub restrict_guess: Option<usize>,
}


/// Outcome of inspecting one guess's chain support.
#[derive(Debug, Clone)]
pub enum CandidateSelection {
    /// A support set with `|S| ≤ k` and `f(S) ≤ 2 𝓛_f(x)`.
    Early(Subset),
    /// The cheapest support set with `|S′| ≤ 2k`; costs at most `𝓛_f(x)`.
    SPrime(Subset),
}

/// Trace of one `(v1, v2)` pair.
#[derive(Debug, Clone)]
pub struct PairTrace {
    pub v2: usize,
    pub t: Subset,
    pub t_value: f64,
    pub q: Subset,
    pub q_value: f64,
}

/// Branch taken after the relaxation for one guess.
#[derive(Debug, Clone)]
pub enum GuessBranch {
    EarlyReturn { chosen: Subset, value: f64 },
    SPrimePath {
        s_prime: Subset,
        s_prime_value: f64,
        pairs: Vec<PairTrace>,
    },
}

/// Per-guess record: relaxation point, its value, the chain support with
/// probabilities and `f` values, and the branch taken.
#[derive(Debug, Clone)]
pub struct GuessTrace {
    pub v1: usize,
    pub x: PointInCube,
    pub lovasz_value: f64,
    /// `(set, probability, f(set))` for each chain support set.
    pub support: Vec<(Subset, f64, f64)>,
    pub branch: GuessBranch,
}

#[derive(Debug, Clone)]
pub struct CardMinReport {
    pub chosen: Subset,
    /// `f(chosen)`, re-evaluated.
    pub value: f64,
    pub per_guess: Vec<GuessTrace>,
    pub oracle_queries: u64,
}

/// Minimizes a nonnegative symmetric submodular `f` over nonempty sets of
/// size at most `k`, within a factor 2 of the optimum (plus twice the
/// relaxation tolerance; exact 2·OPT for integer-valued `f` once the
/// relaxation is solved below accuracy ½).
///
/// All guesses `v1 ∈ X` are evaluated and the best candidate kept, which is
/// never worse than stopping at the first early return.
pub fn cardmin_symmetric(
    oracle: &SetFunctionOracle,
    k: usize,
    params: &CardMinParams,
) -> Result<CardMinReport> {
    let n = oracle.n();
    if k < 1 || k >= n {
        return Err(Error::input(format!(
            "cardinality bound k = {k} must satisfy 1 <= k < n (n = {n})"
        )));
    }
    if params.verify_properties {
        if let Some(w) = check_property_with_limit(oracle, Property::Symmetric, 12)? {
            return Err(Error::input(format!("oracle is not symmetric: {w:?}")));
        }
        if let Some(w) = check_property_with_limit(oracle, Property::Nonnegative, 12)? {
            return Err(Error::input(format!("oracle is not nonnegative: {w:?}")));
        }
    }
    let queries_before = oracle.queries();

    // f(T) for the pair probe (v1 ∈ T, v2 ∉ T) does not depend on the guess
    // round, so probes are cached across guesses.
    let mut pair_cache: HashMap<(usize, usize), (Subset, f64)> = HashMap::new();

    let guesses: Vec<usize> = match params.restrict_guess {
        Some(v1) if v1 < n => vec![v1],
        Some(v1) => {
            return Err(Error::input(format!("guess element index {v1} out of range")))
        }
        None => (0..n).collect(),
    };

    let mut best: Option<(Subset, f64)> = None;
    let mut per_guess = Vec::with_capacity(guesses.len());

    for v1 in guesses {
        let (x, lovasz_value) = sfm::minimize_lovasz_over_budget(oracle, v1, k, &params.solve)?;
        let chain = chain_distribution(&x);

        let mut support = Vec::with_capacity(chain.support().len());
        for (s, p) in chain.support() {
            support.push((s.clone(), *p, oracle.evaluate(s)?));
        }

        let branch = match select_candidates(&chain, oracle, k, lovasz_value)? {
            CandidateSelection::Early(s) => {
                let value = oracle.evaluate(&s)?;
                consider(&mut best, &s, value);
                GuessBranch::EarlyReturn { chosen: s, value }
            }
            CandidateSelection::SPrime(s_prime) => {
                let s_prime_value = oracle.evaluate(&s_prime)?;
                let mut pairs = Vec::new();
                for v2 in s_prime.iter() {
                    if v2 == v1 {
                        continue;
                    }
                    let (t, t_value) = match pair_cache.get(&(v1, v2)) {
                        Some(hit) => hit.clone(),
                        None => {
                            let include = Subset::from_indices(n, &[v1]);
                            let exclude = Subset::from_indices(n, &[v2]);
                            let report = sfm::minimize_with_constraints(
                                oracle,
                                &include,
                                &exclude,
                                &params.solve,
                            )?;
                            let entry = (report.minimizer, report.value);
                            pair_cache.insert((v1, v2), entry.clone());
                            entry
                        }
                    };
                    let q = partition_by_t(&s_prime, &t, k)?;
                    let q_value = oracle.evaluate(&q)?;
                    consider(&mut best, &q, q_value);
                    pairs.push(PairTrace { v2, t, t_value, q, q_value });
                }
                GuessBranch::SPrimePath { s_prime, s_prime_value, pairs }
            }
        };
        per_guess.push(GuessTrace { v1, x, lovasz_value, support, branch });
    }

    let (chosen, _) = best.ok_or_else(|| Error::contract("no candidate was recorded"))?;
    let value = oracle.evaluate(&chosen)?;
    if chosen.is_empty() || chosen.cardinality() > k {
        return Err(Error::contract(format!(
            "candidate violates the cardinality window: |Q| = {}",
            chosen.cardinality()
        )));
    }
    Ok(CardMinReport {
        chosen,
        value,
        per_guess,
        oracle_queries: oracle.queries() - queries_before,
    })
}

/// Inspects a chain's support: an early set of size at most `k` with
/// `f ≤ 2 𝓛_f(x)` if one exists (cheapest f, then smallest), otherwise the
/// cheapest support set of size at most `2k`.
///
/// For any chain of a feasible point (`Σx ≤ k`) the dichotomy cannot fail;
/// failure is reported as a loud contract error.
pub fn select_candidates(
    chain: &ChainDistribution,
    oracle: &SetFunctionOracle,
    k: usize,
    lovasz_value: f64,
) -> Result<CandidateSelection> {
    let mut evaluated: Vec<(Subset, f64)> = Vec::with_capacity(chain.support().len());
    for (s, _) in chain.support() {
        if s.is_empty() {
            continue; // candidates must be nonempty
        }
        evaluated.push((s.clone(), oracle.evaluate(s)?));
    }

    let mut early: Option<(Subset, f64)> = None;
    for (s, v) in &evaluated {
        if s.cardinality() <= k && *v <= 2.0 * lovasz_value + TOL {
            let better = match &early {
                None => true,
                Some((bs, bv)) => {
                    *v < bv - TOL
                        || ((*v - bv).abs() <= TOL && s.cardinality() < bs.cardinality())
                }
            };
            if better {
                early = Some((s.clone(), *v));
            }
        }
    }
    if let Some((s, _)) = early {
        return Ok(CandidateSelection::Early(s));
    }

    let mut s_prime: Option<(Subset, f64)> = None;
    for (s, v) in &evaluated {
        if s.cardinality() <= 2 * k {
            let better = match &s_prime {
                None => true,
                Some((bs, bv)) => {
                    *v < bv - TOL
                        || ((*v - bv).abs() <= TOL && s.cardinality() < bs.cardinality())
                }
            };
            if better {
                s_prime = Some((s.clone(), *v));
            }
        }
    }
    match s_prime {
        Some((s, v)) => {
            if v > lovasz_value + TOL {
                return Err(Error::contract(format!(
                    "support dichotomy failed: cheapest |S'| <= 2k set costs {v} > L_f(x) = \
                     {lovasz_value}; the chain cannot come from a feasible point"
                )));
            }
            Ok(CandidateSelection::SPrime(s))
        }
        None => Err(Error::contract(
            "no support set of size <= 2k; the chain cannot come from a feasible point",
        )),
    }
}

/// Keeps `T ∩ S′` when it fits the budget, otherwise `T̄ ∩ S′`. Requires
/// both parts nonempty (`v1 ∈ T ∩ S′`, `v2 ∈ S′ \ T`); the result is
/// nonempty of size at most `k` whenever `|S′| ≤ 2k`.
pub fn partition_by_t(s_prime: &Subset, t: &Subset, k: usize) -> Result<Subset> {
    let inter = t.intersection(s_prime);
    let rest = s_prime.difference(t);
    if inter.is_empty() || rest.is_empty() {
        return Err(Error::input(
            "T must split S' into two nonempty parts (v1 inside, v2 outside)",
        ));
    }
    if inter.cardinality() <= k {
        Ok(inter)
    } else {
        Ok(rest)
    }
}

fn consider(best: &mut Option<(Subset, f64)>, s: &Subset, value: f64) {
    let better = match best {
        None => true,
        Some((bs, bv)) => {
            value < *bv - TOL
                || ((value - *bv).abs() <= TOL && s.cmp_card_lex(bs) == std::cmp::Ordering::Less)
        }
    };
    if better {
        *best = Some((s.clone(), value));
    }
}
