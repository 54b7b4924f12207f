//! Exhaustive property checks and the brute-force optimizer.
//!
//! Everything here enumerates all of `2^X`, so the entry points refuse
//! ground sets above a configured limit instead of silently taking hours.

use super::{SetFunctionOracle, Subset};
use crate::error::{Error, Result};

/// Default ground-set limit for the property checks.
pub const DEFAULT_CHECK_LIMIT: usize = 16;
/// Default ground-set limit for [`brute_optimize`].
pub const DEFAULT_BRUTE_LIMIT: usize = 20;

const TOL: f64 = 1e-9;

/// Checkable structural properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Submodular,
    Monotone,
    Symmetric,
    Nonnegative,
}

/// A concrete counterexample to a claimed property. Replaying the witness
/// through the oracle reproduces the reported violation.
#[derive(Debug, Clone)]
pub enum Witness {
    /// Diminishing returns fail: the margin of `j` at `a` is strictly below
    /// the margin of `j` at `b ⊇ a`.
    Submodularity {
        a: Subset,
        b: Subset,
        j: usize,
        lhs: f64,
        rhs: f64,
    },
    /// `f(s) > f(s ∪ {j})`.
    Monotonicity { s: Subset, j: usize, lhs: f64, rhs: f64 },
    /// `f(s) != f(X \ s)`.
    Symmetry { s: Subset, lhs: f64, rhs: f64 },
    /// `f(s) < 0`.
    Nonnegativity { s: Subset, value: f64 },
}

impl Witness {
    /// Re-queries the oracle and reports whether the violation reproduces.
    pub fn replay(&self, oracle: &SetFunctionOracle) -> Result<bool> {
        Ok(match self {
            Witness::Submodularity { a, b, j, lhs, rhs } => {
                let la = oracle.evaluate(&a.with(*j))? - oracle.evaluate(a)?;
                let lb = oracle.evaluate(&b.with(*j))? - oracle.evaluate(b)?;
                (la - lhs).abs() <= TOL && (lb - rhs).abs() <= TOL && la < lb - TOL
            }
            Witness::Monotonicity { s, j, lhs, rhs } => {
                let vs = oracle.evaluate(s)?;
                let vt = oracle.evaluate(&s.with(*j))?;
                (vs - lhs).abs() <= TOL && (vt - rhs).abs() <= TOL && vs > vt + TOL
            }
            Witness::Symmetry { s, lhs, rhs } => {
                let vs = oracle.evaluate(s)?;
                let vc = oracle.evaluate(&s.complement())?;
                (vs - lhs).abs() <= TOL && (vc - rhs).abs() <= TOL && (vs - vc).abs() > TOL
            }
            Witness::Nonnegativity { s, value } => {
                let v = oracle.evaluate(s)?;
                (v - value).abs() <= TOL && v < -TOL
            }
        })
    }
}

/// Exhaustively verifies `property` over all required tuples, at the default
/// enumeration limit. `Ok(None)` means the property holds; `Ok(Some(w))`
/// carries the first violation in scan order.
pub fn check_property_bruteforce(
    oracle: &SetFunctionOracle,
    property: Property,
) -> Result<Option<Witness>> {
    check_property_with_limit(oracle, property, DEFAULT_CHECK_LIMIT)
}

/// As [`check_property_bruteforce`] with an explicit ground-set limit.
///
/// Submodularity is checked in the diminishing-returns form (all `A ⊆ B`,
/// `j ∉ B`), which yields small witnesses; the two standard definitions are
/// equivalent.
pub fn check_property_with_limit(
    oracle: &SetFunctionOracle,
    property: Property,
    limit: usize,
) -> Result<Option<Witness>> {
    let n = oracle.n();
    if n > limit {
        return Err(Error::budget(format!(
            "property check enumerates 2^n subsets; n = {n} exceeds the limit {limit}"
        )));
    }
    let values = table(oracle)?;
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };

    match property {
        Property::Nonnegative => {
            for mask in 0..=full {
                if values[mask as usize] < -TOL {
                    return Ok(Some(Witness::Nonnegativity {
                        s: Subset::from_mask(n, mask),
                        value: values[mask as usize],
                    }));
                }
                if mask == full {
                    break;
                }
            }
        }
        Property::Symmetric => {
            for mask in 0..=full {
                let comp = full & !mask;
                if (values[mask as usize] - values[comp as usize]).abs() > TOL {
                    return Ok(Some(Witness::Symmetry {
                        s: Subset::from_mask(n, mask),
                        lhs: values[mask as usize],
                        rhs: values[comp as usize],
                    }));
                }
                if mask == full {
                    break;
                }
            }
        }
        Property::Monotone => {
            for mask in 0..=full {
                for j in 0..n {
                    if mask >> j & 1 == 1 {
                        continue;
                    }
                    let with_j = mask | (1 << j);
                    if values[mask as usize] > values[with_j as usize] + TOL {
                        return Ok(Some(Witness::Monotonicity {
                            s: Subset::from_mask(n, mask),
                            j,
                            lhs: values[mask as usize],
                            rhs: values[with_j as usize],
                        }));
                    }
                }
                if mask == full {
                    break;
                }
            }
        }
        Property::Submodular => {
            for b in 0..=full {
                // Submasks of b in ascending numeric order.
                let mut a: u64 = 0;
                loop {
                    for j in 0..n {
                        if b >> j & 1 == 1 {
                            continue;
                        }
                        let bit = 1u64 << j;
                        let margin_a = values[(a | bit) as usize] - values[a as usize];
                        let margin_b = values[(b | bit) as usize] - values[b as usize];
                        if margin_a < margin_b - TOL {
                            return Ok(Some(Witness::Submodularity {
                                a: Subset::from_mask(n, a),
                                b: Subset::from_mask(n, b),
                                j,
                                lhs: margin_a,
                                rhs: margin_b,
                            }));
                        }
                    }
                    if a == b {
                        break;
                    }
                    a = a.wrapping_sub(b) & b;
                }
                if b == full {
                    break;
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizeSense {
    Minimize,
    Maximize,
}

/// Constraints for [`brute_optimize`]; all fields optional.
#[derive(Debug, Clone, Default)]
pub struct BruteConstraints {
    pub min_card: Option<usize>,
    pub max_card: Option<usize>,
    pub include: Option<Subset>,
    pub exclude: Option<Subset>,
}

impl BruteConstraints {
    pub fn cardinality(min: usize, max: usize) -> Self {
        BruteConstraints {
            min_card: Some(min),
            max_card: Some(max),
            ..Default::default()
        }
    }
}

/// Exact optimum over all subsets satisfying the constraints, at the default
/// enumeration limit. Ties are broken by smallest cardinality, then earliest
/// elements in ground order.
pub fn brute_optimize(
    oracle: &SetFunctionOracle,
    sense: OptimizeSense,
    constraints: &BruteConstraints,
) -> Result<(Subset, f64)> {
    brute_optimize_with_limit(oracle, sense, constraints, DEFAULT_BRUTE_LIMIT)
}

pub fn brute_optimize_with_limit(
    oracle: &SetFunctionOracle,
    sense: OptimizeSense,
    constraints: &BruteConstraints,
    limit: usize,
) -> Result<(Subset, f64)> {
    let n = oracle.n();
    if n > limit {
        return Err(Error::budget(format!(
            "brute optimization enumerates 2^n subsets; n = {n} exceeds the limit {limit}"
        )));
    }
    let include = constraints.include.clone().unwrap_or_else(|| Subset::empty(n));
    let exclude = constraints.exclude.clone().unwrap_or_else(|| Subset::empty(n));
    if include.ground_size() != n || exclude.ground_size() != n {
        return Err(Error::input("constraint subsets range over a different ground set"));
    }
    if !include.is_disjoint_from(&exclude) {
        return Err(Error::input("include and exclude constraints overlap"));
    }
    if let Some(min_card) = constraints.min_card {
        if min_card > n - exclude.cardinality() {
            return Err(Error::input(format!(
                "min_card {min_card} cannot be met with {} elements excluded",
                exclude.cardinality()
            )));
        }
    }

    let include_mask = include.to_mask();
    let exclude_mask = exclude.to_mask();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };

    let mut best: Option<(Subset, f64)> = None;
    for mask in 0..=full {
        let feasible = mask & include_mask == include_mask
            && mask & exclude_mask == 0
            && constraints.min_card.is_none_or(|c| mask.count_ones() as usize >= c)
            && constraints.max_card.is_none_or(|c| mask.count_ones() as usize <= c);
        if feasible {
            let s = Subset::from_mask(n, mask);
            let v = oracle.evaluate(&s)?;
            let better = match &best {
                None => true,
                Some((bs, bv)) => {
                    let improves = match sense {
                        OptimizeSense::Minimize => v < bv - TOL,
                        OptimizeSense::Maximize => v > bv + TOL,
                    };
                    improves
                        || ((v - bv).abs() <= TOL && s.cmp_card_lex(bs) == std::cmp::Ordering::Less)
                }
            };
            if better {
                best = Some((s, v));
            }
        }
        if mask == full {
            break;
        }
    }
    best.ok_or_else(|| Error::input("no subset satisfies the constraints"))
}

/// Value table indexed by subset mask; issues exactly `2^n` oracle queries.
fn table(oracle: &SetFunctionOracle) -> Result<Vec<f64>> {
    let n = oracle.n();
    let size = 1usize << n;
    let mut values = Vec::with_capacity(size);
    for mask in 0..size {
        values.push(oracle.evaluate(&Subset::from_mask(n, mask as u64))?);
    }
    Ok(values)
}
