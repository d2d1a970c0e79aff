//! The arithmetic guarantee engine for rainbow Tverberg partitions.
//!
//! Given an ambient dimension `d`, an intersection multiplicity `r` and
//! color-class cardinalities `(c_1, ..., c_m)`, the engine lower-bounds the
//! connectivity of the join of chessboard complexes `D_{c_i, r}` and
//! compares the resulting equivariant index bound against the index of the
//! target sphere, `(r-1)(d+1)`. When `r` is a prime power and the join bound
//! reaches `(d+1)(r-1) - 1`, a rainbow Tverberg partition is guaranteed for
//! every configuration with those class sizes.
//!
//! `guaranteed == false` always means "not guaranteed by this criterion",
//! never "no partition exists".

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriterionError {
    #[error("multiplicity must be at least 2, got {0}")]
    MultiplicityTooSmall(u64),
    #[error("ambient dimension must be at least 1, got {0}")]
    DimensionTooSmall(u64),
    #[error("at least one color class is required")]
    NoColorClasses,
    #[error("connectivity sequence is empty")]
    EmptyConnectivitySequence,
}

/// `r = prime^exponent` witness for prime-power multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

/// Prime-power decomposition of `r`, or `None` when `r` is not a prime
/// power. Trial factorization; desk scale.
pub fn is_prime_power(r: u64) -> Result<Option<PrimePower>, CriterionError> {
    if r < 2 {
        return Err(CriterionError::MultiplicityTooSmall(r));
    }
    let mut p = 2;
    while p <= r / p {
        if r % p == 0 {
            let mut rest = r;
            let mut exponent = 0;
            while rest % p == 0 {
                rest /= p;
                exponent += 1;
            }
            return Ok((rest == 1).then_some(PrimePower { prime: p, exponent }));
        }
        p += 1;
    }
    Ok(Some(PrimePower {
        prime: r,
        exponent: 1,
    }))
}

/// Simplex dimension in the classical Tverberg theorem: `(r-1)(d+1)`.
pub fn tverberg_number(d: u64, r: u64) -> u64 {
    debug_assert!(d >= 1 && r >= 2);
    (r - 1) * (d + 1)
}

/// Connectivity of the chessboard complex:
/// `min(m, n, floor((m+n+1)/3)) - 2`.
pub fn chessboard_connectivity_formula(m: u64, n: u64) -> i64 {
    debug_assert!(m >= 1 && n >= 1);
    m.min(n).min((m + n + 1) / 3) as i64 - 2
}

/// Connectivity contributed by one color class of size `card` against
/// multiplicity `r`: the chessboard formula for nonempty classes, and the
/// empty complex's -2 for an empty class.
pub fn factor_connectivity(card: u64, r: u64) -> i64 {
    if card == 0 {
        -2
    } else {
        chessboard_connectivity_formula(card, r)
    }
}

/// Join bound: `sum conn_i + 2 (len - 1)`, from applying
/// `conn(X * Y) >= conn(X) + conn(Y) + 2` one factor at a time.
pub fn join_connectivity_lower_bound(conns: &[i64]) -> Result<i64, CriterionError> {
    if conns.is_empty() {
        return Err(CriterionError::EmptyConnectivitySequence);
    }
    Ok(conns.iter().sum::<i64>() + 2 * (conns.len() as i64 - 1))
}

/// Index of the sphere of the `(d+1)`-fold sum of the standard `(r-1)`-
/// dimensional permutation representation: `(r-1)(d+1)`.
pub fn sphere_index(d: u64, r: u64) -> u64 {
    debug_assert!(d >= 1 && r >= 2);
    (r - 1) * (d + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionInput {
    pub dimension: u64,
    pub multiplicity: u64,
    pub cardinalities: Vec<u64>,
}

impl CriterionInput {
    pub fn new(
        dimension: u64,
        multiplicity: u64,
        cardinalities: Vec<u64>,
    ) -> Result<Self, CriterionError> {
        if dimension < 1 {
            return Err(CriterionError::DimensionTooSmall(dimension));
        }
        if multiplicity < 2 {
            return Err(CriterionError::MultiplicityTooSmall(multiplicity));
        }
        if cardinalities.is_empty() {
            return Err(CriterionError::NoColorClasses);
        }
        Ok(CriterionInput {
            dimension,
            multiplicity,
            cardinalities,
        })
    }
}

/// Which cardinality pattern the instance matches. Hypothesis patterns are
/// matched literally against the class sizes; `FormulaOnly` marks instances
/// the connectivity arithmetic guarantees without a matching pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremTag {
    /// `d+1` classes, every class of size at least `2r - 1`.
    #[serde(rename = "zv")]
    Zv,
    /// `d+1` classes, one class at least `2r - 1`, the rest at least
    /// `2r - 4`.
    #[serde(rename = "zv-relaxed")]
    ZvRelaxed,
    /// `d+1` classes with deficits `x_i >= 0`: sizes at least
    /// `2r - 1 - 3 x_i`, `sum x_i <= d`, `2 x_i + 1 <= r`.
    #[serde(rename = "zv-flex")]
    ZvFlex,
    /// Guaranteed by the join-connectivity arithmetic alone.
    #[serde(rename = "formula-only")]
    FormulaOnly,
    #[serde(rename = "none")]
    Unmatched,
}

impl std::fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TheoremTag::Zv => "zv",
            TheoremTag::ZvRelaxed => "zv-relaxed",
            TheoremTag::ZvFlex => "zv-flex",
            TheoremTag::FormulaOnly => "formula-only",
            TheoremTag::Unmatched => "none",
        };
        f.write_str(s)
    }
}

/// The full decision record for one `(d, r, cards)` instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub input: CriterionInput,
    /// Whether `r` is a prime power, the applicability requirement.
    pub applicable: bool,
    pub prime_power: Option<PrimePower>,
    pub conn_per_factor: Vec<i64>,
    pub join_conn_lower: i64,
    /// The bound the join connectivity must reach: `(d+1)(r-1) - 1`.
    pub required_bound: i64,
    pub sphere_index: u64,
    pub guaranteed: bool,
    pub theorem_tag: TheoremTag,
    /// Lexicographically first admissible deficit vector when the flex
    /// pattern matches.
    pub deficits: Option<Vec<u64>>,
}

/// Evaluates the guarantee: `guaranteed` iff `r` is a prime power and the
/// join connectivity bound reaches `(d+1)(r-1) - 1` (equivalently, the index
/// bound strictly exceeds the sphere index).
///
/// ```
/// use tvb_core::criterion::{guarantee_criterion, CriterionInput, TheoremTag};
///
/// let input = CriterionInput::new(3, 9, vec![17, 17, 11, 14]).unwrap();
/// let report = guarantee_criterion(&input).unwrap();
/// assert!(report.guaranteed);
/// assert_eq!(report.theorem_tag, TheoremTag::ZvFlex);
/// assert_eq!(report.deficits, Some(vec![0, 0, 2, 1]));
/// ```
pub fn guarantee_criterion(input: &CriterionInput) -> Result<CriterionReport, CriterionError> {
    let d = input.dimension;
    let r = input.multiplicity;
    if d < 1 {
        return Err(CriterionError::DimensionTooSmall(d));
    }
    if input.cardinalities.is_empty() {
        return Err(CriterionError::NoColorClasses);
    }
    let prime_power = is_prime_power(r)?;
    let applicable = prime_power.is_some();

    let conn_per_factor: Vec<i64> = input
        .cardinalities
        .iter()
        .map(|&c| factor_connectivity(c, r))
        .collect();
    let join_conn_lower = join_connectivity_lower_bound(&conn_per_factor)?;
    let sphere = sphere_index(d, r);
    let required_bound = sphere as i64 - 1;
    let guaranteed = applicable && join_conn_lower >= required_bound;

    let deficits = if applicable {
        match_deficit_vector(d, r, &input.cardinalities)
    } else {
        None
    };
    let theorem_tag = if !applicable {
        TheoremTag::Unmatched
    } else if matches_zv(d, r, &input.cardinalities) {
        TheoremTag::Zv
    } else if matches_zv_relaxed(d, r, &input.cardinalities) {
        TheoremTag::ZvRelaxed
    } else if deficits.is_some() {
        TheoremTag::ZvFlex
    } else if guaranteed {
        TheoremTag::FormulaOnly
    } else {
        TheoremTag::Unmatched
    };

    Ok(CriterionReport {
        input: input.clone(),
        applicable,
        prime_power,
        conn_per_factor,
        join_conn_lower,
        required_bound,
        sphere_index: sphere,
        guaranteed,
        theorem_tag,
        deficits: if theorem_tag == TheoremTag::ZvFlex {
            deficits
        } else {
            None
        },
    })
}

pub fn matches_zv(d: u64, r: u64, cards: &[u64]) -> bool {
    cards.len() as u64 == d + 1 && cards.iter().all(|&c| c >= 2 * r - 1)
}

pub fn matches_zv_relaxed(d: u64, r: u64, cards: &[u64]) -> bool {
    if cards.len() as u64 != d + 1 {
        return false;
    }
    let lower = 2 * r.max(2) - 4; // 2r - 4, clamped at zero for r = 2
    cards.iter().enumerate().any(|(j, &cj)| {
        cj >= 2 * r - 1
            && cards
                .iter()
                .enumerate()
                .all(|(i, &ci)| i == j || ci >= lower)
    })
}

/// Exhaustive search for an admissible deficit vector `x`: nonnegative,
/// `2 x_i + 1 <= r`, `sum x_i <= d`, and `c_i >= 2r - 1 - 3 x_i`. Bounds are
/// tiny (`x_i <= (r-1)/2`, sum `<= d`), so plain lexicographic enumeration
/// is fine and its first hit is the canonical witness.
pub fn match_deficit_vector(d: u64, r: u64, cards: &[u64]) -> Option<Vec<u64>> {
    if cards.len() as u64 != d + 1 {
        return None;
    }
    let per_class_cap = (r - 1) / 2;
    fn extend(
        cards: &[u64],
        r: u64,
        cap: u64,
        remaining: u64,
        chosen: &mut Vec<u64>,
    ) -> Option<Vec<u64>> {
        if chosen.len() == cards.len() {
            return Some(chosen.clone());
        }
        let i = chosen.len();
        for x in 0..=cap.min(remaining) {
            let needed = 2 * r - 1;
            if cards[i] + 3 * x >= needed {
                chosen.push(x);
                if let Some(found) = extend(cards, r, cap, remaining - x, chosen) {
                    return Some(found);
                }
                chosen.pop();
            }
        }
        None
    }
    extend(cards, r, per_class_cap, d, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(d: u64, r: u64, cards: &[u64]) -> CriterionReport {
        guarantee_criterion(&CriterionInput::new(d, r, cards.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn prime_power_decompositions() {
        assert_eq!(
            is_prime_power(9).unwrap(),
            Some(PrimePower {
                prime: 3,
                exponent: 2
            })
        );
        assert_eq!(is_prime_power(6).unwrap(), None);
        assert_eq!(
            is_prime_power(2).unwrap(),
            Some(PrimePower {
                prime: 2,
                exponent: 1
            })
        );
        assert_eq!(
            is_prime_power(8).unwrap(),
            Some(PrimePower {
                prime: 2,
                exponent: 3
            })
        );
        assert_eq!(
            is_prime_power(1).unwrap_err(),
            CriterionError::MultiplicityTooSmall(1)
        );
    }

    #[test]
    fn tverberg_numbers() {
        assert_eq!(tverberg_number(2, 3), 6);
        assert_eq!(tverberg_number(1, 2), 2);
        assert_eq!(tverberg_number(3, 9), 32);
    }

    #[test]
    fn connectivity_formula_values() {
        assert_eq!(chessboard_connectivity_formula(7, 4), 2); // r-2 at (2r-1, r), r=4
        assert_eq!(chessboard_connectivity_formula(3, 2), 0);
        assert_eq!(chessboard_connectivity_formula(6, 5), 2); // r-3 at (2r-4, r), r=5
        assert_eq!(chessboard_connectivity_formula(1, 1), -1);
    }

    #[test]
    fn join_bound_values() {
        // r=5, d=3: (r-2) + d(r-3) + 2d = (d+1)(r-1) - 1
        assert_eq!(join_connectivity_lower_bound(&[3, 2, 2, 2]).unwrap(), 15);
        assert_eq!(join_connectivity_lower_bound(&[7]).unwrap(), 7);
        assert_eq!(join_connectivity_lower_bound(&[7, 7, 5, 6]).unwrap(), 31);
        assert!(join_connectivity_lower_bound(&[]).is_err());
    }

    #[test]
    fn sphere_index_values() {
        assert_eq!(sphere_index(2, 3), 6);
        assert_eq!(sphere_index(1, 2), 2);
        assert_eq!(sphere_index(3, 9), 32);
    }

    #[test]
    fn flex_instance_is_guaranteed() {
        let rep = report(3, 9, &[17, 17, 11, 14]);
        assert!(rep.applicable);
        assert!(rep.guaranteed);
        assert_eq!(rep.theorem_tag, TheoremTag::ZvFlex);
        assert_eq!(rep.deficits, Some(vec![0, 0, 2, 1]));
        assert_eq!(rep.conn_per_factor, vec![7, 7, 5, 6]);
        assert_eq!(rep.join_conn_lower, 31);
        assert_eq!(rep.required_bound, 31);
        assert_eq!(rep.sphere_index, 32);
    }

    #[test]
    fn relaxed_instance_is_guaranteed() {
        let rep = report(2, 3, &[5, 2, 2]);
        assert!(rep.guaranteed);
        assert_eq!(rep.theorem_tag, TheoremTag::ZvRelaxed);
        assert_eq!(rep.join_conn_lower, 5);
        assert_eq!(rep.required_bound, 5);
    }

    #[test]
    fn non_prime_power_multiplicity_is_inapplicable() {
        let rep = report(2, 6, &[11, 11, 11]);
        assert!(!rep.applicable);
        assert!(!rep.guaranteed);
        assert_eq!(rep.theorem_tag, TheoremTag::Unmatched);
    }

    #[test]
    fn tiny_classes_are_not_guaranteed() {
        let rep = report(2, 3, &[1, 1, 1]);
        assert!(rep.applicable);
        assert!(!rep.guaranteed);
        assert_eq!(rep.conn_per_factor, vec![-1, -1, -1]);
        assert_eq!(rep.join_conn_lower, 1);
        assert_eq!(rep.required_bound, 5);
    }

    #[test]
    fn zv_tag_takes_precedence() {
        let rep = report(2, 3, &[5, 5, 5]);
        assert!(rep.guaranteed);
        assert_eq!(rep.theorem_tag, TheoremTag::Zv);
    }

    #[test]
    fn formula_only_covers_unpatterned_guarantees() {
        // four classes in d=2 cannot match the d+1-class patterns
        let rep = report(2, 3, &[2, 2, 2, 1]);
        assert!(rep.guaranteed);
        assert_eq!(rep.theorem_tag, TheoremTag::FormulaOnly);
        assert_eq!(rep.join_conn_lower, 5);
    }

    #[test]
    fn empty_classes_contribute_empty_complex_connectivity() {
        let rep = report(2, 3, &[5, 0, 2]);
        assert_eq!(rep.conn_per_factor, vec![1, -2, 0]);
        assert!(!rep.guaranteed);
    }

    #[test]
    fn relaxed_family_is_guaranteed_for_all_small_prime_powers() {
        for r in [3u64, 4, 5, 7, 8, 9] {
            for d in 1..=5u64 {
                let mut cards = vec![2 * r - 1];
                cards.extend(std::iter::repeat_n(2 * r - 4, d as usize));
                let rep = report(d, r, &cards);
                assert!(rep.guaranteed, "relaxed family failed at r={r} d={d}");
                assert_eq!(rep.theorem_tag, TheoremTag::ZvRelaxed);
            }
        }
        // r = 2: the relaxed statement's bound 2r-4 = 0 is vacuous; the
        // working case uses classes of size one.
        for d in 1..=5u64 {
            let mut cards = vec![3];
            cards.extend(std::iter::repeat_n(1, d as usize));
            let rep = report(d, 2, &cards);
            assert_eq!(rep.conn_per_factor[0], 0);
            assert!(rep.conn_per_factor[1..].iter().all(|&c| c == -1));
            assert!(rep.guaranteed, "relaxed family failed at r=2 d={d}");
            assert_eq!(rep.theorem_tag, TheoremTag::ZvRelaxed);
        }
    }

    #[test]
    fn flex_family_is_guaranteed_exhaustively() {
        // all admissible deficit vectors for d <= 3, prime powers r <= 9
        for r in [2u64, 3, 4, 5, 7, 8, 9] {
            for d in 1..=3u64 {
                let m = (d + 1) as usize;
                let cap = (r - 1) / 2;
                let mut stack = vec![Vec::<u64>::new()];
                while let Some(x) = stack.pop() {
                    if x.len() == m {
                        let sum: u64 = x.iter().sum();
                        if sum <= d {
                            let cards: Vec<u64> = x.iter().map(|&xi| 2 * r - 1 - 3 * xi).collect();
                            let rep = report(d, r, &cards);
                            assert!(rep.guaranteed, "flex family failed at r={r} d={d} x={x:?}");
                            assert!(matches!(
                                rep.theorem_tag,
                                TheoremTag::Zv | TheoremTag::ZvRelaxed | TheoremTag::ZvFlex
                            ));
                        }
                        continue;
                    }
                    for xi in 0..=cap {
                        let mut next = x.clone();
                        next.push(xi);
                        if next.iter().sum::<u64>() <= d {
                            stack.push(next);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zv_family_is_guaranteed() {
        for r in [2u64, 3, 4, 5, 7, 8, 9] {
            for d in 1..=5u64 {
                let cards = vec![2 * r - 1; (d + 1) as usize];
                let rep = report(d, r, &cards);
                assert!(rep.guaranteed, "zv family failed at r={r} d={d}");
                assert_eq!(rep.theorem_tag, TheoremTag::Zv);
            }
        }
    }

    #[test]
    fn formula_agrees_with_computed_connectivity_on_small_boards() {
        use crate::complex::SimplicialComplex;
        use crate::homology::{homological_connectivity_default, Hconn};
        for m in 1..=4u64 {
            for n in 1..=4u64 {
                if (m, n) == (1, 1) {
                    continue; // a single point: every reduced group vanishes
                }
                let complex = SimplicialComplex::chessboard(m as u32, n as u32).unwrap();
                let estimate = homological_connectivity_default(&complex).unwrap();
                assert_eq!(
                    estimate.hconn,
                    Hconn::Value(chessboard_connectivity_formula(m, n)),
                    "formula disagrees with homology at ({m},{n})"
                );
            }
        }
    }

    proptest::proptest! {
        /// Raising any class size never loses a guarantee.
        #[test]
        fn guarantee_is_monotone_in_cardinalities(
            d in 1u64..=4,
            r in 2u64..=9,
            cards in proptest::collection::vec(0u64..=12, 1..=6),
            bump_index in 0usize..6,
            bump in 1u64..=5,
        ) {
            let rep = report(d, r, &cards);
            let mut bigger = cards.clone();
            let i = bump_index % bigger.len();
            bigger[i] += bump;
            let rep_bigger = report(d, r, &bigger);
            proptest::prop_assert!(!rep.guaranteed || rep_bigger.guaranteed);
        }
    }
}
