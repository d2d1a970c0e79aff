//! Reduced simplicial homology over the rationals, prime fields and the
//! integers, plus the homological connectivity estimate derived from it.
//!
//! The chain complex is augmented: the degree-0 boundary is the 1 x f_0 row
//! of ones mapping onto the formal empty face, so all Betti numbers are
//! reduced. Over a field, Betti numbers come from the rank-nullity identity
//! `b_k = f_k - rank d_k - rank d_{k+1}`; over the integers, ranks and
//! torsion come from Smith normal form.

mod matrix;

pub use matrix::{rank_mod_p, rank_over_rationals, smith_invariant_factors, SparseColumn};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::SimplicialComplex;

/// Boundary matrices with more columns than this fall back from integral
/// Smith normal form to field ranks when coefficients are chosen
/// automatically.
pub const DEFAULT_SNF_COLUMN_BUDGET: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("degree {degree} out of range for a complex of dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: i64 },
    #[error("homology of the empty complex is not defined here; connectivity handles it")]
    EmptyComplex,
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("coefficient list is empty")]
    NoCoefficients,
}

/// Coefficient system for a homology computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Rationals,
    PrimeField(u64),
    Integers,
}

impl std::fmt::Display for Coefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficients::Rationals => write!(f, "Q"),
            Coefficients::PrimeField(p) => write!(f, "Z{p}"),
            Coefficients::Integers => write!(f, "Z"),
        }
    }
}

impl Serialize for Coefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coefficients {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_coefficients(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses `"Q"`, `"Z"`, or `"Z<p>"` (e.g. `"Z2"`), case-insensitively.
pub fn parse_coefficients(text: &str) -> Result<Coefficients, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(Coefficients::Rationals);
    }
    if t.eq_ignore_ascii_case("z") {
        return Ok(Coefficients::Integers);
    }
    if let Some(rest) = t.strip_prefix(['z', 'Z']) {
        let p: u64 = rest
            .parse()
            .map_err(|_| format!("unrecognized coefficient system {text:?}"))?;
        return Ok(Coefficients::PrimeField(p));
    }
    Err(format!("unrecognized coefficient system {text:?}"))
}

/// The boundary matrix in one degree: rows are (k-1)-faces and columns are
/// k-faces, both in lexicographic order, entries are the alternating signs
/// induced by sorted vertex order. Degree 0 is the augmentation row.
#[derive(Debug, Clone)]
pub struct ChainBoundary {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<SparseColumn>,
}

impl ChainBoundary {
    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.columns[col]
            .iter()
            .find(|&&(r, _)| r == row)
            .map_or(0, |&(_, v)| v)
    }

    /// Matrix product `self * other`, for checking that consecutive
    /// boundaries compose to zero.
    pub fn compose(&self, other: &ChainBoundary) -> Vec<SparseColumn> {
        assert_eq!(self.cols, other.rows);
        other
            .columns
            .iter()
            .map(|col| {
                let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
                for &(mid, v) in col {
                    for &(r, w) in &self.columns[mid] {
                        *acc.entry(r).or_insert(0) += v * w;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect()
    }
}

/// Standard simplicial boundary in degree `k` (`0 <= k <= dim`).
pub fn boundary_matrix(
    complex: &SimplicialComplex,
    k: usize,
) -> Result<ChainBoundary, HomologyError> {
    let dim = complex.dim();
    if (k as i64) > dim {
        return Err(HomologyError::DegreeOutOfRange { degree: k, dim });
    }
    if k == 0 {
        let cols = complex.vertex_count();
        return Ok(ChainBoundary {
            degree: 0,
            rows: 1,
            cols,
            columns: (0..cols).map(|_| vec![(0, 1)]).collect(),
        });
    }
    let faces = complex.faces_in_dim(k);
    let facets = complex.faces_in_dim(k - 1);
    let row_of = |f: &crate::complex::Face| facets.binary_search(f).expect("downward closure");
    let columns = faces
        .iter()
        .map(|face| {
            let mut col: SparseColumn = (0..face.len())
                .map(|i| {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    (row_of(&face.without(i)), sign)
                })
                .collect();
            col.sort_unstable_by_key(|&(r, _)| r);
            col
        })
        .collect();
    Ok(ChainBoundary {
        degree: k,
        rows: facets.len(),
        cols: faces.len(),
        columns,
    })
}

/// Reduced Betti numbers in degrees `0..=dim`, with integral torsion
/// (invariant factors `> 1` per degree) when computed over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub coefficients: Coefficients,
    pub reduced_betti: Vec<u64>,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<Vec<BigUint>>,
}

fn serialize_torsion<S: serde::Serializer>(
    torsion: &[Vec<BigUint>],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(torsion.len()))?;
    for degree in torsion {
        let as_strings: Vec<String> = degree.iter().map(|d| d.to_string()).collect();
        seq.serialize_element(&as_strings)?;
    }
    seq.end()
}

impl HomologyProfile {
    /// Degrees `0..=dim` with a nonzero reduced group (free rank or torsion).
    pub fn nonzero_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.reduced_betti.len())
            .filter(|&k| self.reduced_betti[k] > 0 || !self.torsion[k].is_empty())
    }
}

/// Reduced homology of a nonempty complex over the given coefficients.
pub fn betti_numbers(
    complex: &SimplicialComplex,
    coefficients: Coefficients,
) -> Result<HomologyProfile, HomologyError> {
    if complex.is_empty() {
        return Err(HomologyError::EmptyComplex);
    }
    if let Coefficients::PrimeField(p) = coefficients {
        if !is_prime(p) {
            return Err(HomologyError::NonPrimeModulus(p));
        }
    }
    let dim = complex.dim() as usize;
    let f: Vec<u64> = complex.f_vector();
    let boundaries: Vec<ChainBoundary> = (0..=dim)
        .map(|k| boundary_matrix(complex, k))
        .collect::<Result<_, _>>()?;

    let mut ranks = vec![0usize; dim + 2];
    let mut torsion: Vec<Vec<BigUint>> = vec![Vec::new(); dim + 2];
    for (k, b) in boundaries.iter().enumerate() {
        match coefficients {
            Coefficients::Rationals => ranks[k] = rank_over_rationals(&b.columns),
            Coefficients::PrimeField(p) => ranks[k] = rank_mod_p(&b.columns, p),
            Coefficients::Integers => {
                let factors = smith_invariant_factors(b.rows, &b.columns);
                ranks[k] = factors.len();
                if k >= 1 {
                    torsion[k - 1] = factors.into_iter().filter(|d| !d.is_one()).collect();
                }
            }
        }
    }

    let reduced_betti = (0..=dim)
        .map(|k| f[k + 1] - ranks[k] as u64 - ranks[k + 1] as u64)
        .collect();
    Ok(HomologyProfile {
        coefficients,
        reduced_betti,
        torsion: torsion[..=dim].to_vec(),
    })
}

/// Homological connectivity value: either a definite integer (>= -2) or the
/// marker that every reduced group up to the dimension vanished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hconn {
    Value(i64),
    AllVanishing,
}

impl Serialize for Hconn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Hconn::Value(v) => s.serialize_i64(*v),
            Hconn::AllVanishing => s.serialize_str("all-vanishing"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectivityEstimate {
    pub hconn: Hconn,
    pub witness_degree: Option<usize>,
    pub coefficients_tried: Vec<Coefficients>,
    pub profiles: Vec<HomologyProfile>,
}

/// Largest `h` such that reduced homology vanishes in every degree `<= h`
/// over every listed coefficient system; `-2` for the empty complex,
/// `AllVanishing` when no nonzero group exists up to the dimension.
pub fn homological_connectivity(
    complex: &SimplicialComplex,
    coefficients: &[Coefficients],
) -> Result<ConnectivityEstimate, HomologyError> {
    if coefficients.is_empty() {
        return Err(HomologyError::NoCoefficients);
    }
    if complex.is_empty() {
        return Ok(ConnectivityEstimate {
            hconn: Hconn::Value(-2),
            witness_degree: None,
            coefficients_tried: coefficients.to_vec(),
            profiles: Vec::new(),
        });
    }
    let profiles: Vec<HomologyProfile> = coefficients
        .iter()
        .map(|&c| betti_numbers(complex, c))
        .collect::<Result<_, _>>()?;
    let witness = profiles
        .iter()
        .filter_map(|p| p.nonzero_degrees().next())
        .min();
    Ok(ConnectivityEstimate {
        hconn: match witness {
            Some(w) => Hconn::Value(w as i64 - 1),
            None => Hconn::AllVanishing,
        },
        witness_degree: witness,
        coefficients_tried: coefficients.to_vec(),
        profiles,
    })
}

/// The automatic coefficient choice: integers while every boundary matrix
/// fits the Smith normal form budget, otherwise rationals plus Z_2 and Z_3.
pub fn default_coefficients(complex: &SimplicialComplex) -> Vec<Coefficients> {
    default_coefficients_with_budget(complex, DEFAULT_SNF_COLUMN_BUDGET)
}

pub fn default_coefficients_with_budget(
    complex: &SimplicialComplex,
    snf_column_budget: usize,
) -> Vec<Coefficients> {
    let widest = complex.f_vector().into_iter().skip(1).max().unwrap_or(0);
    if widest <= snf_column_budget as u64 {
        vec![Coefficients::Integers]
    } else {
        vec![
            Coefficients::Rationals,
            Coefficients::PrimeField(2),
            Coefficients::PrimeField(3),
        ]
    }
}

pub fn homological_connectivity_default(
    complex: &SimplicialComplex,
) -> Result<ConnectivityEstimate, HomologyError> {
    homological_connectivity(complex, &default_coefficients(complex))
}

/// Combinatorial Euler characteristic `sum (-1)^k f_k` over `k >= 0`.
pub fn euler_characteristic(complex: &SimplicialComplex) -> i64 {
    complex
        .f_vector()
        .into_iter()
        .skip(1)
        .enumerate()
        .map(|(k, fk)| if k % 2 == 0 { fk as i64 } else { -(fk as i64) })
        .sum()
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d <= p / d {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
