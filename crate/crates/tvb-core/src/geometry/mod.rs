//! Exact rational point configurations and convex-hull intersection tests.
//!
//! Everything here is exact: points have `BigRational` coordinates, hull
//! intersection is an exact LP feasibility question, and every positive
//! answer comes with a convex-coefficient witness that an independent
//! checker ([`verify_witness`]) accepts. Rationals cross every file-format
//! boundary as `"p/q"` strings.

mod lp;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("face {0} is empty")]
    EmptyFace(usize),
    #[error("no faces given")]
    NoFaces,
    #[error("color classes are not a partition: {0}")]
    InvalidPartition(String),
}

/// Parses `"p/q"` (or a bare integer `"p"`) into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational, GeometryError> {
    let bad = || GeometryError::InvalidRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Canonical `"p/q"` form: reduced, denominator positive.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// A point of `Q^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint { coords }
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_integers(coords: &[i64]) -> Self {
        RationalPoint {
            coords: coords
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coords = raw
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(RationalPoint { coords })
    }
}

/// Rational points plus a partition of their indices into color classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredConfiguration {
    dimension: usize,
    points: Vec<RationalPoint>,
    colors: Vec<Vec<usize>>,
    color_of: Vec<usize>,
}

impl ColoredConfiguration {
    pub fn new(
        dimension: usize,
        points: Vec<RationalPoint>,
        colors: Vec<Vec<usize>>,
    ) -> Result<Self, GeometryError> {
        for p in &points {
            if p.dim() != dimension {
                return Err(GeometryError::DimensionMismatch {
                    expected: dimension,
                    found: p.dim(),
                });
            }
        }
        let mut color_of = vec![usize::MAX; points.len()];
        for (class_index, class) in colors.iter().enumerate() {
            for &p in class {
                if p >= points.len() {
                    return Err(GeometryError::InvalidPartition(format!(
                        "index {p} out of range for {} points",
                        points.len()
                    )));
                }
                if color_of[p] != usize::MAX {
                    return Err(GeometryError::InvalidPartition(format!(
                        "index {p} appears in two classes"
                    )));
                }
                color_of[p] = class_index;
            }
        }
        if let Some(orphan) = color_of.iter().position(|&c| c == usize::MAX) {
            return Err(GeometryError::InvalidPartition(format!(
                "index {orphan} belongs to no class"
            )));
        }
        let colors = colors
            .into_iter()
            .map(|mut class| {
                class.sort_unstable();
                class
            })
            .collect();
        Ok(ColoredConfiguration {
            dimension,
            points,
            colors,
            color_of,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> &RationalPoint {
        &self.points[i]
    }

    pub fn colors(&self) -> &[Vec<usize>] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn color_of(&self, point: usize) -> usize {
        self.color_of[point]
    }

    pub fn cards(&self) -> Vec<usize> {
        self.colors.iter().map(Vec::len).collect()
    }

    /// Hex SHA-256 of the canonical serialization; campaign reports use it
    /// to identify configurations.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("configuration serializes");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Serialize for ColoredConfiguration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ColoredConfiguration", 3)?;
        st.serialize_field("dimension", &self.dimension)?;
        st.serialize_field("points", &self.points)?;
        st.serialize_field("colors", &self.colors)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfiguration {
    dimension: usize,
    points: Vec<RationalPoint>,
    colors: Vec<Vec<usize>>,
}

impl<'de> Deserialize<'de> for ColoredConfiguration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawConfiguration::deserialize(d)?;
        ColoredConfiguration::new(raw.dimension, raw.points, raw.colors)
            .map_err(serde::de::Error::custom)
    }
}

/// Convex-combination certificate that the hulls of the given faces share
/// `common_point`: one coefficient per vertex, aligned with the face's
/// vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TverbergWitness {
    pub coefficients: Vec<Vec<Rational>>,
    pub common_point: RationalPoint,
}

impl Serialize for TverbergWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<Vec<String>> = self
            .coefficients
            .iter()
            .map(|face| face.iter().map(format_rational).collect())
            .collect();
        let mut st = s.serialize_struct("TverbergWitness", 2)?;
        st.serialize_field("coefficients", &coeffs)?;
        st.serialize_field("common_point", &self.common_point)?;
        st.end()
    }
}

/// Decides whether the convex hulls of the given nonempty point sets have a
/// common point, returning an exact witness when they do.
///
/// The system solved is `sum_v c_{j,v} = 1` per face plus, per coordinate,
/// agreement of the weighted sums of face `j > 0` with face `0`; the
/// returned witness is the first basic feasible solution under the solver's
/// deterministic pivot order.
pub fn common_point_feasible(
    faces: &[Vec<RationalPoint>],
) -> Result<Option<TverbergWitness>, GeometryError> {
    if faces.is_empty() {
        return Err(GeometryError::NoFaces);
    }
    for (j, face) in faces.iter().enumerate() {
        if face.is_empty() {
            return Err(GeometryError::EmptyFace(j));
        }
    }
    let dim = faces[0][0].dim();
    for face in faces {
        for p in face {
            if p.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
    }

    let offsets: Vec<usize> = faces
        .iter()
        .scan(0, |acc, f| {
            let start = *acc;
            *acc += f.len();
            Some(start)
        })
        .collect();
    let total_vars = offsets.last().unwrap() + faces.last().unwrap().len();
    let num_rows = faces.len() + (faces.len() - 1) * dim;
    let mut a = vec![vec![Rational::zero(); total_vars]; num_rows];
    let mut b = vec![Rational::zero(); num_rows];

    for (j, face) in faces.iter().enumerate() {
        for v in 0..face.len() {
            a[j][offsets[j] + v] = Rational::one();
        }
        b[j] = Rational::one();
    }
    let mut row = faces.len();
    for (j, face) in faces.iter().enumerate().skip(1) {
        for t in 0..dim {
            for (v, p) in faces[0].iter().enumerate() {
                a[row][offsets[0] + v] = p.coord(t).clone();
            }
            for (v, p) in face.iter().enumerate() {
                a[row][offsets[j] + v] = -p.coord(t);
            }
            row += 1;
        }
    }

    let Some(x) = lp::feasible_point(&a, &b) else {
        return Ok(None);
    };
    let coefficients: Vec<Vec<Rational>> = faces
        .iter()
        .enumerate()
        .map(|(j, face)| x[offsets[j]..offsets[j] + face.len()].to_vec())
        .collect();
    let mut common = vec![Rational::zero(); dim];
    for (v, p) in faces[0].iter().enumerate() {
        for t in 0..dim {
            common[t] += &coefficients[0][v] * p.coord(t);
        }
    }
    let witness = TverbergWitness {
        coefficients,
        common_point: RationalPoint::new(common),
    };
    debug_assert!(verify_witness(faces, &witness));
    Ok(Some(witness))
}

/// Independent certificate checker: exact nonnegativity, affine sums, and
/// weighted vertex sums for every face. Any violation yields `false`.
pub fn verify_witness(faces: &[Vec<RationalPoint>], witness: &TverbergWitness) -> bool {
    if witness.coefficients.len() != faces.len() {
        return false;
    }
    let dim = witness.common_point.dim();
    for (face, coeffs) in faces.iter().zip(&witness.coefficients) {
        if coeffs.len() != face.len() {
            return false;
        }
        if coeffs.iter().any(Rational::is_negative) {
            return false;
        }
        if coeffs.iter().sum::<Rational>() != Rational::one() {
            return false;
        }
        if face.iter().any(|p| p.dim() != dim) {
            return false;
        }
        for t in 0..dim {
            let weighted: Rational = face.iter().zip(coeffs).map(|(p, c)| c * p.coord(t)).sum();
            if weighted != *witness.common_point.coord(t) {
                return false;
            }
        }
    }
    true
}

/// True iff no `d+1` of the points lie on a common affine hyperplane
/// (exact determinant tests over all subsets).
pub fn general_position_check(config: &ColoredConfiguration) -> bool {
    general_position(config.dimension(), config.points())
}

pub fn general_position(dimension: usize, points: &[RationalPoint]) -> bool {
    use itertools::Itertools;
    if points.len() < dimension + 1 {
        return true;
    }
    points.iter().combinations(dimension + 1).all(|subset| {
        let base = subset[0];
        let m: Vec<Vec<Rational>> = subset[1..]
            .iter()
            .map(|p| (0..dimension).map(|t| p.coord(t) - base.coord(t)).collect())
            .collect();
        !determinant(m).is_zero()
    })
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot_row != col {
            m.swap(col, pivot_row);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in (col + 1)..n {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &pivot;
                for c in col..n {
                    let v = &m[r][c] - &factor * &m[col][c];
                    m[r][c] = v;
                }
            }
        }
    }
    det
}

/// Counter-based deterministic generator (splitmix64); a pure function of
/// the seed, so identical seeds give identical configurations on every
/// platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Deterministic pseudo-random configuration: points in the box
/// `[0, 1000]^d` with denominators at most 1000, color classes filled as
/// consecutive index blocks of the requested sizes, resampled as a whole
/// until the general-position check passes.
pub fn random_configuration(dimension: usize, cards: &[usize], seed: u64) -> ColoredConfiguration {
    let mut rng = SplitMix64::new(seed);
    let total: usize = cards.iter().sum();
    let mut colors: Vec<Vec<usize>> = Vec::with_capacity(cards.len());
    let mut next = 0;
    for &c in cards {
        colors.push((next..next + c).collect());
        next += c;
    }
    loop {
        let points: Vec<RationalPoint> = (0..total)
            .map(|_| {
                RationalPoint::new(
                    (0..dimension)
                        .map(|_| {
                            let q = 1 + rng.next_u64() % 1000;
                            let p = rng.next_u64() % (1000 * q + 1);
                            Rational::new(BigInt::from(p), BigInt::from(q))
                        })
                        .collect(),
                )
            })
            .collect();
        if general_position(dimension, &points) {
            return ColoredConfiguration::new(dimension, points, colors)
                .expect("block partition is valid");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(coords: &[i64]) -> RationalPoint {
        RationalPoint::from_integers(coords)
    }

    #[test]
    fn rational_parsing_round_trips() {
        let x = parse_rational("6/4").unwrap();
        assert_eq!(format_rational(&x), "3/2");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5/1");
        assert_eq!(format_rational(&parse_rational("-2/6").unwrap()), "-1/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a").is_err());
    }

    #[test]
    fn crossing_segments_meet_in_the_center() {
        let faces = vec![
            vec![pt(&[0, 0]), pt(&[2, 2])],
            vec![pt(&[0, 2]), pt(&[2, 0])],
        ];
        let witness = common_point_feasible(&faces).unwrap().unwrap();
        assert_eq!(witness.common_point, pt(&[1, 1]));
        assert!(verify_witness(&faces, &witness));
    }

    #[test]
    fn separated_triangles_are_infeasible() {
        let faces = vec![
            vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])],
            vec![pt(&[5, 5]), pt(&[6, 5]), pt(&[5, 6])],
        ];
        assert!(common_point_feasible(&faces).unwrap().is_none());
    }

    #[test]
    fn point_inside_a_triangle_is_feasible() {
        // barycentric by hand: (2,1) = 1/4 (0,0) + 1/4 (4,0) + ... lies inside
        let faces = vec![
            vec![pt(&[0, 0]), pt(&[4, 0]), pt(&[2, 3])],
            vec![pt(&[2, 1])],
        ];
        let witness = common_point_feasible(&faces).unwrap().unwrap();
        assert_eq!(witness.common_point, pt(&[2, 1]));
    }

    #[test]
    fn witness_checker_rejects_corruption() {
        let faces = vec![
            vec![pt(&[0, 0]), pt(&[2, 2])],
            vec![pt(&[0, 2]), pt(&[2, 0])],
        ];
        let witness = common_point_feasible(&faces).unwrap().unwrap();

        let mut negated = witness.clone();
        negated.coefficients[0][0] = -&negated.coefficients[0][0];
        negated.coefficients[0][1] =
            Rational::one() - &negated.coefficients[0][0] + Rational::one();
        assert!(!verify_witness(&faces, &negated));

        let mut wrong_sum = witness.clone();
        wrong_sum.coefficients[1][0] += Rational::one();
        assert!(!verify_witness(&faces, &wrong_sum));

        let mut wrong_point = witness;
        wrong_point.common_point = pt(&[0, 0]);
        assert!(!verify_witness(&faces, &wrong_point));
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let faces = vec![vec![pt(&[0, 0])], vec![pt(&[1])]];
        assert!(matches!(
            common_point_feasible(&faces),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        let faces = vec![vec![pt(&[0, 0])], vec![]];
        assert!(matches!(
            common_point_feasible(&faces),
            Err(GeometryError::EmptyFace(1))
        ));
    }

    #[test]
    fn general_position_examples() {
        let gp = ColoredConfiguration::new(
            2,
            vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        assert!(general_position_check(&gp));

        let collinear = ColoredConfiguration::new(
            2,
            vec![pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 2]), pt(&[5, 0])],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        assert!(!general_position_check(&collinear));

        let tiny = ColoredConfiguration::new(2, vec![pt(&[0, 0])], vec![vec![0]]).unwrap();
        assert!(general_position_check(&tiny));
    }

    #[test]
    fn partition_validation() {
        let overlap =
            ColoredConfiguration::new(1, vec![pt(&[0]), pt(&[1])], vec![vec![0, 1], vec![1]]);
        assert!(matches!(overlap, Err(GeometryError::InvalidPartition(_))));
        let gap = ColoredConfiguration::new(1, vec![pt(&[0]), pt(&[1])], vec![vec![0]]);
        assert!(matches!(gap, Err(GeometryError::InvalidPartition(_))));
    }

    #[test]
    fn configuration_serde_round_trip() {
        let config = ColoredConfiguration::new(
            2,
            vec![pt(&[0, 0]), pt(&[2, 2]), pt(&[0, 2]), pt(&[2, 0])],
            vec![vec![0, 1], vec![2, 3]],
        )
        .unwrap();
        let json = serde_json::to_string(&config).unwrap();
        let back: ColoredConfiguration = serde_json::from_str(&json).unwrap();
        assert_eq!(config, back);

        let bad = r#"{"dimension": 1, "points": [["0/1"]], "colors": [[0]], "extra": 1}"#;
        assert!(serde_json::from_str::<ColoredConfiguration>(bad).is_err());
    }

    #[test]
    fn random_configurations_are_reproducible() {
        let a = random_configuration(2, &[5, 2, 2], 1);
        let b = random_configuration(2, &[5, 2, 2], 1);
        assert_eq!(a, b);
        assert_eq!(a.cards(), vec![5, 2, 2]);
        assert!(general_position_check(&a));
        let c = random_configuration(2, &[5, 2, 2], 2);
        assert_ne!(a, c);
    }

    #[test]
    fn radon_partitions_exist_for_random_quadruples() {
        // any 4 points in the plane split into two parts with meeting hulls
        for seed in 0..200u64 {
            let config = random_configuration(2, &[4], 1000 + seed);
            let pts = config.points();
            let mut found = false;
            // the 7 unordered splits into two nonempty parts
            for mask in 1u32..8 {
                let (mut left, mut right) = (Vec::new(), Vec::new());
                for (i, p) in pts.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        left.push(p.clone());
                    } else {
                        right.push(p.clone());
                    }
                }
                if common_point_feasible(&[left, right]).unwrap().is_some() {
                    found = true;
                    break;
                }
            }
            assert!(found, "no Radon partition at seed {}", 1000 + seed);
        }
    }

    /// Feasibility oracle by exhaustive basic-solution enumeration: the
    /// polytope is nonempty iff some independent column subset of full rank
    /// solves the system nonnegatively.
    fn feasible_by_basis_enumeration(a: &[Vec<Rational>], b: &[Rational]) -> bool {
        use itertools::Itertools;
        let n = a.first().map_or(0, Vec::len);
        let rows: Vec<Vec<Rational>> = a.to_vec();
        let rank = {
            let mut m = rows.clone();
            for (r, bi) in m.iter_mut().zip(b) {
                r.push(bi.clone());
            }
            rational_rank(&mut m, n) // rank of A only (first n columns)
        };
        for subset in (0..n).combinations(rank) {
            if let Some(solution) = solve_exactly(&rows, b, &subset) {
                if solution.iter().all(|x| !x.is_negative()) {
                    return true;
                }
            }
        }
        false
    }

    fn rational_rank(m: &mut [Vec<Rational>], ncols: usize) -> usize {
        let mut rank = 0;
        for col in 0..ncols {
            let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pr);
            let pivot = m[rank][col].clone();
            for r in 0..m.len() {
                if r != rank && !m[r][col].is_zero() {
                    let f = &m[r][col] / &pivot;
                    for c in 0..m[r].len() {
                        let v = &m[r][c] - &f * &m[rank][c];
                        m[r][c] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Solves `A[:, subset] x = b` exactly; `None` if inconsistent or the
    /// columns are dependent.
    fn solve_exactly(
        a: &[Vec<Rational>],
        b: &[Rational],
        subset: &[usize],
    ) -> Option<Vec<Rational>> {
        let m = a.len();
        let k = subset.len();
        let mut aug: Vec<Vec<Rational>> = (0..m)
            .map(|r| {
                let mut row: Vec<Rational> = subset.iter().map(|&c| a[r][c].clone()).collect();
                row.push(b[r].clone());
                row
            })
            .collect();
        let mut pivot_rows = Vec::new();
        let mut rank = 0;
        for col in 0..k {
            let Some(pr) = (rank..m).find(|&r| !aug[r][col].is_zero()) else {
                return None; // dependent columns
            };
            aug.swap(rank, pr);
            let pivot = aug[rank][col].clone();
            for c in 0..=k {
                aug[rank][c] /= &pivot;
            }
            for r in 0..m {
                if r != rank && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in 0..=k {
                        let v = &aug[r][c] - &f * &aug[rank][c];
                        aug[r][c] = v;
                    }
                }
            }
            pivot_rows.push(rank);
            rank += 1;
        }
        // consistency of the eliminated rows
        for r in rank..m {
            if !aug[r][k].is_zero() {
                return None;
            }
        }
        Some((0..k).map(|i| aug[pivot_rows[i]][k].clone()).collect())
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn small_face(max_len: usize) -> impl Strategy<Value = Vec<RationalPoint>> {
        proptest::collection::vec(
            proptest::collection::vec(small_rational(), 2).prop_map(RationalPoint::new),
            1..=max_len,
        )
    }

    proptest!(
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// The simplex decision agrees with exhaustive basic-solution
        /// enumeration on small planar instances.
        #[test]
        fn feasibility_matches_basis_enumeration_oracle(
            f1 in small_face(3),
            f2 in small_face(3),
        ) {
            let faces = vec![f1, f2];
            let fast = common_point_feasible(&faces).unwrap().is_some();

            // rebuild the same system the decision procedure solves
            let dim = 2;
            let offsets = [0, faces[0].len()];
            let total = faces[0].len() + faces[1].len();
            let mut a = vec![vec![Rational::zero(); total]; 2 + dim];
            let mut b = vec![Rational::zero(); 2 + dim];
            for j in 0..2 {
                for v in 0..faces[j].len() {
                    a[j][offsets[j] + v] = Rational::one();
                }
                b[j] = Rational::one();
            }
            for t in 0..dim {
                for (v, p) in faces[0].iter().enumerate() {
                    a[2 + t][v] = p.coord(t).clone();
                }
                for (v, p) in faces[1].iter().enumerate() {
                    a[2 + t][offsets[1] + v] = -p.coord(t);
                }
            }
            prop_assert_eq!(fast, feasible_by_basis_enumeration(&a, &b));
        }

        /// Scaling all coordinates by a positive rational preserves the
        /// feasibility decision.
        #[test]
        fn feasibility_is_scale_invariant(
            f1 in small_face(3),
            f2 in small_face(3),
            scale_num in 1i64..=7,
            scale_den in 1i64..=7,
        ) {
            let scale = Rational::new(BigInt::from(scale_num), BigInt::from(scale_den));
            let faces = vec![f1, f2];
            let scaled: Vec<Vec<RationalPoint>> = faces
                .iter()
                .map(|face| {
                    face.iter()
                        .map(|p| {
                            RationalPoint::new(
                                p.coords().iter().map(|c| c * &scale).collect(),
                            )
                        })
                        .collect()
                })
                .collect();
            let plain = common_point_feasible(&faces).unwrap().is_some();
            let after = common_point_feasible(&scaled).unwrap().is_some();
            prop_assert_eq!(plain, after);
        }
    );
}
