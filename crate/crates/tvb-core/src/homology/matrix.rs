//! Sparse exact linear algebra for boundary matrices.
//!
//! Three primitives: rank over the rationals (integer-preserving column
//! echelon, no fractions ever formed), rank over a prime field, and the
//! Smith normal form of a sparse integer matrix. Columns are sparse vectors
//! of `(row, value)` pairs sorted by row.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse column with entries sorted by row index.
pub type SparseColumn = Vec<(usize, i64)>;

/// Rank over the rationals of an integer matrix given by sparse columns.
///
/// Left-to-right reduction against the highest nonzero row of each stored
/// pivot column; all updates stay in integers, with a content-gcd division
/// after every cancellation to keep entries small. Columns are processed in
/// the caller's (lexicographic) order; the order affects speed only.
pub fn rank_over_rationals(columns: &[SparseColumn]) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
    let mut rank = 0;
    for col in columns {
        let mut c: Vec<(usize, BigInt)> = col.iter().map(|&(r, v)| (r, BigInt::from(v))).collect();
        while let Some(&(low, _)) = c.last() {
            match pivots.get(&low) {
                Some(p) => cancel_low(&mut c, p),
                None => {
                    normalize_content(&mut c);
                    pivots.insert(low, c);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// `c := (a/g) * c - (b/g) * p` where `a`, `b` are the trailing values of
/// `p`, `c` and `g = gcd(a, b)`; kills the shared low row.
fn cancel_low(c: &mut Vec<(usize, BigInt)>, p: &[(usize, BigInt)]) {
    let a = &p.last().unwrap().1;
    let b = &c.last().unwrap().1;
    let g = a.gcd(b);
    let ca = a / &g;
    let cb = b / &g;
    let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(c.len() + p.len());
    let mut i = 0;
    let mut j = 0;
    while i < c.len() || j < p.len() {
        let (row, val) = match (c.get(i), p.get(j)) {
            (Some((rc, vc)), Some((rp, vp))) if rc == rp => {
                i += 1;
                j += 1;
                (*rc, vc * &ca - vp * &cb)
            }
            (Some((rc, vc)), Some((rp, _))) if rc < rp => {
                i += 1;
                (*rc, vc * &ca)
            }
            (Some((rc, vc)), None) => {
                i += 1;
                (*rc, vc * &ca)
            }
            (_, Some((rp, vp))) => {
                j += 1;
                (*rp, -(vp * &cb))
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            merged.push((row, val));
        }
    }
    normalize_content(&mut merged);
    *c = merged;
}

fn normalize_content(c: &mut [(usize, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, v) in c.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for (_, v) in c.iter_mut() {
            *v /= &g;
        }
    }
}

/// Rank of the matrix over the field `Z_p`. The caller guarantees `p` prime.
pub fn rank_mod_p(columns: &[SparseColumn], p: u64) -> usize {
    // Pivot columns are normalized so their low entry is 1.
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    let mut rank = 0;
    for col in columns {
        let mut c: Vec<(usize, u64)> = col
            .iter()
            .filter_map(|&(r, v)| {
                let m = v.rem_euclid(p as i64) as u64;
                (m != 0).then_some((r, m))
            })
            .collect();
        while let Some(&(low, low_val)) = c.last() {
            match pivots.get(&low) {
                Some(piv) => {
                    // c := c - low_val * piv
                    let mut merged = Vec::with_capacity(c.len() + piv.len());
                    let mut i = 0;
                    let mut j = 0;
                    while i < c.len() || j < piv.len() {
                        let (row, val) = match (c.get(i), piv.get(j)) {
                            (Some(&(rc, vc)), Some(&(rp, vp))) if rc == rp => {
                                i += 1;
                                j += 1;
                                (rc, sub_mod(vc, mul_mod(low_val, vp, p), p))
                            }
                            (Some(&(rc, vc)), Some(&(rp, _))) if rc < rp => {
                                i += 1;
                                (rc, vc)
                            }
                            (Some(&(rc, vc)), None) => {
                                i += 1;
                                (rc, vc)
                            }
                            (_, Some(&(rp, vp))) => {
                                j += 1;
                                (rp, sub_mod(0, mul_mod(low_val, vp, p), p))
                            }
                            (None, None) => unreachable!(),
                        };
                        if val != 0 {
                            merged.push((row, val));
                        }
                    }
                    c = merged;
                }
                None => {
                    let inv = inverse_mod(low_val, p);
                    for (_, v) in c.iter_mut() {
                        *v = mul_mod(*v, inv, p);
                    }
                    pivots.insert(low, c);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime and a != 0 mod p
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse of non-unit");
    t.rem_euclid(p as i128) as u64
}

/// Nonzero invariant factors of the matrix, as a divisibility chain
/// `d_1 | d_2 | ... | d_r` (so `r` is the rank over the rationals).
///
/// Pivots are chosen by smallest absolute value, tie-broken by smallest
/// Markowitz fill and then position, which keeps both fill-in and
/// coefficient growth tame on boundary matrices.
pub fn smith_invariant_factors(rows: usize, columns: &[SparseColumn]) -> Vec<BigUint> {
    let mut m = SnfWorkspace::new(rows, columns);
    let mut diagonal: Vec<BigUint> = Vec::new();
    while let Some((pr, pc)) = m.choose_pivot() {
        let (pr, pc) = m.clear_pivot_row_and_column(pr, pc);
        diagonal.push(m.take_pivot(pr, pc));
    }
    // Fix the divisibility chain: diag(a, b) is equivalent to
    // diag(gcd(a,b), lcm(a,b)) under unimodular operations.
    for i in 0..diagonal.len() {
        for j in (i + 1)..diagonal.len() {
            if !(&diagonal[j] % &diagonal[i]).is_zero() {
                let g = diagonal[i].gcd(&diagonal[j]);
                let l = &diagonal[i] / &g * &diagonal[j];
                diagonal[i] = g;
                diagonal[j] = l;
            }
        }
    }
    diagonal.sort();
    diagonal
}

struct SnfWorkspace {
    rows: Vec<BTreeMap<usize, BigInt>>,
    col_rows: Vec<BTreeSet<usize>>,
}

impl SnfWorkspace {
    fn new(rows: usize, columns: &[SparseColumn]) -> Self {
        let mut ws = SnfWorkspace {
            rows: vec![BTreeMap::new(); rows],
            col_rows: vec![BTreeSet::new(); columns.len()],
        };
        for (c, col) in columns.iter().enumerate() {
            for &(r, v) in col {
                if v != 0 {
                    ws.rows[r].insert(c, BigInt::from(v));
                    ws.col_rows[c].insert(r);
                }
            }
        }
        ws
    }

    fn get(&self, r: usize, c: usize) -> BigInt {
        self.rows[r].get(&c).cloned().unwrap_or_else(BigInt::zero)
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.col_rows[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.col_rows[c].insert(r);
        }
    }

    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs: Option<BigInt> = None;
        let mut best_fill = usize::MAX;
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                let a = v.abs();
                let fill = (row.len() - 1) * (self.col_rows[c].len() - 1);
                let better = match &best_abs {
                    None => true,
                    Some(b) => a < *b || (a == *b && fill < best_fill),
                };
                if better {
                    best = Some((r, c));
                    best_abs = Some(a);
                    best_fill = fill;
                }
            }
        }
        best
    }

    /// Euclidean elimination until the pivot row and column hold only the
    /// pivot itself. The pivot may move while remainders appear; its
    /// absolute value strictly decreases on every move, so this terminates.
    /// Returns the final pivot position.
    fn clear_pivot_row_and_column(&mut self, mut pr: usize, mut pc: usize) -> (usize, usize) {
        loop {
            let pivot = self.get(pr, pc);
            debug_assert!(!pivot.is_zero());

            if let Some(&r) = self.col_rows[pc].iter().find(|&&r| r != pr) {
                let a = self.get(r, pc);
                let q = rounded_quotient(&a, &pivot);
                self.row_op(r, pr, &q);
                if !self.get(r, pc).is_zero() {
                    pr = r; // remainder smaller than the pivot: adopt it
                }
                continue;
            }

            let other_col = self.rows[pr].keys().copied().find(|&c| c != pc);
            if let Some(c) = other_col {
                let a = self.get(pr, c);
                let q = rounded_quotient(&a, &pivot);
                self.col_op(c, pc, &q);
                if !self.get(pr, c).is_zero() {
                    pc = c;
                }
                continue;
            }

            return (pr, pc);
        }
    }

    fn take_pivot(&mut self, pr: usize, pc: usize) -> BigUint {
        let v = self.get(pr, pc);
        self.set(pr, pc, BigInt::zero());
        v.abs().to_biguint().unwrap()
    }

    /// `row_r -= q * row_p`
    fn row_op(&mut self, r: usize, p: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let updates: Vec<(usize, BigInt)> = self.rows[p].iter().map(|(&c, v)| (c, v * q)).collect();
        for (c, delta) in updates {
            let v = self.get(r, c) - delta;
            self.set(r, c, v);
        }
    }

    /// `col_c -= q * col_p`
    fn col_op(&mut self, c: usize, p: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let updates: Vec<(usize, BigInt)> = self.col_rows[p]
            .iter()
            .map(|&r| (r, self.rows[r][&p].clone() * q))
            .collect();
        for (r, delta) in updates {
            let v = self.get(r, c) - delta;
            self.set(r, c, v);
        }
    }
}

/// Quotient rounded to the nearest integer, so remainders satisfy
/// `|rem| <= |divisor| / 2`.
fn rounded_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if &r.abs() * 2u8 > b.abs() {
        if r.is_negative() == b.is_negative() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn dense_to_columns(rows: &[Vec<i64>]) -> Vec<SparseColumn> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut cols = vec![Vec::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    cols[c].push((r, v));
                }
            }
        }
        cols
    }

    /// Textbook rational Gaussian elimination, the independent rank oracle.
    fn dense_rank_oracle(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| BigRational::from_integer(v.into()))
                    .collect()
            })
            .collect();
        let ncols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(pivot_row) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot_row);
            let pivot = m[rank][col].clone();
            for r in 0..m.len() {
                if r != rank && !m[r][col].is_zero() {
                    let factor = &m[r][col] / &pivot;
                    for c in col..ncols {
                        let v = &m[r][c] - &factor * &m[rank][c];
                        m[r][c] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_of_identity_and_zero() {
        let id = dense_to_columns(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(rank_over_rationals(&id), 2);
        assert_eq!(rank_mod_p(&id, 2), 2);
        let zero = dense_to_columns(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(rank_over_rationals(&zero), 0);
        assert_eq!(rank_mod_p(&zero, 5), 0);
    }

    #[test]
    fn rank_drops_mod_p_but_not_over_q() {
        // det = 2: full rank over Q and Z_3, singular over Z_2
        let m = dense_to_columns(&[vec![1, 1], vec![1, 3]]);
        assert_eq!(rank_over_rationals(&m), 2);
        assert_eq!(rank_mod_p(&m, 3), 2);
        assert_eq!(rank_mod_p(&m, 2), 1);
    }

    #[test]
    fn smith_form_of_diagonal_matrices() {
        let m = dense_to_columns(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(
            smith_invariant_factors(2, &m),
            vec![BigUint::from(1u32), BigUint::from(6u32)]
        );
        let m = dense_to_columns(&[vec![4, 0], vec![0, 6]]);
        assert_eq!(
            smith_invariant_factors(2, &m),
            vec![BigUint::from(2u32), BigUint::from(12u32)]
        );
    }

    #[test]
    fn smith_form_known_values() {
        // d1 = gcd of entries, d1*d2 = gcd of 2x2 minors, d1*d2*d3 = |det|
        let m = dense_to_columns(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        assert_eq!(
            smith_invariant_factors(3, &m),
            vec![
                BigUint::from(2u32),
                BigUint::from(2u32),
                BigUint::from(156u32)
            ]
        );
    }

    #[test]
    fn smith_rank_matches_rational_rank() {
        let m = dense_to_columns(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank_over_rationals(&m), 2);
        assert_eq!(smith_invariant_factors(3, &m).len(), 2);
    }

    /// gcd of all k x k minors, the k-th determinantal divisor; the
    /// invariant factors satisfy d_1 * ... * d_k = D_k.
    fn determinantal_divisor(rows: &[Vec<i64>], k: usize) -> BigUint {
        use itertools::Itertools;
        let nrows = rows.len();
        let ncols = rows[0].len();
        let mut g = BigUint::ZERO;
        for row_set in (0..nrows).combinations(k) {
            for col_set in (0..ncols).combinations(k) {
                let minor: Vec<Vec<BigInt>> = row_set
                    .iter()
                    .map(|&r| col_set.iter().map(|&c| BigInt::from(rows[r][c])).collect())
                    .collect();
                g = g.gcd(&integer_determinant(minor).magnitude().clone());
            }
        }
        g
    }

    fn integer_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
        // cofactor expansion; minors here are at most 4 x 4
        let n = m.len();
        if n == 1 {
            return m.pop().unwrap().pop().unwrap();
        }
        let top = m.remove(0);
        let mut det = BigInt::zero();
        for (j, coeff) in top.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = coeff * integer_determinant(minor);
            if j % 2 == 0 {
                det += term;
            } else {
                det -= term;
            }
        }
        det
    }

    proptest::proptest! {
        /// Invariant factors reproduce the determinantal divisors, the
        /// classical independent characterization of the Smith form.
        #[test]
        fn smith_factors_match_determinantal_divisors(
            rows in proptest::collection::vec(
                proptest::collection::vec(-4i64..=4, 1..=4),
                1..=4,
            )
        ) {
            let ncols = rows[0].len();
            let rows: Vec<Vec<i64>> = rows
                .into_iter()
                .map(|mut r| { r.resize(ncols, 0); r })
                .collect();
            let cols = dense_to_columns(&rows);
            let factors = smith_invariant_factors(rows.len(), &cols);
            let mut product = BigUint::from(1u32);
            for (k, factor) in factors.iter().enumerate() {
                product *= factor;
                proptest::prop_assert_eq!(
                    &product,
                    &determinantal_divisor(&rows, k + 1),
                    "divisor mismatch at k={} for {:?}",
                    k + 1,
                    rows
                );
            }
            // one past the rank every minor vanishes
            if factors.len() < rows.len().min(ncols) {
                proptest::prop_assert_eq!(
                    determinantal_divisor(&rows, factors.len() + 1),
                    BigUint::ZERO
                );
            }
        }

        #[test]
        fn ranks_agree_with_dense_oracle(
            rows in proptest::collection::vec(
                proptest::collection::vec(-4i64..=4, 1..=6),
                1..=6,
            )
        ) {
            let ncols = rows[0].len();
            let rows: Vec<Vec<i64>> = rows
                .into_iter()
                .map(|mut r| { r.resize(ncols, 0); r })
                .collect();
            let cols = dense_to_columns(&rows);
            let expected = dense_rank_oracle(&rows);
            proptest::prop_assert_eq!(rank_over_rationals(&cols), expected);
            proptest::prop_assert_eq!(
                smith_invariant_factors(rows.len(), &cols).len(),
                expected
            );
            // field rank never exceeds the rational rank
            for p in [2u64, 3, 5] {
                proptest::prop_assert!(rank_mod_p(&cols, p) <= expected);
            }
        }
    }
}
