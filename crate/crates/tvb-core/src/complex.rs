//! Finite abstract simplicial complexes with tagged vertices.
//!
//! The two constructions everything else relies on are the chessboard
//! complex (faces = rook placements on an `m x n` board: cells with pairwise
//! distinct rows and pairwise distinct columns) and the join `X * Y` (faces =
//! unions of a face of `X` and a face of `Y` on disjoint vertex sets).
//!
//! Complexes are immutable after construction and store the full face list
//! grouped by dimension, in lexicographic order, so every iteration order in
//! the crate is deterministic.

use thiserror::Error;

/// Faces allowed in a single complex before construction refuses to run.
pub const DEFAULT_FACE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("chessboard sides must be positive, got {m} x {n}")]
    EmptyChessboardSide { m: u32, n: u32 },
    #[error("construction needs {needed} faces but the budget is {budget}")]
    FaceBudgetExceeded { needed: u128, budget: u64 },
}

/// A vertex of a complex: `tag` identifies the join factor the vertex came
/// from (0 for a standalone complex), `label` is an opaque identifier unique
/// within its factor. Ordering is lexicographic on `(tag, label)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub tag: u32,
    pub label: u64,
}

impl Vertex {
    pub fn new(tag: u32, label: u64) -> Self {
        Vertex { tag, label }
    }

    /// Vertex for the chessboard cell `(row, col)`, both 1-based. The label
    /// packs the pair so that label order agrees with lexicographic cell
    /// order.
    pub fn cell(row: u32, col: u32) -> Self {
        Vertex {
            tag: 0,
            label: (u64::from(row) << 32) | u64::from(col),
        }
    }

    /// Inverse of [`Vertex::cell`] on the label alone.
    pub fn as_cell(self) -> (u32, u32) {
        ((self.label >> 32) as u32, self.label as u32)
    }

    fn retagged(self, offset: u32) -> Self {
        Vertex {
            tag: self.tag + offset,
            label: self.label,
        }
    }
}

/// A face: a strictly sorted sequence of distinct vertices. The empty
/// sequence is the formal empty face used by the `f_{-1} = 1` convention.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    vertices: Vec<Vertex>,
}

impl Face {
    pub fn empty() -> Self {
        Face {
            vertices: Vec::new(),
        }
    }

    /// Builds a face from vertices in any order. Panics on duplicates.
    pub fn new(mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        assert!(
            vertices.windows(2).all(|w| w[0] != w[1]),
            "face has duplicate vertices"
        );
        Face { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension: number of vertices minus one; the empty face has dim -1.
    pub fn dim(&self) -> i64 {
        self.vertices.len() as i64 - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// The facet obtained by deleting the vertex at position `idx`.
    pub fn without(&self, idx: usize) -> Face {
        let mut vertices = self.vertices.clone();
        vertices.remove(idx);
        Face { vertices }
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.vertices.iter().all(|v| other.contains(*v))
    }

    /// Union of faces whose vertex sets are disjoint and already ordered
    /// (every vertex of `self` sorts before every vertex of `other`).
    fn concat(&self, other: &Face) -> Face {
        debug_assert!(match (self.vertices.last(), other.vertices.first()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        });
        let mut vertices = Vec::with_capacity(self.len() + other.len());
        vertices.extend_from_slice(&self.vertices);
        vertices.extend_from_slice(&other.vertices);
        Face { vertices }
    }
}

/// A finite abstract simplicial complex, downward closed by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// `faces_by_dim[k]` holds the k-dimensional faces sorted
    /// lexicographically; the formal empty face is implicit.
    faces_by_dim: Vec<Vec<Face>>,
    /// Number of join factors; standalone complexes (including the empty
    /// complex) count as a single factor.
    factors: u32,
}

impl SimplicialComplex {
    /// The empty complex: no vertices, dimension -1.
    pub fn empty() -> Self {
        SimplicialComplex {
            faces_by_dim: Vec::new(),
            factors: 1,
        }
    }

    /// Closes the given generating faces downward. Labels keep whatever tags
    /// they carry; a standalone complex should use tag 0.
    pub fn from_faces<I>(generators: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = Face>,
    {
        Self::from_faces_with_budget(generators, DEFAULT_FACE_BUDGET)
    }

    pub fn from_faces_with_budget<I>(generators: I, budget: u64) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = Face>,
    {
        let mut buckets: Vec<std::collections::BTreeSet<Face>> = Vec::new();
        let mut stack: Vec<Face> = generators.into_iter().filter(|f| !f.is_empty()).collect();
        let mut total: u64 = 0;
        while let Some(face) = stack.pop() {
            let k = face.dim() as usize;
            if buckets.len() <= k {
                buckets.resize_with(k + 1, Default::default);
            }
            if !buckets[k].insert(face.clone()) {
                continue;
            }
            total += 1;
            if total > budget {
                return Err(ComplexError::FaceBudgetExceeded {
                    needed: u128::from(total),
                    budget,
                });
            }
            if face.len() > 1 {
                for i in 0..face.len() {
                    stack.push(face.without(i));
                }
            }
        }
        Ok(SimplicialComplex {
            faces_by_dim: buckets
                .into_iter()
                .map(|b| b.into_iter().collect())
                .collect(),
            factors: 1,
        })
    }

    /// The chessboard complex on an `m x n` board: vertices are cells,
    /// faces are sets of cells with pairwise distinct rows and columns.
    ///
    /// ```
    /// use tvb_core::complex::SimplicialComplex;
    ///
    /// let hexagon = SimplicialComplex::chessboard(3, 2).unwrap();
    /// assert_eq!(hexagon.dim(), 1);
    /// assert_eq!(hexagon.f_vector(), vec![1, 6, 6]);
    /// ```
    pub fn chessboard(m: u32, n: u32) -> Result<Self, ComplexError> {
        Self::chessboard_with_budget(m, n, DEFAULT_FACE_BUDGET)
    }

    pub fn chessboard_with_budget(m: u32, n: u32, budget: u64) -> Result<Self, ComplexError> {
        if m == 0 || n == 0 {
            return Err(ComplexError::EmptyChessboardSide { m, n });
        }
        let needed = chessboard_face_count(m, n);
        if needed > u128::from(budget) {
            return Err(ComplexError::FaceBudgetExceeded { needed, budget });
        }
        let max_size = m.min(n) as usize;
        let mut buckets: Vec<Vec<Face>> = vec![Vec::new(); max_size];
        // DFS over cells in lexicographic order keeps every bucket sorted.
        let mut chosen: Vec<Vertex> = Vec::with_capacity(max_size);
        let mut used_rows = vec![false; m as usize + 1];
        let mut used_cols = vec![false; n as usize + 1];
        #[allow(clippy::too_many_arguments)]
        fn extend(
            m: u32,
            n: u32,
            start_row: u32,
            start_col: u32,
            chosen: &mut Vec<Vertex>,
            used_rows: &mut [bool],
            used_cols: &mut [bool],
            buckets: &mut [Vec<Face>],
        ) {
            let mut row = start_row;
            let mut col = start_col;
            while row <= m {
                if used_rows[row as usize] {
                    row += 1;
                    col = 1;
                    continue;
                }
                if col > n {
                    row += 1;
                    col = 1;
                    continue;
                }
                if used_cols[col as usize] {
                    col += 1;
                    continue;
                }
                chosen.push(Vertex::cell(row, col));
                buckets[chosen.len() - 1].push(Face {
                    vertices: chosen.clone(),
                });
                if chosen.len() < buckets.len() {
                    used_rows[row as usize] = true;
                    used_cols[col as usize] = true;
                    extend(m, n, row + 1, 1, chosen, used_rows, used_cols, buckets);
                    used_rows[row as usize] = false;
                    used_cols[col as usize] = false;
                }
                chosen.pop();
                col += 1;
            }
        }
        extend(
            m,
            n,
            1,
            1,
            &mut chosen,
            &mut used_rows,
            &mut used_cols,
            &mut buckets,
        );
        Ok(SimplicialComplex {
            faces_by_dim: buckets,
            factors: 1,
        })
    }

    /// The join `self * other`: vertex set is the tagged disjoint union
    /// (left factors keep their tags, right factor tags are shifted), faces
    /// are all unions of a face of `self` and a face of `other`.
    pub fn join(&self, other: &SimplicialComplex) -> Result<Self, ComplexError> {
        self.join_with_budget(other, DEFAULT_FACE_BUDGET)
    }

    pub fn join_with_budget(
        &self,
        other: &SimplicialComplex,
        budget: u64,
    ) -> Result<Self, ComplexError> {
        let fx = u128::from(self.face_count());
        let fy = u128::from(other.face_count());
        let needed = (fx + 1) * (fy + 1) - 1;
        if needed > u128::from(budget) {
            return Err(ComplexError::FaceBudgetExceeded { needed, budget });
        }
        let offset = self.factors;
        let dim = self.dim() + other.dim() + 1;
        let mut buckets: Vec<Vec<Face>> = vec![Vec::new(); (dim + 1).max(0) as usize];
        let retag = |f: &Face| Face {
            vertices: f.vertices.iter().map(|v| v.retagged(offset)).collect(),
        };
        for bucket in &self.faces_by_dim {
            for sigma in bucket {
                buckets[sigma.dim() as usize].push(sigma.clone());
            }
        }
        for bucket in &other.faces_by_dim {
            for tau in bucket {
                buckets[tau.dim() as usize].push(retag(tau));
            }
        }
        for sbucket in &self.faces_by_dim {
            for obucket in &other.faces_by_dim {
                for sigma in sbucket {
                    for tau in obucket {
                        let face = sigma.concat(&retag(tau));
                        buckets[face.dim() as usize].push(face);
                    }
                }
            }
        }
        for bucket in &mut buckets {
            bucket.sort_unstable();
        }
        Ok(SimplicialComplex {
            faces_by_dim: buckets,
            factors: self.factors + other.factors,
        })
    }

    /// Dimension of the complex; -1 for the empty complex.
    pub fn dim(&self) -> i64 {
        self.faces_by_dim.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.faces_by_dim.is_empty()
    }

    /// Number of join factors tracked by vertex tags.
    pub fn factors(&self) -> u32 {
        self.factors
    }

    /// Count of nonempty faces.
    pub fn face_count(&self) -> u64 {
        self.faces_by_dim.iter().map(|b| b.len() as u64).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.faces_by_dim.first().map_or(0, Vec::len)
    }

    /// `(f_{-1}, f_0, ..., f_dim)` with `f_{-1} = 1`.
    pub fn f_vector(&self) -> Vec<u64> {
        let mut f = Vec::with_capacity(self.faces_by_dim.len() + 1);
        f.push(1);
        f.extend(self.faces_by_dim.iter().map(|b| b.len() as u64));
        f
    }

    /// All k-faces in lexicographic order; `k = -1` yields the formal empty
    /// face and out-of-range `k` yields nothing.
    pub fn faces_of_dim(&self, k: i64) -> Vec<Face> {
        if k == -1 {
            return vec![Face::empty()];
        }
        if k < -1 || k > self.dim() {
            return Vec::new();
        }
        self.faces_by_dim[k as usize].clone()
    }

    /// Borrowed view of the k-dimensional bucket (empty above `dim`).
    pub fn faces_in_dim(&self, k: usize) -> &[Face] {
        self.faces_by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn contains_face(&self, face: &Face) -> bool {
        if face.is_empty() {
            return true;
        }
        let k = face.dim() as usize;
        self.faces_by_dim
            .get(k)
            .is_some_and(|b| b.binary_search(face).is_ok())
    }
}

/// Closed-form count of nonempty chessboard faces:
/// `sum_k C(m,k) * C(n,k) * k!` over `1 <= k <= min(m,n)`, saturating at
/// `u128::MAX` (far beyond any realizable face budget).
pub fn chessboard_face_count(m: u32, n: u32) -> u128 {
    let mut total: u128 = 0;
    for k in 1..=m.min(n) as u128 {
        let term = binomial(u128::from(m), k)
            .saturating_mul(binomial(u128::from(n), k))
            .saturating_mul(factorial(k));
        total = total.saturating_add(term);
    }
    total
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact while it fits; once saturated it stays astronomically
        // above any budget, which is all the caller needs
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn factorial(k: u128) -> u128 {
    (1..=k).fold(1, u128::saturating_mul)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(face: &Face) -> Vec<(u32, u32)> {
        face.vertices().iter().map(|v| v.as_cell()).collect()
    }

    /// Independent route to the chessboard edge set: filter all cell pairs.
    fn brute_force_edges(m: u32, n: u32) -> Vec<Vec<(u32, u32)>> {
        let mut cells = Vec::new();
        for i in 1..=m {
            for j in 1..=n {
                cells.push((i, j));
            }
        }
        let mut edges = Vec::new();
        for a in 0..cells.len() {
            for b in (a + 1)..cells.len() {
                let (ra, ca) = cells[a];
                let (rb, cb) = cells[b];
                if ra != rb && ca != cb {
                    edges.push(vec![cells[a], cells[b]]);
                }
            }
        }
        edges
    }

    #[test]
    fn chessboard_1x1_is_a_point() {
        let k = SimplicialComplex::chessboard(1, 1).unwrap();
        assert_eq!(k.dim(), 0);
        assert_eq!(k.f_vector(), vec![1, 1]);
    }

    #[test]
    fn chessboard_2x2_is_two_disjoint_edges() {
        let k = SimplicialComplex::chessboard(2, 2).unwrap();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.vertex_count(), 4);
        let edges: Vec<_> = k.faces_of_dim(1).iter().map(cells).collect();
        assert_eq!(edges, vec![vec![(1, 1), (2, 2)], vec![(1, 2), (2, 1)]]);
    }

    #[test]
    fn chessboard_3x2_is_a_hexagon() {
        let k = SimplicialComplex::chessboard(3, 2).unwrap();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.f_vector(), vec![1, 6, 6]);
        let edges: Vec<_> = k.faces_of_dim(1).iter().map(cells).collect();
        assert_eq!(edges, brute_force_edges(3, 2));
        // one cycle: every vertex meets exactly two edges
        for v in k.faces_of_dim(0) {
            let deg = k
                .faces_of_dim(1)
                .iter()
                .filter(|e| v.is_subset_of(e))
                .count();
            assert_eq!(deg, 2);
        }
    }

    #[test]
    fn chessboard_rejects_zero_sides() {
        assert!(matches!(
            SimplicialComplex::chessboard(0, 2),
            Err(ComplexError::EmptyChessboardSide { .. })
        ));
        assert!(matches!(
            SimplicialComplex::chessboard(3, 0),
            Err(ComplexError::EmptyChessboardSide { .. })
        ));
    }

    #[test]
    fn face_budget_is_enforced() {
        let err = SimplicialComplex::chessboard_with_budget(5, 5, 100).unwrap_err();
        assert!(matches!(err, ComplexError::FaceBudgetExceeded { .. }));
    }

    #[test]
    fn f_vector_examples() {
        let k33 = SimplicialComplex::chessboard(3, 3).unwrap();
        assert_eq!(k33.f_vector(), vec![1, 9, 18, 6]);
        assert_eq!(SimplicialComplex::empty().f_vector(), vec![1]);
    }

    #[test]
    fn chessboard_face_counts_match_closed_form() {
        for m in 1..=7u32 {
            for n in 1..=7u32 {
                let k = SimplicialComplex::chessboard(m, n).unwrap();
                let f = k.f_vector();
                for size in 1..=m.min(n) as usize {
                    let expected = binomial(u128::from(m), size as u128)
                        * binomial(u128::from(n), size as u128)
                        * factorial(size as u128);
                    assert_eq!(
                        u128::from(f[size]),
                        expected,
                        "face count mismatch at m={m} n={n} k={size}"
                    );
                }
            }
        }
    }

    #[test]
    fn faces_of_dim_bounds() {
        let k = SimplicialComplex::chessboard(2, 2).unwrap();
        assert_eq!(k.faces_of_dim(0).len(), 4);
        assert_eq!(k.faces_of_dim(2), Vec::<Face>::new());
        assert_eq!(k.faces_of_dim(-1), vec![Face::empty()]);
        assert_eq!(k.faces_of_dim(-3), Vec::<Face>::new());
    }

    #[test]
    fn join_of_points_is_an_edge() {
        let p = SimplicialComplex::from_faces([Face::new(vec![Vertex::new(0, 0)])]).unwrap();
        let j = p.join(&p).unwrap();
        assert_eq!(j.dim(), 1);
        assert_eq!(j.f_vector(), vec![1, 2, 1]);
        assert_eq!(j.factors(), 2);
    }

    #[test]
    fn join_of_2x2_boards_has_dim_3() {
        let k = SimplicialComplex::chessboard(2, 2).unwrap();
        let j = k.join(&k).unwrap();
        assert_eq!(j.vertex_count(), 8);
        assert_eq!(j.dim(), 3);
    }

    #[test]
    fn join_with_empty_retags() {
        let k = SimplicialComplex::chessboard(3, 2).unwrap();
        let j = SimplicialComplex::empty().join(&k).unwrap();
        assert_eq!(j.dim(), k.dim());
        assert_eq!(j.f_vector(), k.f_vector());
        assert!(j.faces_in_dim(0).iter().all(|f| f.vertices()[0].tag == 1));
        assert_eq!(j.factors(), 2);
    }

    #[test]
    fn join_f_vector_is_the_convolution() {
        for (m1, n1, m2, n2) in itertools::iproduct!(1..=4u32, 1..=4u32, 1..=4u32, 1..=4u32) {
            let x = SimplicialComplex::chessboard(m1, n1).unwrap();
            let y = SimplicialComplex::chessboard(m2, n2).unwrap();
            let j = x.join(&y).unwrap();
            let fx = x.f_vector();
            let fy = y.f_vector();
            let fj = j.f_vector();
            // f_k(X*Y) = sum_{i+j=k-1} f_i(X) f_j(Y), indices shifted by one
            // because f_vector starts at the empty face.
            for k in 0..fj.len() {
                let mut expected = 0u64;
                for i in 0..fx.len() {
                    if k >= i && k - i < fy.len() {
                        expected += fx[i] * fy[k - i];
                    }
                }
                assert_eq!(fj[k], expected, "convolution failed at k={k}");
            }
        }
    }

    #[test]
    fn join_is_associative_on_f_vectors() {
        let boards = [(1, 2), (2, 2), (3, 2), (2, 3)];
        for &(m1, n1) in &boards {
            for &(m2, n2) in &boards {
                for &(m3, n3) in &boards {
                    let x = SimplicialComplex::chessboard(m1, n1).unwrap();
                    let y = SimplicialComplex::chessboard(m2, n2).unwrap();
                    let z = SimplicialComplex::chessboard(m3, n3).unwrap();
                    let left = x.join(&y).unwrap().join(&z).unwrap();
                    let right = x.join(&y.join(&z).unwrap()).unwrap();
                    assert_eq!(left.f_vector(), right.f_vector());
                    assert_eq!(left.factors(), right.factors());
                }
            }
        }
    }

    #[test]
    fn downward_closure_holds_exhaustively() {
        let complexes = vec![
            SimplicialComplex::chessboard(4, 4).unwrap(),
            SimplicialComplex::chessboard(5, 3).unwrap(),
            SimplicialComplex::chessboard(2, 2)
                .unwrap()
                .join(&SimplicialComplex::chessboard(3, 2).unwrap())
                .unwrap(),
        ];
        for k in complexes {
            assert!(k.face_count() <= 100_000);
            for d in 0..=k.dim() as usize {
                for face in k.faces_in_dim(d) {
                    for i in 0..face.len() {
                        assert!(k.contains_face(&face.without(i)));
                    }
                }
            }
        }
    }

    #[test]
    fn face_ordering_is_lexicographic() {
        let k = SimplicialComplex::chessboard(3, 3).unwrap();
        for d in 0..=k.dim() as usize {
            let faces = k.faces_in_dim(d);
            assert!(faces.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
