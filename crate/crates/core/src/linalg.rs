//! Sparse exact linear algebra: column-major matrices, an incremental
//! echelon form with optional combination tracking, kernels, and
//! subquotients `Z/B` with deterministic representatives.
//!
//! Pivots are always the lowest nonzero index of a reduced vector and
//! vectors are inserted in the order given, so every basis choice is
//! reproducible.

use std::collections::BTreeMap;

use crate::polyalg::{Field, Scalar};
use crate::{Error, Result};

/// Sorted `(index, nonzero value)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

fn to_map(v: &[(usize, Scalar)]) -> BTreeMap<usize, Scalar> {
    v.iter().filter(|(_, c)| !c.is_zero()).cloned().collect()
}

fn axpy(work: &mut BTreeMap<usize, Scalar>, c: &Scalar, v: &[(usize, Scalar)]) {
    for (i, x) in v {
        let add = c * x;
        match work.get_mut(i) {
            Some(y) => {
                *y = &*y + &add;
                if y.is_zero() {
                    work.remove(i);
                }
            }
            None => {
                if !add.is_zero() {
                    work.insert(*i, add);
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    field: Field,
    cols: Vec<SparseVec>,
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize, field: Field) -> Self {
        Self { nrows, ncols, field, cols: vec![vec![]; ncols] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        Self { nrows: n, ncols: n, field, cols: (0..n).map(|i| vec![(i, field.one())]).collect() }
    }

    pub fn from_columns(nrows: usize, field: Field, cols: Vec<SparseVec>) -> Self {
        let cols = cols
            .into_iter()
            .map(|c| {
                let mut c: SparseVec = to_map(&c).into_iter().collect();
                c.retain(|(i, _)| {
                    assert!(*i < nrows, "row index {i} out of range {nrows}");
                    true
                });
                c
            })
            .collect::<Vec<_>>();
        Self { nrows, ncols: cols.len(), field, cols }
    }

    /// Row-major integer entries.
    pub fn from_rows_i64(field: Field, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let cols = (0..ncols)
            .map(|j| {
                (0..nrows)
                    .filter(|&i| rows[i][j] != 0)
                    .map(|i| (i, field.from_i64(rows[i][j])))
                    .collect()
            })
            .collect();
        Self { nrows, ncols, field, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.cols[j]
            .iter()
            .find(|(k, _)| *k == i)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut work = BTreeMap::new();
        for (j, c) in v {
            axpy(&mut work, c, &self.cols[*j]);
        }
        work.into_iter().collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "composing {}x{} after {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        Ok(Matrix { nrows: self.nrows, ncols: other.ncols, field: self.field, cols })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if (self.nrows, self.ncols) != (other.nrows, other.ncols) {
            return Err(Error::DimensionMismatch("adding matrices of different shapes".into()));
        }
        let one = self.field.one();
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut w = to_map(a);
                axpy(&mut w, &one, b);
                w.into_iter().collect()
            })
            .collect();
        Ok(Matrix { nrows: self.nrows, ncols: self.ncols, field: self.field, cols })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(i, x)| (*i, x * c)).filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, field: self.field, cols }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field);
        for c in &self.cols {
            e.insert(c, None);
        }
        e.rank()
    }

    /// Kernel basis; the `k`-th vector expresses the `k`-th column dependent
    /// on earlier ones.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut e = Echelon::new(self.field);
        let mut out = vec![];
        for (j, c) in self.cols.iter().enumerate() {
            if let Insert::Dependent(tag) = e.insert(c, Some(vec![(j, self.field.one())])) {
                out.push(tag);
            }
        }
        out
    }

    /// Assembles a block matrix from `(row block, col block, matrix)` triples.
    pub fn from_blocks(
        row_sizes: &[usize],
        col_sizes: &[usize],
        field: Field,
        blocks: &[(usize, usize, &Matrix)],
    ) -> Result<Matrix> {
        let row_off: Vec<usize> =
            row_sizes.iter().scan(0, |s, &n| { let o = *s; *s += n; Some(o) }).collect();
        let col_off: Vec<usize> =
            col_sizes.iter().scan(0, |s, &n| { let o = *s; *s += n; Some(o) }).collect();
        let nrows = row_sizes.iter().sum();
        let ncols = col_sizes.iter().sum();
        let mut work: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); ncols];
        let one = field.one();
        for &(bi, bj, m) in blocks {
            if m.nrows != row_sizes[bi] || m.ncols != col_sizes[bj] {
                return Err(Error::DimensionMismatch(format!(
                    "block ({bi},{bj}) is {}x{}, slot is {}x{}",
                    m.nrows, m.ncols, row_sizes[bi], col_sizes[bj]
                )));
            }
            for (j, col) in m.cols.iter().enumerate() {
                let shifted: SparseVec = col.iter().map(|(i, c)| (i + row_off[bi], c.clone())).collect();
                axpy(&mut work[col_off[bj] + j], &one, &shifted);
            }
        }
        let cols = work.into_iter().map(|w| w.into_iter().collect()).collect();
        Ok(Matrix { nrows, ncols, field, cols })
    }

    pub fn to_dense_strings(&self) -> Vec<Vec<String>> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Row {
    vec: SparseVec,
    tag: SparseVec,
}

pub enum Insert {
    /// New pivot at the given index.
    Pivot(usize),
    /// The vector was in the span; carries the reduced tag.
    Dependent(SparseVec),
}

/// Incremental echelon basis of a subspace. Each stored row remembers a
/// tag: the combination of inserted tags it equals.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    rows: BTreeMap<usize, Row>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Self { field, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// accumulated tag combination `Σ c·tag` of the rows subtracted.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> (SparseVec, SparseVec) {
        let mut work = to_map(v);
        let mut acc = BTreeMap::new();
        let mut cursor = 0;
        while let Some((&k, c)) = work.range(cursor..).next() {
            cursor = k + 1;
            if let Some(row) = self.rows.get(&k) {
                let c = c.clone();
                axpy(&mut work, &-&c, &row.vec);
                axpy(&mut acc, &c, &row.tag);
            }
        }
        (work.into_iter().collect(), acc.into_iter().collect())
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).0.is_empty()
    }

    pub fn insert(&mut self, v: &[(usize, Scalar)], tag: Option<SparseVec>) -> Insert {
        let (rem, acc) = self.reduce(v);
        let mut tag_map = to_map(&tag.unwrap_or_default());
        axpy(&mut tag_map, &self.field.from_i64(-1), &acc);
        if rem.is_empty() {
            return Insert::Dependent(tag_map.into_iter().collect());
        }
        let pivot = rem[0].0;
        let inv = rem[0].1.inv().expect("nonzero pivot");
        let vec = rem.iter().map(|(i, c)| (*i, c * &inv)).collect();
        let tag = tag_map.into_iter().map(|(i, c)| (i, &c * &inv)).collect();
        self.rows.insert(pivot, Row { vec, tag });
        Insert::Pivot(pivot)
    }
}

/// `Z / B` for subspaces `B ⊆ Z` of a common ambient space, with
/// representatives chosen greedily from the given spanning set of `Z`.
#[derive(Debug, Clone)]
pub struct Subquotient {
    echelon: Echelon,
    reps: Vec<SparseVec>,
}

impl Subquotient {
    pub fn new(field: Field, boundaries: &[SparseVec], cycles: &[SparseVec]) -> Self {
        let mut echelon = Echelon::new(field);
        for b in boundaries {
            echelon.insert(b, None);
        }
        let mut reps = vec![];
        for z in cycles {
            let tag = vec![(reps.len(), field.one())];
            if let Insert::Pivot(_) = echelon.insert(z, Some(tag)) {
                reps.push(z.clone());
            }
        }
        Self { echelon, reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Coordinates of the class of `z` in the representative basis; fails
    /// if `z` is not in `Z`.
    pub fn coords(&self, z: &[(usize, Scalar)]) -> Result<SparseVec> {
        let (rem, acc) = self.echelon.reduce(z);
        if !rem.is_empty() {
            return Err(Error::Internal("vector is not a cycle".into()));
        }
        Ok(acc)
    }

    /// Matrix of the map induced by `f` from `self` to `target`.
    pub fn induced(&self, f: &Matrix, target: &Subquotient) -> Result<Matrix> {
        let cols = self
            .reps
            .iter()
            .map(|z| target.coords(&f.apply(z)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(target.dim(), f.field(), cols))
    }
}

/// Homology at the middle of `A --f--> B --g--> C`: `ker g / im f`.
pub fn homology(f: &Matrix, g: &Matrix) -> Result<Subquotient> {
    if f.nrows() != g.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "incoming map has {} rows, outgoing map {} columns",
            f.nrows(),
            g.ncols()
        )));
    }
    Ok(Subquotient::new(f.field(), f.columns(), &g.kernel()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    /// Dense Gaussian elimination over ℚ, independent of the sparse code.
    fn dense_rank(rows: &[Vec<i64>]) -> usize {
        use num_rational::BigRational;
        use num_traits::Zero;
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let (n, k) = (m.len(), m.first().map_or(0, |r| r.len()));
        let mut rank = 0;
        for col in 0..k {
            let Some(p) = (rank..n).find(|&i| !m[i][col].is_zero()) else { continue };
            m.swap(rank, p);
            for i in 0..n {
                if i != rank && !m[i][col].is_zero() {
                    let f = &m[i][col] / &m[rank][col];
                    for c in 0..k {
                        let sub = &f * &m[rank][c];
                        m[i][c] = &m[i][c] - &sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_ranks() {
        let a = Matrix::from_rows_i64(Q, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(a.rank(), 1);
        assert_eq!(a.kernel().len(), 1);
        let k = &a.kernel()[0];
        assert!(a.apply(k).is_empty());
        assert_eq!(Matrix::identity(3, Q).rank(), 3);
        assert_eq!(Matrix::zeros(2, 3, Q).rank(), 0);
        // rank 1 over F_2, rank 2 over Q
        let b = Matrix::from_rows_i64(Field::Prime(2), &[vec![1, 1], vec![1, -1]]);
        assert_eq!(b.rank(), 1);
        assert_eq!(Matrix::from_rows_i64(Q, &[vec![1, 1], vec![1, -1]]).rank(), 2);
    }

    #[test]
    fn subquotient_basics() {
        // 0 → ℚ --(1,0)--> ℚ² --(0 1)--> ℚ → 0: homology at ℚ² is zero
        let f = Matrix::from_rows_i64(Q, &[vec![1], vec![0]]);
        let g = Matrix::from_rows_i64(Q, &[vec![0, 1]]);
        assert_eq!(homology(&f, &g).unwrap().dim(), 0);
        let zero_in = Matrix::zeros(2, 0, Q);
        let h = homology(&zero_in, &g).unwrap();
        assert_eq!(h.dim(), 1);
        assert!(h.coords(&[(1, Q.one())]).is_err());
        assert_eq!(h.coords(&[(0, Q.from_i64(3))]).unwrap(), vec![(0, Q.from_i64(3))]);
    }

    #[test]
    fn blocks() {
        let id = Matrix::identity(2, Q);
        let neg = id.scale(&Q.from_i64(-1));
        let m = Matrix::from_blocks(&[2, 2], &[2], Q, &[(0, 0, &id), (1, 0, &neg)]).unwrap();
        assert_eq!(m.nrows(), 4);
        assert_eq!(m.get(3, 1), Q.from_i64(-1));
        assert!(Matrix::from_blocks(&[3], &[2], Q, &[(0, 0, &id)]).is_err());
    }

    proptest! {
        #[test]
        fn rank_matches_dense(rows in proptest::collection::vec(proptest::collection::vec(-2i64..3, 5), 1..6)) {
            let m = Matrix::from_rows_i64(Q, &rows);
            prop_assert_eq!(m.rank(), dense_rank(&rows));
            let ker = m.kernel();
            prop_assert_eq!(ker.len() + m.rank(), m.ncols());
            for v in &ker {
                prop_assert!(m.apply(v).is_empty());
            }
        }
    }
}
