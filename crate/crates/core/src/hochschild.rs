//! Hochschild homology of Bott-Samelson bimodules through the Koszul
//! resolution of `R` as an `R`-bimodule.
//!
//! `K_j(M)_d = ⊕_{|S| = j} θ_S ⊗ M_{d − 2j}` with
//! `∂(θ_S ⊗ m) = Σ_k (−1)^k θ_{S ∖ s_k} ⊗ (x_{s_k} m − m x_{s_k})`,
//! where `s_0 < s_1 < …` enumerate `S`. Each `θ` has internal degree 2, so
//! the differential preserves internal degree.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{homology, Matrix, Subquotient};
use crate::polyalg::Field;
use crate::soergel::{BSShape, BimoduleMap};
use crate::{Error, Result};

/// Internal degree carried by each odd generator.
pub const THETA_DEGREE: i64 = 2;

/// One summand `θ_S ⊗ M_{d − 2|S|}` of a Koszul chain group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulSlot {
    pub shape: BSShape,
    pub subset: Vec<usize>,
    pub degree: i64,
}

impl KoszulSlot {
    pub fn hochschild_degree(&self) -> usize {
        self.subset.len()
    }

    pub fn module_degree(&self) -> i64 {
        self.degree - THETA_DEGREE * self.subset.len() as i64
    }
}

/// `j`-element subsets of `{1, …, r}` in lexicographic order.
pub fn subsets(r: usize, j: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, r: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for m in start..=r {
            if r - m + 1 < j - cur.len() {
                break;
            }
            cur.push(m);
            go(m + 1, r, j, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    if j <= r {
        go(1, r, j, &mut vec![], &mut out);
    }
    out
}

/// Koszul complex of one bimodule, with the commutator maps cached.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    shape: BSShape,
    field: Field,
    commutators: Vec<BimoduleMap>,
}

impl KoszulComplex {
    pub fn new(shape: &BSShape, field: Field) -> Result<Self> {
        let commutators = (1..=shape.strands())
            .map(|m| {
                let l = BimoduleMap::left_mult(shape, m, field)?;
                let r = BimoduleMap::right_mult(shape, m, field)?;
                l.checked_add(&r.scale(&field.from_i64(-1)))
            })
            .collect::<Result<_>>()?;
        Ok(Self { shape: shape.clone(), field, commutators })
    }

    pub fn shape(&self) -> &BSShape {
        &self.shape
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn strands(&self) -> usize {
        self.shape.strands()
    }

    fn module_degree(j: usize, d: i64) -> i64 {
        d - THETA_DEGREE * j as i64
    }

    pub fn slots(&self, j: usize, d: i64) -> Vec<KoszulSlot> {
        subsets(self.strands(), j)
            .into_iter()
            .map(|subset| KoszulSlot { shape: self.shape.clone(), subset, degree: d })
            .collect()
    }

    pub fn chain_dim(&self, j: usize, d: i64) -> usize {
        subsets(self.strands(), j).len() * self.shape.dim(Self::module_degree(j, d))
    }

    /// Matrix from the slot `θ_S` in degree `d` to the stacked slots
    /// `θ_{S ∖ s_0}, θ_{S ∖ s_1}, …`.
    pub fn koszul_matrix(&self, subset: &[usize], d: i64) -> Result<Matrix> {
        let j = subset.len();
        let src = self.shape.piece(Self::module_degree(j, d));
        if j == 0 {
            return Ok(Matrix::zeros(0, src.len(), self.field));
        }
        let tgt = self.shape.piece(Self::module_degree(j - 1, d));
        let mut blocks = vec![];
        for (k, &m) in subset.iter().enumerate() {
            let mut b = self.commutator(m)?.matrix_between(&src, &tgt, Self::module_degree(j, d))?;
            if k % 2 == 1 {
                b = b.scale(&self.field.from_i64(-1));
            }
            blocks.push(b);
        }
        let refs: Vec<(usize, usize, &Matrix)> = blocks.iter().enumerate().map(|(k, b)| (k, 0, b)).collect();
        Matrix::from_blocks(&vec![tgt.len(); j], &[src.len()], self.field, &refs)
    }

    fn commutator(&self, m: usize) -> Result<&BimoduleMap> {
        self.commutators
            .get(m.wrapping_sub(1))
            .ok_or_else(|| Error::OutOfRange(format!("generator {m} on {} strands", self.strands())))
    }

    /// `∂ : K_j(d) → K_{j−1}(d)`; for `j = 0` the map to the zero space.
    pub fn differential(&self, j: usize, d: i64) -> Result<Matrix> {
        let src = self.shape.piece(Self::module_degree(j, d));
        let src_sets = subsets(self.strands(), j);
        if j == 0 || j > self.strands() {
            let rows = if j == 0 { 0 } else { self.chain_dim(j - 1, d) };
            return Ok(Matrix::zeros(rows, src_sets.len() * src.len(), self.field));
        }
        let tgt = self.shape.piece(Self::module_degree(j - 1, d));
        let tgt_sets = subsets(self.strands(), j - 1);
        let index: BTreeMap<&[usize], usize> =
            tgt_sets.iter().enumerate().map(|(k, s)| (s.as_slice(), k)).collect();
        let mats: Vec<Matrix> = (1..=self.strands())
            .map(|m| self.commutator(m)?.matrix_between(&src, &tgt, Self::module_degree(j, d)))
            .collect::<Result<_>>()?;
        let mut blocks = vec![];
        for (col, s) in src_sets.iter().enumerate() {
            for (k, &m) in s.iter().enumerate() {
                let mut rest = s.clone();
                rest.remove(k);
                let row = index[rest.as_slice()];
                let b = if k % 2 == 1 { mats[m - 1].scale(&self.field.from_i64(-1)) } else { mats[m - 1].clone() };
                blocks.push((row, col, b));
            }
        }
        let refs: Vec<(usize, usize, &Matrix)> = blocks.iter().map(|(a, b, m)| (*a, *b, m)).collect();
        Matrix::from_blocks(&vec![tgt.len(); tgt_sets.len()], &vec![src.len(); src_sets.len()], self.field, &refs)
    }

    /// `HH_j` in internal degree `d` with chosen representatives.
    pub fn homology(&self, j: usize, d: i64) -> Result<Subquotient> {
        homology(&self.differential(j + 1, d)?, &self.differential(j, d)?)
    }

    pub fn hh_dim(&self, j: usize, d: i64) -> Result<usize> {
        let (inc, out) = (self.differential(j + 1, d)?, self.differential(j, d)?);
        Ok(out.ncols() - out.rank() - inc.rank())
    }

    /// Lowest internal degree with a nonzero chain group.
    pub fn min_degree(&self) -> i64 {
        self.shape.internal_shift()
    }
}

/// Dimensions of `HH_j(shape)_d` for `d ≤ cutoff`; zero entries omitted.
pub fn hh_dims(shape: &BSShape, cutoff: i64, field: Field) -> Result<BTreeMap<(usize, i64), usize>> {
    let kc = KoszulComplex::new(shape, field)?;
    let tasks: Vec<(usize, i64)> = (0..=shape.strands())
        .flat_map(|j| {
            (kc.min_degree()..=cutoff)
                .filter(|d| d.rem_euclid(2) == 0)
                .map(move |d| (j, d))
        })
        .collect();
    let dims = tasks
        .par_iter()
        .map(|&(j, d)| kc.hh_dim(j, d).map(|n| ((j, d), n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(dims.into_iter().filter(|&(_, n)| n > 0).collect())
}

/// Chain map `K_j(source)_d → K_j(target)_{d + deg}` induced by a bimodule
/// map, block diagonal over the `θ_S`.
pub fn chain_map(map: &BimoduleMap, j: usize, d: i64) -> Result<Matrix> {
    let r = map.source().strands();
    let dm = d - THETA_DEGREE * j as i64;
    let src = map.source().piece(dm);
    let tgt = map.target().piece(dm + map.degree());
    let block = map.matrix_between(&src, &tgt, dm)?;
    let n = subsets(r, j).len();
    let refs: Vec<(usize, usize, &Matrix)> = (0..n).map(|k| (k, k, &block)).collect();
    Matrix::from_blocks(&vec![tgt.len(); n], &vec![src.len(); n], map.field(), &refs)
}

/// Matrix of the map induced on `HH_j` between the given representative
/// systems.
pub fn induced_map(
    map: &BimoduleMap,
    j: usize,
    d: i64,
    source_hh: &Subquotient,
    target_hh: &Subquotient,
) -> Result<Matrix> {
    source_hh.induced(&chain_map(map, j, d)?, target_hh)
}

/// Sparse `(t, j, d) ↦ dim` table; zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TriGradedDims {
    entries: BTreeMap<(i64, usize, i64), usize>,
}

impl TriGradedDims {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, t: i64, j: usize, d: i64) -> usize {
        self.entries.get(&(t, j, d)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, t: i64, j: usize, d: i64, dim: usize) {
        if dim == 0 {
            self.entries.remove(&(t, j, d));
        } else {
            self.entries.insert((t, j, d), dim);
        }
    }

    pub fn add(&mut self, t: i64, j: usize, d: i64, dim: usize) {
        let cur = self.get(t, j, d);
        self.set(t, j, d, cur + dim);
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, usize, i64), usize)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    /// `(t, j, d) ↦ (t + dt, j, d + dd)`.
    pub fn shifted(&self, dt: i64, dd: i64) -> Self {
        Self { entries: self.entries.iter().map(|(&(t, j, d), &n)| ((t + dt, j, d + dd), n)).collect() }
    }

    /// Entries with internal degree at most `d_max`.
    pub fn truncated(&self, d_max: i64) -> Self {
        Self { entries: self.entries.iter().filter(|(k, _)| k.2 <= d_max).map(|(&k, &v)| (k, v)).collect() }
    }

    /// Entries on which `self` and `other` disagree: `(key, self, other)`.
    pub fn diff(&self, other: &Self) -> Vec<((i64, usize, i64), usize, usize)> {
        let mut keys: Vec<_> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|k| {
                let (a, b) = (self.get(k.0, k.1, k.2), other.get(k.0, k.1, k.2));
                (a != b).then_some((k, a, b))
            })
            .collect()
    }

    pub fn rows(&self) -> Vec<[i64; 4]> {
        self.iter().map(|((t, j, d), n)| [t, j as i64, d, n as i64]).collect()
    }
}

impl fmt::Display for TriGradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4} {:>3} {:>4} {:>6}", "t", "j", "d", "dim")?;
        for ((t, j, d), n) in self.iter() {
            writeln!(f, "{t:>4} {j:>3} {d:>4} {n:>6}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Poly;
    use crate::soergel::BSElement;

    const Q: Field = Field::Rational;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn dim_r(r: usize, d: i64) -> usize {
        if d < 0 || d % 2 != 0 {
            0
        } else {
            binom(d as usize / 2 + r - 1, r - 1)
        }
    }

    #[test]
    fn subset_order() {
        assert_eq!(subsets(3, 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn koszul_examples() {
        let r1 = KoszulComplex::new(&BSShape::ring(1), Q).unwrap();
        for d in [2, 4, 6] {
            assert!(r1.koszul_matrix(&[1], d).unwrap().is_zero());
        }
        let b1 = KoszulComplex::new(&BSShape::new(2, vec![1], 0).unwrap(), Q).unwrap();
        // θ_1 ⊗ 1 sits in internal degree 2
        let m = b1.koszul_matrix(&[1], 2).unwrap();
        assert_eq!(m.ncols(), 1);
        assert_eq!(m.rank(), 1);
        assert!(b1.koszul_matrix(&[], 4).unwrap().is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        let shapes = [
            BSShape::ring(3),
            BSShape::new(2, vec![1, 1], 0).unwrap(),
            BSShape::new(3, vec![1, 2], -2).unwrap(),
            BSShape::new(3, vec![2, 1, 2], 0).unwrap(),
        ];
        for s in shapes {
            let kc = KoszulComplex::new(&s, Q).unwrap();
            for j in 2..=s.strands() {
                for d in (-2..=10).step_by(2) {
                    let dd = kc.differential(j - 1, d).unwrap().compose(&kc.differential(j, d).unwrap()).unwrap();
                    assert!(dd.is_zero(), "{s} j={j} d={d}");
                }
            }
        }
    }

    #[test]
    fn ring_closed_form() {
        for r in 1..=3 {
            let dims = hh_dims(&BSShape::ring(r), 12, Q).unwrap();
            for j in 0..=r {
                for d in (0..=12).step_by(2) {
                    let expect = binom(r, j) * dim_r(r, d - 2 * j as i64);
                    assert_eq!(dims.get(&(j, d)).copied().unwrap_or(0), expect, "r={r} j={j} d={d}");
                }
            }
        }
    }

    /// Dense rank over ℚ by fraction-free elimination on i128.
    fn dense_rank(mut rows: Vec<Vec<i128>>) -> usize {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i][c] != 0 {
                    let (a, b) = (rows[rank][c], rows[i][c]);
                    for k in 0..ncols {
                        rows[i][k] = rows[i][k] * a - rows[rank][k] * b;
                    }
                    let g = rows[i].iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                    if g > 1 {
                        rows[i].iter_mut().for_each(|x| *x /= g);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Builds the Koszul differential of `B_1` by raw polynomial arithmetic
    /// and dense elimination.
    fn brute_hh(shape: &BSShape, j: usize, d: i64) -> usize {
        let r = shape.strands();
        let sp = shape.raw_space();
        let q = shape.wall_count();
        let dense = |jj: usize| -> Vec<Vec<i128>> {
            if jj == 0 || jj > r {
                return vec![];
            }
            let src = shape.piece(d - 2 * jj as i64);
            let tgt = shape.piece(d - 2 * (jj as i64 - 1));
            let tsets = subsets(r, jj - 1);
            let mut cols = vec![];
            for s in subsets(r, jj) {
                for (mask, m) in src.entries() {
                    let mut col = vec![0i128; tsets.len() * tgt.len()];
                    let emb: Vec<usize> = (1..=r).map(|p| sp.var(0, p)).collect();
                    let b = &Poly::monomial(shape.ring_space(), m.clone(), Q.one()).embed(sp, &emb)
                        * &shape.basis_poly(*mask, Q);
                    for (k, &x) in s.iter().enumerate() {
                        let comm = &(&Poly::var(sp, Q, 0, x) * &b) - &(&b * &Poly::var(sp, Q, q, x));
                        let nf = shape.normal_form(&comm).unwrap();
                        let mut rest = s.clone();
                        rest.remove(k);
                        let block = tsets.iter().position(|t| *t == rest).unwrap();
                        for (i, c) in tgt.vector_of(&nf).unwrap() {
                            let v: i128 = c.to_integer().unwrap().try_into().unwrap();
                            col[block * tgt.len() + i] += if k % 2 == 0 { v } else { -v };
                        }
                    }
                    cols.push(col);
                }
            }
            cols
        };
        let chain = binom(r, j) * shape.dim(d - 2 * j as i64);
        chain - dense_rank(dense(j)) - dense_rank(dense(j + 1))
    }

    #[test]
    fn b1_against_dense_oracle() {
        for shape in [BSShape::new(2, vec![1], 0).unwrap(), BSShape::new(2, vec![1, 1], 0).unwrap()] {
            let dims = hh_dims(&shape, 6, Q).unwrap();
            for j in 0..=2 {
                for d in (0..=6).step_by(2) {
                    assert_eq!(dims.get(&(j, d)).copied().unwrap_or(0), brute_hh(&shape, j, d), "{shape} j={j} d={d}");
                }
            }
        }
    }

    #[test]
    fn hh0_is_coinvariants() {
        for shape in [BSShape::new(2, vec![1], 0).unwrap(), BSShape::new(3, vec![1, 2], 0).unwrap(), BSShape::new(3, vec![2, 2], 0).unwrap()] {
            let kc = KoszulComplex::new(&shape, Q).unwrap();
            for d in (0..=6).step_by(2) {
                let target = shape.piece(d);
                let mut cols = vec![];
                for (mask, m) in shape.piece(d - 2).entries().iter().cloned() {
                    let mut e = BSElement::zero(&shape, Q);
                    let mono = Poly::monomial(shape.ring_space(), m, Q.one());
                    e = e.checked_add(&BSElement::basis(&shape, mask, Q).left_scale(&mono)).unwrap();
                    for x in 1..=shape.strands() {
                        let c = e.left_mult(x).unwrap().checked_sub(&e.right_mult(x).unwrap()).unwrap();
                        cols.push(target.vector_of(&c).unwrap());
                    }
                }
                let quotient = target.len() - Matrix::from_columns(target.len(), Q, cols).rank();
                assert_eq!(kc.hh_dim(0, d).unwrap(), quotient);
            }
        }
    }

    #[test]
    fn induced_maps() {
        let b1 = BSShape::new(2, vec![1], 0).unwrap();
        let merge = BimoduleMap::merge_wall(&b1, 1, Q).unwrap();
        let (ks, kt) = (KoszulComplex::new(&b1, Q).unwrap(), KoszulComplex::new(merge.target(), Q).unwrap());
        let (hs, ht) = (ks.homology(0, 0).unwrap(), kt.homology(0, 0).unwrap());
        let m = induced_map(&merge, 0, 0, &hs, &ht).unwrap();
        assert_eq!(m.rank(), 1);

        let id = BimoduleMap::identity(&b1, Q);
        let zero = BimoduleMap::zero(&b1, &b1, 0, Q);
        for j in 0..=2 {
            for d in (0..=6).step_by(2) {
                let h = ks.homology(j, d).unwrap();
                assert_eq!(induced_map(&id, j, d, &h, &h).unwrap(), Matrix::identity(h.dim(), Q));
                assert!(induced_map(&zero, j, d, &h, &h).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn functoriality() {
        let r = BSShape::ring(3);
        let ins = BimoduleMap::insert_wall(&r, 1, 2, Q).unwrap();
        let merge = BimoduleMap::merge_wall(ins.target(), 1, Q).unwrap();
        let comp = ins.then(&merge).unwrap();
        let k0 = KoszulComplex::new(&r, Q).unwrap();
        let k1 = KoszulComplex::new(ins.target(), Q).unwrap();
        for j in 0..=3 {
            for d in (0..=8).step_by(2) {
                let h0 = k0.homology(j, d).unwrap();
                let h1 = k1.homology(j, d).unwrap();
                let h2 = k0.homology(j, d + 2).unwrap();
                let a = induced_map(&ins, j, d, &h0, &h1).unwrap();
                let b = induced_map(&merge, j, d, &h1, &h2).unwrap();
                let c = induced_map(&comp, j, d, &h0, &h2).unwrap();
                assert_eq!(b.compose(&a).unwrap(), c, "j={j} d={d}");
            }
        }
    }

    #[test]
    fn tri_graded_dims_basics() {
        let mut t = TriGradedDims::new();
        t.set(0, 1, 2, 3);
        t.set(0, 1, 4, 0);
        t.add(0, 1, 2, 1);
        assert_eq!(t.get(0, 1, 2), 4);
        assert_eq!(t.len(), 1);
        let s = t.shifted(1, -2);
        assert_eq!(s.get(1, 1, 0), 4);
        assert_eq!(t.diff(&s).len(), 2);
        assert_eq!(t.rows(), vec![[0, 1, 2, 4]]);
    }
}
