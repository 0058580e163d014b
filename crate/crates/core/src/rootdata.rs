//! Cartan data, roots and the Weyl-group action, plus the link-level
//! combinatorics read off a braid word (underlying permutation, number of
//! components, and the signed root multiset `V_I` of the limiting object).
//!
//! Type-A roots live in `ℤ^r` with `α_i = e_i − e_{i+1}`; general Cartan
//! matrices use coordinates in the simple-root basis.

use std::fmt;

use crate::braidword::BraidWord;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CartanKind {
    TypeA,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanDatum {
    rank: usize,
    matrix: Vec<Vec<i64>>,
    kind: CartanKind,
}

/// Order of `s_i s_j` in the Weyl group; `None` encodes `m_ij = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BraidExponent(pub Option<usize>);

impl BraidExponent {
    pub fn finite(&self) -> Option<usize> {
        self.0
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_none()
    }
}

impl fmt::Display for BraidExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(m) => write!(f, "{m}"),
            None => write!(f, "∞"),
        }
    }
}

impl CartanDatum {
    /// The datum of `SU(r)`: rank `r`, semisimple rank `r − 1`.
    pub fn type_a(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidDatum("type A needs r ≥ 1".into()));
        }
        let rs = r - 1;
        let matrix = (0..rs)
            .map(|i| {
                (0..rs)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        Ok(Self { rank: r, matrix, kind: CartanKind::TypeA })
    }

    /// A general (symmetrizable, finite or not) Cartan matrix of a torus of
    /// rank `rank ≥ r_s`. Only the combinatorial layer supports these.
    pub fn from_matrix(rank: usize, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let rs = matrix.len();
        if rank == 0 || rs > rank {
            return Err(Error::InvalidDatum(format!(
                "semisimple rank {rs} exceeds rank {rank}"
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != rs {
                return Err(Error::InvalidDatum("matrix is not square".into()));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(Error::InvalidDatum(format!("a_{i}{i} = {a} ≠ 2")));
                }
                if i != j {
                    if a > 0 {
                        return Err(Error::InvalidDatum(format!("a_{i}{j} = {a} > 0")));
                    }
                    if (a == 0) != (matrix[j][i] == 0) {
                        return Err(Error::InvalidDatum(format!(
                            "a_{i}{j} and a_{j}{i} must vanish together"
                        )));
                    }
                }
            }
        }
        let candidate = Self::type_a(rs + 1)?;
        let kind = if rank == rs + 1 && candidate.matrix == matrix {
            CartanKind::TypeA
        } else {
            CartanKind::General
        };
        Ok(Self { rank, matrix, kind })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn kind(&self) -> CartanKind {
        self.kind
    }

    pub fn is_type_a(&self) -> bool {
        self.kind == CartanKind::TypeA
    }

    /// Length of root vectors: `r` for type A, `r_s` otherwise.
    pub fn root_dim(&self) -> usize {
        match self.kind {
            CartanKind::TypeA => self.rank,
            CartanKind::General => self.semisimple_rank(),
        }
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.semisimple_rank() {
            Err(Error::IndexOutOfRange { index: i, max: self.semisimple_rank() })
        } else {
            Ok(())
        }
    }

    pub fn braid_exponent(&self, i: usize, j: usize) -> Result<BraidExponent> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::InvalidDatum(format!("no braid relation between {i} and itself")));
        }
        let p = self.matrix[i - 1][j - 1] * self.matrix[j - 1][i - 1];
        Ok(BraidExponent(match p {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }))
    }

    pub fn simple_root(&self, i: usize) -> Result<RootVector> {
        self.check_index(i)?;
        let mut coords = vec![0; self.root_dim()];
        match self.kind {
            CartanKind::TypeA => {
                coords[i - 1] = 1;
                coords[i] = -1;
            }
            CartanKind::General => coords[i - 1] = 1,
        }
        Ok(RootVector { coords })
    }

    /// The simple reflection `s_i`.
    pub fn reflect(&self, i: usize, v: &RootVector) -> Result<RootVector> {
        self.check_index(i)?;
        if v.coords.len() != self.root_dim() {
            return Err(Error::DimensionMismatch(format!(
                "root vector of length {} for datum with root dimension {}",
                v.coords.len(),
                self.root_dim()
            )));
        }
        let mut out = v.clone();
        match self.kind {
            CartanKind::TypeA => out.coords.swap(i - 1, i),
            CartanKind::General => {
                // s_i(v) = v − ⟨α_i^∨, v⟩ α_i
                let pairing: i64 =
                    (0..self.semisimple_rank()).map(|j| self.matrix[i - 1][j] * v.coords[j]).sum();
                out.coords[i - 1] -= pairing;
            }
        }
        Ok(out)
    }

    /// `(s_{w_1} ∘ ⋯ ∘ s_{w_n})(v)`: the word is read as a product of
    /// reflections, so the last letter acts first.
    pub fn weyl_apply(&self, word: &[usize], v: &RootVector) -> Result<RootVector> {
        let mut out = v.clone();
        for &i in word.iter().rev() {
            out = self.reflect(i, &out)?;
        }
        Ok(out)
    }

    /// Signed roots `(ε_j, w_{I_{j−1}}(α_{i_j}))` and the virtual real
    /// dimension `2 Σ ε_j`.
    pub fn v_representation(&self, w: &BraidWord) -> Result<(Vec<(i8, RootVector)>, i64)> {
        let mut prefix: Vec<usize> = Vec::with_capacity(w.len());
        let mut roots = Vec::with_capacity(w.len());
        let mut dim = 0i64;
        for l in w.letters() {
            let alpha = self.simple_root(l.index)?;
            roots.push((l.sign, self.weyl_apply(&prefix, &alpha)?));
            dim += 2 * l.sign as i64;
            prefix.push(l.index);
        }
        Ok((roots, dim))
    }

    pub fn permutation_and_components(&self, w: &BraidWord) -> Result<(Permutation, usize)> {
        if !self.is_type_a() {
            return Err(Error::InvalidDatum(
                "component counts are defined for type-A data only".into(),
            ));
        }
        let mut p = Permutation::identity(self.rank);
        for l in w.letters() {
            self.check_index(l.index)?;
            p = p.compose(&Permutation::transposition(self.rank, l.index));
        }
        let c = p.cycle_count();
        Ok((p, c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector {
    pub coords: Vec<i64>,
}

impl RootVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn zero(n: usize) -> Self {
        Self { coords: vec![0; n] }
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.coords.len(), other.coords.len());
        Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A bijection of `{1..r}`, stored 0-based: `images[k]` is the image of `k+1`, minus one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(r: usize) -> Self {
        Self { images: (0..r).collect() }
    }

    /// From 1-based images.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidDatum(format!("{images:?} is not a permutation")));
            }
            seen[x - 1] = true;
        }
        Ok(Self { images: images.iter().map(|x| x - 1).collect() })
    }

    /// The transposition `(i i+1)`, 1-based.
    pub fn transposition(r: usize, i: usize) -> Self {
        let mut p = Self::identity(r);
        p.images.swap(i - 1, i);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// 1-based image of the 1-based point `k`.
    pub fn image(&self, k: usize) -> usize {
        self.images[k - 1] + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self { images: other.images.iter().map(|&k| self.images[k]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (k, &x) in self.images.iter().enumerate() {
            inv[x] = k;
        }
        Self { images: inv }
    }

    /// Cycles as sorted lists of 1-based points, ordered by least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = vec![];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![];
            let mut k = s;
            while !seen[k] {
                seen[k] = true;
                cyc.push(k + 1);
                k = self.images[k];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Number of inversions (Coxeter length in type A).
    pub fn length(&self) -> usize {
        let n = self.len();
        let mut l = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.images[a] > self.images[b] {
                    l += 1;
                }
            }
        }
        l
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
