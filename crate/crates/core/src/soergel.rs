//! Bott-Samelson bimodules in alphabet normal form.
//!
//! `BS(i_1, …, i_q)` is presented as a quotient of the polynomial ring in
//! alphabets `x^{(0)}, …, x^{(q)}` (each with `r` variables), wall `t`
//! (generator `i = i_t`) identifying alphabets `t − 1` and `t` up to the
//! reflection `s_i`:
//!
//! ```text
//! x^{(t)}_m     = x^{(t−1)}_m                          m ∉ {i, i+1}
//! x^{(t)}_{i+1} = x^{(t−1)}_i + x^{(t−1)}_{i+1} − x^{(t)}_i
//! (x^{(t)}_i)²  = (x^{(t−1)}_i + x^{(t−1)}_{i+1}) x^{(t)}_i − x^{(t−1)}_i x^{(t−1)}_{i+1}
//! ```
//!
//! Rewriting walls from the right reduces every element to a combination of
//! the `2^q` square-free monomials `∏_{t∈S} x^{(t)}_{i_t}` with coefficients
//! in `R = ℚ[x^{(0)}]`. Elements are stored in those left coordinates.
//!
//! The left action multiplies by `x^{(0)}`, the right action by `x^{(q)}`.
//! Maps are left-linear and stored by their values on the free basis.
//!
//! `internal_shift` is pure degree bookkeeping: an element of polynomial
//! degree `p` sits in internal degree `p + internal_shift`.

use std::collections::HashMap;
use std::fmt;

use crate::linalg::{Matrix, SparseVec};
use crate::polyalg::{monomials_of_weight, Field, Mono, Poly, Scalar, VarSpace};
use crate::{Error, Result};

pub const MAX_INTERNAL_DEGREE: i64 = 96;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BSShape {
    strands: usize,
    walls: Vec<usize>,
    internal_shift: i64,
}

impl BSShape {
    pub fn new(strands: usize, walls: Vec<usize>, internal_shift: i64) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidDatum("shape with no strands".into()));
        }
        for &i in &walls {
            if i == 0 || i >= strands {
                return Err(Error::IndexOutOfRange { index: i, max: strands - 1 });
            }
        }
        if internal_shift % 2 != 0 {
            return Err(Error::Degree(format!("odd internal shift {internal_shift}")));
        }
        Ok(Self { strands, walls, internal_shift })
    }

    /// The regular bimodule `R`.
    pub fn ring(strands: usize) -> Self {
        Self { strands, walls: vec![], internal_shift: 0 }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn walls(&self) -> &[usize] {
        &self.walls
    }

    pub fn internal_shift(&self) -> i64 {
        self.internal_shift
    }

    pub fn with_shift(&self, internal_shift: i64) -> Self {
        Self { internal_shift, ..self.clone() }
    }

    pub fn wall_count(&self) -> usize {
        self.walls.len()
    }

    pub fn basis_size(&self) -> usize {
        1 << self.walls.len()
    }

    /// Variables of the unreduced presentation.
    pub fn raw_space(&self) -> VarSpace {
        VarSpace::new(self.walls.len() + 1, self.strands)
    }

    pub fn ring_space(&self) -> VarSpace {
        VarSpace::single(self.strands)
    }

    /// `∏_{t ∈ mask} x^{(t)}_{i_t}`, bit `t − 1` standing for wall `t`.
    pub fn basis_poly(&self, mask: usize, field: Field) -> Poly {
        let space = self.raw_space();
        let mut m = vec![0u16; space.nvars()];
        for (k, &i) in self.walls.iter().enumerate() {
            if mask >> k & 1 == 1 {
                m[space.var(k + 1, i)] = 1;
            }
        }
        Poly::monomial(space, m, field.one())
    }

    /// Dimension of the internal-degree-`d` piece.
    pub fn dim(&self, d: i64) -> usize {
        self.piece_weights(d).iter().map(|&(_, w)| binom(w + self.strands - 1, self.strands - 1)).sum()
    }

    /// `(mask, weight of the R-coefficient)` pairs present in degree `d`.
    fn piece_weights(&self, d: i64) -> Vec<(usize, usize)> {
        let p = d - self.internal_shift;
        if p < 0 || p % 2 != 0 {
            return vec![];
        }
        let w = (p / 2) as usize;
        (0..self.basis_size())
            .filter_map(|mask| {
                let bw = (mask as u64).count_ones() as usize;
                (w >= bw).then(|| (mask, w - bw))
            })
            .collect()
    }

    pub fn piece(&self, d: i64) -> GradedPiece {
        let mut entries = vec![];
        for (mask, w) in self.piece_weights(d) {
            for m in monomials_of_weight(self.strands, w) {
                entries.push((mask, m));
            }
        }
        GradedPiece::new(entries)
    }

    /// Rewrites a polynomial in the alphabets of this shape into normal form.
    pub fn normal_form(&self, p: &Poly) -> Result<BSElement> {
        if p.space() != self.raw_space() {
            return Err(Error::ForeignVariable(format!(
                "polynomial over {:?}, shape expects {:?}",
                p.space(),
                self.raw_space()
            )));
        }
        let field = p.field();
        let space = self.raw_space();
        let mut cur = p.clone();
        for t in (1..=self.walls.len()).rev() {
            cur = reduce_wall(&cur, space, t, self.walls[t - 1]);
        }
        let rs = self.ring_space();
        let mut coords = vec![Poly::zero(rs, field); self.basis_size()];
        for (m, c) in cur.into_terms() {
            let mut mask = 0usize;
            for (k, &i) in self.walls.iter().enumerate() {
                for pos in 1..=self.strands {
                    let e = m[space.var(k + 1, pos)];
                    if e == 0 {
                        continue;
                    }
                    if pos != i || e > 1 {
                        return Err(Error::Internal(format!("wall {} not reduced", k + 1)));
                    }
                    mask |= 1 << k;
                }
            }
            coords[mask].add_term(m[..self.strands].to_vec(), c);
        }
        Ok(BSElement { shape: self.clone(), coords })
    }
}

impl fmt::Display for BSShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.walls.is_empty() {
            write!(f, "R")?;
        } else {
            let w: Vec<String> = self.walls.iter().map(|i| i.to_string()).collect();
            write!(f, "B[{}]", w.join(","))?;
        }
        if self.internal_shift != 0 {
            write!(f, "<{}>", self.internal_shift)?;
        }
        Ok(())
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// One pass of wall-`t` rewriting until no reducible variable of alphabet `t` remains.
fn reduce_wall(p: &Poly, space: VarSpace, t: usize, i: usize) -> Poly {
    let field = p.field();
    let one = field.one();
    let minus = field.from_i64(-1);
    let (yi, yj) = (space.var(t, i), space.var(t, i + 1));
    let (xi, xj) = (space.var(t - 1, i), space.var(t - 1, i + 1));
    let mut cur = p.clone();
    loop {
        let mut changed = false;
        let mut out = Poly::zero(space, field);
        for (m, c) in cur.terms() {
            // variables of alphabet t off the reflected pair
            if let Some(pos) =
                (1..=space.strands).find(|&pos| pos != i && pos != i + 1 && m[space.var(t, pos)] > 0)
            {
                let mut n = m.clone();
                let e = n[space.var(t, pos)];
                n[space.var(t, pos)] = 0;
                n[space.var(t - 1, pos)] += e;
                out.add_term(n, c.clone());
                changed = true;
            } else if m[yj] > 0 {
                let mut n = m.clone();
                n[yj] -= 1;
                for (v, s) in [(xi, &one), (xj, &one), (yi, &minus)] {
                    let mut k = n.clone();
                    k[v] += 1;
                    out.add_term(k, c * s);
                }
                changed = true;
            } else if m[yi] >= 2 {
                let mut n = m.clone();
                n[yi] -= 2;
                let mut a = n.clone();
                a[xi] += 1;
                a[yi] += 1;
                let mut b = n.clone();
                b[xj] += 1;
                b[yi] += 1;
                let mut e2 = n;
                e2[xi] += 1;
                e2[xj] += 1;
                out.add_term(a, c.clone());
                out.add_term(b, c.clone());
                out.add_term(e2, -c);
                changed = true;
            } else {
                out.add_term(m.clone(), c.clone());
            }
        }
        cur = out;
        if !changed {
            return cur;
        }
    }
}

/// Ordered basis `(mask, R-monomial)` of a graded piece.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    entries: Vec<(usize, Mono)>,
    index: HashMap<(usize, Mono), usize>,
}

impl GradedPiece {
    fn new(entries: Vec<(usize, Mono)>) -> Self {
        let index = entries.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect();
        Self { entries, index }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Mono)] {
        &self.entries
    }

    pub fn position(&self, mask: usize, m: &Mono) -> Option<usize> {
        self.index.get(&(mask, m.clone())).copied()
    }

    pub fn vector_of(&self, e: &BSElement) -> Result<SparseVec> {
        let mut v = vec![];
        for (mask, p) in e.coords.iter().enumerate() {
            for (m, c) in p.terms() {
                let k = self.position(mask, m).ok_or_else(|| {
                    Error::Degree("element not in this graded piece".into())
                })?;
                v.push((k, c.clone()));
            }
        }
        v.sort_by_key(|(k, _)| *k);
        Ok(v)
    }

    pub fn element_of(&self, shape: &BSShape, field: Field, v: &[(usize, Scalar)]) -> BSElement {
        let mut e = BSElement::zero(shape, field);
        for (k, c) in v {
            let (mask, m) = &self.entries[*k];
            e.coords[*mask].add_term(m.clone(), c.clone());
        }
        e
    }
}

/// An element in left coordinates: `Σ_S coords[S] · b_S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSElement {
    shape: BSShape,
    coords: Vec<Poly>,
}

impl BSElement {
    pub fn zero(shape: &BSShape, field: Field) -> Self {
        Self { shape: shape.clone(), coords: vec![Poly::zero(shape.ring_space(), field); shape.basis_size()] }
    }

    pub fn basis(shape: &BSShape, mask: usize, field: Field) -> Self {
        let mut e = Self::zero(shape, field);
        e.coords[mask] = Poly::one(shape.ring_space(), field);
        e
    }

    pub fn one(shape: &BSShape, field: Field) -> Self {
        Self::basis(shape, 0, field)
    }

    pub fn shape(&self) -> &BSShape {
        &self.shape
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|p| p.is_zero())
    }

    /// Internal degree when homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut d = None;
        for (mask, p) in self.coords.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let e = p.degree()? as i64 + 2 * (mask as u64).count_ones() as i64;
            match d {
                None => d = Some(e),
                Some(x) if x != e => return None,
                _ => {}
            }
        }
        d.map(|x| x + self.shape.internal_shift)
    }

    /// The element as a polynomial in all alphabets.
    pub fn to_poly(&self) -> Poly {
        let space = self.shape.raw_space();
        let field = self.field();
        let emb: Vec<usize> = (1..=self.shape.strands).map(|m| space.var(0, m)).collect();
        let mut out = Poly::zero(space, field);
        for (mask, p) in self.coords.iter().enumerate() {
            out = &out + &(&p.embed(space, &emb) * &self.shape.basis_poly(mask, field));
        }
        out
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        if self.shape.walls != o.shape.walls || self.shape.strands != o.shape.strands {
            return Err(Error::DimensionMismatch(format!("adding {} and {}", self.shape, o.shape)));
        }
        let coords =
            self.coords.iter().zip(&o.coords).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(Self { shape: self.shape.clone(), coords })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.scale(&self.field().from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { shape: self.shape.clone(), coords: self.coords.iter().map(|p| p.scale(c)).collect() }
    }

    /// Left multiplication by an element of `R`.
    pub fn left_scale(&self, f: &Poly) -> Self {
        Self { shape: self.shape.clone(), coords: self.coords.iter().map(|p| p * f).collect() }
    }

    pub fn left_mult(&self, pos: usize) -> Result<Self> {
        self.check_pos(pos)?;
        Ok(self.left_scale(&Poly::var(self.shape.ring_space(), self.field(), 0, pos)))
    }

    pub fn right_mult(&self, pos: usize) -> Result<Self> {
        BimoduleMap::right_mult(&self.shape, pos, self.field())?.apply(self)
    }

    fn check_pos(&self, pos: usize) -> Result<()> {
        if pos == 0 || pos > self.shape.strands {
            Err(Error::OutOfRange(format!("position {pos} on {} strands", self.shape.strands)))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for BSElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// A left-`R`-linear map stored by its values on the free basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleMap {
    source: BSShape,
    target: BSShape,
    images: Vec<BSElement>,
    poly_degree: i64,
}

impl BimoduleMap {
    pub fn new(source: BSShape, target: BSShape, images: Vec<BSElement>, poly_degree: i64) -> Result<Self> {
        if images.len() != source.basis_size() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for a basis of size {}",
                images.len(),
                source.basis_size()
            )));
        }
        for (mask, img) in images.iter().enumerate() {
            if img.shape.walls != target.walls || img.shape.strands != target.strands {
                return Err(Error::DimensionMismatch("image outside the target".into()));
            }
            if let Some(deg) = img.degree() {
                let expect = 2 * (mask as u64).count_ones() as i64 + poly_degree;
                if deg - img.shape.internal_shift != expect {
                    return Err(Error::Degree(format!(
                        "image of basis {mask} has degree {deg}, expected {expect}"
                    )));
                }
            } else if !img.is_zero() {
                return Err(Error::Degree(format!("image of basis {mask} is not homogeneous")));
            }
        }
        let images = images
            .into_iter()
            .map(|mut e| {
                e.shape = target.clone();
                e
            })
            .collect();
        Ok(Self { source, target, images, poly_degree })
    }

    pub fn identity(shape: &BSShape, field: Field) -> Self {
        let images = (0..shape.basis_size()).map(|m| BSElement::basis(shape, m, field)).collect();
        Self { source: shape.clone(), target: shape.clone(), images, poly_degree: 0 }
    }

    pub fn zero(source: &BSShape, target: &BSShape, poly_degree: i64, field: Field) -> Self {
        let images = vec![BSElement::zero(target, field); source.basis_size()];
        Self { source: source.clone(), target: target.clone(), images, poly_degree }
    }

    pub fn source(&self) -> &BSShape {
        &self.source
    }

    pub fn target(&self) -> &BSShape {
        &self.target
    }

    pub fn images(&self) -> &[BSElement] {
        &self.images
    }

    pub fn field(&self) -> Field {
        self.images.first().map_or(Field::Rational, |e| e.field())
    }

    /// Change of internal degree, shifts included.
    pub fn degree(&self) -> i64 {
        self.poly_degree + self.target.internal_shift - self.source.internal_shift
    }

    pub fn poly_degree(&self) -> i64 {
        self.poly_degree
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|e| e.is_zero())
    }

    pub fn apply(&self, e: &BSElement) -> Result<BSElement> {
        if e.shape.walls != self.source.walls || e.shape.strands != self.source.strands {
            return Err(Error::DimensionMismatch(format!(
                "applying a map from {} to an element of {}",
                self.source, e.shape
            )));
        }
        let mut out = BSElement::zero(&self.target, e.field());
        for (mask, f) in e.coords.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            out = out.checked_add(&self.images[mask].left_scale(f))?;
        }
        Ok(out)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &BimoduleMap) -> Result<BimoduleMap> {
        let images = self.images.iter().map(|e| other.apply(e)).collect::<Result<Vec<_>>>()?;
        Ok(BimoduleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
            poly_degree: self.poly_degree + other.poly_degree,
        })
    }

    pub fn checked_add(&self, o: &BimoduleMap) -> Result<BimoduleMap> {
        if self.source != o.source || self.target != o.target || self.poly_degree != o.poly_degree {
            return Err(Error::DimensionMismatch("adding maps of different types".into()));
        }
        let images =
            self.images.iter().zip(&o.images).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(BimoduleMap { images, ..self.clone() })
    }

    pub fn scale(&self, c: &Scalar) -> BimoduleMap {
        BimoduleMap { images: self.images.iter().map(|e| e.scale(c)).collect(), ..self.clone() }
    }

    /// Left multiplication by `x^{(0)}_pos` as a map.
    pub fn left_mult(shape: &BSShape, pos: usize, field: Field) -> Result<Self> {
        let images = (0..shape.basis_size())
            .map(|m| BSElement::basis(shape, m, field).left_mult(pos))
            .collect::<Result<_>>()?;
        Ok(Self { source: shape.clone(), target: shape.clone(), images, poly_degree: 2 })
    }

    /// Right multiplication by `x^{(q)}_pos` as a map.
    pub fn right_mult(shape: &BSShape, pos: usize, field: Field) -> Result<Self> {
        if pos == 0 || pos > shape.strands {
            return Err(Error::OutOfRange(format!("position {pos} on {} strands", shape.strands)));
        }
        let space = shape.raw_space();
        let y = Poly::var(space, field, shape.walls.len(), pos);
        let images = (0..shape.basis_size())
            .map(|m| shape.normal_form(&(&shape.basis_poly(m, field) * &y)))
            .collect::<Result<_>>()?;
        Ok(Self { source: shape.clone(), target: shape.clone(), images, poly_degree: 2 })
    }

    /// The multiplication map collapsing wall `t` (1-based): alphabet `t`
    /// is identified with alphabet `t − 1`.
    pub fn merge_wall(shape: &BSShape, t: usize, field: Field) -> Result<Self> {
        let q = shape.walls.len();
        if t == 0 || t > q {
            return Err(Error::OutOfRange(format!("wall {t} of {q}")));
        }
        let mut walls = shape.walls.clone();
        walls.remove(t - 1);
        let target = BSShape { strands: shape.strands, walls, internal_shift: shape.internal_shift };
        let (src, tgt) = (shape.raw_space(), target.raw_space());
        let map: Vec<usize> = (0..src.nvars())
            .map(|v| {
                let (a, m) = src.split(v);
                tgt.var(if a >= t { a - 1 } else { a }, m)
            })
            .collect();
        let images = (0..shape.basis_size())
            .map(|m| target.normal_form(&shape.basis_poly(m, field).embed(tgt, &map)))
            .collect::<Result<_>>()?;
        Ok(Self { source: shape.clone(), target, images, poly_degree: 0 })
    }

    /// The map inserting a wall with generator `i` at slot `t` (1-based,
    /// `1 ..= q + 1`), `1 ↦ x^{(t−1)}_i − x^{(t)}_{i+1}`. The target carries
    /// an extra internal shift of `−2`, making the map degree-preserving.
    pub fn insert_wall(shape: &BSShape, t: usize, i: usize, field: Field) -> Result<Self> {
        let q = shape.walls.len();
        if t == 0 || t > q + 1 {
            return Err(Error::OutOfRange(format!("insertion slot {t} with {q} walls")));
        }
        if i == 0 || i >= shape.strands {
            return Err(Error::IndexOutOfRange { index: i, max: shape.strands - 1 });
        }
        let mut walls = shape.walls.clone();
        walls.insert(t - 1, i);
        let target =
            BSShape { strands: shape.strands, walls, internal_shift: shape.internal_shift - 2 };
        let (src, tgt) = (shape.raw_space(), target.raw_space());
        let map: Vec<usize> = (0..src.nvars())
            .map(|v| {
                let (a, m) = src.split(v);
                tgt.var(if a >= t { a + 1 } else { a }, m)
            })
            .collect();
        let c = &Poly::var(tgt, field, t - 1, i) - &Poly::var(tgt, field, t, i + 1);
        let images = (0..shape.basis_size())
            .map(|m| target.normal_form(&(&shape.basis_poly(m, field).embed(tgt, &map) * &c)))
            .collect::<Result<_>>()?;
        Ok(Self { source: shape.clone(), target, images, poly_degree: 2 })
    }

    /// Matrix from the internal-degree-`d` piece of the source to the
    /// degree-`d + degree()` piece of the target.
    pub fn matrix_of(&self, d: i64) -> Result<Matrix> {
        let src = self.source.piece(d);
        let tgt = self.target.piece(d + self.degree());
        self.matrix_between(&src, &tgt, d)
    }

    pub(crate) fn matrix_between(&self, src: &GradedPiece, tgt: &GradedPiece, d: i64) -> Result<Matrix> {
        if d > MAX_INTERNAL_DEGREE {
            return Err(Error::ResourceLimit(format!(
                "internal degree {d} beyond cutoff {MAX_INTERNAL_DEGREE}"
            )));
        }
        let field = self.field();
        let mut cols = Vec::with_capacity(src.len());
        for (mask, m) in src.entries() {
            let img = &self.images[*mask];
            let mut col: SparseVec = vec![];
            for (tmask, p) in img.coords.iter().enumerate() {
                for (n, c) in p.terms() {
                    let prod: Mono = n.iter().zip(m).map(|(a, b)| a + b).collect();
                    let k = tgt.position(tmask, &prod).ok_or_else(|| {
                        Error::Internal(format!("image of ({mask}, {m:?}) leaves the target piece"))
                    })?;
                    col.push((k, c.clone()));
                }
            }
            cols.push(col);
        }
        Ok(Matrix::from_columns(tgt.len(), field, cols))
    }
}
