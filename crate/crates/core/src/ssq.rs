//! The `E₁` page as a cube of Bott-Samelson bimodules, its `d₁`, and the
//! resulting `E₂` page.
//!
//! A vertex `J` carries `BS(J)` with internal shift `−2·#(negative letters
//! in J)`. Cohomological degree is distance to the all-positive vertex.
//! Dropping a positive letter is a merge; adding a negative letter is an
//! insertion. Hochschild homology is taken first, then cohomology of `d₁`
//! separately in each `(j, d)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::braidword::{BraidWord, GradingLedger};
use crate::cubeposet::{CubeEdge, CubePoset, CubeVertex};
use crate::hochschild::{induced_map, KoszulComplex, TriGradedDims, THETA_DEGREE};
use crate::laurent::{Laurent, TruncatedSeries};
use crate::linalg::{Matrix, Subquotient};
use crate::polyalg::Field;
use crate::soergel::{BSShape, BimoduleMap, MAX_INTERNAL_DEGREE};
use crate::{Error, Result};

pub const MAX_LETTERS: usize = 10;
pub const MAX_CUTOFF: i64 = 40;

/// A `d₁` component: `sign · map` from `from` (degree `t`) to `to` (`t + 1`).
#[derive(Debug, Clone)]
pub struct E1Edge {
    pub cube: CubeEdge,
    pub from: CubeVertex,
    pub to: CubeVertex,
    pub sign: i8,
    pub map: BimoduleMap,
}

#[derive(Debug, Clone)]
pub struct E1Complex {
    poset: CubePoset,
    field: Field,
    shapes: Vec<BSShape>,
    edges: Vec<E1Edge>,
}

/// The bimodule attached to a sub-word.
pub fn vertex_shape(w: &BraidWord, v: CubeVertex) -> BSShape {
    let letters = w.letters();
    let present: Vec<usize> = v.positions(letters.len());
    let walls = present.iter().map(|&p| letters[p].index).collect();
    let negatives = present.iter().filter(|&&p| !letters[p].is_positive()).count() as i64;
    BSShape::new(w.strands(), walls, -2 * negatives).expect("letters validated by the word")
}

pub fn build_e1(w: &BraidWord, field: Field) -> Result<E1Complex> {
    if !w.datum().is_type_a() {
        return Err(Error::InvalidDatum("the cube of bimodules needs a type-A word".into()));
    }
    if w.len() > MAX_LETTERS {
        return Err(Error::ResourceLimit(format!("{} letters, at most {MAX_LETTERS}", w.len())));
    }
    let poset = CubePoset::build(w)?;
    let shapes: Vec<BSShape> = poset.vertices().map(|v| vertex_shape(w, v)).collect();
    let mut edges = vec![];
    for e in poset.edges() {
        let letter = w.letters()[e.position];
        let (from, to) = (e.target, e.source);
        let slot = |v: CubeVertex| v.positions(e.position).len() + 1;
        let map = if letter.is_positive() {
            BimoduleMap::merge_wall(&shapes[from.mask as usize], slot(from), field)?
        } else {
            BimoduleMap::insert_wall(&shapes[from.mask as usize], slot(to), letter.index, field)?
        };
        debug_assert_eq!(map.target(), &shapes[to.mask as usize]);
        edges.push(E1Edge { cube: *e, from, to, sign: e.sign, map });
    }
    Ok(E1Complex { poset, field, shapes, edges })
}

impl E1Complex {
    pub fn poset(&self) -> &CubePoset {
        &self.poset
    }

    pub fn word(&self) -> &BraidWord {
        self.poset.word()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn shape(&self, v: CubeVertex) -> &BSShape {
        &self.shapes[v.mask as usize]
    }

    pub fn edges(&self) -> &[E1Edge] {
        &self.edges
    }

    pub fn edges_from(&self, v: CubeVertex) -> impl Iterator<Item = &E1Edge> {
        self.edges.iter().filter(move |e| e.from == v)
    }

    pub fn degree_of(&self, v: CubeVertex) -> usize {
        self.poset.distance(v)
    }

    pub fn max_degree(&self) -> usize {
        self.poset.len()
    }

    pub fn layer(&self, t: usize) -> Vec<CubeVertex> {
        self.poset.layer(t).unwrap_or_default()
    }

    pub fn min_internal_degree(&self) -> i64 {
        self.shapes.iter().map(|s| s.internal_shift()).min().unwrap_or(0)
    }

    /// Negates the sign of edge `idx`; a test fixture for the `d₁² = 0` check.
    pub fn flip_sign(&mut self, idx: usize) -> Result<()> {
        let n = self.edges.len();
        let e = self.edges.get_mut(idx).ok_or_else(|| Error::OutOfRange(format!("edge {idx} of {n}")))?;
        e.sign = -e.sign;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum D1Verdict {
    Pass,
    /// The face from `from` to `to` does not cancel; `degree` is the lowest
    /// internal degree up to the cutoff where it is visible.
    Fail { from: CubeVertex, to: CubeVertex, degree: Option<i64> },
}

impl D1Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, D1Verdict::Pass)
    }
}

/// Checks that the two paths around every square cancel. Maps are compared
/// on free generators, which decides every internal degree at once.
pub fn verify_d1_squared(c: &E1Complex, cutoff: i64) -> Result<D1Verdict> {
    let mut faces: BTreeMap<(CubeVertex, CubeVertex), Option<BimoduleMap>> = BTreeMap::new();
    for e1 in &c.edges {
        for e2 in c.edges_from(e1.to) {
            let comp = e1.map.then(&e2.map)?;
            let comp = if e1.sign * e2.sign < 0 { comp.scale(&c.field.from_i64(-1)) } else { comp };
            let slot = faces.entry((e1.from, e2.to)).or_insert(None);
            *slot = Some(match slot.take() {
                None => comp,
                Some(acc) => acc.checked_add(&comp)?,
            });
        }
    }
    for ((from, to), sum) in faces {
        let sum = sum.expect("face with at least one path");
        if !sum.is_zero() {
            let lo = c.shape(from).internal_shift();
            let degree = (lo..=cutoff.min(MAX_INTERNAL_DEGREE))
                .step_by(2)
                .find(|&d| sum.matrix_of(d).map(|m| !m.is_zero()).unwrap_or(false));
            return Ok(D1Verdict::Fail { from, to, degree });
        }
    }
    Ok(D1Verdict::Pass)
}

/// A bounded cochain complex `C^0 → C^1 → …` of finite-dimensional spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex {
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl CochainComplex {
    pub fn new(dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        if maps.len() + 1 != dims.len().max(1) {
            return Err(Error::DimensionMismatch(format!("{} spaces with {} maps", dims.len(), maps.len())));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.ncols() != dims[k] || m.nrows() != dims[k + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "map {k} is {}x{}, spaces have dims {} and {}",
                    m.nrows(),
                    m.ncols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        Ok(Self { dims, maps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(|m| m.rank()).collect()
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks = self.ranks();
        (0..self.dims.len())
            .map(|t| {
                let out = ranks.get(t).copied().unwrap_or(0);
                let inc = if t > 0 { ranks[t - 1] } else { 0 };
                self.dims[t] - out - inc
            })
            .collect()
    }

    pub fn squares_to_zero(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].compose(&w[0]).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// Mapping cone of the identity: `Cone^t = C^{t+1} ⊕ C^t`,
    /// differential `[[−d, 0], [1, d]]`, indexed from `t = −1`.
    pub fn cone_of_identity(&self) -> Result<Self> {
        let n = self.dims.len();
        let field = self.maps.first().map_or(Field::Rational, |m| m.field());
        let dim = |t: i64| if t >= 0 && (t as usize) < n { self.dims[t as usize] } else { 0 };
        let map = |t: i64| -> Matrix {
            if t >= 0 && (t as usize) < self.maps.len() {
                self.maps[t as usize].clone()
            } else {
                Matrix::zeros(dim(t + 1), dim(t), field)
            }
        };
        let dims: Vec<usize> = (-1..n as i64).map(|t| dim(t + 1) + dim(t)).collect();
        let mut maps = vec![];
        for t in -1..n as i64 - 1 {
            let minus = map(t + 1).scale(&field.from_i64(-1));
            let id = Matrix::identity(dim(t + 1), field);
            let d = map(t);
            let blocks = [(0, 0, &minus), (1, 0, &id), (1, 1, &d)];
            maps.push(Matrix::from_blocks(&[dim(t + 2), dim(t + 1)], &[dim(t + 1), dim(t)], field, &blocks)?);
        }
        Self::new(dims, maps)
    }
}

/// True when every complex (one per internal degree) is exact.
pub fn is_graded_exact(pieces: &[CochainComplex]) -> bool {
    pieces.iter().all(|c| c.cohomology_dims().iter().all(|&h| h == 0))
}

/// Koszul data of every vertex, shared read-only by the `(j, d)` tasks.
pub struct PageBuilder<'a> {
    complex: &'a E1Complex,
    koszul: Vec<KoszulComplex>,
}

impl<'a> PageBuilder<'a> {
    pub fn new(complex: &'a E1Complex) -> Result<Self> {
        let koszul =
            complex.shapes.iter().map(|s| KoszulComplex::new(s, complex.field)).collect::<Result<_>>()?;
        Ok(Self { complex, koszul })
    }

    /// The `E₁` row in Hochschild degree `j` and internal degree `d`, with
    /// `d₁` on chosen homology representatives.
    pub fn row(&self, j: usize, d: i64) -> Result<CochainComplex> {
        let c = self.complex;
        let hh: Vec<Subquotient> =
            self.koszul.iter().map(|k| k.homology(j, d)).collect::<Result<_>>()?;
        let layers: Vec<Vec<CubeVertex>> = (0..=c.max_degree()).map(|t| c.layer(t)).collect();
        let dims: Vec<usize> =
            layers.iter().map(|l| l.iter().map(|v| hh[v.mask as usize].dim()).sum()).collect();
        let mut maps = vec![];
        for t in 0..c.max_degree() {
            let (src, tgt) = (&layers[t], &layers[t + 1]);
            let mut blocks = vec![];
            for e in c.edges.iter().filter(|e| c.degree_of(e.from) == t) {
                let m = induced_map(&e.map, j, d, &hh[e.from.mask as usize], &hh[e.to.mask as usize])?;
                let m = if e.sign < 0 { m.scale(&c.field.from_i64(-1)) } else { m };
                let bi = tgt.iter().position(|v| *v == e.to).expect("target in next layer");
                let bj = src.iter().position(|v| *v == e.from).expect("source in layer");
                blocks.push((bi, bj, m));
            }
            let rs: Vec<usize> = tgt.iter().map(|v| hh[v.mask as usize].dim()).collect();
            let cs: Vec<usize> = src.iter().map(|v| hh[v.mask as usize].dim()).collect();
            let refs: Vec<(usize, usize, &Matrix)> = blocks.iter().map(|(a, b, m)| (*a, *b, m)).collect();
            maps.push(Matrix::from_blocks(&rs, &cs, c.field, &refs)?);
        }
        CochainComplex::new(dims, maps)
    }

    /// `dim HH_j` of every vertex in degree `d`, indexed by vertex mask.
    pub fn vertex_dims(&self, j: usize, d: i64) -> Result<Vec<usize>> {
        self.koszul.iter().map(|k| k.hh_dim(j, d)).collect()
    }

    /// Rank of the unsigned induced map on `HH_j` in degree `d`, per cube edge.
    pub fn edge_ranks(&self, j: usize, d: i64) -> Result<Vec<(CubeVertex, CubeVertex, usize)>> {
        let c = self.complex;
        let hh: Vec<Subquotient> =
            self.koszul.iter().map(|k| k.homology(j, d)).collect::<Result<_>>()?;
        c.edges
            .iter()
            .map(|e| {
                let m = induced_map(&e.map, j, d, &hh[e.from.mask as usize], &hh[e.to.mask as usize])?;
                Ok((e.from, e.to, m.rank()))
            })
            .collect()
    }

    fn grid(&self, cutoff: i64) -> Vec<(usize, i64)> {
        let lo = self.complex.min_internal_degree();
        let r = self.complex.word().strands();
        (0..=r)
            .flat_map(|j| (lo..=cutoff).filter(|d| d.rem_euclid(2) == 0).map(move |d| (j, d)))
            .collect()
    }

    pub fn analyze(&self, cutoff: i64) -> Result<PageAnalysis> {
        let rows = self
            .grid(cutoff)
            .par_iter()
            .map(|&(j, d)| self.row(j, d).map(|c| ((j, d), c.dims().to_vec(), c.ranks())))
            .collect::<Result<Vec<_>>>()?;
        let mut out = PageAnalysis::default();
        for ((j, d), dims, ranks) in rows {
            for (t, &n) in dims.iter().enumerate() {
                let out_rank = ranks.get(t).copied().unwrap_or(0);
                let in_rank = if t > 0 { ranks[t - 1] } else { 0 };
                out.e1.set(t as i64, j, d, n);
                out.e2.set(t as i64, j, d, n - out_rank - in_rank);
                if out_rank > 0 {
                    out.d1_ranks.insert((t as i64, j, d), out_rank);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PageAnalysis {
    pub e1: TriGradedDims,
    pub e2: TriGradedDims,
    /// Rank of `d₁ : E₁^{t} → E₁^{t+1}` per `(t, j, d)`, zeros omitted.
    pub d1_ranks: BTreeMap<(i64, usize, i64), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgeredPage {
    pub dims: TriGradedDims,
    pub ledger: GradingLedger,
    pub strands: usize,
    pub cutoff: i64,
    pub field: Field,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl LedgeredPage {
    /// First internal degree past the certified range.
    pub fn provisional_band(&self) -> (i64, i64) {
        (self.cutoff - 2 * self.strands as i64, self.cutoff)
    }
}

pub fn check_cutoff(cutoff: i64) -> Result<()> {
    if cutoff < 0 || cutoff % 2 != 0 {
        return Err(Error::Degree(format!("cutoff {cutoff} must be even and nonnegative")));
    }
    if cutoff > MAX_CUTOFF {
        return Err(Error::ResourceLimit(format!("cutoff {cutoff} exceeds {MAX_CUTOFF}")));
    }
    Ok(())
}

pub fn analyze_word(w: &BraidWord, cutoff: i64, field: Field) -> Result<PageAnalysis> {
    check_cutoff(cutoff)?;
    let c = build_e1(w, field)?;
    PageBuilder::new(&c)?.analyze(cutoff)
}

pub fn compute_e2(w: &BraidWord, cutoff: i64, field: Field) -> Result<LedgeredPage> {
    let analysis = analyze_word(w, cutoff, field)?;
    let mut warnings = vec![];
    if analysis.e2.is_empty() {
        warnings.push(format!("no homology at or below internal degree {cutoff}"));
    }
    Ok(LedgeredPage {
        dims: analysis.e2,
        ledger: GradingLedger::new(w.normalization(), 0),
        strands: w.strands(),
        cutoff,
        field,
        warnings,
    })
}

/// Prediction for the page of `W` from the page of `W'`, where a move took
/// `W` to `W'` with ledger `δ = (s, ϱ)`:
/// `E_W(t, j, d) = E_{W'}(t + ϱ, j, d − (s + ϱ))`.
pub fn reindex(dims: &TriGradedDims, delta: GradingLedger) -> TriGradedDims {
    let (s, rho) = delta.pair();
    dims.shifted(-rho, s + rho)
}

/// `Σ (−1)^t q^d a^j dim` over variables `(q, a)`.
pub fn euler_characteristic(dims: &TriGradedDims) -> Laurent {
    let mut out = Laurent::zero(&["q", "a"]);
    for ((t, j, d), n) in dims.iter() {
        let sign = if t % 2 == 0 { 1 } else { -1 };
        out = &out + &Laurent::monomial(&["q", "a"], &[d as i32, j as i32], sign * n as i64);
    }
    out
}

/// `Σ T^t A^j Q^d dim`, a series in `Q` exact through the cutoff.
pub fn poincare_series(page: &LedgeredPage) -> TruncatedSeries {
    let names = ["T", "A", "Q"];
    let mut out = Laurent::zero(&names);
    for ((t, j, d), n) in page.dims.iter() {
        out = &out + &Laurent::monomial(&names, &[t as i32, j as i32, d as i32], n as i64);
    }
    TruncatedSeries::new(out, page.cutoff as i32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThomDescriptor {
    pub signed_roots: Vec<(i8, Vec<i64>)>,
    pub virtual_dim: i64,
    pub permutation: Vec<usize>,
    pub component_count: usize,
    pub suspension: i64,
}

pub fn limiting_descriptor(w: &BraidWord) -> Result<ThomDescriptor> {
    let datum = w.datum();
    let (roots, virtual_dim) = datum.v_representation(w)?;
    let (perm, component_count) = datum.permutation_and_components(w)?;
    Ok(ThomDescriptor {
        signed_roots: roots.into_iter().map(|(s, v)| (s, v.coords)).collect(),
        virtual_dim,
        permutation: perm.images(),
        component_count,
        suspension: -virtual_dim + w.normalization(),
    })
}

/// Versioned result document; field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultDocument {
    pub schema: u32,
    pub word: String,
    pub strands: usize,
    pub cutoff: i64,
    pub field: String,
    pub ledger: GradingLedger,
    pub theta_degree: i64,
    pub dims: Vec<[i64; 4]>,
    pub euler: Vec<Vec<i64>>,
    pub descriptor: ThomDescriptor,
    pub provisional_band: [i64; 2],
}

impl ResultDocument {
    pub fn new(w: &BraidWord, page: &LedgeredPage) -> Result<Self> {
        let (lo, hi) = page.provisional_band();
        Ok(Self {
            schema: 1,
            word: w.to_string(),
            strands: w.strands(),
            cutoff: page.cutoff,
            field: page.field.to_string(),
            ledger: page.ledger,
            theta_degree: THETA_DEGREE,
            dims: page.dims.rows(),
            euler: euler_characteristic(&page.dims).rows()?,
            descriptor: limiting_descriptor(w)?,
            provisional_band: [lo, hi],
        })
    }
}
