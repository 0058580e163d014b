//! Hecke algebra images of braid words, the Ocneanu trace and the HOMFLY
//! polynomial of the closure, plus the frozen substitution relating HOMFLY
//! to graded Euler characteristics of `E₂` pages.
//!
//! Conventions: `T_i² = (q − 1)T_i + q`, `σ_i ↦ T_i`. The trace satisfies
//! `tr(x T_n) = λ tr(x)` for `x` in the algebra on `n` strands. With
//! `q = v²`, `λ = vτ`, `g_i = v⁻¹T_i` and `z = v − v⁻¹`,
//! `P = D^{n−1} a^{−e} tr(g)` where `D = (a − a⁻¹)/z`, `τ = az/(a − a⁻¹)`.
//! This gives `a P(L₊) − a⁻¹ P(L₋) = z P(L₀)` and unknot `= 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::braidword::BraidWord;
use crate::laurent::{Laurent, TruncatedSeries};
use crate::{Error, Result};

const QL: [&str; 2] = ["q", "l"];
const AZ: [&str; 2] = ["a", "z"];

/// Element of the Hecke algebra on `strands` strands in the `T_w` basis;
/// permutations are 0-based image vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElement {
    strands: usize,
    terms: BTreeMap<Vec<u8>, Laurent>,
}

impl HeckeElement {
    pub fn identity(strands: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0..strands as u8).collect(), Laurent::one(&QL));
        Self { strands, terms }
    }

    pub fn zero(strands: usize) -> Self {
        Self { strands, terms: BTreeMap::new() }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Laurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> Laurent {
        self.terms.get(w).cloned().unwrap_or_else(|| Laurent::zero(&QL))
    }

    fn add_term(&mut self, w: Vec<u8>, c: Laurent) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(|| Laurent::zero(&QL));
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        let mut out = Self::zero(self.strands);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    /// `h · T_i`.
    pub fn mul_generator(&self, i: usize) -> Result<Self> {
        if i == 0 || i >= self.strands {
            return Err(Error::IndexOutOfRange { index: i, max: self.strands.saturating_sub(1) });
        }
        let q = Laurent::var(&QL, 0);
        let qm1 = &q - &Laurent::one(&QL);
        let mut out = Self::zero(self.strands);
        for (w, c) in &self.terms {
            let mut ws = w.clone();
            ws.swap(i - 1, i);
            if w[i - 1] < w[i] {
                out.add_term(ws, c.clone());
            } else {
                out.add_term(w.clone(), c * &qm1);
                out.add_term(ws, c * &q);
            }
        }
        Ok(out)
    }

    /// `h · T_i⁻¹ = q⁻¹ h T_i + (q⁻¹ − 1) h`.
    pub fn mul_inverse_generator(&self, i: usize) -> Result<Self> {
        let qi = Laurent::monomial(&QL, &[-1, 0], 1);
        let c = &qi - &Laurent::one(&QL);
        Ok(self.mul_generator(i)?.scale(&qi).add(&self.scale(&c)))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero(self.strands);
        for (w, c) in &o.terms {
            let mut h = self.clone();
            for i in reduced_word(w) {
                h = h.mul_generator(i)?;
            }
            out = out.add(&h.scale(c));
        }
        Ok(out)
    }

    /// Conditional expectation onto the algebra on one strand fewer.
    fn expectation(&self) -> Result<Self> {
        let n = self.strands - 1;
        let lambda = Laurent::var(&QL, 1);
        let mut out = Self::zero(n);
        for (w, c) in &self.terms {
            let k0 = w.iter().position(|&x| x as usize == n).expect("permutation");
            if k0 == n {
                out.add_term(w[..n].to_vec(), c.clone());
                continue;
            }
            // w = u · s_n s_{n−1} ⋯ s_{k0+1}
            let mut u = w.clone();
            u.remove(k0);
            let mut h = Self { strands: n, terms: BTreeMap::new() };
            h.add_term(u, c * &lambda);
            for i in (k0 + 1..n).rev() {
                h = h.mul_generator(i)?;
            }
            out = out.add(&h);
        }
        Ok(out)
    }
}

/// A reduced word (1-based generators) for a permutation, by bubble sort.
fn reduced_word(w: &[u8]) -> Vec<usize> {
    let mut p = w.to_vec();
    let mut word = vec![];
    loop {
        let Some(i) = (1..p.len()).find(|&i| p[i - 1] > p[i]) else { break };
        p.swap(i - 1, i);
        word.push(i);
    }
    word.reverse();
    word
}

pub fn represent(w: &BraidWord) -> Result<HeckeElement> {
    if !w.datum().is_type_a() {
        return Err(Error::InvalidDatum("Hecke images need a type-A word".into()));
    }
    let mut h = HeckeElement::identity(w.strands());
    for l in w.letters() {
        h = if l.is_positive() { h.mul_generator(l.index)? } else { h.mul_inverse_generator(l.index)? };
    }
    Ok(h)
}

/// Markov trace with values in `ℤ[q^{±1}, λ]` (variables `q`, `l`).
pub fn ocneanu_trace(h: &HeckeElement) -> Result<Laurent> {
    let mut cur = h.clone();
    while cur.strands > 1 {
        cur = cur.expectation()?;
    }
    Ok(cur.coeff(&[0]))
}

/// HOMFLY polynomial in `(a, z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomflyPoly(pub Laurent);

impl HomflyPoly {
    pub fn poly(&self) -> &Laurent {
        &self.0
    }

    pub fn one() -> Self {
        Self(Laurent::one(&AZ))
    }
}

impl fmt::Display for HomflyPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rewrites a Laurent polynomial in `v` as a polynomial in `z = v − v⁻¹`.
fn v_to_z(f: &Laurent) -> Result<Laurent> {
    let v = Laurent::var(&["v"], 0);
    let z_of_v = &v - &v.unit_inverse()?;
    let mut rest = f.clone();
    let mut out = Laurent::zero(&AZ);
    loop {
        let top = rest.terms().next_back().map(|(e, c)| (e[0], c.clone()));
        let Some((m, c)) = top else { break };
        if m < 0 {
            return Err(Error::Internal(format!("{f} is not a polynomial in v − 1/v")));
        }
        out.add_term(vec![0, m], c.clone());
        rest = &rest - &z_of_v.pow(m as u32).scale(&c);
    }
    Ok(out)
}

pub fn homfly(w: &BraidWord) -> Result<HomflyPoly> {
    let n = w.strands();
    let e = w.writhe();
    let tr = ocneanu_trace(&represent(w)?)?;
    // q = v², λ = vτ, then the writhe normalization v^{−e}
    let vt = ["v", "t"];
    let images = [Laurent::monomial(&vt, &[2, 0], 1), Laurent::monomial(&vt, &[1, 1], 1)];
    let g = tr.substitute(&images)?.mul_monomial(&[-(e as i32), 0]);
    let mut by_tau: BTreeMap<i32, Laurent> = BTreeMap::new();
    for (ex, c) in g.terms() {
        let slot = by_tau.entry(ex[1]).or_insert_with(|| Laurent::zero(&["v"]));
        slot.add_term(vec![ex[0]], c.clone());
    }
    let a = Laurent::var(&AZ, 0);
    let a_minus = &a - &a.unit_inverse()?;
    let mut out = Laurent::zero(&AZ);
    for (k, c) in by_tau {
        let k_us = usize::try_from(k).map_err(|_| Error::Internal("negative τ power".into()))?;
        if k_us + 1 > n {
            return Err(Error::Internal(format!("τ^{k} on {n} strands")));
        }
        let factor = a_minus
            .pow((n - 1 - k_us) as u32)
            .mul_monomial(&[k - e as i32, k - n as i32 + 1]);
        out = &out + &(&v_to_z(&c)? * &factor);
    }
    Ok(HomflyPoly(out))
}

/// Variables of the calibrated comparison: `b` with `a = −b²`, and `q`.
pub const BQ: [&str; 2] = ["b", "q"];

/// A signed monomial `sign · b^b · q^q` given as `(sign, b, q)`.
pub type UnitSpec = (i8, i32, i32);

/// Substitution taking HOMFLY polynomials to graded Euler characteristics.
///
/// With the Euler variable `a` written as `−b²`:
/// `χ(E₂(w)) = S^{r−1} P₊^{l₊} P₋^{l₋} · U · P(a ↦ ±b^α q^β, z ↦ ±(q^γ − q^δ))`,
/// `U = (1 − b²q²)/(1 − q²)` the unknot series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Calibration {
    pub a_image: UnitSpec,
    /// `(sign, γ, δ)`: `z ↦ sign·(q^γ − q^δ)`.
    pub z_image: (i8, i32, i32),
    pub strand_factor: UnitSpec,
    pub positive_factor: UnitSpec,
    pub negative_factor: UnitSpec,
}

/// Fitted on unknot presentations and the trefoil.
pub const CALIBRATION: Calibration = Calibration {
    a_image: (1, 1, 1),
    z_image: (1, 1, -1),
    strand_factor: (1, 1, 0),
    positive_factor: (1, 1, 2),
    negative_factor: (-1, -1, -2),
};

/// Effectively infinite precision for exact polynomials.
const EXACT: i32 = i32::MAX / 4;

fn unit((sign, b, q): UnitSpec) -> Laurent {
    Laurent::monomial(&BQ, &[b, q], sign as i64)
}

fn unit_pow(u: UnitSpec, n: i64) -> Result<Laurent> {
    let u = unit(u);
    if n >= 0 {
        Ok(u.pow(n as u32))
    } else {
        Ok(u.unit_inverse()?.pow(n.unsigned_abs() as u32))
    }
}

fn as_spec(l: &Laurent) -> Option<UnitSpec> {
    let (e, s) = l.as_unit()?;
    Some((s as i8, e[0], e[1]))
}

impl Calibration {
    pub fn z(&self) -> Laurent {
        let (s, g, d) = self.z_image;
        &unit((s, 0, g)) - &unit((s, 0, d))
    }

    pub fn unknot_series(precision: i32) -> TruncatedSeries {
        let num = &Laurent::one(&BQ) - &Laurent::monomial(&BQ, &[2, 2], 1);
        let geo = (0..=precision.max(0) / 2)
            .fold(Laurent::zero(&BQ), |acc, k| &acc + &Laurent::monomial(&BQ, &[0, 2 * k], 1));
        TruncatedSeries::new(&num * &geo, precision)
    }

    /// `S^{r−1} P₊^{l₊} P₋^{l₋}`.
    pub fn normalization(&self, w: &BraidWord) -> Result<Laurent> {
        let (lp, lm, _) = w.lengths();
        let s = unit_pow(self.strand_factor, w.strands() as i64 - 1)?;
        Ok(&(&s * &unit_pow(self.positive_factor, lp as i64)?) * &unit_pow(self.negative_factor, lm as i64)?)
    }

    /// Both sides multiplied by `z^{r−1}`, as series in `q` valid through
    /// `precision`: `(χ z^{r−1}, N U (z^{r−1}P)(subst))`.
    pub fn compare(&self, euler: &Laurent, w: &BraidWord, precision: i32) -> Result<(TruncatedSeries, TruncatedSeries)> {
        let r = w.strands();
        let zpow = TruncatedSeries::new(self.z().pow(r as u32 - 1), EXACT);
        let lhs = TruncatedSeries::new(euler_in_b(euler)?, precision).mul(&zpow);
        let cleared = homfly(w)?.0.mul_monomial(&[0, r as i32 - 1]);
        let subst = cleared.substitute(&[unit(self.a_image), self.z()])?;
        let rhs = TruncatedSeries::new(&self.normalization(w)? * &subst, EXACT)
            .mul(&Self::unknot_series(precision + 64));
        let p = lhs.precision().min(precision);
        Ok((TruncatedSeries::new(lhs.poly().clone(), p), TruncatedSeries::new(rhs.poly().clone(), p)))
    }

    pub fn matches(&self, euler: &Laurent, w: &BraidWord, precision: i32) -> Result<bool> {
        let (l, r) = self.compare(euler, w, precision)?;
        Ok(l.agrees_with(&r))
    }
}

/// `χ(q, a)` rewritten with `a = −b²`, over variables `(b, q)`.
pub fn euler_in_b(euler: &Laurent) -> Result<Laurent> {
    let images = [Laurent::monomial(&BQ, &[0, 1], 1), Laurent::monomial(&BQ, &[2, 0], -1)];
    euler.substitute(&images)
}

/// The signed monomial `N` with `χ·z^{r−1} = N · U · (z^{r−1}P)(subst)`
/// through the given precision, for a trial substitution of `a` and `z`.
pub fn fit_normalization(
    a_image: UnitSpec,
    z_image: (i8, i32, i32),
    euler: &Laurent,
    w: &BraidWord,
    precision: i32,
) -> Result<Option<Laurent>> {
    let none = (1, 0, 0);
    let trial = Calibration { a_image, z_image, strand_factor: none, positive_factor: none, negative_factor: none };
    let (lhs, rhs) = trial.compare(euler, w, precision)?;
    let (Some((el, cl)), Some((er, cr))) = (leading_term(&lhs), leading_term(&rhs)) else {
        return Ok(None);
    };
    let sign = if cl == cr {
        1
    } else if cl == -cr {
        -1
    } else {
        return Ok(None);
    };
    let n = Laurent::monomial(&BQ, &[el[0] - er[0], el[1] - er[1]], sign);
    let scaled = TruncatedSeries::new(&n * rhs.poly(), rhs.precision() + el[1] - er[1]);
    Ok(scaled.agrees_with(&lhs).then_some(n))
}

/// Lowest power of `q`, and within it the highest power of `b`.
fn leading_term(s: &TruncatedSeries) -> Option<(Vec<i32>, BigInt)> {
    let v = s.valuation()?;
    s.poly().terms().rev().find(|(e, _)| e[1] == v).map(|(e, c)| (e.clone(), c.clone()))
}

/// Searches a small grid of substitutions for `a` and `z` and fits the
/// normalization factors from four pages with their words: the unknot on
/// one strand, `σ₁` and `σ₁⁻¹` on two strands, and the trefoil `σ₁³`.
/// `P₊` is taken with positive sign (only `S·P₊` and `P₊²` are visible).
pub fn calibrate(samples: [(&Laurent, &BraidWord); 4], precision: i32) -> Result<Vec<Calibration>> {
    let [unknot1, positive, negative, trefoil] = samples;
    let mut found = vec![];
    for sa in [1i8, -1] {
        for ab in [1, -1] {
            for aq in -2..=2 {
                for sz in [1i8, -1] {
                    for (g, d) in [(1, -1), (2, 0), (0, -2)] {
                        let (a_image, z_image) = ((sa, ab, aq), (sz, g, d));
                        let fit = |(e, w): (&Laurent, &BraidWord)| fit_normalization(a_image, z_image, e, w, precision);
                        let fitted = || -> Result<Option<Calibration>> {
                            if fit(unknot1)? != Some(Laurent::one(&BQ)) {
                                return Ok(None);
                            }
                            let (Some(n_pos), Some(n_neg), Some(n3)) = (fit(positive)?, fit(negative)?, fit(trefoil)?) else {
                                return Ok(None);
                            };
                            // n_pos = S P₊, n_neg = S P₋, n3 = S P₊³
                            let Some((1, b2, q2)) = as_spec(&(&n3 * &n_pos.unit_inverse()?)) else {
                                return Ok(None);
                            };
                            if b2 % 2 != 0 || q2 % 2 != 0 {
                                return Ok(None);
                            }
                            let p_plus = (1, b2 / 2, q2 / 2);
                            let s = &n_pos * &unit(p_plus).unit_inverse()?;
                            let p_minus = &n_neg * &s.unit_inverse()?;
                            Ok(Some(Calibration {
                                a_image,
                                z_image,
                                strand_factor: as_spec(&s).expect("unit"),
                                positive_factor: p_plus,
                                negative_factor: as_spec(&p_minus).expect("unit"),
                            }))
                        };
                        if let Some(c) = fitted()? {
                            found.push(c);
                        }
                    }
                }
            }
        }
    }
    Ok(found)
}
