//! Sparse multivariate Laurent polynomials with integer coefficients, and
//! power series truncated in their last variable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    names: Vec<String>,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl Laurent {
    pub fn zero(names: &[&str]) -> Self {
        Self { names: names.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn one(names: &[&str]) -> Self {
        Self::monomial(names, &vec![0; names.len()], 1)
    }

    pub fn constant(names: &[&str], c: i64) -> Self {
        Self::monomial(names, &vec![0; names.len()], c)
    }

    pub fn monomial(names: &[&str], exps: &[i32], c: i64) -> Self {
        let mut p = Self::zero(names);
        p.add_term(exps.to_vec(), BigInt::from(c));
        p
    }

    /// The variable `names[k]`.
    pub fn var(names: &[&str], k: usize) -> Self {
        let mut e = vec![0; names.len()];
        e[k] = 1;
        Self::monomial(names, &e, 1)
    }

    fn empty_like(&self) -> Self {
        Self { names: self.names.clone(), terms: BTreeMap::new() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[i32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: BigInt) {
        assert_eq!(exps.len(), self.names.len(), "exponent vector length");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_names(&self, o: &Self) {
        assert_eq!(self.names, o.names, "Laurent polynomials over different variables");
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = self.empty_like();
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul_monomial(&self, exps: &[i32]) -> Self {
        let mut out = self.empty_like();
        for (e, x) in &self.terms {
            out.add_term(e.iter().zip(exps).map(|(a, b)| a + b).collect(), x.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.name_refs());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn name_refs(&self) -> Vec<&str> {
        self.names.iter().map(|s| s.as_str()).collect()
    }

    /// `Some((exps, ±1))` when `self` is a signed monomial.
    pub fn as_unit(&self) -> Option<(Vec<i32>, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if c.abs().is_one() {
            Some((e.clone(), c.to_i64()?))
        } else {
            None
        }
    }

    /// Inverse of a signed monomial.
    pub fn unit_inverse(&self) -> Result<Self> {
        let (e, s) = self.as_unit().ok_or_else(|| Error::Degree(format!("{self} is not a unit")))?;
        let neg: Vec<i32> = e.iter().map(|x| -x).collect();
        Ok(Self::monomial(&self.name_refs(), &neg, s))
    }

    /// Minimal and maximal exponent of variable `k`.
    pub fn exponent_range(&self, k: usize) -> Option<(i32, i32)> {
        let lo = self.terms.keys().map(|e| e[k]).min()?;
        let hi = self.terms.keys().map(|e| e[k]).max()?;
        Some((lo, hi))
    }

    /// Replaces variable `k` by `images[k]`; negative powers need unit images.
    pub fn substitute(&self, images: &[Laurent]) -> Result<Laurent> {
        if images.len() != self.names.len() {
            return Err(Error::DimensionMismatch("one image per variable".into()));
        }
        let target = images.first().map(|p| p.name_refs()).unwrap_or_default();
        let inverses: Vec<Option<Laurent>> = images.iter().map(|p| p.unit_inverse().ok()).collect();
        let mut out = Laurent::zero(&target);
        for (e, c) in &self.terms {
            let mut t = Laurent::constant(&target, 1).scale(c);
            for (k, &x) in e.iter().enumerate() {
                let base = if x >= 0 {
                    &images[k]
                } else {
                    inverses[k].as_ref().ok_or_else(|| {
                        Error::Degree(format!("negative power of {} mapped to a non-unit", self.names[k]))
                    })?
                };
                t = &t * &base.pow(x.unsigned_abs());
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Terms with exponent of variable `k` at most `max`.
    pub fn truncate(&self, k: usize, max: i32) -> Self {
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            if e[k] <= max {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// `(exps…, coeff)` rows, coefficients as `i64`.
    pub fn rows(&self) -> Result<Vec<Vec<i64>>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut row: Vec<i64> = e.iter().map(|&x| x as i64).collect();
                row.push(c.to_i64().ok_or_else(|| Error::OutOfRange(format!("coefficient {c}")))?);
                Ok(row)
            })
            .collect()
    }
}

impl<'a> Add<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        self.check_names(o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn sub(self, o: &Laurent) -> Laurent {
        self + &(-o)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(&BigInt::from(-1))
    }
}

impl<'a> Mul<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        self.check_names(o);
        let mut out = self.empty_like();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a.iter().zip(b).map(|(p, q)| p + q).collect(), x * y);
            }
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.names)
                .filter(|(x, _)| **x != 0)
                .map(|(x, n)| if *x == 1 { n.clone() } else { format!("{n}^{x}") })
                .collect();
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial read as a power series in its last variable, known
/// exactly for exponents up to `precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    poly: Laurent,
    precision: i32,
}

impl TruncatedSeries {
    pub fn new(poly: Laurent, precision: i32) -> Self {
        let k = poly.nvars() - 1;
        Self { poly: poly.truncate(k, precision), precision }
    }

    pub fn poly(&self) -> &Laurent {
        &self.poly
    }

    pub fn precision(&self) -> i32 {
        self.precision
    }

    fn main(&self) -> usize {
        self.poly.nvars() - 1
    }

    /// Lowest exponent of the series variable present.
    pub fn valuation(&self) -> Option<i32> {
        self.poly.exponent_range(self.main()).map(|r| r.0)
    }

    /// Coefficient of `Q^n`, as a Laurent polynomial in all variables
    /// (the series variable set to exponent 0).
    pub fn coefficient(&self, n: i32) -> Laurent {
        let k = self.main();
        let mut out = self.poly.empty_like();
        for (e, c) in &self.poly.terms {
            if e[k] == n {
                let mut e2 = e.clone();
                e2[k] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let va = self.valuation().unwrap_or(self.precision);
        let vb = o.valuation().unwrap_or(o.precision);
        let precision = (self.precision + vb).min(o.precision + va);
        Self::new(&self.poly * &o.poly, precision)
    }

    /// Inverse, defined when the lowest coefficient is a signed monomial.
    pub fn inverse(&self) -> Result<Self> {
        let k = self.main();
        let v = self.valuation().ok_or_else(|| Error::Degree("inverting a zero series".into()))?;
        let a0_inv = self.coefficient(v).unit_inverse()?;
        let n_max = self.precision - v;
        let mut b: Vec<Laurent> = vec![a0_inv.clone()];
        for n in 1..=n_max {
            let mut acc = self.poly.empty_like();
            for j in 1..=n {
                let a = self.coefficient(v + j);
                if !a.is_zero() {
                    acc = &acc + &(&a * &b[(n - j) as usize]);
                }
            }
            b.push(-&(&a0_inv * &acc));
        }
        let mut poly = self.poly.empty_like();
        for (n, c) in b.iter().enumerate() {
            let mut shift = vec![0; self.poly.nvars()];
            shift[k] = n as i32 - v;
            poly = &poly + &c.mul_monomial(&shift);
        }
        Ok(Self::new(poly, self.precision - 2 * v))
    }

    /// Equality on the common range of validity.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let p = self.precision.min(o.precision);
        let k = self.main();
        self.poly.truncate(k, p) == o.poly.truncate(k, p)
    }
}
