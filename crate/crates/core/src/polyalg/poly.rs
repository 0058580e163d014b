use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Field, Scalar};
use crate::{Error, Result};

/// Variables `x^{(a)}_m` for alphabets `a ∈ 0..alphabets` and positions
/// `m ∈ 1..=strands`, flattened as `a·strands + (m − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSpace {
    pub alphabets: usize,
    pub strands: usize,
}

impl VarSpace {
    pub fn new(alphabets: usize, strands: usize) -> Self {
        Self { alphabets, strands }
    }

    /// A single alphabet: the polynomial ring `R`.
    pub fn single(strands: usize) -> Self {
        Self { alphabets: 1, strands }
    }

    pub fn nvars(&self) -> usize {
        self.alphabets * self.strands
    }

    pub fn var(&self, alphabet: usize, pos: usize) -> usize {
        debug_assert!(alphabet < self.alphabets && pos >= 1 && pos <= self.strands);
        alphabet * self.strands + pos - 1
    }

    pub fn split(&self, v: usize) -> (usize, usize) {
        (v / self.strands, v % self.strands + 1)
    }
}

pub type Mono = Vec<u16>;

/// Internal degree of a monomial: every variable has degree 2.
pub fn mono_degree(m: &[u16]) -> usize {
    2 * m.iter().map(|&e| e as usize).sum::<usize>()
}

pub fn mono_mul(a: &[u16], b: &[u16]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// All monomials of internal degree `d` in `nvars` variables, in
/// lexicographic order (higher power of earlier variables first).
pub fn graded_basis(nvars: usize, d: usize) -> Result<Vec<Mono>> {
    if d % 2 != 0 {
        return Err(Error::Degree(format!("odd degree {d}")));
    }
    Ok(monomials_of_weight(nvars, d / 2))
}

pub(crate) fn monomials_of_weight(nvars: usize, w: usize) -> Vec<Mono> {
    fn rec(n: usize, w: usize, prefix: &mut Mono, out: &mut Vec<Mono>) {
        if prefix.len() + 1 == n {
            prefix.push(w as u16);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=w).rev() {
            prefix.push(e as u16);
            rec(n, w - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    if nvars == 0 {
        if w == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(nvars, w, &mut Vec::with_capacity(nvars), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    space: VarSpace,
    field: Field,
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero(space: VarSpace, field: Field) -> Self {
        Self { space, field, terms: BTreeMap::new() }
    }

    pub fn constant(space: VarSpace, c: Scalar) -> Self {
        let field = c.field();
        let mut p = Self::zero(space, field);
        p.add_term(vec![0; space.nvars()], c);
        p
    }

    pub fn one(space: VarSpace, field: Field) -> Self {
        Self::constant(space, field.one())
    }

    pub fn var(space: VarSpace, field: Field, alphabet: usize, pos: usize) -> Self {
        let mut m = vec![0; space.nvars()];
        m[space.var(alphabet, pos)] = 1;
        Self::monomial(space, m, field.one())
    }

    pub fn monomial(space: VarSpace, mono: Mono, c: Scalar) -> Self {
        assert_eq!(mono.len(), space.nvars());
        let mut p = Self::zero(space, c.field());
        p.add_term(mono, c);
        p
    }

    /// Integer-coefficient constructor: `(coeff, [(alphabet, pos, exp)])`.
    pub fn from_terms(
        space: VarSpace,
        field: Field,
        terms: &[(i64, &[(usize, usize, u16)])],
    ) -> Self {
        let mut p = Self::zero(space, field);
        for (c, vars) in terms {
            let mut m = vec![0; space.nvars()];
            for &(a, pos, e) in vars.iter() {
                m[space.var(a, pos)] += e;
            }
            p.add_term(m, field.from_i64(*c));
        }
        p
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Mono, Scalar)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u16]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c·m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        debug_assert_eq!(m.len(), self.space.nvars());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.field != o.field {
            return Err(Error::MixedFields);
        }
        if self.space != o.space {
            return Err(Error::DimensionMismatch(format!(
                "variable spaces {:?} and {:?}",
                self.space, o.space
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = Self::zero(self.space, self.field);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(mono_mul(a, b), x * y);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.space, self.field);
        if c.is_zero() {
            return out;
        }
        for (m, x) in &self.terms {
            out.terms.insert(m.clone(), x * c);
        }
        out
    }

    /// Multiplies by a monomial with coefficient one.
    pub fn mul_mono(&self, m: &[u16]) -> Self {
        let terms = self.terms.iter().map(|(a, c)| (mono_mul(a, m), c.clone())).collect();
        Self { space: self.space, field: self.field, terms }
    }

    /// `Some(d)` when every term has internal degree `d`; the zero polynomial
    /// has no degree.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| mono_degree(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|m| mono_degree(m)).max().unwrap_or(0)
    }

    /// Applies a permutation of variables: `x_v ↦ x_{perm[v]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.space, self.field);
        for (m, c) in &self.terms {
            let mut n = vec![0; m.len()];
            for (v, &e) in m.iter().enumerate() {
                n[perm[v]] = e;
            }
            out.add_term(n, c.clone());
        }
        out
    }

    /// `x^{(a)}_m ↔ x^{(a)}_{m+1}`.
    pub fn swap(&self, alphabet: usize, pos: usize) -> Result<Self> {
        if alphabet >= self.space.alphabets || pos == 0 || pos >= self.space.strands {
            return Err(Error::OutOfRange(format!("swap of x{alphabet}_{pos}")));
        }
        let mut perm: Vec<usize> = (0..self.space.nvars()).collect();
        let (u, v) = (self.space.var(alphabet, pos), self.space.var(alphabet, pos + 1));
        perm.swap(u, v);
        Ok(self.permute_vars(&perm))
    }

    /// Exact division by `x_u − x_v`.
    pub fn div_by_difference(&self, u: usize, v: usize) -> Result<Self> {
        let mut rem = self.clone();
        let mut quot = Self::zero(self.space, self.field);
        loop {
            // term with the largest power of x_u
            let Some((m, c)) = rem
                .terms
                .iter()
                .filter(|(m, _)| m[u] > 0)
                .max_by_key(|(m, _)| m[u])
                .map(|(m, c)| (m.clone(), c.clone()))
            else {
                break;
            };
            let mut q = m.clone();
            q[u] -= 1;
            let mut qv = q.clone();
            qv[v] += 1;
            rem.add_term(m, -&c);
            rem.add_term(qv, c.clone());
            quot.add_term(q, c);
        }
        if !rem.is_zero() {
            return Err(Error::Internal(format!("inexact division, remainder {rem}")));
        }
        Ok(quot)
    }

    /// Divided difference `(p − s_i p)/(x_i − x_{i+1})` in alphabet `a`.
    pub fn demazure(&self, alphabet: usize, i: usize) -> Result<Self> {
        let swapped = self.swap(alphabet, i)?;
        let diff = self.checked_sub(&swapped)?;
        diff.div_by_difference(self.space.var(alphabet, i), self.space.var(alphabet, i + 1))
    }

    /// Restriction to a new variable space by an injective variable map.
    pub fn embed(&self, target: VarSpace, map: &[usize]) -> Self {
        let mut out = Self::zero(target, self.field);
        for (m, c) in &self.terms {
            let mut n = vec![0; target.nvars()];
            for (v, &e) in m.iter().enumerate() {
                if e > 0 {
                    n[map[v]] += e;
                }
            }
            out.add_term(n, c.clone());
        }
        out
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.checked_add(o).expect("incompatible polynomials")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.checked_sub(o).expect("incompatible polynomials")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.checked_mul(o).expect("incompatible polynomials")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly { space: self.space, field: self.field, terms }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // higher degree first, then lexicographically larger first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| mono_degree(b).cmp(&mono_degree(a)).then_with(|| b.cmp(a)));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let (a, pos) = self.space.split(v);
                    if e == 1 {
                        format!("x{a}_{pos}")
                    } else {
                        format!("x{a}_{pos}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn x(space: VarSpace, pos: usize) -> Poly {
        Poly::var(space, Q, 0, pos)
    }

    #[test]
    fn ring_examples() {
        let s = VarSpace::single(2);
        let (x1, x2) = (x(s, 1), x(s, 2));
        let lhs = &(&x1 + &x2) * &(&x1 - &x2);
        let rhs = &(&x1 * &x1) - &(&x2 * &x2);
        assert_eq!(lhs, rhs);
        assert_eq!(&x1 + &Poly::zero(s, Q), x1);
        assert_eq!((&x1 * &x1).degree(), Some(4));
        assert!(Poly::zero(s, Q).degree().is_none());
        let other = Poly::one(s, Field::Prime(5));
        assert_eq!(x1.checked_add(&other), Err(Error::MixedFields));
    }

    #[test]
    fn swaps() {
        let s = VarSpace::single(2);
        let (x1, x2) = (x(s, 1), x(s, 2));
        assert_eq!(x1.swap(0, 1).unwrap(), x2);
        let p = &x1 * &x2;
        assert_eq!(p.swap(0, 1).unwrap(), p);
        let q = &(&x1 * &x1) + &x2;
        assert_eq!(q.swap(0, 1).unwrap(), &(&x2 * &x2) + &x1);
        assert!(x1.swap(0, 2).is_err());
    }

    #[test]
    fn demazure_examples() {
        let s = VarSpace::single(2);
        let (x1, x2) = (x(s, 1), x(s, 2));
        assert_eq!(x1.demazure(0, 1).unwrap(), Poly::one(s, Q));
        assert!((&x1 * &x2).demazure(0, 1).unwrap().is_zero());
        assert_eq!((&x1 * &x1).demazure(0, 1).unwrap(), &x1 + &x2);
        assert!(x1.div_by_difference(0, 1).is_err());
    }

    #[test]
    fn basis_examples() {
        let b = graded_basis(2, 4).unwrap();
        assert_eq!(b, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(graded_basis(3, 0).unwrap(), vec![vec![0, 0, 0]]);
        assert_eq!(graded_basis(1, 6).unwrap(), vec![vec![3]]);
        assert!(graded_basis(2, 3).is_err());
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for n in 1..5 {
            for d in (0..14).step_by(2) {
                assert_eq!(graded_basis(n, d).unwrap().len(), binom(d / 2 + n - 1, n - 1));
            }
        }
    }

    #[test]
    fn rendering() {
        let s = VarSpace::new(2, 2);
        let p = Poly::from_terms(s, Q, &[(1, &[(0, 1, 2), (1, 2, 1)]), (3, &[])]);
        assert_eq!(p.to_string(), "x0_1^2*x1_2 + 3");
        let q = Poly::from_terms(s, Q, &[(-2, &[(0, 2, 1)]), (1, &[(0, 1, 1)])]);
        assert_eq!(q.to_string(), "x0_1 - 2*x0_2");
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-3i64..4, proptest::collection::vec(0u16..3, n)), 0..5).prop_map(
            move |terms| {
                let s = VarSpace::single(n);
                let mut p = Poly::zero(s, Q);
                for (c, m) in terms {
                    p.add_term(m, Q.from_i64(c));
                }
                p
            },
        )
    }

    proptest! {
        #[test]
        fn twisted_leibniz(f in arb_poly(3), g in arb_poly(3), i in 1usize..3) {
            let lhs = (&f * &g).demazure(0, i).unwrap();
            let rhs = &(&f.demazure(0, i).unwrap() * &g) + &(&f.swap(0, i).unwrap() * &g.demazure(0, i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn demazure_squares_to_zero(f in arb_poly(3), i in 1usize..3) {
            prop_assert!(f.demazure(0, i).unwrap().demazure(0, i).unwrap().is_zero());
        }

        #[test]
        fn invariant_decomposition(f in arb_poly(3), i in 1usize..3) {
            // f = p + q·x_i with p, q symmetric under s_i and q = ∂_i f
            let s = f.space();
            let q = f.demazure(0, i).unwrap();
            let p = &f - &(&q * &Poly::var(s, Q, 0, i));
            prop_assert_eq!(q.swap(0, i).unwrap(), q.clone());
            prop_assert_eq!(p.swap(0, i).unwrap(), p.clone());
        }

        #[test]
        fn demazure_lowers_degree(m in proptest::collection::vec(0u16..4, 3), i in 1usize..3) {
            let f = Poly::monomial(VarSpace::single(3), m.clone(), Q.one());
            let g = f.demazure(0, i).unwrap();
            if !g.is_zero() {
                prop_assert_eq!(g.degree(), Some(mono_degree(&m) - 2));
            }
        }
    }
}
