//! Braid words over a Cartan datum, their text format, and the move calculus
//! (cyclic permutation, braid relation, inverse pairs, reflection,
//! stabilization) together with the grading ledger each move carries.

use std::fmt;
use std::ops::{Add, AddAssign, Neg};

use serde::Serialize;

use crate::rootdata::CartanDatum;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidLetter {
    pub index: usize,
    pub sign: i8,
}

impl BraidLetter {
    pub fn pos(index: usize) -> Self {
        Self { index, sign: 1 }
    }

    pub fn neg(index: usize) -> Self {
        Self { index, sign: -1 }
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    pub fn inverse(&self) -> Self {
        Self { index: self.index, sign: -self.sign }
    }

    fn to_int(self) -> i64 {
        self.sign as i64 * self.index as i64
    }
}

/// Net `(Σ-power, filtration shift)` accumulated along a sequence of moves.
///
/// `m2_null_maps` counts Markov-2 steps whose comparison map is null on the
/// associated graded; their grading effect is calibrated, not derived.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct GradingLedger {
    pub suspension: i64,
    pub shift: i64,
    pub m2_null_maps: i64,
}

impl GradingLedger {
    pub const ZERO: GradingLedger = GradingLedger { suspension: 0, shift: 0, m2_null_maps: 0 };

    pub fn new(suspension: i64, shift: i64) -> Self {
        Self { suspension, shift, m2_null_maps: 0 }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// `(suspension, shift)` ignoring the Markov-2 flag.
    pub fn pair(&self) -> (i64, i64) {
        (self.suspension, self.shift)
    }
}

impl Add for GradingLedger {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            suspension: self.suspension + o.suspension,
            shift: self.shift + o.shift,
            m2_null_maps: self.m2_null_maps + o.m2_null_maps,
        }
    }
}

impl AddAssign for GradingLedger {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Neg for GradingLedger {
    type Output = Self;
    fn neg(self) -> Self {
        Self { suspension: -self.suspension, shift: -self.shift, m2_null_maps: -self.m2_null_maps }
    }
}

impl fmt::Display for GradingLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(Σ{:+}, [{:+}]", self.suspension, self.shift)?;
        if self.m2_null_maps != 0 {
            write!(f, ", m2-null {:+}", self.m2_null_maps)?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    datum: CartanDatum,
    letters: Vec<BraidLetter>,
}

/// A single elementary move; positions are 1-based and refer to the word
/// before the move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    CyclicPermute,
    BraidRelation { at: usize, i: usize, j: usize },
    ContractInverse { at: usize },
    InsertInverse { at: usize, index: usize, first_sign: i8 },
    Reflect,
    Stabilize { sign: i8 },
}

impl BraidWord {
    pub fn new(datum: CartanDatum, letters: Vec<BraidLetter>) -> Result<Self> {
        for l in &letters {
            datum.check_index(l.index)?;
            if l.sign != 1 && l.sign != -1 {
                return Err(Error::InvalidMove(format!("letter sign {} is not ±1", l.sign)));
            }
        }
        Ok(Self { datum, letters })
    }

    /// Type-A word on `strands` strands from signed integers (`-2` is `σ₂⁻¹`).
    pub fn from_ints(strands: usize, ints: &[i64]) -> Result<Self> {
        let datum = CartanDatum::type_a(strands)?;
        let mut letters = Vec::with_capacity(ints.len());
        for &n in ints {
            if n == 0 {
                return Err(Error::Parse {
                    position: letters.len() + 1,
                    token: "0".into(),
                    reason: "generator 0 does not exist".into(),
                });
            }
            letters.push(BraidLetter { index: n.unsigned_abs() as usize, sign: n.signum() as i8 });
        }
        Self::new(datum, letters)
    }

    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let datum = CartanDatum::type_a(strands)?;
        let mut letters = vec![];
        for (k, tok) in text.split_whitespace().enumerate() {
            let n: i64 = tok.parse().map_err(|_| Error::Parse {
                position: k + 1,
                token: tok.into(),
                reason: "not an integer".into(),
            })?;
            if n == 0 {
                return Err(Error::Parse {
                    position: k + 1,
                    token: tok.into(),
                    reason: "generator 0 does not exist".into(),
                });
            }
            let index = n.unsigned_abs() as usize;
            if index >= strands {
                return Err(Error::Parse {
                    position: k + 1,
                    token: tok.into(),
                    reason: format!("generator out of range for {strands} strands"),
                });
            }
            letters.push(BraidLetter { index, sign: n.signum() as i8 });
        }
        Self::new(datum, letters)
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn strands(&self) -> usize {
        self.datum.rank()
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_ints(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.to_int()).collect()
    }

    /// `(l₊, l₋, l₋ − 2l₊)`.
    pub fn lengths(&self) -> (usize, usize, i64) {
        let lp = self.letters.iter().filter(|l| l.is_positive()).count();
        let lm = self.len() - lp;
        (lp, lm, lm as i64 - 2 * lp as i64)
    }

    pub fn normalization(&self) -> i64 {
        self.lengths().2
    }

    /// Sum of signs.
    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.sign as i64).sum()
    }

    fn with_letters(&self, letters: Vec<BraidLetter>) -> Self {
        Self { datum: self.datum.clone(), letters }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.datum != other.datum {
            return Err(Error::InvalidMove("concatenating words over different data".into()));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(self.with_letters(letters))
    }

    /// Moves the first letter to the end. The empty word is returned unchanged.
    pub fn cyclic_permute(&self) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(1);
        }
        self.with_letters(letters)
    }

    /// Replaces the positive alternation `i j i …` (`m_ij` letters) starting at
    /// `at` by `j i j …`.
    pub fn apply_braid_relation(&self, at: usize, i: usize, j: usize) -> Result<Self> {
        let m = self
            .datum
            .braid_exponent(i, j)?
            .finite()
            .ok_or(Error::InfiniteRelation(i, j))?;
        if at == 0 || at + m - 1 > self.len() {
            return Err(Error::InvalidMove(format!(
                "window {at}..{} outside word of length {}",
                at + m - 1,
                self.len()
            )));
        }
        let start = at - 1;
        for k in 0..m {
            let expect = if k % 2 == 0 { i } else { j };
            let l = self.letters[start + k];
            if !l.is_positive() || l.index != expect {
                return Err(Error::InvalidMove(format!(
                    "letter {} is {}, expected σ{expect} in the alternation",
                    start + k + 1,
                    l.to_int()
                )));
            }
        }
        let mut letters = self.letters.clone();
        for k in 0..m {
            letters[start + k] = BraidLetter::pos(if k % 2 == 0 { j } else { i });
        }
        Ok(self.with_letters(letters))
    }

    /// Removes `σ_i^{±1} σ_i^{∓1}` at positions `at, at+1`; ledger `(+1, −1)`.
    pub fn contract_inverse_pair(&self, at: usize) -> Result<(Self, GradingLedger)> {
        if at == 0 || at + 1 > self.len() {
            return Err(Error::InvalidMove(format!("no letter pair at {at}")));
        }
        let (a, b) = (self.letters[at - 1], self.letters[at]);
        if a.index != b.index || a.sign != -b.sign {
            return Err(Error::InvalidMove(format!(
                "letters {} {} at {at} are not an inverse pair",
                a.to_int(),
                b.to_int()
            )));
        }
        let mut letters = self.letters.clone();
        letters.drain(at - 1..at + 1);
        Ok((self.with_letters(letters), GradingLedger::new(1, -1)))
    }

    /// Inserts `σ_i^{s} σ_i^{−s}` so that it occupies positions `at, at+1`;
    /// ledger `(−1, +1)`.
    pub fn insert_inverse_pair(
        &self,
        at: usize,
        index: usize,
        first_sign: i8,
    ) -> Result<(Self, GradingLedger)> {
        self.datum.check_index(index)?;
        if at == 0 || at > self.len() + 1 {
            return Err(Error::InvalidMove(format!("insertion position {at} out of range")));
        }
        if first_sign != 1 && first_sign != -1 {
            return Err(Error::InvalidMove("sign must be ±1".into()));
        }
        let first = BraidLetter { index, sign: first_sign };
        let mut letters = self.letters.clone();
        letters.splice(at - 1..at - 1, [first, first.inverse()]);
        Ok((self.with_letters(letters), GradingLedger::new(-1, 1)))
    }

    pub fn reflect(&self) -> Self {
        let mut letters = self.letters.clone();
        letters.reverse();
        self.with_letters(letters)
    }

    /// Appends `σ_r^{±1}` and moves to `r + 1` strands. Ledger `(+2, 0)` for
    /// the positive move and `(−1, 0)` for the negative one, each flagged as a
    /// null-map comparison.
    pub fn stabilize(&self, sign: i8) -> Result<(Self, GradingLedger)> {
        if !self.datum.is_type_a() {
            return Err(Error::InvalidDatum("stabilization needs a type-A word".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidMove("sign must be ±1".into()));
        }
        let r = self.strands();
        let datum = CartanDatum::type_a(r + 1)?;
        let mut letters = self.letters.clone();
        letters.push(BraidLetter { index: r, sign });
        let suspension = if sign > 0 { 2 } else { -1 };
        let ledger = GradingLedger { suspension, shift: 0, m2_null_maps: 1 };
        Ok((Self { datum, letters }, ledger))
    }

    pub fn apply_move(&self, mv: Move) -> Result<(Self, GradingLedger)> {
        match mv {
            Move::CyclicPermute => Ok((self.cyclic_permute(), GradingLedger::ZERO)),
            Move::BraidRelation { at, i, j } => {
                Ok((self.apply_braid_relation(at, i, j)?, GradingLedger::ZERO))
            }
            Move::ContractInverse { at } => self.contract_inverse_pair(at),
            Move::InsertInverse { at, index, first_sign } => {
                self.insert_inverse_pair(at, index, first_sign)
            }
            Move::Reflect => Ok((self.reflect(), GradingLedger::ZERO)),
            Move::Stabilize { sign } => self.stabilize(sign),
        }
    }

    /// Applies moves in order and sums their ledgers.
    pub fn apply_moves(&self, moves: &[Move]) -> Result<(Self, GradingLedger)> {
        let mut w = self.clone();
        let mut ledger = GradingLedger::ZERO;
        for &mv in moves {
            let (next, delta) = w.apply_move(mv)?;
            w = next;
            ledger += delta;
        }
        Ok((w, ledger))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l.to_int())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(strands: usize, ints: &[i64]) -> BraidWord {
        BraidWord::from_ints(strands, ints).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(BraidWord::parse("1 1 1", 2).unwrap(), w(2, &[1, 1, 1]));
        assert_eq!(BraidWord::parse("1 -2 1", 3).unwrap(), w(3, &[1, -2, 1]));
        assert!(BraidWord::parse("", 2).unwrap().is_empty());
        assert!(matches!(BraidWord::parse("3", 2), Err(Error::Parse { .. })));
        assert!(matches!(BraidWord::parse("0", 2), Err(Error::Parse { .. })));
        assert!(matches!(BraidWord::parse("1 x", 2), Err(Error::Parse { position: 2, .. })));
    }

    #[test]
    fn length_data() {
        assert_eq!(w(2, &[1, 1, 1]).lengths(), (3, 0, -6));
        assert_eq!(w(2, &[-1]).lengths(), (0, 1, 1));
        assert_eq!(w(2, &[]).lengths(), (0, 0, 0));
    }

    #[test]
    fn cyclic() {
        assert_eq!(w(3, &[1, 2]).cyclic_permute(), w(3, &[2, 1]));
        assert_eq!(w(2, &[1]).cyclic_permute(), w(2, &[1]));
        assert_eq!(w(3, &[1, -2, 1]).cyclic_permute(), w(3, &[-2, 1, 1]));
        assert_eq!(w(3, &[]).cyclic_permute(), w(3, &[]));
    }

    #[test]
    fn braid_relation() {
        assert_eq!(w(3, &[1, 2, 1]).apply_braid_relation(1, 1, 2).unwrap(), w(3, &[2, 1, 2]));
        assert_eq!(w(4, &[1, 3]).apply_braid_relation(1, 1, 3).unwrap(), w(4, &[3, 1]));
        assert!(w(3, &[1, -2, 1]).apply_braid_relation(1, 1, 2).is_err());
        assert!(w(3, &[1, 2]).apply_braid_relation(1, 1, 2).is_err());
        let aff = CartanDatum::from_matrix(2, vec![vec![2, -2], vec![-2, 2]]).unwrap();
        let word = BraidWord::new(aff, vec![BraidLetter::pos(1), BraidLetter::pos(2)]).unwrap();
        assert_eq!(word.apply_braid_relation(1, 1, 2), Err(Error::InfiniteRelation(1, 2)));
    }

    #[test]
    fn inverse_pairs() {
        let (e, d) = w(2, &[1, -1]).contract_inverse_pair(1).unwrap();
        assert!(e.is_empty());
        assert_eq!(d.pair(), (1, -1));
        let (e, d) = w(3, &[2, 1, -1, 2]).contract_inverse_pair(2).unwrap();
        assert_eq!(e, w(3, &[2, 2]));
        assert_eq!(d.pair(), (1, -1));
        assert!(w(2, &[1, 1]).contract_inverse_pair(1).is_err());
        let (back, d2) = e.insert_inverse_pair(2, 1, 1).unwrap();
        assert_eq!(back, w(3, &[2, 1, -1, 2]));
        assert!((d + d2).is_zero());
    }

    #[test]
    fn reflection() {
        assert_eq!(w(4, &[1, -2, 3]).reflect(), w(4, &[3, -2, 1]));
        assert_eq!(w(2, &[]).reflect(), w(2, &[]));
        assert_eq!(w(2, &[1]).reflect(), w(2, &[1]));
    }

    #[test]
    fn stabilization() {
        let (s, d) = w(2, &[1, 1, 1]).stabilize(1).unwrap();
        assert_eq!(s, w(3, &[1, 1, 1, 2]));
        assert_eq!(d.pair(), (2, 0));
        let (s, d) = w(1, &[]).stabilize(1).unwrap();
        assert_eq!(s, w(2, &[1]));
        assert_eq!(d.pair(), (2, 0));
        let (s, d) = w(2, &[1]).stabilize(-1).unwrap();
        assert_eq!(s, w(3, &[1, -2]));
        assert_eq!(d.pair(), (-1, 0));
        assert_eq!(d.m2_null_maps, 1);
    }

    fn arb_word() -> impl Strategy<Value = BraidWord> {
        (2usize..5).prop_flat_map(|r| {
            proptest::collection::vec((1..r as i64, any::<bool>()), 0..8).prop_map(move |v| {
                let ints: Vec<i64> = v.into_iter().map(|(i, s)| if s { i } else { -i }).collect();
                BraidWord::from_ints(r, &ints).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn format_round_trip(word in arb_word()) {
            let text = word.to_string();
            prop_assert_eq!(BraidWord::parse(&text, word.strands()).unwrap(), word);
        }

        #[test]
        fn lengths_additive(a in arb_word()) {
            let (lp, lm, l) = a.lengths();
            prop_assert_eq!(lp + lm, a.len());
            let doubled = a.concat(&a).unwrap();
            prop_assert_eq!(doubled.lengths().2, 2 * l);
        }

        #[test]
        fn cyclic_order(a in arb_word()) {
            let mut b = a.clone();
            for _ in 0..a.len() {
                b = b.cyclic_permute();
            }
            prop_assert_eq!(b, a);
        }

        #[test]
        fn reflect_involution(a in arb_word()) {
            prop_assert_eq!(a.reflect().reflect(), a);
        }
    }

    #[test]
    fn braid_relation_involution() {
        let a = w(4, &[-3, 1, 2, 1, 3]);
        let b = a.apply_braid_relation(2, 1, 2).unwrap();
        assert_eq!(b.apply_braid_relation(2, 2, 1).unwrap(), a);
    }
}
