use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::{Error, Result};

/// Coefficient field: `ℚ` or `𝔽_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if p < 2 || p >= 1 << 32 {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^32")));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::InvalidField(format!("{p} is not prime")));
            }
            d += 1;
        }
        Ok(Field::Prime(p))
    }

    /// `q` or `fp:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "q" | "Q" => Ok(Field::Rational),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidField(format!("unknown field {s:?}")))?;
                Field::prime(p)
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp { value: n.rem_euclid(p as i64) as u64, p },
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(x) => x.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(x) => x.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Ok(Scalar::Q(a + b)),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Ok(Scalar::Fp { value: (a + b) % p, p: *p })
            }
            _ => Err(Error::MixedFields),
        }
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Ok(Scalar::Q(a * b)),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Ok(Scalar::Fp { value: a * b % p, p: *p })
            }
            _ => Err(Error::MixedFields),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Q(x) => Some(Scalar::Q(x.recip())),
            Scalar::Fp { value, p } => Some(Scalar::Fp { value: pow_mod(*value, p - 2, *p), p: *p }),
        }
    }

    /// Integer representative when the value is integral (`ℚ`) or its
    /// canonical lift in `[0, p)` (`𝔽_p`).
    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Q(x) => x.is_integer().then(|| x.to_integer()),
            Scalar::Fp { value, .. } => Some(BigInt::from(*value)),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.checked_add(o).expect("mixed scalar fields")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.checked_mul(o).expect("mixed scalar fields")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(x) => Scalar::Q(-x),
            Scalar::Fp { value, p } => Scalar::Fp { value: (p - value) % p, p },
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(x) => {
                if x.is_integer() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Scalar {
    /// Whether the leading sign should render as `-` (rationals only).
    pub(crate) fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(x) => x.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_parsing() {
        assert_eq!(Field::parse("q").unwrap(), Field::Rational);
        assert_eq!(Field::parse("fp:7").unwrap(), Field::Prime(7));
        assert!(Field::parse("fp:8").is_err());
        assert!(Field::parse("fp:1").is_err());
        assert!(Field::parse("r").is_err());
    }

    #[test]
    fn arithmetic() {
        let f = Field::Prime(7);
        let a = f.from_i64(3);
        let b = f.from_i64(-2);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(&a - &b, f.from_i64(5));
        assert_eq!(a.inv().unwrap(), f.from_i64(5));
        let q = Field::Rational;
        let h = q.from_i64(2).inv().unwrap();
        assert_eq!(h.to_string(), "1/2");
        assert_eq!(a.checked_add(&h), Err(Error::MixedFields));
        assert!(q.zero().inv().is_none());
    }
}
