//! Exact scalars: arbitrary-precision rationals or residues modulo an odd prime.
//!
//! A [`Scalar`] always knows which field it lives in. Mixing fields inside
//! one arithmetic operation is a programming error and panics; every public
//! constructor that takes external data validates the field first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    let m128 = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

impl FieldKind {
    /// Builds the prime field F_p; `p` must be an odd prime.
    pub fn prime(p: u64) -> Result<Self> {
        if is_odd_prime(p) {
            Ok(FieldKind::Prime(p))
        } else {
            Err(Error::FieldMismatch(format!("{p} is not an odd prime")))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            FieldKind::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldKind::Prime(p) => Scalar::Prime {
                residue: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Builds `num/den`; `den` must be nonzero (and invertible mod p).
    pub fn ratio(self, num: i64, den: i64) -> Scalar {
        let n = self.from_i64(num);
        let d = self.from_i64(den).inv().expect("nonzero denominator");
        &n * &d
    }

    /// The scalar 1/2, defined because the characteristic is never 2.
    pub fn half(self) -> Scalar {
        self.ratio(1, 2)
    }

    /// Parses a scalar string in this field: `"p/q"` or an integer.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let bad = |m: &str| Error::Parse {
            pointer: String::new(),
            message: format!("invalid scalar `{s}`: {m}"),
        };
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad("numerator is not an integer"))?;
        let den = BigInt::from_str(den).map_err(|_| bad("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        match self {
            FieldKind::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldKind::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_u64().expect("residue fits in u64")
                };
                let n = Scalar::Prime { residue: reduce(&num), modulus: p };
                let d = Scalar::Prime { residue: reduce(&den), modulus: p };
                let dinv = d.inv().ok_or_else(|| bad("denominator vanishes modulo p"))?;
                Ok(&n * &dinv)
            }
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(FieldKind::Rational);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::FieldMismatch(format!("bad modulus in `{s}`")))?;
            return FieldKind::prime(p);
        }
        Err(Error::FieldMismatch(format!("unknown field `{s}` (expected \"Q\" or \"Fp:<p>\")")))
    }
}

impl Scalar {
    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::Rational,
            Scalar::Prime { modulus, .. } => FieldKind::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { residue, .. } => *residue == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: mod_pow(*residue, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    /// Overwrites `self` with `self - factor * other`.
    pub fn sub_mul_assign(&mut self, factor: &Scalar, other: &Scalar) {
        match (&mut *self, factor, other) {
            (Scalar::Rational(a), Scalar::Rational(f), Scalar::Rational(b)) => {
                *a -= f * b;
            }
            (Scalar::Prime { residue, modulus }, Scalar::Prime { residue: f, .. }, Scalar::Prime { residue: b, .. }) => {
                let m = *modulus as u128;
                let prod = (*f as u128) * (*b as u128) % m;
                *residue = ((*residue as u128 + m - prod) % m) as u64;
            }
            _ => panic!("field mismatch in scalar arithmetic"),
        }
    }

    /// Overwrites `self` with `self + factor * other`.
    pub fn add_mul_assign(&mut self, factor: &Scalar, other: &Scalar) {
        match (&mut *self, factor, other) {
            (Scalar::Rational(a), Scalar::Rational(f), Scalar::Rational(b)) => {
                *a += f * b;
            }
            (Scalar::Prime { residue, modulus }, Scalar::Prime { residue: f, .. }, Scalar::Prime { residue: b, .. }) => {
                let m = *modulus as u128;
                let prod = (*f as u128) * (*b as u128) % m;
                *residue = ((*residue as u128 + prod) % m) as u64;
            }
            _ => panic!("field mismatch in scalar arithmetic"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { residue: a, modulus }, Scalar::Prime { residue: b, modulus: m2 }) if modulus == m2 => {
                Scalar::Prime {
                    residue: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => panic!("field mismatch in scalar arithmetic"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { residue: a, modulus }, Scalar::Prime { residue: b, modulus: m2 }) if modulus == m2 => {
                Scalar::Prime {
                    residue: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => panic!("field mismatch in scalar arithmetic"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}
