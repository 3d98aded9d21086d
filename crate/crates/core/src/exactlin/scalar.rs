//! Exact field elements: arbitrary-precision rationals or prime-field residues.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScalarError {
    #[error("cannot parse `{0}` as an exact rational")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("denominator {0} is not invertible mod {1}")]
    BadDenominator(i64, u64),
}

/// The ground field of a session: ℚ or 𝔽_p for a prime p.
///
/// A session fixes one field; scalars from different fields never meet in a
/// single computation (mixing panics loudly rather than coercing).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

impl FieldSpec {
    pub fn fp(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(FieldSpec::Fp(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Q => Scalar::Q(BigRational::zero()),
            FieldSpec::Fp(p) => Scalar::Fp { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        self.integer(1)
    }

    pub fn integer(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Fp(p) => Scalar::Fp {
                p: *p,
                v: n.rem_euclid(*p as i64) as u64,
            },
        }
    }

    /// Exact p/q in this field. In 𝔽_p mode the denominator must be a unit.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        match self {
            FieldSpec::Q => Ok(Scalar::Q(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            FieldSpec::Fp(p) => {
                let d = self.integer(den);
                if d.is_zero() {
                    return Err(ScalarError::BadDenominator(den, *p));
                }
                Ok(&self.integer(num) * &d.inv())
            }
        }
    }

    /// Parse "p/q" or "p" (signed decimal integers) into this field.
    pub fn parse(&self, s: &str) -> Result<Scalar, ScalarError> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = n.parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
        let den: i64 = d.parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
        self.ratio(num, den)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "Q"),
            FieldSpec::Fp(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with a positive denominator (the
/// invariant `num_rational` maintains); prime-field values carry their modulus
/// so accidental mixing is detected at the first arithmetic operation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Q,
            Scalar::Fp { p, .. } => FieldSpec::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse; panics on zero (callers pivot on nonzeros only).
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                Scalar::Q(r.recip())
            }
            Scalar::Fp { p, v } => {
                assert!(*v != 0, "inverse of zero");
                Scalar::Fp {
                    p: *p,
                    v: mod_pow(*v, *p - 2, *p),
                }
            }
        }
    }

    fn check_same(&self, other: &Scalar) {
        match (self, other) {
            (Scalar::Q(_), Scalar::Q(_)) => {}
            (Scalar::Fp { p: a, .. }, Scalar::Fp { p: b, .. }) if a == b => {}
            _ => panic!(
                "mixed ground fields in one computation: {} vs {}",
                self.field(),
                other.field()
            ),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: (a + b) % p,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: (a + p - b) % p,
            },
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Scalar {
    /// |numerator| + |denominator| digit bound, used only by tests watching
    /// coefficient growth.
    pub fn magnitude_hint(&self) -> usize {
        match self {
            Scalar::Q(r) => (r.numer().abs().bits() + r.denom().bits()) as usize,
            Scalar::Fp { .. } => 1,
        }
    }
}

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mm = m as u128;
    let mut bb = b as u128 % mm;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    acc as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut r = d;
        while r != n - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            r <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let f = FieldSpec::Q;
        let x = f.ratio(2, 4).unwrap();
        assert_eq!(x.to_string(), "1/2");
        let y = f.ratio(1, -2).unwrap();
        assert_eq!(y.to_string(), "-1/2");
        assert!((&x + &y).is_zero());
    }

    #[test]
    fn parse_roundtrip() {
        let f = FieldSpec::Q;
        assert_eq!(f.parse("-3/6").unwrap(), f.ratio(-1, 2).unwrap());
        assert_eq!(f.parse("7").unwrap(), f.integer(7));
        assert!(f.parse("x").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::fp(7).unwrap();
        let x = f.integer(3);
        let y = f.integer(5);
        assert_eq!(&x * &y, f.integer(1));
        assert_eq!(x.inv(), f.integer(5));
        assert_eq!(&f.integer(-1) + &f.one(), f.zero());
        assert!(FieldSpec::fp(6).is_err());
    }

    #[test]
    #[should_panic(expected = "mixed ground fields")]
    fn mixing_fields_panics() {
        let _ = &FieldSpec::Q.one() + &FieldSpec::fp(5).unwrap().one();
    }
}
