//! Exact field elements.
//!
//! Rationals use an `i64` fast path and spill to `BigRational` on overflow.
//! Prime-field residues carry their modulus so every value is self-contained.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The base field every map in a session is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::Format(format!("{p} is not prime")));
        }
        if p >= 1 << 32 {
            return Err(Error::Format(format!("prime {p} too large (limit 2^32)")));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(Ratio::from_integer(n)),
            FieldSpec::PrimeField(p) => Scalar::Fp {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Format("zero denominator".into()));
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Q(Ratio::new(num, den))),
            FieldSpec::PrimeField(_) => {
                let d = self.from_i64(den);
                let inv = d
                    .inv()
                    .ok_or_else(|| Error::Format(format!("{den} is not invertible in {self}")))?;
                Ok(&self.from_i64(num) * &inv)
            }
        }
    }

    /// Parses `"-3/7"`, `"−3/7"`, `"5"`, or `"5 mod 11"`.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let t = s.trim().replace('\u{2212}', "-");
        let bad = || Error::Format(format!("cannot parse scalar {s:?} in {self}"));
        match self {
            FieldSpec::Rationals => {
                if t.contains("mod") {
                    return Err(bad());
                }
                let (n, d) = match t.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (t.as_str(), "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::from_big(BigRational::new(n, d)))
            }
            FieldSpec::PrimeField(p) => {
                let body = match t.split_once("mod") {
                    Some((v, m)) => {
                        let m: u64 = m.trim().parse().map_err(|_| bad())?;
                        if m != p {
                            return Err(Error::Format(format!(
                                "scalar {s:?} has modulus {m}, field is {self}"
                            )));
                        }
                        v.trim().to_string()
                    }
                    None => t.clone(),
                };
                let (n, d) = match body.split_once('/') {
                    Some((n, d)) => (n.trim().to_string(), d.trim().to_string()),
                    None => (body.clone(), "1".to_string()),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                let pb = BigInt::from(p);
                let n = n.mod_floor(&pb).to_i64().unwrap();
                let d = d.mod_floor(&pb).to_i64().unwrap();
                self.from_ratio(n, d)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<FieldSpec> {
        let t = s.trim();
        if t == "Q" || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("F_")
            .or_else(|| t.strip_prefix("GF("))
            .map(|d| d.trim_end_matches(')'))
            .ok_or_else(|| Error::Format(format!("unknown field {s:?}")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Format(format!("unknown field {s:?}")))?;
        FieldSpec::prime(p)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact scalar. `Q` holds rationals that fit in `i64`; `Big` holds the rest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Ratio<i64>),
    Big(Box<BigRational>),
    Fp { v: u64, p: u64 },
}

fn to_big(r: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl Scalar {
    fn from_big(b: BigRational) -> Scalar {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            // i64::MIN cannot be negated safely by the small path
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Scalar::Q(Ratio::new_raw(n, d))
            }
            _ => Scalar::Big(Box::new(b)),
        }
    }

    fn big(&self) -> BigRational {
        match self {
            Scalar::Q(r) => to_big(r),
            Scalar::Big(b) => (**b).clone(),
            Scalar::Fp { .. } => panic!("mixing rational and prime-field scalars"),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Fp { p, .. } => FieldSpec::PrimeField(*p),
            _ => FieldSpec::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Big(b) => b.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Big(b) => b.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(r) => {
                if *r.numer() == i64::MIN {
                    Scalar::from_big(to_big(r).recip())
                } else {
                    Scalar::Q(r.recip())
                }
            }
            Scalar::Big(b) => Scalar::from_big(b.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    /// Numerator and denominator for rationals (gcd 1, positive denominator).
    pub fn as_big_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Fp { .. } => None,
            _ => Some(self.big()),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn checked_add(a: &Ratio<i64>, b: &Ratio<i64>) -> Option<Ratio<i64>> {
    let (an, ad) = (*a.numer(), *a.denom());
    let (bn, bd) = (*b.numer(), *b.denom());
    if ad == bd {
        return Some(Ratio::new(an.checked_add(bn)?, ad));
    }
    let g = ad.gcd(&bd);
    let l = (ad / g).checked_mul(bd)?;
    let x = an.checked_mul(l / ad)?;
    let y = bn.checked_mul(l / bd)?;
    Some(Ratio::new(x.checked_add(y)?, l))
}

fn checked_mul(a: &Ratio<i64>, b: &Ratio<i64>) -> Option<Ratio<i64>> {
    let (an, ad) = (*a.numer(), *a.denom());
    let (bn, bd) = (*b.numer(), *b.denom());
    if an == 0 || bn == 0 {
        return Some(Ratio::from_integer(0));
    }
    let g1 = an.gcd(&bd);
    let g2 = bn.gcd(&ad);
    let n = (an / g1).checked_mul(bn / g2)?;
    let d = (ad / g2).checked_mul(bd / g1)?;
    Some(Ratio::new_raw(n, d))
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                debug_assert_eq!(p, q, "mixing prime fields");
                let s = a + b;
                Scalar::Fp {
                    v: if s >= *p { s - p } else { s },
                    p: *p,
                }
            }
            (Scalar::Q(a), Scalar::Q(b)) => match checked_add(a, b) {
                Some(r) => Scalar::Q(r),
                None => Scalar::from_big(to_big(a) + to_big(b)),
            },
            _ => Scalar::from_big(self.big() + rhs.big()),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            (Scalar::Q(a), Scalar::Q(b)) => match checked_mul(a, b) {
                Some(r) => Scalar::Q(r),
                None => Scalar::from_big(to_big(a) * to_big(b)),
            },
            _ => Scalar::from_big(self.big() * rhs.big()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
            Scalar::Q(r) if *r.numer() != i64::MIN => Scalar::Q(-*r),
            _ => Scalar::from_big(-self.big()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
            Scalar::Fp { v, p } => write!(f, "{v} mod {p}"),
        }
    }
}

/// Sign of a rational scalar; prime-field values report `0` or `1`.
pub fn signum(s: &Scalar) -> i32 {
    match s {
        Scalar::Q(r) => r.numer().signum() as i32,
        Scalar::Big(b) => {
            if b.is_positive() {
                1
            } else if b.is_negative() {
                -1
            } else {
                0
            }
        }
        Scalar::Fp { v, .. } => (*v != 0) as i32,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_spills_to_bigint() {
        let q = FieldSpec::Rationals;
        let big = q.from_i64(i64::MAX);
        let s = &big + &big;
        assert!(matches!(s, Scalar::Big(_)));
        let back = &s - &big;
        assert_eq!(back, big);
        assert!(matches!(back, Scalar::Q(_)));
    }

    #[test]
    fn parse_and_print() {
        let q = FieldSpec::Rationals;
        let x = q.parse_scalar("\u{2212}6/14").unwrap();
        assert_eq!(x.to_string(), "-3/7");
        assert_eq!(q.parse_scalar("-3/7").unwrap(), x);
        let f = FieldSpec::prime(11).unwrap();
        assert_eq!(f.parse_scalar("5 mod 11").unwrap().to_string(), "5 mod 11");
        assert_eq!(f.parse_scalar("-1").unwrap().to_string(), "10 mod 11");
        assert_eq!(f.parse_scalar("1/2").unwrap().to_string(), "6 mod 11");
        assert!(f.parse_scalar("1 mod 7").is_err());
        assert!(q.parse_scalar("1/0").is_err());
        assert!("F_12".parse::<FieldSpec>().is_err());
        assert_eq!("F_7".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField(7));
    }

    #[test]
    fn field_inverse() {
        let f = FieldSpec::PrimeField(13);
        for n in 1..13 {
            let x = f.from_i64(n);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }
}
