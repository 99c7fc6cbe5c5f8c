//! Exact scalars: rationals adjoined a formal transcendental `TAU` standing for 2πi.
//!
//! A [`Scalar`] is a Laurent polynomial in `TAU` with rational coefficients,
//! stored as a ledger `exponent -> coefficient`. Only single-monomial scalars
//! are invertible.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<i32, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::monomial(r, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(int(n))
    }

    /// `c * TAU^k`
    pub fn monomial(c: Rational, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Scalar { terms }
    }

    pub fn tau_pow(k: i32) -> Self {
        Scalar::monomial(Rational::one(), k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterates `(tau exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The rational value when the scalar carries no `TAU`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn min_tau_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_tau_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of the highest `TAU` power.
    pub fn leading_rational(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    pub fn shift_tau(&self, by: i32) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(k, c)| (k + by, c.clone())).collect(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !self.is_monomial() {
            return Err(Error::NonMonomialDivision(self.to_string()));
        }
        let (k, c) = self.terms.iter().next().unwrap();
        Ok(Scalar::monomial(c.recip(), -k))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign of the leading rational coefficient; used only for pretty printing.
    pub(crate) fn is_negative_monomial(&self) -> bool {
        self.is_monomial() && self.terms.values().next().unwrap().is_negative()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            let e = terms.entry(*k).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(k);
            }
        }
        Scalar { terms }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut terms: BTreeMap<i32, Rational> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let e = terms.entry(ka + kb).or_insert_with(Rational::zero);
                *e += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Scalar { terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_tau_monomial(c: &Rational, k: i32) -> String {
    match k {
        0 => fmt_rational(c),
        _ => {
            let tau = if k == 1 { "TAU".to_string() } else { format!("TAU^{k}") };
            if c.is_one() {
                tau
            } else if (-c).is_one() {
                format!("-{tau}")
            } else {
                format!("{}*{tau}", fmt_rational(c))
            }
        }
    }
}

/// Renders highest `TAU` power first, e.g. `2*TAU + 1/3`, `TAU^-1`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            if first {
                write!(f, "{}", fmt_tau_monomial(c, *k))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", fmt_tau_monomial(&-c, *k))?;
            } else {
                write!(f, " + {}", fmt_tau_monomial(c, *k))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_ledger_arithmetic() {
        let t = Scalar::tau_pow(1);
        let inv = t.inv().unwrap();
        assert!((&t * &inv).is_one());
        let s = &Scalar::from_int(2) + &t;
        assert_eq!(s.to_string(), "TAU + 2");
        assert!(s.inv().is_err());
        assert!((&s - &s).is_zero());
        assert_eq!(Scalar::monomial(rat(-3, 2), -1).to_string(), "-3/2*TAU^-1");
    }

    #[test]
    fn zero_has_no_terms() {
        let z = &Scalar::from_int(3) - &Scalar::from_int(3);
        assert!(z.is_zero());
        assert_eq!(z, Scalar::zero());
        assert!(Scalar::zero().inv().is_err());
    }
}
