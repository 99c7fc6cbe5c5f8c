//! Rational functions in canonical reduced form.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{index_of, Polynomial, Vars};
use crate::scalar::{Rational, Scalar};

/// `numerator / denominator` with `gcd = 1` and the denominator's graded-lex
/// leading coefficient equal to `1` (no `TAU`). Structural equality is
/// equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Canonical reduced fraction `num / den`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.vars() != den.vars() {
            return Err(Error::ChartMismatch(format!("{:?} vs {:?}", num.vars(), den.vars())));
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero(num.vars()));
        }
        let (num, den) = if den.constant_value().is_some_and(|c| c.is_monomial()) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let (den, unit) = den.normalize_unit();
        let num = num.scale(&unit.inv().expect("monomial unit"));
        Ok(RationalFunction { num, den })
    }

    /// For `num / den` already known to be coprime.
    fn from_coprime(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction::zero(num.vars());
        }
        let (den, unit) = den.normalize_unit();
        let num = num.scale(&unit.inv().expect("monomial unit"));
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        RationalFunction { num: Polynomial::zero(vars), den: Polynomial::one(vars) }
    }

    pub fn one(vars: &Vars) -> Self {
        RationalFunction::constant(vars, Scalar::one())
    }

    pub fn constant(vars: &Vars, c: Scalar) -> Self {
        RationalFunction::from_poly(Polynomial::constant(vars, c))
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        RationalFunction::from_poly(Polynomial::var(vars, i))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Denominator `1`. A constant denominator such as `TAU + 1` is not a
    /// unit of the scalar ring and keeps the function off this list.
    pub fn is_polynomial(&self) -> bool {
        self.den.constant_value().is_some_and(|c| c.is_one())
    }

    /// Constant with a value in the scalar ring.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.is_polynomial()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn add(&self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RationalFunction::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        if self.is_polynomial() || o.is_polynomial() {
            return RationalFunction::from_coprime(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den));
        }
        // Henrici: only the common part of the denominators can cancel
        let h = self.den.gcd(&o.den);
        let (b, d) = (quotient(&self.den, &h), quotient(&o.den, &h));
        let t = self.num.mul(&d).add(&o.num.mul(&b));
        if t.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        let g = t.gcd(&h);
        RationalFunction::from_coprime(quotient(&t, &g), b.mul(&quotient(&o.den, &g)))
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RationalFunction) -> RationalFunction {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let num = quotient(&self.num, &g1).mul(&quotient(&o.num, &g2));
        RationalFunction::from_coprime(num, quotient(&self.den, &g2).mul(&quotient(&o.den, &g1)))
    }

    pub fn scale(&self, s: &Scalar) -> RationalFunction {
        if s.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        if s.is_monomial() {
            return RationalFunction { num: self.num.scale(s), den: self.den.clone() };
        }
        RationalFunction::new(self.num.scale(s), self.den.clone()).unwrap()
    }

    pub fn mul_poly(&self, p: &Polynomial) -> RationalFunction {
        RationalFunction::new(self.num.mul(p), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RationalFunction) -> Result<RationalFunction> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<RationalFunction> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(k), den: base.den.pow(k) }.renormalized())
    }

    fn renormalized(self) -> RationalFunction {
        RationalFunction::new(self.num, self.den).unwrap()
    }

    /// Order of vanishing along `{p = 0}`; `None` encodes `+∞` for `f = 0`.
    pub fn ord_along(&self, p: &Polynomial) -> Result<Option<i64>> {
        if p.is_constant() {
            return Err(Error::ConstantDivisor(p.to_string()));
        }
        if self.is_zero() {
            return Ok(None);
        }
        Ok(Some(multiplicity(&self.num, p) as i64 - multiplicity(&self.den, p) as i64))
    }

    pub fn differentiate(&self, var: &str) -> Result<RationalFunction> {
        let i = index_of(self.vars(), var)?;
        Ok(self.derivative(i))
    }

    pub fn derivative(&self, i: usize) -> RationalFunction {
        let dn = self.num.derivative(i);
        if self.is_polynomial() {
            return RationalFunction { num: dn, den: self.den.clone() };
        }
        if self.den.is_constant() {
            return RationalFunction::new(dn, self.den.clone()).unwrap();
        }
        let dd = self.den.derivative(i);
        // with num, den coprime, gcd(num' den - num den', den²) = gcd(den, den')
        let g = self.den.gcd(&dd);
        let num = quotient(&dn.mul(&self.den).sub(&self.num.mul(&dd)), &g);
        RationalFunction::from_coprime(num, self.den.mul(&quotient(&self.den, &g)))
    }

    /// Exact value at a rational point given in chart order.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Scalar> {
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return Err(Error::Pole(format!("{self} at ({})", render_point(point))));
        }
        self.num.evaluate(point).checked_div(&d)
    }

    /// Evaluates at a point given by coordinate name.
    pub fn evaluate_named(&self, point: &[(&str, Rational)]) -> Result<Scalar> {
        let mut coords = vec![Rational::zero(); self.vars().len()];
        let mut seen = vec![false; coords.len()];
        for (name, value) in point {
            let i = index_of(self.vars(), name)?;
            coords[i] = value.clone();
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::UnknownVariable(format!("no value for {}", self.vars()[i])));
        }
        self.evaluate(&coords)
    }

    /// Composition: the `i`-th variable is replaced by `images[i]`, all
    /// images living over a common chart.
    pub fn substitute(&self, images: &[RationalFunction], target: &Vars) -> Result<RationalFunction> {
        assert_eq!(images.len(), self.vars().len(), "substitution arity");
        let (nn, nd) = substitute_poly(&self.num, images, target);
        let (dn, dd) = substitute_poly(&self.den, images, target);
        if dn.is_zero() {
            return Err(Error::Pole(format!("denominator of {self} vanishes identically after substitution")));
        }
        RationalFunction::new(nn.mul(&dd), nd.mul(&dn))
    }

    pub fn embed(&self, target: &Vars) -> Result<RationalFunction> {
        Ok(RationalFunction { num: self.num.embed(target)?, den: self.den.embed(target)? })
    }
}

fn render_point(point: &[Rational]) -> String {
    point.iter().map(crate::scalar::fmt_rational).collect::<Vec<_>>().join(", ")
}

/// Number of times `p` divides `f` exactly.
fn quotient(a: &Polynomial, g: &Polynomial) -> Polynomial {
    if g.is_constant() && g.constant_value().is_some_and(|c| c.is_one()) {
        return a.clone();
    }
    a.div_exact(g).expect("divisor of a gcd")
}

pub(crate) fn multiplicity(f: &Polynomial, p: &Polynomial) -> u32 {
    let mut k = 0;
    let mut cur = f.clone();
    while !cur.is_zero() {
        match cur.div_exact(p) {
            Some(q) => {
                cur = q;
                k += 1;
            }
            None => break,
        }
    }
    k
}

/// `p(images)` as `(numerator, denominator)` over `target`, unreduced.
fn substitute_poly(p: &Polynomial, images: &[RationalFunction], target: &Vars) -> (Polynomial, Polynomial) {
    let n = images.len();
    let degs: Vec<u32> = (0..n).map(|i| p.degree_in(i)).collect();
    let num_pows: Vec<Vec<Polynomial>> = (0..n).map(|i| powers(&images[i].num, degs[i], target)).collect();
    let den_pows: Vec<Vec<Polynomial>> = (0..n).map(|i| powers(&images[i].den, degs[i], target)).collect();
    let mut acc = Polynomial::zero(target);
    for (m, c) in p.terms() {
        let mut t = Polynomial::constant(target, c.clone());
        for i in 0..n {
            let e = m.0[i] as usize;
            if degs[i] == 0 {
                continue;
            }
            t = t.mul(&num_pows[i][e]).mul(&den_pows[i][degs[i] as usize - e]);
        }
        acc = acc.add(&t);
    }
    let mut den = Polynomial::one(target);
    for i in 0..n {
        if degs[i] > 0 {
            den = den.mul(&den_pows[i][degs[i] as usize]);
        }
    }
    (acc, den)
}

fn powers(p: &Polynomial, d: u32, target: &Vars) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one(target)];
    for k in 1..=d as usize {
        let next = out[k - 1].mul(p);
        out.push(next);
    }
    out
}

/// `num` alone for polynomials, `(num)/(den)` otherwise.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction[{}]({self})", self.vars().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vars;
    use crate::scalar::int;

    fn z() -> (Vars, Polynomial) {
        let v = vars(&["z"]);
        let z = Polynomial::var(&v, 0);
        (v, z)
    }

    #[test]
    fn non_unit_constant_denominator() {
        let (v, z) = z();
        let t1 = Polynomial::constant(&v, &Scalar::tau_pow(1) + &Scalar::one());
        let f = RationalFunction::new(z.clone(), t1.mul(&z)).unwrap();
        assert!(!f.is_polynomial() && f.constant_value().is_none());
        assert_eq!(f.to_string(), "(1)/((TAU + 1))");
        assert!(f.mul(&RationalFunction::from_poly(t1)).sub(&RationalFunction::one(&v)).is_zero());
    }

    #[test]
    fn normalize_examples() {
        let (v, z) = z();
        let one = Polynomial::one(&v);
        let f = RationalFunction::new(z.mul(&z).sub(&z), z.clone()).unwrap();
        assert_eq!(f, RationalFunction::from_poly(z.sub(&one)));
        let zero = RationalFunction::new(Polynomial::zero(&v), z.sub(&one)).unwrap();
        assert_eq!(zero.den(), &one);
        assert_eq!(RationalFunction::new(z.clone(), Polynomial::zero(&v)), Err(Error::ZeroDenominator));

        let v2 = vars(&["x", "y"]);
        let x = Polynomial::var(&v2, 0);
        let y = Polynomial::var(&v2, 1);
        let f = RationalFunction::new(x.add(&y).mul(&x.sub(&y)), x.sub(&y).pow(2)).unwrap();
        assert_eq!(f.num(), &x.add(&y));
        assert_eq!(f.den(), &x.sub(&y));
    }

    #[test]
    fn denominator_normalization_moves_tau_up() {
        let (v, z) = z();
        let f = RationalFunction::new(Polynomial::one(&v), z.scale(&Scalar::tau_pow(1))).unwrap();
        assert_eq!(f.den(), &z);
        assert_eq!(f.num(), &Polynomial::constant(&v, Scalar::tau_pow(-1)));
        assert_eq!(f.to_string(), "(TAU^-1)/(z)");
    }

    #[test]
    fn field_operation_examples() {
        let (v, z) = z();
        let inv_z = RationalFunction::new(Polynomial::one(&v), z.clone()).unwrap();
        assert!(inv_z.add(&inv_z.neg()).is_zero());
        assert_eq!(inv_z.mul(&RationalFunction::from_poly(z.clone())), RationalFunction::one(&v));
        let v2 = vars(&["x", "y"]);
        let x = RationalFunction::var(&v2, 0);
        let y = RationalFunction::var(&v2, 1);
        let q = x.mul(&x).sub(&y.mul(&y)).div(&x.sub(&y)).unwrap();
        assert_eq!(q, x.add(&y));
        assert_eq!(x.div(&RationalFunction::zero(&v2)), Err(Error::DivisionByZero));
    }

    #[test]
    fn ord_along_examples() {
        let (v, z) = z();
        let one = Polynomial::one(&v);
        let inv_z = RationalFunction::new(one.clone(), z.clone()).unwrap();
        assert_eq!(inv_z.ord_along(&z).unwrap(), Some(-1));
        let zm1 = z.sub(&one);
        let f = RationalFunction::new(zm1.pow(2), z.mul(&zm1)).unwrap();
        assert_eq!(f.ord_along(&zm1).unwrap(), Some(1));
        let v2 = vars(&["x", "y"]);
        let x = Polynomial::var(&v2, 0);
        let y = Polynomial::var(&v2, 1);
        let g = RationalFunction::new(x.add(&y), x.sub(&y).pow(3)).unwrap();
        assert_eq!(g.ord_along(&x.sub(&y)).unwrap(), Some(-3));
        assert!(g.ord_along(&Polynomial::one(&v2)).is_err());
        assert_eq!(RationalFunction::zero(&v).ord_along(&z).unwrap(), None);
    }

    #[test]
    fn differentiate_and_evaluate_examples() {
        let (v, z) = z();
        let inv_z = RationalFunction::new(Polynomial::one(&v), z.clone()).unwrap();
        let d = inv_z.differentiate("z").unwrap();
        assert_eq!(d, RationalFunction::new(Polynomial::constant(&v, Scalar::from_int(-1)), z.pow(2)).unwrap());
        assert!(RationalFunction::constant(&v, Scalar::from_int(7)).differentiate("z").unwrap().is_zero());
        assert!(inv_z.differentiate("q").is_err());
        let v2 = vars(&["x", "y"]);
        let xy = RationalFunction::var(&v2, 0).mul(&RationalFunction::var(&v2, 1));
        assert_eq!(xy.differentiate("x").unwrap(), RationalFunction::var(&v2, 1));

        assert_eq!(inv_z.evaluate(&[int(2)]).unwrap(), Scalar::from_rational(crate::scalar::rat(1, 2)));
        assert!(matches!(inv_z.evaluate(&[int(0)]), Err(Error::Pole(_))));
        let x = RationalFunction::var(&v2, 0);
        let y = RationalFunction::var(&v2, 1);
        let f = x.add(&y).div(&x.sub(&y)).unwrap();
        assert_eq!(f.evaluate_named(&[("x", int(1)), ("y", int(0))]).unwrap(), Scalar::one());
    }
}
