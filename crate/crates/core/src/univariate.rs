//! Univariate polynomials over a rational-function coefficient field, and
//! rational root finding for polynomials over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Vars};
use crate::rational::RationalFunction;
use crate::scalar::{Rational, Scalar};

/// `Σ c_k v^k` where `v` is chart variable `var` and every `c_k` is free of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    vars: Vars,
    var: usize,
    coeffs: Vec<RationalFunction>,
}

impl UniPoly {
    pub fn zero(vars: &Vars, var: usize) -> Self {
        UniPoly { vars: vars.clone(), var, coeffs: Vec::new() }
    }

    pub fn constant(c: RationalFunction, var: usize) -> Self {
        let vars = c.vars().clone();
        UniPoly::from_coeffs(&vars, var, vec![c])
    }

    pub fn from_coeffs(vars: &Vars, var: usize, coeffs: Vec<RationalFunction>) -> Self {
        let mut p = UniPoly { vars: vars.clone(), var, coeffs };
        p.trim();
        p
    }

    pub fn from_polynomial(p: &Polynomial, var: usize) -> Self {
        let coeffs = p.coeffs_in(var).into_iter().map(RationalFunction::from_poly).collect();
        UniPoly::from_coeffs(p.vars(), var, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs.get(k).cloned().unwrap_or_else(|| RationalFunction::zero(&self.vars))
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn lc(&self) -> RationalFunction {
        self.coeffs.last().cloned().unwrap_or_else(|| RationalFunction::zero(&self.vars))
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let v = RationalFunction::var(&self.vars, self.var);
        let mut acc = RationalFunction::zero(&self.vars);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&v).add(c);
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        UniPoly::from_coeffs(&self.vars, self.var, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::from_coeffs(&self.vars, self.var, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &RationalFunction) -> UniPoly {
        UniPoly::from_coeffs(&self.vars, self.var, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.vars, self.var);
        }
        let mut coeffs = vec![RationalFunction::zero(&self.vars); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UniPoly::from_coeffs(&self.vars, self.var, coeffs)
    }

    pub fn monic(&self) -> UniPoly {
        match self.coeffs.last() {
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = d.lc().inv()?;
        let mut r = self.clone();
        let mut q = vec![RationalFunction::zero(&self.vars); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let c = r.lc().mul(&inv);
            let shift = dr - dd;
            q[shift] = c.clone();
            let mut sub = vec![RationalFunction::zero(&self.vars); shift];
            sub.extend(d.coeffs.iter().map(|x| x.mul(&c)));
            r = r.sub(&UniPoly::from_coeffs(&self.vars, self.var, sub));
        }
        Ok((UniPoly::from_coeffs(&self.vars, self.var, q), r))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// `(g, s, t)` with `s·a + t·b = g`, `g` monic (or zero when both are zero).
    pub fn ext_gcd(a: &UniPoly, b: &UniPoly) -> Result<(UniPoly, UniPoly, UniPoly)> {
        let one = UniPoly::constant(RationalFunction::one(&a.vars), a.var);
        let zero = UniPoly::zero(&a.vars, a.var);
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = r0.lc().inv()?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// Inverse of `self` modulo `m`; fails when they share a factor.
    pub fn inverse_mod(&self, m: &UniPoly) -> Result<UniPoly> {
        let (g, s, _) = UniPoly::ext_gcd(&self.rem(m)?, m)?;
        if g.degree() != Some(0) {
            return Err(Error::ZeroDivisor(format!("{} shares a factor with {}", self.to_rational_function(), m.to_rational_function())));
        }
        s.rem(m)
    }

    /// Power sums `p_0, …, p_{n-1}` of the roots of a polynomial of degree `n`.
    pub fn power_sums(&self) -> Vec<RationalFunction> {
        let m = self.monic();
        let n = m.degree().unwrap_or(0);
        // monic x^n + a_{n-1} x^{n-1} + … ; e_k = (-1)^k a_{n-k}
        let a = |k: usize| m.coeff(n - k);
        let mut p = vec![RationalFunction::constant(&self.vars, Scalar::from_int(n as i64))];
        for k in 1..n {
            let mut s = a(k).scale(&Scalar::from_int(k as i64));
            for i in 1..k {
                s = s.add(&a(i).mul(&p[k - i]));
            }
            p.push(s.neg());
        }
        p
    }

    /// Trace of multiplication by a residue class `r mod self` in the
    /// extension `K[v]/(self)`.
    pub fn trace(&self, r: &UniPoly) -> Result<RationalFunction> {
        let red = r.rem(self)?;
        let sums = self.power_sums();
        let mut acc = RationalFunction::zero(&self.vars);
        for (k, c) in red.coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&sums[k]));
        }
        Ok(acc)
    }

    /// Reduces a rational function `n/d` (numerator and denominator as
    /// polynomials in `var`) modulo `self`.
    pub fn reduce_fraction(&self, f: &RationalFunction) -> Result<UniPoly> {
        let num = UniPoly::from_polynomial(f.num(), self.var);
        let den = UniPoly::from_polynomial(f.den(), self.var);
        let inv = den.inverse_mod(self)?;
        num.mul(&inv).rem(self)
    }
}

/// All roots of a univariate polynomial (in chart variable `var`) over Q,
/// with multiplicities. Fails when a root is not rational.
pub fn rational_roots(p: &Polynomial, var: usize) -> Result<Vec<(Rational, u32)>> {
    if p.is_zero() {
        return Err(Error::Degenerate("roots of the zero polynomial".into()));
    }
    if (0..p.nvars()).any(|i| i != var && p.uses_var(i)) {
        return Err(Error::Degenerate(format!("{p} is not univariate")));
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    for c in p.coeffs_in(var) {
        let s = c.constant_value().unwrap_or_else(Scalar::zero);
        coeffs.push(s.as_rational().ok_or_else(|| Error::Irrational(format!("TAU in {p}")))?);
    }
    let mut out = Vec::new();
    // strip zero roots first
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push((Rational::zero(), zeros as u32));
        coeffs.drain(..zeros);
    }
    let mut ints = clear_denominators(&coeffs);
    while ints.len() > 1 {
        let root = find_root(&ints).ok_or_else(|| Error::Irrational(format!("{p} has a non-rational root")))?;
        let mut mult = 0;
        while ints.len() > 1 {
            match deflate(&ints, &root) {
                Some(q) => {
                    ints = q;
                    mult += 1;
                }
                None => break,
            }
        }
        out.push((root, mult));
    }
    out.sort();
    Ok(out)
}

fn clear_denominators(coeffs: &[Rational]) -> Vec<BigInt> {
    let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn eval_int(coeffs: &[BigInt], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + Rational::from_integer(c.clone());
    }
    acc
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let small = n.to_u64()?;
    if small > 1 << 40 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= small {
        if small % d == 0 {
            out.push(BigInt::from(d));
            if d * d != small {
                out.push(BigInt::from(small / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn find_root(coeffs: &[BigInt]) -> Option<Rational> {
    let a0 = coeffs.first()?;
    let an = coeffs.last()?;
    let ps = divisors(a0)?;
    let qs = divisors(an)?;
    let mut cands: Vec<Rational> = Vec::new();
    for p in &ps {
        for q in &qs {
            let r = Rational::new(p.clone(), q.clone());
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort();
    cands.dedup();
    cands.into_iter().find(|r| eval_int(coeffs, r).is_zero())
}

/// Divides by `(q x - p)` for the root `p/q`, if exact.
fn deflate(coeffs: &[BigInt], root: &Rational) -> Option<Vec<BigInt>> {
    if !eval_int(coeffs, root).is_zero() {
        return None;
    }
    // synthetic division over Q, then rescale to integers
    let n = coeffs.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (1..=n).rev() {
        carry = carry * root + Rational::from_integer(coeffs[k].clone());
        q[k - 1] = carry.clone();
    }
    Some(clear_denominators(&q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vars;
    use crate::scalar::{int, rat};

    #[test]
    fn rational_roots_with_multiplicity() {
        let v = vars(&["z"]);
        let z = Polynomial::var(&v, 0);
        let c = |n: i64, d: i64| Polynomial::constant(&v, Scalar::from_rational(rat(n, d)));
        let p = z.mul(&z.sub(&c(1, 2)).pow(2)).mul(&z.add(&c(3, 1)));
        assert_eq!(rational_roots(&p, 0).unwrap(), vec![(int(-3), 1), (int(0), 1), (rat(1, 2), 2)]);
        let irr = z.pow(2).sub(&c(2, 1));
        assert!(matches!(rational_roots(&irr, 0), Err(Error::Irrational(_))));
    }

    #[test]
    fn inverse_modulo_curve() {
        let v = vars(&["x", "y"]);
        let x = Polynomial::var(&v, 0);
        let y = Polynomial::var(&v, 1);
        let p = y.pow(2).sub(&x.pow(3)).sub(&x);
        let m = UniPoly::from_polynomial(&p, 1);
        let inv = UniPoly::from_polynomial(&y, 1).inverse_mod(&m).unwrap();
        let expected = RationalFunction::new(y.clone(), x.pow(3).add(&x)).unwrap();
        assert_eq!(inv.to_rational_function(), expected);
        assert!(UniPoly::from_polynomial(&p, 1).inverse_mod(&m).is_err());
    }

    #[test]
    fn trace_of_square_root_branches() {
        // z^2 - w over Q(w): Tr(1/(2 z^2)) = 1/w and Tr(1/(2z)) = 0
        let v = vars(&["z", "w"]);
        let z = Polynomial::var(&v, 0);
        let w = Polynomial::var(&v, 1);
        let f = UniPoly::from_polynomial(&z.pow(2).sub(&w), 0);
        let two = Polynomial::constant(&v, Scalar::from_int(2));
        let r = f.reduce_fraction(&RationalFunction::new(Polynomial::one(&v), two.mul(&z.pow(2))).unwrap()).unwrap();
        assert_eq!(f.trace(&r).unwrap(), RationalFunction::new(Polynomial::one(&v), w.clone()).unwrap());
        let r = f.reduce_fraction(&RationalFunction::new(Polynomial::one(&v), two.mul(&z)).unwrap()).unwrap();
        assert!(f.trace(&r).unwrap().is_zero());
    }
}
