//! Sparse multivariate polynomials with [`Scalar`] coefficients.
//!
//! Terms are ordered graded-lexicographically over the chart's declared
//! coordinate order; that order fixes canonical printing and the
//! normalization of rational functions.

pub(crate) mod qpoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, Rational, Scalar};
use qpoly::QPoly;

/// Ordered coordinate names of a chart.
pub type Vars = Arc<[String]>;

pub fn vars(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

pub fn vars_from(names: Vec<String>) -> Vars {
    names.into()
}

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: Scalar) -> Self {
        let mut p = Polynomial::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Polynomial::constant(vars, Scalar::one())
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Polynomial::from_terms(vars, [(Monomial(e), Scalar::one())])
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self> {
        let i = index_of(vars, name)?;
        Ok(Polynomial::var(vars, i))
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut out = Polynomial::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "monomial arity");
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Scalar::zero))
        } else {
            None
        }
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// True when no coefficient carries `TAU`.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    fn check_vars(&self, other: &Polynomial) {
        assert!(
            self.vars == other.vars,
            "polynomials over different charts: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_vars(other);
        let mut out = Polynomial::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect());
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[i] > 0 {
                let mut e = m.0.clone();
                let k = e[i];
                e[i] -= 1;
                out.add_term(Monomial(e), c.scale(&Rational::from_integer(k.into())));
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Scalar {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut v = Rational::one();
            for (x, k) in point.iter().zip(&m.0) {
                v *= qpoly::pow_rat(x, *k);
            }
            acc = &acc + &c.scale(&v);
        }
        acc
    }

    /// Substitutes `x_i = value` and keeps the same variable list.
    pub fn eval_var(&self, i: usize, value: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] = 0;
            out.add_term(Monomial(e), c.scale(&qpoly::pow_rat(value, k)));
        }
        out
    }

    /// Coefficients with respect to `x_i`, each free of `x_i`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Polynomial> {
        let d = self.degree_in(i);
        let mut out = vec![Polynomial::zero(&self.vars); d as usize + 1];
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            let mut e = m.0.clone();
            e[i] = 0;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Reinterprets the polynomial over `target`, which must contain every used variable.
    pub fn embed(&self, target: &Vars) -> Result<Polynomial> {
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| target.iter().position(|t| t == v)).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, k) in m.0.iter().enumerate() {
                if *k > 0 {
                    let j = map[i].ok_or_else(|| Error::UnknownVariable(self.vars[i].clone()))?;
                    e[j] += k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    // ---- conversion to the Q engine: TAU becomes an extra trailing variable ----

    pub(crate) fn to_q_with_tau(&self) -> QPoly {
        let n = self.nvars();
        let shift = self.terms.values().filter_map(|c| c.min_tau_exponent()).min().unwrap_or(0);
        let mut out = QPoly::zero(n + 1);
        for (m, c) in &self.terms {
            for (k, r) in c.terms() {
                let mut e = m.0.clone();
                e.push((k - shift) as u32);
                out = out.add(&QPoly::monomial(n + 1, e, r.clone()));
            }
        }
        out
    }

    pub(crate) fn from_q_with_tau(vars: &Vars, q: &QPoly) -> Polynomial {
        let n = vars.len();
        let mut out = Polynomial::zero(vars);
        for (e, r) in &q.terms {
            out.add_term(Monomial(e[..n].to_vec()), Scalar::monomial(r.clone(), e[n] as i32));
        }
        out
    }

    pub(crate) fn to_q(&self) -> Result<QPoly> {
        let mut out = QPoly::zero(self.nvars());
        for (m, c) in &self.terms {
            let r = c
                .as_rational()
                .ok_or_else(|| Error::Unsupported(format!("elimination over TAU-valued coefficients in {self}")))?;
            out.terms.insert(m.0.clone(), r);
        }
        Ok(out)
    }

    pub(crate) fn from_q(vars: &Vars, q: &QPoly) -> Polynomial {
        let mut out = Polynomial::zero(vars);
        for (e, r) in &q.terms {
            out.add_term(Monomial(e.clone()), Scalar::from_rational(r.clone()));
        }
        out
    }

    /// Greatest common divisor, up to a unit `c*TAU^k`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        self.check_vars(other);
        let g = qpoly::gcd(&self.to_q_with_tau(), &other.to_q_with_tau());
        Polynomial::from_q_with_tau(&self.vars, &g)
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        self.check_vars(d);
        if d.is_zero() {
            return None;
        }
        if let Some(ci) = d.constant_value().and_then(|c| c.inv().ok()) {
            return Some(self.scale(&ci));
        }
        let (a, sa) = (self.to_q_with_tau(), min_tau(self));
        let (b, sb) = (d.to_q_with_tau(), min_tau(d));
        let q = a.div_exact(&b)?;
        Some(Polynomial::from_q_with_tau(&self.vars, &q).shift_tau(sa - sb))
    }

    pub(crate) fn shift_tau(&self, by: i32) -> Polynomial {
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.shift_tau(by))).collect() }
    }

    /// Divides by the unit that makes the graded-lex leading coefficient `1`
    /// (for a non-monomial leading scalar: rational part of its top `TAU`
    /// power `1`, lowest `TAU` power `0`). Returns the normalized polynomial
    /// and the unit divided out.
    pub fn normalize_unit(&self) -> (Polynomial, Scalar) {
        let Some((_, lc)) = self.leading() else {
            return (self.clone(), Scalar::one());
        };
        let unit = if lc.is_monomial() {
            lc.clone()
        } else {
            Scalar::monomial(lc.leading_rational().unwrap().clone(), lc.min_tau_exponent().unwrap())
        };
        let inv = unit.inv().expect("monomial unit");
        (self.scale(&inv), unit)
    }

    pub fn monic(&self) -> Polynomial {
        self.normalize_unit().0
    }

    /// Squarefree test through `gcd(p, ∂p/∂x_1, …, ∂p/∂x_n)` being a unit.
    pub fn is_squarefree(&self) -> bool {
        let mut g = self.clone();
        for i in 0..self.nvars() {
            g = g.gcd(&self.derivative(i));
            if g.is_constant() {
                return true;
            }
        }
        g.is_constant()
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn min_tau(p: &Polynomial) -> i32 {
    p.terms.values().filter_map(|c| c.min_tau_exponent()).min().unwrap_or(0)
}

pub fn index_of(vars: &Vars, name: &str) -> Result<usize> {
    vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
}

fn fmt_monomial(vars: &Vars, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (v, k) in vars.iter().zip(&m.0) {
        match k {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}

/// Renders a term with a positive leading sign; returns (negative, text).
fn fmt_term(vars: &Vars, m: &Monomial, c: &Scalar) -> (bool, String) {
    let mono = fmt_monomial(vars, m);
    if !c.is_monomial() {
        let s = format!("({c})");
        return (false, if mono.is_empty() { s } else { format!("{s}*{mono}") });
    }
    let neg = c.is_negative_monomial();
    let c = if neg { -c } else { c.clone() };
    let text = if mono.is_empty() {
        c.to_string()
    } else if c.is_one() {
        mono
    } else {
        let (k, r) = c.terms().next().unwrap();
        if k == 0 {
            format!("{}*{mono}", fmt_rational(r))
        } else {
            format!("{c}*{mono}")
        }
    };
    (neg, text)
}

/// Highest graded-lex term first, e.g. `x^2*y - 3/2*x + 1`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, text) = fmt_term(&self.vars, m, c);
            match (i, neg) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => write!(f, "{text}")?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({self})", self.vars.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn xy() -> Vars {
        vars(&["x", "y"])
    }

    #[test]
    fn graded_lex_printing() {
        let v = xy();
        let x = Polynomial::var(&v, 0);
        let y = Polynomial::var(&v, 1);
        let p = x.mul(&y).mul(&x).sub(&x.scale(&Scalar::from_rational(crate::scalar::rat(3, 2)))).add(&Polynomial::one(&v));
        assert_eq!(p.to_string(), "x^2*y - 3/2*x + 1");
        let q = y.add(&x.pow(2));
        assert_eq!(q.to_string(), "x^2 + y");
    }

    #[test]
    fn tau_coefficients_survive_gcd() {
        let v = vars(&["z"]);
        let z = Polynomial::var(&v, 0);
        let t = Scalar::tau_pow(-1);
        let a = z.pow(2).scale(&t);
        let b = z.scale(&Scalar::tau_pow(2));
        let g = a.gcd(&b);
        assert_eq!(g.monic(), z);
        assert_eq!(a.div_exact(&b).unwrap(), z.scale(&Scalar::tau_pow(-3)));
    }

    #[test]
    fn squarefree_detection() {
        let v = xy();
        let x = Polynomial::var(&v, 0);
        let y = Polynomial::var(&v, 1);
        assert!(x.mul(&y).is_squarefree());
        assert!(!x.mul(&x).mul(&y).is_squarefree());
        assert_eq!(x.evaluate(&[int(2), int(5)]), Scalar::from_int(2));
    }
}
