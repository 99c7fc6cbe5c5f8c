//! Dense-exponent sparse polynomials over Q used as the elimination engine.
//!
//! Terms are keyed by exponent vectors and ordered lexicographically with
//! variable 0 most significant; "leading" always means lex-leading here.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct QPoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl QPoly {
    pub fn zero(n: usize) -> Self {
        QPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = QPoly::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        QPoly::constant(n, Rational::one())
    }

    pub fn monomial(n: usize, exps: Vec<u32>, c: Rational) -> Self {
        let mut p = QPoly::zero(n);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        QPoly::monomial(n, e, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn lt(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn lc(&self) -> Rational {
        self.lt().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let slot = terms.entry(e.clone()).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        QPoly { n: self.n, terms }
    }

    pub fn neg(&self) -> QPoly {
        QPoly { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> QPoly {
        if r.is_zero() {
            return QPoly::zero(self.n);
        }
        QPoly { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect() }
    }

    pub fn mul_term(&self, exps: &[u32], c: &Rational) -> QPoly {
        let mut out = QPoly::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (e, d) in &self.terms {
            let ne: Vec<u32> = e.iter().zip(exps).map(|(a, b)| a + b).collect();
            out.terms.insert(ne, d * c);
        }
        out
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        QPoly { n: self.n, terms }
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        self.scale(&lc.recip())
    }

    pub fn deg_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Coefficient of `x_v^k`, as a polynomial not involving `x_v`.
    pub fn coeff_in(&self, v: usize, k: u32) -> QPoly {
        let mut out = QPoly::zero(self.n);
        for (e, c) in &self.terms {
            if e[v] == k {
                let mut ne = e.clone();
                ne[v] = 0;
                out.terms.insert(ne, c.clone());
            }
        }
        out
    }

    pub fn coeffs_in(&self, v: usize) -> Vec<QPoly> {
        (0..=self.deg_in(v)).map(|k| self.coeff_in(v, k)).collect()
    }

    pub fn shift_var(&self, v: usize, k: u32) -> QPoly {
        QPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = e.clone();
                    ne[v] += k;
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    pub fn derivative(&self, v: usize) -> QPoly {
        let mut out = QPoly::zero(self.n);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut ne = e.clone();
                ne[v] -= 1;
                out.terms.insert(ne, c * Rational::from_integer(e[v].into()));
            }
        }
        out
    }

    /// Substitutes `x_v = value`.
    pub fn eval_var(&self, v: usize, value: &Rational) -> QPoly {
        let mut out = QPoly::zero(self.n);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[v];
            ne[v] = 0;
            let term = QPoly::monomial(self.n, ne, c * pow_rat(value, k));
            out = out.add(&term);
        }
        out
    }

    #[cfg(test)]
    pub fn eval_all(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                t *= pow_rat(x, *k);
            }
            acc += t;
        }
        acc
    }

    /// Exact multivariate division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &QPoly) -> Option<QPoly> {
        if d.is_zero() {
            return None;
        }
        let (ld, cd) = d.lt().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut r = self.clone();
        let mut q = QPoly::zero(self.n);
        while let Some((lr, cr)) = r.lt().map(|(e, c)| (e.clone(), c.clone())) {
            if !divides(&ld, &lr) {
                return None;
            }
            let te: Vec<u32> = lr.iter().zip(&ld).map(|(a, b)| a - b).collect();
            let tc = cr / &cd;
            r = r.sub(&d.mul_term(&te, &tc));
            q.terms.insert(te, tc);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `g` with respect to `x_v`.
    pub fn prem(&self, g: &QPoly, v: usize) -> QPoly {
        let dg = g.deg_in(v);
        if dg == 0 {
            // g free of x_v divides every coefficient up to pseudo-scaling.
            return QPoly::zero(self.n);
        }
        let lcg = g.coeff_in(v, dg);
        let mut r = self.clone();
        while !r.is_zero() && r.uses_var(v) && r.deg_in(v) >= dg {
            let dr = r.deg_in(v);
            let lcr = r.coeff_in(v, dr);
            r = lcg.mul(&r).sub(&lcr.shift_var(v, dr - dg).mul(g));
        }
        r
    }

    /// `lc(g)^(deg f - deg g + 1) f mod g` in `x_v`.
    pub fn prem_full(&self, g: &QPoly, v: usize) -> QPoly {
        let dg = g.deg_in(v);
        let lcg = g.coeff_in(v, dg);
        let mut r = self.clone();
        for k in (dg..=self.deg_in(v)).rev() {
            let c = r.coeff_in(v, k);
            r = lcg.mul(&r).sub(&c.shift_var(v, k - dg).mul(g));
        }
        r
    }

    pub fn content_in(&self, v: usize) -> QPoly {
        let mut g = QPoly::zero(self.n);
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_constant() {
                return QPoly::one(self.n);
            }
        }
        g
    }

    pub fn pp_in(&self, v: usize) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides").monic()
    }

    pub fn highest_var(&self) -> Option<usize> {
        (0..self.n).rev().find(|&v| self.uses_var(v))
    }
}

pub(crate) fn pow_rat(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Monic (lex) greatest common divisor over Q.
pub(crate) fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.n;
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return QPoly::one(n);
    }
    let v = a.highest_var().max(b.highest_var()).unwrap();
    if !a.uses_var(v) {
        return gcd(a, &b.content_in(v));
    }
    if !b.uses_var(v) {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut f = a.div_exact(&ca).unwrap();
    let mut g = b.div_exact(&cb).unwrap();
    if f.deg_in(v) < g.deg_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    if coprime_image(&f, &g, v) {
        return c.monic();
    }
    // subresultant PRS
    let mut lead = QPoly::one(n);
    let mut h = QPoly::one(n);
    loop {
        let delta = f.deg_in(v) - g.deg_in(v);
        let r = f.prem_full(&g, v);
        if r.is_zero() {
            break;
        }
        if !r.uses_var(v) {
            return c.monic();
        }
        let scale = lead.mul(&pow_poly(&h, delta));
        f = g;
        g = r.div_exact(&scale).expect("subresultant division");
        lead = f.coeff_in(v, f.deg_in(v));
        h = if delta == 0 {
            h
        } else {
            pow_poly(&lead, delta).div_exact(&pow_poly(&h, delta - 1)).expect("subresultant division")
        };
    }
    c.mul(&g.pp_in(v)).monic()
}

/// Whether the images of `f` and `g` under a substitution of the other
/// variables that keeps both degrees in `x_v` are coprime; this forces the
/// primitive parts to be coprime.
fn coprime_image(f: &QPoly, g: &QPoly, v: usize) -> bool {
    let (df, dg) = (f.deg_in(v), g.deg_in(v));
    for attempt in 0..3i64 {
        let (mut fe, mut ge) = (f.clone(), g.clone());
        for w in (0..f.n).filter(|&w| w != v) {
            let value = Rational::from_integer((3 + 5 * attempt + 7 * w as i64).into());
            fe = fe.eval_var(w, &value);
            ge = ge.eval_var(w, &value);
        }
        if fe.deg_in(v) != df || ge.deg_in(v) != dg {
            continue;
        }
        return univariate_gcd_degree(fe, ge, v) == 0;
    }
    false
}

fn univariate_gcd_degree(mut f: QPoly, mut g: QPoly, v: usize) -> u32 {
    while !g.is_zero() {
        let r = f.prem(&g, v);
        f = g;
        g = if r.is_zero() { r } else { r.monic() };
    }
    f.deg_in(v)
}

/// Resultant in `x_v` via the Sylvester matrix and fraction-free elimination.
#[cfg(test)]
pub(crate) fn resultant(a: &QPoly, b: &QPoly, v: usize) -> QPoly {
    let n = a.n;
    let da = a.deg_in(v) as usize;
    let db = b.deg_in(v) as usize;
    if a.is_zero() || b.is_zero() {
        return QPoly::zero(n);
    }
    if da == 0 && db == 0 {
        return QPoly::one(n);
    }
    if da == 0 {
        return pow_poly(a, db as u32);
    }
    if db == 0 {
        return pow_poly(b, da as u32);
    }
    let ca = a.coeffs_in(v);
    let cb = b.coeffs_in(v);
    let size = da + db;
    let mut m = vec![vec![QPoly::zero(n); size]; size];
    for i in 0..db {
        for (k, c) in ca.iter().enumerate() {
            m[i][i + da - k] = c.clone();
        }
    }
    for i in 0..da {
        for (k, c) in cb.iter().enumerate() {
            m[db + i][i + db - k] = c.clone();
        }
    }
    determinant(m)
}

pub(crate) fn pow_poly(p: &QPoly, k: u32) -> QPoly {
    let mut acc = QPoly::one(p.n);
    for _ in 0..k {
        acc = acc.mul(p);
    }
    acc
}

/// Bareiss determinant of a square matrix of polynomials.
pub(crate) fn determinant(mut m: Vec<Vec<QPoly>>) -> QPoly {
    let size = m.len();
    if size == 0 {
        return QPoly::one(0);
    }
    let n = m[0][0].n;
    let mut negate = false;
    let mut prev = QPoly::one(n);
    for k in 0..size.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return QPoly::zero(n),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[size - 1][size - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

fn lcm_exp(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn s_poly(f: &QPoly, g: &QPoly) -> QPoly {
    let (lf, cf) = f.lt().unwrap();
    let (lg, cg) = g.lt().unwrap();
    let l = lcm_exp(lf, lg);
    let mf: Vec<u32> = l.iter().zip(lf).map(|(a, b)| a - b).collect();
    let mg: Vec<u32> = l.iter().zip(lg).map(|(a, b)| a - b).collect();
    f.mul_term(&mf, &cf.recip()).sub(&g.mul_term(&mg, &cg.recip()))
}

/// Full reduction of `f` modulo `basis` (lex order).
pub(crate) fn reduce(f: &QPoly, basis: &[QPoly]) -> QPoly {
    let mut p = f.clone();
    let mut r = QPoly::zero(f.n);
    while let Some((lp, cp)) = p.lt().map(|(e, c)| (e.clone(), c.clone())) {
        let reducer = basis.iter().find(|g| g.lt().is_some_and(|(lg, _)| divides(lg, &lp)));
        match reducer {
            Some(g) => {
                let (lg, cg) = g.lt().unwrap();
                let te: Vec<u32> = lp.iter().zip(lg).map(|(a, b)| a - b).collect();
                p = p.sub(&g.mul_term(&te, &(cp / cg)));
            }
            None => {
                p.terms.remove(&lp);
                r.terms.insert(lp, cp);
            }
        }
    }
    r
}

/// Reduced lex Gröbner basis. Returns `[1]` when the ideal is the unit ideal.
pub(crate) fn groebner(polys: &[QPoly]) -> Vec<QPoly> {
    let mut g: Vec<QPoly> = polys.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    if g.is_empty() {
        return g;
    }
    let n = g[0].n;
    if g.iter().any(|p| p.is_constant()) {
        return vec![QPoly::one(n)];
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (li, _) = g[i].lt().unwrap();
        let (lj, _) = g[j].lt().unwrap();
        if li.iter().zip(lj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let r = reduce(&s_poly(&g[i], &g[j]), &g);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        if r.is_constant() {
            return vec![QPoly::one(n)];
        }
        let k = g.len();
        g.push(r);
        for i in 0..k {
            pairs.push((i, k));
        }
    }
    // minimalize and interreduce
    let mut minimal: Vec<QPoly> = Vec::new();
    for (idx, p) in g.iter().enumerate() {
        let (lp, _) = p.lt().unwrap();
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let (lq, _) = q.lt().unwrap();
            j != idx && divides(lq, lp) && (lq != lp || j < idx)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<QPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
        reduced.push(reduce(&minimal[i], &others).monic());
    }
    reduced.sort_by(|a, b| b.lt().unwrap().0.cmp(a.lt().unwrap().0));
    reduced
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn p(n: usize, terms: &[(&[u32], i64)]) -> QPoly {
        let mut out = QPoly::zero(n);
        for (e, c) in terms {
            out = out.add(&QPoly::monomial(n, e.to_vec(), int(*c)));
        }
        out
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        // (x+y)(x-y) and (x-y)^2
        let a = p(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        let b = p(2, &[(&[2, 0], 1), (&[1, 1], -2), (&[0, 2], 1)]);
        let g = gcd(&a, &b);
        assert_eq!(g, p(2, &[(&[1, 0], 1), (&[0, 1], -1)]));
    }

    #[test]
    fn exact_division_detects_remainders() {
        let a = p(1, &[(&[2], 1), (&[0], -1)]);
        let b = p(1, &[(&[1], 1), (&[0], -1)]);
        assert_eq!(a.div_exact(&b).unwrap(), p(1, &[(&[1], 1), (&[0], 1)]));
        assert!(a.div_exact(&p(1, &[(&[1], 1)])).is_none());
    }

    #[test]
    fn resultant_of_line_and_parabola() {
        // Res_y(y, y - x^2) = -x^2 up to sign
        let a = p(2, &[(&[0, 1], 1)]);
        let b = p(2, &[(&[0, 1], 1), (&[2, 0], -1)]);
        let r = resultant(&a, &b, 1);
        assert_eq!(r.deg_in(0), 2);
        assert!(r.eval_all(&[int(0), int(0)]).is_zero());
    }

    #[test]
    fn groebner_detects_unit_ideal() {
        let x = p(2, &[(&[1, 0], 1)]);
        let x1 = p(2, &[(&[1, 0], 1), (&[0, 0], -1)]);
        assert!(groebner(&[x.clone(), x1])[0].is_constant());
        let y = p(2, &[(&[0, 1], 1)]);
        let xy = p(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let gb = groebner(&[x, y, xy]);
        assert_eq!(gb.len(), 2);
    }
}
