//! Meromorphic differential forms on an affine chart.
//!
//! A q-form is stored as a map from strictly increasing coordinate-index
//! tuples to coefficients, so `f dz_i ∧ dz_j` with `i < j` lives at `[i, j]`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{index_of, Polynomial, Vars};
use crate::rational::{multiplicity, RationalFunction};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DifferentialForm {
    vars: Vars,
    degree: usize,
    comps: BTreeMap<Vec<usize>, RationalFunction>,
}

/// Sign of the permutation sorting `idx`, or `None` if an index repeats.
fn sort_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            } else if idx[j] == idx[j + 1] {
                return None;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

impl DifferentialForm {
    pub fn zero(vars: &Vars, degree: usize) -> Self {
        DifferentialForm { vars: vars.clone(), degree, comps: BTreeMap::new() }
    }

    /// A 0-form.
    pub fn function(f: RationalFunction) -> Self {
        let mut out = DifferentialForm::zero(f.vars(), 0);
        out.insert(vec![], f);
        out
    }

    /// `dz_i`
    pub fn dvar(vars: &Vars, i: usize) -> Self {
        let mut out = DifferentialForm::zero(vars, 1);
        out.insert(vec![i], RationalFunction::one(vars));
        out
    }

    /// `f dz_I` for an arbitrary (unsorted) index list.
    pub fn monomial(f: RationalFunction, idx: &[usize]) -> Self {
        let vars = f.vars().clone();
        let mut out = DifferentialForm::zero(&vars, idx.len());
        let mut sorted = idx.to_vec();
        if let Some(sign) = sort_sign(&mut sorted) {
            let f = if sign < 0 { f.neg() } else { f };
            out.insert(sorted, f);
        }
        out
    }

    /// The top-degree form `f dz_1 ∧ … ∧ dz_n`.
    pub fn top(f: RationalFunction) -> Self {
        let n = f.vars().len();
        DifferentialForm::monomial(f, &(0..n).collect::<Vec<_>>())
    }

    fn insert(&mut self, idx: Vec<usize>, f: RationalFunction) {
        if f.is_zero() {
            return;
        }
        match self.comps.remove(&idx) {
            Some(old) => {
                let s = old.add(&f);
                if !s.is_zero() {
                    self.comps.insert(idx, s);
                }
            }
            None => {
                self.comps.insert(idx, f);
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &RationalFunction)> {
        self.comps.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> RationalFunction {
        self.comps.get(idx).cloned().unwrap_or_else(|| RationalFunction::zero(&self.vars))
    }

    /// Coefficient of `dz_1 ∧ … ∧ dz_n` for a top-degree form.
    pub fn top_coefficient(&self) -> RationalFunction {
        self.coefficient(&(0..self.vars.len()).collect::<Vec<_>>())
    }

    /// Value of a 0-form.
    pub fn as_function(&self) -> Option<RationalFunction> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    pub fn is_top_degree(&self) -> bool {
        self.degree == self.vars.len()
    }

    fn check_chart(&self, other: &DifferentialForm) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::ChartMismatch(format!("[{}] vs [{}]", self.vars.join(","), other.vars.join(","))));
        }
        Ok(())
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.check_chart(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!("adding forms of degree {} and {}", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for (idx, f) in &other.comps {
            out.insert(idx.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> DifferentialForm {
        self.map_coefficients(|f| f.neg())
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> DifferentialForm {
        self.map_coefficients(|f| f.scale(s))
    }

    pub fn mul_function(&self, g: &RationalFunction) -> DifferentialForm {
        self.map_coefficients(|f| f.mul(g))
    }

    fn map_coefficients(&self, op: impl Fn(&RationalFunction) -> RationalFunction) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.vars, self.degree);
        for (idx, f) in &self.comps {
            out.insert(idx.clone(), op(f));
        }
        out
    }

    /// Graded-anticommutative product.
    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.check_chart(other)?;
        let degree = self.degree + other.degree;
        let mut out = DifferentialForm::zero(&self.vars, degree);
        if degree > self.vars.len() {
            return Ok(out);
        }
        for (ia, fa) in &self.comps {
            for (ib, fb) in &other.comps {
                let mut idx: Vec<usize> = ia.iter().chain(ib).copied().collect();
                if let Some(sign) = sort_sign(&mut idx) {
                    let f = fa.mul(fb);
                    out.insert(idx, if sign < 0 { f.neg() } else { f });
                }
            }
        }
        Ok(out)
    }

    pub fn exterior_derivative(&self) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.vars, self.degree + 1);
        if self.degree >= self.vars.len() {
            return out;
        }
        for (idx, f) in &self.comps {
            for j in 0..self.vars.len() {
                if idx.contains(&j) {
                    continue;
                }
                let df = f.derivative(j);
                if df.is_zero() {
                    continue;
                }
                // dz_j ∧ dz_I: move dz_j past the indices smaller than j
                let before = idx.iter().filter(|&&i| i < j).count();
                let mut nidx = idx.clone();
                nidx.insert(before, j);
                out.insert(nidx, if before % 2 == 1 { df.neg() } else { df });
            }
        }
        out
    }

    /// Left interior product with the vector field `scale · ∂/∂(direction)`.
    pub fn contract(&self, direction: usize, scale: &RationalFunction) -> Result<DifferentialForm> {
        if self.degree == 0 {
            return Err(Error::DegreeZeroContraction);
        }
        let mut out = DifferentialForm::zero(&self.vars, self.degree - 1);
        for (idx, f) in &self.comps {
            if let Some(pos) = idx.iter().position(|&i| i == direction) {
                let mut nidx = idx.clone();
                nidx.remove(pos);
                let g = f.mul(scale);
                out.insert(nidx, if pos % 2 == 1 { g.neg() } else { g });
            }
        }
        Ok(out)
    }

    pub fn contract_named(&self, direction: &str, scale: &RationalFunction) -> Result<DifferentialForm> {
        let i = index_of(&self.vars, direction)?;
        self.contract(i, scale)
    }

    /// Pullback along `map`, which gives each coordinate of this form's chart
    /// as a rational function on the source chart `source`.
    pub fn pullback(&self, map: &[RationalFunction], source: &Vars) -> Result<DifferentialForm> {
        if map.len() != self.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "pullback map has {} components for a chart of dimension {}",
                map.len(),
                self.vars.len()
            )));
        }
        if let Some(bad) = map.iter().find(|f| f.vars() != source) {
            return Err(Error::ChartMismatch(format!("map component {bad} not over [{}]", source.join(","))));
        }
        let differentials: Vec<DifferentialForm> = map
            .iter()
            .map(|phi| {
                let mut d = DifferentialForm::zero(source, 1);
                for j in 0..source.len() {
                    d.insert(vec![j], phi.derivative(j));
                }
                d
            })
            .collect();
        let mut out = DifferentialForm::zero(source, self.degree);
        for (idx, f) in &self.comps {
            let mut term = DifferentialForm::function(f.substitute(map, source)?);
            for &i in idx {
                term = term.wedge(&differentials[i])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Re-expresses the form over a chart whose coordinates include all of ours.
    pub fn embed(&self, target: &Vars) -> Result<DifferentialForm> {
        let pos: Vec<usize> = self.vars.iter().map(|v| index_of(target, v)).collect::<Result<_>>()?;
        let mut out = DifferentialForm::zero(target, self.degree);
        for (idx, f) in &self.comps {
            let nidx: Vec<usize> = idx.iter().map(|&i| pos[i]).collect();
            out = out.add(&DifferentialForm::monomial(f.embed(target)?, &nidx))?;
        }
        Ok(out)
    }

    /// Canonical text: components in lexicographic tuple order.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

/// `d(f)/f` for a nonzero function.
pub fn dlog(f: &RationalFunction) -> Result<DifferentialForm> {
    let inv = f.inv()?;
    Ok(DifferentialForm::function(f.clone()).exterior_derivative().mul_function(&inv))
}

fn fmt_coefficient(f: &RationalFunction) -> String {
    let s = f.to_string();
    if f.is_polynomial() && (f.num().len() > 1 || s.starts_with('-') || s.contains('(')) {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, coef) in &self.comps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if idx.is_empty() {
                write!(f, "{}", fmt_coefficient(coef))?;
                continue;
            }
            let ds: Vec<String> = idx.iter().map(|&i| format!("d({})", self.vars[i])).collect();
            let ds = ds.join("^");
            if *coef == RationalFunction::one(&self.vars) {
                write!(f, "{ds}")?;
            } else {
                write!(f, "{}*{ds}", fmt_coefficient(coef))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({self})", self.vars.join(","))
    }
}

/// Pole orders of a form along declared divisor polynomials in one chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarProfile {
    /// `(component, order)`; `None` stands for `+∞` (zero form).
    pub components: Vec<(Polynomial, Option<i64>)>,
    /// Denominator factors outside the declared list.
    pub residual_denominator: Polynomial,
}

impl PolarProfile {
    /// All orders at least `-1` and no undeclared poles.
    pub fn is_admissible(&self) -> bool {
        self.residual_denominator.is_constant() && self.components.iter().all(|(_, o)| o.is_none_or(|o| o >= -1))
    }

    pub fn worst(&self) -> Option<(&Polynomial, i64)> {
        self.components.iter().filter_map(|(p, o)| o.map(|o| (p, o))).min_by_key(|(_, o)| *o)
    }
}

pub fn polar_profile(form: &DifferentialForm, declared: &[Polynomial]) -> Result<PolarProfile> {
    for (i, p) in declared.iter().enumerate() {
        if p.is_constant() {
            return Err(Error::ConstantDivisor(p.to_string()));
        }
        for q in &declared[..i] {
            if !p.gcd(q).is_constant() {
                return Err(Error::NotCoprime(format!("{q} and {p}")));
            }
        }
    }
    let mut components = Vec::with_capacity(declared.len());
    for p in declared {
        let mut worst: Option<i64> = None;
        for (_, f) in form.components() {
            if let Some(o) = f.ord_along(p)? {
                worst = Some(worst.map_or(o, |w| w.min(o)));
            }
        }
        components.push((p.clone(), worst));
    }
    let mut residual = Polynomial::one(form.vars());
    for (_, f) in form.components() {
        let mut den = f.den().clone();
        for p in declared {
            let k = multiplicity(&den, p);
            if k > 0 {
                den = den.div_exact(&p.pow(k)).expect("multiplicity");
            }
        }
        if !den.is_constant() {
            let g = residual.gcd(&den);
            residual = residual.mul(&den.div_exact(&g).expect("gcd divides"));
        }
    }
    Ok(PolarProfile { components, residual_denominator: residual.monic() })
}
