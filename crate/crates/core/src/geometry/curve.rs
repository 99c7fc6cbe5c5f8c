//! Function-field arithmetic on plane curves and the holomorphy test for
//! curve 1-forms.

use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::poly::Polynomial;
use crate::rational::RationalFunction;
use crate::univariate::UniPoly;

use super::{Kind, Variety};

/// `Q(u)[r]/(p)`: elements are kept with `r`-degree below `deg_r p` and a
/// denominator in `u` alone.
#[derive(Clone, Debug)]
pub struct CurveRing {
    p: Polynomial,
    r: usize,
    modulus: UniPoly,
}

impl CurveRing {
    /// Reduces in the second coordinate when `p` involves it, else in the first.
    pub fn new(p: &Polynomial) -> Result<Self> {
        let r = if p.uses_var(1) { 1 } else { 0 };
        CurveRing::with_var(p, r)
    }

    pub fn with_var(p: &Polynomial, r: usize) -> Result<Self> {
        if p.nvars() != 2 || !p.uses_var(r) {
            return Err(Error::Degenerate(format!("{p} cannot be reduced in coordinate {r}")));
        }
        Ok(CurveRing { p: p.clone(), r, modulus: UniPoly::from_polynomial(p, r) })
    }

    pub fn poly(&self) -> &Polynomial {
        &self.p
    }

    pub fn reduction_var(&self) -> usize {
        self.r
    }

    pub fn base_var(&self) -> usize {
        1 - self.r
    }

    pub fn reduce(&self, f: &RationalFunction) -> Result<RationalFunction> {
        if f.vars() != self.p.vars() {
            return Err(Error::ChartMismatch(format!("{f} is not over the curve's chart")));
        }
        Ok(self.modulus.reduce_fraction(f)?.to_rational_function())
    }

    pub fn is_zero(&self, f: &RationalFunction) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// Rewrites a 1-form as `h du` with `u` the base coordinate and `h` reduced.
    pub fn canonical_form(&self, form: &DifferentialForm) -> Result<DifferentialForm> {
        if form.degree() != 1 || form.vars() != self.p.vars() {
            return Err(Error::DimensionMismatch("curve forms are 1-forms on the plane chart".into()));
        }
        let (u, r) = (self.base_var(), self.r);
        let pu = RationalFunction::from_poly(self.p.derivative(u));
        let pr = RationalFunction::from_poly(self.p.derivative(r));
        // on the curve p_u du + p_r dr = 0
        let h = form.coefficient(&[u]).sub(&form.coefficient(&[r]).mul(&pu).mul(&self.reduce(&pr)?.inv()?));
        Ok(DifferentialForm::monomial(self.reduce(&h)?, &[u]))
    }
}

/// Canonical representative of `e` in the function field of a plane curve.
pub fn curve_reduce(e: &RationalFunction, curve: &Variety) -> Result<RationalFunction> {
    match curve.kind() {
        Kind::Curve(p) => CurveRing::new(p)?.reduce(e),
        _ => Err(Error::Unsupported(format!("{curve} is not a plane curve"))),
    }
}

fn monic_in(q: &Polynomial, i: usize) -> bool {
    q.uses_var(i) && q.coeffs_in(i).last().is_some_and(|c| c.is_constant())
}

/// Whether `h` lies in the coordinate ring of the smooth affine curve
/// `{q = 0}`: after a shear making `q` monic in one coordinate, the ring is
/// free over the other with basis `1, r, …, r^(d-1)`.
fn is_regular(h: &RationalFunction, q: &Polynomial) -> Result<bool> {
    let vars = q.vars().clone();
    let (qq, hh, r) = if monic_in(q, 1) {
        (q.clone(), h.clone(), 1)
    } else if monic_in(q, 0) {
        (q.clone(), h.clone(), 0)
    } else {
        let u = RationalFunction::var(&vars, 0);
        let v = RationalFunction::var(&vars, 1);
        let sheared = (1..=16i64).find_map(|t| {
            let images = vec![u.clone(), v.add(&u.scale(&crate::scalar::Scalar::from_int(t)))];
            let qt = RationalFunction::from_poly(q.clone()).substitute(&images, &vars).ok()?;
            monic_in(qt.num(), 0).then_some(images)
        });
        let images = sheared.ok_or_else(|| Error::Unsupported(format!("no shear makes {q} monic")))?;
        let qt = RationalFunction::from_poly(q.clone()).substitute(&images, &vars)?.num().clone();
        (qt, h.substitute(&images, &vars)?, 0)
    };
    let reduced = CurveRing::with_var(&qq, r)?.reduce(&hh)?;
    Ok(reduced.den().is_constant())
}

/// The first chart in which a curve 1-form has a pole, if any.
pub(crate) fn pole_chart(form: &DifferentialForm, curve: &Variety) -> Result<Option<String>> {
    for (ci, chart) in curve.charts().iter().enumerate() {
        let q = curve.curve_poly(ci).expect("curve charts");
        if q.is_constant() {
            continue;
        }
        let moved = curve.chart_transition(form, 0, ci)?;
        let qu = RationalFunction::from_poly(q.derivative(0));
        let qv = RationalFunction::from_poly(q.derivative(1));
        // a du + b dv = (a q_v - b q_u) du/q_v, and du/q_v generates the regular forms
        let h = moved.coefficient(&[0]).mul(&qv).sub(&moved.coefficient(&[1]).mul(&qu));
        if !is_regular(&h, q)? {
            return Ok(Some(chart.name()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vars;
    use crate::scalar::Scalar;

    fn cubic() -> (Polynomial, Polynomial, Polynomial) {
        let v = vars(&["x", "y"]);
        let x = Polynomial::var(&v, 0);
        let y = Polynomial::var(&v, 1);
        (y.pow(2).sub(&x.pow(3)).sub(&x), x, y)
    }

    #[test]
    fn reduction_examples() {
        let (p, x, y) = cubic();
        let ring = CurveRing::new(&p).unwrap();
        let y2 = RationalFunction::from_poly(y.pow(2));
        assert_eq!(ring.reduce(&y2).unwrap(), RationalFunction::from_poly(x.pow(3).add(&x)));
        let inv = ring.reduce(&RationalFunction::from_poly(y.clone()).inv().unwrap()).unwrap();
        // extended-Euclid oracle: y * y/(x^3 + x) = y^2/(x^3+x) ≡ 1
        assert_eq!(inv, RationalFunction::new(y.clone(), x.pow(3).add(&x)).unwrap());
        let bad = RationalFunction::from_poly(p.clone()).inv().unwrap();
        assert!(matches!(ring.reduce(&bad), Err(Error::ZeroDivisor(_))));
    }

    #[test]
    fn holomorphic_and_polar_forms() {
        let (p, _, y) = cubic();
        let curve = Variety::plane_curve(&p).unwrap();
        let v = p.vars().clone();
        let ring = CurveRing::new(&p).unwrap();
        let dx_over_y = DifferentialForm::dvar(&v, 0).mul_function(&RationalFunction::from_poly(y.clone()).inv().unwrap());
        let canon = ring.canonical_form(&dx_over_y).unwrap();
        assert_eq!(pole_chart(&canon, &curve).unwrap(), None);
        let dx = ring.canonical_form(&DifferentialForm::dvar(&v, 0)).unwrap();
        assert!(pole_chart(&dx, &curve).unwrap().is_some());
        let scaled = canon.scale(&Scalar::from_int(3));
        assert_eq!(pole_chart(&scaled, &curve).unwrap(), None);
    }
}
