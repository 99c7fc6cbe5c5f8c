//! Poincaré residues of simple-pole forms along divisor components.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::geometry::{component_contains, CurveRing, DivisorComponent, HomPoint, Kind, Variety};
use crate::maps::Map;
use crate::poly::{vars_from, Polynomial};
use crate::rational::RationalFunction;
use crate::scalar::{Rational, Scalar};
use crate::univariate::rational_roots;

/// A component presented as the image of a catalog variety: `images` give
/// the coordinates of chart `chart` of the ambient over `source`'s standard chart.
#[derive(Clone, Debug)]
pub struct Parametrization {
    pub chart: usize,
    pub source: Variety,
    pub images: Vec<RationalFunction>,
}

impl Parametrization {
    /// The inclusion as a map into the ambient variety.
    pub fn inclusion(&self, ambient: &Variety) -> Result<Map> {
        Map::identity(ambient).in_chart(ambient, self.chart)?.substitute(&self.images, self.source.coords())
    }
}

/// Solves the component's equation for the last coordinate in which it is
/// linear; a component linear in no coordinate of the plane's standard
/// chart becomes a plane curve.
pub fn parametrize(variety: &Variety, comp: &DivisorComponent) -> Result<Parametrization> {
    let chart = comp.first_visible();
    let p = comp.chart_poly(chart).expect("visible");
    let vars = variety.chart(chart).vars.clone();
    let n = vars.len();
    if n > 2 {
        return Err(Error::Unsupported(format!("residue targets of dimension {} (component {comp})", n - 1)));
    }
    for j in (0..n).rev() {
        if p.degree_in(j) != 1 {
            continue;
        }
        let cs = p.coeffs_in(j);
        let others: Vec<String> = (0..n).filter(|&i| i != j).map(|i| vars[i].clone()).collect();
        let src_vars = vars_from(others.clone());
        let source = match others.as_slice() {
            [] => Variety::point(),
            [name] => Variety::projective_line(name),
            _ => unreachable!(),
        };
        // the chart coordinate other than j is the source coordinate itself
        let rename = |q: &Polynomial| -> Result<RationalFunction> {
            let images: Vec<RationalFunction> = (0..n)
                .map(|i| if i == j { RationalFunction::zero(&src_vars) } else { RationalFunction::var(&src_vars, 0) })
                .collect();
            RationalFunction::from_poly(q.clone()).substitute(&images, &src_vars)
        };
        let solved = rename(&cs[0])?.neg().div(&rename(&cs[1])?)?;
        let images = (0..n).map(|i| if i == j { solved.clone() } else { RationalFunction::var(&src_vars, 0) }).collect();
        return Ok(Parametrization { chart, source, images });
    }
    match variety.kind() {
        Kind::Plane if chart == 0 => {
            let source = Variety::plane_curve(p)?;
            let images = (0..2).map(|i| RationalFunction::var(&vars, i)).collect();
            Ok(Parametrization { chart, source, images })
        }
        Kind::Lines(1) => Err(Error::Irrational(format!("component {comp} is not a rational point"))),
        _ => Err(Error::Unsupported(format!("component {comp} has no rational parametrization in the catalog"))),
    }
}

#[derive(Clone, Debug)]
pub struct ResidueResult {
    pub target: Parametrization,
    /// The residue on the target's standard chart (canonical `h du` on curves).
    pub form: DifferentialForm,
}

/// Residue along `comp` of a top-degree form given on the standard chart.
pub fn poincare_residue(form: &DifferentialForm, comp: &DivisorComponent, variety: &Variety) -> Result<ResidueResult> {
    let chart = comp.first_visible();
    let moved = variety.chart_transition(form, 0, chart)?;
    let p = comp.chart_poly(chart).expect("visible");
    let j = (0..p.nvars())
        .find(|&j| {
            let d = p.derivative(j);
            !d.is_zero() && d.div_exact(p).is_none()
        })
        .ok_or_else(|| Error::NoDirection(comp.label().to_string()))?;
    residue_in_direction(&moved, comp, variety, j)
}

/// Residue computed by contraction with `(1/∂_j p) ∂_j`; `form` lives on the
/// first chart where `comp` is visible.
pub fn residue_in_direction(form: &DifferentialForm, comp: &DivisorComponent, variety: &Variety, j: usize) -> Result<ResidueResult> {
    let chart = comp.first_visible();
    let p = comp.chart_poly(chart).expect("visible");
    let name = variety.chart(chart).name();
    for (_, f) in form.components() {
        if let Some(o) = f.ord_along(p)? {
            if o < -1 {
                return Err(Error::HigherOrderPole { chart: name, component: comp.label().to_string(), order: o });
            }
        }
    }
    let dp = p.derivative(j);
    if dp.is_zero() || dp.div_exact(p).is_some() {
        return Err(Error::NoDirection(format!("{comp} in direction {}", variety.chart(chart).vars[j])));
    }
    let scale = RationalFunction::from_poly(dp).inv()?;
    let raw = form.mul_function(&RationalFunction::from_poly(p.clone())).contract(j, &scale)?;
    let target = parametrize(variety, comp)?;
    let form = match target.source.kind() {
        Kind::Curve(q) => CurveRing::new(q)?.canonical_form(&raw)?,
        _ => raw.pullback(&target.images, target.source.coords())?,
    };
    Ok(ResidueResult { target, form })
}

/// A point of `P¹`: `Some(r)` for `z = r`, `None` for infinity.
pub type P1Point = Option<Rational>;

/// Poles of a 1-form on `P¹` (both charts) with their residues.
pub fn p1_poles(form: &DifferentialForm, line: &Variety) -> Result<Vec<(P1Point, Scalar)>> {
    if !line.is_projective_line() || form.degree() != 1 {
        return Err(Error::DimensionMismatch("expected a 1-form on P1".into()));
    }
    let mut out = Vec::new();
    let f = form.coefficient(&[0]);
    if f.is_zero() {
        return Ok(out);
    }
    let chart0 = line.chart(0).name();
    for (r, m) in rational_roots(f.den(), 0)? {
        let component = format!("{} - {}", line.coords()[0], crate::scalar::fmt_rational(&r));
        if m > 1 {
            return Err(Error::HigherOrderPole { chart: chart0.clone(), component, order: -(m as i64) });
        }
        let res = f.num().evaluate(&[r.clone()]).checked_div(&f.den().derivative(0).evaluate(&[r.clone()]))?;
        out.push((Some(r), res));
    }
    let moved = line.chart_transition(form, 0, 1)?;
    let g = moved.coefficient(&[0]);
    let w = Polynomial::var(&line.chart(1).vars, 0);
    match g.ord_along(&w)? {
        Some(o) if o < -1 => {
            return Err(Error::HigherOrderPole { chart: line.chart(1).name(), component: "inf".into(), order: o });
        }
        Some(-1) => {
            let wg = g.mul_poly(&w);
            out.push((None, wg.evaluate(&[Rational::zero()])?));
        }
        _ => {}
    }
    Ok(out)
}

/// The divisor component of `P¹` at a point.
pub fn p1_component(line: &Variety, p: &P1Point) -> Result<DivisorComponent> {
    match p {
        None => line.infinity(0),
        Some(r) => {
            let v = line.coords();
            line.component(&Polynomial::var(v, 0).sub(&Polynomial::constant(v, Scalar::from_rational(r.clone()))))
        }
    }
}

/// Sum of the residues of a 1-form on `P¹` over all its poles.
pub fn total_residue_p1(form: &DifferentialForm, line: &Variety) -> Result<Scalar> {
    Ok(p1_poles(form, line)?.into_iter().fold(Scalar::zero(), |acc, (_, r)| &acc + &r))
}

/// `res_q(res_p ω)` as weighted points of the surface, computed by taking
/// the residue along `p` and then the residues of the result at the points
/// of `p ∩ q`.
pub fn iterated_residue(
    form: &DifferentialForm,
    p: &DivisorComponent,
    q: &DivisorComponent,
    variety: &Variety,
) -> Result<Vec<(HomPoint, Scalar)>> {
    if p == q {
        return Err(Error::Degenerate("iterated residue along a single component".into()));
    }
    let first = poincare_residue(form, p, variety)?;
    let line = &first.target.source;
    if !line.is_projective_line() {
        return Err(Error::Unsupported(format!("iterated residue through {line}")));
    }
    let inclusion = first.target.inclusion(variety)?;
    let mut out: Vec<(HomPoint, Scalar)> = Vec::new();
    for (pt, res) in p1_poles(&first.form, line)? {
        let image = match &pt {
            Some(r) => inclusion.evaluate(&[r.clone()])?,
            None => inclusion.in_chart(line, 1)?.evaluate(&[Rational::zero()])?,
        };
        if !component_contains(variety, q, &image) {
            continue;
        }
        match out.iter_mut().find(|(x, _)| *x == image) {
            Some((_, w)) => *w = &*w + &res,
            None => out.push((image, res)),
        }
    }
    out.retain(|(_, w)| !w.is_zero());
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::dlog;
    use crate::scalar::{int, rat};

    fn rf(p: Polynomial) -> RationalFunction {
        RationalFunction::from_poly(p)
    }

    #[test]
    fn point_residue() {
        let x = Variety::projective_line("z");
        let v = x.coords().clone();
        let z = Polynomial::var(&v, 0);
        let comp = x.component(&z).unwrap();
        let r = poincare_residue(&dlog(&rf(z)).unwrap(), &comp, &x).unwrap();
        assert_eq!(r.form.as_function().unwrap(), RationalFunction::one(&vars_from(vec![])));
    }

    #[test]
    fn line_residue_and_iterated_signs() {
        let x = Variety::projective_plane("z1", "z2").unwrap();
        let v = x.coords().clone();
        let z1 = Polynomial::var(&v, 0);
        let z2 = Polynomial::var(&v, 1);
        let omega = DifferentialForm::top(rf(z1.mul(&z2)).inv().unwrap());
        let c1 = x.component(&z1).unwrap();
        let c2 = x.component(&z2).unwrap();
        let r = poincare_residue(&omega, &c1, &x).unwrap();
        assert_eq!(r.target.source.to_string(), "P1(z2)");
        assert_eq!(r.form, dlog(&RationalFunction::var(r.target.source.coords(), 0)).unwrap());
        let origin = vec![vec![int(1), int(0), int(0)]];
        assert_eq!(iterated_residue(&omega, &c1, &c2, &x).unwrap(), vec![(origin.clone(), Scalar::one())]);
        assert_eq!(iterated_residue(&omega, &c2, &c1, &x).unwrap(), vec![(origin, Scalar::from_int(-1))]);
    }

    #[test]
    fn cubic_adjunction() {
        let x = Variety::projective_plane("x", "y").unwrap();
        let v = x.coords().clone();
        let xx = Polynomial::var(&v, 0);
        let y = Polynomial::var(&v, 1);
        let p = y.pow(2).sub(&xx.pow(3)).sub(&xx).sub(&Polynomial::constant(&v, Scalar::from_int(2)));
        let comp = x.component(&p).unwrap();
        let omega = DifferentialForm::top(rf(p.clone()).inv().unwrap());
        let r = poincare_residue(&omega, &comp, &x).unwrap();
        // oracle: -dx/(2y) reduced on the curve
        let ring = CurveRing::new(&p).unwrap();
        let expected = ring
            .canonical_form(&DifferentialForm::dvar(&v, 0).mul_function(&rf(y.scale(&Scalar::from_int(2))).inv().unwrap().neg()))
            .unwrap();
        assert_eq!(r.form, expected);
        // the other direction agrees after restriction
        let other = residue_in_direction(&omega, &comp, &x, 1).unwrap();
        assert_eq!(other.form, r.form);
    }

    #[test]
    fn p1_total_residue_examples() {
        let x = Variety::projective_line("z");
        let v = x.coords().clone();
        let z = Polynomial::var(&v, 0);
        let c = |n| Polynomial::constant(&v, Scalar::from_int(n));
        let f = DifferentialForm::dvar(&v, 0).mul_function(&rf(z.mul(&z.sub(&c(1))).mul(&z.sub(&c(2)))).inv().unwrap());
        let poles = p1_poles(&f, &x).unwrap();
        let weights: Vec<Scalar> = poles.iter().map(|(_, r)| r.clone()).collect();
        assert_eq!(weights, vec![Scalar::from_rational(rat(1, 2)), Scalar::from_int(-1), Scalar::from_rational(rat(1, 2))]);
        assert!(total_residue_p1(&f, &x).unwrap().is_zero());
        let dz = DifferentialForm::dvar(&v, 0);
        assert!(matches!(total_residue_p1(&dz, &x), Err(Error::HigherOrderPole { .. })));
        let lg = dlog(&rf(z.clone()).div(&rf(z.sub(&c(1)))).unwrap()).unwrap();
        assert!(total_residue_p1(&lg, &x).unwrap().is_zero());
    }
}
