//! Catalog varieties: the point, products of projective lines, the
//! projective plane and smooth plane curves, with fixed affine charts.

mod curve;
mod nc;

pub use curve::{curve_reduce, CurveRing};
pub use nc::{component_contains, intersect_components, validate_normal_crossing};
pub(crate) use curve::pole_chart;

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::poly::{vars_from, Polynomial, Vars};
use crate::rational::RationalFunction;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Point,
    /// `(P¹)^k`; `k = 1` is the projective line.
    Lines(usize),
    Plane,
    /// Smooth plane curve given by its equation in the standard chart.
    Curve(Polynomial),
}

/// An affine chart. `to_origin` expresses the standard-chart coordinates
/// in this chart's coordinates; `from_origin` is the inverse.
#[derive(Clone, Debug)]
pub struct Chart {
    pub vars: Vars,
    pub to_origin: Vec<RationalFunction>,
    pub from_origin: Vec<RationalFunction>,
}

impl Chart {
    pub fn name(&self) -> String {
        format!("[{}]", self.vars.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct Variety {
    kind: Kind,
    coords: Vars,
    charts: Vec<Chart>,
    curve_polys: Vec<Polynomial>,
}

impl PartialEq for Variety {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.coords == other.coords
    }
}

impl Eq for Variety {}

fn check_names(names: &[String]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::Session(format!("coordinate `{n}` repeated")));
        }
    }
    Ok(())
}

impl Variety {
    pub fn point() -> Self {
        let vars = vars_from(vec![]);
        let chart = Chart { vars: vars.clone(), to_origin: vec![], from_origin: vec![] };
        Variety { kind: Kind::Point, coords: vars, charts: vec![chart], curve_polys: vec![] }
    }

    pub fn projective_line(name: &str) -> Self {
        Variety::product_of_lines(&[name.to_string()]).expect("single name")
    }

    pub fn product_of_lines(names: &[String]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Degenerate("empty product of lines".into()));
        }
        check_names(names)?;
        let k = names.len();
        let coords = vars_from(names.to_vec());
        let mut charts = Vec::with_capacity(1 << k);
        for mask in 0..(1usize << k) {
            let inverted = |i: usize| mask >> i & 1 == 1;
            let vars = vars_from(
                names.iter().enumerate().map(|(i, n)| if inverted(i) { format!("{n}_inv") } else { n.clone() }).collect(),
            );
            let flip = |over: &Vars, i: usize| {
                let v = RationalFunction::var(over, i);
                if inverted(i) {
                    v.inv().expect("coordinate is nonzero")
                } else {
                    v
                }
            };
            let to_origin = (0..k).map(|i| flip(&vars, i)).collect();
            let from_origin = (0..k).map(|i| flip(&coords, i)).collect();
            charts.push(Chart { vars, to_origin, from_origin });
        }
        Ok(Variety { kind: Kind::Lines(k), coords, charts, curve_polys: vec![] })
    }

    pub fn projective_plane(a: &str, b: &str) -> Result<Self> {
        let names = vec![a.to_string(), b.to_string()];
        check_names(&names)?;
        let coords = vars_from(names);
        let (charts, _) = plane_charts(&coords);
        Ok(Variety { kind: Kind::Plane, coords, charts, curve_polys: vec![] })
    }

    /// A plane curve `{p = 0}` in the projective plane with standard
    /// coordinates `p.vars()`; rejected unless smooth everywhere.
    pub fn plane_curve(p: &Polynomial) -> Result<Self> {
        if p.nvars() != 2 {
            return Err(Error::Unsupported("curves live in a plane with two coordinates".into()));
        }
        if p.is_constant() {
            return Err(Error::ConstantDivisor(p.to_string()));
        }
        if !p.is_rational() {
            return Err(Error::Unsupported(format!("curve equation {p} has TAU coefficients")));
        }
        if !p.is_squarefree() {
            return Err(Error::SingularCurve(format!("{p} is not squarefree")));
        }
        let p = p.monic();
        let (charts, _) = plane_charts(p.vars());
        let curve_polys: Vec<Polynomial> = charts.iter().map(|c| chart_numerator(&p, c)).collect::<Result<_>>()?;
        let v = Variety { kind: Kind::Curve(p.clone()), coords: p.vars().clone(), charts, curve_polys };
        nc::check_smooth_curve(&v)?;
        Ok(v)
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn coords(&self) -> &Vars {
        &self.coords
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, i: usize) -> &Chart {
        &self.charts[i]
    }

    pub fn dimension(&self) -> usize {
        match &self.kind {
            Kind::Point => 0,
            Kind::Lines(k) => *k,
            Kind::Plane => 2,
            Kind::Curve(_) => 1,
        }
    }

    pub fn is_curve(&self) -> bool {
        matches!(self.kind, Kind::Curve(_))
    }

    pub fn is_projective_line(&self) -> bool {
        self.kind == Kind::Lines(1)
    }

    /// Equation of the curve in chart `i` (constant when the curve misses it).
    pub fn curve_poly(&self, i: usize) -> Option<&Polynomial> {
        self.curve_polys.get(i)
    }

    /// Sizes of the homogeneous coordinate tuples of the projective factors.
    pub fn factor_sizes(&self) -> Vec<usize> {
        match &self.kind {
            Kind::Point => vec![],
            Kind::Lines(k) => vec![2; *k],
            Kind::Plane | Kind::Curve(_) => vec![3],
        }
    }

    /// The identity as homogeneous tuples over the standard chart.
    pub fn identity_tuples(&self) -> Vec<Vec<Polynomial>> {
        let one = Polynomial::one(&self.coords);
        let x = |i| Polynomial::var(&self.coords, i);
        match &self.kind {
            Kind::Point => vec![],
            Kind::Lines(k) => (0..*k).map(|i| vec![one.clone(), x(i)]).collect(),
            Kind::Plane | Kind::Curve(_) => vec![vec![one, x(0), x(1)]],
        }
    }

    /// Chart coordinates of chart `from` expressed over chart `to`.
    pub fn transition_map(&self, from: usize, to: usize) -> Result<Vec<RationalFunction>> {
        let target = &self.charts[to];
        self.charts[from]
            .from_origin
            .iter()
            .map(|f| f.substitute(&target.to_origin, &target.vars))
            .collect()
    }

    /// Rewrites a form given on chart `from` over chart `to`.
    pub fn chart_transition(&self, form: &DifferentialForm, from: usize, to: usize) -> Result<DifferentialForm> {
        if from >= self.charts.len() || to >= self.charts.len() {
            return Err(Error::ChartMismatch(format!("unknown chart pair ({from}, {to})")));
        }
        if form.vars() != &self.charts[from].vars {
            return Err(Error::ChartMismatch(format!(
                "form over [{}] is not on chart {}",
                form.vars().join(","),
                self.charts[from].name()
            )));
        }
        if from == to {
            return Ok(form.clone());
        }
        let images = self.transition_map(from, to)?;
        form.pullback(&images, &self.charts[to].vars)
    }

    /// A component given by its equation in the standard chart.
    pub fn component(&self, p: &Polynomial) -> Result<DivisorComponent> {
        if self.is_curve() || self.kind == Kind::Point {
            return Err(Error::Unsupported(format!("divisor components on {self}")));
        }
        let p = p.embed(&self.coords)?;
        if p.is_constant() {
            return Err(Error::ConstantDivisor(p.to_string()));
        }
        if !p.is_rational() {
            return Err(Error::Unsupported(format!("component {p} has TAU coefficients")));
        }
        let p = p.monic();
        let polys = self
            .charts
            .iter()
            .map(|c| chart_numerator(&p, c).map(|q| (!q.is_constant()).then_some(q)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorComponent { label: p.to_string(), polys })
    }

    /// The divisor at infinity of factor `i` (the line at infinity for `P²`).
    pub fn infinity(&self, i: usize) -> Result<DivisorComponent> {
        match &self.kind {
            Kind::Lines(k) if i < *k => {
                let label = if *k == 1 { "inf".to_string() } else { format!("inf({})", self.coords[i]) };
                let polys = (0..self.charts.len())
                    .map(|mask| (mask >> i & 1 == 1).then(|| Polynomial::var(&self.charts[mask].vars, i)))
                    .collect();
                Ok(DivisorComponent { label, polys })
            }
            Kind::Plane if i == 0 => {
                let polys = vec![None, Some(Polynomial::var(&self.charts[1].vars, 0)), Some(Polynomial::var(&self.charts[2].vars, 1))];
                Ok(DivisorComponent { label: "inf".into(), polys })
            }
            _ => Err(Error::Unsupported(format!("no divisor at infinity with index {i} on {self}"))),
        }
    }

    /// Resolves a component label: `inf`, `inf(z)`, or a standard-chart equation.
    pub fn infinity_named(&self, name: Option<&str>) -> Result<DivisorComponent> {
        match (&self.kind, name) {
            (Kind::Lines(1), None) | (Kind::Plane, None) => self.infinity(0),
            (Kind::Lines(_), Some(n)) => self.infinity(crate::poly::index_of(&self.coords, n)?),
            _ => Err(Error::Unsupported(format!("ambiguous `inf` on {self}"))),
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Point => write!(f, "Point"),
            Kind::Lines(_) => {
                let parts: Vec<String> = self.coords.iter().map(|c| format!("P1({c})")).collect();
                write!(f, "{}", parts.join(" x "))
            }
            Kind::Plane => write!(f, "P2({},{})", self.coords[0], self.coords[1]),
            Kind::Curve(p) => write!(f, "Curve({p}, {}, {})", self.coords[0], self.coords[1]),
        }
    }
}

/// Charts of `P²` with standard coordinates `(a, b)`: the standard chart,
/// `a = 1/u, b = v/u`, and `a = s/t, b = 1/t`.
fn plane_charts(coords: &Vars) -> (Vec<Chart>, ()) {
    let (a, b) = (&coords[0], &coords[1]);
    let std = Chart {
        vars: coords.clone(),
        to_origin: vec![RationalFunction::var(coords, 0), RationalFunction::var(coords, 1)],
        from_origin: vec![RationalFunction::var(coords, 0), RationalFunction::var(coords, 1)],
    };
    let v1 = vars_from(vec![format!("{a}_inv"), format!("{b}_{a}")]);
    let u = RationalFunction::var(&v1, 0);
    let v = RationalFunction::var(&v1, 1);
    let oa = RationalFunction::var(coords, 0);
    let ob = RationalFunction::var(coords, 1);
    let first = Chart {
        vars: v1.clone(),
        to_origin: vec![u.inv().unwrap(), v.div(&u).unwrap()],
        from_origin: vec![oa.inv().unwrap(), ob.div(&oa).unwrap()],
    };
    let v2 = vars_from(vec![format!("{a}_{b}"), format!("{b}_inv")]);
    let s = RationalFunction::var(&v2, 0);
    let t = RationalFunction::var(&v2, 1);
    let second = Chart {
        vars: v2,
        to_origin: vec![s.div(&t).unwrap(), t.inv().unwrap()],
        from_origin: vec![oa.div(&ob).unwrap(), ob.inv().unwrap()],
    };
    (vec![std, first, second], ())
}

/// The numerator of `p ∘ to_origin`, normalized.
fn chart_numerator(p: &Polynomial, chart: &Chart) -> Result<Polynomial> {
    let f = RationalFunction::from_poly(p.clone()).substitute(&chart.to_origin, &chart.vars)?;
    Ok(f.num().monic())
}

/// A divisor component with its equation in every chart (`None` where the
/// component does not meet the chart).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorComponent {
    label: String,
    polys: Vec<Option<Polynomial>>,
}

impl DivisorComponent {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn chart_poly(&self, chart: usize) -> Option<&Polynomial> {
        self.polys.get(chart).and_then(|p| p.as_ref())
    }

    pub fn chart_count(&self) -> usize {
        self.polys.len()
    }

    pub fn first_visible(&self) -> usize {
        self.polys.iter().position(|p| p.is_some()).expect("components meet some chart")
    }

    pub fn visible_charts(&self) -> impl Iterator<Item = usize> + '_ {
        self.polys.iter().enumerate().filter(|(_, p)| p.is_some()).map(|(i, _)| i)
    }
}

impl fmt::Display for DivisorComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// A point given by normalized homogeneous coordinates per projective factor.
pub type HomPoint = Vec<Vec<Rational>>;

/// Scales each tuple so that its first nonzero entry is `1`.
pub fn normalize_point(p: &HomPoint) -> Result<HomPoint> {
    p.iter()
        .map(|t| {
            let lead = t.iter().find(|x| !num_traits::Zero::is_zero(*x)).ok_or_else(|| Error::Degenerate("all-zero homogeneous tuple".into()))?;
            Ok(t.iter().map(|x| x / lead).collect())
        })
        .collect()
}

/// Standard-chart rendering of a point: `2`, `inf`, `(1, 0)`, `[0:1:3]`.
pub fn render_point(p: &HomPoint) -> String {
    use crate::scalar::fmt_rational;
    let parts: Vec<String> = p
        .iter()
        .map(|t| {
            if num_traits::One::is_one(&t[0]) {
                let rest: Vec<String> = t[1..].iter().map(fmt_rational).collect();
                if rest.len() == 1 {
                    rest[0].clone()
                } else {
                    format!("({})", rest.join(", "))
                }
            } else if t.len() == 2 {
                "inf".to_string()
            } else {
                format!("[{}]", t.iter().map(fmt_rational).collect::<Vec<_>>().join(":"))
            }
        })
        .collect();
    if parts.is_empty() {
        "pt".into()
    } else if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::dlog;
    use crate::poly::vars;
    use crate::scalar::Scalar;

    #[test]
    fn p1_transition_of_dlog() {
        let x = Variety::projective_line("z");
        let v = x.coords().clone();
        let w = x.chart(1).vars.clone();
        let form = dlog(&RationalFunction::var(&v, 0)).unwrap();
        let moved = x.chart_transition(&form, 0, 1).unwrap();
        assert_eq!(moved, dlog(&RationalFunction::var(&w, 0)).unwrap().neg());
        let dz = DifferentialForm::dvar(&v, 0);
        let moved = x.chart_transition(&dz, 0, 1).unwrap();
        let wv = RationalFunction::var(&w, 0);
        assert_eq!(moved, DifferentialForm::dvar(&w, 0).mul_function(&wv.pow(-2).unwrap().neg()));
    }

    #[test]
    fn plane_transition_matches_direct_substitution() {
        let x = Variety::projective_plane("z1", "z2").unwrap();
        let v = x.coords().clone();
        let z1 = RationalFunction::var(&v, 0);
        let z2 = RationalFunction::var(&v, 1);
        let form = DifferentialForm::top(z1.mul(&z2).inv().unwrap());
        let moved = x.chart_transition(&form, 0, 1).unwrap();
        // oracle: z1 = 1/u, z2 = v/u gives dz1∧dz2 = -du∧dv/u^3 and z1 z2 = v/u^2
        let c = x.chart(1).vars.clone();
        let u = RationalFunction::var(&c, 0);
        let vv = RationalFunction::var(&c, 1);
        let expected = DifferentialForm::top(u.mul(&vv).inv().unwrap().neg());
        assert_eq!(moved, expected);
        let back = x.chart_transition(&moved, 1, 0).unwrap();
        assert_eq!(back, form);
    }

    #[test]
    fn components_in_charts() {
        let x = Variety::product_of_lines(&["x".into(), "y".into()]).unwrap();
        let v = x.coords().clone();
        let p = Polynomial::var(&v, 0).sub(&Polynomial::constant(&v, Scalar::from_int(2)));
        let comp = x.component(&p).unwrap();
        assert_eq!(comp.label(), "x - 2");
        assert_eq!(comp.visible_charts().count(), 4);
        let inf = x.infinity(1).unwrap();
        assert_eq!(inf.label(), "inf(y)");
        assert_eq!(inf.visible_charts().collect::<Vec<_>>(), vec![2, 3]);
        let plane = Variety::projective_plane("a", "b").unwrap();
        assert_eq!(plane.infinity(0).unwrap().first_visible(), 1);
        assert_eq!(plane.to_string(), "P2(a,b)");
        assert_eq!(x.to_string(), "P1(x) x P1(y)");
        let _ = vars(&["x"]);
    }

    #[test]
    fn curve_catalog_checks_smoothness() {
        let v = vars(&["x", "y"]);
        let x = Polynomial::var(&v, 0);
        let y = Polynomial::var(&v, 1);
        let smooth = y.pow(2).sub(&x.pow(3)).sub(&x);
        assert!(Variety::plane_curve(&smooth).is_ok());
        let cusp = y.pow(2).sub(&x.pow(3));
        assert!(matches!(Variety::plane_curve(&cusp), Err(Error::SingularCurve(_))));
    }
}
