//! Exact normal-crossing validation through Gröbner bases of the
//! incidence-and-tangency systems in every chart.

use crate::error::{Error, Result};
use crate::poly::qpoly::{determinant, gcd, groebner, QPoly};
use crate::poly::{Polynomial, Vars};
use crate::scalar::Rational;
use crate::univariate::rational_roots;

use super::{normalize_point, DivisorComponent, HomPoint, Kind, Variety};

fn to_q(p: &Polynomial) -> Result<QPoly> {
    p.to_q()
}

/// Whether the polynomials have no common zero over the algebraic closure.
fn no_common_zero(polys: &[QPoly]) -> (bool, Option<QPoly>) {
    let basis = groebner(polys);
    match basis.first() {
        Some(b) if b.is_constant() => (true, None),
        Some(b) => (false, Some(b.clone())),
        None => (false, None),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All `k × k` minors of the Jacobian of `polys` (rows) in `n` variables.
fn minors(polys: &[&QPoly], n: usize) -> Vec<QPoly> {
    let k = polys.len();
    subsets(n, k)
        .into_iter()
        .map(|cols| {
            let m: Vec<Vec<QPoly>> = polys.iter().map(|p| cols.iter().map(|&c| p.derivative(c)).collect()).collect();
            determinant(m)
        })
        .collect()
}

fn witness(vars: &Vars, w: Option<QPoly>) -> String {
    match w {
        Some(q) => format!("; witness {}", Polynomial::from_q(vars, &q)),
        None => String::new(),
    }
}

/// Accepts iff the components are squarefree, pairwise coprime, smooth,
/// meet transversely, and no more than `dim` of them pass through a point.
pub fn validate_normal_crossing(components: &[DivisorComponent], variety: &Variety) -> Result<()> {
    if components.is_empty() {
        return Ok(());
    }
    if variety.is_curve() || variety.dimension() == 0 {
        return Err(Error::Unsupported(format!("divisor components on {variety}")));
    }
    for (i, a) in components.iter().enumerate() {
        if a.chart_count() != variety.charts().len() {
            return Err(Error::ChartMismatch(format!("component {a} does not live on {variety}")));
        }
        if components[..i].contains(a) {
            return Err(Error::NotCoprime(format!("{a} declared twice")));
        }
    }
    for (ci, chart) in variety.charts().iter().enumerate() {
        let n = chart.vars.len();
        let visible: Vec<(&DivisorComponent, QPoly)> = components
            .iter()
            .filter_map(|c| c.chart_poly(ci).map(|p| to_q(p).map(|q| (c, q))))
            .collect::<Result<_>>()?;
        for (i, (a, pa)) in visible.iter().enumerate() {
            if !Polynomial::from_q(&chart.vars, pa).is_squarefree() {
                return Err(Error::NormalCrossing(format!("component {a} is not squarefree in chart {}", chart.name())));
            }
            for (b, pb) in &visible[..i] {
                if !gcd(pa, pb).is_constant() {
                    return Err(Error::NotCoprime(format!("{b} and {a} share a factor in chart {}", chart.name())));
                }
            }
        }
        let m = visible.len();
        for k in 1..=m.min(n + 1) {
            for s in subsets(m, k) {
                let ps: Vec<&QPoly> = s.iter().map(|&i| &visible[i].1).collect();
                let mut system: Vec<QPoly> = ps.iter().map(|p| (*p).clone()).collect();
                if k <= n {
                    system.extend(minors(&ps, n));
                }
                let (ok, w) = no_common_zero(&system);
                if !ok {
                    let names: Vec<&str> = s.iter().map(|&i| visible[i].0.label()).collect();
                    let what = if k == 1 {
                        format!("component {} is singular", names[0])
                    } else if k > n {
                        format!("{k} components {{{}}} pass through a common point in dimension {n}", names.join(", "))
                    } else {
                        format!("components {{{}}} do not meet transversely", names.join(", "))
                    };
                    return Err(Error::NormalCrossing(format!("{what} in chart {}{}", chart.name(), witness(&chart.vars, w))));
                }
            }
        }
    }
    Ok(())
}

/// Smoothness of a plane curve in each of its charts.
pub(super) fn check_smooth_curve(v: &Variety) -> Result<()> {
    for (ci, chart) in v.charts().iter().enumerate() {
        let q = v.curve_poly(ci).expect("curve charts");
        if q.is_constant() {
            continue;
        }
        let qq = to_q(q)?;
        let system = vec![qq.clone(), qq.derivative(0), qq.derivative(1)];
        let (ok, w) = no_common_zero(&system);
        if !ok {
            return Err(Error::SingularCurve(format!("{q} is singular in chart {}{}", chart.name(), witness(&chart.vars, w))));
        }
    }
    Ok(())
}

/// Rational solutions of a zero-dimensional system in two variables.
fn solve_pair(a: &QPoly, b: &QPoly, vars: &Vars) -> Result<Vec<Vec<Rational>>> {
    let basis = groebner(&[a.clone(), b.clone()]);
    if basis.first().is_some_and(|p| p.is_constant()) {
        return Ok(vec![]);
    }
    // lex with the first variable most significant: the last element eliminates it
    let elim = basis.iter().rev().find(|p| !p.uses_var(0)).ok_or_else(|| Error::Degenerate("intersection is not finite".into()))?;
    let mut out = Vec::new();
    for (y, _) in rational_roots(&Polynomial::from_q(vars, elim), 1)? {
        let restricted: Vec<QPoly> = basis.iter().map(|p| p.eval_var(1, &y)).filter(|p| !p.is_zero()).collect();
        let g = restricted.iter().fold(QPoly::zero(2), |acc, p| gcd(&acc, p));
        if g.is_constant() {
            continue;
        }
        for (x, _) in rational_roots(&Polynomial::from_q(vars, &g), 0)? {
            out.push(vec![x, y.clone()]);
        }
    }
    Ok(out)
}

/// Intersection points of two components on a surface, as normalized
/// homogeneous points; irrational intersections are rejected.
pub fn intersect_components(a: &DivisorComponent, b: &DivisorComponent, variety: &Variety) -> Result<Vec<HomPoint>> {
    if variety.dimension() != 2 || variety.is_curve() {
        return Err(Error::Degenerate(format!("components of {variety} cannot be intersected")));
    }
    validate_normal_crossing(&[a.clone(), b.clone()], variety)?;
    let mut out: Vec<HomPoint> = Vec::new();
    for (ci, chart) in variety.charts().iter().enumerate() {
        let (Some(pa), Some(pb)) = (a.chart_poly(ci), b.chart_poly(ci)) else { continue };
        for pt in solve_pair(&to_q(pa)?, &to_q(pb)?, &chart.vars)? {
            let hom = chart_point_to_hom(variety, ci, &pt)?;
            if !out.contains(&hom) {
                out.push(hom);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Homogeneous coordinates of a point given in chart coordinates.
pub(crate) fn chart_point_to_hom(variety: &Variety, chart: usize, pt: &[Rational]) -> Result<HomPoint> {
    use num_traits::One;
    let raw: HomPoint = match variety.kind() {
        Kind::Point => vec![],
        Kind::Lines(k) => (0..*k)
            .map(|i| if chart >> i & 1 == 1 { vec![pt[i].clone(), Rational::one()] } else { vec![Rational::one(), pt[i].clone()] })
            .collect(),
        Kind::Plane | Kind::Curve(_) => {
            let one = Rational::one();
            vec![match chart {
                0 => vec![one, pt[0].clone(), pt[1].clone()],
                1 => vec![pt[0].clone(), one, pt[1].clone()],
                _ => vec![pt[1].clone(), pt[0].clone(), one],
            }]
        }
    };
    normalize_point(&raw)
}

/// The chart containing a point and the point's coordinates there.
pub(crate) fn hom_to_chart(variety: &Variety, p: &HomPoint) -> (usize, Vec<Rational>) {
    use num_traits::Zero;
    match variety.kind() {
        Kind::Point => (0, vec![]),
        Kind::Lines(_) => {
            let mut chart = 0;
            let mut coords = Vec::new();
            for (i, t) in p.iter().enumerate() {
                if t[0].is_zero() {
                    chart |= 1 << i;
                    coords.push(&t[0] / &t[1]);
                } else {
                    coords.push(&t[1] / &t[0]);
                }
            }
            (chart, coords)
        }
        Kind::Plane | Kind::Curve(_) => {
            let t = &p[0];
            if !t[0].is_zero() {
                (0, vec![&t[1] / &t[0], &t[2] / &t[0]])
            } else if !t[1].is_zero() {
                (1, vec![&t[0] / &t[1], &t[2] / &t[1]])
            } else {
                (2, vec![&t[1] / &t[2], &t[0] / &t[2]])
            }
        }
    }
}

/// Whether a component passes through a point.
pub fn component_contains(variety: &Variety, c: &DivisorComponent, p: &HomPoint) -> bool {
    let (chart, coords) = hom_to_chart(variety, p);
    c.chart_poly(chart).is_some_and(|q| q.evaluate(&coords).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qpoly::resultant;
    use crate::scalar::{int, Scalar};

    fn plane() -> Variety {
        Variety::product_of_lines(&["x".into(), "y".into()]).unwrap()
    }

    fn comp(v: &Variety, p: Polynomial) -> DivisorComponent {
        v.component(&p).unwrap()
    }

    #[test]
    fn coordinate_axes_cross_normally() {
        let v = plane();
        let c = v.coords().clone();
        let comps = [comp(&v, Polynomial::var(&c, 0)), comp(&v, Polynomial::var(&c, 1))];
        assert!(validate_normal_crossing(&comps, &v).is_ok());
    }

    #[test]
    fn tangency_rejected_with_elimination_oracle() {
        let v = plane();
        let c = v.coords().clone();
        let x = Polynomial::var(&c, 0);
        let y = Polynomial::var(&c, 1);
        let parabola = y.sub(&x.pow(2));
        // oracle: eliminate y from {y, y - x^2}, the tangency minor is -2x; they share the root x = 0
        let r = resultant(&y.to_q().unwrap(), &parabola.to_q().unwrap(), 1);
        let minor = QPoly::var(2, 0).scale(&int(-2));
        assert!(!gcd(&r, &minor).is_constant());
        let comps = [comp(&v, y), comp(&v, parabola)];
        assert!(matches!(validate_normal_crossing(&comps, &v), Err(Error::NormalCrossing(_))));
    }

    #[test]
    fn three_concurrent_lines_rejected() {
        let v = Variety::projective_plane("x", "y").unwrap();
        let c = v.coords().clone();
        let x = Polynomial::var(&c, 0);
        let y = Polynomial::var(&c, 1);
        let comps = [comp(&v, x.clone()), comp(&v, y.clone()), comp(&v, x.add(&y))];
        let err = validate_normal_crossing(&comps, &v).unwrap_err();
        assert!(err.to_string().contains("common point"), "{err}");
        // elimination oracle: x = 0 and y = 0 force x + y = 0
        assert!(!no_common_zero(&[QPoly::var(2, 0), QPoly::var(2, 1)]).0);
    }

    #[test]
    fn parallel_lines_meet_at_infinity() {
        let v = Variety::projective_plane("x", "y").unwrap();
        let c = v.coords().clone();
        let x = Polynomial::var(&c, 0);
        let one = Polynomial::constant(&c, Scalar::from_int(1));
        let comps = [comp(&v, x.clone()), comp(&v, x.sub(&one)), v.infinity(0).unwrap()];
        assert!(validate_normal_crossing(&comps, &v).is_err());
        assert!(validate_normal_crossing(&comps[..2], &v).is_ok());
    }

    #[test]
    fn intersections() {
        let v = plane();
        let c = v.coords().clone();
        let x = Polynomial::var(&c, 0);
        let y = Polynomial::var(&c, 1);
        let one = Polynomial::one(&c);
        let pts = intersect_components(&comp(&v, x.clone()), &comp(&v, y.sub(&one)), &v).unwrap();
        assert_eq!(pts, vec![vec![vec![int(1), int(0)], vec![int(1), int(1)]]]);
        let p1 = Variety::projective_line("z");
        let z = Polynomial::var(p1.coords(), 0);
        assert!(intersect_components(&comp(&p1, z.clone()), &comp(&p1, z.sub(&Polynomial::one(p1.coords()))), &p1).is_err());
        let inf = v.infinity(0).unwrap();
        let pts = intersect_components(&inf, &comp(&v, y.sub(&one)), &v).unwrap();
        assert_eq!(pts, vec![vec![vec![int(0), int(1)], vec![int(1), int(1)]]]);
    }
}
