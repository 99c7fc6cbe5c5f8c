use num_traits::One;

use polarcalc::chains::{boundary, normalize, Options};
use polarcalc::forms::DifferentialForm;
use polarcalc::geometry::{curve_reduce, validate_normal_crossing, Variety};
use polarcalc::residue::p1_poles;
use polarcalc::session::{Outcome, Report, Session};
use polarcalc::{Error, Polynomial, Rational, RationalFunction, Scalar};

fn run(src: &str) -> Vec<Report> {
    Session::new(Options::default()).run_source(src).unwrap()
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[test]
fn infinity_chart_of_coordinate_log_form() {
    let x = Variety::projective_plane("z1", "z2").unwrap();
    let v = x.coords().clone();
    let (z1, z2) = (Polynomial::var(&v, 0), Polynomial::var(&v, 1));
    let omega = DifferentialForm::top(RationalFunction::from_poly(z1.mul(&z2)).inv().unwrap());
    let moved = x.chart_transition(&omega, 0, 1).unwrap();
    // substitute z1 = 1/u, z2 = v/u by hand
    let w = x.chart(1).vars.clone();
    let (u, vv) = (RationalFunction::var(&w, 0), RationalFunction::var(&w, 1));
    let by_hand = omega.pullback(&[u.inv().unwrap(), vv.div(&u).unwrap()], &w).unwrap();
    let expected = DifferentialForm::top(u.mul(&vv).inv().unwrap().neg());
    assert_eq!(by_hand, expected);
    assert_eq!(moved, expected);
}

#[test]
fn normal_crossing_rejections() {
    let x = Variety::projective_plane("x", "y").unwrap();
    let v = x.coords().clone();
    let (px, py) = (Polynomial::var(&v, 0), Polynomial::var(&v, 1));
    let tangent = [x.component(&py).unwrap(), x.component(&py.sub(&px.pow(2))).unwrap()];
    assert!(matches!(validate_normal_crossing(&tangent, &x), Err(Error::NormalCrossing(_))));
    let triple = [x.component(&px).unwrap(), x.component(&py).unwrap(), x.component(&px.add(&py)).unwrap()];
    assert!(matches!(validate_normal_crossing(&triple, &x), Err(Error::NormalCrossing(_))));
    assert!(validate_normal_crossing(&triple[..2], &x).is_ok());
}

#[test]
fn curve_function_field() {
    let x = Variety::projective_plane("x", "y").unwrap();
    let v = x.coords().clone();
    let (px, py) = (Polynomial::var(&v, 0), Polynomial::var(&v, 1));
    let e = Variety::plane_curve(&py.pow(2).sub(&px.pow(3)).sub(&px)).unwrap();
    let r = curve_reduce(&RationalFunction::from_poly(py.clone()).inv().unwrap(), &e).unwrap();
    let expected = RationalFunction::new(py.clone(), px.pow(3).add(&px)).unwrap();
    assert_eq!(r, expected);
    assert!(matches!(Variety::plane_curve(&py.pow(2).sub(&px.pow(3))), Err(Error::SingularCurve(_))));
}

#[test]
fn residues_on_the_line() {
    let x = Variety::projective_line("z");
    let v = x.coords().clone();
    let roots = [0i64, 1, 2];
    let den = roots.iter().fold(Polynomial::one(&v), |acc, &r| acc.mul(&Polynomial::var(&v, 0).sub(&Polynomial::constant(&v, Scalar::from_int(r)))));
    let form = DifferentialForm::dvar(&v, 0).mul_function(&RationalFunction::from_poly(den).inv().unwrap());
    let found = p1_poles(&form, &x).unwrap();
    // partial fractions: residue at r is 1 / Π_{s≠r} (r - s)
    for &r in &roots {
        let oracle = roots.iter().filter(|&&s| s != r).fold(Rational::one(), |acc, &s| acc / int(r - s));
        let got = found.iter().find(|(p, _)| p.as_ref() == Some(&int(r))).map(|(_, w)| w.clone());
        assert_eq!(got, Some(Scalar::from_rational(oracle)));
    }
    assert_eq!(found.len(), 3);
    let r = run("let A = P1(z);\nlet a = chain(A, id, 1/(z*(z-1)*(z-2))*dz, poles[z, z - 1, z - 2]);\ntotal-residue a;");
    assert_eq!(r[2].result, "0");
}

#[test]
fn iterated_residues_anticommute() {
    let r = run("let X = P2(a,b);\nlet c = chain(X, id, 1/(a*b)*da^db, poles[a, b, inf]);\nresidue c along a then b;\nresidue c along b then a;");
    assert_eq!(r[2].result, "(0, 0): 1");
    assert_eq!(r[3].result, "(0, 0): -1");
}

#[test]
fn boundary_of_coordinate_log_form() {
    let s = Session::new(Options::default());
    let c = s.parse_chain("chain(P2(a,b), P2(a,b), id, 1/(a*b)*da^db, poles[a, b, inf])").unwrap();
    let b = boundary(&c, s.options()).unwrap();
    assert_eq!(b.chain.terms().len(), 3);
    for t in b.chain.terms() {
        let mut res: Vec<Scalar> = p1_poles(t.form(), t.source()).unwrap().into_iter().map(|(_, w)| w).collect();
        res.sort_by_key(|w| w.to_string());
        assert_eq!(res, vec![Scalar::tau_pow(1).scale(&int(-1)), Scalar::tau_pow(1)], "{}", t.form());
    }
    let r = run("let X = P2(a,b);\nlet c = chain(X, id, 1/(a*b)*da^db, poles[a, b, inf]);\ndsq c;");
    assert!(r[2].result.starts_with("∂²c = 0"));
    assert_eq!(r[2].result.lines().count(), 4);
}

#[test]
fn holomorphic_curve_form_is_a_cycle() {
    let r = run("let E = Curve(y^2 - x^3 - x);\nlet c = chain(E, id, dx/y);\nboundary c;\niscycle c;\nsupport c;");
    assert_eq!(r[2].result, "zero(P2(x,y), 0)");
    assert_eq!(r[3].result, "cycle: true");
    assert!(r[4].result.starts_with("hypersurface"), "{}", r[4].result);
}

#[test]
fn squaring_relation_and_support() {
    let s = Session::new(Options::default());
    let c = s.parse_chain("chain(P1(t), P1(w), [t^2], dt/t, poles[t, inf]) - chain(P1(w), id, dw/w, poles[w, inf])").unwrap();
    assert!(normalize(&c, s.options()).unwrap().is_zero());
    let r = run("let a = chain(P1(t), P1(w), [t^2], dt/t, poles[t, inf]) - chain(P1(w), id, dw/w, poles[w, inf]);\nsupport a;");
    assert_eq!(r[1].result, "empty");
}

#[test]
fn witness_form() {
    let r = run("witness-p1 [(0,1),(1,-1)];");
    let s = Session::new(Options::default());
    let expected = normalize(&s.parse_chain("chain(P1(z), P1(z), id, TAU^-1*(1/z - 1/(z-1))*dz, poles[z, z - 1])").unwrap(), s.options()).unwrap();
    assert_eq!(r[0].result, format!("b = {}\n∂b = input: true", expected.render()));
}

#[test]
fn admissibility_failures_name_the_rule() {
    let r = run("let A = P1(z);\nlet a = chain(A, id, 1/z^2 * dz, poles[z]);");
    assert_eq!(r[1].outcome, Outcome::ComputationError);
    assert!(r[1].result.contains("first-order pole") && r[1].result.contains("order -2 along z"), "{}", r[1].result);
    let r = run("let A = P1(z);\nlet A = P1(w);");
    assert!(r[1].result.contains("already defined"));
}

#[test]
fn point_homotopy() {
    let r = run("let p = 2*point(P1(z), 3, 1);\nhomotopy-verify p;\nhomotopy-table p;");
    assert_eq!(r[1].result, "∂h + h∂ = id − s∗π∗: PASS");
    assert!(r[2].result.lines().all(|l| l.ends_with("PASS")), "{}", r[2].result);
}
