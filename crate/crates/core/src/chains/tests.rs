use super::*;
use crate::forms::dlog;
use crate::scalar::int;

fn opts() -> Options {
    Options::default()
}

fn rf(p: Polynomial) -> RationalFunction {
    RationalFunction::from_poly(p)
}

fn lin(v: &crate::poly::Vars, i: usize, a: i64) -> Polynomial {
    Polynomial::var(v, i).sub(&Polynomial::constant(v, Scalar::from_int(a)))
}

fn tau_inv() -> Scalar {
    Scalar::tau_pow(-1)
}

fn hp(xs: &[i64]) -> HomPoint {
    xs.iter().map(|&x| vec![int(1), int(x)]).collect()
}

#[test]
fn boundary_of_log_chain_on_line() {
    let x = Variety::projective_line("z");
    let v = x.coords().clone();
    let z = lin(&v, 0, 0);
    let z1 = lin(&v, 0, 1);
    let form = dlog(&rf(z.clone()).div(&rf(z1.clone())).unwrap()).unwrap().scale(&tau_inv());
    let poles = vec![x.component(&z).unwrap(), x.component(&z1).unwrap()];
    let c = PolarChain::from_triple(&x, Triple::new(&x, &x, &Map::identity(&x), &form, &poles).unwrap());
    let b = boundary(&c, &opts()).unwrap();
    // oracle: residue +1 at 0 and -1 at 1, times TAU, times TAU^-1
    let expected = PolarChain::from_triple(&x, Triple::point(&x, &hp(&[0]), Scalar::one()).unwrap())
        .add(&PolarChain::from_triple(&x, Triple::point(&x, &hp(&[1]), Scalar::from_int(-1)).unwrap()))
        .unwrap();
    assert_eq!(b.chain, normalize(&expected, &opts()).unwrap());
    assert_eq!(b.provenance.len(), 2);
}

#[test]
fn pole_order_errors() {
    let x = Variety::projective_line("z");
    let v = x.coords().clone();
    let z = lin(&v, 0, 0);
    let dz = DifferentialForm::dvar(&v, 0);
    let double = dz.mul_function(&rf(z.pow(2)).inv().unwrap());
    let comps = vec![x.component(&z).unwrap()];
    assert!(matches!(Triple::new(&x, &x, &Map::identity(&x), &double, &comps), Err(Error::HigherOrderPole { .. })));
    let simple = dz.mul_function(&rf(z.clone()).inv().unwrap());
    assert!(matches!(Triple::new(&x, &x, &Map::identity(&x), &simple, &[]), Err(Error::UndeclaredPole { .. })));
    // dz has a double pole at infinity
    assert!(matches!(Triple::new(&x, &x, &Map::identity(&x), &dz, &[x.infinity(0).unwrap()]), Err(Error::HigherOrderPole { .. })));
}

#[test]
fn relations_fold_and_cancel() {
    let x = Variety::projective_line("z");
    let v = x.coords().clone();
    let z = lin(&v, 0, 0);
    let form = dlog(&rf(z.clone())).unwrap();
    let poles = vec![x.component(&z).unwrap(), x.infinity(0).unwrap()];
    let c = PolarChain::from_triple(&x, Triple::new(&x, &x, &Map::identity(&x), &form, &poles).unwrap());
    assert!(normalize(&c.sub(&c).unwrap(), &opts()).unwrap().is_zero());
    assert!(normalize(&c.scale(&Scalar::zero()), &opts()).unwrap().is_zero());
    let doubled = normalize(&c.add(&c).unwrap(), &opts()).unwrap();
    assert_eq!(doubled, normalize(&c.scale(&Scalar::from_int(2)), &opts()).unwrap());
}

#[test]
fn degenerate_and_pushed_terms() {
    let x = Variety::projective_line("w");
    let a = Variety::projective_line("t");
    let v = a.coords().clone();
    let t = lin(&v, 0, 0);
    let form = dlog(&rf(t.clone())).unwrap();
    let poles = vec![a.component(&t).unwrap(), a.infinity(0).unwrap()];
    let constant = Map::constant(&v, &hp(&[2])).unwrap();
    let c = PolarChain::from_triple(&x, Triple::new(&a, &x, &constant, &form, &poles).unwrap());
    assert!(normalize(&c, &opts()).unwrap().is_zero());
    let strict = Options { strict: true, ..opts() };
    assert!(normalize(&c, &strict).unwrap().is_zero());
    let sq = Map::from_affine(&v, &x, &[Some(rf(t.pow(2)))]).unwrap();
    let pushed = normalize(&PolarChain::from_triple(&x, Triple::new(&a, &x, &sq, &form, &poles).unwrap()), &opts()).unwrap();
    let w = lin(x.coords(), 0, 0);
    let direct = Triple::new(&x, &x, &Map::identity(&x), &dlog(&rf(w.clone())).unwrap(), &[x.component(&w).unwrap(), x.infinity(0).unwrap()]).unwrap();
    assert_eq!(pushed, PolarChain::from_triple(&x, direct));
}

fn triangle() -> (Variety, PolarChain) {
    let x = Variety::projective_plane("z1", "z2").unwrap();
    let v = x.coords().clone();
    let z1 = lin(&v, 0, 0);
    let z2 = lin(&v, 1, 0);
    let l = z1.add(&z2).sub(&Polynomial::one(&v));
    let omega = DifferentialForm::top(rf(z1.mul(&z2).mul(&l)).inv().unwrap());
    let poles: Vec<_> = [&z1, &z2, &l].iter().map(|p| x.component(p).unwrap()).collect();
    let t = Triple::new(&x, &x, &Map::identity(&x), &omega, &poles).unwrap();
    (x.clone(), PolarChain::from_triple(&x, t))
}

#[test]
fn d_squared_vanishes_on_triangle() {
    let (_, c) = triangle();
    let report = check_d_squared(&c, &opts()).unwrap();
    assert!(report.is_zero());
    assert_eq!(report.first.terms().len(), 3);
    assert_eq!(report.cancellations.len(), 3);
    for row in &report.cancellations {
        assert_eq!(row.contributions.len(), 2);
        assert!(row.total().is_zero(), "{}", row.point);
    }
}

#[test]
fn d_squared_on_product_of_lines() {
    let x = Variety::product_of_lines(&["x".into(), "y".into()]).unwrap();
    let v = x.coords().clone();
    let (xx, y) = (lin(&v, 0, 0), lin(&v, 1, 0));
    let omega = dlog(&rf(xx.clone())).unwrap().wedge(&dlog(&rf(y.clone())).unwrap()).unwrap();
    let poles = vec![x.component(&xx).unwrap(), x.component(&y).unwrap(), x.infinity(0).unwrap(), x.infinity(1).unwrap()];
    let c = PolarChain::from_triple(&x, Triple::new(&x, &x, &Map::identity(&x), &omega, &poles).unwrap());
    let report = check_d_squared(&c, &opts()).unwrap();
    assert!(report.is_zero());
    assert_eq!(report.first.terms().len(), 4);
    assert_eq!(report.cancellations.len(), 4);
}

#[test]
fn merge_refused_without_normal_crossing() {
    let x = Variety::product_of_lines(&["x".into(), "y".into()]).unwrap();
    let v = x.coords().clone();
    let (xx, y) = (lin(&v, 0, 0), lin(&v, 1, 0));
    let graph = xx.mul(&y).sub(&Polynomial::one(&v));
    let a = dlog(&rf(xx.clone())).unwrap().wedge(&dlog(&rf(y.clone())).unwrap()).unwrap();
    let b = DifferentialForm::top(rf(graph.clone()).inv().unwrap());
    let inf = [x.infinity(0).unwrap(), x.infinity(1).unwrap()];
    let pa = vec![x.component(&xx).unwrap(), x.component(&y).unwrap(), inf[0].clone(), inf[1].clone()];
    let pb = vec![x.component(&graph).unwrap(), inf[0].clone(), inf[1].clone()];
    let ta = Triple::new(&x, &x, &Map::identity(&x), &a, &pa).unwrap();
    let tb = Triple::new(&x, &x, &Map::identity(&x), &b, &pb).unwrap();
    let c = PolarChain::from_triple(&x, ta).add(&PolarChain::from_triple(&x, tb)).unwrap();
    let n = normalize(&c, &opts()).unwrap();
    assert_eq!(n.terms().len(), 2);
    assert!(!n.flags().is_empty());
}

#[test]
fn witness_and_nonzero_weight() {
    let x = Variety::projective_line("z");
    let pts = vec![(int(0), Scalar::from_int(2)), (int(3), Scalar::from_int(-2))];
    let w = boundary_witness_p1(&x, &pts, &opts()).unwrap();
    assert!(w.verified);
    let bad = vec![(int(0), Scalar::one())];
    assert!(matches!(boundary_witness_p1(&x, &bad, &opts()), Err(Error::NonzeroWeight(_))));
}

#[test]
fn relative_cycles() {
    let x = Variety::projective_line("z");
    let v = x.coords().clone();
    let z = lin(&v, 0, 0);
    let z1 = lin(&v, 0, 1);
    let form = dlog(&rf(z.clone()).div(&rf(z1.clone())).unwrap()).unwrap();
    let poles = vec![x.component(&z).unwrap(), x.component(&z1).unwrap()];
    let c = PolarChain::from_triple(&x, Triple::new(&x, &x, &Map::identity(&x), &form, &poles).unwrap());
    assert!(!is_cycle(&c, &opts()).unwrap().0);
    let zsub = Subvariety::new(&x, &[hp(&[0]), hp(&[1])], &[]).unwrap();
    let rel = reduce_relative(&c, &zsub, &opts()).unwrap();
    assert!(is_cycle(&rel, &opts()).unwrap().0);
    let other = Variety::projective_line("w");
    let zw = Subvariety::new(&other, &[], &[]).unwrap();
    assert!(matches!(reduce_relative(&c, &zw, &opts()), Err(Error::NotInAmbient(_))));
}

#[test]
fn support_of_graph_and_points() {
    let x = Variety::product_of_lines(&["x".into(), "y".into()]).unwrap();
    let a = Variety::projective_line("t");
    let v = a.coords().clone();
    let t = lin(&v, 0, 0);
    let t1 = lin(&v, 0, 1);
    let map = Map::from_affine(&v, &x, &[Some(rf(t.clone())), Some(rf(t.pow(2)))]).unwrap();
    let form = dlog(&rf(t.clone()).div(&rf(t1.clone())).unwrap()).unwrap();
    let tri = Triple::new(&a, &x, &map, &form, &[a.component(&t).unwrap(), a.component(&t1).unwrap()]).unwrap();
    let s = support(&PolarChain::from_triple(&x, tri), &opts()).unwrap();
    let xv = x.coords().clone();
    let parabola = lin(&xv, 1, 0).sub(&lin(&xv, 0, 0).pow(2));
    assert_eq!(s, vec![Support::Hypersurface(x.component(&parabola).unwrap().label().to_string())]);
    let p = PolarChain::from_triple(&x, Triple::point(&x, &hp(&[1, 2]), Scalar::one()).unwrap());
    assert_eq!(support(&p, &opts()).unwrap()[0].to_string(), "point (1, 2)");
}

#[test]
fn curve_terms() {
    let x = Variety::projective_plane("x", "y").unwrap();
    let v = x.coords().clone();
    let (xx, y) = (lin(&v, 0, 0), lin(&v, 1, 0));
    let p = y.pow(2).sub(&xx.pow(3)).sub(&xx);
    let e = Variety::plane_curve(&p).unwrap();
    let form = DifferentialForm::dvar(&v, 0).mul_function(&rf(y.clone()).inv().unwrap());
    let t = Triple::new(&e, &x, &Map::identity(&x), &form, &[]).unwrap();
    let c = PolarChain::from_triple(&x, t);
    let n = normalize(&c, &opts()).unwrap();
    assert_eq!(n.terms().len(), 1);
    assert!(is_cycle(&n, &opts()).unwrap().0);
    let s = support(&n, &opts()).unwrap();
    assert_eq!(s, vec![Support::Hypersurface(x.component(&p).unwrap().label().to_string())]);
    let polar = DifferentialForm::dvar(&v, 0);
    assert!(matches!(Triple::new(&e, &x, &Map::identity(&x), &polar, &[]), Err(Error::UndeclaredPole { .. })));
}
