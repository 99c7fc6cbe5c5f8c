use proptest::prelude::*;

use polarcalc::chains::{boundary, check_d_squared, normalize, Options};
use polarcalc::forms::{dlog, DifferentialForm};
use polarcalc::geometry::Variety;
use polarcalc::residue::total_residue_p1;
use polarcalc::session::Session;
use polarcalc::verify::{random_chain, random_p1_form, rng};
use polarcalc::{poly::vars, Polynomial, Rational, RationalFunction, Scalar, Vars};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -2i32..=2).prop_map(|(n, d, k)| Scalar::monomial(Rational::new(n.into(), d.into()), k))
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::from_rational(Rational::new(n.into(), d.into())))
}

fn poly(v: Vars) -> impl Strategy<Value = Polynomial> {
    poly_with(v, scalar())
}

fn poly_with(v: Vars, coeff: impl Strategy<Value = Scalar>) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((coeff, 0u32..3, 0u32..3), 0..4).prop_map(move |terms| {
        terms.into_iter().fold(Polynomial::zero(&v), |acc, (c, i, j)| {
            acc.add(&Polynomial::var(&v, 0).pow(i).mul(&Polynomial::var(&v, 1).pow(j)).scale(&c))
        })
    })
}

fn xy() -> Vars {
    vars(&["x", "y"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if a.is_monomial() && !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn polynomial_gcd_divides(p in poly_with(xy(), rational()), q in poly_with(xy(), rational()), r in poly_with(xy(), rational())) {
        let (a, b) = (p.mul(&r), q.mul(&r));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = a.gcd(&b);
        prop_assert!(a.div_exact(&g).is_some());
        prop_assert!(b.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&r.monic()).is_some());
    }

    #[test]
    fn rational_functions_form_a_field(p in poly(xy()), q in poly(xy())) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let f = RationalFunction::new(p.clone(), q.clone()).unwrap();
        prop_assert!(f.mul(&f.inv().unwrap()).sub(&RationalFunction::one(&xy())).is_zero());
        prop_assert_eq!(f.add(&f), f.scale(&Scalar::from_int(2)));
    }

    #[test]
    fn exterior_derivative_squares_to_zero(p in poly(xy()), q in poly(xy())) {
        prop_assume!(!q.is_zero());
        let f = DifferentialForm::function(RationalFunction::new(p, q).unwrap());
        prop_assert!(f.exterior_derivative().exterior_derivative().is_zero());
    }

    #[test]
    fn wedge_of_logs_anticommutes(p in poly(xy()), q in poly(xy())) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let (a, b) = (dlog(&RationalFunction::from_poly(p)).unwrap(), dlog(&RationalFunction::from_poly(q)).unwrap());
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().neg());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn form_text_round_trips(p in poly(xy()), q in poly(xy()), r in poly(xy())) {
        prop_assume!(!q.is_zero());
        let v = xy();
        let f = RationalFunction::new(p, q).unwrap();
        let w = DifferentialForm::dvar(&v, 0).mul_function(&f).add(&DifferentialForm::dvar(&v, 1).mul_function(&RationalFunction::from_poly(r))).unwrap();
        // the zero form renders as `0` of no particular degree
        prop_assume!(!w.is_zero());
        let back = Session::new(Options::default()).parse_form(&w.render(), &v).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn total_residue_vanishes(seed in any::<u64>()) {
        let line = Variety::projective_line("z");
        let (form, _) = random_p1_form(&mut rng(seed), &line).unwrap();
        prop_assert!(total_residue_p1(&form, &line).unwrap().is_zero());
    }

    #[test]
    fn boundary_squares_to_zero(seed in any::<u64>(), which in 0usize..2) {
        let opts = Options::default();
        let mut resamples = 0;
        let c = random_chain(&mut rng(seed), which, &mut resamples).unwrap();
        prop_assert!(check_d_squared(&c, &opts).unwrap().is_zero());
    }

    #[test]
    fn boundary_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), k in scalar()) {
        let opts = Options::default();
        let mut resamples = 0;
        let a = random_chain(&mut rng(s1), 0, &mut resamples).unwrap();
        let b = random_chain(&mut rng(s2), 0, &mut resamples).unwrap();
        let lhs = boundary(&a.add(&b.scale(&k)).unwrap(), &opts).unwrap().chain;
        let rhs = normalize(&boundary(&a, &opts).unwrap().chain.add(&boundary(&b, &opts).unwrap().chain.scale(&k)).unwrap(), &opts).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
