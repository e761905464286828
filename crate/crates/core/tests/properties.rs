mod common;

use proptest::prelude::*;

use common::action;
use wick_core::calculus::{ChartMap, Form, VectorField};
use wick_core::chart::Chart;
use wick_core::exactnum::{
    parse_expr, Monomial, Polynomial, RationalFunction, Scalar, Series, Var,
};
use wick_core::momentum::{
    lambda_cocycle, solve_coboundary, verify_quantum_hamiltonian, Coboundary,
};
use wick_core::star::StarProduct;
use wick_core::symmetry::{find_primitive, Ansatz};

const DENOMINATORS: [&str; 6] = ["1", "1+z1*w1", "1-z1", "2+w1^2", "(1+z1*w1)^2", "z1+w1+3"];

fn scalar() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, -2i64..=2).prop_map(|(re, im)| Scalar::complex(re, im))
}

fn polynomial(max_exp: u16) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..=max_exp, 0..=max_exp, scalar()), 0..4).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(ez, ew, c)| {
            let mut m = Monomial::one();
            m.0[Var::Z(0).slot()] = ez;
            m.0[Var::W(0).slot()] = ew;
            (m, c)
        }))
    })
}

fn rational() -> impl Strategy<Value = RationalFunction> {
    (polynomial(2), 0..DENOMINATORS.len()).prop_map(|(p, d)| {
        RationalFunction::from_poly(p)
            .div(&parse_expr(DENOMINATORS[d], 1).unwrap())
            .unwrap()
    })
}

fn one_form() -> impl Strategy<Value = Form> {
    (rational(), rational())
        .prop_map(|(a, b)| Form::one_form(1, Var::Z(0), a).add(&Form::one_form(1, Var::W(0), b)))
}

fn holomorphic_field() -> impl Strategy<Value = VectorField> {
    (scalar(), scalar(), scalar()).prop_map(|(a, b, c)| {
        let z = RationalFunction::var(Var::Z(0));
        let w = RationalFunction::var(Var::W(0));
        let chi = RationalFunction::constant(a)
            .add(&z.scale(&b))
            .add(&z.mul(&z).scale(&c));
        let chibar = RationalFunction::constant(b).add(&w.scale(&c));
        VectorField::new(vec![chi], vec![chibar])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert!(a.add(&b).add(&c).equals(&a.add(&b.add(&c))));
        prop_assert!(a.mul(&b.add(&c)).equals(&a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.mul(&b).mul(&c).equals(&a.mul(&b.mul(&c))));
        prop_assert!(a.sub(&a).is_zero());
        if !b.is_zero() {
            prop_assert!(a.div(&b).unwrap().mul(&b).equals(&a));
            prop_assert!(b.mul(&b.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn rendering_reparses(a in rational()) {
        prop_assert!(parse_expr(&a.to_string(), 1).unwrap().equals(&a));
    }

    #[test]
    fn derivatives_commute_and_obey_leibniz(a in rational(), b in rational()) {
        let (z, w) = (Var::Z(0), Var::W(0));
        prop_assert!(a.derivative(z).derivative(w).equals(&a.derivative(w).derivative(z)));
        let lhs = a.mul(&b).derivative(z);
        let rhs = a.derivative(z).mul(&b).add(&a.mul(&b.derivative(z)));
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn perfect_powers_split(p in polynomial(2), k in 2u32..4) {
        prop_assume!(!p.is_constant());
        let (_, monic) = p.make_monic();
        let (root, e) = monic.pow(k).perfect_power();
        prop_assert!(e % k == 0);
        prop_assert_eq!(root.pow(e), monic.pow(k));
    }

    #[test]
    fn series_ring_laws(a in prop::collection::vec(rational(), 3), b in prop::collection::vec(rational(), 3), c in prop::collection::vec(rational(), 3)) {
        let (a, b, c) = (Series::from_coeffs(a, 2), Series::from_coeffs(b, 2), Series::from_coeffs(c, 2));
        prop_assert!(a.mul(&b).mul(&c).equals(&a.mul(&b.mul(&c))));
        prop_assert!(a.mul(&b).equals(&b.mul(&a)));
        prop_assert!(a.mul(&b.add(&c)).equals(&a.mul(&b).add(&a.mul(&c))));
    }

    #[test]
    fn exterior_calculus_identities(f in rational(), g in one_form(), x in holomorphic_field()) {
        let n = 1;
        let fz = Form::function(n, f.clone());
        prop_assert!(fz.d().d().is_zero());
        prop_assert!(g.d().d().is_zero());
        prop_assert!(fz.del().del_bar().equals(&fz.del_bar().del().neg()));
        let two = g.d();
        prop_assert!(two.interior(&x).unwrap().interior(&x).unwrap().is_zero());
        prop_assert!(g.lie(&x).d().equals(&g.d().lie(&x)));
        prop_assert!(fz.lie(&x).equals(&Form::function(n, x.apply(&f))));
    }

    #[test]
    fn pullback_by_a_map_and_its_inverse(f in rational(), g in one_form(), k in 1i64..4) {
        // z -> z / (1 + k z), inverse z -> z / (1 - k z)
        let phi = ChartMap::new(vec![parse_expr(&format!("z1/(1+{k}*z1)"), 1).unwrap()], None).unwrap();
        let psi = ChartMap::new(vec![parse_expr(&format!("z1/(1-{k}*z1)"), 1).unwrap()], None).unwrap();
        phi.verify_inverse(&psi).unwrap();
        let back = phi.pullback_function(&f).and_then(|h| psi.pullback_function(&h)).unwrap();
        prop_assert!(back.equals(&f));
        let form_back = g.pullback(&phi).and_then(|h| h.pullback(&psi)).unwrap();
        prop_assert!(form_back.equals(&g));
        prop_assert!(g.d().pullback(&phi).unwrap().equals(&g.pullback(&phi).unwrap().d()));
    }

    #[test]
    fn primitive_of_a_differential(a in rational()) {
        let da = Form::function(1, a.clone()).d();
        let found = find_primitive(&da, Ansatz::default()).unwrap();
        prop_assert!(found.is_some());
        let diff = found.unwrap().sub(&a);
        prop_assert!(diff.constant_value().is_some(), "primitive differs by {}", diff);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flat_product_is_associative_on_random_polynomials(a in polynomial(2), b in polynomial(2), c in polynomial(2)) {
        let sp = StarProduct::new(&Chart::flat(1, 3), 3);
        let s = |p: Polynomial| Series::constant(RationalFunction::from_poly(p), 3);
        let (a, b, c) = (s(a), s(b), s(c));
        let left = sp.star(&sp.star(&a, &b).unwrap(), &c).unwrap();
        let right = sp.star(&a, &sp.star(&b, &c).unwrap()).unwrap();
        prop_assert!(left.equals(&right));
    }

    #[test]
    fn constant_shifts_are_gauge(re in -5i64..5, im in -5i64..5, re2 in -5i64..5) {
        let act = action("translations");
        let c = Chart::flat(1, 2);
        let sp = StarProduct::new(&c, 2);
        let j = vec![
            Series::from_coeffs(vec![parse_expr("w1-z1", 1).unwrap()], 2),
            Series::from_coeffs(vec![parse_expr("i*(w1+z1)", 1).unwrap()], 2),
        ];
        let shift = |s: &Series<RationalFunction>, c: Scalar| {
            s.add(&Series::constant(RationalFunction::constant(c), 2))
        };
        let shifted = vec![shift(&j[0], Scalar::complex(re, im)), shift(&j[1], Scalar::from_int(re2))];
        prop_assert!(verify_quantum_hamiltonian(&sp, &act, &shifted).unwrap().holds);
        let l0 = lambda_cocycle(&c, &act, &j, 2).unwrap();
        let l1 = lambda_cocycle(&c, &act, &shifted, 2).unwrap();
        // abelian algebra: no coboundaries, so the class is the cocycle itself
        prop_assert_eq!(&l0.values, &l1.values);
        let obstructed = matches!(solve_coboundary(&act, &l1).outcome, Coboundary::Obstructed { .. });
        prop_assert!(obstructed);
    }
}
