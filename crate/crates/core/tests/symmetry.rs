mod common;

use common::{chart, field, map, p, series};
use wick_core::calculus::{ChartMap, Form, VectorField};
use wick_core::chart::Chart;
use wick_core::exactnum::{RationalFunction, Var};
use wick_core::star::StarProduct;
use wick_core::symmetry::{
    check_automorphism, check_derivation, check_holomorphy, check_quasi_inner, find_primitive,
    hamiltonian_vector_field, solve_quasi_inner, Ansatz, PrimitiveSeries,
};
use wick_core::Error;

fn vf(hol: &str, antihol: &str) -> VectorField {
    VectorField::new(vec![p(hol)], vec![p(antihol)])
}

#[test]
fn holomorphy_test() {
    assert!(check_holomorphy(&vf("i*z1", "-i*w1")));
    assert!(!check_holomorphy(&vf("w1", "0")));
    assert!(check_holomorphy(&vf("1+z1^2", "1+w1^2")));
}

#[test]
fn rotation_preserves_fubini_study() {
    let sp = StarProduct::new(&chart("fs", 3), 3);
    let rep = check_derivation(&sp, &field("rotation")).unwrap();
    assert!(rep.holomorphy_ok);
    assert!(rep.lie_k_zero.iter().all(|&b| b));
    assert!(rep.is_derivation());
}

#[test]
fn z_squared_is_not_a_derivation_of_the_flat_product() {
    let sp = StarProduct::new(&chart("flat", 3), 3);
    let rep = check_derivation(&sp, &field("z_squared")).unwrap();
    assert!(rep.holomorphy_ok);
    assert!(!rep.lie_k_zero[0]);
    assert!(!rep.is_derivation());
    assert!(rep.derivation.witness.is_some());
}

#[test]
fn zero_field_is_a_derivation() {
    let sp = StarProduct::new(&chart("flat", 2), 2);
    assert!(check_derivation(&sp, &VectorField::zero(1))
        .unwrap()
        .is_derivation());
}

#[test]
fn skew_correction_breaks_rotation_invariance() {
    let sp = StarProduct::new(&chart("flat_skew_correction", 3), 3);
    let rep = check_derivation(&sp, &field("rotation")).unwrap();
    assert!(rep.lie_k_zero[0]);
    assert!(!rep.lie_k_zero[1]);
    assert!(!rep.is_derivation());
    // an order-1 correction first enters products at v^2
    assert_eq!(
        rep.derivation.witness.as_ref().and_then(|w| w.order),
        Some(2)
    );
}

#[test]
fn automorphisms_of_the_flat_chart() {
    let sp = StarProduct::new(&chart("flat", 3), 3);
    let shift = check_automorphism(&sp, &map("shift")).unwrap();
    assert!(shift.is_automorphism() && shift.consistent());
    let scale = check_automorphism(&sp, &map("scale")).unwrap();
    assert!(!scale.form_preserved[0]);
    assert!(!scale.product.holds);
    let id = check_automorphism(&sp, &ChartMap::identity(1)).unwrap();
    assert!(id.is_automorphism());
    let twice = map("shift").compose(&map("shift")).unwrap();
    assert!(check_automorphism(&sp, &twice).unwrap().is_automorphism());
}

#[test]
fn rotation_primitives() {
    let rot = field("rotation");
    let flat = Chart::flat(1, 0).kahler_form().interior(&rot).unwrap();
    assert!(find_primitive(&flat, Ansatz::default())
        .unwrap()
        .unwrap()
        .equals(&p("i*z1*w1")));
    let fs = chart("fs", 0).kahler_form().interior(&rot).unwrap();
    assert!(find_primitive(&fs, Ansatz::default())
        .unwrap()
        .unwrap()
        .equals(&p("-i/(1+z1*w1)")));
}

#[test]
fn logarithmic_form_has_no_rational_primitive() {
    let f = Form::one_form(1, Var::Z(0), p("1/z1")).add(&Form::one_form(1, Var::W(0), p("1/w1")));
    assert_eq!(find_primitive(&f, Ansatz::default()).unwrap(), None);
    // wider bounds do not help
    let wide = Ansatz {
        degree: Some(6),
        power_bound: Some(4),
    };
    assert_eq!(find_primitive(&f, wide).unwrap(), None);
}

#[test]
fn primitive_requires_closed_form() {
    let f = Form::one_form(1, Var::Z(0), p("w1"));
    assert_eq!(find_primitive(&f, Ansatz::default()), Err(Error::NotClosed));
}

#[test]
fn hamiltonian_fields() {
    let flat = Chart::flat(1, 0);
    assert!(hamiltonian_vector_field(&flat, &p("i*z1*w1")).equals(&field("rotation")));
    assert!(hamiltonian_vector_field(&flat, &RationalFunction::one()).is_zero());
    let fs = chart("fs", 0);
    assert!(hamiltonian_vector_field(&fs, &p("-i/(1+z1*w1)")).equals(&field("rotation")));
}

#[test]
fn quasi_inner_realizations() {
    let sp = StarProduct::new(&chart("flat", 3), 3);
    let rep = check_quasi_inner(&sp, &field("rotation"), &series(&["i*z1*w1"], 3)).unwrap();
    assert!(rep.holds(), "{rep:?}");
    let rep = check_quasi_inner(&sp, &field("translation"), &series(&["w1-z1"], 3)).unwrap();
    assert!(rep.holds(), "{rep:?}");
    let rep = check_quasi_inner(&sp, &field("rotation"), &series(&["i*z1*w1+z1"], 3)).unwrap();
    assert_eq!(rep.primitive_failure, Some(0));
    assert!(!rep.realization.holds);
}

#[test]
fn quasi_inner_on_fubini_study() {
    let c = chart("fs", 3);
    let PrimitiveSeries::Found(a) =
        solve_quasi_inner(&c, &field("rotation"), 3, Ansatz::default()).unwrap()
    else {
        panic!("rotation is quasi-inner on the sphere chart");
    };
    assert!(a.coeff(0).equals(&p("-i/(1+z1*w1)")));
    let rep = check_quasi_inner(&StarProduct::new(&c, 3), &field("rotation"), &a).unwrap();
    assert!(rep.holds(), "{rep:?}");
}

#[test]
fn non_rational_order_one_primitive() {
    let c = chart("punctured", 2);
    let x = field("antiholomorphic_shift");
    match solve_quasi_inner(&c, &x, 2, Ansatz::default()).unwrap() {
        PrimitiveSeries::NotFound { order } => assert_eq!(order, 1),
        PrimitiveSeries::Found(a) => panic!("unexpected primitive {}", a.render()),
    }
}
