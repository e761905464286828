use wick_core::calculus::{Form, VectorField};
use wick_core::chart::Chart;
use wick_core::exactnum::{parse_expr, RationalFunction, Scalar};

fn p(s: &str) -> RationalFunction {
    parse_expr(s, 1).unwrap()
}

fn chart(u: &str) -> Chart {
    Chart::new(1, 3, vec![vec![p(u)]], None).unwrap()
}

fn rotation() -> VectorField {
    VectorField::new(vec![p("i*z1")], vec![p("-i*w1")])
}

#[test]
fn fubini_study_christoffel() {
    let c = chart("w1/(1+z1*w1)");
    assert!(c.metric().g[0][0].equals(&p("1/(1+z1*w1)^2")));
    let gamma = c.christoffels();
    assert!(gamma.get(0, 0, 0).equals(&p("-2*w1/(1+z1*w1)")));
    assert!(gamma.get(1, 1, 1).equals(&p("-2*z1/(1+z1*w1)")));
    assert!(gamma.get(0, 1, 0).is_zero());
}

#[test]
fn ricci_constant_is_universal() {
    let fs = chart("w1/(1+z1*w1)").ricci_constant().unwrap().unwrap();
    let hyp = chart("-w1/(1-z1*w1)").ricci_constant().unwrap().unwrap();
    assert_eq!(fs, hyp);
    assert_eq!(fs, Scalar::from_ratio(1, 2).mul_i());
    assert!(chart("w1").ricci_constant().unwrap().is_none());
}

#[test]
fn ricci_contraction_is_exact_for_rotation() {
    let c = chart("w1/(1+z1*w1)");
    let rho = c.ricci_form();
    assert!(rho.coefficient_11(0, 0).equals(&p("-i/(1+z1*w1)^2")));
    let x = rotation();
    let j = c
        .covariant_div(&x.complex_structure())
        .scale(&Scalar::from_ratio(1, 4));
    assert!(j.equals(&p("1/2 - 1/(1+z1*w1)")));
    let lhs = rho.interior(&x).unwrap();
    let rhs = Form::function(1, j).d();
    assert!(lhs.equals(&rhs));
}
