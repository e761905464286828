mod common;

use common::{chart, p, series};
use wick_core::chart::Chart;
use wick_core::exactnum::{Monomial, RationalFunction, Scalar, Series, Var};
use wick_core::star::{Perturbation, StarProduct};
use wick_core::sweep::monomials;

/// `sum_I v^|I| / I! d_z^I a d_w^I b`, computed directly from derivatives.
fn wick_oracle(
    a: &RationalFunction,
    b: &RationalFunction,
    n: usize,
    order: usize,
) -> Series<RationalFunction> {
    let mut out: Series<RationalFunction> = Series::zero(order);
    for idx in monomials(n, order as u16) {
        let r = idx.degree() as usize;
        if r > order || (0..n).any(|k| idx.exponent(Var::W(k)) > 0) {
            continue;
        }
        let mut da = a.clone();
        let mut db = b.clone();
        let mut fact = 1i64;
        for k in 0..n {
            let e = idx.exponent(Var::Z(k));
            for j in 1..=e {
                da = da.derivative(Var::Z(k));
                db = db.derivative(Var::W(k));
                fact *= j as i64;
            }
        }
        let term = da.mul(&db).scale(&Scalar::from_ratio(1, fact));
        let c = out.coeff_or_zero(r).add(&term);
        out.set(r, c);
    }
    out
}

#[test]
fn flat_product_matches_closed_form() {
    for n in [1, 2] {
        let order = 3;
        let sp = StarProduct::new(&Chart::flat(n, order), order);
        let mons: Vec<RationalFunction> = monomials(n, 2)
            .into_iter()
            .map(RationalFunction::monomial)
            .collect();
        for a in &mons {
            for b in &mons {
                let got = sp.star_fn(a, b).unwrap();
                let want = wick_oracle(a, b, n, order);
                assert!(
                    got.equals(&want),
                    "{a} * {b}: {} vs {}",
                    got.render(),
                    want.render()
                );
            }
        }
    }
}

#[test]
fn flat_product_of_rational_functions() {
    let sp = StarProduct::new(&Chart::flat(1, 3), 3);
    let (a, b) = (p("1/(1+z1)"), p("w1^2/(2-w1)"));
    assert!(sp
        .star_fn(&a, &b)
        .unwrap()
        .equals(&wick_oracle(&a, &b, 1, 3)));
}

#[test]
fn rendered_products() {
    let sp = StarProduct::new(&Chart::flat(1, 2), 2);
    assert_eq!(
        sp.star_fn(&p("z1"), &p("w1")).unwrap().render(),
        "z1*w1 + v"
    );
    let sp = StarProduct::new(&Chart::flat(1, 4), 4);
    assert_eq!(
        sp.star_fn(&p("z1^2"), &p("w1^2")).unwrap().render(),
        "z1^2*w1^2 + 4*z1*w1*v + 2*v^2"
    );
}

#[test]
fn first_order_term_is_the_inverse_metric_pairing() {
    for name in ["fs", "hyperbolic", "fs_corrected"] {
        let c = chart(name, 2);
        let ginv = c.metric().ginv[0][0].clone();
        let sp = StarProduct::new(&c, 2);
        for (a, b) in [("z1^2", "w1"), ("z1*w1", "z1*w1^2"), ("w1+z1^3", "z1-w1^2")] {
            let (a, b) = (p(a), p(b));
            let c1 = ginv
                .mul(&a.derivative(Var::Z(0)))
                .mul(&b.derivative(Var::W(0)));
            let got = sp.star_fn(&a, &b).unwrap();
            assert!(got.coeff(0).equals(&a.mul(&b)));
            assert!(got.coeff(1).equals(&c1), "{name}: {}", got.render());
        }
    }
}

#[test]
fn commutator_leading_term_is_the_poisson_bracket() {
    let c = chart("fs", 2);
    let sp = StarProduct::new(&c, 2);
    let br = sp
        .commutator_over_nu(&series(&["z1"], 2), &series(&["w1"], 2))
        .unwrap();
    assert!(br.coeff(0).equals(&p("(1+z1*w1)^2")));
}

#[test]
fn certificates_on_curved_and_corrected_charts() {
    for name in [
        "flat",
        "fs",
        "hyperbolic",
        "fs_corrected",
        "flat_invariant_correction",
    ] {
        let sp = StarProduct::new(&chart(name, 3), 3);
        assert!(sp.verify_defining_relations().unwrap().holds, "{name}");
        assert!(sp.verify_wick_type().unwrap().holds, "{name}");
        assert!(sp.verify_round_trip().unwrap().holds, "{name}");
        assert!(sp.order_bound_holds(), "{name}");
    }
}

#[test]
fn corrected_chart_round_trip_recovers_the_correction() {
    let c = chart("fs_corrected", 2);
    let forms = StarProduct::new(&c, 2).extract_karabegov().unwrap();
    assert!(forms[1]
        .coefficient_11(0, 0)
        .equals(&RationalFunction::one()));
    assert!(forms[2].is_zero());
}

#[test]
fn associativity_and_corruption() {
    let c = chart("fs", 2);
    assert!(
        StarProduct::new(&c, 2)
            .verify_associativity(2)
            .unwrap()
            .holds
    );
    let bad = StarProduct::new(&c, 2).with_perturbation(Perturbation {
        coefficient: Scalar::one(),
    });
    let cert = bad.verify_associativity(2).unwrap();
    assert!(!cert.holds);
    assert_eq!(cert.witness.unwrap().order, Some(2));
}

#[test]
fn antiholomorphic_left_factors_multiply_pointwise() {
    let sp = StarProduct::new(&chart("hyperbolic", 3), 3);
    let a = p("w1^2/(1-w1)");
    let b = p("z1^3+z1*w1");
    assert!(sp
        .star_fn(&a, &b)
        .unwrap()
        .equals(&series(&[&format!("({a})*({b})")], 3)));
}

#[test]
fn monomial_enumeration() {
    let ms = monomials(2, 1);
    assert_eq!(ms.len(), 16);
    assert!(ms.windows(2).all(|w| w[0] < w[1]));
    assert!(ms.contains(&Monomial::one()));
}
