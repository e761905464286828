//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any criterion fails.

mod common;

use std::time::Instant;

use common::{action, chart, field, p, series};
use wick_core::calculus::VectorField;
use wick_core::chart::Chart;
use wick_core::exactnum::{RationalFunction, Scalar, Series, Var};
use wick_core::momentum::{
    bt_momentum, check_strong_invariance, classical_momentum, lambda_cocycle, momentum_map,
    quantum_hamiltonian, solve_coboundary, validate_action, verify_equivariance,
    verify_quantum_hamiltonian, verify_splitting, BtOutcome, Coboundary, HamiltonianOutcome,
    MomentumOutcome, QuantumHamiltonian,
};
use wick_core::report::Witness;
use wick_core::star::{Perturbation, StarProduct};
use wick_core::sweep::{first_failure, monomials};
use wick_core::symmetry::{
    check_derivation, check_quasi_inner, hamiltonian_vector_field, solve_quasi_inner, Ansatz,
    PrimitiveSeries,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Closed-form flat product, from derivatives only.
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
        let (mut da, mut db, mut fact) = (a.clone(), b.clone(), 1i64);
        for k in 0..n {
            for j in 1..=idx.exponent(Var::Z(k)) {
                da = da.derivative(Var::Z(k));
                db = db.derivative(Var::W(k));
                fact *= j as i64;
            }
        }
        let c = out
            .coeff_or_zero(r)
            .add(&da.mul(&db).scale(&Scalar::from_ratio(1, fact)));
        out.set(r, c);
    }
    out
}

fn criterion_1() -> Outcome {
    let order = 4;
    let mut counts = Vec::new();
    for n in [1, 2] {
        let sp = StarProduct::new(&Chart::flat(n, order), order);
        let mons: Vec<RationalFunction> = monomials(n, 4)
            .into_iter()
            .map(RationalFunction::monomial)
            .collect();
        let m = mons.len();
        let witness = first_failure(m * m, |idx| {
            let (a, b) = (&mons[idx / m], &mons[idx % m]);
            let got = sp.star_fn(a, b)?;
            let want = wick_oracle(a, b, n, order);
            Ok(got
                .first_difference(&want)
                .map(|o| Witness::series(format!("({a}) * ({b})"), o, &got, &want)))
        })
        .map_err(err)?;
        if let Some(w) = witness {
            return Err(format!("C^{n}: {w}"));
        }
        counts.push(format!("C^{n}: {} pairs", m * m));
    }
    Ok(counts.join(", "))
}

fn criterion_2() -> Outcome {
    let mut cases = 0;
    for name in [
        "flat",
        "flat2",
        "fs",
        "hyperbolic",
        "fs_corrected",
        "flat_invariant_correction",
    ] {
        let sp = StarProduct::new(&chart(name, 3), 3);
        let rel = sp.verify_defining_relations().map_err(err)?;
        let wick = sp.verify_wick_type().map_err(err)?;
        ensure(rel.holds, format!("{name}: {rel}"))?;
        ensure(wick.holds, format!("{name}: {wick}"))?;
        cases += rel.cases + wick.cases;
    }
    Ok(format!("6 charts, {cases} cases"))
}

fn criterion_3() -> Outcome {
    let c = chart("fs", 3);
    let start = Instant::now();
    let cert = StarProduct::new(&c, 3)
        .verify_associativity(3)
        .map_err(err)?;
    ensure(cert.holds, cert.to_string())?;
    let elapsed = start.elapsed();
    let bad = StarProduct::new(&c, 3).with_perturbation(Perturbation {
        coefficient: Scalar::one(),
    });
    let caught = bad.verify_associativity(3).map_err(err)?;
    let w = caught
        .witness
        .ok_or("corrupted product passed the associativity check")?;
    Ok(format!(
        "{} triples in {:.1?}; corruption caught at {} order {}",
        cert.cases,
        elapsed,
        w.case,
        w.order.unwrap_or(0)
    ))
}

fn criterion_4() -> Outcome {
    let names = [
        "flat",
        "flat2",
        "fs",
        "hyperbolic",
        "fs_corrected",
        "flat_invariant_correction",
    ];
    for name in names {
        let cert = StarProduct::new(&chart(name, 3), 3)
            .verify_round_trip()
            .map_err(err)?;
        ensure(cert.holds, format!("{name}: {cert}"))?;
    }
    Ok(format!(
        "{} charts, two with order-1 corrections",
        names.len()
    ))
}

fn criterion_5() -> Outcome {
    let su2 = action("su2_cp1");
    let cases: Vec<(&str, VectorField, bool)> = vec![
        ("fs", field("rotation"), true),
        ("flat", field("translation"), true),
        ("flat", field("z_squared"), false),
        ("flat_skew_correction", field("rotation"), false),
        ("flat_invariant_correction", field("rotation"), true),
        ("fs", su2.field(0).clone(), true),
        ("hyperbolic", field("rotation"), true),
        ("fs", field("translation"), false),
        ("flat", VectorField::zero(1), true),
    ];
    let count = cases.len();
    for (name, x, expected) in cases {
        let sp = StarProduct::new(&chart(name, 3), 3);
        // disagreement between the certificate and the conditions is an error here
        let rep = check_derivation(&sp, &x).map_err(|e| format!("{name}, {x}: {e}"))?;
        ensure(
            rep.is_derivation() == expected,
            format!("{name}, {x}: derivation = {}", rep.is_derivation()),
        )?;
    }
    Ok(format!("{count} (chart, field) cases agree"))
}

fn criterion_6() -> Outcome {
    let x = field("rotation");
    let mut found = Vec::new();
    for name in ["flat", "fs"] {
        let c = chart(name, 3);
        let PrimitiveSeries::Found(a) =
            solve_quasi_inner(&c, &x, 3, Ansatz::default()).map_err(err)?
        else {
            return Err(format!("{name}: no primitive"));
        };
        let rep = check_quasi_inner(&StarProduct::new(&c, 3), &x, &a).map_err(err)?;
        ensure(rep.holds(), format!("{name}: {rep:?}"))?;
        ensure(
            hamiltonian_vector_field(&c, a.coeff(0)).equals(&x),
            format!("{name}: Hamiltonian field"),
        )?;
        found.push(format!("{name}: a = {}", a.render()));
    }
    Ok(found.join("; "))
}

fn criterion_7() -> Outcome {
    let act = action("translations");
    let c = chart("flat", 3);
    let j0 = classical_momentum(&c, &act, Ansatz::default())
        .map_err(err)?
        .map_err(|xi| format!("no classical momentum for xi{}", xi + 1))?;
    let HamiltonianOutcome::Found(q) =
        quantum_hamiltonian(&c, &act, 3, Ansatz::default()).map_err(err)?
    else {
        return Err("no quantum Hamiltonian".to_string());
    };
    ensure(
        q.j[0].equals(&series(&["w1-z1"], 3)),
        format!("J(xi1) = {}", q.j[0].render()),
    )?;
    ensure(
        q.j[1].equals(&series(&["i*(w1+z1)"], 3)),
        format!("J(xi2) = {}", q.j[1].render()),
    )?;
    let lambda = lambda_cocycle(&c, &act, &q.j, 3).map_err(err)?;
    let expected = Series::constant(Scalar::complex(0, -2), 3);
    ensure(lambda.get(0, 1) == expected, "lambda(xi1, xi2) != -2i")?;
    match solve_coboundary(&act, &lambda).outcome {
        Coboundary::Obstructed { class, .. } => {
            let sp = StarProduct::new(&c, 3);
            let verdict = momentum_map(&sp, &act, Ansatz::default()).map_err(err)?;
            ensure(
                matches!(verdict, MomentumOutcome::Obstructed { .. }),
                "pipeline not obstructed",
            )?;
            Ok(format!(
                "J0 = ({}, {}), lambda(xi1, xi2) = {}, OBSTRUCTED",
                j0[0], j0[1], class[0].1
            ))
        }
        Coboundary::Solved(_) => Err("coboundary found for a nonzero abelian class".to_string()),
    }
}

fn criterion_8() -> Outcome {
    let act = action("su2_cp1");
    let c = chart("fs", 3);
    let rep = validate_action(&c, &act);
    ensure(rep.valid(), format!("{:?}", rep.first_failure()))?;
    let sp = StarProduct::new(&c, 3);
    let MomentumOutcome::Found(m) = momentum_map(&sp, &act, Ansatz::default()).map_err(err)? else {
        return Err("momentum map not found".to_string());
    };
    ensure(
        (m.cohomology.h1, m.cohomology.h2) == (0, 0),
        format!("{:?}", m.cohomology),
    )?;
    ensure(m.equivariance.holds, m.equivariance.to_string())?;
    ensure(m.splitting.holds, m.splitting.to_string())?;
    Ok(format!("H1 = 0, H2 = 0, {} to order 3", m.equivariance))
}

fn criterion_9() -> Outcome {
    let act = action("su2_cp1");
    let BtOutcome::Found(rep) =
        bt_momentum(&chart("fs", 3), &act, 3, Ansatz::default()).map_err(err)?
    else {
        return Err("no classical momentum".to_string());
    };
    ensure(rep.contraction.holds, rep.contraction.to_string())?;
    ensure(rep.bracket.holds, rep.bracket.to_string())?;
    ensure(rep.verification.holds, rep.verification.to_string())?;
    let sp = StarProduct::new(&rep.chart.with_order(3), 3);
    let strong = check_strong_invariance(&sp, &act, &rep.j0).map_err(err)?;
    ensure(
        !strong.strongly_invariant(),
        "BT chart reported strongly invariant",
    )?;
    let MomentumOutcome::Found(m) = momentum_map(&sp, &act, Ansatz::default()).map_err(err)? else {
        return Err("no momentum map on the BT chart".to_string());
    };
    ensure(m.equivariance.holds, m.equivariance.to_string())?;
    Ok(format!(
        "{}; {}; {}; strong invariance fails at (xi{}, order {}) while the momentum map exists",
        rep.contraction,
        rep.bracket,
        rep.verification,
        strong.contraction_failure.map_or(0, |f| f.0 + 1),
        strong.contraction_failure.map_or(0, |f| f.1)
    ))
}

fn criterion_10() -> Outcome {
    let act = action("translations");
    let c = chart("flat", 3);
    let sp = StarProduct::new(&c, 3);
    let j0 = vec![p("w1-z1"), p("i*(w1+z1)")];
    let rep = check_strong_invariance(&sp, &act, &j0).map_err(err)?;
    ensure(rep.strongly_invariant(), format!("{rep:?}"))?;
    let q = QuantumHamiltonian {
        j: j0.iter().map(|f| Series::constant(f.clone(), 3)).collect(),
    };
    let split = verify_splitting(&c, &act, &q, 3).map_err(err)?;
    ensure(split.holds, split.to_string())?;
    ensure(q.j_plus().iter().all(|s| s.is_zero()), "J+ != 0")?;
    Ok(format!(
        "strongly invariant; J0 {}; splitting holds with J+ = 0",
        rep.certificate.map_or(String::new(), |c| c.to_string())
    ))
}

fn shifted(j: &[Series<RationalFunction>], shifts: &[Scalar]) -> Vec<Series<RationalFunction>> {
    j.iter()
        .zip(shifts)
        .map(|(s, c)| {
            s.add(&Series::constant(
                RationalFunction::constant(c.clone()),
                s.order(),
            ))
        })
        .collect()
}

fn criterion_11() -> Outcome {
    // translations: constant shifts keep the Hamiltonian property and the nonzero class
    let act = action("translations");
    let c = chart("flat", 3);
    let sp = StarProduct::new(&c, 3);
    let j = vec![series(&["w1-z1"], 3), series(&["i*(w1+z1)"], 3)];
    let js = shifted(&j, &[Scalar::complex(3, -1), Scalar::from_ratio(-2, 7)]);
    ensure(
        verify_quantum_hamiltonian(&sp, &act, &js)
            .map_err(err)?
            .holds,
        "shifted J fails",
    )?;
    let (l0, l1) = (
        lambda_cocycle(&c, &act, &j, 3).map_err(err)?,
        lambda_cocycle(&c, &act, &js, 3).map_err(err)?,
    );
    ensure(
        l0.values == l1.values,
        "abelian lambda changed under a shift",
    )?;

    // su(2): shifts change lambda by a coboundary only, and J^tau is unique
    let act = action("su2_cp1");
    let c = chart("fs", 3);
    let sp = StarProduct::new(&c, 3);
    let MomentumOutcome::Found(m) = momentum_map(&sp, &act, Ansatz::default()).map_err(err)? else {
        return Err("su(2) momentum map not found".to_string());
    };
    let shifts = [
        Scalar::one(),
        Scalar::complex(0, 2),
        Scalar::from_ratio(1, 3),
    ];
    let js = shifted(&m.hamiltonian.j, &shifts);
    ensure(
        verify_quantum_hamiltonian(&sp, &act, &js)
            .map_err(err)?
            .holds,
        "shifted su(2) J fails",
    )?;
    let l = lambda_cocycle(&c, &act, &js, 3).map_err(err)?;
    ensure(
        matches!(solve_coboundary(&act, &l).outcome, Coboundary::Solved(_)),
        "su(2) class became nonzero after a shift",
    )?;
    let moved = shifted(&m.momentum.j, &shifts);
    ensure(
        !verify_equivariance(&sp, &act, &moved).map_err(err)?.holds,
        "su(2) momentum map not unique although H1 = 0",
    )?;

    // rotation, m = 1: H1 = 1 and every constant shift stays equivariant
    let act = action("rotation");
    let c = chart("flat", 3);
    let sp = StarProduct::new(&c, 3);
    let MomentumOutcome::Found(m) = momentum_map(&sp, &act, Ansatz::default()).map_err(err)? else {
        return Err("rotation momentum map not found".to_string());
    };
    ensure(m.cohomology.h1 == 1, "rotation H1 != 1")?;
    for s in [Scalar::from_int(7), Scalar::complex(-1, 5)] {
        let moved = shifted(&m.momentum.j, &[s]);
        ensure(
            verify_equivariance(&sp, &act, &moved).map_err(err)?.holds,
            "rotation shift not equivariant",
        )?;
        ensure(
            verify_quantum_hamiltonian(&sp, &act, &moved)
                .map_err(err)?
                .holds,
            "rotation shift fails",
        )?;
    }
    Ok(
        "class unchanged under shifts; su(2) unique (H1 = 0); rotation non-unique (H1 = 1)"
            .to_string(),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("flat oracle equivalence", criterion_1),
        ("defining relations and Wick property", criterion_2),
        ("associativity and corruption witness", criterion_3),
        ("Karabegov form round trip", criterion_4),
        (
            "derivations: certificate agrees with conditions",
            criterion_5,
        ),
        ("quasi-inner realization of the rotation", criterion_6),
        ("obstruction for translations", criterion_7),
        ("su(2) momentum map", criterion_8),
        ("Berezin-Toeplitz momentum map", criterion_9),
        ("strong invariance on the flat chart", criterion_10),
        ("gauge freedom and uniqueness", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {name} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}. {name} [{secs:.2}s]: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
