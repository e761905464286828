use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use wick_core::exactnum::parse_expr;

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
        .display()
        .to_string()
}

fn wick(args: &[&str]) -> Output {
    let args: Vec<String> = args
        .iter()
        .map(|a| match a.strip_prefix('@') {
            Some(rel) => data(rel),
            None => a.to_string(),
        })
        .collect();
    Command::new(env!("CARGO_BIN_EXE_wick"))
        .args(&args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn star_renders_the_deformation_parameter_as_v() {
    let o = wick(&[
        "star",
        "--chart",
        "@charts/flat.json",
        "--left",
        "z1",
        "--right",
        "w1",
        "--order",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "z1*w1 + v\n");
}

#[test]
fn associativity_on_the_sphere_chart() {
    let o = wick(&[
        "verify",
        "assoc",
        "--chart",
        "@charts/fs.json",
        "--order",
        "3",
        "--dmax",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn translations_are_obstructed() {
    let o = wick(&[
        "qmm",
        "--chart",
        "@charts/flat.json",
        "--action",
        "@actions/translations.json",
        "--order",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).starts_with("OBSTRUCTED: [λ](ξ1,ξ2) = -2*i\n"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn exit_codes_for_each_outcome() {
    let holds = wick(&[
        "invariance",
        "--chart",
        "@charts/fs.json",
        "--field",
        "@fields/rotation.json",
        "--order",
        "2",
    ]);
    assert_eq!(holds.status.code(), Some(0));
    let fails = wick(&[
        "invariance",
        "--chart",
        "@charts/flat.json",
        "--field",
        "@fields/z_squared.json",
        "--order",
        "2",
    ]);
    assert_eq!(fails.status.code(), Some(1));
    assert!(stdout(&fails).contains("derivation: FAILS"));
    let not_found = wick(&[
        "quasi-inner",
        "--chart",
        "@charts/punctured.json",
        "--field",
        "@fields/antiholomorphic_shift.json",
        "--order",
        "2",
    ]);
    assert_eq!(not_found.status.code(), Some(3));
    assert!(stdout(&not_found).starts_with("NOT_FOUND"));
}

#[test]
fn candidates_are_checked_not_solved() {
    let args = |cand: &'static str| {
        wick(&[
            "quasi-inner",
            "--chart",
            "@charts/flat.json",
            "--field",
            "@fields/rotation.json",
            "--candidate",
            cand,
            "--order",
            "3",
        ])
    };
    assert_eq!(args("i*z1*w1").status.code(), Some(0));
    assert_eq!(args("i*z1*w1 + z1").status.code(), Some(1));
}

#[test]
fn invalid_input_reports_context_on_stderr() {
    let o = wick(&[
        "star",
        "--chart",
        "@charts/flat.json",
        "--left",
        "z1+v",
        "--right",
        "w1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("--left") && err.contains("offset 3"), "{err}");

    let o = wick(&["karabegov", "--chart", "@fields/rotation.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("rotation.json"));

    let o = wick(&[
        "invariance",
        "--chart",
        "@charts/flat.json",
        "--field",
        "@fields/missing.json",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "qmm",
        "--chart",
        "@charts/fs.json",
        "--action",
        "@actions/su2_cp1.json",
        "--order",
        "2",
        "--format",
        "json",
    ];
    let (a, b) = (wick(&args), wick(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

fn collect_strings(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => out.push(s.clone()),
        Value::Array(xs) => xs.iter().for_each(|x| collect_strings(x, out)),
        Value::Object(m) => m.values().for_each(|x| collect_strings(x, out)),
        _ => {}
    }
}

#[test]
fn json_expressions_reparse() {
    let runs: [&[&str]; 4] = [
        &[
            "qmm",
            "--chart",
            "@charts/fs.json",
            "--action",
            "@actions/su2_cp1.json",
            "--order",
            "2",
        ],
        &[
            "bt",
            "--chart",
            "@charts/fs.json",
            "--action",
            "@actions/su2_cp1.json",
            "--order",
            "2",
        ],
        &[
            "star",
            "--chart",
            "@charts/hyperbolic.json",
            "--left",
            "z1^2",
            "--right",
            "w1/(1+w1)",
            "--order",
            "3",
        ],
        &[
            "karabegov",
            "--chart",
            "@charts/fs_corrected.json",
            "--order",
            "2",
        ],
    ];
    for run in runs {
        let mut args = run.to_vec();
        args.extend(["--format", "json"]);
        let o = wick(&args);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        let keys = [
            "hamiltonian",
            "lambda",
            "tau",
            "j",
            "k1",
            "product",
            "forms",
        ];
        let mut exprs = Vec::new();
        for k in keys {
            if let Some(x) = v.get(k) {
                collect_strings(x, &mut exprs);
            }
        }
        assert!(!exprs.is_empty(), "{run:?}");
        for e in exprs {
            let f = parse_expr(&e, 1).unwrap_or_else(|err| panic!("{e}: {err}"));
            assert_eq!(f.to_string(), e);
        }
    }
}

#[test]
fn failing_certificates_carry_reparsable_witnesses() {
    let o = wick(&[
        "automorphism",
        "--chart",
        "@charts/flat.json",
        "--map",
        "@maps/scale.json",
        "--order",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let w = &v["product"]["witness"];
    for side in ["lhs", "rhs"] {
        parse_expr(w[side].as_str().unwrap(), 1).unwrap();
    }
    assert_eq!(v["status"], "FAILS");
}
