use std::fmt::Display;
use std::path::Path;

use serde_json::{json, Map, Value};
use wick_core::calculus::{ChartMap, Form, VectorField};
use wick_core::chart::Chart;
use wick_core::exactnum::{parse_expr, RationalFunction, Ring, Scalar, Series};
use wick_core::io;
use wick_core::momentum::{
    berezin_toeplitz, bt_momentum, check_strong_invariance, classical_momentum, momentum_map,
    BtOutcome, Cochain2, LieAction, MomentumOutcome,
};
use wick_core::report::Certificate;
use wick_core::star::StarProduct;
use wick_core::symmetry::PrimitiveSeries;
use wick_core::symmetry::{
    check_automorphism, check_derivation, check_quasi_inner, solve_quasi_inner, Ansatz,
};
use wick_core::Error;

use crate::{AnsatzArgs, Command, Common, Format, Verify};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Obstructed,
    NotFound,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Holds => 0,
            Status::Fails | Status::Obstructed => 1,
            Status::NotFound => 3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Obstructed => "OBSTRUCTED",
            Status::NotFound => "NOT_FOUND",
        }
    }

    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Holds
        } else {
            Status::Fails
        }
    }
}

pub struct Report {
    command: &'static str,
    pub status: Status,
    lines: Vec<String>,
    data: Map<String, Value>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            status: Status::Holds,
            lines: Vec::new(),
            data: Map::new(),
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn put(&mut self, key: &str, v: Value) {
        self.data.insert(key.to_string(), v);
    }

    fn certificate(&mut self, key: &str, c: &Certificate) {
        self.line(c.to_string());
        self.put(
            key,
            serde_json::to_value(c).expect("certificate serializes"),
        );
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> String {
        let mut m = self.data.clone();
        m.insert("command".to_string(), json!(self.command));
        m.insert("status".to_string(), json!(self.status.label()));
        serde_json::to_string_pretty(&Value::Object(m)).expect("report serializes")
    }
}

pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition(_) | Error::Internal(_) | Error::NotClosed => 1,
            _ => 2,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn invalid(message: String) -> Failure {
    Failure { message, code: 2 }
}

type Outcome = Result<Report, Failure>;

pub fn run(command: Command) -> (Format, Outcome) {
    match command {
        Command::Star {
            common,
            left,
            right,
        } => (common.format, star(&common, &left, &right)),
        Command::Karabegov { common } => (common.format, karabegov(&common)),
        Command::Verify { which } => match which {
            Verify::Assoc { common, dmax } => (common.format, assoc(&common, dmax)),
            Verify::WickType { common } => (common.format, wick_type(&common)),
            Verify::Roundtrip { common } => (common.format, roundtrip(&common)),
        },
        Command::Invariance { common, field } => (common.format, invariance(&common, &field)),
        Command::Automorphism { common, map } => (common.format, automorphism(&common, &map)),
        Command::QuasiInner {
            common,
            field,
            candidate,
            ansatz,
        } => (
            common.format,
            quasi_inner(&common, &field, &candidate, &ansatz),
        ),
        Command::Qmm {
            common,
            action,
            ansatz,
        } => (common.format, qmm(&common, &action, &ansatz)),
        Command::StrongInvariance {
            common,
            action,
            ansatz,
        } => (common.format, strong_invariance(&common, &action, &ansatz)),
        Command::Bt {
            common,
            action,
            ansatz,
        } => (common.format, bt(&common, action.as_deref(), &ansatz)),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: wick_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            code: f.code,
        }
    })
}

fn load_chart(c: &Common) -> Result<Chart, Failure> {
    in_file(&c.chart, io::parse_chart(&read(&c.chart)?, Some(c.order)))
}

fn load_field(path: &Path, n: usize) -> Result<VectorField, Failure> {
    in_file(path, io::parse_field(&read(path)?, n))
}

fn load_map(path: &Path, n: usize) -> Result<ChartMap, Failure> {
    in_file(path, io::parse_map(&read(path)?, n))
}

fn load_action(path: &Path, n: usize) -> Result<LieAction, Failure> {
    in_file(path, io::parse_action(&read(path)?, n))
}

fn expression(flag: &str, src: &str, n: usize) -> Result<RationalFunction, Failure> {
    parse_expr(src, n).map_err(|e| invalid(format!("--{flag}: {e}")))
}

fn ansatz(a: &AnsatzArgs) -> Ansatz {
    Ansatz {
        degree: a.degree,
        power_bound: a.power_bound,
    }
}

fn coeffs<T: Ring + Display>(s: &Series<T>) -> Value {
    json!((0..=s.order())
        .map(|k| s.coeff_or_zero(k).to_string())
        .collect::<Vec<_>>())
}

fn scalar_series(s: &Series<Scalar>) -> Series<RationalFunction> {
    Series::from_coeffs(
        (0..=s.order())
            .map(|k| RationalFunction::constant(s.coeff_or_zero(k)))
            .collect(),
        s.order(),
    )
}

fn form_11(f: &Form) -> Value {
    let n = f.dimension();
    json!((0..n)
        .map(|k| (0..n)
            .map(|l| f.coefficient_11(k, l).to_string())
            .collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn hamiltonians(rep: &mut Report, key: &str, label: &str, j: &[Series<RationalFunction>]) {
    for (i, s) in j.iter().enumerate() {
        rep.line(format!("{label}(xi{}) = {}", i + 1, s.render()));
    }
    rep.put(key, json!(j.iter().map(coeffs).collect::<Vec<_>>()));
}

fn lambda_json(lambda: &Cochain2) -> Value {
    json!(wick_core::momentum::pairs(lambda.m)
        .into_iter()
        .map(|(a, b)| json!({"pair": [a + 1, b + 1], "value": coeffs(&lambda.get(a, b))}))
        .collect::<Vec<_>>())
}

fn lambda_lines(rep: &mut Report, lambda: &Cochain2) {
    for (a, b) in wick_core::momentum::pairs(lambda.m) {
        rep.line(format!(
            "lambda(xi{}, xi{}) = {}",
            a + 1,
            b + 1,
            scalar_series(&lambda.get(a, b)).render()
        ));
    }
}

fn star(c: &Common, left: &str, right: &str) -> Outcome {
    let chart = load_chart(c)?;
    let n = chart.dimension();
    let (a, b) = (expression("left", left, n)?, expression("right", right, n)?);
    let product = StarProduct::new(&chart, c.order).star_fn(&a, &b)?;
    let mut rep = Report::new("star");
    rep.line(product.render());
    rep.put("product", coeffs(&product));
    Ok(rep)
}

fn karabegov(c: &Common) -> Outcome {
    let chart = load_chart(c)?;
    let forms = StarProduct::new(&chart, c.order).extract_karabegov()?;
    let mut rep = Report::new("karabegov");
    for (s, f) in forms.iter().enumerate() {
        rep.line(format!("K_{s} = {}", f.render()));
    }
    rep.put(
        "forms",
        json!(forms.iter().map(form_11).collect::<Vec<_>>()),
    );
    Ok(rep)
}

fn assoc(c: &Common, dmax: Option<usize>) -> Outcome {
    let chart = load_chart(c)?;
    let cert = StarProduct::new(&chart, c.order).verify_associativity(dmax.unwrap_or(c.order))?;
    let mut rep = Report::new("verify assoc");
    rep.status = Status::from_bool(cert.holds);
    rep.certificate("associativity", &cert);
    Ok(rep)
}

fn wick_type(c: &Common) -> Outcome {
    let sp = StarProduct::new(&load_chart(c)?, c.order);
    let relations = sp.verify_defining_relations()?;
    let wick = sp.verify_wick_type()?;
    let mut rep = Report::new("verify wick-type");
    rep.status = Status::from_bool(relations.holds && wick.holds);
    rep.certificate("defining_relations", &relations);
    rep.certificate("wick_type", &wick);
    Ok(rep)
}

fn roundtrip(c: &Common) -> Outcome {
    let cert = StarProduct::new(&load_chart(c)?, c.order).verify_round_trip()?;
    let mut rep = Report::new("verify roundtrip");
    rep.status = Status::from_bool(cert.holds);
    rep.certificate("round_trip", &cert);
    Ok(rep)
}

fn invariance(c: &Common, field: &Path) -> Outcome {
    let chart = load_chart(c)?;
    let x = load_field(field, chart.dimension())?;
    let r = check_derivation(&StarProduct::new(&chart, c.order), &x)?;
    let mut rep = Report::new("invariance");
    rep.status = Status::from_bool(r.is_derivation());
    rep.line(format!("holomorphic: {}", r.holomorphy_ok));
    for (s, ok) in r.lie_k_zero.iter().enumerate() {
        rep.line(format!("Lie_X K_{s} = 0: {ok}"));
    }
    rep.put("holomorphic", json!(r.holomorphy_ok));
    rep.put("lie_k_zero", json!(r.lie_k_zero));
    rep.certificate("derivation", &r.derivation);
    Ok(rep)
}

fn automorphism(c: &Common, map: &Path) -> Outcome {
    let chart = load_chart(c)?;
    let phi = load_map(map, chart.dimension())?;
    let r = check_automorphism(&StarProduct::new(&chart, c.order), &phi)?;
    let mut rep = Report::new("automorphism");
    rep.status = Status::from_bool(r.is_automorphism() && r.consistent());
    for (s, ok) in r.form_preserved.iter().enumerate() {
        rep.line(format!("pullback preserves K_{s}: {ok}"));
    }
    rep.put("form_preserved", json!(r.form_preserved));
    rep.certificate("product", &r.product);
    if !r.consistent() {
        rep.line("form test and product certificate disagree");
    }
    rep.put("consistent", json!(r.consistent()));
    Ok(rep)
}

fn quasi_inner(c: &Common, field: &Path, candidate: &[String], a: &AnsatzArgs) -> Outcome {
    let chart = load_chart(c)?;
    let n = chart.dimension();
    let x = load_field(field, n)?;
    let mut rep = Report::new("quasi-inner");
    let series = if candidate.is_empty() {
        match solve_quasi_inner(&chart, &x, c.order, ansatz(a))? {
            PrimitiveSeries::Found(s) => s,
            PrimitiveSeries::NotFound { order } => {
                rep.status = Status::NotFound;
                rep.line(format!(
                    "NOT_FOUND: no rational primitive at order {order} within the ansatz"
                ));
                rep.put("order", json!(order));
                return Ok(rep);
            }
        }
    } else {
        if candidate.len() > c.order + 1 {
            return Err(invalid(format!(
                "--candidate given {} times, more than order {} allows",
                candidate.len(),
                c.order
            )));
        }
        let terms = candidate
            .iter()
            .map(|s| expression("candidate", s, n))
            .collect::<Result<Vec<_>, _>>()?;
        Series::from_coeffs(terms, c.order)
    };
    let r = check_quasi_inner(&StarProduct::new(&chart, c.order), &x, &series)?;
    rep.status = Status::from_bool(r.holds());
    rep.line(format!("a = {}", series.render()));
    rep.put("a", coeffs(&series));
    match r.primitive_failure {
        Some(s) => rep.line(format!("d a != i_X K at order {s}")),
        None => rep.line("d a = i_X K at every order"),
    }
    rep.put("primitive_failure", json!(r.primitive_failure));
    rep.certificate("realization", &r.realization);
    rep.line(format!(
        "Hamiltonian field of a_0 is X: {}",
        r.hamiltonian_field_matches
    ));
    rep.put(
        "hamiltonian_field_matches",
        json!(r.hamiltonian_field_matches),
    );
    Ok(rep)
}

fn qmm(c: &Common, action: &Path, a: &AnsatzArgs) -> Outcome {
    let chart = load_chart(c)?;
    let act = load_action(action, chart.dimension())?;
    let sp = StarProduct::new(&chart, c.order);
    let mut rep = Report::new("qmm");
    match momentum_map(&sp, &act, ansatz(a))? {
        MomentumOutcome::NotFound { xi, order } => {
            rep.status = Status::NotFound;
            rep.line(format!(
                "NOT_FOUND: no rational quantum Hamiltonian for xi{} at order {order}",
                xi + 1
            ));
            rep.put("xi", json!(xi + 1));
            rep.put("order", json!(order));
        }
        MomentumOutcome::Obstructed {
            hamiltonian,
            lambda,
            cohomology,
            order,
            class,
        } => {
            rep.status = Status::Obstructed;
            let entries: Vec<String> = class
                .iter()
                .map(|((a, b), v)| format!("[λ](ξ{},ξ{}) = {v}", a + 1, b + 1))
                .collect();
            rep.line(format!("OBSTRUCTED: {}", entries.join(", ")));
            rep.line(format!("first nonzero class at order {order}"));
            hamiltonians(&mut rep, "hamiltonian", "J", &hamiltonian.j);
            lambda_lines(&mut rep, &lambda);
            rep.line(format!("H1 = {}, H2 = {}", cohomology.h1, cohomology.h2));
            rep.put("lambda", lambda_json(&lambda));
            rep.put(
                "cohomology",
                serde_json::to_value(cohomology).expect("serializes"),
            );
            rep.put("order", json!(order));
            rep.put(
                "class",
                json!(class
                    .iter()
                    .map(|((a, b), v)| json!({"pair": [a + 1, b + 1], "value": v.to_string()}))
                    .collect::<Vec<_>>()),
            );
        }
        MomentumOutcome::Found(m) => {
            rep.status = Status::from_bool(m.equivariance.holds && m.splitting.holds);
            hamiltonians(&mut rep, "hamiltonian", "J", &m.hamiltonian.j);
            lambda_lines(&mut rep, &m.lambda);
            rep.line(format!(
                "H1 = {}, H2 = {}",
                m.cohomology.h1, m.cohomology.h2
            ));
            for (i, t) in m.tau.iter().enumerate() {
                rep.line(format!("tau(xi{}) = {}", i + 1, scalar_series(t).render()));
            }
            hamiltonians(&mut rep, "momentum", "J^tau", &m.momentum.j);
            rep.put("lambda", lambda_json(&m.lambda));
            rep.put(
                "cohomology",
                serde_json::to_value(m.cohomology).expect("serializes"),
            );
            rep.put("tau", json!(m.tau.iter().map(coeffs).collect::<Vec<_>>()));
            rep.certificate("equivariance", &m.equivariance);
            rep.certificate("splitting", &m.splitting);
        }
    }
    Ok(rep)
}

fn strong_invariance(c: &Common, action: &Path, a: &AnsatzArgs) -> Outcome {
    let chart = load_chart(c)?;
    let act = load_action(action, chart.dimension())?;
    let mut rep = Report::new("strong-invariance");
    let j0 = match classical_momentum(&chart, &act, ansatz(a))? {
        Ok(j0) => j0,
        Err(xi) => {
            rep.status = Status::NotFound;
            rep.line(format!(
                "NOT_FOUND: no rational classical Hamiltonian for xi{}",
                xi + 1
            ));
            rep.put("xi", json!(xi + 1));
            return Ok(rep);
        }
    };
    for (i, f) in j0.iter().enumerate() {
        rep.line(format!("J0(xi{}) = {f}", i + 1));
    }
    rep.put(
        "j0",
        json!(j0.iter().map(|f| f.to_string()).collect::<Vec<_>>()),
    );
    let r = check_strong_invariance(&StarProduct::new(&chart, c.order), &act, &j0)?;
    rep.status = Status::from_bool(r.strongly_invariant());
    rep.line(format!("J0 equivariant at order 0: {}", r.j0_equivariant));
    rep.put("j0_equivariant", json!(r.j0_equivariant));
    match r.contraction_failure {
        Some((xi, s)) => rep.line(format!(
            "i_X (K - omega) != 0 for xi{} at order {s}",
            xi + 1
        )),
        None => rep.line("i_X (K - omega) = 0 for every basis element"),
    }
    rep.put(
        "contraction_failure",
        json!(r
            .contraction_failure
            .map(|(xi, s)| json!({"xi": xi + 1, "order": s}))),
    );
    if let Some(cert) = &r.certificate {
        rep.certificate("certificate", cert);
    }
    Ok(rep)
}

fn bt(c: &Common, action: Option<&Path>, a: &AnsatzArgs) -> Outcome {
    let chart = load_chart(c)?;
    let mut rep = Report::new("bt");
    let Some(action) = action else {
        let btc = berezin_toeplitz(&chart)?;
        let k1 = btc.karabegov_form_at(1);
        rep.line(format!("K_1 = {}", k1.render()));
        rep.put("k1", form_11(&k1));
        return Ok(rep);
    };
    let act = load_action(action, chart.dimension())?;
    match bt_momentum(&chart, &act, c.order, ansatz(a))? {
        BtOutcome::NotFound { xi } => {
            rep.status = Status::NotFound;
            rep.line(format!(
                "NOT_FOUND: no rational classical Hamiltonian for xi{}",
                xi + 1
            ));
            rep.put("xi", json!(xi + 1));
        }
        BtOutcome::Found(r) => {
            rep.status =
                Status::from_bool(r.contraction.holds && r.bracket.holds && r.verification.holds);
            let k1 = r.chart.karabegov_form_at(1);
            rep.line(format!("K_1 = {}", k1.render()));
            rep.put("k1", form_11(&k1));
            for (i, f) in r.j.iter().enumerate() {
                rep.line(format!("j(xi{}) = {f}", i + 1));
            }
            rep.put(
                "j",
                json!(r.j.iter().map(|f| f.to_string()).collect::<Vec<_>>()),
            );
            hamiltonians(&mut rep, "hamiltonian", "J", &r.hamiltonian);
            rep.certificate("contraction", &r.contraction);
            rep.certificate("bracket", &r.bracket);
            rep.certificate("verification", &r.verification);
        }
    }
    Ok(rep)
}
