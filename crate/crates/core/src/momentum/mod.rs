//! Quantum Hamiltonians and quantum momentum mappings for Lie algebra actions.

mod action;
mod bt;
mod cochain;

pub use action::{validate_action, ActionCheck, ActionReport, LieAction};
pub use bt::{berezin_toeplitz, bt_momentum, BtOutcome, BtReport};
pub use cochain::{
    cohomology, delta0_matrix, delta1_matrix, is_cocycle, pairs, solve_coboundary, triples,
    Coboundary, CoboundaryResult, Cochain2, Cohomology,
};

use serde::Serialize;

use crate::calculus::Form;
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exactnum::{RationalFunction, Scalar, Series};
use crate::report::{Certificate, Witness};
use crate::star::StarProduct;
use crate::sweep::{first_failure, monomials};
use crate::symmetry::{
    check_holomorphy, find_primitive, lie_conditions, solve_quasi_inner, Ansatz, PrimitiveSeries,
};

/// `J_xi` per basis element, each a series in `v`.
#[derive(Clone, Debug)]
pub struct QuantumHamiltonian {
    pub j: Vec<Series<RationalFunction>>,
}

impl QuantumHamiltonian {
    pub fn j0(&self) -> Vec<RationalFunction> {
        self.j.iter().map(|s| s.coeff_or_zero(0)).collect()
    }

    /// The part of positive order in `v`.
    pub fn j_plus(&self) -> Vec<Series<RationalFunction>> {
        self.j
            .iter()
            .map(|s| {
                let mut t = s.clone();
                t.set(0, RationalFunction::zero());
                t
            })
            .collect()
    }

    /// Shift by a constant cochain: `J_xi - tau_xi`.
    pub fn shifted(&self, tau: &[Series<Scalar>]) -> QuantumHamiltonian {
        QuantumHamiltonian {
            j: self
                .j
                .iter()
                .zip(tau)
                .map(|(j, t)| {
                    j.sub(
                        &t.map(|c| RationalFunction::constant(c.clone()))
                            .with_order(j.order()),
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum HamiltonianOutcome {
    Found(QuantumHamiltonian),
    /// No rational primitive for basis element `xi` (0-based) at `order`.
    NotFound {
        xi: usize,
        order: usize,
    },
}

fn require_derivations(chart: &Chart, act: &LieAction, order: usize) -> Result<()> {
    for (i, x) in act.fields().iter().enumerate() {
        if !check_holomorphy(x) {
            return Err(Error::Precondition(format!(
                "field X{} is not holomorphic",
                i + 1
            )));
        }
        if let Some(s) = lie_conditions(chart, x, order).iter().position(|ok| !ok) {
            return Err(Error::Precondition(format!(
                "field X{} does not preserve the Karabegov form at order {s}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Solve `d J_xi = i_{X_xi} K` per basis element and order.
pub fn quantum_hamiltonian(
    chart: &Chart,
    act: &LieAction,
    order: usize,
    ansatz: Ansatz,
) -> Result<HamiltonianOutcome> {
    require_derivations(chart, act, order)?;
    let mut j = Vec::with_capacity(act.dim());
    for (i, x) in act.fields().iter().enumerate() {
        match solve_quasi_inner(chart, x, order, ansatz)? {
            PrimitiveSeries::Found(s) => j.push(s),
            PrimitiveSeries::NotFound { order } => {
                return Ok(HamiltonianOutcome::NotFound { xi: i, order })
            }
        }
    }
    Ok(HamiltonianOutcome::Found(QuantumHamiltonian { j }))
}

/// `-X_xi(b) = (1/v) ad(J_xi)(b)` for every basis element and monomial `b` up to the product order.
pub fn verify_quantum_hamiltonian(
    sp: &StarProduct,
    act: &LieAction,
    j: &[Series<RationalFunction>],
) -> Result<Certificate> {
    let order = sp.order();
    let mons: Vec<RationalFunction> = monomials(sp.dimension(), order as u16)
        .into_iter()
        .map(RationalFunction::monomial)
        .collect();
    let m = act.dim();
    let per = mons.len();
    let witness = first_failure(m * per, |idx| {
        let (xi, b) = (idx / per, &mons[idx % per]);
        let bs = Series::constant(b.clone(), order);
        let lhs = Series::constant(act.field(xi).apply(b).neg(), order);
        let rhs = sp.commutator_over_nu(&j[xi].with_order(order), &bs)?;
        Ok(lhs
            .first_difference(&rhs)
            .map(|o| Witness::series(format!("xi{} acting on {b}", xi + 1), o, &lhs, &rhs)))
    })?;
    Ok(Certificate::from_witness(
        "quantum Hamiltonian",
        m * per,
        witness,
    ))
}

/// `lambda(xi_i, xi_j) = K(X_i, X_j) - J_[xi_i, xi_j]`, asserted constant and closed.
pub fn lambda_cocycle(
    chart: &Chart,
    act: &LieAction,
    j: &[Series<RationalFunction>],
    order: usize,
) -> Result<Cochain2> {
    let forms = chart.karabegov_form(order);
    let mut values = Vec::new();
    for (a, b) in pairs(act.dim()) {
        let bracket_j = LieAction::combine(act.bracket(a, b), j, |s, c| {
            s.scale(&RationalFunction::constant(c.clone()))
        });
        let mut val = Series::zero(order);
        for (s, k) in forms.iter().enumerate() {
            let f = k
                .evaluate(act.field(a), act.field(b))
                .sub(&bracket_j.coeff_or_zero(s));
            let Some(c) = f.constant_value() else {
                return Err(Error::Internal(format!(
                    "lambda(xi{}, xi{}) at order {s} is not constant: {f}",
                    a + 1,
                    b + 1
                )));
            };
            val.set(s, c);
        }
        values.push(val);
    }
    let lambda = Cochain2 {
        m: act.dim(),
        values,
    };
    if !is_cocycle(act, &lambda) {
        return Err(Error::Internal(
            "lambda fails the cocycle identity".to_string(),
        ));
    }
    Ok(lambda)
}

/// `(1/v)(J_i * J_j - J_j * J_i) = J_[xi_i, xi_j]` on every basis pair.
pub fn verify_equivariance(
    sp: &StarProduct,
    act: &LieAction,
    j: &[Series<RationalFunction>],
) -> Result<Certificate> {
    let ps = pairs(act.dim());
    let order = sp.order();
    let witness = first_failure(ps.len(), |idx| {
        let (a, b) = ps[idx];
        let lhs = sp.commutator_over_nu(&j[a].with_order(order), &j[b].with_order(order))?;
        let rhs = LieAction::combine(act.bracket(a, b), j, |s, c| {
            s.scale(&RationalFunction::constant(c.clone()))
        })
        .with_order(order);
        Ok(lhs
            .first_difference(&rhs)
            .map(|o| Witness::series(format!("(xi{}, xi{})", a + 1, b + 1), o, &lhs, &rhs)))
    })?;
    Ok(Certificate::from_witness("equivariance", ps.len(), witness))
}

/// `i_X (K - omega) = d J_+` and `(K - omega)(X_i, X_j) = (delta J_+)(xi_i, xi_j)` at orders >= 1,
/// with `(delta J)(xi, eta) = -X_xi(J_eta) + X_eta(J_xi) - J_[xi, eta]`.
pub fn verify_splitting(
    chart: &Chart,
    act: &LieAction,
    q: &QuantumHamiltonian,
    order: usize,
) -> Result<Certificate> {
    let n = chart.dimension();
    let forms = chart.karabegov_form(order);
    let jp = q.j_plus();
    let mut cases = 0;
    for s in 1..=order {
        for (i, x) in act.fields().iter().enumerate() {
            cases += 1;
            let lhs = forms[s].interior(x)?;
            let rhs = Form::function(n, jp[i].coeff_or_zero(s)).d();
            if !lhs.equals(&rhs) {
                let w = Witness::new(
                    format!("contraction with X{}", i + 1),
                    Some(s),
                    lhs.render(),
                    rhs.render(),
                );
                return Ok(Certificate::from_witness("splitting", cases, Some(w)));
            }
        }
        for (a, b) in pairs(act.dim()) {
            cases += 1;
            let lhs = forms[s].evaluate(act.field(a), act.field(b));
            let bracket = LieAction::combine(act.bracket(a, b), &jp, |t, c| {
                t.scale(&RationalFunction::constant(c.clone()))
            });
            let rhs = act
                .field(b)
                .apply(&jp[a].coeff_or_zero(s))
                .sub(&act.field(a).apply(&jp[b].coeff_or_zero(s)))
                .sub(&bracket.coeff_or_zero(s));
            if !lhs.equals(&rhs) {
                let w = Witness::new(
                    format!("(xi{}, xi{})", a + 1, b + 1),
                    Some(s),
                    lhs.to_string(),
                    rhs.to_string(),
                );
                return Ok(Certificate::from_witness("splitting", cases, Some(w)));
            }
        }
    }
    Ok(Certificate::from_witness("splitting", cases, None))
}

#[derive(Clone, Debug)]
pub struct MomentumReport {
    pub hamiltonian: QuantumHamiltonian,
    pub lambda: Cochain2,
    pub cohomology: Cohomology,
    pub tau: Vec<Series<Scalar>>,
    /// `J - tau`.
    pub momentum: QuantumHamiltonian,
    pub equivariance: Certificate,
    pub splitting: Certificate,
}

#[derive(Clone, Debug)]
pub enum MomentumOutcome {
    /// Stage `quantum_hamiltonian` found no primitive.
    NotFound {
        xi: usize,
        order: usize,
    },
    /// Stage `solve_coboundary` found a nonzero class.
    Obstructed {
        hamiltonian: QuantumHamiltonian,
        lambda: Cochain2,
        cohomology: Cohomology,
        order: usize,
        class: Vec<((usize, usize), Scalar)>,
    },
    Found(Box<MomentumReport>),
}

/// Quantum Hamiltonian, obstruction cocycle, coboundary and a final check of equivariance.
pub fn momentum_map(sp: &StarProduct, act: &LieAction, ansatz: Ansatz) -> Result<MomentumOutcome> {
    let chart = sp.chart();
    let order = sp.order();
    let hamiltonian = match quantum_hamiltonian(chart, act, order, ansatz)? {
        HamiltonianOutcome::Found(q) => q,
        HamiltonianOutcome::NotFound { xi, order } => {
            return Ok(MomentumOutcome::NotFound { xi, order })
        }
    };
    let lambda = lambda_cocycle(chart, act, &hamiltonian.j, order)?;
    let cob = solve_coboundary(act, &lambda);
    let tau = match cob.outcome {
        Coboundary::Solved(tau) => tau,
        Coboundary::Obstructed { order, class } => {
            return Ok(MomentumOutcome::Obstructed {
                hamiltonian,
                lambda,
                cohomology: cob.cohomology,
                order,
                class,
            })
        }
    };
    let momentum = hamiltonian.shifted(&tau);
    let equivariance = verify_equivariance(sp, act, &momentum.j)?;
    let splitting = verify_splitting(chart, act, &momentum, order)?;
    Ok(MomentumOutcome::Found(Box::new(MomentumReport {
        hamiltonian,
        lambda,
        cohomology: cob.cohomology,
        tau,
        momentum,
        equivariance,
        splitting,
    })))
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongInvarianceReport {
    /// Order-0 part of equivariance for `J0`.
    pub j0_equivariant: bool,
    /// First `(xi, order)` with `i_X (K - omega) != 0`.
    pub contraction_failure: Option<(usize, usize)>,
    /// `J0` certified as a quantum Hamiltonian; run only when all contractions vanish.
    pub certificate: Option<Certificate>,
}

impl StrongInvarianceReport {
    pub fn strongly_invariant(&self) -> bool {
        self.contraction_failure.is_none() && self.certificate.as_ref().is_some_and(|c| c.holds)
    }
}

/// Test `i_X (K - omega) = 0` at orders >= 1 and, when it holds, certify `J0` itself.
pub fn check_strong_invariance(
    sp: &StarProduct,
    act: &LieAction,
    j0: &[RationalFunction],
) -> Result<StrongInvarianceReport> {
    let chart = sp.chart();
    let n = chart.dimension();
    let order = sp.order();
    if j0.len() != act.dim() {
        return Err(Error::InvalidInput(format!(
            "{} values of J0 for dimension {}",
            j0.len(),
            act.dim()
        )));
    }
    let omega = chart.kahler_form();
    for (i, x) in act.fields().iter().enumerate() {
        if !Form::function(n, j0[i].clone())
            .d()
            .equals(&omega.interior(x)?)
        {
            return Err(Error::Precondition(format!(
                "J0 of xi{} is not a Hamiltonian for X{}",
                i + 1,
                i + 1
            )));
        }
    }
    let j0s: Vec<Series<RationalFunction>> = j0
        .iter()
        .map(|f| Series::constant(f.clone(), order))
        .collect();
    let j0_equivariant = pairs(act.dim()).into_iter().try_fold(true, |acc, (a, b)| {
        let lhs = sp.commutator_over_nu(&j0s[a], &j0s[b])?.coeff_or_zero(0);
        let rhs = LieAction::combine(act.bracket(a, b), j0, |f, c| f.scale(c));
        Ok::<bool, Error>(acc && lhs.equals(&rhs))
    })?;
    let forms = chart.karabegov_form(order);
    let mut contraction_failure = None;
    'outer: for s in 1..=order {
        for (i, x) in act.fields().iter().enumerate() {
            if !forms[s].interior(x)?.is_zero() {
                contraction_failure = Some((i, s));
                break 'outer;
            }
        }
    }
    let certificate = match contraction_failure {
        Some(_) => None,
        None => Some(verify_quantum_hamiltonian(sp, act, &j0s)?),
    };
    Ok(StrongInvarianceReport {
        j0_equivariant,
        contraction_failure,
        certificate,
    })
}

#[derive(Clone, Debug)]
pub struct PotentialMomentum {
    pub j: Vec<Series<RationalFunction>>,
    /// `d J_xi = i_X K` at every order.
    pub hamiltonian_ok: bool,
    pub lambda_zero: bool,
}

/// `J_xi = (chi^k u_k - chibar^l v_l) / 2` from the potential derivatives, for invariant potentials.
pub fn potential_momentum(
    chart: &Chart,
    act: &LieAction,
    order: usize,
) -> Result<PotentialMomentum> {
    if !chart.has_v() {
        return Err(Error::Precondition("chart carries no v data".to_string()));
    }
    let n = chart.dimension();
    let half = Scalar::from_ratio(1, 2);
    let mut j = Vec::with_capacity(act.dim());
    for (i, x) in act.fields().iter().enumerate() {
        let mut coeffs = Vec::with_capacity(order + 1);
        for s in 0..=order {
            let u = chart.u(s);
            let v = chart.v(s).expect("chart has v data");
            let mut cu = RationalFunction::zero();
            let mut cv = RationalFunction::zero();
            for k in 0..n {
                cu = cu.add(&x.hol()[k].mul(&u[k]));
                cv = cv.add(&x.antihol()[k].mul(&v[k]));
            }
            if !cu.add(&cv).is_zero() {
                return Err(Error::Precondition(format!(
                    "potential is not invariant under X{} at order {s}: {}",
                    i + 1,
                    cu.add(&cv)
                )));
            }
            coeffs.push(cu.sub(&cv).scale(&half));
        }
        j.push(Series::from_coeffs(coeffs, order));
    }
    let forms = chart.karabegov_form(order);
    let mut hamiltonian_ok = true;
    for (i, x) in act.fields().iter().enumerate() {
        for (s, k) in forms.iter().enumerate() {
            hamiltonian_ok &= Form::function(n, j[i].coeff_or_zero(s))
                .d()
                .equals(&k.interior(x)?);
        }
    }
    let lambda_zero = hamiltonian_ok && lambda_cocycle(chart, act, &j, order)?.is_zero();
    Ok(PotentialMomentum {
        j,
        hamiltonian_ok,
        lambda_zero,
    })
}

/// A classical Hamiltonian per basis element, `d J0 = i_X omega`.
pub fn classical_momentum(
    chart: &Chart,
    act: &LieAction,
    ansatz: Ansatz,
) -> Result<std::result::Result<Vec<RationalFunction>, usize>> {
    let omega = chart.kahler_form();
    let mut out = Vec::with_capacity(act.dim());
    for (i, x) in act.fields().iter().enumerate() {
        match find_primitive(&omega.interior(x)?, ansatz)? {
            Some(a) => out.push(a),
            None => return Ok(Err(i)),
        }
    }
    Ok(Ok(out))
}
