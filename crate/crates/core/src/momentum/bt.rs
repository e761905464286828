//! The Berezin-Toeplitz chart and its momentum mapping.

use super::action::LieAction;
use super::cochain::pairs;
use super::{classical_momentum, verify_quantum_hamiltonian};
use crate::calculus::Form;
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exactnum::{RationalFunction, Scalar, Series, Var};
use crate::report::{Certificate, Witness};
use crate::star::StarProduct;
use crate::symmetry::Ansatz;

/// `2/i = -2i`.
fn two_over_i() -> Scalar {
    Scalar::complex(0, -2)
}

/// The chart whose Karabegov form is `omega + (2v/i) rho`.
///
/// The order-1 correction is `(2/i) lambda0 d_k log det g`, with `lambda0` the
/// constant relating `rho` to `i dbar d log det g`; the result is checked against
/// the curvature trace.
pub fn berezin_toeplitz(chart: &Chart) -> Result<Chart> {
    let n = chart.dimension();
    let base = Chart::new(
        n,
        chart.order().max(1),
        vec![chart.u(0)],
        chart.v(0).map(|v| vec![v]),
    )?;
    let Some(lambda0) = chart.ricci_constant()? else {
        return Ok(base);
    };
    let c = &two_over_i() * &lambda0;
    let det = &chart.metric().detg;
    let dlog = |v: Var| det.derivative(v).div(det).map(|f| f.scale(&c));
    let du = (0..n)
        .map(|k| dlog(Var::Z(k)))
        .collect::<Result<Vec<_>>>()?;
    let dv = if chart.has_v() {
        Some(
            (0..n)
                .map(|l| dlog(Var::W(l)))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let bt = base.with_correction(1, &du, dv.as_deref())?;
    let expected = chart.ricci_form().scale(&two_over_i());
    if !bt.karabegov_form_at(1).equals(&expected) {
        return Err(Error::Internal(format!(
            "order-1 form {} differs from (2/i) rho = {}",
            bt.karabegov_form_at(1).render(),
            expected.render()
        )));
    }
    Ok(bt)
}

#[derive(Clone, Debug)]
pub struct BtReport {
    pub chart: Chart,
    pub j0: Vec<RationalFunction>,
    /// `j(xi) = (1/4) div(I X_xi)`.
    pub j: Vec<RationalFunction>,
    /// `i_X rho = d j(xi)` for each basis element.
    pub contraction: Certificate,
    /// `rho(X_i, X_j) = j([xi_i, xi_j])` for each pair.
    pub bracket: Certificate,
    /// `J0 + (2v/i) j`.
    pub hamiltonian: Vec<Series<RationalFunction>>,
    pub verification: Certificate,
}

#[derive(Clone, Debug)]
pub enum BtOutcome {
    Found(Box<BtReport>),
    /// No classical Hamiltonian for basis element `xi`.
    NotFound {
        xi: usize,
    },
}

/// `J = J0 + (2v/i) j` on the Berezin-Toeplitz chart, verified against its star product to `order`.
pub fn bt_momentum(
    chart: &Chart,
    act: &LieAction,
    order: usize,
    ansatz: Ansatz,
) -> Result<BtOutcome> {
    let n = chart.dimension();
    let bt = berezin_toeplitz(chart)?;
    let j0 = match classical_momentum(chart, act, ansatz)? {
        Ok(j0) => j0,
        Err(xi) => return Ok(BtOutcome::NotFound { xi }),
    };
    let quarter = Scalar::from_ratio(1, 4);
    let j: Vec<RationalFunction> = act
        .fields()
        .iter()
        .map(|x| chart.covariant_div(&x.complex_structure()).scale(&quarter))
        .collect();
    let rho = chart.ricci_form();

    let mut witness = None;
    for (i, x) in act.fields().iter().enumerate() {
        let lhs = rho.interior(x)?;
        let rhs = Form::function(n, j[i].clone()).d();
        if !lhs.equals(&rhs) {
            witness = Some(Witness::new(
                format!("X{}", i + 1),
                None,
                lhs.render(),
                rhs.render(),
            ));
            break;
        }
    }
    let contraction = Certificate::from_witness("i_X rho = d j", act.dim(), witness);

    let ps = pairs(act.dim());
    let mut witness = None;
    for &(a, b) in &ps {
        let lhs = rho.evaluate(act.field(a), act.field(b));
        let rhs = LieAction::combine(act.bracket(a, b), &j, |f, c| f.scale(c));
        if !lhs.equals(&rhs) {
            witness = Some(Witness::new(
                format!("(xi{}, xi{})", a + 1, b + 1),
                None,
                lhs.to_string(),
                rhs.to_string(),
            ));
            break;
        }
    }
    let bracket = Certificate::from_witness("rho(X, Y) = j([xi, eta])", ps.len(), witness);

    let hamiltonian: Vec<Series<RationalFunction>> = j0
        .iter()
        .zip(&j)
        .map(|(a, b)| Series::from_coeffs(vec![a.clone(), b.scale(&two_over_i())], order))
        .collect();
    let sp = StarProduct::new(&bt.with_order(order), order);
    let verification = verify_quantum_hamiltonian(&sp, act, &hamiltonian)?;
    Ok(BtOutcome::Found(Box::new(BtReport {
        chart: bt,
        j0,
        j,
        contraction,
        bracket,
        hamiltonian,
        verification,
    })))
}
