//! Derivations, automorphisms, rational primitives and quasi-inner derivations.

use serde::Serialize;

use crate::calculus::{ChartMap, Form, VectorField};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exactnum::linalg::solve;
use crate::exactnum::{Monomial, Polynomial, RationalFunction, Scalar, Series, Var};
use crate::report::{Certificate, Witness};
use crate::star::StarProduct;
use crate::sweep::{first_failure, monomials};

/// `Lie_X I = 0`: holomorphic components depend on `z` only, antiholomorphic ones on `w` only.
pub fn check_holomorphy(x: &VectorField) -> bool {
    x.holomorphy_defect().is_none()
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub holomorphy_ok: bool,
    /// `Lie_X K` vanishes, per order.
    pub lie_k_zero: Vec<bool>,
    pub derivation: Certificate,
}

impl InvarianceReport {
    pub fn conditions_hold(&self) -> bool {
        self.holomorphy_ok && self.lie_k_zero.iter().all(|&b| b)
    }

    pub fn is_derivation(&self) -> bool {
        self.derivation.holds
    }
}

fn series_of(f: RationalFunction, order: usize) -> Series<RationalFunction> {
    Series::constant(f, order)
}

fn apply_series(x: &VectorField, s: &Series<RationalFunction>) -> Series<RationalFunction> {
    s.map(|c| x.apply(c))
}

fn monomial_functions(n: usize, dmax: usize) -> Vec<RationalFunction> {
    monomials(n, dmax as u16)
        .into_iter()
        .map(RationalFunction::monomial)
        .collect()
}

/// Whether `Lie_X K^(s) = 0` at each order `0..=N`.
pub fn lie_conditions(chart: &Chart, x: &VectorField, order: usize) -> Vec<bool> {
    (0..=order)
        .map(|s| chart.karabegov_form_at(s).lie(x).is_zero())
        .collect()
}

/// `X(a * b) = X(a) * b + a * X(b)` on all monomial pairs up to the product order.
pub fn derivation_certificate(sp: &StarProduct, x: &VectorField) -> Result<Certificate> {
    let order = sp.order();
    let mons = monomial_functions(sp.dimension(), order);
    let m = mons.len();
    let witness = first_failure(m * m, |idx| {
        let (a, b) = (
            series_of(mons[idx / m].clone(), order),
            series_of(mons[idx % m].clone(), order),
        );
        let lhs = apply_series(x, &sp.star(&a, &b)?);
        let rhs = sp
            .star(&apply_series(x, &a), &b)?
            .add(&sp.star(&a, &apply_series(x, &b))?);
        Ok(lhs.first_difference(&rhs).map(|o| {
            Witness::series(
                format!("X applied to ({}) * ({})", mons[idx / m], mons[idx % m]),
                o,
                &lhs,
                &rhs,
            )
        }))
    })?;
    Ok(Certificate::from_witness("derivation", m * m, witness))
}

/// Decide whether `X` is a derivation, both through the form conditions and by direct certification.
pub fn check_derivation(sp: &StarProduct, x: &VectorField) -> Result<InvarianceReport> {
    let report = InvarianceReport {
        holomorphy_ok: check_holomorphy(x),
        lie_k_zero: lie_conditions(sp.chart(), x, sp.order()),
        derivation: derivation_certificate(sp, x)?,
    };
    if report.conditions_hold() != report.is_derivation() {
        return Err(Error::Internal(format!(
            "derivation certificate ({}) disagrees with the Lie derivative conditions ({})",
            report.is_derivation(),
            report.conditions_hold()
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct AutomorphismReport {
    /// `phi^* K^(s) = K^(s)`, per order.
    pub form_preserved: Vec<bool>,
    pub product: Certificate,
}

impl AutomorphismReport {
    pub fn is_automorphism(&self) -> bool {
        self.form_preserved.iter().all(|&b| b) && self.product.holds
    }

    /// The form test and the product certificate reach the same verdict.
    pub fn consistent(&self) -> bool {
        self.form_preserved.iter().all(|&b| b) == self.product.holds
    }
}

/// `phi^* K = K` per order, and `phi^*(a * b) = phi^* a * phi^* b` on monomial pairs.
pub fn check_automorphism(sp: &StarProduct, phi: &ChartMap) -> Result<AutomorphismReport> {
    let order = sp.order();
    let chart = sp.chart();
    let form_preserved = (0..=order)
        .map(|s| {
            let k = chart.karabegov_form_at(s);
            Ok(k.pullback(phi)?.equals(&k))
        })
        .collect::<Result<Vec<bool>>>()?;
    let mons = monomial_functions(sp.dimension(), order);
    let m = mons.len();
    let pull = |s: &Series<RationalFunction>| s.try_map(|c| phi.pullback_function(c));
    let witness = first_failure(m * m, |idx| {
        let (a, b) = (
            series_of(mons[idx / m].clone(), order),
            series_of(mons[idx % m].clone(), order),
        );
        let lhs = pull(&sp.star(&a, &b)?)?;
        let rhs = sp.star(&pull(&a)?, &pull(&b)?)?;
        Ok(lhs.first_difference(&rhs).map(|o| {
            Witness::series(
                format!("pullback of ({}) * ({})", mons[idx / m], mons[idx % m]),
                o,
                &lhs,
                &rhs,
            )
        }))
    })?;
    Ok(AutomorphismReport {
        form_preserved,
        product: Certificate::from_witness("automorphism", m * m, witness),
    })
}

/// Bounds for the primitive search; `None` selects the defaults.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ansatz {
    /// Numerator degree bound above the denominator degree.
    pub degree: Option<u32>,
    /// Largest exponent tried for each denominator factor.
    pub power_bound: Option<u32>,
}

/// Search for a rational `a` with `da = F` within the ansatz.
///
/// `a = P / Q` where `Q` runs over products of the denominator factors of `F`
/// with exponents `0, 1, ...` up to the power bound, and `P` ranges over all
/// polynomials of degree at most `degree + deg Q`. `Ok(None)` means no primitive
/// exists in that space.
pub fn find_primitive(f: &Form, ansatz: Ansatz) -> Result<Option<RationalFunction>> {
    let n = f.dimension();
    if !f.is_homogeneous(1) {
        return Err(Error::InvalidInput(
            "primitive requested for a form that is not a 1-form".to_string(),
        ));
    }
    if !f.d().is_zero() {
        return Err(Error::NotClosed);
    }
    if f.is_zero() {
        return Ok(Some(RationalFunction::zero()));
    }
    let vars = Var::all(n);
    let comps: Vec<(Var, Polynomial, Polynomial)> = vars
        .iter()
        .map(|&v| {
            let c = f.coefficient_1(v);
            (v, c.numerator().clone(), c.denominator())
        })
        .collect();
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    for &v in &vars {
        let c = f.coefficient_1(v);
        for (fac, e) in c.denominator_factors() {
            match factors.iter_mut().find(|(g, _)| g == fac) {
                Some(slot) => slot.1 = slot.1.max(e),
                None => factors.push((fac.clone(), e)),
            }
        }
    }
    factors.sort();
    let pmax = factors.iter().map(|(_, e)| *e).max().unwrap_or(0);
    let degree = ansatz.degree.unwrap_or_else(|| {
        comps
            .iter()
            .map(|(_, num, _)| num.total_degree())
            .max()
            .unwrap_or(0)
            + 2
    });
    let power_bound = ansatz.power_bound.unwrap_or(pmax + 1);
    let mut previous: Option<Polynomial> = None;
    for e in 0..=power_bound {
        let q = factors.iter().fold(Polynomial::one(), |acc, (g, p)| {
            acc.mul(&g.pow(e.min(p + 1)))
        });
        if previous.as_ref() == Some(&q) {
            break;
        }
        previous = Some(q.clone());
        if let Some(a) = solve_with_denominator(n, &comps, &q, degree + q.total_degree())? {
            let check = Form::function(n, a.clone()).d();
            if !check.equals(f) {
                return Err(Error::Internal(
                    "primitive fails exact differentiation".to_string(),
                ));
            }
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Monomials of total degree at most `deg` in the chart variables, constant first.
fn ansatz_monomials(n: usize, deg: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = monomials(n, deg as u16)
        .into_iter()
        .filter(|m| m.degree() <= deg)
        .collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then(b.cmp(a)));
    out
}

fn solve_with_denominator(
    n: usize,
    comps: &[(Var, Polynomial, Polynomial)],
    q: &Polynomial,
    deg: u32,
) -> Result<Option<RationalFunction>> {
    let unknowns = ansatz_monomials(n, deg);
    let q2 = q.mul(q);
    // equation per variable: den (Q dP - P dQ) = num Q^2
    let mut rows: std::collections::BTreeMap<(usize, Monomial), (Vec<Scalar>, Scalar)> =
        Default::default();
    for (j, (v, num, den)) in comps.iter().enumerate() {
        let dq = q.derivative(*v);
        for (col, m) in unknowns.iter().enumerate() {
            let pm = Polynomial::monomial(*m, Scalar::one());
            let image = den.mul(&q.mul(&pm.derivative(*v)).sub(&pm.mul(&dq)));
            for (mono, c) in image.terms() {
                let row = rows
                    .entry((j, *mono))
                    .or_insert_with(|| (vec![Scalar::zero(); unknowns.len()], Scalar::zero()));
                row.0[col] = c.clone();
            }
        }
        for (mono, c) in num.mul(&q2).terms() {
            let row = rows
                .entry((j, *mono))
                .or_insert_with(|| (vec![Scalar::zero(); unknowns.len()], Scalar::zero()));
            row.1 = c.clone();
        }
    }
    let (a, b): (Vec<Vec<Scalar>>, Vec<Scalar>) = rows.into_values().unzip();
    let Some(x) = solve(&a, &b) else {
        return Ok(None);
    };
    let p = Polynomial::from_terms(unknowns.iter().zip(x).map(|(m, c)| (*m, c)));
    Ok(Some(RationalFunction::new(p, q.clone())?))
}

/// The field `X` with `i_X omega = d a0`, through the inverse metric.
pub fn hamiltonian_vector_field(chart: &Chart, a0: &RationalFunction) -> VectorField {
    let n = chart.dimension();
    let ginv = &chart.metric().ginv;
    let mut hol = Vec::with_capacity(n);
    let mut antihol = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = RationalFunction::zero();
        for l in 0..n {
            acc = acc.add(&a0.derivative(Var::W(l)).mul(&ginv[l][k]));
        }
        hol.push(acc);
    }
    for l in 0..n {
        let mut acc = RationalFunction::zero();
        for k in 0..n {
            acc = acc.sub(&ginv[l][k].mul(&a0.derivative(Var::Z(k))));
        }
        antihol.push(acc);
    }
    VectorField::new(hol, antihol)
}

/// Outcome of solving `da = i_X K` order by order.
#[derive(Clone, Debug)]
pub enum PrimitiveSeries {
    Found(Series<RationalFunction>),
    NotFound { order: usize },
}

/// Solve `d a_s = i_X K^(s)` for `s = 0..=N` within the default ansatz.
pub fn solve_quasi_inner(
    chart: &Chart,
    x: &VectorField,
    order: usize,
    ansatz: Ansatz,
) -> Result<PrimitiveSeries> {
    let mut coeffs = Vec::with_capacity(order + 1);
    for s in 0..=order {
        let f = chart.karabegov_form_at(s).interior(x)?;
        match find_primitive(&f, ansatz)? {
            Some(a) => coeffs.push(a),
            None => return Ok(PrimitiveSeries::NotFound { order: s }),
        }
    }
    Ok(PrimitiveSeries::Found(Series::from_coeffs(coeffs, order)))
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiInnerReport {
    /// First order where `d a != i_X K`, if any.
    pub primitive_failure: Option<usize>,
    pub realization: Certificate,
    pub hamiltonian_field_matches: bool,
}

impl QuasiInnerReport {
    pub fn holds(&self) -> bool {
        self.primitive_failure.is_none() && self.realization.holds && self.hamiltonian_field_matches
    }
}

/// Verify that `a` realizes `X` as the quasi-inner derivation `-(1/v) ad(a)`.
pub fn check_quasi_inner(
    sp: &StarProduct,
    x: &VectorField,
    a: &Series<RationalFunction>,
) -> Result<QuasiInnerReport> {
    let order = sp.order();
    let chart = sp.chart();
    let n = sp.dimension();
    let primitive_failure = (0..=order).find(|&s| {
        let lhs = Form::function(n, a.coeff_or_zero(s)).d();
        let rhs = chart
            .karabegov_form_at(s)
            .interior(x)
            .expect("Karabegov form has degree 2");
        !lhs.equals(&rhs)
    });
    let mons = monomial_functions(n, order);
    let witness = first_failure(mons.len(), |i| {
        let b = series_of(mons[i].clone(), order);
        let lhs = sp.commutator_over_nu(a, &b)?.neg();
        let rhs = apply_series(x, &b);
        Ok(lhs.first_difference(&rhs).map(|o| {
            Witness::series(
                format!("-(1/v) ad(a) applied to {}", mons[i]),
                o,
                &lhs,
                &rhs,
            )
        }))
    })?;
    let hamiltonian_field_matches = hamiltonian_vector_field(chart, &a.coeff_or_zero(0)).equals(x);
    Ok(QuasiInnerReport {
        primitive_failure,
        realization: Certificate::from_witness("quasi-inner realization", mons.len(), witness),
        hamiltonian_field_matches,
    })
}
