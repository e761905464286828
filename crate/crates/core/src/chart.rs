//! Kaehler chart data given by potential derivatives, and the geometry derived from it.
//!
//! A chart stores, for every order `s` in the deformation parameter, the tuple
//! `u^(s)_1..u^(s)_n` (derivatives of the formal potential in the `z`
//! directions) and optionally the conjugate tuple `v^(s)`. The potential itself
//! is never stored.

use std::sync::OnceLock;

use crate::calculus::{basis_11, Form, VectorField};
use crate::error::{Error, Result};
use crate::exactnum::linalg::{determinant_rational, inverse_rational, Matrix};
use crate::exactnum::{RationalFunction, Scalar, Var};

#[derive(Clone, Debug)]
pub struct Metric {
    /// `g[k][l] = d_{w_l} u^(0)_k`.
    pub g: Matrix<RationalFunction>,
    /// Matrix inverse of `g`.
    pub ginv: Matrix<RationalFunction>,
    pub detg: RationalFunction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct ChartReport {
    pub checks: Vec<Check>,
}

impl ChartReport {
    pub fn valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    fn push(&mut self, name: String, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }
}

#[derive(Clone, Debug)]
pub struct Chart {
    n: usize,
    order: usize,
    u: Vec<Vec<RationalFunction>>,
    v: Option<Vec<Vec<RationalFunction>>>,
    metric: OnceLock<Metric>,
}

impl Chart {
    /// Build and validate. `u[s]` is the order-`s` tuple; missing orders are zero.
    pub fn new(
        n: usize,
        order: usize,
        u: Vec<Vec<RationalFunction>>,
        v: Option<Vec<Vec<RationalFunction>>>,
    ) -> Result<Chart> {
        let chart = Chart::unchecked(n, order, u, v)?;
        let report = chart.validate();
        if let Some(fail) = report.first_failure() {
            return Err(Error::InvalidChart(format!(
                "{}: {}",
                fail.name, fail.detail
            )));
        }
        Ok(chart)
    }

    /// Build without validating the geometric invariants (only shapes are checked).
    pub fn unchecked(
        n: usize,
        order: usize,
        mut u: Vec<Vec<RationalFunction>>,
        v: Option<Vec<Vec<RationalFunction>>>,
    ) -> Result<Chart> {
        if n == 0 || n > crate::exactnum::MAX_DIM {
            return Err(Error::InvalidChart(format!("unsupported dimension {n}")));
        }
        if u.is_empty() {
            return Err(Error::InvalidChart("missing order-0 data".to_string()));
        }
        let shape = |tuples: &[Vec<RationalFunction>], what: &str| -> Result<()> {
            for (s, t) in tuples.iter().enumerate() {
                if t.len() != n {
                    return Err(Error::InvalidChart(format!(
                        "{what} at order {s} has {} entries, expected {n}",
                        t.len()
                    )));
                }
            }
            Ok(())
        };
        shape(&u, "u")?;
        if let Some(v) = &v {
            shape(v, "v")?;
        }
        // Drop trailing zero orders so that equal charts compare equal.
        while u.len() > 1 && u.last().is_some_and(|t| t.iter().all(|c| c.is_zero())) {
            u.pop();
        }
        Ok(Chart {
            n,
            order,
            u,
            v,
            metric: OnceLock::new(),
        })
    }

    /// The flat chart `u = w`.
    pub fn flat(n: usize, order: usize) -> Chart {
        let u = vec![(0..n).map(|k| RationalFunction::var(Var::W(k))).collect()];
        let v = vec![(0..n).map(|k| RationalFunction::var(Var::Z(k))).collect()];
        Chart::new(n, order, u, Some(v)).expect("flat chart is valid")
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Default truncation order.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The same data with a different default truncation order.
    pub fn with_order(&self, order: usize) -> Chart {
        let mut c = self.clone();
        c.order = order;
        c
    }

    /// Highest order with stored (possibly zero) data.
    pub fn data_order(&self) -> usize {
        let vlen = self.v.as_ref().map_or(0, |v| v.len());
        self.u.len().max(vlen).saturating_sub(1)
    }

    pub fn u(&self, s: usize) -> Vec<RationalFunction> {
        self.u
            .get(s)
            .cloned()
            .unwrap_or_else(|| vec![RationalFunction::zero(); self.n])
    }

    pub fn has_v(&self) -> bool {
        self.v.is_some()
    }

    pub fn v(&self, s: usize) -> Option<Vec<RationalFunction>> {
        self.v.as_ref().map(|v| {
            v.get(s)
                .cloned()
                .unwrap_or_else(|| vec![RationalFunction::zero(); self.n])
        })
    }

    /// Add `u` (and `v`, when the chart carries `v` data) at order `s`.
    pub fn with_correction(
        &self,
        s: usize,
        du: &[RationalFunction],
        dv: Option<&[RationalFunction]>,
    ) -> Result<Chart> {
        let mut u = self.u.clone();
        while u.len() <= s {
            u.push(vec![RationalFunction::zero(); self.n]);
        }
        for (k, c) in du.iter().enumerate() {
            u[s][k] = u[s][k].add(c);
        }
        let v = match (&self.v, dv) {
            (Some(v), Some(dv)) => {
                let mut v = v.clone();
                while v.len() <= s {
                    v.push(vec![RationalFunction::zero(); self.n]);
                }
                for (l, c) in dv.iter().enumerate() {
                    v[s][l] = v[s][l].add(c);
                }
                Some(v)
            }
            (Some(_), None) => None,
            (None, _) => None,
        };
        Chart::new(self.n, self.order, u, v)
    }

    pub fn validate(&self) -> ChartReport {
        let n = self.n;
        let mut report = ChartReport::default();
        for (s, tuple) in self.u.iter().enumerate() {
            for j in 0..n {
                for k in j + 1..n {
                    let ok = tuple[k]
                        .derivative(Var::Z(j))
                        .equals(&tuple[j].derivative(Var::Z(k)));
                    report.push(
                        format!("u symmetry at order {s}, pair ({}, {})", j + 1, k + 1),
                        ok,
                        format!(
                            "d_z{} u_{} must equal d_z{} u_{}",
                            j + 1,
                            k + 1,
                            k + 1,
                            j + 1
                        ),
                    );
                }
            }
        }
        let g = self.metric_matrix();
        let det = determinant_rational(&g);
        report.push(
            "nondegeneracy".to_string(),
            !det.is_zero(),
            "det g vanishes identically".to_string(),
        );
        if let Some(v) = &self.v {
            for s in 0..v.len().max(self.u.len()) {
                let vt = self.v(s).expect("v present");
                let ut = self.u(s);
                for m in 0..n {
                    for l in m + 1..n {
                        let ok = vt[l]
                            .derivative(Var::W(m))
                            .equals(&vt[m].derivative(Var::W(l)));
                        report.push(
                            format!("v symmetry at order {s}, pair ({}, {})", m + 1, l + 1),
                            ok,
                            format!(
                                "d_w{} v_{} must equal d_w{} v_{}",
                                m + 1,
                                l + 1,
                                l + 1,
                                m + 1
                            ),
                        );
                    }
                }
                for k in 0..n {
                    for l in 0..n {
                        let ok = vt[l]
                            .derivative(Var::Z(k))
                            .equals(&ut[k].derivative(Var::W(l)));
                        report.push(
                            format!(
                                "u/v compatibility at order {s}, pair ({}, {})",
                                k + 1,
                                l + 1
                            ),
                            ok,
                            format!(
                                "d_z{} v_{} must equal d_w{} u_{}",
                                k + 1,
                                l + 1,
                                l + 1,
                                k + 1
                            ),
                        );
                    }
                }
            }
        }
        report
    }

    fn metric_matrix(&self) -> Matrix<RationalFunction> {
        let u0 = self.u(0);
        (0..self.n)
            .map(|k| (0..self.n).map(|l| u0[k].derivative(Var::W(l))).collect())
            .collect()
    }

    pub fn metric(&self) -> &Metric {
        self.metric.get_or_init(|| {
            let g = self.metric_matrix();
            let ginv = inverse_rational(&g).expect("validated chart has invertible metric");
            let detg = determinant_rational(&g);
            Metric { g, ginv, detg }
        })
    }

    /// Order-`s` coefficient `d_{w_l} u^(s)_k dz^k ^ dw^l`.
    pub fn karabegov_form_at(&self, s: usize) -> Form {
        let u = self.u(s);
        let coeffs: Vec<Vec<RationalFunction>> = (0..self.n)
            .map(|k| (0..self.n).map(|l| u[k].derivative(Var::W(l))).collect())
            .collect();
        Form::from_11(self.n, &coeffs)
    }

    /// Orders `0..=order` of the Karabegov form.
    pub fn karabegov_form(&self, order: usize) -> Vec<Form> {
        (0..=order).map(|s| self.karabegov_form_at(s)).collect()
    }

    /// The Kaehler form, i.e. order 0 of the Karabegov form.
    pub fn kahler_form(&self) -> Form {
        self.karabegov_form_at(0)
    }

    /// Variable attached to frame index `a` in `0..2n` (`z` block first).
    pub fn frame_var(&self, a: usize) -> Var {
        if a < self.n {
            Var::Z(a)
        } else {
            Var::W(a - self.n)
        }
    }

    /// Christoffel symbols of the Kaehler connection.
    pub fn christoffels(&self) -> Christoffels {
        let n = self.n;
        let m = self.metric();
        let dim = 2 * n;
        let mut table = vec![RationalFunction::zero(); dim * dim * dim];
        let at = |a: usize, b: usize, c: usize| (a * dim + b) * dim + c;
        // Gamma^m_{kl} = g^{m qbar} d_k g_{l qbar}, with g^{m qbar} = ginv[q][m]
        for mm in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = RationalFunction::zero();
                    for q in 0..n {
                        acc = acc.add(&m.ginv[q][mm].mul(&m.g[l][q].derivative(Var::Z(k))));
                    }
                    table[at(mm, k, l)] = acc;
                }
            }
        }
        // conjugate block: Gamma^{mbar}_{kbar lbar} = g^{q mbar} d_{w_k} g_{q lbar}
        for mm in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = RationalFunction::zero();
                    for q in 0..n {
                        acc = acc.add(&m.ginv[mm][q].mul(&m.g[q][l].derivative(Var::W(k))));
                    }
                    table[at(n + mm, n + k, n + l)] = acc;
                }
            }
        }
        Christoffels { dim, table }
    }

    /// Curvature components `R^a_{bcd}` with `R(e_c, e_d) e_b = R^a_{bcd} e_a`.
    pub fn curvature(&self) -> Curvature {
        let gamma = self.christoffels();
        let dim = gamma.dim;
        let mut table = vec![RationalFunction::zero(); dim.pow(4)];
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        let mut r = gamma
                            .get(a, d, b)
                            .derivative(self.frame_var(c))
                            .sub(&gamma.get(a, c, b).derivative(self.frame_var(d)));
                        for e in 0..dim {
                            r = r
                                .add(&gamma.get(a, c, e).mul(gamma.get(e, d, b)))
                                .sub(&gamma.get(a, d, e).mul(gamma.get(e, c, b)));
                        }
                        table[((a * dim + b) * dim + c) * dim + d] = r;
                    }
                }
            }
        }
        Curvature { dim, table }
    }

    /// `rho(e_c, e_d) = -1/4 tr(R(e_c, e_d) I)`, traced over the complexified frame.
    pub fn ricci_form(&self) -> Form {
        let r = self.curvature();
        let dim = r.dim;
        let quarter = Scalar::from_ratio(-1, 4);
        let mut out = Form::zero(self.n);
        for c in 0..dim {
            for d in c + 1..dim {
                let mut tr = RationalFunction::zero();
                for a in 0..dim {
                    let j = if a < self.n {
                        Scalar::i()
                    } else {
                        -Scalar::i()
                    };
                    tr = tr.add(&r.get(a, a, c, d).scale(&j));
                }
                let basis = (1u8 << self.frame_var(c).slot()) | (1u8 << self.frame_var(d).slot());
                out.add_term(basis, tr.scale(&quarter));
            }
        }
        out
    }

    /// The (1,1)-form with coefficients `d_{w_l}(d_{z_k} det g / det g)`.
    pub fn log_det_form(&self) -> Form {
        let det = &self.metric().detg;
        let mut out = Form::zero(self.n);
        for k in 0..self.n {
            let dk = det
                .derivative(Var::Z(k))
                .div(det)
                .expect("nonzero determinant");
            for l in 0..self.n {
                out.add_term(basis_11(k, l), dk.derivative(Var::W(l)));
            }
        }
        out
    }

    /// The constant `c` with `ricci_form = c * log_det_form`, read off this chart.
    /// `Ok(None)` when both forms vanish; an error when they are not proportional.
    pub fn ricci_constant(&self) -> Result<Option<Scalar>> {
        let rho = self.ricci_form();
        let ld = self.log_det_form();
        let Some((b, c)) = ld.terms().next() else {
            return if rho.is_zero() {
                Ok(None)
            } else {
                Err(Error::Internal(
                    "Ricci form nonzero while det g is constant".to_string(),
                ))
            };
        };
        let ratio = rho.coefficient(b).div(c)?;
        let Some(lambda) = ratio.constant_value() else {
            return Err(Error::Internal(format!(
                "Ricci ratio {ratio} is not constant"
            )));
        };
        if rho.equals(&ld.scale(&lambda)) {
            Ok(Some(lambda))
        } else {
            Err(Error::Internal(
                "Ricci form is not proportional to the log-det form".to_string(),
            ))
        }
    }

    /// Covariant divergence `sum_a (d_a X^a + Gamma^a_{ab} X^b)`.
    pub fn covariant_div(&self, x: &VectorField) -> RationalFunction {
        let gamma = self.christoffels();
        let dim = gamma.dim;
        let comp = |a: usize| x.component(self.frame_var(a));
        let mut acc = RationalFunction::zero();
        for a in 0..dim {
            acc = acc.add(&comp(a).derivative(self.frame_var(a)));
            for b in 0..dim {
                let g = gamma.get(a, a, b);
                if !g.is_zero() {
                    acc = acc.add(&g.mul(&comp(b)));
                }
            }
        }
        acc
    }
}

/// `Gamma^a_{bc}` over the frame `(d_z1.., d_w1..)`, meaning `nabla_{e_b} e_c = Gamma^a_{bc} e_a`.
#[derive(Clone, Debug)]
pub struct Christoffels {
    dim: usize,
    table: Vec<RationalFunction>,
}

impl Christoffels {
    pub fn get(&self, a: usize, b: usize, c: usize) -> &RationalFunction {
        &self.table[(a * self.dim + b) * self.dim + c]
    }

    pub fn frame_size(&self) -> usize {
        self.dim
    }
}

#[derive(Clone, Debug)]
pub struct Curvature {
    dim: usize,
    table: Vec<RationalFunction>,
}

impl Curvature {
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> &RationalFunction {
        &self.table[((a * self.dim + b) * self.dim + c) * self.dim + d]
    }

    pub fn frame_size(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|r| r.is_zero())
    }
}
