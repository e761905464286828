//! Wick-type star products built from chart data by the commutant recursion.
//!
//! For a function `a`, left multiplication `L_a = sum_t v^t A_t` is the unique
//! operator series with `A_0 = m(a)`, `A_t(1) = 0` for `t >= 1`, every `A_t`
//! differentiating only in `w` directions, and commuting with each right
//! multiplication `R_k = m(u_k) + v d_{z_k}`. Order by order this reads
//!
//! ```text
//! [A_t, m(u^(0)_k)] = D_k(A_{t-1}) - sum_{s=1}^{t-1} [A_{t-s}, m(u^(s)_k)]
//! ```
//!
//! where `D_k` differentiates the coefficients of an operator in `z_k`. The
//! left side is solved degree by degree from the top: the leading symbol of
//! `[A, m(u^(0)_k)]` is `g_{kl} dA/d(eta_l)`, so the metric inverse gives the
//! symbol's gradient and Euler's formula recovers the symbol.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::calculus::{DerivativeCache, DiffOperator, Form, MultiIndex};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exactnum::linalg::inverse_rational;
use crate::exactnum::{Monomial, RationalFunction, RationalKey, Scalar, Series, Var};
use crate::report::{Certificate, Witness};
use crate::sweep::{first_failure, monomials, par_map};

/// Deliberate corruption used as a negative control: adds
/// `coefficient * (d_{z1} a) * d_{w1}^2` to `A_2` of every `L_a`.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub coefficient: Scalar,
}

type Operators = Arc<Vec<DiffOperator>>;

pub struct StarProduct {
    chart: Chart,
    order: usize,
    perturbation: Option<Perturbation>,
    ginv: Vec<Vec<RationalFunction>>,
    /// `w`-derivatives of `u^(s)_k`, keyed by `(s, k, index)`.
    u_derivs: Mutex<HashMap<(usize, usize, MultiIndex), RationalFunction>>,
    cache: Mutex<HashMap<RationalKey, Operators>>,
}

fn w_index(l: usize) -> MultiIndex {
    Monomial::var(Var::W(l))
}

fn series_of(f: RationalFunction, order: usize) -> Series<RationalFunction> {
    Series::constant(f, order)
}

impl StarProduct {
    /// Product on a validated chart, truncated at `order`.
    pub fn new(chart: &Chart, order: usize) -> StarProduct {
        StarProduct {
            chart: chart.clone(),
            order,
            perturbation: None,
            ginv: chart.metric().ginv.clone(),
            u_derivs: Mutex::new(HashMap::new()),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_perturbation(mut self, p: Perturbation) -> StarProduct {
        self.perturbation = Some(p);
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    fn u_derivative(&self, s: usize, k: usize, idx: &MultiIndex) -> RationalFunction {
        let key = (s, k, *idx);
        if let Some(d) = self.u_derivs.lock().expect("lock").get(&key) {
            return d.clone();
        }
        let base = self.chart.u(s)[k].clone();
        let d = DerivativeCache::new(&base).get(idx);
        self.u_derivs.lock().expect("lock").insert(key, d.clone());
        d
    }

    /// Clean operators `A_0..=A_upto` of `L_a`.
    fn clean_operators(&self, a: &RationalFunction, upto: usize) -> Result<Operators> {
        let key = a.key();
        let prefix = self.cache.lock().expect("lock").get(&key).cloned();
        if let Some(ops) = &prefix {
            if ops.len() > upto {
                return Ok(ops.clone());
            }
        }
        let mut ops: Vec<DiffOperator> = match prefix {
            Some(p) => (*p).clone(),
            None => vec![DiffOperator::multiplication(a.clone())],
        };
        if a.is_constant() {
            ops.resize(upto + 1, DiffOperator::zero());
        }
        let n = self.dimension();
        while ops.len() <= upto {
            let r = ops.len();
            let mut rhs = Vec::with_capacity(n);
            for k in 0..n {
                let mut t = ops[r - 1].coefficient_derivative(Var::Z(k));
                for s in 1..r {
                    if self.chart.u(s)[k].is_zero() || ops[r - s].is_zero() {
                        continue;
                    }
                    let c =
                        ops[r - s].commutator_with_multiplication(|m| self.u_derivative(s, k, m));
                    t = t.sub(&c);
                }
                rhs.push(t);
            }
            let next = self.solve_commutant(rhs, r)?;
            ops.push(next);
        }
        let ops = Arc::new(ops);
        let mut cache = self.cache.lock().expect("lock");
        let keep = cache.get(&key).is_some_and(|old| old.len() >= ops.len());
        if !keep {
            cache.insert(key, ops.clone());
        }
        Ok(ops)
    }

    /// Solve `[A, m(u^(0)_k)] = rhs_k` for all `k` with `A(1) = 0`.
    fn solve_commutant(&self, mut residual: Vec<DiffOperator>, r: usize) -> Result<DiffOperator> {
        let n = self.dimension();
        let top = residual.iter().filter_map(|op| op.order()).max();
        let Some(top) = top else {
            return Ok(DiffOperator::zero());
        };
        let wvars: Vec<Var> = (0..n).map(Var::W).collect();
        if residual.iter().any(|op| !op.only_in(&wvars)) {
            return Err(Error::Internal(format!(
                "commutant equation at order {r} involves z-derivatives"
            )));
        }
        let mut out = DiffOperator::zero();
        for d in (1..=top + 1).rev() {
            let parts: Vec<DiffOperator> = residual
                .iter()
                .map(|op| op.homogeneous_part(d - 1))
                .collect();
            if parts.iter().all(|p| p.is_zero()) {
                continue;
            }
            let inv_d = Scalar::recip_int(d as u64);
            let mut sigma = DiffOperator::zero();
            for l in 0..n {
                for (k, part) in parts.iter().enumerate() {
                    let h = &self.ginv[l][k];
                    if h.is_zero() {
                        continue;
                    }
                    let factor = h.scale(&inv_d);
                    for (idx, c) in part.terms() {
                        sigma.add_term(idx.mul(&w_index(l)), c.mul(&factor));
                    }
                }
            }
            for (k, res) in residual.iter_mut().enumerate() {
                let c = sigma.commutator_with_multiplication(|m| self.u_derivative(0, k, m));
                *res = res.sub(&c);
                if !res.homogeneous_part(d - 1).is_zero() {
                    return Err(Error::RecursionSingular { order: r });
                }
            }
            out = out.add(&sigma);
        }
        if residual.iter().any(|res| !res.is_zero()) {
            return Err(Error::RecursionSingular { order: r });
        }
        if out.order().is_some_and(|o| o as usize > r) {
            return Err(Error::Internal(format!(
                "operator at order {r} exceeds the order bound"
            )));
        }
        Ok(out)
    }

    /// Operators `A_0..=A_upto` of `L_a` as used by this product.
    pub fn operators(&self, a: &RationalFunction, upto: usize) -> Result<Operators> {
        let ops = self.clean_operators(a, upto)?;
        match &self.perturbation {
            Some(p) if upto >= 2 => {
                let da = a.derivative(Var::Z(0));
                if da.is_zero() {
                    return Ok(ops);
                }
                let mut v = (*ops).clone();
                v.truncate(upto + 1);
                v[2].add_term(w_index(0).mul(&w_index(0)), da.scale(&p.coefficient));
                Ok(Arc::new(v))
            }
            _ => Ok(ops),
        }
    }

    /// Order pieces of `L_a` for a series `a`, up to the product order.
    pub fn left_mult_operator(&self, a: &Series<RationalFunction>) -> Result<Vec<DiffOperator>> {
        let order = self.order;
        let mut out = vec![DiffOperator::zero(); order + 1];
        for s in 0..=order {
            let a_s = a.coeff_or_zero(s);
            if a_s.is_zero() {
                continue;
            }
            let ops = self.operators(&a_s, order - s)?;
            for t in 0..=order - s {
                out[s + t] = out[s + t].add(&ops[t]);
            }
        }
        Ok(out)
    }

    /// `a * b` truncated at `order`.
    pub fn star_to(
        &self,
        a: &Series<RationalFunction>,
        b: &Series<RationalFunction>,
        order: usize,
    ) -> Result<Series<RationalFunction>> {
        let b_coeffs: Vec<RationalFunction> = (0..=order).map(|q| b.coeff_or_zero(q)).collect();
        let mut caches: Vec<DerivativeCache<'_>> =
            b_coeffs.iter().map(DerivativeCache::new).collect();
        let mut out = vec![RationalFunction::zero(); order + 1];
        for s in 0..=order {
            let a_s = a.coeff_or_zero(s);
            if a_s.is_zero() {
                continue;
            }
            let ops = self.operators(&a_s, order - s)?;
            for t in 0..=order - s {
                if ops[t].is_zero() {
                    continue;
                }
                for q in 0..=order - s - t {
                    if b_coeffs[q].is_zero() {
                        continue;
                    }
                    let term = ops[t].apply_cached(&mut caches[q]);
                    out[s + t + q] = out[s + t + q].add(&term);
                }
            }
        }
        Ok(Series::from_coeffs(out, order))
    }

    pub fn star(
        &self,
        a: &Series<RationalFunction>,
        b: &Series<RationalFunction>,
    ) -> Result<Series<RationalFunction>> {
        self.star_to(a, b, self.order)
    }

    /// Product of two plain functions.
    pub fn star_fn(
        &self,
        a: &RationalFunction,
        b: &RationalFunction,
    ) -> Result<Series<RationalFunction>> {
        self.star(
            &series_of(a.clone(), self.order),
            &series_of(b.clone(), self.order),
        )
    }

    /// `a * b - b * a`.
    pub fn ad_star(
        &self,
        a: &Series<RationalFunction>,
        b: &Series<RationalFunction>,
    ) -> Result<Series<RationalFunction>> {
        Ok(self.star(a, b)?.sub(&self.star(b, a)?))
    }

    /// `(1/v)(a * b - b * a)` to the product order, computed one order deeper.
    pub fn commutator_over_nu(
        &self,
        a: &Series<RationalFunction>,
        b: &Series<RationalFunction>,
    ) -> Result<Series<RationalFunction>> {
        let deep = self.order + 1;
        let c = self.star_to(a, b, deep)?.sub(&self.star_to(b, a, deep)?);
        if !c.coeff(0).is_zero() {
            return Err(Error::Internal(
                "commutator has an order-0 part".to_string(),
            ));
        }
        Ok(c.unshift().with_order(self.order))
    }

    fn monomial_list(&self, dmax: usize) -> Vec<RationalFunction> {
        monomials(self.dimension(), dmax as u16)
            .into_iter()
            .map(RationalFunction::monomial)
            .collect()
    }

    /// `(a * b) * c = a * (b * c)` for all monomial triples with exponents up to `dmax`.
    pub fn verify_associativity(&self, dmax: usize) -> Result<Certificate> {
        let mons = self.monomial_list(dmax);
        let m = mons.len();
        let order = self.order;
        let s = |f: &RationalFunction| series_of(f.clone(), order);
        let pairs = par_map(m * m, |i| self.star(&s(&mons[i / m]), &s(&mons[i % m])))?;
        let witness = first_failure(m * m * m, |idx| {
            let (i, j, k) = (idx / (m * m), (idx / m) % m, idx % m);
            let left = self.star(&pairs[i * m + j], &s(&mons[k]))?;
            let right = self.star(&s(&mons[i]), &pairs[j * m + k])?;
            Ok(left.first_difference(&right).map(|o| {
                Witness::series(
                    format!("({}) * ({}) * ({})", mons[i], mons[j], mons[k]),
                    o,
                    &left,
                    &right,
                )
            }))
        })?;
        Ok(Certificate::from_witness(
            "associativity",
            m * m * m,
            witness,
        ))
    }

    /// Antiholomorphic left factors and holomorphic right factors multiply pointwise.
    pub fn verify_wick_type(&self) -> Result<Certificate> {
        let n = self.dimension();
        let mons = monomials(n, self.order as u16);
        let holo = |m: &Monomial| (0..n).all(|l| m.exponent(Var::W(l)) == 0);
        let anti = |m: &Monomial| (0..n).all(|k| m.exponent(Var::Z(k)) == 0);
        let cases: Vec<(Monomial, Monomial)> = mons
            .iter()
            .flat_map(|a| mons.iter().map(move |b| (*a, *b)))
            .filter(|(a, b)| anti(a) || holo(b))
            .collect();
        let witness = first_failure(cases.len(), |i| {
            let (a, b) = (
                RationalFunction::monomial(cases[i].0),
                RationalFunction::monomial(cases[i].1),
            );
            let prod = self.star_fn(&a, &b)?;
            let expected = series_of(a.mul(&b), self.order);
            Ok(prod
                .first_difference(&expected)
                .map(|o| Witness::series(format!("({a}) * ({b})"), o, &prod, &expected)))
        })?;
        Ok(Certificate::from_witness("wick type", cases.len(), witness))
    }

    fn u_series(&self, k: usize) -> Series<RationalFunction> {
        Series::from_coeffs(
            (0..=self.order)
                .map(|s| self.chart.u(s)[k].clone())
                .collect(),
            self.order,
        )
    }

    fn v_series(&self, l: usize) -> Option<Series<RationalFunction>> {
        self.chart.has_v().then(|| {
            Series::from_coeffs(
                (0..=self.order)
                    .map(|s| self.chart.v(s).expect("v present")[l].clone())
                    .collect(),
                self.order,
            )
        })
    }

    /// `a * u_k = a u_k + v d_{z_k} a`, and `v_l * a = v_l a + v d_{w_l} a` when `v` is known,
    /// for all monomials `a` with exponents up to the product order.
    pub fn verify_defining_relations(&self) -> Result<Certificate> {
        let n = self.dimension();
        let mons = self.monomial_list(self.order);
        let m = mons.len();
        let with_v = self.chart.has_v();
        let per = if with_v { 2 * n } else { n };
        let witness = first_failure(m * per, |idx| {
            let a = &mons[idx / per];
            let j = idx % per;
            let sa = series_of(a.clone(), self.order);
            let (prod, expected, case) = if j < n {
                let u = self.u_series(j);
                let prod = self.star(&sa, &u)?;
                let expected =
                    u.scale(a)
                        .add(&Series::monomial(a.derivative(Var::Z(j)), 1, self.order));
                (prod, expected, format!("({a}) * u{}", j + 1))
            } else {
                let l = j - n;
                let v = self.v_series(l).expect("v present");
                let prod = self.star(&v, &sa)?;
                let expected =
                    v.scale(a)
                        .add(&Series::monomial(a.derivative(Var::W(l)), 1, self.order));
                (prod, expected, format!("v{} * ({a})", l + 1))
            };
            Ok(prod
                .first_difference(&expected)
                .map(|o| Witness::series(case, o, &prod, &expected)))
        })?;
        Ok(Certificate::from_witness(
            "defining relations",
            m * per,
            witness,
        ))
    }

    /// Every cached operator `A_r` differentiates only in `w` and has order at most `r`.
    pub fn order_bound_holds(&self) -> bool {
        let wvars: Vec<Var> = (0..self.dimension()).map(Var::W).collect();
        let cache = self.cache.lock().expect("lock");
        cache.values().all(|ops| {
            ops.iter()
                .enumerate()
                .all(|(r, op)| op.only_in(&wvars) && op.order().is_none_or(|o| o as usize <= r))
        })
    }

    /// Recover the Karabegov form from the product alone, orders `0..=N`.
    ///
    /// The functions `f = u_k` are characterized by `z_j * f = z_j f + v delta_{jk}`.
    /// Only the `w`-gradients `G_l = d_{w_l} f` enter, and the first-order part of
    /// `L_{z_j}` is invertible, so the gradients are solved order by order.
    pub fn extract_karabegov(&self) -> Result<Vec<Form>> {
        let n = self.dimension();
        let order = self.order;
        let ops: Vec<Operators> = (0..n)
            .map(|j| self.operators(&RationalFunction::var(Var::Z(j)), order + 1))
            .collect::<Result<_>>()?;
        let m: Vec<Vec<RationalFunction>> = (0..n)
            .map(|j| (0..n).map(|l| ops[j][1].coefficient(&w_index(l))).collect())
            .collect();
        let minv = inverse_rational(&m)?;
        // grads[r][k][l] = d_{w_l} of the order-r part of u_k
        let mut grads: Vec<Vec<Vec<RationalFunction>>> = Vec::with_capacity(order + 1);
        let mut forms = Vec::with_capacity(order + 1);
        for r in 0..=order {
            let mut g_r = vec![vec![RationalFunction::zero(); n]; n];
            for (k, row) in g_r.iter_mut().enumerate() {
                let mut rhs = Vec::with_capacity(n);
                for (j, ops_j) in ops.iter().enumerate() {
                    let mut acc = if j == k && r == 0 {
                        RationalFunction::one()
                    } else {
                        RationalFunction::zero()
                    };
                    for t in 2..=r + 1 {
                        let q = r + 1 - t;
                        acc = acc.sub(&apply_through_gradients(&ops_j[t], &grads[q][k])?);
                    }
                    rhs.push(acc);
                }
                for (l, entry) in row.iter_mut().enumerate() {
                    let mut acc = RationalFunction::zero();
                    for (j, rj) in rhs.iter().enumerate() {
                        acc = acc.add(&minv[l][j].mul(rj));
                    }
                    *entry = acc;
                }
            }
            forms.push(Form::from_11(n, &g_r));
            grads.push(g_r);
        }
        Ok(forms)
    }

    /// Round trip: the extracted form equals the chart's Karabegov form at every order.
    pub fn verify_round_trip(&self) -> Result<Certificate> {
        let extracted = self.extract_karabegov()?;
        let expected = self.chart.karabegov_form(self.order);
        let witness = (0..=self.order)
            .find(|&s| !extracted[s].equals(&expected[s]))
            .map(|s| {
                Witness::new(
                    "extracted Karabegov form",
                    Some(s),
                    extracted[s].render(),
                    expected[s].render(),
                )
            });
        Ok(Certificate::from_witness(
            "round trip",
            self.order + 1,
            witness,
        ))
    }
}

/// `A(f)` for `A` with `A(1) = 0`, knowing only `d_{w_l} f` for each `l`.
fn apply_through_gradients(
    op: &DiffOperator,
    grad: &[RationalFunction],
) -> Result<RationalFunction> {
    let n = grad.len();
    let mut caches: Vec<DerivativeCache<'_>> = grad.iter().map(DerivativeCache::new).collect();
    let mut acc = RationalFunction::zero();
    for (idx, c) in op.terms() {
        let Some(l) = (0..n).find(|&l| idx.exponent(Var::W(l)) > 0) else {
            return Err(Error::Internal(
                "operator term without a w-derivative".to_string(),
            ));
        };
        if (0..n).any(|k| idx.exponent(Var::Z(k)) > 0) {
            return Err(Error::Internal("operator differentiates in z".to_string()));
        }
        let rest = w_index(l).quotient_of(idx);
        acc = acc.add(&c.mul(&caches[l].get(&rest)));
    }
    Ok(acc)
}
