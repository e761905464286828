//! Linear differential operators `sum_B c_B d^B` with rational coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::exactnum::{Monomial, RationalFunction, Var, NUM_SLOTS};

/// Multi-index of partial derivatives; slot layout matches [`Monomial`].
pub type MultiIndex = Monomial;

#[derive(Clone, Debug, Default)]
pub struct DiffOperator {
    terms: BTreeMap<MultiIndex, RationalFunction>,
}

/// `d^idx f`, built up one variable at a time and memoized.
pub struct DerivativeCache<'a> {
    base: &'a RationalFunction,
    memo: HashMap<MultiIndex, RationalFunction>,
}

impl<'a> DerivativeCache<'a> {
    pub fn new(base: &'a RationalFunction) -> Self {
        DerivativeCache {
            base,
            memo: HashMap::new(),
        }
    }

    pub fn get(&mut self, idx: &MultiIndex) -> RationalFunction {
        if idx.is_one() {
            return self.base.clone();
        }
        if let Some(v) = self.memo.get(idx) {
            return v.clone();
        }
        let slot = (0..NUM_SLOTS)
            .rev()
            .find(|&s| idx.0[s] > 0)
            .expect("non-trivial index");
        let mut lower = *idx;
        lower.0[slot] -= 1;
        let d = self.get(&lower).derivative(Var::from_slot(slot));
        self.memo.insert(*idx, d.clone());
        d
    }
}

impl DiffOperator {
    pub fn zero() -> Self {
        DiffOperator::default()
    }

    pub fn identity() -> Self {
        DiffOperator::multiplication(RationalFunction::one())
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: RationalFunction) -> Self {
        DiffOperator::term(f, MultiIndex::one())
    }

    pub fn term(coef: RationalFunction, idx: MultiIndex) -> Self {
        let mut op = DiffOperator::zero();
        op.add_term(idx, coef);
        op
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, RationalFunction)>) -> Self {
        let mut op = DiffOperator::zero();
        for (idx, c) in terms {
            op.add_term(idx, c);
        }
        op
    }

    pub fn add_term(&mut self, idx: MultiIndex, coef: RationalFunction) {
        if coef.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            Some(old) => {
                let sum = old.add(&coef);
                if !sum.is_zero() {
                    self.terms.insert(idx, sum);
                }
            }
            None => {
                self.terms.insert(idx, coef);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> RationalFunction {
        self.terms
            .get(idx)
            .cloned()
            .unwrap_or_else(RationalFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total derivative order, `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Whether every term differentiates only in the given variables.
    pub fn only_in(&self, vars: &[Var]) -> bool {
        self.terms
            .keys()
            .all(|m| (0..NUM_SLOTS).all(|s| m.0[s] == 0 || vars.contains(&Var::from_slot(s))))
    }

    pub fn add(&self, o: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (idx, c) in &o.terms {
            out.add_term(*idx, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (idx, c) in &o.terms {
            out.add_term(*idx, c.neg());
        }
        out
    }

    /// Left multiplication of every coefficient by `f`.
    pub fn mul_function(&self, f: &RationalFunction) -> DiffOperator {
        DiffOperator::from_terms(self.terms.iter().map(|(idx, c)| (*idx, c.mul(f))))
    }

    /// Terms of exactly the given total order.
    pub fn homogeneous_part(&self, order: u32) -> DiffOperator {
        DiffOperator {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Differentiate every coefficient in `v`.
    pub fn coefficient_derivative(&self, v: Var) -> DiffOperator {
        DiffOperator::from_terms(self.terms.iter().map(|(idx, c)| (*idx, c.derivative(v))))
    }

    pub fn apply(&self, a: &RationalFunction) -> RationalFunction {
        let mut cache = DerivativeCache::new(a);
        self.apply_cached(&mut cache)
    }

    pub fn apply_cached(&self, cache: &mut DerivativeCache<'_>) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for (idx, c) in &self.terms {
            let d = cache.get(idx);
            if !d.is_zero() {
                acc = acc.add(&c.mul(&d));
            }
        }
        acc
    }

    /// `[self, m(u)]` given the derivatives of `u`:
    /// `sum_B sum_{0 < C <= B} binom(B, C) c_B (d^C u) d^(B - C)`.
    pub fn commutator_with_multiplication(
        &self,
        mut du: impl FnMut(&MultiIndex) -> RationalFunction,
    ) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for (b, c) in &self.terms {
            for sub in sub_indices(b) {
                if sub.is_one() {
                    continue;
                }
                let du = du(&sub);
                if du.is_zero() {
                    continue;
                }
                let coef = c
                    .mul(&du)
                    .scale(&crate::exactnum::Scalar::from_int(binomial(b, &sub) as i64));
                out.add_term(sub.quotient_of(b), coef);
            }
        }
        out
    }
}

/// All multi-indices `C <= B`, in increasing order.
pub fn sub_indices(b: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::one()];
    for s in 0..NUM_SLOTS {
        if b.0[s] == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (b.0[s] as usize + 1));
        for m in &out {
            for e in 0..=b.0[s] {
                let mut m2 = *m;
                m2.0[s] = e;
                next.push(m2);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Product of binomial coefficients `binom(B_s, C_s)`.
pub fn binomial(b: &MultiIndex, c: &MultiIndex) -> u64 {
    let mut acc = 1u64;
    for s in 0..NUM_SLOTS {
        let (n, k) = (b.0[s] as u64, c.0[s] as u64);
        let mut v = 1u64;
        for i in 0..k {
            v = v * (n - i) / (i + 1);
        }
        acc *= v;
    }
    acc
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(idx, c)| {
                let mut s = String::new();
                for slot in 0..NUM_SLOTS {
                    let e = idx.0[slot];
                    if e == 0 {
                        continue;
                    }
                    let v = Var::from_slot(slot);
                    if e == 1 {
                        s.push_str(&format!("d_{v}"));
                    } else {
                        s.push_str(&format!("d_{v}^{e}"));
                    }
                }
                if s.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{s}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_expr;

    fn p(s: &str) -> RationalFunction {
        parse_expr(s, 1).unwrap()
    }

    fn idx(z: u16, w: u16) -> MultiIndex {
        let mut m = MultiIndex::one();
        m.0[Var::Z(0).slot()] = z;
        m.0[Var::W(0).slot()] = w;
        m
    }

    #[test]
    fn application() {
        let d = DiffOperator::term(p("1"), idx(1, 0));
        assert!(d.apply(&p("z1^2*w1")).equals(&p("2*z1*w1")));
        assert!(DiffOperator::identity()
            .apply(&p("z1/(1+w1)"))
            .equals(&p("z1/(1+w1)")));
        let d = DiffOperator::term(p("w1"), idx(0, 1));
        assert!(d.apply(&p("z1*w1^2")).equals(&p("2*z1*w1^2")));
    }

    #[test]
    fn commutator_matches_direct_composition() {
        let op = DiffOperator::from_terms([(idx(0, 2), p("z1")), (idx(0, 1), p("w1"))]);
        let u = p("w1/(1+z1*w1)");
        let mut cache = DerivativeCache::new(&u);
        let comm = op.commutator_with_multiplication(|m| cache.get(m));
        let b = p("z1^2*w1^3 + w1");
        let direct = op.apply(&u.mul(&b)).sub(&u.mul(&op.apply(&b)));
        assert!(comm.apply(&b).equals(&direct));
    }
}
