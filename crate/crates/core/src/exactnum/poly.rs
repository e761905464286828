//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Variables live in fixed slots: `z1..z3` occupy slots 0..3 and `w1..w3`
//! occupy slots 3..6, so polynomials from charts of different dimension
//! share one representation. Lexicographic order on exponent vectors puts
//! `z1 > z2 > z3 > w1 > w2 > w3`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::Scalar;

/// Largest supported chart dimension.
pub const MAX_DIM: usize = 3;
/// Number of variable slots (`z` block followed by `w` block).
pub const NUM_SLOTS: usize = 2 * MAX_DIM;

/// A chart coordinate: `Z(k)` is `z_{k+1}`, `W(l)` is `w_{l+1}` (the conjugate of `z_{l+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    Z(usize),
    W(usize),
}

impl Var {
    pub fn slot(self) -> usize {
        match self {
            Var::Z(k) => k,
            Var::W(l) => MAX_DIM + l,
        }
    }

    pub fn from_slot(slot: usize) -> Var {
        if slot < MAX_DIM {
            Var::Z(slot)
        } else {
            Var::W(slot - MAX_DIM)
        }
    }

    /// The variable with the opposite holomorphic type and the same index.
    pub fn mirror(self) -> Var {
        match self {
            Var::Z(k) => Var::W(k),
            Var::W(l) => Var::Z(l),
        }
    }

    pub fn is_holomorphic(self) -> bool {
        matches!(self, Var::Z(_))
    }

    /// All `2n` variables of an `n`-dimensional chart, `z` block first.
    pub fn all(n: usize) -> Vec<Var> {
        (0..n).map(Var::Z).chain((0..n).map(Var::W)).collect()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(k) => write!(f, "z{}", k + 1),
            Var::W(l) => write!(f, "w{}", l + 1),
        }
    }
}

/// Dense exponent vector over all variable slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub [u16; NUM_SLOTS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NUM_SLOTS])
    }

    pub fn var(v: Var) -> Self {
        let mut m = Monomial::one();
        m.0[v.slot()] = 1;
        m
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut out = [0u16; NUM_SLOTS];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[i]
                .checked_add(o.0[i])
                .expect("monomial exponent overflow");
        }
        Monomial(out)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let mut out = [0u16; NUM_SLOTS];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = o.0[i] - self.0[i];
        }
        Monomial(out)
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut out = [0u16; NUM_SLOTS];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[i].min(o.0[i]);
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0[v.slot()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Swap the `z` and `w` blocks.
    pub fn mirrored(&self) -> Monomial {
        let mut out = [0u16; NUM_SLOTS];
        for k in 0..MAX_DIM {
            out[k] = self.0[MAX_DIM + k];
            out[MAX_DIM + k] = self.0[k];
        }
        Monomial(out)
    }

    pub(crate) fn render(&self) -> String {
        let mut parts = Vec::new();
        for slot in 0..NUM_SLOTS {
            let e = self.0[slot];
            if e == 0 {
                continue;
            }
            let v = Var::from_slot(slot);
            if e == 1 {
                parts.push(v.to_string());
            } else {
                parts.push(format!("{v}^{e}"));
            }
        }
        parts.join("*")
    }
}

/// A polynomial as a sorted list of `(monomial, coefficient)` terms with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Polynomial {
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial {
                terms: vec![(m, c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        Polynomial::monomial(Monomial::var(v), Scalar::one())
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(existing) => *existing = &*existing + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.last()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(v))
            .max()
            .unwrap_or(0)
    }

    /// Whether the polynomial involves variable `v`.
    pub fn depends_on(&self, v: Var) -> bool {
        self.degree_in(v) > 0
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        match self.terms.binary_search_by(|(k, _)| k.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    fn merge(&self, o: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let take_left =
                j >= o.terms.len() || (i < self.terms.len() && self.terms[i].0 < o.terms[j].0);
            let take_right =
                i >= self.terms.len() || (j < o.terms.len() && o.terms[j].0 < self.terms[i].0);
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                let (m, c) = &o.terms[j];
                out.push((*m, if negate { -c } else { c.clone() }));
                j += 1;
            } else {
                let c = if negate {
                    &self.terms[i].1 - &o.terms[j].1
                } else {
                    &self.terms[i].1 + &o.terms[j].1
                };
                if !c.is_zero() {
                    out.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Polynomial { terms: out }
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.merge(o, true)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        if s.is_one() {
            return self.clone();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        // Multiplying by a monomial preserves the term order.
        Polynomial {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.mul_monomial(m, c);
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Scalar> =
            HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e = &*e + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Polynomial {
        let slot = v.slot();
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[slot];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[slot] -= 1;
            terms.push((dm, c * &Scalar::from_int(e as i64)));
        }
        // Lowering one exponent can reorder terms.
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms }
    }

    /// Exact division: `Some(q)` with `self = q * divisor`, or `None` when the divisor does not divide.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = divisor.leading()?.clone();
        if divisor.terms.len() == 1 {
            let inv = lc.inv().ok()?;
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                terms.push((lm.quotient_of(m), c * &inv));
            }
            return Some(Polynomial { terms });
        }
        let inv = lc.inv().ok()?;
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c * &inv;
            rem = rem.sub(&divisor.mul_monomial(&qm, &qc));
            quotient.push((qm, qc));
        }
        quotient.sort_by(|a, b| a.0.cmp(&b.0));
        Some(Polynomial { terms: quotient })
    }

    /// Write a monic polynomial as `q^k` with `k` maximal; `k = 1` when it is not a proper power.
    pub fn perfect_power(&self) -> (Polynomial, u32) {
        let Some((lm, _)) = self.leading() else {
            return (self.clone(), 1);
        };
        let d = self.total_degree();
        let g = lm.0.iter().fold(0u32, |g, &e| gcd(g, e as u32));
        let g = gcd(g, d);
        for k in (2..=g).rev() {
            if g % k == 0 {
                if let Some(q) = self.root(k) {
                    return (q, k);
                }
            }
        }
        (self.clone(), 1)
    }

    /// Monic `k`-th root by matching leading terms, verified at the end.
    fn root(&self, k: u32) -> Option<Polynomial> {
        let (lm, lc) = self.leading()?;
        if !lc.is_one() {
            return None;
        }
        let mut head = Monomial::one();
        for (slot, e) in lm.0.iter().enumerate() {
            head.0[slot] = e / k as u16;
        }
        let bound = self.total_degree() / k;
        let head_pow = (0..k - 1).fold(Monomial::one(), |acc, _| acc.mul(&head));
        let inv_k = Scalar::from_int(k as i64).inv().ok()?;
        let mut q = Polynomial::monomial(head, Scalar::one());
        for _ in 0..=self.terms.len() * 4 + 16 {
            let r = self.sub(&q.pow(k));
            let Some((rm, rc)) = r.leading().cloned() else {
                return Some(q);
            };
            if !head_pow.divides(&rm) {
                return None;
            }
            let tm = head_pow.quotient_of(&rm);
            if tm >= head || tm.degree() > bound {
                return None;
            }
            q = q.add(&Polynomial::monomial(tm, &rc * &inv_k));
        }
        None
    }

    /// Greatest common monomial factor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(),
            Some((first, _)) => it.fold(*first, |g, (m, _)| g.gcd(m)),
        }
    }

    /// Scale so the leading coefficient is one; returns `(leading_coefficient, monic)`.
    pub fn make_monic(&self) -> (Scalar, Polynomial) {
        match self.leading() {
            None => (Scalar::one(), Polynomial::zero()),
            Some((_, lc)) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                (lc.clone(), self.scale(&inv))
            }
        }
    }

    /// Swap `z` and `w` blocks and conjugate coefficients (formal complex conjugation).
    pub fn conjugate(&self) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.mirrored(), c.conj())))
    }

    /// Variables occurring with positive exponent.
    pub fn variables(&self) -> Vec<Var> {
        (0..NUM_SLOTS)
            .filter(|&s| self.terms.iter().any(|(m, _)| m.0[s] > 0))
            .map(Var::from_slot)
            .collect()
    }

    pub(crate) fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = if c.is_negative_real() {
                (true, -c)
            } else if num_traits::Zero::is_zero(c.re()) && num_traits::Signed::is_negative(c.im()) {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render();
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if mag.is_compound() {
                out.push_str(&format!("({mag})*{mono}"));
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}


fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
