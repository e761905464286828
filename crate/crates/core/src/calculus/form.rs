//! Exterior forms on a chart, stored over the basis `dx^S` for increasing
//! slot sets `S` (all `dz` slots before all `dw` slots).

use std::collections::BTreeMap;
use std::fmt;

use super::field::VectorField;
use crate::error::{Error, Result};
use crate::exactnum::{RationalFunction, Scalar, Var, MAX_DIM, NUM_SLOTS};

/// Bit `s` set means `dx^s` is a factor, `s` being a variable slot.
pub type Basis = u8;

#[derive(Clone, Debug)]
pub struct Form {
    n: usize,
    coeffs: BTreeMap<Basis, RationalFunction>,
}

fn slots(b: Basis) -> impl Iterator<Item = usize> {
    (0..NUM_SLOTS).filter(move |s| b & (1 << s) != 0)
}

/// Sign of moving `dx^slot` in front of `dx^b`.
fn insertion_sign(b: Basis, slot: usize) -> i64 {
    if (b & ((1u8 << slot) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Form {
    pub fn zero(n: usize) -> Self {
        Form {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(n: usize, f: RationalFunction) -> Self {
        let mut out = Form::zero(n);
        out.add_term(0, f);
        out
    }

    /// `f dx^v`.
    pub fn one_form(n: usize, v: Var, f: RationalFunction) -> Self {
        let mut out = Form::zero(n);
        out.add_term(1 << v.slot(), f);
        out
    }

    /// `sum F_kl dz^k ^ dw^l`.
    pub fn from_11(n: usize, coeffs: &[Vec<RationalFunction>]) -> Self {
        let mut out = Form::zero(n);
        for (k, row) in coeffs.iter().enumerate() {
            for (l, c) in row.iter().enumerate() {
                out.add_term(basis_11(k, l), c.clone());
            }
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, b: Basis, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&b) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(b, sum);
        }
    }

    pub fn coefficient(&self, b: Basis) -> RationalFunction {
        self.coeffs
            .get(&b)
            .cloned()
            .unwrap_or_else(RationalFunction::zero)
    }

    /// Coefficient of `dz^k ^ dw^l`.
    pub fn coefficient_11(&self, k: usize, l: usize) -> RationalFunction {
        self.coefficient(basis_11(k, l))
    }

    /// Coefficient of `dx^v` in a 1-form.
    pub fn coefficient_1(&self, v: Var) -> RationalFunction {
        self.coefficient(1 << v.slot())
    }

    pub fn terms(&self) -> impl Iterator<Item = (Basis, &RationalFunction)> {
        self.coeffs.iter().map(|(b, c)| (*b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether all nonzero components have total degree `k`.
    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.coeffs.keys().all(|b| b.count_ones() == k)
    }

    /// `(p, q)` types occurring with nonzero coefficients.
    pub fn types(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self.coeffs.keys().map(|&b| bidegree(b)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_type(&self, p: u32, q: u32) -> bool {
        self.coeffs.keys().all(|&b| bidegree(b) == (p, q))
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut out = self.clone();
        for (b, c) in &o.coeffs {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Form) -> Form {
        let mut out = self.clone();
        for (b, c) in &o.coeffs {
            out.add_term(*b, c.neg());
        }
        out
    }

    pub fn neg(&self) -> Form {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        self.map(|c| c.scale(s))
    }

    pub fn mul_function(&self, f: &RationalFunction) -> Form {
        self.map(|c| c.mul(f))
    }

    fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Form {
        let mut out = Form::zero(self.n);
        for (b, c) in &self.coeffs {
            out.add_term(*b, f(c));
        }
        out
    }

    pub fn equals(&self, o: &Form) -> bool {
        self.sub(o).is_zero()
    }

    fn vars(&self) -> Vec<Var> {
        Var::all(self.n)
    }

    fn differential(&self, which: impl Fn(Var) -> bool) -> Form {
        let mut out = Form::zero(self.n);
        for (b, c) in &self.coeffs {
            for v in self.vars().into_iter().filter(|&v| which(v)) {
                let s = v.slot();
                if b & (1 << s) != 0 {
                    continue;
                }
                let dc = c.derivative(v);
                if dc.is_zero() {
                    continue;
                }
                let sign = Scalar::from_int(insertion_sign(*b, s));
                out.add_term(b | (1 << s), dc.scale(&sign));
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        self.differential(|_| true)
    }

    /// Holomorphic part of `d`.
    pub fn del(&self) -> Form {
        self.differential(Var::is_holomorphic)
    }

    /// Antiholomorphic part of `d`.
    pub fn del_bar(&self) -> Form {
        self.differential(|v| !v.is_holomorphic())
    }

    pub fn wedge(&self, o: &Form) -> Form {
        let mut out = Form::zero(self.n.max(o.n));
        for (a, ca) in &self.coeffs {
            for (b, cb) in &o.coeffs {
                if a & b != 0 {
                    continue;
                }
                // Count transpositions needed to sort the concatenation.
                let mut sign = 1i64;
                for s in slots(*b) {
                    if (a >> s).count_ones() % 2 == 1 {
                        sign = -sign;
                    }
                }
                out.add_term(a | b, ca.mul(cb).scale(&Scalar::from_int(sign)));
            }
        }
        out
    }

    /// Contraction in the first slot; fails on 0-forms.
    pub fn interior(&self, x: &VectorField) -> Result<Form> {
        if self.coeffs.keys().any(|&b| b == 0) {
            return Err(Error::InvalidInput(
                "interior product of a degree-0 form".to_string(),
            ));
        }
        Ok(self.interior_unchecked(x))
    }

    fn interior_unchecked(&self, x: &VectorField) -> Form {
        let mut out = Form::zero(self.n);
        for (b, c) in &self.coeffs {
            for (m, s) in slots(*b).enumerate() {
                let xs = x.component(Var::from_slot(s));
                if xs.is_zero() {
                    continue;
                }
                let sign = if m % 2 == 0 {
                    Scalar::one()
                } else {
                    Scalar::from_int(-1)
                };
                out.add_term(b & !(1 << s), c.mul(&xs).scale(&sign));
            }
        }
        out
    }

    /// Lie derivative by the Cartan formula.
    pub fn lie(&self, x: &VectorField) -> Form {
        let mut out = self.d().interior_unchecked(x);
        let positive = self.drop_functions();
        out = out.add(&positive.interior_unchecked(x).d());
        out
    }

    fn drop_functions(&self) -> Form {
        let mut out = self.clone();
        out.coeffs.remove(&0);
        out
    }

    /// `F(X, Y) = i_Y i_X F` for a 2-form.
    pub fn evaluate(&self, x: &VectorField, y: &VectorField) -> RationalFunction {
        self.interior_unchecked(x)
            .interior_unchecked(y)
            .coefficient(0)
    }

    /// Scalar value of a 0-form part.
    pub fn function_part(&self) -> RationalFunction {
        self.coefficient(0)
    }

    /// Pullback along a substitution of all `2n` coordinates.
    pub fn pullback(&self, map: &super::chartmap::ChartMap) -> Result<Form> {
        let n = self.n;
        let sub = map.substitution();
        // dphi^s for every variable slot of the chart
        let mut dphi: [Option<Form>; NUM_SLOTS] = Default::default();
        for v in Var::all(n) {
            let image = map.image(v);
            dphi[v.slot()] = Some(Form::function(n, image).d());
        }
        let mut out = Form::zero(n);
        for (b, c) in &self.coeffs {
            let mut acc = Form::function(n, c.substitute(&sub)?);
            for s in slots(*b) {
                acc = acc.wedge(dphi[s].as_ref().expect("chart variable"));
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Canonical text such as `(1/(z1*w1 + 1)^2)*dz1^dw1`.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|(b, c)| {
                let basis: Vec<String> = slots(*b)
                    .map(|s| format!("d{}", Var::from_slot(s)))
                    .collect();
                if basis.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", basis.join("^"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn basis_11(k: usize, l: usize) -> Basis {
    (1 << Var::Z(k).slot()) | (1 << Var::W(l).slot())
}

fn bidegree(b: Basis) -> (u32, u32) {
    let zmask: u8 = (1 << MAX_DIM) - 1;
    ((b & zmask).count_ones(), (b & !zmask).count_ones())
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
