//! Complex vector fields `X = chi^k d_{z_k} + chibar^l d_{w_l}`.

use crate::exactnum::{RationalFunction, Scalar, Var};

#[derive(Clone, Debug)]
pub struct VectorField {
    hol: Vec<RationalFunction>,
    antihol: Vec<RationalFunction>,
}

impl VectorField {
    pub fn new(hol: Vec<RationalFunction>, antihol: Vec<RationalFunction>) -> Self {
        assert_eq!(
            hol.len(),
            antihol.len(),
            "component blocks differ in length"
        );
        VectorField { hol, antihol }
    }

    pub fn zero(n: usize) -> Self {
        VectorField::new(
            vec![RationalFunction::zero(); n],
            vec![RationalFunction::zero(); n],
        )
    }

    /// The coordinate field `d/dv`.
    pub fn coordinate(n: usize, v: Var) -> Self {
        let mut x = VectorField::zero(n);
        x.set(v, RationalFunction::one());
        x
    }

    pub fn dimension(&self) -> usize {
        self.hol.len()
    }

    pub fn hol(&self) -> &[RationalFunction] {
        &self.hol
    }

    pub fn antihol(&self) -> &[RationalFunction] {
        &self.antihol
    }

    pub fn component(&self, v: Var) -> RationalFunction {
        let block = match v {
            Var::Z(k) => self.hol.get(k),
            Var::W(l) => self.antihol.get(l),
        };
        block.cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn set(&mut self, v: Var, f: RationalFunction) {
        match v {
            Var::Z(k) => self.hol[k] = f,
            Var::W(l) => self.antihol[l] = f,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.hol.iter().chain(&self.antihol).all(|c| c.is_zero())
    }

    /// `X(f)`.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for v in Var::all(self.dimension()) {
            let c = self.component(v);
            if c.is_zero() {
                continue;
            }
            let df = f.derivative(v);
            if !df.is_zero() {
                acc = acc.add(&c.mul(&df));
            }
        }
        acc
    }

    fn zip(
        &self,
        o: &VectorField,
        f: impl Fn(&RationalFunction, &RationalFunction) -> RationalFunction,
    ) -> VectorField {
        VectorField::new(
            self.hol.iter().zip(&o.hol).map(|(a, b)| f(a, b)).collect(),
            self.antihol
                .iter()
                .zip(&o.antihol)
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        self.zip(o, RationalFunction::add)
    }

    pub fn sub(&self, o: &VectorField) -> VectorField {
        self.zip(o, RationalFunction::sub)
    }

    pub fn scale(&self, s: &Scalar) -> VectorField {
        self.map(|c| c.scale(s))
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> VectorField {
        VectorField::new(
            self.hol.iter().map(&f).collect(),
            self.antihol.iter().map(&f).collect(),
        )
    }

    /// Lie bracket `[X, Y]`.
    pub fn bracket(&self, o: &VectorField) -> VectorField {
        let n = self.dimension();
        let mut out = VectorField::zero(n);
        for v in Var::all(n) {
            let c = self
                .apply(&o.component(v))
                .sub(&o.apply(&self.component(v)));
            out.set(v, c);
        }
        out
    }

    /// Image under the complex structure: `i chi - i chibar`.
    pub fn complex_structure(&self) -> VectorField {
        let i = Scalar::i();
        VectorField::new(
            self.hol.iter().map(|c| c.scale(&i)).collect(),
            self.antihol.iter().map(|c| c.scale(&-&i)).collect(),
        )
    }

    /// Holomorphic block depends on `z` only and antiholomorphic block on `w` only.
    /// Returns the first offending `(component, variable)` pair.
    pub fn holomorphy_defect(&self) -> Option<(Var, Var)> {
        let n = self.dimension();
        for k in 0..n {
            for l in 0..n {
                if !self.hol[k].derivative(Var::W(l)).is_zero() {
                    return Some((Var::Z(k), Var::W(l)));
                }
            }
        }
        for l in 0..n {
            for k in 0..n {
                if !self.antihol[l].derivative(Var::Z(k)).is_zero() {
                    return Some((Var::W(l), Var::Z(k)));
                }
            }
        }
        None
    }

    pub fn equals(&self, o: &VectorField) -> bool {
        self.sub(o).is_zero()
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for v in Var::all(self.dimension()) {
            let c = self.component(v);
            if !c.is_zero() {
                parts.push(format!("({c})*d_{v}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl std::fmt::Display for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}
