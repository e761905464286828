//! Holomorphic coordinate changes together with a verified inverse.

use crate::error::{Error, Result};
use crate::exactnum::{RationalFunction, Substitution, Var};

#[derive(Clone, Debug)]
pub struct ChartMap {
    n: usize,
    hol: Vec<RationalFunction>,
    antihol: Vec<RationalFunction>,
}

impl ChartMap {
    /// A map with explicit antiholomorphic images (defaults to the formal conjugate).
    pub fn new(hol: Vec<RationalFunction>, antihol: Option<Vec<RationalFunction>>) -> Result<Self> {
        let n = hol.len();
        let antihol =
            antihol.unwrap_or_else(|| hol.iter().map(RationalFunction::conjugate).collect());
        if antihol.len() != n {
            return Err(Error::InvalidInput(format!(
                "map has {n} holomorphic images but {} antiholomorphic images",
                antihol.len()
            )));
        }
        for (k, f) in hol.iter().enumerate() {
            if let Some(l) = (0..n).find(|&l| f.depends_on(Var::W(l))) {
                return Err(Error::InvalidInput(format!(
                    "image of z{} depends on w{}, so the map is not holomorphic",
                    k + 1,
                    l + 1
                )));
            }
        }
        for (l, f) in antihol.iter().enumerate() {
            if let Some(k) = (0..n).find(|&k| f.depends_on(Var::Z(k))) {
                return Err(Error::InvalidInput(format!(
                    "image of w{} depends on z{}, so the map is not holomorphic",
                    l + 1,
                    k + 1
                )));
            }
        }
        Ok(ChartMap { n, hol, antihol })
    }

    pub fn identity(n: usize) -> Self {
        ChartMap {
            n,
            hol: (0..n).map(|k| RationalFunction::var(Var::Z(k))).collect(),
            antihol: (0..n).map(|l| RationalFunction::var(Var::W(l))).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn image(&self, v: Var) -> RationalFunction {
        match v {
            Var::Z(k) => self.hol[k].clone(),
            Var::W(l) => self.antihol[l].clone(),
        }
    }

    pub fn substitution(&self) -> Substitution {
        let mut s = Substitution::identity();
        for v in Var::all(self.n) {
            s.set(v, self.image(v));
        }
        s
    }

    /// `f o phi`.
    pub fn pullback_function(&self, f: &RationalFunction) -> Result<RationalFunction> {
        f.substitute(&self.substitution())
    }

    /// `self o other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &ChartMap) -> Result<ChartMap> {
        let sub = other.substitution();
        let images = |block: &[RationalFunction]| -> Result<Vec<RationalFunction>> {
            block.iter().map(|f| f.substitute(&sub)).collect()
        };
        Ok(ChartMap {
            n: self.n,
            hol: images(&self.hol)?,
            antihol: images(&self.antihol)?,
        })
    }

    pub fn is_identity(&self) -> bool {
        Var::all(self.n)
            .into_iter()
            .all(|v| self.image(v).equals(&RationalFunction::var(v)))
    }

    /// Check that `inverse` undoes `self` on both sides.
    pub fn verify_inverse(&self, inverse: &ChartMap) -> Result<()> {
        let ok = self.compose(inverse)?.is_identity() && inverse.compose(self)?.is_identity();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "supplied inverse does not compose to the identity".to_string(),
            ))
        }
    }
}
