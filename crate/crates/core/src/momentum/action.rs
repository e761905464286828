use serde::Serialize;

use crate::calculus::VectorField;
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exactnum::{Ring, Scalar};

/// A finite-dimensional Lie algebra acting through vector fields.
///
/// `structure[j][k][i] = c^i_{jk}`, so `[xi_j, xi_k] = sum_i c^i_{jk} xi_i`.
#[derive(Clone, Debug)]
pub struct LieAction {
    structure: Vec<Vec<Vec<Scalar>>>,
    fields: Vec<VectorField>,
}

impl LieAction {
    /// Build from nonzero entries `(j, k, i, c)` meaning `[xi_j, xi_k]` contains `c xi_i` (0-based).
    /// The antisymmetric partner is filled in; contradicting entries are rejected.
    pub fn new(
        m: usize,
        entries: &[(usize, usize, usize, Scalar)],
        fields: Vec<VectorField>,
    ) -> Result<LieAction> {
        let mut c = vec![vec![vec![Scalar::zero(); m]; m]; m];
        let mut set = vec![vec![vec![false; m]; m]; m];
        for (j, k, i, v) in entries {
            let (j, k, i) = (*j, *k, *i);
            if j >= m || k >= m || i >= m {
                return Err(Error::InvalidInput(format!(
                    "structure constant index ({}, {}, {}) outside an algebra of dimension {m}",
                    j + 1,
                    k + 1,
                    i + 1
                )));
            }
            if j == k && !v.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "[xi{0}, xi{0}] must vanish",
                    j + 1
                )));
            }
            for (a, b, val) in [(j, k, v.clone()), (k, j, -v)] {
                if set[a][b][i] && c[a][b][i] != val {
                    return Err(Error::InvalidInput(format!(
                        "conflicting structure constants for [xi{}, xi{}] along xi{}",
                        a + 1,
                        b + 1,
                        i + 1
                    )));
                }
                set[a][b][i] = true;
                c[a][b][i] = val;
            }
        }
        Ok(LieAction {
            structure: c,
            fields,
        })
    }

    /// Build from a full constant table without filling or checking anything.
    pub fn from_table(structure: Vec<Vec<Vec<Scalar>>>, fields: Vec<VectorField>) -> LieAction {
        LieAction { structure, fields }
    }

    pub fn abelian(fields: Vec<VectorField>) -> LieAction {
        let m = fields.len();
        LieAction {
            structure: vec![vec![vec![Scalar::zero(); m]; m]; m],
            fields,
        }
    }

    pub fn dim(&self) -> usize {
        self.structure.len()
    }

    pub fn field(&self, i: usize) -> &VectorField {
        &self.fields[i]
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    /// Coefficients of `[xi_j, xi_k]` in the basis.
    pub fn bracket(&self, j: usize, k: usize) -> &[Scalar] {
        &self.structure[j][k]
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.structure[j][k][i]
    }

    pub fn is_abelian(&self) -> bool {
        self.structure
            .iter()
            .flatten()
            .flatten()
            .all(|c| c.is_zero())
    }

    /// `sum_i coeffs[i] * values[i]` for a value per basis element.
    pub fn combine<T: Ring>(
        coeffs: &[Scalar],
        values: &[T],
        scale: impl Fn(&T, &Scalar) -> T,
    ) -> T {
        // zero shaped like the values, so series keep their order
        let zero = values.first().map_or_else(T::zero, |v| v.sub(v));
        coeffs
            .iter()
            .zip(values)
            .filter(|(c, _)| !c.is_zero())
            .fold(zero, |acc, (c, v)| acc.add(&scale(v, c)))
    }

    /// The field `sum_i coeffs[i] X_i`.
    pub fn combine_fields(&self, coeffs: &[Scalar]) -> VectorField {
        let n = self.fields.first().map_or(0, |x| x.dimension());
        coeffs
            .iter()
            .zip(&self.fields)
            .filter(|(c, _)| !c.is_zero())
            .fold(VectorField::zero(n), |acc, (c, x)| acc.add(&x.scale(c)))
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ActionReport {
    pub checks: Vec<ActionCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl ActionReport {
    pub fn valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ActionCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    fn push(&mut self, name: String, passed: bool, detail: impl Into<String>) {
        self.checks.push(ActionCheck {
            name,
            passed,
            detail: detail.into(),
        });
    }
}

/// Check shapes, antisymmetry, Jacobi, the anti-homomorphism property and holomorphy.
pub fn validate_action(chart: &Chart, act: &LieAction) -> ActionReport {
    let mut rep = ActionReport::default();
    let m = act.dim();
    let n = chart.dimension();
    let shape_ok = act
        .structure
        .iter()
        .all(|r| r.len() == m && r.iter().all(|c| c.len() == m));
    rep.push(
        "structure shape".to_string(),
        shape_ok,
        format!("dimension {m}"),
    );
    rep.push(
        "field count".to_string(),
        act.fields.len() == m,
        format!("{} fields for dimension {m}", act.fields.len()),
    );
    if !shape_ok || act.fields.len() != m {
        return rep;
    }
    for (i, x) in act.fields.iter().enumerate() {
        rep.push(
            format!("field xi{} dimension", i + 1),
            x.dimension() == n,
            format!("field has dimension {}, chart has {n}", x.dimension()),
        );
    }
    if act.fields.iter().any(|x| x.dimension() != n) {
        return rep;
    }
    let mut antisym_ok = true;
    for j in 0..m {
        for k in j..m {
            for i in 0..m {
                let ok = act.structure[j][k][i] == -&act.structure[k][j][i];
                if !ok {
                    antisym_ok = false;
                    rep.push(
                        format!("antisymmetry c^{}_{{{}{}}}", i + 1, j + 1, k + 1),
                        false,
                        format!("{} vs {}", act.structure[j][k][i], act.structure[k][j][i]),
                    );
                }
            }
        }
    }
    rep.push("antisymmetry".to_string(), antisym_ok, "");
    let mut jacobi_ok = true;
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                for i in 0..m {
                    let mut acc = Scalar::zero();
                    for p in 0..m {
                        acc = &acc + &(&act.structure[a][b][p] * &act.structure[p][c][i]);
                        acc = &acc + &(&act.structure[b][c][p] * &act.structure[p][a][i]);
                        acc = &acc + &(&act.structure[c][a][p] * &act.structure[p][b][i]);
                    }
                    if !acc.is_zero() {
                        jacobi_ok = false;
                        rep.push(
                            format!("Jacobi (xi{}, xi{}, xi{})", a + 1, b + 1, c + 1),
                            false,
                            format!("component along xi{} is {acc}", i + 1),
                        );
                    }
                }
            }
        }
    }
    rep.push("Jacobi".to_string(), jacobi_ok, "");
    for j in 0..m {
        for k in j + 1..m {
            let lhs = act.fields[j].bracket(&act.fields[k]);
            let rhs = act.combine_fields(act.bracket(j, k)).scale(&-Scalar::one());
            let ok = lhs.equals(&rhs);
            rep.push(
                format!(
                    "[X{}, X{}] = -X of [xi{}, xi{}]",
                    j + 1,
                    k + 1,
                    j + 1,
                    k + 1
                ),
                ok,
                if ok {
                    String::new()
                } else {
                    format!("{lhs} vs {rhs}")
                },
            );
        }
    }
    for (i, x) in act.fields.iter().enumerate() {
        let defect = x.holomorphy_defect();
        rep.push(
            format!("X{} holomorphic", i + 1),
            defect.is_none(),
            defect.map_or(String::new(), |(c, v)| {
                format!("component {c} depends on {v}")
            }),
        );
    }
    rep
}
