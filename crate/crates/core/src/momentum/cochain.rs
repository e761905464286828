//! Scalar Chevalley-Eilenberg cochains with trivial coefficients.
//!
//! Conventions: `(delta0 tau)(x, y) = -tau([x, y])` and
//! `(delta1 c)(x, y, z) = -c([x, y], z) + c([x, z], y) - c([y, z], x)`.

use serde::Serialize;

use super::action::LieAction;
use crate::exactnum::linalg::{rank, solve, Matrix};
use crate::exactnum::{Scalar, Series};

/// Strictly increasing index pairs `(i, j)`, in lexicographic order.
pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect()
}

pub fn triples(m: usize) -> Vec<(usize, usize, usize)> {
    (0..m)
        .flat_map(|i| (i + 1..m).flat_map(move |j| (j + 1..m).map(move |k| (i, j, k))))
        .collect()
}

/// A 2-cochain: one value per increasing pair, alternating extension implied.
#[derive(Clone, Debug)]
pub struct Cochain2 {
    pub m: usize,
    pub values: Vec<Series<Scalar>>,
}

impl Cochain2 {
    pub fn zero(m: usize, order: usize) -> Cochain2 {
        Cochain2 {
            m,
            values: vec![Series::zero(order); pairs(m).len()],
        }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        pairs(self.m)
            .iter()
            .position(|&p| p == (i.min(j), i.max(j)))
            .expect("valid pair")
    }

    /// Value on `(xi_i, xi_j)` with the alternating sign.
    pub fn get(&self, i: usize, j: usize) -> Series<Scalar> {
        let order = self.values.first().map_or(0, |v| v.order());
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Series::zero(order),
            std::cmp::Ordering::Less => self.values[self.index(i, j)].clone(),
            std::cmp::Ordering::Greater => self.values[self.index(i, j)].neg(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Values at one order, by pair.
    pub fn at_order(&self, s: usize) -> Vec<Scalar> {
        self.values.iter().map(|v| v.coeff_or_zero(s)).collect()
    }
}

/// Matrix of `delta0`: rows are pairs, columns basis elements.
pub fn delta0_matrix(act: &LieAction) -> Matrix<Scalar> {
    let m = act.dim();
    pairs(m)
        .into_iter()
        .map(|(i, j)| act.bracket(i, j).iter().map(|c| -c).collect())
        .collect()
}

/// Matrix of `delta1`: rows are triples, columns pairs.
pub fn delta1_matrix(act: &LieAction) -> Matrix<Scalar> {
    let m = act.dim();
    let ps = pairs(m);
    let col = |a: usize, b: usize| -> Option<(usize, Scalar)> {
        if a == b {
            return None;
        }
        let idx = ps.iter().position(|&p| p == (a.min(b), a.max(b)))?;
        Some((idx, if a < b { Scalar::one() } else { -Scalar::one() }))
    };
    triples(m)
        .into_iter()
        .map(|(x, y, z)| {
            let mut row = vec![Scalar::zero(); ps.len()];
            // sign * c([a, b], c)
            for (sign, a, b, c) in [(-1i64, x, y, z), (1, x, z, y), (-1, y, z, x)] {
                for (k, coeff) in act.bracket(a, b).iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    if let Some((idx, s)) = col(k, c) {
                        let delta = &(&Scalar::from_int(sign) * coeff) * &s;
                        row[idx] = &row[idx] + &delta;
                    }
                }
            }
            row
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub rank_delta0: usize,
    pub rank_delta1: usize,
    pub h1: usize,
    pub h2: usize,
}

/// Dimensions of `H^1` and `H^2` with trivial scalar coefficients.
pub fn cohomology(act: &LieAction) -> Cohomology {
    let m = act.dim();
    let d0 = delta0_matrix(act);
    let d1 = delta1_matrix(act);
    let r0 = if d0.is_empty() { 0 } else { rank(&d0) };
    let r1 = if d1.is_empty() { 0 } else { rank(&d1) };
    let np = pairs(m).len();
    Cohomology {
        rank_delta0: r0,
        rank_delta1: r1,
        h1: m - r0,
        h2: np - r1 - r0,
    }
}

/// Whether `delta1 c = 0` at every order.
pub fn is_cocycle(act: &LieAction, c: &Cochain2) -> bool {
    let d1 = delta1_matrix(act);
    let order = c.values.first().map_or(0, |v| v.order());
    (0..=order).all(|s| {
        let vals = c.at_order(s);
        d1.iter().all(|row| {
            row.iter()
                .zip(&vals)
                .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
                .is_zero()
        })
    })
}

#[derive(Clone, Debug)]
pub enum Coboundary {
    /// `tau` with `delta0 tau = lambda`, free directions set to zero.
    Solved(Vec<Series<Scalar>>),
    /// No solution at `order`; `class` lists the nonzero values of the cocycle there.
    Obstructed {
        order: usize,
        class: Vec<((usize, usize), Scalar)>,
    },
}

#[derive(Clone, Debug)]
pub struct CoboundaryResult {
    pub cohomology: Cohomology,
    pub outcome: Coboundary,
}

/// Solve `delta0 tau = lambda` order by order.
pub fn solve_coboundary(act: &LieAction, lambda: &Cochain2) -> CoboundaryResult {
    let m = act.dim();
    let order = lambda.values.first().map_or(0, |v| v.order());
    let d0 = delta0_matrix(act);
    let mut tau = vec![Series::zero(order); m];
    let outcome = 'solve: {
        for s in 0..=order {
            let rhs = lambda.at_order(s);
            let x = if d0.is_empty() {
                Some(vec![Scalar::zero(); m])
            } else {
                solve(&d0, &rhs)
            };
            match x {
                Some(x) => {
                    for (k, v) in x.into_iter().enumerate() {
                        tau[k].set(s, v);
                    }
                }
                None => {
                    let class = pairs(m)
                        .into_iter()
                        .zip(rhs)
                        .filter(|(_, v)| !v.is_zero())
                        .collect();
                    break 'solve Coboundary::Obstructed { order: s, class };
                }
            }
        }
        Coboundary::Solved(tau)
    };
    CoboundaryResult {
        cohomology: cohomology(act),
        outcome,
    }
}
