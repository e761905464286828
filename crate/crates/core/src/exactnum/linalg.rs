//! Exact linear algebra: Gauss-Jordan over fields and fraction-free (Bareiss)
//! elimination for systems with rational-function coefficients.

use super::poly::Polynomial;
use super::ratfunc::RationalFunction;
use super::series::{ExactDivision, Field};
use crate::error::{Error, Result};

pub type Matrix<T> = Vec<Vec<T>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let delta = factor.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Solve `a x = b` over a field. Free variables are set to zero; `None` when inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Fraction-free forward elimination on the first `n` columns of an augmented matrix.
/// Returns the sign of the row permutation, or `None` when the leading block is singular.
pub fn bareiss_forward<T: ExactDivision>(m: &mut Matrix<T>, n: usize) -> Option<i32> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut sign = 1;
    let mut prev = T::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..cols {
                let v = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev);
            }
            m[i][k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    Some(sign)
}

/// Determinant by fraction-free elimination.
pub fn determinant<T: ExactDivision>(m: &Matrix<T>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut work = m.clone();
    match bareiss_forward(&mut work, n) {
        None => T::zero(),
        Some(sign) => {
            let d = work[n - 1][n - 1].clone();
            if sign < 0 {
                d.neg()
            } else {
                d
            }
        }
    }
}

/// Clear denominators row by row, giving a polynomial matrix with the same solutions.
fn clear_denominators(rows: &Matrix<RationalFunction>) -> Matrix<Polynomial> {
    rows.iter()
        .map(|row| {
            let mut scale = RationalFunction::one();
            for e in row {
                if !e.is_polynomial() {
                    let d = RationalFunction::from_poly(e.denominator());
                    scale = scale.mul(&d);
                }
            }
            row.iter()
                .map(|e| {
                    let p = e.mul(&scale);
                    debug_assert!(p.is_polynomial());
                    p.numerator().clone()
                })
                .collect()
        })
        .collect()
}

/// Solve the square system `a X = B` (several right-hand sides) over rational functions.
pub fn solve_rational(
    a: &Matrix<RationalFunction>,
    rhs: &Matrix<RationalFunction>,
) -> Result<Matrix<RationalFunction>> {
    let n = a.len();
    let k = rhs.first().map_or(0, |r| r.len());
    let aug: Matrix<RationalFunction> = a
        .iter()
        .zip(rhs)
        .map(|(row, r)| row.iter().chain(r.iter()).cloned().collect())
        .collect();
    let mut poly = clear_denominators(&aug);
    bareiss_forward(&mut poly, n).ok_or(Error::SingularMatrix)?;
    let as_rf: Matrix<RationalFunction> = poly
        .into_iter()
        .map(|row| row.into_iter().map(RationalFunction::from_poly).collect())
        .collect();
    let mut x = vec![vec![RationalFunction::zero(); k]; n];
    for col in 0..k {
        for i in (0..n).rev() {
            let mut acc = as_rf[i][n + col].clone();
            for j in i + 1..n {
                acc = acc.sub(&as_rf[i][j].mul(&x[j][col]));
            }
            x[i][col] = acc.div(&as_rf[i][i])?;
        }
    }
    Ok(x)
}

pub fn inverse_rational(a: &Matrix<RationalFunction>) -> Result<Matrix<RationalFunction>> {
    let n = a.len();
    let identity: Matrix<RationalFunction> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        RationalFunction::one()
                    } else {
                        RationalFunction::zero()
                    }
                })
                .collect()
        })
        .collect();
    solve_rational(a, &identity)
}

pub fn determinant_rational(a: &Matrix<RationalFunction>) -> RationalFunction {
    // Clearing per row scales the determinant by the product of row multipliers.
    let mut total = RationalFunction::one();
    let poly: Matrix<Polynomial> = a
        .iter()
        .map(|row| {
            let mut s = RationalFunction::one();
            for e in row {
                if !e.is_polynomial() {
                    s = s.mul(&RationalFunction::from_poly(e.denominator()));
                }
            }
            total = total.mul(&s);
            row.iter().map(|e| e.mul(&s).numerator().clone()).collect()
        })
        .collect();
    RationalFunction::from_poly(determinant(&poly))
        .div(&total)
        .expect("row multipliers are nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{Scalar, Var};

    fn rf(p: Polynomial) -> RationalFunction {
        RationalFunction::from_poly(p)
    }

    #[test]
    fn field_solve_with_free_variable() {
        let s = |n| Scalar::from_int(n);
        let a = vec![vec![s(1), s(1), s(0)], vec![s(0), s(0), s(1)]];
        let b = vec![s(2), s(3)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![s(2), s(0), s(3)]);
        let inconsistent = vec![vec![s(1)], vec![s(1)]];
        assert!(solve(&inconsistent, &[s(1), s(2)]).is_none());
    }

    #[test]
    fn rational_inverse_round_trip() {
        let z = rf(Polynomial::var(Var::Z(0)));
        let w = rf(Polynomial::var(Var::W(0)));
        let one = RationalFunction::one();
        let a = vec![
            vec![one.add(&z.mul(&w)), z.clone()],
            vec![w.clone(), one.div(&one.add(&z)).unwrap()],
        ];
        let inv = inverse_rational(&a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = RationalFunction::zero();
                for k in 0..2 {
                    acc = acc.add(&a[i][k].mul(&inv[k][j]));
                }
                let expected = if i == j {
                    one.clone()
                } else {
                    RationalFunction::zero()
                };
                assert!(acc.equals(&expected), "entry {i},{j}: {acc}");
            }
        }
        let det = determinant_rational(&a);
        let direct = a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]));
        assert!(det.equals(&direct));
    }
}
