//! Formal power series in the deformation parameter, truncated at a fixed order.

use std::fmt::Debug;

use super::poly::Polynomial;
use super::ratfunc::RationalFunction;
use super::scalar::Scalar;
use crate::error::Result;

/// Minimal commutative ring interface shared by the exact coefficient types.
pub trait Ring: Clone + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

/// A ring in which nonzero elements are invertible.
pub trait Field: Ring {
    fn inv(&self) -> Result<Self>;
}

/// A ring with exact division by known divisors (used by fraction-free elimination).
pub trait ExactDivision: Ring {
    /// `self / d`, assuming the division is exact.
    fn div_exact(&self, d: &Self) -> Self;
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn equals(&self, o: &Self) -> bool {
        self == o
    }
}

impl Field for Scalar {
    fn inv(&self) -> Result<Self> {
        Scalar::inv(self)
    }
}

impl ExactDivision for Scalar {
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Polynomial::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Polynomial::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Polynomial::mul(self, o)
    }
    fn neg(&self) -> Self {
        Polynomial::neg(self)
    }
    fn equals(&self, o: &Self) -> bool {
        self == o
    }
}

impl ExactDivision for Polynomial {
    fn div_exact(&self, d: &Self) -> Self {
        Polynomial::div_exact(self, d).expect("inexact polynomial division")
    }
}

impl Ring for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RationalFunction::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RationalFunction::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFunction::mul(self, o)
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn equals(&self, o: &Self) -> bool {
        RationalFunction::equals(self, o)
    }
}

impl Field for RationalFunction {
    fn inv(&self) -> Result<Self> {
        RationalFunction::inv(self)
    }
}

/// `c_0 + c_1 v + ... + c_N v^N`, all arithmetic modulo `v^{N+1}`.
#[derive(Clone, Debug)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Series<T> {
    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Series::constant(T::one(), order)
    }

    /// `c` at order zero.
    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * v^k` (zero if `k` exceeds the order).
    pub fn monomial(c: T, k: usize, order: usize) -> Self {
        let mut s = Series::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Build from explicit coefficients, padding with zeros or truncating to `order`.
    pub fn from_coeffs(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        while coeffs.len() < order + 1 {
            coeffs.push(T::zero());
        }
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    /// Coefficient at `k`, zero beyond the stored order.
    pub fn coeff_or_zero(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn set(&mut self, k: usize, c: T) {
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Re-truncate or zero-pad to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        Series::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Series<U> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Ring>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Series<U>> {
        Ok(Series {
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        let order = self.order().min(o.order());
        Series {
            coeffs: (0..=order)
                .map(|k| f(&self.coeffs[k], &o.coeffs[k]))
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, T::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, T::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(T::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let mut coeffs = vec![T::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Series { coeffs }
    }

    /// Multiply by `v^k`, discarding overflow.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut s = Series::zero(order);
        for i in 0..=order {
            if i + k <= order {
                s.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        s
    }

    /// Divide by `v`, assuming the constant term vanishes; the top coefficient becomes unknown and is dropped.
    pub fn unshift(&self) -> Self {
        let order = self.order();
        Series {
            coeffs: self.coeffs[1..].to_vec(),
        }
        .with_order(order.saturating_sub(1))
    }

    pub fn equals(&self, o: &Self) -> bool {
        let order = self.order().min(o.order());
        (0..=order).all(|k| self.coeffs[k].equals(&o.coeffs[k]))
    }

    /// First order at which two series differ.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        debug_assert_eq!(
            self.order(),
            o.order(),
            "comparing series of different orders"
        );
        let order = self.order().min(o.order());
        (0..=order).find(|&k| !self.coeffs[k].equals(&o.coeffs[k]))
    }
}

/// Same truncation order and equal coefficients.
impl<T: Ring> PartialEq for Series<T> {
    fn eq(&self, o: &Self) -> bool {
        self.order() == o.order() && self.equals(o)
    }
}

impl<T: Ring> Ring for Series<T> {
    /// Ring-trait zero has order zero; prefer [`Series::zero`] with an explicit order.
    fn zero() -> Self {
        Series::zero(0)
    }
    fn one() -> Self {
        Series::one(0)
    }
    fn is_zero(&self) -> bool {
        Series::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Series::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Series::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Series::mul(self, o)
    }
    fn neg(&self) -> Self {
        Series::neg(self)
    }
    fn equals(&self, o: &Self) -> bool {
        Series::equals(self, o)
    }
}

impl Series<RationalFunction> {
    /// Render with the deformation parameter written as `v`.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = match k {
                0 => String::new(),
                1 => "v".to_string(),
                _ => format!("v^{k}"),
            };
            let body = c.render();
            let piece = if k == 0 {
                body
            } else if c.is_one() {
                power
            } else if c.constant_value().is_some_and(|s| (-&s).is_one()) {
                format!("-{power}")
            } else if !body.contains(' ') && !body.contains('/') {
                format!("{body}*{power}")
            } else {
                format!("({body})*{power}")
            };
            parts.push(piece);
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}
