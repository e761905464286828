//! Rational functions in the chart variables.
//!
//! The denominator is kept as a product of monic factors with multiplicities.
//! Common denominators are formed as least common multiples over that factor
//! list, and cancellation is attempted by exact division of the numerator by
//! each factor. No multivariate GCD is computed, so two equal functions may
//! be stored differently; equality is decided by cross-multiplication.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::poly::{Monomial, Polynomial, Var, NUM_SLOTS};
use super::scalar::Scalar;
use crate::error::{Error, Result};

type Factor = Arc<Polynomial>;

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    /// Sorted, distinct, monic, non-constant factors with positive exponents.
    den: Vec<(Factor, u32)>,
}

/// Structural identity of a stored representation, for caching.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalKey(Polynomial, Vec<(Polynomial, u32)>);

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Polynomial::one())
    }

    pub fn from_poly(num: Polynomial) -> Self {
        RationalFunction {
            num,
            den: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        RationalFunction::from_poly(Polynomial::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RationalFunction::constant(Scalar::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        RationalFunction::from_poly(Polynomial::var(v))
    }

    pub fn monomial(m: Monomial) -> Self {
        RationalFunction::from_poly(Polynomial::monomial(m, Scalar::one()))
    }

    /// `num / den`; fails with a zero divisor when `den` is the zero polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        let d = RationalFunction::from_poly(den).inv()?;
        Ok(RationalFunction::from_poly(num).mul(&d))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    /// The expanded denominator polynomial.
    pub fn denominator(&self) -> Polynomial {
        expand(&self.den)
    }

    /// Denominator factors and multiplicities.
    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Polynomial, u32)> {
        self.den.iter().map(|(f, e)| (f.as_ref(), *e))
    }

    pub fn key(&self) -> RationalKey {
        RationalKey(
            self.num.clone(),
            self.den.iter().map(|(f, e)| ((**f).clone(), *e)).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact test, also when numerator and denominator share an uncancelled factor.
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.den.is_empty() || self.num.is_zero() {
            return self.num.constant_value();
        }
        let den = expand(&self.den);
        let (nm, nc) = self.num.leading()?;
        let (dm, dc) = den.leading()?;
        if nm != dm {
            return None;
        }
        let c = nc / dc;
        (den.scale(&c) == self.num).then_some(c)
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.num.depends_on(v) || self.den.iter().any(|(f, _)| f.depends_on(v))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        if self.den == o.den {
            let num = if negate {
                self.num.sub(&o.num)
            } else {
                self.num.add(&o.num)
            };
            return RationalFunction {
                num,
                den: self.den.clone(),
            }
            .cancel_all();
        }
        let (da, db) = refine(&self.den, &o.den);
        let lcm = merge_factors(&da, &db, |a, b| a.max(b));
        let left = self.num.mul(&expand(&cofactor(&lcm, &da)));
        let right = o.num.mul(&expand(&cofactor(&lcm, &db)));
        let num = if negate {
            left.sub(&right)
        } else {
            left.add(&right)
        };
        RationalFunction { num, den: lcm }.cancel_all()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero();
        }
        // Each operand is already reduced against its own denominator.
        let (da, db) = refine(&self.den, &o.den);
        let (na, db) = cancel_against(&self.num, &db);
        let (nb, da) = cancel_against(&o.num, &da);
        RationalFunction {
            num: na.mul(&nb),
            den: merge_factors(&da, &db, |a, b| a + b),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let (scale, factors) = factor_denominator(&self.num);
        let num = expand(&self.den).scale(&scale.inv()?);
        Ok(RationalFunction { num, den: factors })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = RationalFunction::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        if self.den.is_empty() {
            return RationalFunction::from_poly(self.num.derivative(v));
        }
        let dnum = self.num.derivative(v);
        // d(N / prod f^e) = (N' prod f - N sum e f' prod_{g != f} g) / (prod f^{e+1})
        let active: Vec<usize> = (0..self.den.len())
            .filter(|&i| self.den[i].0.depends_on(v))
            .collect();
        if active.is_empty() {
            return RationalFunction {
                num: dnum,
                den: self.den.clone(),
            }
            .cancel_all();
        }
        let prod_active = active
            .iter()
            .fold(Polynomial::one(), |acc, &i| acc.mul(&self.den[i].0));
        let mut correction = Polynomial::zero();
        for &i in &active {
            let (f, e) = &self.den[i];
            let others = active
                .iter()
                .filter(|&&j| j != i)
                .fold(Polynomial::one(), |acc, &j| acc.mul(&self.den[j].0));
            let term = f
                .derivative(v)
                .mul(&others)
                .scale(&Scalar::from_int(*e as i64));
            correction = correction.add(&term);
        }
        let num = dnum.mul(&prod_active).sub(&self.num.mul(&correction));
        let mut den = self.den.clone();
        for &i in &active {
            den[i].1 += 1;
        }
        RationalFunction { num, den }.cancel_all()
    }

    /// Replace variables by rational functions. `images[slot]` of `None` leaves that variable fixed.
    pub fn substitute(&self, images: &Substitution) -> Result<Self> {
        let num = images.eval_poly(&self.num);
        let mut den = RationalFunction::one();
        for (f, e) in &self.den {
            let fv = images.eval_poly(f);
            if fv.is_zero() {
                return Err(Error::SingularSubstitution);
            }
            den = den.mul(&fv.pow(*e));
        }
        num.div(&den).map_err(|_| Error::SingularSubstitution)
    }

    /// Formal complex conjugate: swap `z`/`w` and conjugate all coefficients.
    pub fn conjugate(&self) -> Self {
        let num = self.num.conjugate();
        let mut acc = RationalFunction::from_poly(num);
        for (f, e) in &self.den {
            let fc = RationalFunction::from_poly(f.conjugate());
            acc = acc.div(&fc.pow(*e)).expect("conjugate of nonzero factor");
        }
        acc
    }

    /// Whether `self - o` is the zero function.
    pub fn equals(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.sub(o).is_zero()
    }

    fn cancel_all(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let mut den = Vec::with_capacity(self.den.len());
        for (f, mut e) in std::mem::take(&mut self.den) {
            while e > 0 {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                den.push((f, e));
            }
        }
        self.den = den;
        self
    }

    pub(crate) fn render(&self) -> String {
        let num = self.num.render();
        if self.den.is_empty() {
            return num;
        }
        let den = expand(&self.den);
        let wrap = |p: &Polynomial, s: String| {
            if p.len() > 1 || s.starts_with('-') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num, num), wrap(&den, den.render()))
    }
}

fn expand(factors: &[(Factor, u32)]) -> Polynomial {
    factors
        .iter()
        .fold(Polynomial::one(), |acc, (f, e)| acc.mul(&f.pow(*e)))
}

fn merge_factors(
    a: &[(Factor, u32)],
    b: &[(Factor, u32)],
    op: impl Fn(u32, u32) -> u32,
) -> Vec<(Factor, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0.clone(), op(a[i].1, 0)));
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0.clone(), op(0, b[j].1)));
            j += 1;
        } else {
            out.push((a[i].0.clone(), op(a[i].1, b[j].1)));
            i += 1;
            j += 1;
        }
    }
    out.retain(|(_, e)| *e > 0);
    out
}

/// Rewrite two factor lists over a common base in which no factor divides another.
fn refine(a: &[(Factor, u32)], b: &[(Factor, u32)]) -> (Vec<(Factor, u32)>, Vec<(Factor, u32)>) {
    if a.is_empty() || b.is_empty() || a == b {
        return (a.to_vec(), b.to_vec());
    }
    let divides = |g: &Factor, f: &Factor| -> Option<Polynomial> {
        if g == f || g.total_degree() >= f.total_degree() {
            return None;
        }
        f.div_exact(g)
    };
    let split_needed = a.iter().any(|(f, _)| {
        b.iter()
            .any(|(g, _)| divides(g, f).is_some() || divides(f, g).is_some())
    });
    if !split_needed {
        return (a.to_vec(), b.to_vec());
    }
    let mut base: Vec<Factor> = a.iter().chain(b).map(|(f, _)| f.clone()).collect();
    base.sort();
    base.dedup();
    'outer: loop {
        for i in 0..base.len() {
            for j in 0..base.len() {
                if let Some(q) = divides(&base[j], &base[i]) {
                    base.remove(i);
                    let q = Arc::new(q);
                    if !base.contains(&q) {
                        base.push(q);
                    }
                    base.sort();
                    continue 'outer;
                }
            }
        }
        break;
    }
    let rewrite = |list: &[(Factor, u32)]| {
        let mut out: Vec<(Factor, u32)> = Vec::new();
        for (f, e) in list {
            let mut rest = (**f).clone();
            for g in &base {
                while !rest.is_constant() {
                    match (g.total_degree() <= rest.total_degree())
                        .then(|| rest.div_exact(g))
                        .flatten()
                    {
                        Some(q) => {
                            rest = q;
                            match out.iter_mut().find(|(h, _)| h == g) {
                                Some(slot) => slot.1 += e,
                                None => out.push((g.clone(), *e)),
                            }
                        }
                        None => break,
                    }
                }
            }
            if !rest.is_constant() {
                out.push((Arc::new(rest), *e));
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out.dedup_by(|next, kept| {
            let same = next.0 == kept.0;
            if same {
                kept.1 += next.1;
            }
            same
        });
        out
    };
    (rewrite(a), rewrite(b))
}

/// `lcm / part` as a factor list.
fn cofactor(lcm: &[(Factor, u32)], part: &[(Factor, u32)]) -> Vec<(Factor, u32)> {
    lcm.iter()
        .filter_map(|(f, e)| {
            let sub = part
                .iter()
                .find(|(g, _)| g == f)
                .map(|(_, k)| *k)
                .unwrap_or(0);
            (e > &sub).then(|| (f.clone(), e - sub))
        })
        .collect()
}

fn cancel_against(num: &Polynomial, den: &[(Factor, u32)]) -> (Polynomial, Vec<(Factor, u32)>) {
    let mut num = num.clone();
    let mut out = Vec::with_capacity(den.len());
    for (f, e) in den {
        let mut e = *e;
        while e > 0 {
            match num.div_exact(f) {
                Some(q) => {
                    num = q;
                    e -= 1;
                }
                None => break,
            }
        }
        if e > 0 {
            out.push((f.clone(), e));
        }
    }
    // A whole numerator may divide an unsplit factor, e.g. an expanded square.
    if !num.is_constant() && num.monomial_content().is_one() {
        let (lc, monic) = num.make_monic();
        let hit = out.iter().position(|(f, _)| {
            monic.total_degree() < f.total_degree() && f.div_exact(&monic).is_some()
        });
        if let Some(i) = hit {
            let (f, e) = out.remove(i);
            let q = f.div_exact(&monic).expect("checked above");
            let monic = Arc::new(monic);
            if e > 1 {
                out.push((monic.clone(), e - 1));
            }
            out.push((Arc::new(q), e));
            out.sort_by(|x, y| x.0.cmp(&y.0));
            out.dedup_by(|next, kept| {
                let same = next.0 == kept.0;
                if same {
                    kept.1 += next.1;
                }
                same
            });
            return (Polynomial::constant(lc), out);
        }
    }
    (num, out)
}

/// Split a nonzero polynomial into a scalar and monic factors: variable powers plus a primitive rest.
fn factor_denominator(p: &Polynomial) -> (Scalar, Vec<(Factor, u32)>) {
    let content = p.monomial_content();
    let rest = if content.is_one() {
        p.clone()
    } else {
        p.div_exact(&Polynomial::monomial(content, Scalar::one()))
            .expect("monomial content divides")
    };
    let mut factors = Vec::new();
    for slot in 0..NUM_SLOTS {
        let e = content.0[slot];
        if e > 0 {
            factors.push((Arc::new(Polynomial::var(Var::from_slot(slot))), e as u32));
        }
    }
    let (lc, monic) = rest.make_monic();
    if !monic.is_constant() {
        let (root, k) = monic.perfect_power();
        factors.push((Arc::new(root), k));
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    (lc, factors)
}

/// Images of variables for substitution, indexed by slot.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    images: [Option<RationalFunction>; NUM_SLOTS],
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    pub fn set(&mut self, v: Var, image: RationalFunction) {
        self.images[v.slot()] = Some(image);
    }

    pub fn with(mut self, v: Var, image: RationalFunction) -> Self {
        self.set(v, image);
        self
    }

    pub fn image(&self, v: Var) -> RationalFunction {
        self.images[v.slot()]
            .clone()
            .unwrap_or_else(|| RationalFunction::var(v))
    }

    fn eval_poly(&self, p: &Polynomial) -> RationalFunction {
        let mut powers: Vec<Vec<RationalFunction>> = vec![Vec::new(); NUM_SLOTS];
        let mut acc = RationalFunction::zero();
        for (m, c) in p.terms() {
            let mut term = RationalFunction::constant(c.clone());
            let mut fixed = Monomial::one();
            for slot in 0..NUM_SLOTS {
                let e = m.0[slot] as usize;
                if e == 0 {
                    continue;
                }
                match &self.images[slot] {
                    None => fixed.0[slot] = e as u16,
                    Some(img) => {
                        let cache = &mut powers[slot];
                        if cache.is_empty() {
                            cache.push(RationalFunction::one());
                        }
                        while cache.len() <= e {
                            let next = cache.last().unwrap().mul(img);
                            cache.push(next);
                        }
                        term = term.mul(&cache[e]);
                    }
                }
            }
            if !fixed.is_one() {
                term = term.mul(&RationalFunction::monomial(fixed));
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<Scalar> for RationalFunction {
    fn from(c: Scalar) -> Self {
        RationalFunction::constant(c)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::add(self, o)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::sub(self, o)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::mul(self, o)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    /// Panics on a zero divisor; use [`RationalFunction::div`] for the fallible form.
    fn div(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::div(self, o).expect("zero divisor")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}
