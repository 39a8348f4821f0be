use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};


use super::dense::{Poly, ZPoly2};

/// Polynomial in `t` with Laurent-polynomial coefficients in `q`.
///
/// Terms are keyed by `(t_exp, q_exp)` so iteration follows the canonical
/// order: t-exponent major, q-exponent minor, ascending.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly2 {
    terms: BTreeMap<(u32, i32), BigInt>,
}

impl IntPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c * q^qe * t^te`
    pub fn monomial(c: impl Into<BigInt>, qe: i32, te: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(te, qe, c.into());
        p
    }

    /// `q^a * t^b`
    pub fn qt(a: i32, b: u32) -> Self {
        Self::monomial(1, a, b)
    }

    /// `1 - q^a t^b`
    pub fn one_minus(a: i32, b: u32) -> Self {
        Self::one() - Self::qt(a, b)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, u32, BigInt)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (qe, te, c) in it {
            p.add_term(te, qe, c);
        }
        p
    }

    fn add_term(&mut self, te: u32, qe: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((te, qe)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(te, qe));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    /// Iterates `(q_exp, t_exp, coeff)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, u32, &BigInt)> {
        self.terms.iter().map(|(&(te, qe), c)| (qe, te, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn first_term(&self) -> Option<(i32, u32, &BigInt)> {
        self.terms().next()
    }

    pub fn t_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|k| k.0)
    }

    pub fn min_t_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|k| k.0)
    }

    pub fn min_q_exp(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.1).min()
    }

    /// Coefficient of `t^k` as a pure Laurent polynomial in `q`.
    pub fn t_coeff(&self, k: u32) -> IntPoly2 {
        IntPoly2 {
            terms: self
                .terms
                .range((k, i32::MIN)..=(k, i32::MAX))
                .map(|(&(_, qe), c)| ((0, qe), c.clone()))
                .collect(),
        }
    }

    pub fn is_pure_q(&self) -> bool {
        self.terms.keys().all(|k| k.0 == 0)
    }

    /// Multiplies by `q^a t^b`.
    pub fn shift(&self, a: i32, b: u32) -> Self {
        IntPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(te, qe), c)| ((te + b, qe + a), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Substitutes `t -> q^k t`.
    pub fn subst_t_scaled(&self, k: i32) -> Self {
        let mut p = Self::zero();
        for (&(te, qe), c) in &self.terms {
            p.add_term(te, qe + k * te as i32, c.clone());
        }
        p
    }

    /// Substitutes `q = 1`.
    pub fn at_q_one(&self) -> Self {
        let mut p = Self::zero();
        for (&(te, _), c) in &self.terms {
            p.add_term(te, 0, c.clone());
        }
        p
    }

    /// Content: gcd of the integer coefficients (nonnegative).
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Exact evaluation at rational `q` (nonzero) and `t`.
    pub fn eval(&self, q: &BigRational, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(te, qe), c) in &self.terms {
            acc += BigRational::from_integer(c.clone()) * q.pow(qe) * t.pow(te as i32);
        }
        acc
    }

    pub(crate) fn to_dense(&self) -> (ZPoly2, i32) {
        let shift = self.min_q_exp().unwrap_or(0);
        let deg_t = self.t_degree().map(|d| d as usize + 1).unwrap_or(0);
        let mut outer: Vec<Vec<BigInt>> = vec![Vec::new(); deg_t];
        for (&(te, qe), c) in &self.terms {
            let row = &mut outer[te as usize];
            let i = (qe - shift) as usize;
            if row.len() <= i {
                row.resize(i + 1, BigInt::zero());
            }
            row[i] = c.clone();
        }
        (Poly::new(outer.into_iter().map(Poly::new).collect()), shift)
    }

    pub(crate) fn from_dense(d: &ZPoly2, shift: i32) -> Self {
        let mut p = Self::zero();
        for (te, row) in d.0.iter().enumerate() {
            for (i, c) in row.0.iter().enumerate() {
                p.add_term(te as u32, i as i32 + shift, c.clone());
            }
        }
        p
    }

    /// Exact quotient in `Z[q, 1/q][t]`, if it exists.
    pub fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (a, sa) = self.to_dense();
        let (b, sb) = other.to_dense();
        let q = super::dense::GcdDomain::exact_div(&a, &b)?;
        Some(Self::from_dense(&q, sa - sb))
    }

    /// Gcd up to units `±q^k`, normalized with nonnegative q-exponents.
    pub fn gcd(&self, other: &Self) -> Self {
        let (a, _) = self.to_dense();
        let (b, _) = other.to_dense();
        let g = super::dense::GcdDomain::gcd(&a, &b);
        // strip any power of q dividing g entirely
        let p = Self::from_dense(&g, 0);
        let m = p.min_q_exp().unwrap_or(0);
        let p = p.shift(-m, 0);
        match p.first_term() {
            Some((_, _, c)) if c.is_negative() => -p,
            _ => p,
        }
    }
}

impl fmt::Display for IntPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (qe, te, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let mono = render_monomial(qe, te);
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly2({self})")
    }
}

pub(crate) fn render_monomial(qe: i32, te: u32) -> String {
    let mut parts = Vec::new();
    match qe {
        0 => {}
        1 => parts.push("q".to_string()),
        _ => parts.push(format!("q^{qe}")),
    }
    match te {
        0 => {}
        1 => parts.push("t".to_string()),
        _ => parts.push(format!("t^{te}")),
    }
    parts.join("*")
}

impl Add for &IntPoly2 {
    type Output = IntPoly2;
    fn add(self, rhs: &IntPoly2) -> IntPoly2 {
        let mut p = self.clone();
        for (&(te, qe), c) in &rhs.terms {
            p.add_term(te, qe, c.clone());
        }
        p
    }
}

impl Sub for &IntPoly2 {
    type Output = IntPoly2;
    fn sub(self, rhs: &IntPoly2) -> IntPoly2 {
        let mut p = self.clone();
        for (&(te, qe), c) in &rhs.terms {
            p.add_term(te, qe, -c);
        }
        p
    }
}

impl Mul for &IntPoly2 {
    type Output = IntPoly2;
    fn mul(self, rhs: &IntPoly2) -> IntPoly2 {
        let mut p = IntPoly2::zero();
        for (&(t1, q1), c1) in &self.terms {
            for (&(t2, q2), c2) in &rhs.terms {
                p.add_term(t1 + t2, q1 + q2, c1 * c2);
            }
        }
        p
    }
}

impl Neg for &IntPoly2 {
    type Output = IntPoly2;
    fn neg(self) -> IntPoly2 {
        IntPoly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly2 {
            type Output = IntPoly2;
            fn $m(self, rhs: IntPoly2) -> IntPoly2 {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly2> for IntPoly2 {
            type Output = IntPoly2;
            fn $m(self, rhs: &IntPoly2) -> IntPoly2 {
                (&self).$m(rhs)
            }
        }
        impl $tr<IntPoly2> for &IntPoly2 {
            type Output = IntPoly2;
            fn $m(self, rhs: IntPoly2) -> IntPoly2 {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly2 {
    type Output = IntPoly2;
    fn neg(self) -> IntPoly2 {
        -&self
    }
}
