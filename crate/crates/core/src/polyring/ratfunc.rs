use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::poly2::IntPoly2;
use super::PolyError;

/// A denominator factor `(1 - q^a t^b)^mult`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DenFactor {
    pub a: i32,
    pub b: u32,
    pub mult: u32,
}

impl DenFactor {
    pub fn poly(&self) -> IntPoly2 {
        IntPoly2::one_minus(self.a, self.b).pow(self.mult)
    }
}

/// Reduced rational function in `q` (Laurent) and `t`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFuncQT {
    num: IntPoly2,
    den: IntPoly2,
    factored: Option<Vec<DenFactor>>,
}

impl RatFuncQT {
    pub fn new(num: IntPoly2, den: IntPoly2) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(IntPoly2::zero()));
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");

        let (qe, _, c) = den.first_term().expect("nonzero");
        let neg = c.is_negative();
        num = num.shift(-qe, 0);
        den = den.shift(-qe, 0);
        if neg {
            num = -num;
            den = -den;
        }
        let content = num.int_content().gcd(&den.int_content());
        if content > BigInt::from(1) {
            num = exact_int_div(&num, &content);
            den = exact_int_div(&den, &content);
        }
        let factored = detect_factors(&den);
        Ok(RatFuncQT { num, den, factored })
    }

    pub fn from_poly(p: IntPoly2) -> Self {
        RatFuncQT {
            num: p,
            den: IntPoly2::one(),
            factored: Some(Vec::new()),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(IntPoly2::one())
    }

    pub fn zero() -> Self {
        Self::from_poly(IntPoly2::zero())
    }

    /// `q^a t^b`
    pub fn qt(a: i32, b: u32) -> Self {
        Self::from_poly(IntPoly2::qt(a, b))
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_poly(IntPoly2::constant(c))
    }

    /// `1 - q^a t^b`
    pub fn one_minus(a: i32, b: u32) -> Self {
        Self::from_poly(IntPoly2::one_minus(a, b))
    }

    pub fn numerator(&self) -> &IntPoly2 {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly2 {
        &self.den
    }

    pub fn factored_denominator(&self) -> Option<&[DenFactor]> {
        self.factored.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Substitutes `t -> q^k t`; `k = 1` is the shift `s -> s - 1`.
    pub fn subst_t_scaled(&self, k: i32) -> Self {
        Self::new(self.num.subst_t_scaled(k), self.den.subst_t_scaled(k))
            .expect("substitution keeps the denominator nonzero")
    }

    /// Exact value at `q = q_value`, `t = t_value`.
    pub fn eval(&self, q: &BigRational, t: &BigRational) -> Result<BigRational, PolyError> {
        let d = self.den.eval(q, t);
        if d.is_zero() {
            return Err(PolyError::PoleAtPoint);
        }
        Ok(self.num.eval(q, t) / d)
    }
}

fn exact_int_div(p: &IntPoly2, c: &BigInt) -> IntPoly2 {
    IntPoly2::from_terms(p.terms().map(|(qe, te, x)| (qe, te, x / c)))
}

/// Writes a denominator with unit constant term as a product of `(1 - q^a t^b)`.
fn detect_factors(den: &IntPoly2) -> Option<Vec<DenFactor>> {
    if den.t_coeff(0) != IntPoly2::one() {
        return None;
    }
    let mut rest = den.clone();
    let mut found: Vec<(i32, u32)> = Vec::new();
    'outer: while !rest.is_one() {
        let b = rest.terms().map(|(_, te, _)| te).find(|&te| te > 0)?;
        let candidates: Vec<i32> = rest
            .t_coeff(b)
            .terms()
            .filter(|(_, _, c)| c.is_negative())
            .map(|(qe, _, _)| qe)
            .collect();
        for a in candidates {
            if let Some(quo) = rest.exact_div(&IntPoly2::one_minus(a, b)) {
                found.push((a, b));
                rest = quo;
                continue 'outer;
            }
        }
        return None;
    }
    found.sort_by(|x, y| (x.1, x.0).cmp(&(y.1, y.0)));
    let mut out: Vec<DenFactor> = Vec::new();
    for (a, b) in found {
        match out.last_mut() {
            Some(f) if f.a == a && f.b == b => f.mult += 1,
            _ => out.push(DenFactor { a, b, mult: 1 }),
        }
    }
    Some(out)
}

impl fmt::Display for RatFuncQT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFuncQT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFuncQT({self})")
    }
}

impl From<IntPoly2> for RatFuncQT {
    fn from(p: IntPoly2) -> Self {
        RatFuncQT::from_poly(p)
    }
}

impl Add for &RatFuncQT {
    type Output = RatFuncQT;
    fn add(self, rhs: &RatFuncQT) -> RatFuncQT {
        if self.den == rhs.den {
            return RatFuncQT::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFuncQT::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &RatFuncQT {
    type Output = RatFuncQT;
    fn sub(self, rhs: &RatFuncQT) -> RatFuncQT {
        self + &(-rhs)
    }
}

impl Mul for &RatFuncQT {
    type Output = RatFuncQT;
    fn mul(self, rhs: &RatFuncQT) -> RatFuncQT {
        RatFuncQT::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Div for &RatFuncQT {
    type Output = RatFuncQT;
    /// Panics on division by zero.
    fn div(self, rhs: &RatFuncQT) -> RatFuncQT {
        RatFuncQT::new(&self.num * &rhs.den, &self.den * &rhs.num).expect("division by zero")
    }
}

impl Neg for &RatFuncQT {
    type Output = RatFuncQT;
    fn neg(self) -> RatFuncQT {
        RatFuncQT {
            num: -&self.num,
            den: self.den.clone(),
            factored: self.factored.clone(),
        }
    }
}

impl Neg for RatFuncQT {
    type Output = RatFuncQT;
    fn neg(self) -> RatFuncQT {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFuncQT {
            type Output = RatFuncQT;
            fn $m(self, rhs: RatFuncQT) -> RatFuncQT {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFuncQT> for RatFuncQT {
            type Output = RatFuncQT;
            fn $m(self, rhs: &RatFuncQT) -> RatFuncQT {
                (&self).$m(rhs)
            }
        }
        impl $tr<RatFuncQT> for &RatFuncQT {
            type Output = RatFuncQT;
            fn $m(self, rhs: RatFuncQT) -> RatFuncQT {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: i32, b: u32) -> IntPoly2 {
        IntPoly2::qt(a, b)
    }

    #[test]
    fn cancels_common_factor() {
        let f = RatFuncQT::new(IntPoly2::one_minus(2, 2), IntPoly2::one_minus(1, 1)).unwrap();
        assert_eq!(f.to_string(), "1 + q*t");
        assert_eq!(f.denominator(), &IntPoly2::one());
    }

    #[test]
    fn keeps_reduced_pair() {
        let f = RatFuncQT::new(p(1, 0) - p(0, 1), IntPoly2::one_minus(0, 1)).unwrap();
        assert_eq!(f.to_string(), "(q - t)/(1 - t)");
        assert_eq!(
            f.factored_denominator().unwrap(),
            &[DenFactor { a: 0, b: 1, mult: 1 }]
        );
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RatFuncQT::new(IntPoly2::one(), IntPoly2::zero()),
            Err(PolyError::ZeroDenominator)
        );
    }

    #[test]
    fn factored_detection_with_multiplicity() {
        let den = IntPoly2::one_minus(1, 1).pow(2) * IntPoly2::one_minus(2, 2);
        let f = RatFuncQT::new(IntPoly2::one(), den).unwrap();
        assert_eq!(
            f.factored_denominator().unwrap(),
            &[
                DenFactor { a: 1, b: 1, mult: 2 },
                DenFactor { a: 2, b: 2, mult: 1 }
            ]
        );
    }

    #[test]
    fn normalizes_q_power_and_sign() {
        // (q - t) / (t - q^2) == -(1 - q^-1 t)/(q (1 - q^-2 t))
        let f = RatFuncQT::new(p(1, 0) - p(0, 1), p(0, 1) - p(2, 0)).unwrap();
        assert_eq!(f.to_string(), "(-q^-1 + q^-2*t)/(1 - q^-2*t)");
    }
}
