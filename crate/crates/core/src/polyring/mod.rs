//! Exact arithmetic in `Z[q, 1/q][t]` and its fraction field.
//!
//! `t` stands for `q^-s`, so the coefficient of `t^k` in a zeta function
//! counts representations of dimension `q^k`.

mod dense;
mod poly2;
mod ratfunc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

pub use poly2::IntPoly2;
pub use ratfunc::{DenFactor, RatFuncQT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator has no unit constant term; no power series in t")]
    NotExpandable,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("denominator vanishes identically at q = 1")]
    DegenerateAtQ1,
    #[error("denominator is not a product of factors 1 - q^a t^b")]
    NoFactoredForm,
    #[error("q must be at least 2")]
    BadQ,
}

/// Truncated power series in `t`; each coefficient is a Laurent polynomial
/// in `q` (stored as an `IntPoly2` free of `t`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTrunc {
    pub coeffs: Vec<IntPoly2>,
}

impl SeriesTrunc {
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Expands `f` as a power series in `t` up to and including `t^k`.
pub fn series_expand(f: &RatFuncQT, k: usize) -> Result<SeriesTrunc, PolyError> {
    let den = f.denominator();
    let d0 = den.t_coeff(0);
    if d0.num_terms() != 1 {
        return Err(PolyError::NotExpandable);
    }
    let (d0_q, _, d0_c) = d0.first_term().unwrap();
    if !(d0_c.is_one() || *d0_c == BigInt::from(-1)) {
        return Err(PolyError::NotExpandable);
    }
    let d0_inv = IntPoly2::monomial(d0_c.clone(), -d0_q, 0);
    let dens: Vec<IntPoly2> = (0..=k as u32).map(|i| den.t_coeff(i)).collect();
    let mut out: Vec<IntPoly2> = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut acc = f.numerator().t_coeff(n as u32);
        for i in 1..=n {
            if !dens[i].is_zero() {
                acc = acc - &dens[i] * &out[n - i];
            }
        }
        out.push(&acc * &d0_inv);
    }
    Ok(SeriesTrunc { coeffs: out })
}

fn check_q(q: &BigInt) -> Result<BigRational, PolyError> {
    if *q < BigInt::from(2) {
        return Err(PolyError::BadQ);
    }
    Ok(BigRational::from_integer(q.clone()))
}

/// Exact value of `f(q, t)`.
pub fn specialize(f: &RatFuncQT, q: &BigInt, t: &BigRational) -> Result<BigRational, PolyError> {
    f.eval(&check_q(q)?, t)
}

/// Substitutes `q` in every series coefficient.
pub fn specialize_series(s: &SeriesTrunc, q: &BigInt) -> Result<Vec<BigRational>, PolyError> {
    let qr = check_q(q)?;
    let zero = BigRational::zero();
    Ok(s.coeffs.iter().map(|c| c.eval(&qr, &zero)).collect())
}

/// Substitutes `q = 1` and renormalizes.
pub fn reduced_zeta(f: &RatFuncQT) -> Result<RatFuncQT, PolyError> {
    let den = f.denominator().at_q_one();
    if den.is_zero() {
        return Err(PolyError::DegenerateAtQ1);
    }
    RatFuncQT::new(f.numerator().at_q_one(), den)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbscissaReport {
    /// `(numerator, denominator)` of the rational abscissa.
    pub alpha: (i64, i64),
    pub witness_factor: (i32, u32),
    /// Real poles removed by zeros of the numerator, as `(a, b)` pairs.
    pub cancelled_factors: Vec<(i32, u32)>,
}

impl AbscissaReport {
    pub fn alpha_rational(&self) -> BigRational {
        BigRational::new(self.alpha.0.into(), self.alpha.1.into())
    }
}

/// Largest real pole `s = a/b` contributed by a factor `1 - q^a t^b`.
///
/// Factors sharing the same ratio share the real pole; its order is the sum
/// of their multiplicities minus the multiplicity of the primitive factor
/// `1 - q^(a/g) t^(b/g)` in the numerator.
pub fn abscissa(f: &RatFuncQT) -> Result<AbscissaReport, PolyError> {
    let factors = f.factored_denominator().ok_or(PolyError::NoFactoredForm)?;
    let mut by_ratio: Vec<((i64, i64), u32, (i32, u32))> = Vec::new();
    for fac in factors {
        let g = (fac.a as i64).gcd(&(fac.b as i64)).max(1);
        let key = (fac.a as i64 / g, fac.b as i64 / g);
        match by_ratio.iter_mut().find(|e| e.0 == key) {
            Some(e) => e.1 += fac.mult,
            None => by_ratio.push((key, fac.mult, (fac.a, fac.b))),
        }
    }
    let mut best: Option<(BigRational, (i64, i64), (i32, u32))> = None;
    let mut cancelled = Vec::new();
    for (key, order, witness) in by_ratio {
        let prim = IntPoly2::one_minus(key.0 as i32, key.1 as u32);
        let mut zeros = 0;
        let mut n = f.numerator().clone();
        while zeros < order {
            match n.exact_div(&prim) {
                Some(q) => {
                    n = q;
                    zeros += 1;
                }
                None => break,
            }
        }
        if zeros >= order {
            cancelled.push((key.0 as i32, key.1 as u32));
            continue;
        }
        let r = BigRational::new(key.0.into(), key.1.into());
        if best.as_ref().is_none_or(|b| r > b.0) {
            best = Some((r, key, witness));
        }
    }
    let (_, alpha, witness_factor) = best.ok_or(PolyError::NoFactoredForm)?;
    cancelled.sort();
    Ok(AbscissaReport {
        alpha,
        witness_factor,
        cancelled_factors: cancelled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2_base() -> RatFuncQT {
        RatFuncQT::new(
            IntPoly2::qt(3, 0) - IntPoly2::qt(1, 1),
            IntPoly2::one_minus(1, 1),
        )
        .unwrap()
    }

    #[test]
    fn base_series() {
        let s = series_expand(&sl2_base(), 2).unwrap();
        let rendered: Vec<String> = s.coeffs.iter().map(|c| c.to_string()).collect();
        assert_eq!(rendered, ["q^3", "-q + q^4", "-q^2 + q^5"]);
    }

    #[test]
    fn geometric_series() {
        let f = RatFuncQT::new(IntPoly2::one(), IntPoly2::one_minus(0, 1)).unwrap();
        let s = series_expand(&f, 3).unwrap();
        assert!(s.coeffs.iter().all(|c| c.is_one()));
        assert_eq!(s.order(), 3);
    }

    #[test]
    fn not_expandable() {
        let f = RatFuncQT::new(IntPoly2::one(), IntPoly2::qt(0, 1)).unwrap();
        assert_eq!(series_expand(&f, 2), Err(PolyError::NotExpandable));
    }

    #[test]
    fn specialize_base_at_s3() {
        let v = specialize(
            &sl2_base(),
            &BigInt::from(3),
            &BigRational::new(1.into(), 27.into()),
        )
        .unwrap();
        assert_eq!(v, BigRational::new(121.into(), 4.into()));
        let s = series_expand(&sl2_base(), 1).unwrap();
        let c = specialize_series(&s, &BigInt::from(3)).unwrap();
        assert_eq!(c, vec![BigRational::from_integer(27.into()), BigRational::from_integer(78.into())]);
    }

    #[test]
    fn pole_detected() {
        let v = specialize(&sl2_base(), &BigInt::from(3), &BigRational::new(1.into(), 3.into()));
        assert_eq!(v, Err(PolyError::PoleAtPoint));
    }

    #[test]
    fn reduced_trivial() {
        let f = RatFuncQT::new(IntPoly2::one_minus(1, 1), IntPoly2::one_minus(1, 1)).unwrap();
        assert_eq!(reduced_zeta(&f).unwrap(), RatFuncQT::one());
        assert_eq!(reduced_zeta(&sl2_base()).unwrap(), RatFuncQT::one());
    }

    #[test]
    fn degenerate_at_q_one() {
        let den = IntPoly2::qt(1, 0) - IntPoly2::one();
        let f = RatFuncQT::new(IntPoly2::one(), den).unwrap();
        assert_eq!(reduced_zeta(&f), Err(PolyError::DegenerateAtQ1));
    }

    #[test]
    fn abscissa_base_and_cancellation() {
        let r = abscissa(&sl2_base()).unwrap();
        assert_eq!(r.alpha, (1, 1));
        let f = RatFuncQT::new(
            IntPoly2::one_minus(0, 1),
            IntPoly2::one_minus(1, 1) * IntPoly2::one_minus(3, 2),
        )
        .unwrap();
        let r = abscissa(&f).unwrap();
        assert_eq!(r.alpha, (3, 2));
    }
}
