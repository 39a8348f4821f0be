use num_rational::BigRational;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{OracleError, OrbitCensus};

/// Coefficients over `t^k` (dimension `p^k`) with finality flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusSeries {
    pub coeffs: Vec<u64>,
    pub final_mask: Vec<bool>,
}

impl OrbitCensus {
    pub fn to_series(&self) -> CensusSeries {
        let Some(top) = self.max_dim_exp() else {
            return CensusSeries { coeffs: vec![], final_mask: vec![] };
        };
        CensusSeries {
            coeffs: (0..=top).map(|k| self.coefficient(k)).collect(),
            final_mask: (0..=top).map(|k| self.is_final(k)).collect(),
        }
    }

    /// Coefficients of the shifted relative series, `a * r_a`.
    pub fn weighted_series(&self) -> CensusSeries {
        let mut s = self.to_series();
        for (k, c) in s.coeffs.iter_mut().enumerate() {
            *c *= self.prime.pow(k as u32);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvolutionRow {
    pub k: u32,
    pub lhs: u128,
    pub rhs: u128,
    pub pass: bool,
}

/// Checks `r_n(G) = sum_{ab = n} r_a(G, H) a r_b(H)` for `n = p^k`, `k <= max_k`.
pub fn convolution_check(
    full: &OrbitCensus,
    relative: &OrbitCensus,
    base: &OrbitCensus,
    max_k: u32,
) -> Result<Vec<ConvolutionRow>, OracleError> {
    let p = full.prime as u128;
    let mut rows = Vec::new();
    for k in 0..=max_k {
        if !full.is_final(k) {
            return Err(OracleError::NonFinalCoefficient { which: "full", k });
        }
        let mut rhs = 0u128;
        for i in 0..=k {
            if !relative.is_final(i) {
                return Err(OracleError::NonFinalCoefficient { which: "relative", k: i });
            }
            if !base.is_final(k - i) {
                return Err(OracleError::NonFinalCoefficient { which: "base", k: k - i });
            }
            rhs += relative.coefficient(i) as u128 * p.pow(i) * base.coefficient(k - i) as u128;
        }
        let lhs = full.coefficient(k) as u128;
        rows.push(ConvolutionRow { k, lhs, rhs, pass: lhs == rhs });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Thety {
    Constant { ratio: BigRational, compared: Vec<u32> },
    NotConstant { k: u32, a: u64, b: u64 },
    /// No coefficient final in both censuses.
    Undetermined,
}

/// Compares `r_{p^k}(a)` with `r_{p^k}(b)` over the coefficients final in both.
pub fn thetyspectral_ratio(a: &OrbitCensus, b: &OrbitCensus) -> Thety {
    let top = a.max_dim_exp().max(b.max_dim_exp()).unwrap_or(0);
    let mut ratio: Option<BigRational> = None;
    let mut compared = Vec::new();
    for k in 0..=top {
        if !(a.is_final(k) && b.is_final(k)) {
            continue;
        }
        let (x, y) = (a.coefficient(k), b.coefficient(k));
        compared.push(k);
        if y == 0 {
            if x != 0 {
                return Thety::NotConstant { k, a: x, b: y };
            }
            continue;
        }
        let r = BigRational::new(BigInt::from(x), BigInt::from(y));
        match &ratio {
            None => ratio = Some(r),
            Some(l) if *l == r => {}
            Some(_) => return Thety::NotConstant { k, a: x, b: y },
        }
    }
    match ratio {
        Some(r) if !r.is_zero() || compared.iter().all(|&k| a.coefficient(k) == 0) => {
            Thety::Constant { ratio: r, compared }
        }
        _ => Thety::Undetermined,
    }
}
