//! Closed-form zeta functions for the SL2 extension families, the auxiliary
//! integrals behind them, the subgroup-factor solver and the SL3 family.

mod aux;
mod subgroups;
mod topzeta;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::LatticeError;
use crate::polyring::RatFuncQT;

pub use aux::{aux_a, aux_a_closed, aux_areas_hk, aux_b, aux_c, aux_c_closed, AuxPair};
pub use subgroups::{sl3_family_solve, subgroup_factor, wedge2, SubgroupFactorResult};
pub use topzeta::{topological_zeta, LinearFactor, TopZeta};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("identity fails: {0}")]
    IdentityFails(String),
    #[error("no compatible psi: the bracket equation has no solution")]
    NoCompatiblePsi,
    #[error("infeasible: exponent {0} would be negative")]
    Infeasible(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FormulaFamily {
    Sl2Base { m: u32 },
    NaturalPower { n: u32, m: u32 },
    Sym2Power { n: u32, m: u32 },
    /// `p = 2`, one copy of the symmetric square.
    Sym2Z2 { m: u32 },
    /// `m = 1`.
    HkSubgroup { k: u32 },
}

impl FormulaFamily {
    /// Parses a CLI selector; unused parameters are ignored.
    pub fn from_selector(name: &str, n: u32, m: u32, k: u32) -> Result<Self, CatalogError> {
        let f = match name {
            "sl2base" | "sl2" => FormulaFamily::Sl2Base { m },
            "natural" => FormulaFamily::NaturalPower { n, m },
            "sym2" => FormulaFamily::Sym2Power { n, m },
            "sym2z2" => FormulaFamily::Sym2Z2 { m },
            "hk" => FormulaFamily::HkSubgroup { k },
            _ => return Err(CatalogError::InvalidParams(format!("unknown family `{name}`"))),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |s: &str| Err(CatalogError::InvalidParams(s.into()));
        match *self {
            FormulaFamily::Sl2Base { m } if m == 0 => bad("m must be at least 1"),
            FormulaFamily::NaturalPower { n, m } | FormulaFamily::Sym2Power { n, m } => {
                if n == 0 {
                    bad("n must be at least 1")
                } else if m == 0 {
                    bad("m must be at least 1")
                } else {
                    Ok(())
                }
            }
            FormulaFamily::Sym2Z2 { m } if m < 2 => bad("the p = 2 formula needs m >= 2"),
            FormulaFamily::HkSubgroup { k } if k == 0 => bad("k must be at least 1"),
            _ => Ok(()),
        }
    }

    /// The prime the formula is tied to, if any.
    pub fn fixed_prime(&self) -> Option<u64> {
        matches!(self, FormulaFamily::Sym2Z2 { .. }).then_some(2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaBundle {
    pub relative_unshifted: RatFuncQT,
    pub relative_shifted: RatFuncQT,
    pub base: RatFuncQT,
    pub full: RatFuncQT,
}

// shorthand: c q^a t^b
pub(crate) fn mono(c: i64, a: i32, b: u32) -> RatFuncQT {
    &RatFuncQT::constant(c) * &RatFuncQT::qt(a, b)
}

pub(crate) fn om(a: i32, b: u32) -> RatFuncQT {
    RatFuncQT::one_minus(a, b)
}

pub(crate) fn div(a: RatFuncQT, b: RatFuncQT) -> RatFuncQT {
    &a / &b
}

pub(crate) fn sum(xs: &[RatFuncQT]) -> RatFuncQT {
    xs.iter().fold(RatFuncQT::zero(), |s, x| &s + x)
}

pub(crate) fn prod(xs: &[RatFuncQT]) -> RatFuncQT {
    xs.iter().fold(RatFuncQT::one(), |s, x| &s * x)
}

/// `q^{3m}(1 - q^-2 t)/(1 - q t)`
pub fn sl2_base(m: u32) -> RatFuncQT {
    div(mono(1, 3 * m as i32, 0) * om(-2, 1), om(1, 1))
}

fn natural_unshifted(n: u32, m: u32) -> RatFuncQT {
    let n = n as i32;
    let r1 = mono(1, n - 1, 2);
    let r2 = mono(1, 2 * n - 3, 3);
    let d = om(n - 2, 1);
    let alpha = div(prod(&[mono(1, 0, 0) + mono(1, -1, 0), om(-n, 0), om(-1, 1)]), d.clone());
    let beta = div(
        prod(&[mono(-1, -1, 0), om(-n, 0), om(1 - n, 0), mono(1, 0, 0) + mono(1, n - 1, 1)]),
        d,
    );
    let inner = RatFuncQT::one()
        + alpha * div(r1.clone(), RatFuncQT::one() - r1)
        + beta * div(r2.clone(), RatFuncQT::one() - r2);
    mono(1, 2 * n * m as i32, 0) * inner
}

fn natural_shifted(n: u32, m: u32) -> RatFuncQT {
    let n = n as i32;
    let g = sum(&[
        RatFuncQT::one(),
        mono(1, 0, 1),
        mono(1, n, 2) - mono(1, 1, 2),
        mono(-1, n + 1, 3),
        mono(-1, n + 1, 4),
    ]);
    div(
        prod(&[mono(1, 2 * n * m as i32, 0), om(0, 1), g]),
        om(n + 1, 2) * om(2 * n, 3),
    )
}

fn sym2_unshifted(n: u32, m: u32) -> RatFuncQT {
    let n = n as i32;
    let bracket = sum(&[
        mono(1, 0, 1),
        mono(1, n, 2),
        prod(&[mono(1, 1, 0), mono(1, 0, 0) + mono(1, 0, 1), mono(1, 0, 0) + mono(1, n - 2, 2)]),
    ]);
    div(
        prod(&[mono(1, 3 * n * m as i32 - 2, 0), mono(1, 1, 0) - mono(1, 0, 1), om(0, 1), bracket]),
        om(3 * n - 3, 3) * om(n, 2),
    )
}

fn sym2_f(n: u32) -> RatFuncQT {
    let n = n as i32;
    (mono(1, 0, 0) + mono(1, n, 2)) * (mono(1, 0, 0) + mono(1, 1, 1))
        + mono(1, 0, 1) * (mono(1, 0, 0) + mono(1, n + 1, 1))
}

fn sym2_shifted(n: u32, m: u32) -> RatFuncQT {
    let ni = n as i32;
    div(
        prod(&[mono(1, 3 * ni * m as i32, 0), om(0, 1), om(1, 1), sym2_f(n)]),
        om(ni + 2, 2) * om(3 * ni, 3),
    )
}

fn sym2z2_unshifted(m: u32) -> RatFuncQT {
    let e = 3 * m as i32;
    div(
        prod(&[
            mono(1, e - 1, 0),
            mono(1, 1, 0) - mono(1, 0, 1),
            sum(&[mono(1, 3, 1), mono(1, 1, 0), mono(-1, 0, 1)]),
        ]),
        om(1, 2),
    )
}

fn sym2z2_shifted(m: u32) -> RatFuncQT {
    let e = 3 * m as i32;
    div(
        prod(&[mono(1, e + 1, 0), om(0, 1), sum(&[mono(1, 3, 1), mono(1, 0, 0), mono(-1, 0, 1)])]),
        om(3, 2),
    )
}

fn hk_unshifted(k: u32) -> RatFuncQT {
    let ki = k as i32;
    let inner = mono(1, 1, 0) * om(0, k + 1) - mono(1, 0, 2) * om(0, k - 1);
    div(
        prod(&[mono(1, ki, 0), mono(1, 1, 0) - mono(1, 0, 1), inner]),
        om(0, 1).pow(2) * (mono(1, 0, 0) + mono(1, 0, 1)),
    )
}

fn hk_shifted(k: u32) -> RatFuncQT {
    let ki = k as i32;
    let inner = om(k as i32 + 1, k + 1) - mono(1, 1, 2) * om(ki - 1, k - 1);
    div(
        prod(&[mono(1, ki + 2, 0), om(0, 1), inner]),
        om(1, 1).pow(2) * (mono(1, 0, 0) + mono(1, 1, 1)),
    )
}

fn parts(family: &FormulaFamily) -> (RatFuncQT, RatFuncQT, RatFuncQT) {
    match *family {
        FormulaFamily::Sl2Base { m } => (RatFuncQT::one(), RatFuncQT::one(), sl2_base(m)),
        FormulaFamily::NaturalPower { n, m } => {
            (natural_unshifted(n, m), natural_shifted(n, m), sl2_base(m))
        }
        FormulaFamily::Sym2Power { n, m } => (sym2_unshifted(n, m), sym2_shifted(n, m), sl2_base(m)),
        // the abelianisation of the p = 2 base has two extra factors of 2
        FormulaFamily::Sym2Z2 { m } => (
            sym2z2_unshifted(m),
            sym2z2_shifted(m),
            mono(1, 2, 0) * sl2_base(m),
        ),
        FormulaFamily::HkSubgroup { k } => {
            (hk_unshifted(k), hk_shifted(k), mono(1, 2 * k as i32, 0) * sl2_base(1))
        }
    }
}

pub fn formula(family: &FormulaFamily) -> Result<FormulaBundle, CatalogError> {
    family.validate()?;
    let (relative_unshifted, relative_shifted, base) = parts(family);
    let full = &base * &relative_shifted;
    Ok(FormulaBundle { relative_unshifted, relative_shifted, base, full })
}

/// Checks that the unshifted relative form becomes the shifted one under
/// `t -> q t`, and that the full form is the product with the base.
pub fn shift_consistency(family: &FormulaFamily) -> Result<(), CatalogError> {
    if matches!(family, FormulaFamily::Sl2Base { .. }) {
        return Err(CatalogError::InvalidParams("no relative factor for the base".into()));
    }
    let b = formula(family)?;
    if b.relative_unshifted.subst_t_scaled(1) != b.relative_shifted {
        return Err(CatalogError::IdentityFails(format!(
            "{family:?}: shifted relative form {} differs from {}",
            b.relative_unshifted.subst_t_scaled(1),
            b.relative_shifted
        )));
    }
    if b.full != &b.base * &b.relative_shifted {
        return Err(CatalogError::IdentityFails(format!("{family:?}: full != base * relative")));
    }
    Ok(())
}
