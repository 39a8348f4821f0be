//! Auxiliary integrals over the regions of the shell decomposition.
//! Each closed form is paired with an independent route and compared.

use super::{div, formula, mono, om, prod, sum, CatalogError, FormulaFamily};
use crate::polyring::RatFuncQT;

/// Two independent evaluations of the same quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxPair {
    pub closed: RatFuncQT,
    pub summed: RatFuncQT,
}

fn check_nj(n: u32, j: u32) -> Result<(), CatalogError> {
    if n == 0 || j == 0 {
        return Err(CatalogError::InvalidParams("n and j must be at least 1".into()));
    }
    Ok(())
}

/// Integral of `||{1} u p^-j Z||^{-s-1}` over `(pO^{i-1} x O^{n-i}) Z`.
pub fn aux_b(n: u32, j: u32, i: u32) -> Result<RatFuncQT, CatalogError> {
    check_nj(n, j)?;
    if i == 0 || i > n {
        return Err(CatalogError::InvalidParams(format!("need 1 <= i <= n, got i = {i}")));
    }
    let (n, j, i) = (n as i32, j as i32, i as i32);
    let geo = div(om(j * (n - 2), j as u32), om(n - 2, 1));
    let inner = RatFuncQT::one() + prod(&[om(1 - n, 0), geo, mono(1, n - 2, 1)]);
    Ok(mono(1, -j * (n - 1), 0) * inner - om(1 - i, 0) * mono(1, -j, j as u32))
}

/// `A(j)` as the two-term closed form.
pub fn aux_a_closed(n: u32, j: u32) -> Result<RatFuncQT, CatalogError> {
    check_nj(n, j)?;
    let (n, j) = (n as i32, j as i32);
    let d = om(n - 2, 1);
    let first = div(prod(&[mono(1, 0, 0) + mono(1, -1, 0), om(-n, 0), om(-1, 1)]), d.clone());
    let second = div(
        prod(&[mono(1, -1, 0), om(-n, 0), om(1 - n, 0), mono(1, 0, 0) + mono(1, n - 1, 1)]),
        d,
    );
    Ok(mono(1, -j * (n - 1), 0) * first - mono(1, -j, j as u32) * second)
}

/// `A(j)` both ways: closed form and `sum_i (1 - q^-2) q^{1-i} B_n(j, i)`.
pub fn aux_a(n: u32, j: u32) -> Result<AuxPair, CatalogError> {
    let closed = aux_a_closed(n, j)?;
    let mut terms = Vec::new();
    for i in 1..=n {
        terms.push(om(-2, 0) * mono(1, 1 - i as i32, 0) * aux_b(n, j, i)?);
    }
    let summed = sum(&terms);
    if closed != summed {
        return Err(CatalogError::IdentityFails(format!("A({j}) for n = {n}: {closed} vs {summed}")));
    }
    Ok(AuxPair { closed, summed })
}

/// `C(j)` as a closed form.
pub fn aux_c_closed(n: u32, j: u32) -> Result<RatFuncQT, CatalogError> {
    check_nj(n, j)?;
    let (n, j) = (n as i32, j as i32);
    let d = om(2 * n - 3, 1);
    let first = div(prod(&[om(-3, 0), om(-n, 0), om(-1, 1)]), om(-1, 0) * d.clone());
    let lin = sum(&[
        mono(1, 0, 0),
        mono(1, -1, 0),
        mono(1, -n, 0),
        prod(&[sum(&[mono(1, 0, 0), mono(1, 1, 0), mono(1, n, 0)]), mono(1, n - 2, 1)]),
    ]);
    let second = div(prod(&[om(-n, 0), om(1 - n, 0), mono(1, -1, 0), lin]), d);
    Ok(mono(1, -2 * j * (n - 1), 0) * first - mono(1, -j, j as u32) * second)
}

/// `C(j)` both ways: closed form and `(1 - q^-3) sum_k q^-k B_{2n-1}(j, 2k+1)`.
pub fn aux_c(n: u32, j: u32) -> Result<AuxPair, CatalogError> {
    let closed = aux_c_closed(n, j)?;
    let mut terms = Vec::new();
    for k in 0..n {
        terms.push(mono(1, -(k as i32), 0) * aux_b(2 * n - 1, j, 2 * k + 1)?);
    }
    let summed = om(-3, 0) * sum(&terms);
    if closed != summed {
        return Err(CatalogError::IdentityFails(format!("C({j}) for n = {n}: {closed} vs {summed}")));
    }
    Ok(AuxPair { closed, summed })
}

/// The five region values for `H_k`; `q^{k+2}` times their sum is the
/// relative zeta function.
pub fn aux_areas_hk(k: u32) -> Result<[RatFuncQT; 5], CatalogError> {
    if k == 0 {
        return Err(CatalogError::InvalidParams("k must be at least 1".into()));
    }
    let u = om(-1, 0);
    let tk = om(0, k);
    let areas = [
        mono(1, -2, 0),
        div(mono(1, -1, 0) * u.clone(), om(0, 2)),
        div(prod(&[u.clone(), u.clone(), tk.clone()]), om(0, 1) * om(0, 2)),
        div(u.clone() * mono(1, 0, k), om(0, 2)),
        div(prod(&[mono(1, -1, 0), u, tk]), om(0, 1)),
    ];
    let total = mono(1, k as i32 + 2, 0) * sum(&areas);
    let rel = formula(&FormulaFamily::HkSubgroup { k })?.relative_unshifted;
    if total != rel {
        return Err(CatalogError::IdentityFails(format!("area sum for k = {k}: {total} vs {rel}")));
    }
    Ok(areas)
}
