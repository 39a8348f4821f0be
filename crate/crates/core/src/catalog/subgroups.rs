use num_traits::Zero;
use serde::Serialize;

use super::CatalogError;
use crate::lattice::linalg::{det, matmul, rank, solve_left, vp_rat, QMat};
use crate::lattice::{pairs, sublattice, LatticeSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupFactorResult {
    /// Rational entries rendered as strings.
    #[serde(serialize_with = "ser_qmat")]
    pub psi: QMat,
    /// The zeta functions differ by the factor `q^factor_exponent`.
    pub factor_exponent: i64,
}

fn ser_qmat<S: serde::Serializer>(m: &QMat, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    rows.serialize(s)
}

/// `xi ^ xi` on the exterior square, in the basis `e_i ^ e_j`, `i < j`.
pub fn wedge2(xi: &QMat) -> QMat {
    let pr = pairs(xi.len());
    pr.iter()
        .map(|&(k, l)| {
            pr.iter()
                .map(|&(i, j)| &xi[k][i] * &xi[l][j] - &xi[l][i] * &xi[k][j])
                .collect()
        })
        .collect()
}

/// Solves `psi * beta = beta * (xi ^ xi)` for the sublattice spanned by the
/// columns of `xi` and reports the exponent of the resulting zeta factor.
pub fn subgroup_factor(spec: &LatticeSpec, xi: &QMat) -> Result<SubgroupFactorResult, CatalogError> {
    sublattice(spec, xi)?;
    let d = spec.dim();
    let beta = spec.bracket_matrix();
    let target = matmul(&beta, &wedge2(xi));
    let psi = solve_left(&beta, &target).ok_or(CatalogError::NoCompatiblePsi)?;
    if rank(&beta) < d {
        return Err(CatalogError::InvalidParams(
            "bracket matrix has rank below the dimension; psi is not determined".into(),
        ));
    }
    let dpsi = det(&psi);
    let dxi = det(xi);
    if dpsi.is_zero() {
        return Err(CatalogError::NoCompatiblePsi);
    }
    let p = spec.prime;
    let factor_exponent = (vp_rat(&dpsi, p) - vp_rat(&dxi, p)) * spec.residue_degree as i64;
    Ok(SubgroupFactorResult { psi, factor_exponent })
}

/// Exponents `(k1, .., k8)` of the diagonal sublattice of `sl3` in the
/// basis `h12, h23, e12, e13, e23, f21, f31, f32`.
pub fn sl3_family_solve(k6: u32, k7: u32, k8: u32) -> Result<[u32; 8], CatalogError> {
    let (k6, k7, k8) = (k6 as i64, k7 as i64, k8 as i64);
    let k1 = k6 - k7 + k8;
    let v = [k1, k1, 2 * k1 - k6, 2 * k1 - k7, 2 * k1 - k8, k6, k7, k8];
    if let Some(i) = v.iter().position(|&x| x < 0) {
        return Err(CatalogError::Infeasible(format!("k{} = {}", i + 1, v[i])));
    }
    Ok(v.map(|x| x as u32))
}
