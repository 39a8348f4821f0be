//! Lie lattices over an unramified p-adic ring, given by integer structure
//! constants, together with semidirect sums, sublattices and the potency /
//! FAb predicates.

mod builtins;
mod json;
pub mod linalg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

pub use builtins::{builtin, parse_builtin, BuiltinParams};
pub use json::{load_spec_file, parse_spec_json, LatticeInput};
use linalg::{inverse, q_int, QMat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("action is not a Lie homomorphism at ({0}, {1})")]
    NotAHomomorphism(String, String),
    #[error("action is not faithful (kernel of rank {0})")]
    NotFaithful(usize),
    #[error("bracket [{0}, {1}] leaves the sublattice")]
    NotClosedUnderBracket(String, String),
    #[error("basis change is singular or has the wrong size")]
    BadBasisChange,
    #[error("invalid lattice spec: {0}")]
    Invalid(String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
}

/// A Lie lattice: `[x_i, x_j] = sum_k c[i][j][k] x_k`.
///
/// The structure constants are those of the unscaled lattice; the level `m`
/// only says that the group in question is `exp(p^m L)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeSpec {
    pub name: String,
    pub basis: Vec<String>,
    pub brackets: Vec<Vec<Vec<i64>>>,
    pub prime: u64,
    pub residue_degree: u32,
    pub level_m: u32,
}

/// An abelian module `O^n` with an action of a base lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemidirectSpec {
    pub base: LatticeSpec,
    pub module_labels: Vec<String>,
    /// `action[i]` is the `n x n` matrix of the base basis element `i`.
    pub action: Vec<Vec<Vec<i64>>>,
}

impl SemidirectSpec {
    pub fn module_rank(&self) -> usize {
        self.module_labels.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LieViolation {
    Antisymmetry { i: String, j: String },
    Jacobi { i: String, j: String, k: String },
}

impl std::fmt::Display for LieViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LieViolation::Antisymmetry { i, j } => write!(f, "antisymmetry fails for ({i}, {j})"),
            LieViolation::Jacobi { i, j, k } => write!(f, "Jacobi identity fails at ({i}, {j}, {k})"),
        }
    }
}

/// Coordinates of a bracket in the dual basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LinearForm {
    pub coeffs: Vec<i64>,
}

impl LinearForm {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Matrix of linear forms `[x, y]^*` for `x` in `rows`, `y` in `cols`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Vec<LinearForm>>,
    /// Labels of the ambient dual coordinates.
    pub labels: Vec<String>,
}

impl CommMatrix {
    pub fn transpose(&self) -> CommMatrix {
        CommMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries: (0..self.cols.len())
                .map(|j| (0..self.rows.len()).map(|i| self.entries[i][j].clone()).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn negate(&self) -> CommMatrix {
        let mut m = self.clone();
        for row in &mut m.entries {
            for e in row {
                for c in &mut e.coeffs {
                    *c = -*c;
                }
            }
        }
        m
    }
}

impl LatticeSpec {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    /// An abelian lattice of the given dimension.
    pub fn abelian(name: &str, labels: &[&str], prime: u64, level_m: u32) -> Self {
        let d = labels.len();
        LatticeSpec {
            name: name.to_string(),
            basis: labels.iter().map(|s| s.to_string()).collect(),
            brackets: vec![vec![vec![0; d]; d]; d],
            prime,
            residue_degree: 1,
            level_m,
        }
    }

    /// Bracket of integer coordinate vectors.
    pub fn bracket_vec(&self, u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
        let d = self.dim();
        let mut out = vec![BigInt::zero(); d];
        for i in 0..d {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if v[j].is_zero() || i == j {
                    continue;
                }
                let s = &u[i] * &v[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.brackets[i][j][k];
                    if c != 0 {
                        *o += &s * c;
                    }
                }
            }
        }
        out
    }

    /// The `d x C(d,2)` matrix whose column `(i<j)` holds `[x_i, x_j]`.
    pub fn bracket_matrix(&self) -> QMat {
        let d = self.dim();
        let pairs = pairs(d);
        (0..d)
            .map(|k| pairs.iter().map(|&(i, j)| q_int(self.brackets[i][j][k])).collect())
            .collect()
    }
}

pub(crate) fn pairs(d: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            v.push((i, j));
        }
    }
    v
}

/// Checks antisymmetry and the Jacobi identity exactly.
pub fn validate_lie(spec: &LatticeSpec) -> Result<(), LieViolation> {
    let d = spec.dim();
    let c = &spec.brackets;
    for i in 0..d {
        for j in i..d {
            if (0..d).any(|k| c[i][j][k] != -c[j][i][k]) {
                return Err(LieViolation::Antisymmetry {
                    i: spec.basis[i].clone(),
                    j: spec.basis[j].clone(),
                });
            }
        }
    }
    let unit = |i: usize| -> Vec<BigInt> {
        (0..d).map(|k| BigInt::from((k == i) as i64)).collect()
    };
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let (xi, xj, xk) = (unit(i), unit(j), unit(k));
                let a = spec.bracket_vec(&xi, &spec.bracket_vec(&xj, &xk));
                let b = spec.bracket_vec(&xj, &spec.bracket_vec(&xk, &xi));
                let cc = spec.bracket_vec(&xk, &spec.bracket_vec(&xi, &xj));
                if (0..d).any(|l| !(&a[l] + &b[l] + &cc[l]).is_zero()) {
                    return Err(LieViolation::Jacobi {
                        i: spec.basis[i].clone(),
                        j: spec.basis[j].clone(),
                        k: spec.basis[k].clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

fn mat_mul_i(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

/// The lattice `base + O^n` with `[x, v] = sigma(x) v` and `[v, v'] = 0`.
pub fn semidirect(sd: &SemidirectSpec) -> Result<LatticeSpec, LatticeError> {
    let base = &sd.base;
    let b = base.dim();
    let n = sd.module_rank();
    if sd.action.len() != b || sd.action.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
        return Err(LatticeError::Invalid("action matrices have the wrong shape".into()));
    }
    for i in 0..b {
        for j in 0..b {
            let ab = mat_mul_i(&sd.action[i], &sd.action[j]);
            let ba = mat_mul_i(&sd.action[j], &sd.action[i]);
            for r in 0..n {
                for c in 0..n {
                    let lhs: i64 = (0..b).map(|k| base.brackets[i][j][k] * sd.action[k][r][c]).sum();
                    if lhs != ab[r][c] - ba[r][c] {
                        return Err(LatticeError::NotAHomomorphism(
                            base.basis[i].clone(),
                            base.basis[j].clone(),
                        ));
                    }
                }
            }
        }
    }
    // kernel of x -> sigma(x) as a linear map Q^b -> Q^(n*n)
    let flat: QMat = sd
        .action
        .iter()
        .map(|m| m.iter().flatten().map(|&x| q_int(x)).collect())
        .collect();
    let rk = if n == 0 { 0 } else { linalg::rank(&flat) };
    if rk < b {
        return Err(LatticeError::NotFaithful(b - rk));
    }
    let d = b + n;
    let mut c = vec![vec![vec![0i64; d]; d]; d];
    for i in 0..b {
        for j in 0..b {
            c[i][j][..b].copy_from_slice(&base.brackets[i][j]);
        }
        for v in 0..n {
            for r in 0..n {
                let x = sd.action[i][r][v];
                c[i][b + v][b + r] = x;
                c[b + v][i][b + r] = -x;
            }
        }
    }
    let mut basis = base.basis.clone();
    basis.extend(sd.module_labels.iter().cloned());
    Ok(LatticeSpec {
        name: format!("{}+module", base.name),
        basis,
        brackets: c,
        prime: base.prime,
        residue_degree: base.residue_degree,
        level_m: base.level_m,
    })
}

/// Sublattice spanned by the columns of `xi`, in its own basis.
pub fn sublattice(spec: &LatticeSpec, xi: &QMat) -> Result<LatticeSpec, LatticeError> {
    let d = spec.dim();
    if xi.len() != d || xi.iter().any(|r| r.len() != d) {
        return Err(LatticeError::BadBasisChange);
    }
    if xi.iter().flatten().any(|x| !x.is_integer()) {
        return Err(LatticeError::Invalid("basis change must have integral image".into()));
    }
    let inv = inverse(xi).ok_or(LatticeError::BadBasisChange)?;
    let col = |i: usize| -> Vec<BigInt> { (0..d).map(|k| xi[k][i].to_integer()).collect() };
    let mut c = vec![vec![vec![0i64; d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let br = spec.bracket_vec(&col(i), &col(j));
            for k in 0..d {
                let mut acc = BigRational::zero();
                for (l, x) in br.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &inv[k][l] * BigRational::from_integer(x.clone());
                    }
                }
                if !acc.is_integer() {
                    return Err(LatticeError::NotClosedUnderBracket(
                        spec.basis[i].clone(),
                        spec.basis[j].clone(),
                    ));
                }
                c[i][j][k] = i64::try_from(acc.to_integer())
                    .map_err(|_| LatticeError::Invalid("structure constant overflow".into()))?;
            }
        }
    }
    let basis = (0..d)
        .map(|i| {
            let v = &xi[i][i];
            let offdiag = (0..d).any(|k| k != i && !xi[k][i].is_zero());
            if !offdiag && v.abs() == q_int(1) {
                spec.basis[i].clone()
            } else {
                format!("{}'", spec.basis[i])
            }
        })
        .collect();
    Ok(LatticeSpec {
        name: format!("{}-sub", spec.name),
        basis,
        brackets: c,
        ..spec.clone()
    })
}

pub fn commutator_matrix(spec: &LatticeSpec, rows: &[usize], cols: &[usize]) -> CommMatrix {
    CommMatrix {
        rows: rows.to_vec(),
        cols: cols.to_vec(),
        entries: rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| LinearForm {
                        coeffs: spec.brackets[r][c].clone(),
                    })
                    .collect()
            })
            .collect(),
        labels: spec.basis.clone(),
    }
}

/// True iff the brackets span a full-rank subspace over `Q`.
pub fn is_fab(spec: &LatticeSpec) -> bool {
    let d = spec.dim();
    d > 0 && linalg::rank(&spec.bracket_matrix()) == d
}

/// Sufficient condition for `exp(p^m L)` to be potent (unramified case).
pub fn permissible(spec: &LatticeSpec, m: u32) -> bool {
    if spec.prime == 2 {
        m >= 2
    } else {
        m >= 1
    }
}

/// Sufficient condition for every semidirect extension to stay potent.
pub fn soundly_permissible(spec: &LatticeSpec, m: u32) -> bool {
    permissible(spec, m)
}

/// Direct check of `gamma_{p-1}(p^m L) ⊆ p^(m+1) L` (`gamma_2 ⊆ 2^(m+2) L` for `p = 2`).
pub fn potency_check(spec: &LatticeSpec, m: u32) -> bool {
    let d = spec.dim();
    let p = BigInt::from(spec.prime);
    let (steps, target) = if spec.prime == 2 {
        (2usize, p.pow(m + 2))
    } else {
        (spec.prime as usize - 1, p.pow(m + 1))
    };
    let pm = p.pow(m);
    let scaled: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|k| if k == i { pm.clone() } else { BigInt::zero() }).collect())
        .collect();
    let mut gamma = scaled.clone();
    for _ in 1..steps {
        let mut next = Vec::new();
        for v in &gamma {
            for w in &scaled {
                next.push(spec.bracket_vec(v, w));
            }
        }
        gamma = linalg::z_span_basis(next);
    }
    gamma.iter().flatten().all(|x| (x % &target).is_zero())
}
