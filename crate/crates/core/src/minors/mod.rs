//! Pfaffian minors of skew commutator matrices and all minors of
//! rectangular commutator blocks, as sets of polynomials whose coefficients
//! carry their p-adic valuation explicitly.

mod mpoly;
mod polyset;

use thiserror::Error;

pub use crate::lattice::{CommMatrix, LinearForm};
pub use mpoly::MPoly;
pub use polyset::{PCoef, PPoly, PolySet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinorError {
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("cannot parse polynomial `{0}`")]
    Parse(String),
}

fn entry_poly(f: &LinearForm) -> MPoly {
    MPoly::linear(&f.coeffs)
}

fn is_skew(m: &CommMatrix) -> bool {
    if m.rows != m.cols {
        return false;
    }
    let n = m.rows.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            m.entries[i][j]
                .coeffs
                .iter()
                .zip(&m.entries[j][i].coeffs)
                .all(|(a, b)| *a == -*b)
        })
    })
}

/// Pfaffian of a skew matrix of polynomials, expanding along the first row.
pub fn pfaffian(a: &[Vec<MPoly>], nvars: usize) -> MPoly {
    let n = a.len();
    if n == 0 {
        return MPoly::constant(1, nvars);
    }
    if n % 2 == 1 {
        return MPoly::zero(nvars);
    }
    let mut acc = MPoly::zero(nvars);
    for j in 1..n {
        if a[0][j].is_zero() {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor: Vec<Vec<MPoly>> = keep
            .iter()
            .map(|&r| keep.iter().map(|&c| a[r][c].clone()).collect())
            .collect();
        let term = a[0][j].mul(&pfaffian(&minor, nvars));
        // sign (-1)^(j+1) with 0-based j
        acc = if j % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Determinant by Laplace expansion along the first row.
pub fn determinant(a: &[Vec<MPoly>], nvars: usize) -> MPoly {
    let n = a.len();
    if n == 0 {
        return MPoly::constant(1, nvars);
    }
    let mut acc = MPoly::zero(nvars);
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MPoly>> = (1..n)
            .map(|r| (0..n).filter(|&c| c != j).map(|c| a[r][c].clone()).collect())
            .collect();
        let term = a[0][j].mul(&determinant(&minor, nvars));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Pfaffians of all even principal submatrices, including the empty one.
pub fn pfaffian_minors(m: &CommMatrix, prime: u64) -> Result<PolySet, MinorError> {
    if !is_skew(m) {
        return Err(MinorError::NotSkew);
    }
    let nv = m.labels.len();
    let full: Vec<Vec<MPoly>> = m.entries.iter().map(|r| r.iter().map(entry_poly).collect()).collect();
    let n = m.rows.len();
    let mut set = PolySet::new(m.labels.clone(), prime);
    for k in (0..=n).step_by(2) {
        for s in subsets(n, k) {
            let sub: Vec<Vec<MPoly>> = s
                .iter()
                .map(|&r| s.iter().map(|&c| full[r][c].clone()).collect())
                .collect();
            set.insert_mpoly(&pfaffian(&sub, nv));
        }
    }
    Ok(set)
}

/// All minors of all sizes, including the empty one.
pub fn matrix_minors(m: &CommMatrix, prime: u64) -> PolySet {
    let nv = m.labels.len();
    let full: Vec<Vec<MPoly>> = m.entries.iter().map(|r| r.iter().map(entry_poly).collect()).collect();
    let (r, c) = (m.rows.len(), m.cols.len());
    let mut set = PolySet::new(m.labels.clone(), prime);
    for k in 0..=r.min(c) {
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let sub: Vec<Vec<MPoly>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| full[i][j].clone()).collect())
                    .collect();
                set.insert_mpoly(&determinant(&sub, nv));
            }
        }
    }
    set
}

/// Compares the Pfaffian set of the full matrix, restricted to the block's
/// row coordinates, with the minor set of the block.
pub fn block_reduction_check(full: &CommMatrix, block: &CommMatrix, prime: u64) -> bool {
    let Ok(pf) = pfaffian_minors(full, prime) else {
        return false;
    };
    pf.restrict(&block.rows) == matrix_minors(block, prime).restrict(&block.rows)
}

/// Coefficient bookkeeping for the substitution `w -> p^-j w`: each term's
/// p-exponent drops by `j * degree`. Returns the set and `D * j` with `D`
/// the maximal total degree.
pub fn rescale_set(s: &PolySet, j: u32) -> (PolySet, u32) {
    (s.rescaled(j), s.max_degree() * j)
}
