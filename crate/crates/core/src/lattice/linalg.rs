//! Small exact linear algebra over `Q` and `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QMat = Vec<Vec<BigRational>>;

pub fn q_int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn qmat_from_ints(rows: &[Vec<i64>]) -> QMat {
    rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect()
}

pub fn identity(d: usize) -> QMat {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { q_int(1) } else { q_int(0) }).collect())
        .collect()
}

pub fn diag(entries: &[BigRational]) -> QMat {
    let d = entries.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { entries[i].clone() } else { q_int(0) })
                .collect()
        })
        .collect()
}

pub fn matmul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn transpose(a: &QMat) -> QMat {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(a: &mut QMat) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &QMat) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

pub fn det(a: &QMat) -> BigRational {
    let n = a.len();
    let mut m = a.clone();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let v = &m[c][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
    }
    d
}

pub fn inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut aug: QMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { q_int(1) } else { q_int(0) }));
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `X * a = b` for `X`; `None` if some row of `b` is outside the row
/// space of `a`. Free variables are set to zero.
pub fn solve_left(a: &QMat, b: &QMat) -> Option<QMat> {
    let at = transpose(a);
    let bt = transpose(b);
    let k = at.len();
    let unknowns = at.first().map_or(0, |r| r.len());
    let rhs_cols = bt.first().map_or(0, |r| r.len());
    let mut aug: QMat = (0..k)
        .map(|i| {
            let mut row = at[i].clone();
            row.extend(bt[i].iter().cloned());
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.iter().any(|&c| c >= unknowns) {
        return None;
    }
    let mut xt = vec![vec![BigRational::zero(); rhs_cols]; unknowns];
    for (r, &c) in piv.iter().enumerate() {
        for j in 0..rhs_cols {
            xt[c][j] = aug[r][unknowns + j].clone();
        }
    }
    Some(transpose(&xt))
}

/// p-adic valuation of a nonzero rational.
pub fn vp_rat(x: &BigRational, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    vp_int(x.numer(), p) - vp_int(x.denom(), p)
}

pub fn vp_int(x: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while !x.is_zero() && x.is_multiple_of(&p) {
        x /= &p;
        v += 1;
    }
    v
}

/// Row basis (echelon form) of the Z-span of the given integer vectors.
pub fn z_span_basis(vectors: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors
        .into_iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let m = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            let pivot = rows[m].clone();
            for &i in &nz {
                if i != m {
                    let f = rows[i][c].div_floor(&pivot[c]);
                    for j in 0..cols {
                        let v = &pivot[j] * &f;
                        rows[i][j] -= v;
                    }
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][c].is_zero()) {
            out.push(rows.swap_remove(i));
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    out
}
