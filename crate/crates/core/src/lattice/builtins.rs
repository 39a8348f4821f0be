use super::linalg::{diag, q_int, qmat_from_ints, solve_left};
use super::{semidirect, sublattice, LatticeError, LatticeInput, LatticeSpec, SemidirectSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuiltinParams {
    pub prime: u64,
    pub level_m: u32,
}

impl BuiltinParams {
    pub fn new(prime: u64, level_m: u32) -> Self {
        BuiltinParams { prime, level_m }
    }
}

type IMat = Vec<Vec<i64>>;

fn elem(n: usize, i: usize, j: usize) -> IMat {
    let mut m = vec![vec![0; n]; n];
    m[i][j] = 1;
    m
}

fn sub(a: &IMat, b: &IMat) -> IMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

fn mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Structure constants of a matrix Lie algebra given by a basis of matrices.
fn from_matrices(name: &str, labels: &[&str], mats: &[IMat], p: BuiltinParams) -> LatticeSpec {
    let d = mats.len();
    let flat: Vec<Vec<i64>> = mats.iter().map(|m| m.iter().flatten().copied().collect()).collect();
    let fq = qmat_from_ints(&flat);
    let mut c = vec![vec![vec![0i64; d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let br = sub(&mul(&mats[i], &mats[j]), &mul(&mats[j], &mats[i]));
            let rhs = qmat_from_ints(&[br.into_iter().flatten().collect()]);
            let x = solve_left(&fq, &rhs).expect("matrix basis closed under bracket");
            for k in 0..d {
                assert!(x[0][k].is_integer(), "non-integral structure constant");
                c[i][j][k] = i64::try_from(x[0][k].to_integer()).unwrap();
            }
        }
    }
    LatticeSpec {
        name: name.to_string(),
        basis: labels.iter().map(|s| s.to_string()).collect(),
        brackets: c,
        prime: p.prime,
        residue_degree: 1,
        level_m: p.level_m,
    }
}

fn sl2_mats() -> Vec<IMat> {
    vec![sub(&elem(2, 0, 0), &elem(2, 1, 1)), elem(2, 0, 1), elem(2, 1, 0)]
}

pub(crate) fn sl2(p: BuiltinParams) -> LatticeSpec {
    from_matrices("sl2", &["h", "e", "f"], &sl2_mats(), p)
}

fn sl3(p: BuiltinParams) -> LatticeSpec {
    let e = |i, j| elem(3, i, j);
    let mats = vec![
        sub(&e(0, 0), &e(1, 1)),
        sub(&e(1, 1), &e(2, 2)),
        e(0, 1),
        e(0, 2),
        e(1, 2),
        e(1, 0),
        e(2, 0),
        e(2, 1),
    ];
    from_matrices(
        "sl3",
        &["h12", "h23", "e12", "e13", "e23", "f21", "f31", "f32"],
        &mats,
        p,
    )
}

fn block_diag(block: &IMat, copies: usize) -> IMat {
    let b = block.len();
    let n = b * copies;
    let mut m = vec![vec![0; n]; n];
    for c in 0..copies {
        for i in 0..b {
            for j in 0..b {
                m[c * b + i][c * b + j] = block[i][j];
            }
        }
    }
    m
}

/// `sl2` acting diagonally on `n` copies of the natural module.
fn natural(n: usize, p: BuiltinParams) -> SemidirectSpec {
    let mut labels = Vec::new();
    for i in 1..=n {
        labels.push(format!("u{i}"));
        labels.push(format!("v{i}"));
    }
    SemidirectSpec {
        base: sl2(p),
        module_labels: labels,
        action: sl2_mats().iter().map(|m| block_diag(m, n)).collect(),
    }
}

/// `sl2` acting diagonally on `n` copies of the symmetric square.
fn sym2(n: usize, p: BuiltinParams) -> SemidirectSpec {
    let h1 = vec![vec![2, 0, 0], vec![0, 0, 0], vec![0, 0, -2]];
    let e1 = vec![vec![0, 2, 0], vec![0, 0, 1], vec![0, 0, 0]];
    let f1 = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 2, 0]];
    let mut labels = Vec::new();
    for i in 1..=n {
        labels.push(format!("u{i}"));
        labels.push(format!("v{i}"));
        labels.push(format!("w{i}"));
    }
    SemidirectSpec {
        base: sl2(p),
        module_labels: labels,
        action: [h1, e1, f1].iter().map(|m| block_diag(m, n)).collect(),
    }
}

/// The sublattice spanned by `p^k h, e, p^k f`.
fn sk(k: u32, p: BuiltinParams) -> LatticeSpec {
    let pk = q_int(p.prime.pow(k) as i64);
    let mut s = sublattice(&sl2(p), &diag(&[pk.clone(), q_int(1), pk])).expect("closed");
    s.name = format!("s{k}");
    s
}

/// `sk` acting on the natural module.
fn hk(k: u32, p: BuiltinParams) -> SemidirectSpec {
    let pk = p.prime.pow(k) as i64;
    let m = sl2_mats();
    let scale = |a: &IMat, c: i64| -> IMat { a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() };
    SemidirectSpec {
        base: sk(k, p),
        module_labels: vec!["u".into(), "v".into()],
        action: vec![scale(&m[0], pk), m[1].clone(), scale(&m[2], pk)],
    }
}

fn param(args: &[(String, u64)], key: &str, name: &str) -> Result<u64, LatticeError> {
    args.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| LatticeError::UnknownBuiltin(format!("{name} needs {key}=")))
}

/// Builds a named builtin: `sl2`, `sl3`, `natural:n=..`, `sym2:n=..`,
/// `sk:k=..`, `hk:k=..`.
pub fn builtin(selector: &str, p: &BuiltinParams) -> Result<LatticeInput, LatticeError> {
    let mut parts = selector.split(':');
    let name = parts.next().unwrap_or_default();
    let mut args = Vec::new();
    for a in parts.flat_map(|s| s.split(',')) {
        let (k, v) = a
            .split_once('=')
            .ok_or_else(|| LatticeError::UnknownBuiltin(selector.to_string()))?;
        let v: u64 = v
            .parse()
            .map_err(|_| LatticeError::UnknownBuiltin(selector.to_string()))?;
        args.push((k.to_string(), v));
    }
    let bad = || LatticeError::UnknownBuiltin(selector.to_string());
    let out = match name {
        "sl2" => LatticeInput::Lie(sl2(*p)),
        "sl3" => LatticeInput::Lie(sl3(*p)),
        "natural" => {
            let n = param(&args, "n", name)?;
            if !(1..=4).contains(&n) {
                return Err(bad());
            }
            LatticeInput::Semidirect(natural(n as usize, *p))
        }
        "sym2" => {
            let n = param(&args, "n", name)?;
            if !(1..=4).contains(&n) {
                return Err(bad());
            }
            LatticeInput::Semidirect(sym2(n as usize, *p))
        }
        "sk" => {
            let k = param(&args, "k", name)?;
            if !(1..=3).contains(&k) {
                return Err(bad());
            }
            LatticeInput::Lie(sk(k as u32, *p))
        }
        "hk" => {
            let k = param(&args, "k", name)?;
            if !(1..=3).contains(&k) {
                return Err(bad());
            }
            LatticeInput::Semidirect(hk(k as u32, *p))
        }
        _ => return Err(bad()),
    };
    if let LatticeInput::Semidirect(sd) = &out {
        semidirect(sd)?;
    }
    Ok(out)
}

/// Accepts `builtin:<selector>`.
pub fn parse_builtin(source: &str, p: &BuiltinParams) -> Result<LatticeInput, LatticeError> {
    let sel = source
        .strip_prefix("builtin:")
        .ok_or_else(|| LatticeError::UnknownBuiltin(source.to_string()))?;
    builtin(sel, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{is_fab, potency_check, soundly_permissible, validate_lie};

    const SELECTORS: [&str; 14] = [
        "sl2", "sl3", "natural:n=1", "natural:n=2", "natural:n=3", "natural:n=4", "sym2:n=1",
        "sym2:n=2", "sym2:n=3", "sym2:n=4", "sk:k=1", "sk:k=2", "hk:k=1", "hk:k=3",
    ];

    #[test]
    fn builtins_are_valid_fab_lattices() {
        for sel in SELECTORS {
            let l = builtin(sel, &BuiltinParams::new(3, 1)).unwrap().lattice();
            assert_eq!(validate_lie(&l), Ok(()), "{sel}");
            assert!(is_fab(&l), "{sel}");
        }
    }

    #[test]
    fn soundly_permissible_implies_potent() {
        for p in [3u64, 5, 7] {
            for m in [1u32, 2] {
                for sel in SELECTORS {
                    let l = builtin(sel, &BuiltinParams::new(p, m)).unwrap().lattice();
                    if soundly_permissible(&l, m) {
                        assert!(potency_check(&l, m), "{sel} p={p} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn natural_action_table() {
        let l = builtin("natural:n=1", &BuiltinParams::new(3, 1)).unwrap().lattice();
        let ix = |s: &str| l.index_of(s).unwrap();
        let unit = |s: &str| -> Vec<i64> { (0..5).map(|k| (k == ix(s)) as i64).collect() };
        assert_eq!(l.brackets[ix("e")][ix("v1")], unit("u1"));
        assert_eq!(l.brackets[ix("f")][ix("u1")], unit("v1"));
        assert_eq!(l.brackets[ix("h")][ix("u1")], unit("u1"));
        let neg_v: Vec<i64> = unit("v1").iter().map(|x| -x).collect();
        assert_eq!(l.brackets[ix("h")][ix("v1")], neg_v);
        let sym = builtin("sym2:n=1", &BuiltinParams::new(3, 1)).unwrap().lattice();
        assert_eq!(sym.dim(), 6);
    }

    #[test]
    fn sl3_brackets() {
        let l = sl3(BuiltinParams::new(3, 1));
        let ix = |s: &str| l.index_of(s).unwrap();
        // [e12, e23] = e13, [e12, f21] = h12
        assert_eq!(l.brackets[ix("e12")][ix("e23")][ix("e13")], 1);
        assert_eq!(l.brackets[ix("e12")][ix("f21")][ix("h12")], 1);
    }

    #[test]
    fn unknown_selectors() {
        let p = BuiltinParams::new(3, 1);
        assert!(builtin("natural:n=9", &p).is_err());
        assert!(builtin("so3", &p).is_err());
        assert!(parse_builtin("sl2", &p).is_err());
        assert!(parse_builtin("builtin:sl2", &p).is_ok());
    }
}
