use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{check_scope, exact_level, GeneratorSource, OracleConfig, OracleError};
use crate::lattice::{LatticeSpec, SemidirectSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CensusKind {
    /// Coadjoint orbits; size `p^{2k}` is one irreducible of dimension `p^k`.
    Full,
    /// Orbits on the module dual; size `p^k` is one constituent of dimension `p^k`.
    Relative,
}

/// Orbits counted by exact level and size exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    pub kind: CensusKind,
    pub prime: u64,
    pub dim: usize,
    /// Level of the exhaustive enumeration.
    pub level: u32,
    /// Highest level reached by lifting small orbits.
    pub top_level: u32,
    /// `(level, size exponent) -> number of orbits`. Above `level` only
    /// orbits found by lifting are recorded.
    pub orbits: BTreeMap<(u32, u32), u64>,
    /// No unrecorded orbit has size exponent below this.
    pub open_exp: u32,
}

impl OrbitCensus {
    pub fn empty(kind: CensusKind, prime: u64) -> Self {
        OrbitCensus {
            kind,
            prime,
            dim: 0,
            level: 0,
            top_level: 0,
            orbits: BTreeMap::new(),
            open_exp: u32::MAX,
        }
    }

    /// Dimension exponent of an orbit with the given size exponent.
    pub fn dimension_exp(&self, size_exp: u32) -> u32 {
        match self.kind {
            CensusKind::Full => size_exp / 2,
            CensusKind::Relative => size_exp,
        }
    }

    fn size_exp_of_dim(&self, k: u32) -> u32 {
        match self.kind {
            CensusKind::Full => 2 * k,
            CensusKind::Relative => k,
        }
    }

    /// `r_{p^k}`.
    pub fn coefficient(&self, k: u32) -> u64 {
        let e = self.size_exp_of_dim(k);
        self.orbits.iter().filter(|((_, s), _)| *s == e).map(|(_, c)| c).sum()
    }

    pub fn is_final(&self, k: u32) -> bool {
        self.size_exp_of_dim(k) < self.open_exp
    }

    pub fn max_dim_exp(&self) -> Option<u32> {
        self.orbits.keys().map(|&(_, s)| self.dimension_exp(s)).max()
    }

    /// Total size of all orbits of level at most `self.level`.
    pub fn enumerated_points(&self) -> u128 {
        self.orbits
            .iter()
            .filter(|((l, _), _)| *l <= self.level)
            .map(|(&(_, s), &c)| c as u128 * (self.prime as u128).pow(s))
            .sum()
    }
}

impl fmt::Display for OrbitCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "level | orbit size | count")?;
        for (&(l, s), c) in &self.orbits {
            writeln!(f, "{l} | {} | {c}", (self.prime as u128).pow(s))?;
        }
        writeln!(f, "dimension | r | final")?;
        if let Some(top) = self.max_dim_exp() {
            for k in 0..=top {
                let fin = if self.is_final(k) { "yes" } else { "no" };
                writeln!(f, "q^{k} | {} | {fin}", self.coefficient(k))?;
            }
        }
        Ok(())
    }
}

struct Action {
    p: u64,
    d: usize,
    modulus: u64,
    mats: Vec<Vec<Vec<u64>>>,
}

impl Action {
    fn apply(&self, g: usize, x: &[u64], out: &mut [u64]) {
        let a = &self.mats[g];
        let md = self.modulus as u128;
        for (i, o) in out.iter_mut().enumerate() {
            let s: u128 = a[i].iter().zip(x).map(|(&u, &v)| u as u128 * v as u128).sum();
            *o = (s % md) as u64;
        }
    }
}

fn prime_exp(size: u64, p: u64) -> Result<u32, OracleError> {
    let (mut s, mut e) = (size, 0);
    while s % p == 0 {
        s /= p;
        e += 1;
    }
    if s != 1 {
        return Err(OracleError::NotPrimePower(size));
    }
    Ok(e)
}

#[derive(Default)]
struct ClassOut {
    orbits: BTreeMap<(u32, u32), u64>,
    /// Representatives of small top-level orbits with their size exponents.
    small: Vec<(Vec<u64>, u32)>,
}

/// Enumerates the orbits inside one residue class mod `p^m`. The generators
/// are congruent to the identity mod `p^m`, so each class is invariant.
fn class_orbits(act: &Action, m: u32, n: u32, class: u64, small_exp: Option<u32>) -> Result<ClassOut, OracleError> {
    let (p, d) = (act.p, act.d);
    let pm = p.pow(m);
    let radix = p.pow(n - m);
    let npts = radix.pow(d as u32);
    let mut r = vec![0u64; d];
    let mut c = class;
    for ri in r.iter_mut() {
        *ri = c % pm;
        c /= pm;
    }
    let decode = |idx: u64, x: &mut [u64]| {
        let mut i = idx;
        for (k, xk) in x.iter_mut().enumerate() {
            *xk = r[k] + pm * (i % radix);
            i /= radix;
        }
    };
    let encode = |x: &[u64]| -> u64 {
        x.iter().zip(&r).rev().fold(0u64, |acc, (&xk, &rk)| acc * radix + (xk - rk) / pm)
    };
    let mut visited = vec![0u64; (npts as usize).div_ceil(64)];
    let mut out = ClassOut::default();
    let mut queue: Vec<u64> = Vec::new();
    let mut x = vec![0u64; d];
    let mut y = vec![0u64; d];
    for seed in 0..npts {
        if visited[(seed / 64) as usize] >> (seed % 64) & 1 == 1 {
            continue;
        }
        visited[(seed / 64) as usize] |= 1 << (seed % 64);
        queue.clear();
        queue.push(seed);
        let mut head = 0;
        while head < queue.len() {
            decode(queue[head], &mut x);
            head += 1;
            for g in 0..act.mats.len() {
                act.apply(g, &x, &mut y);
                let code = encode(&y);
                let w = &mut visited[(code / 64) as usize];
                if *w >> (code % 64) & 1 == 0 {
                    *w |= 1 << (code % 64);
                    queue.push(code);
                }
            }
        }
        decode(seed, &mut x);
        let lvl = exact_level(&x, p, n);
        let e = prime_exp(queue.len() as u64, p)?;
        *out.orbits.entry((lvl, e)).or_default() += 1;
        if lvl == n && small_exp.is_some_and(|b| e <= b) {
            out.small.push((x.clone(), e));
        }
    }
    Ok(out)
}

fn run_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Exhaustive enumeration at level `n`.
fn enumerate(src: &GeneratorSource, n: u32, cfg: &OracleConfig) -> Result<ClassOut, OracleError> {
    let gens = src.at_level(n);
    let d = src.dim();
    let act = Action { p: src.prime, d, modulus: gens.modulus, mats: gens.matrices };
    let p = src.prime;
    if n <= src.m {
        // the action is trivial mod p^n
        let mut out = ClassOut::default();
        for l in 0..=n {
            let cnt = if l == 0 { 1 } else { p.pow(l * d as u32) - p.pow((l - 1) * d as u32) };
            out.orbits.insert((l, 0), cnt);
        }
        if cfg.lift_exp.is_some() {
            let total = p.pow(n * d as u32);
            for idx in 0..total {
                let mut x = vec![0u64; d];
                let mut i = idx;
                for xk in x.iter_mut() {
                    *xk = i % act.modulus;
                    i /= act.modulus;
                }
                if exact_level(&x, p, n) == n {
                    out.small.push((x, 0));
                }
            }
        }
        return Ok(out);
    }
    let nclasses = p.pow(src.m * d as u32);
    let parts: Vec<Result<ClassOut, OracleError>> = run_pool(cfg.workers, || {
        (0..nclasses)
            .into_par_iter()
            .map(|c| class_orbits(&act, src.m, n, c, cfg.lift_exp))
            .collect()
    });
    let mut out = ClassOut::default();
    for part in parts {
        let part = part?;
        for (k, v) in part.orbits {
            *out.orbits.entry(k).or_default() += v;
        }
        out.small.extend(part.small);
    }
    out.small.sort();
    Ok(out)
}

/// Orbits at level `l + 1` lying over the given orbits at level `l`.
///
/// Every generator is the identity mod `p`, so the stabilizer of a
/// representative `r` acts on its lifts `r + p^l y` by translations
/// `y -> y + c_g`. The orbits over `O` are therefore the cosets of the span
/// `W` of the `c_g`: `p^(d - w)` orbits, each of size `|O| p^w`. `W` is
/// spanned by the translations of the Schreier generators.
fn lift_level(
    src: &GeneratorSource,
    reps: &[(Vec<u64>, u32)],
    l: u32,
    workers: usize,
) -> Result<Vec<(Vec<u64>, u32)>, OracleError> {
    let gens = src.at_level(l + 1);
    let d = src.dim();
    let p = src.prime;
    let act = Action { p, d, modulus: gens.modulus, mats: gens.matrices };
    let pl = p.pow(l);
    let per_rep: Vec<Result<Vec<(Vec<u64>, u32)>, OracleError>> = run_pool(workers, || {
        reps.par_iter()
            .map(|(r, e)| {
                // orbit points mod p^l, each with one lift in the orbit of r
                let mut lifts: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
                let reduce = |z: &[u64]| -> Vec<u64> { z.iter().map(|&x| x % pl).collect() };
                lifts.insert(r.clone(), r.clone());
                let mut queue = vec![r.clone()];
                let mut head = 0;
                let mut span: Vec<Vec<u64>> = Vec::new();
                let mut gz = vec![0u64; d];
                while head < queue.len() {
                    let z = queue[head].clone();
                    head += 1;
                    for g in 0..act.mats.len() {
                        act.apply(g, &z, &mut gz);
                        let key = reduce(&gz);
                        match lifts.get(&key) {
                            Some(w) => {
                                let c: Vec<u64> = gz
                                    .iter()
                                    .zip(w)
                                    .map(|(&a, &b)| ((a + act.modulus - b) % act.modulus) / pl)
                                    .collect();
                                insert_span(&mut span, c, p);
                            }
                            None => {
                                lifts.insert(key, gz.clone());
                                queue.push(gz.clone());
                            }
                        }
                    }
                }
                if prime_exp(queue.len() as u64, p)? != *e {
                    return Err(OracleError::Invariant("lifted orbit changed size".into()));
                }
                let w = span.len() as u32;
                Ok(complement_reps(&span, d, p)
                    .into_iter()
                    .map(|y| (r.iter().zip(&y).map(|(&a, &b)| a + pl * b).collect(), e + w))
                    .collect())
            })
            .collect()
    });
    let mut all = Vec::new();
    for part in per_rep {
        all.extend(part?);
    }
    all.sort();
    Ok(all)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a * x % p == 1).expect("unit mod p")
}

/// Adds `v` to an echelon basis over `F_p` (rows with distinct leading
/// positions, leading coefficient 1).
fn insert_span(basis: &mut Vec<Vec<u64>>, mut v: Vec<u64>, p: u64) {
    for b in basis.iter() {
        let lead = b.iter().position(|&x| x != 0).expect("nonzero row");
        let f = v[lead];
        if f != 0 {
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi = (*vi + (p - f) * bi) % p;
            }
        }
    }
    if let Some(lead) = v.iter().position(|&x| x != 0) {
        let inv = inv_mod(v[lead], p);
        for vi in v.iter_mut() {
            *vi = *vi * inv % p;
        }
        basis.push(v);
    }
}

/// Coset representatives of `F_p^d / span`: vectors supported on the
/// non-leading positions.
fn complement_reps(basis: &[Vec<u64>], d: usize, p: u64) -> Vec<Vec<u64>> {
    let leads: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
    let free: Vec<usize> = (0..d).filter(|i| !leads.contains(i)).collect();
    let count = p.pow(free.len() as u32);
    (0..count)
        .map(|mut i| {
            let mut y = vec![0u64; d];
            for &f in &free {
                y[f] = i % p;
                i /= p;
            }
            y
        })
        .collect()
}

fn check_invariants(kind: CensusKind, p: u64, d: usize, n: u32, orbits: &BTreeMap<(u32, u32), u64>) -> Result<(), OracleError> {
    let total: u128 = orbits.iter().map(|(&(_, s), &c)| c as u128 * (p as u128).pow(s)).sum();
    if total != (p as u128).pow(n * d as u32) {
        return Err(OracleError::Invariant(format!("orbit sizes sum to {total}")));
    }
    if kind == CensusKind::Full {
        if let Some((&(_, s), _)) = orbits.iter().find(|((_, s), _)| s % 2 == 1) {
            return Err(OracleError::OddOrbitExponent(s));
        }
    }
    let mut prev = 0;
    for l in 0..=n {
        if let Some(min) = orbits.keys().filter(|(ll, _)| *ll == l).map(|&(_, s)| s).min() {
            if min < prev {
                return Err(OracleError::Invariant(format!("smallest orbit shrinks at level {l}")));
            }
            prev = min;
        }
    }
    Ok(())
}

/// Census for an arbitrary generator source.
pub fn census_from_source(
    src: &GeneratorSource,
    kind: CensusKind,
    n: u32,
    cfg: &OracleConfig,
) -> Result<OrbitCensus, OracleError> {
    if n == 0 {
        return Err(OracleError::DegenerateLevel);
    }
    let p = src.prime;
    let d = src.dim();
    let needed = (p as u128).saturating_pow(n * d as u32);
    if needed > cfg.budget {
        return Err(OracleError::BudgetExceeded { needed, budget: cfg.budget });
    }
    let base = enumerate(src, n, cfg)?;
    check_invariants(kind, p, d, n, &base.orbits)?;
    let mut orbits = base.orbits;
    let min_top = orbits.keys().filter(|(l, _)| *l == n).map(|&(_, s)| s).min().unwrap_or(u32::MAX);
    let mut open_exp = min_top;
    let mut top_level = n;
    if let Some(b) = cfg.lift_exp {
        if min_top <= b {
            let mut reps = base.small;
            let gens = src.mats.len() as u128;
            while !reps.is_empty() && top_level < n + cfg.max_lift_levels {
                // one orbit walk per representative plus p^d candidate lifts
                let needed: u128 = reps
                    .iter()
                    .map(|(_, e)| (p as u128).pow(*e) * gens + (p as u128).pow(d as u32))
                    .sum();
                if needed > cfg.budget {
                    return Err(OracleError::BudgetExceeded { needed, budget: cfg.budget });
                }
                reps = lift_level(src, &reps, top_level, cfg.workers)?;
                reps.retain(|(_, e)| *e <= b);
                top_level += 1;
                for (_, e) in &reps {
                    if kind == CensusKind::Full && e % 2 == 1 {
                        return Err(OracleError::OddOrbitExponent(*e));
                    }
                    *orbits.entry((top_level, *e)).or_default() += 1;
                }
            }
            open_exp = reps.iter().map(|(_, e)| *e).min().unwrap_or(b + 1);
        }
    }
    Ok(OrbitCensus { kind, prime: p, dim: d, level: n, top_level, orbits, open_exp })
}

/// Coadjoint orbit census of `exp(p^m L)` at level `n`.
pub fn full_census(spec: &LatticeSpec, n: u32, cfg: &OracleConfig) -> Result<OrbitCensus, OracleError> {
    check_scope(spec, n)?;
    census_from_source(&GeneratorSource::coadjoint(spec), CensusKind::Full, n, cfg)
}

/// Orbits of the base group on the dual of the module at level `n`.
pub fn relative_census(sd: &SemidirectSpec, n: u32, cfg: &OracleConfig) -> Result<OrbitCensus, OracleError> {
    check_scope(&sd.base, n)?;
    census_from_source(&GeneratorSource::module_dual(sd), CensusKind::Relative, n, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{builtin, BuiltinParams, LatticeInput};

    fn input(sel: &str, p: u64) -> LatticeInput {
        builtin(sel, &BuiltinParams::new(p, 1)).unwrap()
    }

    fn coeffs(c: &OrbitCensus, upto: u32) -> Vec<u64> {
        (0..=upto).map(|k| c.coefficient(k)).collect()
    }

    #[test]
    fn sl2_levels_one_and_two() {
        let l = input("sl2", 3).lattice();
        let c1 = full_census(&l, 1, &OracleConfig::default()).unwrap();
        assert_eq!(c1.coefficient(0), 27);
        assert_eq!(c1.orbits.values().sum::<u64>(), 27);
        let c2 = full_census(&l, 2, &OracleConfig::default()).unwrap();
        assert_eq!(coeffs(&c2, 1), vec![27, 78]);
        assert!(c2.is_final(0));
        assert!(!c2.is_final(1));
        let c5 = full_census(&input("sl2", 5).lattice(), 2, &OracleConfig::default()).unwrap();
        assert_eq!(coeffs(&c5, 1), vec![125, 620]);
    }

    #[test]
    fn sl2_lifting_finalizes() {
        let l = input("sl2", 3).lattice();
        let cfg = OracleConfig { lift_exp: Some(4), ..OracleConfig::default() };
        let lifted = full_census(&l, 2, &cfg).unwrap();
        let deep = full_census(&l, 4, &OracleConfig::default()).unwrap();
        assert!(lifted.is_final(2));
        assert!(deep.is_final(1));
        assert_eq!(lifted.coefficient(1), deep.coefficient(1));
        assert_eq!(lifted.coefficient(2), 234);
        // q^3 (1 - q^-2 t)/(1 - q t) at q = 3: 27, 78, 234
        if deep.is_final(2) {
            assert_eq!(deep.coefficient(2), 234);
        }
    }

    #[test]
    fn lifting_matches_exhaustive_levels() {
        for (sel, deep) in [("sl2", 3), ("natural:n=1", 2), ("hk:k=1", 2), ("sym2:n=1", 2)] {
            let inp = input(sel, 3);
            let cfg = OracleConfig { lift_exp: Some(30), max_lift_levels: deep - 1, ..OracleConfig::default() };
            let lifted = full_census(&inp.lattice(), 1, &cfg).unwrap();
            let exact = full_census(&inp.lattice(), deep, &OracleConfig::default()).unwrap();
            assert_eq!(lifted.orbits, exact.orbits, "{sel}");
            if let Some(sd) = inp.semidirect() {
                let lifted = relative_census(sd, 1, &cfg).unwrap();
                let exact = relative_census(sd, deep, &OracleConfig::default()).unwrap();
                assert_eq!(lifted.orbits, exact.orbits, "{sel} relative");
            }
        }
    }

    #[test]
    fn natural_relative() {
        let inp = input("natural:n=1", 3);
        let sd = inp.semidirect().unwrap();
        let c1 = relative_census(sd, 1, &OracleConfig::default()).unwrap();
        assert_eq!(c1.orbits, BTreeMap::from([((0, 0), 1), ((1, 0), 8)]));
        let c2 = relative_census(sd, 2, &OracleConfig::default()).unwrap();
        assert_eq!(c2.orbits.get(&(2, 2)), Some(&8));
        assert_eq!(coeffs(&c2, 2), vec![9, 0, 8]);
        assert!(c2.is_final(1) && !c2.is_final(2));
        let sym = input("sym2:n=1", 3);
        let s1 = relative_census(sym.semidirect().unwrap(), 1, &OracleConfig::default()).unwrap();
        assert_eq!(s1.coefficient(0), 27);
    }

    #[test]
    fn hk_relative() {
        let inp = input("hk:k=1", 3);
        let c = relative_census(inp.semidirect().unwrap(), 2, &OracleConfig::default()).unwrap();
        assert_eq!(coeffs(&c, 1), vec![27, 18]);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let l = input("natural:n=1", 3).lattice();
        let a = full_census(&l, 2, &OracleConfig { workers: 1, ..OracleConfig::default() }).unwrap();
        let b = full_census(&l, 2, &OracleConfig { workers: 4, ..OracleConfig::default() }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget() {
        let l = input("sl2", 3).lattice();
        let cfg = OracleConfig { budget: 100, ..OracleConfig::default() };
        assert!(matches!(full_census(&l, 2, &cfg), Err(OracleError::BudgetExceeded { .. })));
    }

    #[test]
    fn report_format() {
        let l = input("sl2", 3).lattice();
        let c = full_census(&l, 2, &OracleConfig::default()).unwrap();
        let s = c.to_string();
        assert!(s.starts_with("level | orbit size | count\n0 | 1 | 1\n"));
        assert!(s.contains("q^1 | 78 | no"));
    }
}
