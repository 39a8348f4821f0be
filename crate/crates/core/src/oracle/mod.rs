//! Orbit-counting oracle. Irreducible representations of the finite
//! quotients are counted through coadjoint orbits; constituents of the
//! induced trivial representation through orbits on module duals.

mod analysis;
mod census;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{potency_check, LatticeSpec, SemidirectSpec};

pub use analysis::{
    convolution_check, thetyspectral_ratio, CensusSeries, ConvolutionRow, Thety,
};
pub use census::{census_from_source, full_census, relative_census, CensusKind, OrbitCensus};

/// Default cap on the number of dual vectors enumerated.
pub const DEFAULT_BUDGET: u128 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle unsupported: {0}")]
    OracleUnsupported(String),
    #[error("lattice is not potent at this level")]
    NotPotent,
    #[error("level must be at least 1")]
    DegenerateLevel,
    #[error("budget exceeded: {needed} points needed, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("orbit of size p^{0} in a full census")]
    OddOrbitExponent(u32),
    #[error("orbit size {0} is not a power of p")]
    NotPrimePower(u64),
    #[error("census invariant failed: {0}")]
    Invariant(String),
    #[error("{which} coefficient at dimension p^{k} is not final")]
    NonFinalCoefficient { which: &'static str, k: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub budget: u128,
    pub workers: usize,
    /// Orbits of size at most `p^lift_exp` at the top level are followed
    /// to higher levels so that small dimensions become final.
    pub lift_exp: Option<u32>,
    pub max_lift_levels: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { budget: DEFAULT_BUDGET, workers: 1, lift_exp: None, max_lift_levels: 8 }
    }
}

/// Integer matrices `B_i`; the generators are the transposes of
/// `exp(p^m B_i)` reduced mod `p^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSource {
    pub prime: u64,
    pub m: u32,
    pub mats: Vec<Vec<Vec<i64>>>,
}

/// One matrix per generator, acting on column vectors mod `p^level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointGenerators {
    pub prime: u64,
    pub level: u32,
    pub modulus: u64,
    pub matrices: Vec<Vec<Vec<u64>>>,
}

fn check_scope(spec: &LatticeSpec, level: u32) -> Result<(), OracleError> {
    if spec.prime == 2 {
        return Err(OracleError::OracleUnsupported("p = 2".into()));
    }
    if spec.residue_degree != 1 {
        return Err(OracleError::OracleUnsupported("residue degree > 1".into()));
    }
    if level == 0 {
        return Err(OracleError::DegenerateLevel);
    }
    if !potency_check(spec, spec.level_m) {
        return Err(OracleError::NotPotent);
    }
    Ok(())
}

impl GeneratorSource {
    /// Coadjoint action: `B_i = -ad(x_i)`.
    pub fn coadjoint(spec: &LatticeSpec) -> Self {
        let d = spec.dim();
        let mats = (0..d)
            .map(|i| {
                (0..d)
                    .map(|r| (0..d).map(|j| -spec.brackets[i][j][r]).collect())
                    .collect()
            })
            .collect();
        GeneratorSource { prime: spec.prime, m: spec.level_m, mats }
    }

    /// Contragredient module action: `B_i = -sigma(x_i)`.
    pub fn module_dual(sd: &SemidirectSpec) -> Self {
        let mats = sd
            .action
            .iter()
            .map(|a| a.iter().map(|r| r.iter().map(|x| -x).collect()).collect())
            .collect();
        GeneratorSource { prime: sd.base.prime, m: sd.base.level_m, mats }
    }

    pub fn dim(&self) -> usize {
        self.mats.first().map_or(0, |m| m.len())
    }

    /// Generators of the inverse elements.
    pub fn inverted(&self) -> Self {
        let mats = self
            .mats
            .iter()
            .map(|a| a.iter().map(|r| r.iter().map(|x| -x).collect()).collect())
            .collect();
        GeneratorSource { mats, ..self.clone() }
    }

    pub fn at_level(&self, level: u32) -> AdjointGenerators {
        let p = BigInt::from(self.prime);
        let modulus = p.pow(level);
        let d = self.dim();
        let m = self.m as u64;
        let matrices = self
            .mats
            .iter()
            .map(|b| {
                let b: Vec<Vec<BigInt>> =
                    b.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
                let mut acc: Vec<Vec<BigInt>> = (0..d)
                    .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
                    .collect();
                let mut power = acc.clone();
                let mut fact = BigInt::one();
                let mut k: u64 = 1;
                // p^{mk}/k! has valuation at least mk - (k-1)/(p-1), increasing in k
                while ((m * k) as i64 - level as i64) * (self.prime as i64 - 1) < k as i64 - 1 {
                    power = mat_mul(&power, &b);
                    fact *= k;
                    let mut v = 0u32;
                    let mut unit = fact.clone();
                    while unit.is_multiple_of(&p) {
                        unit /= &p;
                        v += 1;
                    }
                    let scale = p.pow((m * k) as u32 - v)
                        * unit.extended_gcd(&modulus).x.mod_floor(&modulus);
                    for i in 0..d {
                        for j in 0..d {
                            acc[i][j] = (&acc[i][j] + &power[i][j] * &scale).mod_floor(&modulus);
                        }
                    }
                    k += 1;
                }
                // transpose, reduced
                (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| acc[j][i].mod_floor(&modulus).to_u64().expect("modulus fits u64"))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        AdjointGenerators {
            prime: self.prime,
            level,
            modulus: modulus.to_u64().expect("modulus fits u64"),
            matrices,
        }
    }
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).fold(BigInt::zero(), |s, k| s + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Contragredient coadjoint generators of `exp(p^m L)` modulo `p^level`.
pub fn adjoint_generators(spec: &LatticeSpec, level: u32) -> Result<AdjointGenerators, OracleError> {
    check_scope(spec, level)?;
    Ok(GeneratorSource::coadjoint(spec).at_level(level))
}

/// Generators of the base group acting on the module dual.
pub fn module_generators(sd: &SemidirectSpec, level: u32) -> Result<AdjointGenerators, OracleError> {
    check_scope(&sd.base, level)?;
    Ok(GeneratorSource::module_dual(sd).at_level(level))
}

/// Exact level of a vector mod `p^n`: `n` minus the least coordinate valuation.
pub fn exact_level(coords: &[u64], p: u64, n: u32) -> u32 {
    let v = coords
        .iter()
        .map(|&x| {
            if x == 0 {
                n
            } else {
                let mut x = x;
                let mut v = 0;
                while x % p == 0 {
                    x /= p;
                    v += 1;
                }
                v
            }
        })
        .min()
        .unwrap_or(n);
    n - v.min(n)
}
