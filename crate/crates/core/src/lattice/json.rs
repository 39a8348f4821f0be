use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::{semidirect, LatticeError, LatticeSpec, SemidirectSpec};

/// A lattice read from a spec file or builtin selector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeInput {
    Lie(LatticeSpec),
    Semidirect(SemidirectSpec),
}

impl LatticeInput {
    /// The full lattice (the semidirect sum for module inputs).
    pub fn lattice(&self) -> LatticeSpec {
        match self {
            LatticeInput::Lie(l) => l.clone(),
            LatticeInput::Semidirect(sd) => semidirect(sd).expect("validated at construction"),
        }
    }

    pub fn base(&self) -> &LatticeSpec {
        match self {
            LatticeInput::Lie(l) => l,
            LatticeInput::Semidirect(sd) => &sd.base,
        }
    }

    pub fn semidirect(&self) -> Option<&SemidirectSpec> {
        match self {
            LatticeInput::Lie(_) => None,
            LatticeInput::Semidirect(sd) => Some(sd),
        }
    }

    /// Overrides prime and level.
    pub fn with_prime_level(mut self, prime: u64, level_m: u32) -> Self {
        let b = match &mut self {
            LatticeInput::Lie(l) => l,
            LatticeInput::Semidirect(sd) => &mut sd.base,
        };
        b.prime = prime;
        b.level_m = level_m;
        self
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketEntry {
    i: String,
    j: String,
    coeffs: BTreeMap<String, i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    name: String,
    prime: u64,
    residue_degree: u32,
    level_m: u32,
    basis: Vec<String>,
    brackets: Vec<BracketEntry>,
    module_rank: Option<usize>,
    action: Option<BTreeMap<String, Vec<Vec<i64>>>>,
}

fn invalid(msg: impl Into<String>) -> LatticeError {
    LatticeError::Invalid(msg.into())
}

/// Parses the JSON lattice format. Brackets not listed are zero; listing
/// `[x, y]` implies `[y, x] = -[x, y]` unless both are listed.
///
/// Structural problems are errors; Lie-axiom violations are left for
/// `validate_lie` so they can be reported with their triple.
pub fn parse_spec_json(text: &str) -> Result<LatticeInput, LatticeError> {
    let f: SpecFile = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
    if f.prime < 2 {
        return Err(invalid("prime must be at least 2"));
    }
    if f.residue_degree < 1 {
        return Err(invalid("residue_degree must be at least 1"));
    }
    let d = f.basis.len();
    if d == 0 {
        return Err(invalid("empty basis"));
    }
    let index = |s: &str| -> Result<usize, LatticeError> {
        f.basis
            .iter()
            .position(|b| b == s)
            .ok_or_else(|| invalid(format!("unknown basis label `{s}`")))
    };
    for (a, l) in f.basis.iter().enumerate() {
        if f.basis[..a].contains(l) {
            return Err(invalid(format!("duplicate basis label `{l}`")));
        }
    }
    let mut c = vec![vec![vec![0i64; d]; d]; d];
    let mut given = vec![vec![false; d]; d];
    for b in &f.brackets {
        let (i, j) = (index(&b.i)?, index(&b.j)?);
        if given[i][j] {
            return Err(invalid(format!("bracket [{}, {}] listed twice", b.i, b.j)));
        }
        given[i][j] = true;
        let mut v = vec![0i64; d];
        for (lab, x) in &b.coeffs {
            v[index(lab)?] = *x;
        }
        c[i][j] = v;
    }
    for i in 0..d {
        for j in 0..d {
            if given[i][j] && !given[j][i] && i != j {
                c[j][i] = c[i][j].iter().map(|x| -x).collect();
            }
        }
    }
    let lattice = LatticeSpec {
        name: f.name,
        basis: f.basis.clone(),
        brackets: c,
        prime: f.prime,
        residue_degree: f.residue_degree,
        level_m: f.level_m,
    };
    match (f.module_rank, f.action) {
        (None, None) => Ok(LatticeInput::Lie(lattice)),
        (Some(n), Some(action)) => {
            let mut mats = Vec::with_capacity(d);
            for l in &f.basis {
                let m = action
                    .get(l)
                    .cloned()
                    .unwrap_or_else(|| vec![vec![0; n]; n]);
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return Err(invalid(format!("action of `{l}` is not {n}x{n}")));
                }
                mats.push(m);
            }
            for l in action.keys() {
                index(l)?;
            }
            let sd = SemidirectSpec {
                base: lattice,
                module_labels: (1..=n).map(|i| format!("m{i}")).collect(),
                action: mats,
            };
            semidirect(&sd)?;
            Ok(LatticeInput::Semidirect(sd))
        }
        _ => Err(invalid("module_rank and action must be given together")),
    }
}

pub fn load_spec_file(path: &Path) -> Result<LatticeInput, LatticeError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    parse_spec_json(&text)
}
