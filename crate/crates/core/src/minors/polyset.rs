use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MPoly, MinorError};

/// A nonzero coefficient `unit * p^pexp` with `unit` prime to `p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PCoef {
    pub unit: BigInt,
    pub pexp: i32,
}

impl PCoef {
    pub fn from_int(c: &BigInt, p: u64) -> PCoef {
        assert!(!c.is_zero());
        let pb = BigInt::from(p);
        let mut unit = c.clone();
        let mut pexp = 0;
        while unit.is_multiple_of(&pb) {
            unit /= &pb;
            pexp += 1;
        }
        PCoef { unit, pexp }
    }
}

/// Polynomial with p-adically split coefficients. The leading term (largest
/// exponent vector) has a positive unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PPoly {
    terms: BTreeMap<Vec<u16>, PCoef>,
}

impl PPoly {
    fn normalized(mut terms: BTreeMap<Vec<u16>, PCoef>) -> Option<PPoly> {
        let (_, lead) = terms.iter().next_back()?;
        if lead.unit.is_negative() {
            for c in terms.values_mut() {
                c.unit = -c.unit.clone();
            }
        }
        Some(PPoly { terms })
    }

    pub fn from_mpoly(f: &MPoly, p: u64) -> Option<PPoly> {
        PPoly::normalized(
            f.terms()
                .map(|(e, c)| (e.clone(), PCoef::from_int(c, p)))
                .collect(),
        )
    }

    /// Terms in display order (largest exponent vector first).
    pub fn terms(&self) -> impl Iterator<Item = (&PCoef, &Vec<u16>)> {
        self.terms.iter().rev().map(|(e, c)| (c, e))
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| {
                e.iter().all(|&x| x == 0) && c.unit.is_one() && c.pexp == 0
            })
    }

    pub fn min_pexp(&self) -> i32 {
        self.terms.values().map(|c| c.pexp).min().unwrap_or(0)
    }

    fn render(&self, vars: &[String]) -> String {
        let mut s = String::new();
        for (i, (c, e)) in self.terms().enumerate() {
            let neg = c.unit.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            let u = c.unit.abs();
            let mono = e.iter().any(|&x| x > 0);
            if !u.is_one() || (!mono && c.pexp == 0) {
                factors.push(u.to_string());
            }
            match c.pexp {
                0 => {}
                1 => factors.push("p".into()),
                k => factors.push(format!("p^{k}")),
            }
            for (v, &x) in vars.iter().zip(e) {
                match x {
                    0 => {}
                    1 => factors.push(v.clone()),
                    k => factors.push(format!("{v}^{k}")),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

impl Ord for PPoly {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.terms().cmp(o.terms()))
    }
}

impl PartialOrd for PPoly {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A finite set of polynomials in named variables, always containing 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySet {
    vars: Vec<String>,
    prime: u64,
    polys: BTreeSet<PPoly>,
}

impl PolySet {
    pub fn new(vars: Vec<String>, prime: u64) -> Self {
        let mut s = PolySet { vars, prime, polys: BTreeSet::new() };
        s.insert_mpoly(&MPoly::constant(1, s.vars.len()));
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> impl Iterator<Item = &PPoly> {
        self.polys.iter()
    }

    pub fn insert_mpoly(&mut self, f: &MPoly) {
        assert_eq!(f.nvars(), self.vars.len());
        if let Some(p) = PPoly::from_mpoly(f, self.prime) {
            self.polys.insert(p);
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.polys.iter().map(PPoly::degree).max().unwrap_or(0)
    }

    /// Sets the variables outside `keep` (indices into `vars`) to zero.
    pub fn restrict(&self, keep: &[usize]) -> PolySet {
        let vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let polys = self
            .polys
            .iter()
            .filter_map(|f| {
                let terms = f
                    .terms
                    .iter()
                    .filter(|(e, _)| {
                        e.iter().enumerate().all(|(i, &x)| x == 0 || keep.contains(&i))
                    })
                    .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c.clone()))
                    .collect();
                PPoly::normalized(terms)
            })
            .collect();
        PolySet { vars, prime: self.prime, polys }
    }

    /// Reorders the variables to `order`, a permutation of `vars`.
    pub fn relabel(&self, order: &[&str]) -> PolySet {
        let perm: Vec<usize> = order
            .iter()
            .map(|v| self.vars.iter().position(|w| w == v).expect("unknown variable"))
            .collect();
        assert_eq!(perm.len(), self.vars.len());
        self.restrict(&perm)
    }

    /// Each term's p-exponent drops by `j` times its degree.
    pub fn rescaled(&self, j: u32) -> PolySet {
        let polys = self
            .polys
            .iter()
            .map(|f| PPoly {
                terms: f
                    .terms
                    .iter()
                    .map(|(e, c)| {
                        let deg: i32 = e.iter().map(|&x| x as i32).sum();
                        (e.clone(), PCoef { unit: c.unit.clone(), pexp: c.pexp - j as i32 * deg })
                    })
                    .collect(),
            })
            .collect();
        PolySet { vars: self.vars.clone(), prime: self.prime, polys }
    }

    /// Parses polynomials such as `2*p^-1*u*v^2 - w`. The name `p` is
    /// reserved for the prime.
    pub fn parse(vars: &[&str], prime: u64, polys: &[&str]) -> Result<PolySet, MinorError> {
        let mut s = PolySet {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            prime,
            polys: BTreeSet::new(),
        };
        for text in polys {
            let f = parse_ppoly(vars, text).ok_or_else(|| MinorError::Parse(text.to_string()))?;
            s.polys.insert(f);
        }
        s.polys.insert(PPoly::from_mpoly(&MPoly::constant(1, vars.len()), prime).unwrap());
        Ok(s)
    }
}

fn parse_ppoly(vars: &[&str], text: &str) -> Option<PPoly> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev = None;
    for ch in t.chars() {
        if (ch == '+' || ch == '-') && prev != Some('^') {
            if !cur.is_empty() {
                pieces.push((neg, std::mem::take(&mut cur)));
            } else if prev.is_some() {
                return None;
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        return None;
    }
    pieces.push((neg, cur));
    let mut terms: BTreeMap<Vec<u16>, PCoef> = BTreeMap::new();
    for (neg, piece) in pieces {
        let mut unit = BigInt::one();
        let mut pexp = 0i32;
        let mut e = vec![0u16; vars.len()];
        for f in piece.split('*') {
            let (base, pow) = match f.split_once('^') {
                Some((b, k)) => (b, k.parse::<i32>().ok()?),
                None => (f, 1),
            };
            if let Ok(n) = base.parse::<BigInt>() {
                if pow != 1 || n.is_zero() {
                    return None;
                }
                unit *= n;
            } else if base == "p" {
                pexp += pow;
            } else {
                let i = vars.iter().position(|v| *v == base)?;
                e[i] += u16::try_from(pow).ok()?;
            }
        }
        if neg {
            unit = -unit;
        }
        if terms.insert(e, PCoef { unit, pexp }).is_some() {
            return None;
        }
    }
    PPoly::normalized(terms)
}

impl fmt::Display for PolySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.polys.iter().map(|p| p.render(&self.vars)).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl PolySet {
    pub fn render_poly(&self, f: &PPoly) -> String {
        f.render(&self.vars)
    }
}
