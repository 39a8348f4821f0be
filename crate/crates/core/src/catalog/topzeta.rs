use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{CatalogError, FormulaFamily};

/// `a s + b`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinearFactor {
    pub a: i64,
    pub b: i64,
}

impl LinearFactor {
    fn eval(&self, s: &BigRational) -> BigRational {
        s * BigRational::from_integer(self.a.into()) + BigRational::from_integer(self.b.into())
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.a {
            0 => String::new(),
            1 => "s".to_string(),
            a => format!("{a}s"),
        };
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (_, 0) => write!(f, "{s}"),
            (_, b) if b > 0 => write!(f, "({s}+{b})"),
            (_, b) => write!(f, "({s}-{})", -b),
        }
    }
}

/// A rational function in `s` kept as products of linear factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopZeta {
    pub num: Vec<LinearFactor>,
    pub den: Vec<LinearFactor>,
}

impl TopZeta {
    pub fn eval(&self, s: &BigRational) -> Option<BigRational> {
        let n = self.num.iter().fold(BigRational::one(), |acc, f| acc * f.eval(s));
        let d = self.den.iter().fold(BigRational::one(), |acc, f| acc * f.eval(s));
        (!d.is_zero()).then(|| n / d)
    }
}

impl fmt::Display for TopZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[LinearFactor]| v.iter().map(|x| x.to_string()).collect::<String>();
        write!(f, "{}/({})", join(&self.num), join(&self.den))
    }
}

/// Topological zeta functions of the two module families, as tabulated.
pub fn topological_zeta(family: &FormulaFamily) -> Result<TopZeta, CatalogError> {
    let lf = |a, b| LinearFactor { a, b };
    match *family {
        FormulaFamily::NaturalPower { n, .. } | FormulaFamily::Sym2Power { n, .. } if n == 0 => {
            Err(CatalogError::InvalidParams("n must be at least 1".into()))
        }
        FormulaFamily::NaturalPower { n, .. } => {
            let n = n as i64;
            Ok(TopZeta {
                num: vec![lf(1, 0), lf(1, 2), lf(6, -3 * n - 1)],
                den: vec![lf(1, -1), lf(2, -n - 1), lf(3, -2 * n)],
            })
        }
        FormulaFamily::Sym2Power { n, .. } => {
            let n = n as i64;
            Ok(TopZeta {
                num: vec![lf(1, 0), lf(1, 2), lf(3, -n - 1)],
                den: vec![lf(2, -n - 2), lf(1, -n)],
            })
        }
        _ => Err(CatalogError::InvalidParams(
            "topological zeta is tabulated only for the natural and sym2 families".into(),
        )),
    }
}
