//! Dense univariate polynomials over a gcd domain, used recursively to get
//! exact gcds in `Z[q][t]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) trait GcdDomain: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    /// +1 or -1 making `self` unit-normal.
    fn is_negative_normal(&self) -> bool;
}

impl GcdDomain for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            return None;
        }
        let (d, r) = self.div_rem(o);
        if Zero::is_zero(&r) {
            Some(d)
        } else {
            None
        }
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_negative_normal(&self) -> bool {
        self.is_negative()
    }
}

/// Coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub(crate) struct Poly<R: GcdDomain>(pub Vec<R>);

impl<R: GcdDomain> Poly<R> {
    pub fn new(mut c: Vec<R>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> &R {
        self.0.last().expect("lc of zero polynomial")
    }

    fn shifted(&self, k: usize) -> Self {
        let mut c = vec![R::zero(); k];
        c.extend(self.0.iter().cloned());
        Poly(c)
    }

    fn scale(&self, r: &R) -> Self {
        Poly::new(self.0.iter().map(|x| x.mul(r)).collect())
    }

    pub fn content(&self) -> R {
        let mut g = R::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g == R::one() {
                break;
            }
        }
        g
    }

    pub fn primitive(&self) -> Self {
        if self.0.is_empty() {
            return self.clone();
        }
        let c = self.content();
        Poly::new(self.0.iter().map(|x| x.exact_div(&c).unwrap()).collect())
    }

    fn prem(&self, b: &Self) -> Self {
        let db = b.degree().unwrap();
        let lb = b.lc().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc().clone();
            r = GcdDomain::sub(&r.scale(&lb), &b.scale(&lr).shifted(dr - db));
        }
        r
    }

    fn normal(self) -> Self {
        if self.0.last().is_some_and(|x| x.is_negative_normal()) {
            GcdDomain::neg(&self)
        } else {
            self
        }
    }
}

impl<R: GcdDomain> GcdDomain for Poly<R> {
    fn zero() -> Self {
        Poly(Vec::new())
    }
    fn one() -> Self {
        Poly(vec![R::one()])
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = R::zero();
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z).add(o.0.get(i).unwrap_or(&z)))
                .collect(),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut c = vec![R::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::new(c)
    }
    fn neg(&self) -> Self {
        Poly(self.0.iter().map(|x| x.neg()).collect())
    }
    fn exact_div(&self, b: &Self) -> Option<Self> {
        let db = b.degree()?;
        let mut r = self.clone();
        let mut quo = vec![R::zero(); self.0.len().saturating_sub(db).max(1)];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let c = r.lc().exact_div(b.lc())?;
            r = GcdDomain::sub(&r, &b.scale(&c).shifted(dr - db));
            quo[dr - db] = c;
        }
        Some(Poly::new(quo))
    }
    fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone().normal();
        }
        if o.is_zero() {
            return self.clone().normal();
        }
        let c = self.content().gcd(&o.content());
        let (mut x, mut y) = (self.primitive(), o.primitive());
        if x.degree() < y.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let r = x.prem(&y);
            x = y;
            y = r.primitive();
        }
        x.primitive().scale(&c).normal()
    }
    fn is_negative_normal(&self) -> bool {
        self.0.last().is_some_and(|x| x.is_negative_normal())
    }
}

pub(crate) type ZPoly = Poly<BigInt>;
pub(crate) type ZPoly2 = Poly<ZPoly>;
