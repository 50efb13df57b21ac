//! Trivariate polynomials in the monomial basis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{AffineMap, Vec3};

/// Exponents `(i, j, l)` of `x^i y^j z^l`.
pub type Exponent = [u32; 3];

/// Coefficients below this fraction of the largest one are dropped.
pub const PRUNE_REL: f64 = 1e-14;
/// Degree limit of [`MultiPolynomial::compose_affine`].
pub const COMPOSE_DEGREE_LIMIT: u32 = 12;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "PolynomialData", into = "PolynomialData")]
pub struct MultiPolynomial {
    terms: BTreeMap<Exponent, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermData {
    pub exp: Exponent,
    pub coef: f64,
}

/// JSON form: `{"terms": [{"exp": [i, j, l], "coef": c}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialData {
    pub terms: Vec<TermData>,
}

impl From<PolynomialData> for MultiPolynomial {
    fn from(data: PolynomialData) -> Self {
        MultiPolynomial::from_terms(data.terms.into_iter().map(|t| (t.exp, t.coef)))
    }
}

impl From<MultiPolynomial> for PolynomialData {
    fn from(q: MultiPolynomial) -> Self {
        PolynomialData { terms: q.terms.into_iter().map(|(exp, coef)| TermData { exp, coef }).collect() }
    }
}

impl MultiPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(exp: Exponent, coef: f64) -> Self {
        Self::from_terms([(exp, coef)])
    }

    /// The coordinate `x` (0), `y` (1) or `z` (2).
    pub fn var(axis: usize) -> Self {
        let mut exp = [0; 3];
        exp[axis] = 1;
        Self::monomial(exp, 1.0)
    }

    /// `c + a . x`.
    pub fn affine(c: f64, a: [f64; 3]) -> Self {
        Self::from_terms([([0, 0, 0], c), ([1, 0, 0], a[0]), ([0, 1, 0], a[1]), ([0, 0, 1], a[2])])
    }

    /// Sums duplicate exponents and prunes.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, f64)>) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert(0.0) += c;
        }
        MultiPolynomial { terms: map }.pruned()
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialises")
    }

    fn pruned(mut self) -> Self {
        let max = self.max_abs_coeff();
        let cut = PRUNE_REL * max;
        self.terms.retain(|_, c| *c != 0.0 && c.abs() >= cut);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &f64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: Exponent) -> f64 {
        self.terms.get(&exp).copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        // small integer powers, cached per axis
        let deg = self.degree() as usize;
        let mut pows = [vec![1.0; deg + 1], vec![1.0; deg + 1], vec![1.0; deg + 1]];
        for (axis, p) in pows.iter_mut().enumerate() {
            for n in 1..=deg {
                p[n] = p[n - 1] * x[axis];
            }
        }
        self.terms
            .iter()
            .map(|(e, c)| c * pows[0][e[0] as usize] * pows[1][e[1] as usize] * pows[2][e[2] as usize])
            .sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        if s == 0.0 {
            return Self::zero();
        }
        MultiPolynomial { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    /// Formal partial derivative `d^delta`.
    pub fn differentiate(&self, delta: Exponent) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            if (0..3).any(|i| e[i] < delta[i]) {
                continue;
            }
            let mut coef = *c;
            let mut exp = *e;
            for i in 0..3 {
                for j in 0..delta[i] {
                    coef *= f64::from(e[i] - j);
                }
                exp[i] -= delta[i];
            }
            out.insert(exp, coef);
        }
        MultiPolynomial { terms: out }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = Self::constant(1.0);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `q(F(x))`, exact up to rounding. Fails above degree 12.
    pub fn compose_affine(&self, map: &AffineMap) -> Result<Self> {
        self.compose_affine_limited(map, COMPOSE_DEGREE_LIMIT)
    }

    pub(crate) fn compose_affine_limited(&self, map: &AffineMap, limit: u32) -> Result<Self> {
        let degree = self.degree();
        if degree > limit {
            return Err(Error::DegreeOverflow { degree, limit });
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let l = &map.linear;
        let t = &map.translation;
        let images: Vec<MultiPolynomial> =
            (0..3).map(|i| Self::affine(t[i], [l[(i, 0)], l[(i, 1)], l[(i, 2)]])).collect();
        let powers: Vec<Vec<MultiPolynomial>> = images
            .iter()
            .map(|img| {
                let mut p = vec![Self::constant(1.0)];
                for n in 1..=degree as usize {
                    let next = &p[n - 1] * img;
                    p.push(next);
                }
                p
            })
            .collect();

        // nested Horner: q = sum_a X^a sum_b Y^b sum_c c_abc Z^c
        let mut by_x: BTreeMap<u32, BTreeMap<u32, Vec<(u32, f64)>>> = BTreeMap::new();
        for (e, c) in &self.terms {
            by_x.entry(e[0]).or_default().entry(e[1]).or_default().push((e[2], *c));
        }
        let mut acc: BTreeMap<Exponent, f64> = BTreeMap::new();
        for (a, by_y) in by_x {
            let mut inner = BTreeMap::new();
            for (b, zs) in by_y {
                let mut qz: BTreeMap<Exponent, f64> = BTreeMap::new();
                for (cexp, coef) in zs {
                    for (e, v) in &powers[2][cexp as usize].terms {
                        *qz.entry(*e).or_insert(0.0) += coef * v;
                    }
                }
                let prod = &powers[1][b as usize] * &MultiPolynomial { terms: qz };
                for (e, v) in prod.terms {
                    *inner.entry(e).or_insert(0.0) += v;
                }
            }
            let prod = &powers[0][a as usize] * &MultiPolynomial { terms: inner };
            for (e, v) in prod.terms {
                *acc.entry(e).or_insert(0.0) += v;
            }
        }
        Ok(MultiPolynomial { terms: acc }.pruned())
    }

    /// All exponents with total degree exactly `d`, in lexicographic order.
    pub fn exponents_of_degree(d: u32) -> Vec<Exponent> {
        let mut out = Vec::new();
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                out.push([i, j, d - i - j]);
            }
        }
        out
    }
}

impl Add for &MultiPolynomial {
    type Output = MultiPolynomial;

    fn add(self, rhs: &MultiPolynomial) -> MultiPolynomial {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            *terms.entry(*e).or_insert(0.0) += c;
        }
        MultiPolynomial { terms }.pruned()
    }
}

impl Sub for &MultiPolynomial {
    type Output = MultiPolynomial;

    fn sub(self, rhs: &MultiPolynomial) -> MultiPolynomial {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            *terms.entry(*e).or_insert(0.0) -= c;
        }
        MultiPolynomial { terms }.pruned()
    }
}

impl Mul for &MultiPolynomial {
    type Output = MultiPolynomial;

    fn mul(self, rhs: &MultiPolynomial) -> MultiPolynomial {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                *terms.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        MultiPolynomial { terms }.pruned()
    }
}

impl Neg for &MultiPolynomial {
    type Output = MultiPolynomial;

    fn neg(self) -> MultiPolynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for MultiPolynomial {
            type Output = MultiPolynomial;

            fn $method(self, rhs: MultiPolynomial) -> MultiPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Mul<f64> for &MultiPolynomial {
    type Output = MultiPolynomial;

    fn mul(self, s: f64) -> MultiPolynomial {
        self.scale(s)
    }
}

impl fmt::Display for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (name, p) in ["x", "y", "z"].iter().zip(e) {
                match p {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{p}")?,
                }
            }
        }
        Ok(())
    }
}
