//! Sobolev seminorms of polynomials over tetrahedra.
//!
//! `|v|_{m,p,K} = (sum_{|delta| = m} ||d^delta v||_{L^p(K)}^p)^{1/p}` with a
//! plain multi-index sum, and the maximum over `|delta| = m` for `p = inf`.

pub mod quadrature;

use std::fmt;
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};
use crate::interp::{lattice_indices, Exponent, MultiPolynomial};
use crate::par;
use crate::simplex::{make_squeeze, AffineMap, Squeeze, Tetrahedron};

/// Largest derivative order accepted by [`seminorm`].
pub const MAX_ORDER: u32 = 24;
/// Points per edge of the sampling lattice used for `p = inf`.
pub const SUP_POINTS_PER_EDGE: u32 = 50;
/// Relative change between refinement levels that ends the numeric path.
pub const QUADRATURE_REL_TOL: f64 = 1e-8;
/// Deepest uniform refinement tried by the numeric path.
pub const QUADRATURE_MAX_LEVEL: u32 = 5;

/// Lebesgue exponent `p` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    /// `1/p`, zero for `p = inf`.
    pub fn recip(&self) -> f64 {
        match self {
            PExponent::Finite(p) => 1.0 / p,
            PExponent::Infinity => 0.0,
        }
    }

    /// `Some(p)` when `p` is a positive even integer.
    pub fn as_even_integer(&self) -> Option<u32> {
        match *self {
            PExponent::Finite(p) if p > 0.0 && p.fract() == 0.0 && p <= 64.0 && (p as u32).is_multiple_of(2) => {
                Some(p as u32)
            }
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PExponent::Infinity)
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for PExponent {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(PExponent::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| format!("invalid exponent '{s}'"))?;
                if p.is_infinite() && p > 0.0 {
                    Ok(PExponent::Infinity)
                } else if p >= 1.0 {
                    Ok(PExponent::Finite(p))
                } else {
                    Err(format!("exponent must be at least 1, got {s}"))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormSpec {
    pub m: u32,
    pub p: PExponent,
}

impl SeminormSpec {
    pub fn new(m: u32, p: PExponent) -> Self {
        SeminormSpec { m, p }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `int_{K_hat} x^a y^b z^c = a! b! c! / (a + b + c + 3)!`.
pub fn reference_monomial_integral(e: Exponent) -> f64 {
    // a! b! c! / (a+b+c+3)! built as a running product to stay in range
    let [a, b, c] = e;
    let mut r = factorial(a) / factorial(a + 3);
    for j in 1..=b {
        r *= f64::from(j) / f64::from(a + 3 + j);
    }
    for j in 1..=c {
        r *= f64::from(j) / f64::from(a + b + 3 + j);
    }
    r
}

/// `x -> x1 + T x`, mapping the unit reference tetrahedron onto `K`.
pub fn reference_map(k: &Tetrahedron) -> AffineMap {
    AffineMap::new(k.edge_matrix(), k.vertex(0))
}

fn integrate_on_reference(q: &MultiPolynomial) -> f64 {
    q.terms().map(|(e, c)| c * reference_monomial_integral(*e)).sum()
}

/// Exact integral of a polynomial of degree at most 24 over `K`.
pub fn integrate_polynomial(k: &Tetrahedron, q: &MultiPolynomial) -> Result<f64> {
    let map = reference_map(k);
    let pulled = q.compose_affine_limited(&map, 24)?;
    Ok(map.determinant().abs() * integrate_on_reference(&pulled))
}

/// All derivatives of order `m`.
pub fn derivatives(q: &MultiPolynomial, m: u32) -> Vec<MultiPolynomial> {
    MultiPolynomial::exponents_of_degree(m).into_iter().map(|d| q.differentiate(d)).collect()
}

/// `|q|_{m,p,K}`: exact for even integer `p`, lattice sampling for
/// `p = inf`, uniform-refinement cubature otherwise.
pub fn seminorm(k: &Tetrahedron, q: &MultiPolynomial, spec: SeminormSpec) -> Result<f64> {
    if spec.m > MAX_ORDER {
        return Err(Error::UnsupportedOrder(format!("m = {} exceeds {MAX_ORDER}", spec.m)));
    }
    let derivs: Vec<MultiPolynomial> = derivatives(q, spec.m).into_iter().filter(|d| !d.is_zero()).collect();
    if derivs.is_empty() {
        return Ok(0.0);
    }
    match spec.p {
        PExponent::Infinity => Ok(sup_seminorm(k, &derivs)),
        p => match p.as_even_integer() {
            Some(n) => exact_even_seminorm(k, &derivs, n),
            None => {
                let PExponent::Finite(p) = p else { unreachable!() };
                if p < 1.0 {
                    return Err(Error::UnsupportedOrder(format!("p = {p} below 1")));
                }
                numeric_seminorm(k, &derivs, p)
            }
        },
    }
}

/// `|q|_{m,p,K}` through the refinement cubature regardless of `p`; a
/// cross-check for the exact even-`p` path.
pub fn seminorm_cubature(k: &Tetrahedron, q: &MultiPolynomial, m: u32, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::UnsupportedOrder(format!("cubature needs finite p >= 1, got {p}")));
    }
    let derivs: Vec<MultiPolynomial> = derivatives(q, m).into_iter().filter(|d| !d.is_zero()).collect();
    if derivs.is_empty() {
        return Ok(0.0);
    }
    numeric_seminorm(k, &derivs, p)
}

/// Largest even-`p` integrand degree handled by the Gauss rule.
pub const EXACT_DEGREE_LIMIT: u32 = 63;

/// Even `p`: `|d|^p = d^p` is a polynomial, so a collapsed Gauss rule of
/// sufficient order integrates it exactly. Summing nonnegative samples
/// avoids the cancellation of expanding `d^p` in monomials.
fn exact_even_seminorm(k: &Tetrahedron, derivs: &[MultiPolynomial], p: u32) -> Result<f64> {
    let map = reference_map(k);
    let jac = map.determinant().abs();
    let pulled: Vec<MultiPolynomial> =
        derivs.iter().map(|d| d.compose_affine_limited(&map, MAX_ORDER)).collect::<Result<_>>()?;
    let degree = p * pulled.iter().map(MultiPolynomial::degree).max().unwrap_or(0);
    if degree > EXACT_DEGREE_LIMIT {
        return Err(Error::DegreeOverflow { degree, limit: EXACT_DEGREE_LIMIT });
    }
    let rule = quadrature::collapsed_rule(degree as usize / 2 + 1);
    let sum = par::ordered_sum(rule.len(), |i| {
        let (x, w) = &rule[i];
        w * pulled.iter().map(|d| d.eval(x).powi(p as i32)).sum::<f64>()
    });
    Ok((jac * sum).powf(1.0 / f64::from(p)))
}

fn sup_seminorm(k: &Tetrahedron, derivs: &[MultiPolynomial]) -> f64 {
    let v = k.vertices();
    let pts = lattice_indices(SUP_POINTS_PER_EDGE - 1);
    let maxima = par::map(&pts, |idx| {
        let lam = idx.barycentric();
        let x = (0..4).map(|i| lam[i] * v[i]).sum();
        derivs.iter().map(|d| d.eval(&x).abs()).fold(0.0, f64::max)
    });
    maxima.into_iter().fold(0.0, f64::max)
}

/// Cubature of `sum_delta |d^delta q|^p` on `8^level` cells of the reference
/// element, with the integrand pulled back.
fn numeric_seminorm(k: &Tetrahedron, derivs: &[MultiPolynomial], p: f64) -> Result<f64> {
    let map = reference_map(k);
    let jac = map.determinant().abs();
    let pulled: Vec<MultiPolynomial> =
        derivs.iter().map(|d| d.compose_affine_limited(&map, MAX_ORDER)).collect::<Result<_>>()?;
    let rule = quadrature::reference_rule();
    let integrand = |x: &crate::simplex::Vec3| pulled.iter().map(|d| d.eval(x).abs().powf(p)).sum::<f64>();
    let mut previous: Option<f64> = None;
    let mut value = 0.0;
    for level in 0..=QUADRATURE_MAX_LEVEL {
        let cells = quadrature::refined_reference(level);
        value = par::ordered_sum(cells.len(), |i| quadrature::integrate_cell(&cells[i], &rule, integrand));
        if let Some(prev) = previous {
            if (value - prev).abs() <= QUADRATURE_REL_TOL * value.abs() {
                return Ok((jac * value).powf(1.0 / p));
            }
        }
        previous = Some(value);
    }
    warn!("seminorm cubature not converged to {QUADRATURE_REL_TOL:e} after {QUADRATURE_MAX_LEVEL} levels (p = {p})");
    Ok((jac * value).powf(1.0 / p))
}

/// Evaluates both sides of `|q|_{k,p,K} = a^{3/p - k} |q o G_a|_{k,p,G_{1/a}(K)}`.
pub fn scaling_identity_check(
    q: &MultiPolynomial,
    k_elem: &Tetrahedron,
    alpha: f64,
    k: u32,
    p: PExponent,
) -> Result<(f64, f64)> {
    if p.as_even_integer().is_none() && !p.is_infinite() {
        return Err(Error::UnsupportedOrder(format!("scaling check needs even p or inf, got {p}")));
    }
    let g = make_squeeze(Squeeze::Similarity(alpha))?;
    let g_inv = make_squeeze(Squeeze::Similarity(1.0 / alpha))?;
    let spec = SeminormSpec::new(k, p);
    let lhs = seminorm(k_elem, q, spec)?;
    let pulled = q.compose_affine_limited(&g, MAX_ORDER)?;
    let shrunk = k_elem.transformed(&g_inv)?;
    let rhs = alpha.powf(3.0 * p.recip() - f64::from(k)) * seminorm(&shrunk, &pulled, spec)?;
    Ok((lhs, rhs))
}

/// Admissibility of `p` for `(k, m)`:
/// `p > 2` if `k = m`; `p > 3/2` if `k = 1, m = 0`; `p >= 1` if `k >= 2, k - m >= 1`.
pub fn validate_p(k: u32, m: u32, p: PExponent) -> bool {
    check_p(k, m, p).is_ok()
}

pub fn check_p(k: u32, m: u32, p: PExponent) -> Result<()> {
    let fail = |clause: &'static str| Err(Error::InvalidPForKM { k, m, p: p.to_string(), clause });
    if k == 0 || m > k {
        return fail("requires k >= 1 and 0 <= m <= k");
    }
    let value = match p {
        PExponent::Infinity => f64::INFINITY,
        PExponent::Finite(v) => v,
    };
    if !(value >= 1.0) {
        return fail("requires p >= 1");
    }
    if k == m {
        if value > 2.0 {
            Ok(())
        } else {
            fail("requires p > 2 when k - m = 0")
        }
    } else if k == 1 {
        if value > 1.5 {
            Ok(())
        } else {
            fail("requires p > 3/2 when k = 1, m = 0")
        }
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{reference_tetrahedron, Reference};
    use approx::assert_relative_eq;

    fn k_hat() -> Tetrahedron {
        reference_tetrahedron(Reference::Hat)
    }

    fn two() -> PExponent {
        PExponent::Finite(2.0)
    }

    #[test]
    fn reference_integrals() {
        let one = MultiPolynomial::constant(1.0);
        assert_relative_eq!(integrate_polynomial(&k_hat(), &one).unwrap(), 1.0 / 6.0, epsilon = 1e-15);
        let x = MultiPolynomial::var(0);
        assert_relative_eq!(integrate_polynomial(&k_hat(), &x).unwrap(), 1.0 / 24.0, epsilon = 1e-15);
        let big = k_hat().transformed(&make_squeeze(Squeeze::Similarity(2.0)).unwrap()).unwrap();
        assert_relative_eq!(integrate_polynomial(&big, &one).unwrap(), 8.0 / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn monomial_integral_formula() {
        assert_relative_eq!(reference_monomial_integral([2, 1, 0]), 2.0 / 720.0, epsilon = 1e-16);
        assert_relative_eq!(reference_monomial_integral([0, 0, 0]), 1.0 / 6.0);
    }

    #[test]
    fn sum_of_squares_h2_seminorm() {
        let q = MultiPolynomial::from_terms([([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0)]);
        let s = seminorm(&k_hat(), &q, SeminormSpec::new(2, two())).unwrap();
        assert_relative_eq!(s, 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn sup_seminorm_of_linear_data() {
        let q = MultiPolynomial::affine(0.0, [1.0, -3.0, 2.0]);
        let s = seminorm(&k_hat(), &q, SeminormSpec::new(1, PExponent::Infinity)).unwrap();
        assert_eq!(s, 3.0);
        let s = seminorm(&k_hat(), &q, SeminormSpec::new(0, PExponent::Infinity)).unwrap();
        assert_relative_eq!(s, 3.0, epsilon = 1e-15);
    }

    #[test]
    fn derivatives_beyond_degree_vanish() {
        let q = MultiPolynomial::var(0).powi(2);
        assert_eq!(seminorm(&k_hat(), &q, SeminormSpec::new(3, two())).unwrap(), 0.0);
        assert!(seminorm(&k_hat(), &q, SeminormSpec::new(25, two())).is_err());
    }

    #[test]
    fn odd_exponent_uses_cubature() {
        // |x|_{0,3} on K_hat: int x^3 = 3!/6! = 1/120
        let q = MultiPolynomial::var(0);
        let s = seminorm(&k_hat(), &q, SeminormSpec::new(0, PExponent::Finite(3.0))).unwrap();
        assert_relative_eq!(s, (1.0f64 / 120.0).powf(1.0 / 3.0), max_relative = 1e-10);
    }

    #[test]
    fn scaling_identity_examples() {
        let q = MultiPolynomial::var(0).powi(2);
        let (l, r) = scaling_identity_check(&q, &k_hat(), 2.0, 2, two()).unwrap();
        assert_relative_eq!(l, r, max_relative = 1e-10);
        let (l, r) = scaling_identity_check(&q, &k_hat(), 1.0, 2, two()).unwrap();
        assert_relative_eq!(l, r, max_relative = 1e-14);
        let z = MultiPolynomial::var(2);
        let (l, r) = scaling_identity_check(&z, &k_hat(), 3.0, 1, PExponent::Infinity).unwrap();
        assert_relative_eq!(l, 1.0);
        assert_relative_eq!(r, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn admissible_exponents() {
        assert!(!validate_p(1, 1, two()));
        assert!(validate_p(2, 1, two()));
        assert!(validate_p(1, 0, PExponent::Finite(1.6)));
        assert!(!validate_p(1, 0, PExponent::Finite(1.5)));
        assert!(validate_p(1, 1, PExponent::Infinity));
        assert!(!validate_p(2, 3, PExponent::Infinity));
        let err = check_p(1, 1, two()).unwrap_err();
        assert!(err.to_string().contains("requires p > 2"));
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<PExponent>().unwrap(), PExponent::Infinity);
        assert_eq!("2".parse::<PExponent>().unwrap(), two());
        assert!("0.5".parse::<PExponent>().is_err());
        assert!("abc".parse::<PExponent>().is_err());
        assert_eq!(PExponent::Infinity.to_string(), "inf");
        assert_eq!(two().to_string(), "2");
    }
}
