//! Principal-lattice Lagrange interpolation on tetrahedra.

mod poly;

pub use poly::{Exponent, MultiPolynomial, PolynomialData, TermData, COMPOSE_DEGREE_LIMIT};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::par;
use crate::simplex::{Tetrahedron, Vec3};

/// Highest interpolation degree supported by the library.
pub const MAX_DEGREE: u32 = 6;

/// Multi-index `(a1, a2, a3, a4)`; `gamma / |gamma|` is a barycentric point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex4(pub [u32; 4]);

impl MultiIndex4 {
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn barycentric(&self) -> [f64; 4] {
        let k = f64::from(self.order());
        self.0.map(|a| f64::from(a) / k)
    }
}

/// All multi-indices of order `k`, lexicographically ascending.
pub fn lattice_indices(k: u32) -> Vec<MultiIndex4> {
    let mut out = Vec::new();
    for a1 in 0..=k {
        for a2 in 0..=k - a1 {
            for a3 in 0..=k - a1 - a2 {
                out.push(MultiIndex4([a1, a2, a3, k - a1 - a2 - a3]));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticePoint {
    pub index: MultiIndex4,
    pub point: Vec3,
    pub barycentric: [f64; 4],
}

fn check_degree(k: u32) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&k) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("interpolation degree {k} not in 1..={MAX_DEGREE}")))
    }
}

/// `Sigma^k(K)`: `C(k+3, 3)` points in lexicographic index order.
pub fn lattice_points(k_elem: &Tetrahedron, k: u32) -> Result<Vec<LatticePoint>> {
    check_degree(k)?;
    let v = k_elem.vertices();
    Ok(lattice_indices(k)
        .into_iter()
        .map(|index| {
            let barycentric = index.barycentric();
            let point = (0..4).map(|i| barycentric[i] * v[i]).sum();
            LatticePoint { index, point, barycentric }
        })
        .collect())
}

/// The Lagrange basis function attached to one lattice node,
/// `N(lambda) = prod_i prod_{l < a_i} (k lambda_i - l) / (a_i - l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeBasis {
    k: u32,
    gamma: MultiIndex4,
}

pub fn lagrange_basis(k: u32, gamma: MultiIndex4) -> Result<LagrangeBasis> {
    if gamma.order() != k {
        return Err(Error::IndexOrderMismatch { expected: k, found: gamma.order() });
    }
    Ok(LagrangeBasis { k, gamma })
}

impl LagrangeBasis {
    pub fn eval(&self, lambda: &[f64; 4]) -> f64 {
        let k = f64::from(self.k);
        let mut value = 1.0;
        for (a, l) in self.gamma.0.iter().zip(lambda) {
            for j in 0..*a {
                value *= (k * l - f64::from(j)) / f64::from(a - j);
            }
        }
        value
    }

    /// The same product with each `lambda_i` an affine polynomial in `x`.
    pub fn expand(&self, lambdas: &[MultiPolynomial; 4]) -> MultiPolynomial {
        let k = f64::from(self.k);
        let mut out = MultiPolynomial::constant(1.0);
        for (a, l) in self.gamma.0.iter().zip(lambdas) {
            for j in 0..*a {
                let factor =
                    &l.scale(k / f64::from(a - j)) - &MultiPolynomial::constant(f64::from(j) / f64::from(a - j));
                out = &out * &factor;
            }
        }
        out
    }
}

/// Barycentric coordinates of `K` as affine functions of Cartesian `x`.
pub fn barycentric_polynomials(k_elem: &Tetrahedron) -> Result<[MultiPolynomial; 4]> {
    let t = k_elem.edge_matrix();
    let h = k_elem.diameter();
    if t.determinant().abs() <= 1e-14 * h.powi(3) {
        return Err(Error::IllConditioned);
    }
    let inv = t.try_inverse().ok_or(Error::IllConditioned)?;
    let x1 = k_elem.vertex(0);
    // lambda_{i+1}(x) = row_i(T^-1) (x - x1)
    let mut lambdas: [MultiPolynomial; 4] = Default::default();
    let mut sum_lin = [0.0; 3];
    let mut sum_const = 0.0;
    for i in 0..3 {
        let row = inv.row(i);
        let lin = [row[0], row[1], row[2]];
        let c = -(row * x1)[0];
        lambdas[i + 1] = MultiPolynomial::affine(c, lin);
        for j in 0..3 {
            sum_lin[j] += lin[j];
        }
        sum_const += c;
    }
    lambdas[0] = MultiPolynomial::affine(1.0 - sum_const, sum_lin.map(|s| -s));
    Ok(lambdas)
}

/// Degree-`k` interpolation operator on a fixed element, with the basis
/// expanded once into Cartesian monomials.
#[derive(Debug, Clone)]
pub struct LagrangeInterpolator {
    k: u32,
    nodes: Vec<LatticePoint>,
    basis: Vec<MultiPolynomial>,
}

impl LagrangeInterpolator {
    pub fn new(k_elem: &Tetrahedron, k: u32) -> Result<Self> {
        let nodes = lattice_points(k_elem, k)?;
        let lambdas = barycentric_polynomials(k_elem)?;
        let basis =
            par::map(&nodes, |n| lagrange_basis(k, n.index).expect("lattice index has order k").expand(&lambdas));
        Ok(LagrangeInterpolator { k, nodes, basis })
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn nodes(&self) -> &[LatticePoint] {
        &self.nodes
    }

    pub fn basis(&self) -> &[MultiPolynomial] {
        &self.basis
    }

    /// Interpolant of nodal values given per multi-index.
    pub fn interpolate_values(&self, values: &BTreeMap<MultiIndex4, f64>) -> Result<MultiPolynomial> {
        let mut ordered = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = values.get(&n.index).ok_or(Error::MissingNode(n.index.0))?;
            ordered.push(*v);
        }
        Ok(self.combine(&ordered))
    }

    /// Interpolant of a function sampled at the lattice points.
    pub fn interpolate_fn(&self, f: impl Fn(&Vec3) -> f64) -> MultiPolynomial {
        let values: Vec<f64> = self.nodes.iter().map(|n| f(&n.point)).collect();
        self.combine(&values)
    }

    pub fn interpolate_poly(&self, q: &MultiPolynomial) -> MultiPolynomial {
        self.interpolate_fn(|x| q.eval(x))
    }

    /// `sum |q(x_g)| max|N_g|`: the size of the terms that cancel when the
    /// interpolant is assembled in Cartesian monomials, and hence the
    /// natural unit for its coefficient rounding error.
    pub fn coefficient_scale(&self, q: &MultiPolynomial) -> f64 {
        self.nodes.iter().zip(&self.basis).map(|(n, b)| q.eval(&n.point).abs() * b.max_abs_coeff()).sum()
    }

    fn combine(&self, values: &[f64]) -> MultiPolynomial {
        let mut terms = Vec::new();
        for (b, v) in self.basis.iter().zip(values) {
            if *v != 0.0 {
                terms.extend(b.terms().map(|(e, c)| (*e, c * v)));
            }
        }
        MultiPolynomial::from_terms(terms)
    }
}

/// `I_K^k` applied to explicit nodal values.
pub fn interpolate(k_elem: &Tetrahedron, k: u32, values: &BTreeMap<MultiIndex4, f64>) -> Result<MultiPolynomial> {
    LagrangeInterpolator::new(k_elem, k)?.interpolate_values(values)
}

/// `I_K^k q` for a polynomial `q`.
pub fn interpolate_poly(k_elem: &Tetrahedron, k: u32, q: &MultiPolynomial) -> Result<MultiPolynomial> {
    Ok(LagrangeInterpolator::new(k_elem, k)?.interpolate_poly(q))
}

/// Formal partial derivative.
pub fn differentiate(q: &MultiPolynomial, delta: Exponent) -> MultiPolynomial {
    q.differentiate(delta)
}
