use nalgebra::Matrix3;

use super::{Tetrahedron, Vec3};
use crate::error::{Error, Result};

/// `x -> L x + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub linear: Matrix3<f64>,
    pub translation: Vec3,
}

impl AffineMap {
    pub fn new(linear: Matrix3<f64>, translation: Vec3) -> Self {
        AffineMap { linear, translation }
    }

    pub fn identity() -> Self {
        AffineMap::linear(Matrix3::identity())
    }

    pub fn linear(linear: Matrix3<f64>) -> Self {
        AffineMap { linear, translation: Vec3::zeros() }
    }

    pub fn diagonal(d: [f64; 3]) -> Self {
        AffineMap::linear(Matrix3::from_diagonal(&Vec3::from(d)))
    }

    pub fn apply(&self, x: &Vec3) -> Vec3 {
        self.linear * x + self.translation
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear * inner.linear,
            translation: self.linear * inner.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let inv = self.linear.try_inverse()?;
        Some(AffineMap { linear: inv, translation: -(inv * self.translation) })
    }

    pub fn determinant(&self) -> f64 {
        self.linear.determinant()
    }
}

/// The squeezing maps and the similarity `G_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Squeeze {
    /// `(x, y, z) -> (x, a y, b z)` with `0 < a <= 1`, `b > 0`.
    Sq1 { a: f64, b: f64 },
    /// `(x, y, z) -> (alpha x, beta y, gamma z)` with `0 < beta <= alpha`, `gamma > 0`.
    Sq2 { alpha: f64, beta: f64, gamma: f64 },
    /// Uniform scaling by `alpha > 0`.
    Similarity(f64),
}

pub fn make_squeeze(kind: Squeeze) -> Result<AffineMap> {
    let out_of_range = |msg: String| Err(Error::ParameterOutOfRange(msg));
    match kind {
        Squeeze::Sq1 { a, b } => {
            if !(a > 0.0 && a <= 1.0 && b > 0.0 && b.is_finite()) {
                return out_of_range(format!("sq1 needs 0 < a <= 1 and b > 0, got a = {a}, b = {b}"));
            }
            Ok(AffineMap::diagonal([1.0, a, b]))
        }
        Squeeze::Sq2 { alpha, beta, gamma } => {
            if !(beta > 0.0 && beta <= alpha && gamma > 0.0 && alpha.is_finite() && gamma.is_finite()) {
                return out_of_range(format!(
                    "sq2 needs 0 < beta <= alpha and gamma > 0, got ({alpha}, {beta}, {gamma})"
                ));
            }
            Ok(AffineMap::diagonal([alpha, beta, gamma]))
        }
        Squeeze::Similarity(alpha) => {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return out_of_range(format!("similarity needs alpha > 0, got {alpha}"));
            }
            Ok(AffineMap::diagonal([alpha; 3]))
        }
    }
}

/// The two reference tetrahedra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Vertices `0, e1, e2, e3`.
    Hat,
    /// Vertices `0, e1, e1 + e2, e3`.
    Tilde,
}

pub fn reference_tetrahedron(which: Reference) -> Tetrahedron {
    let third = match which {
        Reference::Hat => [0.0, 1.0, 0.0],
        Reference::Tilde => [1.0, 1.0, 0.0],
    };
    Tetrahedron::new([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], third, [0.0, 0.0, 1.0]])
        .expect("reference tetrahedra are non-degenerate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sq1_unit_is_identity() {
        assert_eq!(make_squeeze(Squeeze::Sq1 { a: 1.0, b: 1.0 }).unwrap(), AffineMap::identity());
    }

    #[test]
    fn sq2_maps_first_axis() {
        let m = make_squeeze(Squeeze::Sq2 { alpha: 2.0, beta: 1.0, gamma: 3.0 }).unwrap();
        assert_eq!(m.apply(&Vec3::new(1.0, 0.0, 0.0)), Vec3::new(2.0, 0.0, 0.0));
    }

    #[test]
    fn sq2_factors_through_similarity() {
        let sq2 = make_squeeze(Squeeze::Sq2 { alpha: 2.0, beta: 1.0, gamma: 3.0 }).unwrap();
        let composed = make_squeeze(Squeeze::Similarity(2.0))
            .unwrap()
            .compose(&make_squeeze(Squeeze::Sq1 { a: 0.5, b: 1.5 }).unwrap());
        for v in reference_tetrahedron(Reference::Hat).vertices() {
            assert_relative_eq!(sq2.apply(v), composed.apply(v), epsilon = 1e-15);
        }
    }

    #[test]
    fn squeeze_parameter_ranges() {
        assert!(make_squeeze(Squeeze::Sq1 { a: 1.5, b: 1.0 }).is_err());
        assert!(make_squeeze(Squeeze::Sq1 { a: 0.0, b: 1.0 }).is_err());
        assert!(make_squeeze(Squeeze::Sq1 { a: 0.5, b: -1.0 }).is_err());
        assert!(make_squeeze(Squeeze::Sq2 { alpha: 1.0, beta: 2.0, gamma: 1.0 }).is_err());
        assert!(make_squeeze(Squeeze::Similarity(0.0)).is_err());
        assert!(make_squeeze(Squeeze::Similarity(f64::NAN)).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let m = AffineMap::new(Matrix3::new(1.0, 2.0, 0.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0), Vec3::new(1.0, -2.0, 0.5));
        let inv = m.inverse().unwrap();
        let x = Vec3::new(0.3, -0.7, 2.0);
        assert_relative_eq!(inv.apply(&m.apply(&x)), x, epsilon = 1e-13);
        assert_relative_eq!(m.compose(&inv).apply(&x), x, epsilon = 1e-13);
    }
}
