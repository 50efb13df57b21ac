//! Tetrahedra, their elementary measures, affine maps, and the reduction
//! to standard position.

mod affine;
mod factor;
mod standard;

pub use affine::{make_squeeze, reference_tetrahedron, AffineMap, Reference, Squeeze};
pub use factor::{matrix_factorization, MatrixFactorization};
pub use standard::{standard_position, PositionCase, StandardPosition};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Relative volume threshold below which a tetrahedron counts as flat.
pub const DEGENERACY_EPS: f64 = 1e-14;

/// A non-degenerate tetrahedron with labelled vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TetrahedronData", into = "TetrahedronData")]
pub struct Tetrahedron {
    vertices: [Vec3; 4],
}

/// JSON form: `{"vertices": [[x,y,z], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TetrahedronData {
    pub vertices: [[f64; 3]; 4],
}

impl TryFrom<TetrahedronData> for Tetrahedron {
    type Error = Error;

    fn try_from(data: TetrahedronData) -> Result<Self> {
        validate_tetrahedron(data.vertices)
    }
}

impl From<Tetrahedron> for TetrahedronData {
    fn from(k: Tetrahedron) -> Self {
        TetrahedronData { vertices: k.vertices.map(|v| [v.x, v.y, v.z]) }
    }
}

/// Checks finiteness and non-degeneracy, returning the validated element.
pub fn validate_tetrahedron(vertices: [[f64; 3]; 4]) -> Result<Tetrahedron> {
    Tetrahedron::from_points(vertices.map(Vec3::from))
}

impl Tetrahedron {
    pub fn new(vertices: [[f64; 3]; 4]) -> Result<Self> {
        validate_tetrahedron(vertices)
    }

    pub fn from_points(vertices: [Vec3; 4]) -> Result<Self> {
        if vertices.iter().any(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite);
        }
        let k = Tetrahedron { vertices };
        let h = k.diameter();
        let vol = k.signed_volume().abs();
        if h == 0.0 || vol <= DEGENERACY_EPS * h.powi(3) {
            return Err(Error::DegenerateElement(format!("volume {vol:e} at diameter {h:e}")));
        }
        Ok(k)
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tetrahedron serialises")
    }

    pub fn vertices(&self) -> &[Vec3; 4] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vec3 {
        self.vertices[i]
    }

    /// Columns `x2 - x1`, `x3 - x1`, `x4 - x1`.
    pub fn edge_matrix(&self) -> Matrix3<f64> {
        let [a, b, c, d] = self.vertices;
        Matrix3::from_columns(&[b - a, c - a, d - a])
    }

    pub fn signed_volume(&self) -> f64 {
        self.edge_matrix().determinant() / 6.0
    }

    pub fn volume(&self) -> f64 {
        self.signed_volume().abs()
    }

    /// `h_K`: the longest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut h: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                h = h.max((self.vertices[i] - self.vertices[j]).norm());
            }
        }
        h
    }

    /// The facet opposite vertex `i`, in ascending label order.
    pub fn facet(&self, i: usize) -> [Vec3; 3] {
        let idx = facet_indices(i);
        idx.map(|j| self.vertices[j])
    }

    pub fn facet_area(&self, i: usize) -> f64 {
        let [p, q, r] = self.facet(i);
        0.5 * (q - p).cross(&(r - p)).norm()
    }

    /// Returns `(rho_K, R_sphere)`: the diameter of the inscribed sphere and
    /// the radius of the circumscribed sphere.
    pub fn inradius_circumradius(&self) -> Result<(f64, f64)> {
        let area: f64 = (0..4).map(|i| self.facet_area(i)).sum();
        let rho = 2.0 * 3.0 * self.volume() / area;
        Ok((rho, self.circumsphere()?.1))
    }

    /// Circumcentre and circumradius from the 3x3 equidistance system,
    /// solved relative to the first vertex.
    pub fn circumsphere(&self) -> Result<(Vec3, f64)> {
        let origin = self.vertices[0];
        let e = [self.vertices[1] - origin, self.vertices[2] - origin, self.vertices[3] - origin];
        let a = Matrix3::from_rows(&[(2.0 * e[0]).transpose(), (2.0 * e[1]).transpose(), (2.0 * e[2]).transpose()]);
        let rhs = Vec3::new(e[0].norm_squared(), e[1].norm_squared(), e[2].norm_squared());
        let c = a.lu().solve(&rhs).ok_or_else(|| Error::DegenerateElement("singular circumsphere system".into()))?;
        Ok((origin + c, c.norm()))
    }

    /// Image of the element under an affine map, revalidated.
    pub fn transformed(&self, map: &AffineMap) -> Result<Tetrahedron> {
        Tetrahedron::from_points(self.vertices.map(|v| map.apply(&v)))
    }
}

/// Vertex labels of the facet opposite vertex `i`.
pub fn facet_indices(i: usize) -> [usize; 3] {
    match i {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        3 => [0, 1, 2],
        _ => panic!("facet index {i} out of range 0..4"),
    }
}

/// Circumradius of the triangle `pqr` via `|pq||qr||rp| / (4 area)`.
pub fn facet_circumradius(p: &Vec3, q: &Vec3, r: &Vec3) -> Result<f64> {
    let a = (q - p).norm();
    let b = (r - q).norm();
    let c = (p - r).norm();
    let area = 0.5 * (q - p).cross(&(r - p)).norm();
    let scale = a.max(b).max(c);
    if !(area > 1e-14 * scale * scale) {
        return Err(Error::CollinearPoints);
    }
    Ok(a * b * c / (4.0 * area))
}
