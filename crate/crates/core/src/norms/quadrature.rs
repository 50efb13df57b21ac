//! Collapsed Gauss-Jacobi cubature on tetrahedra and uniform 1:8 refinement.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::simplex::Vec3;

/// Points per direction of the collapsed rule; exact for total degree
/// `2 * NODES - 1 = 9`.
pub const NODES: usize = 5;

/// Gauss-Jacobi nodes and weights on `[0, 1]` for the weight `(1 - u)^a`.
pub fn gauss_jacobi_unit(n: usize, a: u32) -> Vec<(f64, f64)> {
    // Golub-Welsch on [-1, 1] for (1 - x)^a (1 + x)^0
    let (a, b) = (f64::from(a), 0.0);
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jac[(k, k)] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if k + 1 < n {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + a + b;
            let beta = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
            jac[(k, k + 1)] = beta.sqrt();
            jac[(k + 1, k)] = beta.sqrt();
        }
    }
    // total mass of (1 - x)^a on [-1, 1] is 2^(a+1) / (a+1)
    let mu0 = 2f64.powf(a + 1.0) / (a + 1.0);
    let eig = SymmetricEigen::new(jac);
    let mut rule: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = mu0 * eig.eigenvectors[(0, i)].powi(2);
            // u = (1 + x) / 2, (1 - u)^a du = 2^(-a-1) (1 - x)^a dx
            ((1.0 + x) / 2.0, w / 2f64.powf(a + 1.0))
        })
        .collect();
    rule.sort_by(|p, q| p.0.total_cmp(&q.0));
    rule
}

/// Collapsed rule with `n` points per direction on the unit reference
/// tetrahedron; exact for total degree `2n - 1`, positive weights summing
/// to 1/6.
pub fn collapsed_rule(n: usize) -> Vec<(Vec3, f64)> {
    let gu = gauss_jacobi_unit(n, 2);
    let gv = gauss_jacobi_unit(n, 1);
    let gw = gauss_jacobi_unit(n, 0);
    let mut out = Vec::with_capacity(n.pow(3));
    for &(u, wu) in &gu {
        for &(v, wv) in &gv {
            for &(w, ww) in &gw {
                let p = Vec3::new(u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v));
                out.push((p, wu * wv * ww));
            }
        }
    }
    out
}

/// `collapsed_rule(NODES)`.
pub fn reference_rule() -> Vec<(Vec3, f64)> {
    collapsed_rule(NODES)
}

pub type Cell = [Vec3; 4];

/// Red refinement: four corner tetrahedra and the octahedron split along
/// the `x02 - x13` diagonal. All children have one eighth of the volume.
pub fn subdivide(cell: &Cell) -> [Cell; 8] {
    let [x0, x1, x2, x3] = *cell;
    let m = |a: Vec3, b: Vec3| 0.5 * (a + b);
    let (x01, x02, x03) = (m(x0, x1), m(x0, x2), m(x0, x3));
    let (x12, x13, x23) = (m(x1, x2), m(x1, x3), m(x2, x3));
    [
        [x0, x01, x02, x03],
        [x01, x1, x12, x13],
        [x02, x12, x2, x23],
        [x03, x13, x23, x3],
        [x01, x02, x03, x13],
        [x01, x02, x12, x13],
        [x02, x03, x13, x23],
        [x02, x12, x13, x23],
    ]
}

/// The unit reference tetrahedron refined `level` times (`8^level` cells).
pub fn refined_reference(level: u32) -> Vec<Cell> {
    let mut cells = vec![[Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), Vec3::new(0.0, 0.0, 1.0)]];
    for _ in 0..level {
        cells = cells.iter().flat_map(subdivide).collect();
    }
    cells
}

/// Applies `rule` (defined on the unit reference tetrahedron) to `cell`.
pub fn integrate_cell(cell: &Cell, rule: &[(Vec3, f64)], f: impl Fn(&Vec3) -> f64) -> f64 {
    let [x0, x1, x2, x3] = *cell;
    let (e1, e2, e3) = (x1 - x0, x2 - x0, x3 - x0);
    let jac = nalgebra::Matrix3::from_columns(&[e1, e2, e3]).determinant().abs();
    let sum: f64 = rule.iter().map(|(p, w)| w * f(&(x0 + p.x * e1 + p.y * e2 + p.z * e3))).sum();
    jac * sum
}
