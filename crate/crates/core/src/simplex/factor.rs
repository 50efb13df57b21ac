use nalgebra::{Matrix3, SymmetricEigen};

use super::{PositionCase, StandardPosition};

/// `A = X Y` with `K = A G(reference)`.
///
/// `A` is the hat matrix in case (i) and the tilde matrix in case (ii); the
/// two differ only in the sign of `s1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFactorization {
    pub a: Matrix3<f64>,
    pub x: Matrix3<f64>,
    pub y: Matrix3<f64>,
    pub g: Matrix3<f64>,
    /// Ascending.
    pub eigenvalues_xtx: [f64; 3],
    /// Ascending.
    pub eigenvalues_yty: [f64; 3],
}

fn sorted_eigenvalues(m: Matrix3<f64>) -> [f64; 3] {
    let mut ev: [f64; 3] = SymmetricEigen::new(m).eigenvalues.into();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn matrix_factorization(sp: &StandardPosition) -> MatrixFactorization {
    let s1 = match sp.case {
        PositionCase::I => sp.s1,
        PositionCase::II => -sp.s1,
    };
    #[rustfmt::skip]
    let a = Matrix3::new(
        1.0, s1,    sp.s21,
        0.0, sp.t1, sp.s22,
        0.0, 0.0,   sp.t2,
    );
    #[rustfmt::skip]
    let x = Matrix3::new(
        1.0, 0.0, sp.s21,
        0.0, 1.0, sp.s22,
        0.0, 0.0, sp.t2,
    );
    #[rustfmt::skip]
    let y = Matrix3::new(
        1.0, s1,    0.0,
        0.0, sp.t1, 0.0,
        0.0, 0.0,   1.0,
    );
    let g = Matrix3::from_diagonal(&nalgebra::Vector3::new(sp.alpha, sp.beta, sp.gamma));
    MatrixFactorization {
        a,
        x,
        y,
        g,
        eigenvalues_xtx: sorted_eigenvalues(x.transpose() * x),
        eigenvalues_yty: sorted_eigenvalues(y.transpose() * y),
    }
}
