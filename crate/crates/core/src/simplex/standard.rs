//! Reduction of a tetrahedron to standard position.
//!
//! With apex `x4` and base `B = x1 x2 x3`, a rigid motion (possibly followed
//! by reflections) places the vertices at
//!
//! ```text
//! x1 = (0, 0, 0)           x2 = (alpha, 0, 0)
//! x3 = (beta s1, beta t1, 0)            case (i)
//! x3 = (alpha - beta s1, beta t1, 0)    case (ii)
//! x4 = gamma (s21, s22, t2)
//! ```
//!
//! where `x1 x2` is the longest base edge, `t1, t2 > 0`, `beta s1 <= alpha/2`
//! and `gamma s21 <= alpha/2`.

use nalgebra::Matrix3;

use super::{facet_indices, AffineMap, Tetrahedron, Vec3};
use crate::error::{Error, Result};

/// Relative tolerance for edge-length ties and midpoint comparisons.
const TIE_TOL: f64 = 1e-12;

/// Which side of the mid-plane of `x1 x2` the third base vertex falls on,
/// relative to the apex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionCase {
    /// `x3` and `x4` in the same closed half-space.
    I,
    /// `x3` and `x4` in different half-spaces.
    II,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardPosition {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub s1: f64,
    pub t1: f64,
    pub s21: f64,
    pub s22: f64,
    pub t2: f64,
    pub case: PositionCase,
    /// Maps the original coordinates onto the standard ones.
    pub motion: AffineMap,
    /// Original vertex label of `x1, x2, x3, x4`.
    pub labels: [usize; 4],
}

impl StandardPosition {
    /// Builds a standard position directly from parameters, with identity
    /// motion and labels `[0, 1, 2, 3]`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parameters(
        alpha: f64,
        beta: f64,
        gamma: f64,
        s1: f64,
        s21: f64,
        s22: f64,
        case: PositionCase,
    ) -> Result<Self> {
        let t1_sq = 1.0 - s1 * s1;
        let t2_sq = 1.0 - s21 * s21 - s22 * s22;
        let tol = TIE_TOL * alpha;
        if !(beta > 0.0
            && beta <= alpha
            && gamma > 0.0
            && s1 >= 0.0
            && t1_sq > 0.0
            && t2_sq > 0.0
            && beta * s1 <= alpha / 2.0 + tol
            && gamma * s21 <= alpha / 2.0 + tol)
        {
            return Err(Error::ParameterOutOfRange(format!(
                "invalid standard-position parameters alpha={alpha} beta={beta} gamma={gamma} \
                 s1={s1} s21={s21} s22={s22}"
            )));
        }
        Ok(StandardPosition {
            alpha,
            beta,
            gamma,
            s1,
            t1: t1_sq.sqrt(),
            s21,
            s22,
            t2: t2_sq.sqrt(),
            case,
            motion: AffineMap::identity(),
            labels: [0, 1, 2, 3],
        })
    }

    /// `h_B`, the longest base edge.
    pub fn h_base(&self) -> f64 {
        self.alpha
    }

    /// Bold `s_1 = |s1|`.
    pub fn s_bold_1(&self) -> f64 {
        self.s1.abs()
    }

    /// Bold `s_2 = sqrt(s21^2 + s22^2)`.
    pub fn s_bold_2(&self) -> f64 {
        self.s21.hypot(self.s22)
    }

    /// x-coordinate of `x3`.
    pub fn eta(&self) -> f64 {
        match self.case {
            PositionCase::I => self.beta * self.s1,
            PositionCase::II => self.alpha - self.beta * self.s1,
        }
    }

    /// y-coordinate of `x3`.
    pub fn xi(&self) -> f64 {
        self.beta * self.t1
    }

    /// Vertices `x1..x4` in standard coordinates.
    pub fn vertices(&self) -> [Vec3; 4] {
        [
            Vec3::zeros(),
            Vec3::new(self.alpha, 0.0, 0.0),
            Vec3::new(self.eta(), self.xi(), 0.0),
            self.gamma * Vec3::new(self.s21, self.s22, self.t2),
        ]
    }

    /// Vertices mapped back through the inverse motion, indexed by the
    /// original labels.
    pub fn original_vertices(&self) -> [Vec3; 4] {
        let inv = self.motion.inverse().expect("standard-position motions are orthogonal");
        let std = self.vertices();
        let mut out = [Vec3::zeros(); 4];
        for (i, &label) in self.labels.iter().enumerate() {
            out[label] = inv.apply(&std[i]);
        }
        out
    }

    pub fn to_tetrahedron(&self) -> Result<Tetrahedron> {
        Tetrahedron::from_points(self.vertices())
    }

    /// Circumradius of the base from the parameters alone.
    pub fn base_circumradius(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        (a * a - 2.0 * a * b * self.s1 + b * b).sqrt() / (2.0 * self.t1)
    }
}

fn lex_cmp(a: &Vec3, b: &Vec3) -> std::cmp::Ordering {
    a.iter().zip(b.iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

/// Places `k` in standard position with vertex `apex` as `x4`; the base is
/// the facet opposite it.
pub fn standard_position(k: &Tetrahedron, apex: usize) -> Result<StandardPosition> {
    if apex > 3 {
        return Err(Error::ParameterOutOfRange(format!("facet index {apex} not in 0..4")));
    }
    let v = k.vertices();
    let base = facet_indices(apex);

    // Longest base edge; near-ties broken by the lexicographically smallest
    // sorted endpoint pair.
    let mut edges: Vec<(usize, usize, f64)> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (base[i], base[j]);
            let (a, b) = if lex_cmp(&v[a], &v[b]).is_le() { (a, b) } else { (b, a) };
            (a, b, (v[a] - v[b]).norm())
        })
        .collect();
    let longest = edges.iter().map(|e| e.2).fold(0.0, f64::max);
    edges.retain(|e| e.2 >= longest * (1.0 - TIE_TOL));
    edges.sort_by(|x, y| lex_cmp(&v[x.0], &v[y.0]).then_with(|| lex_cmp(&v[x.1], &v[y.1])));
    let (i1, i2, _) = edges[0];
    let i3 = base.into_iter().find(|&i| i != i1 && i != i2).unwrap();

    let origin = v[i1];
    let e1 = (v[i2] - origin).normalize();
    let u = v[i3] - origin;
    let e2 =
        (u - u.dot(&e1) * e1).try_normalize(0.0).ok_or_else(|| Error::DegenerateElement("collinear base".into()))?;
    let mut e3 = e1.cross(&e2);
    if (v[apex] - origin).dot(&e3) < 0.0 {
        e3 = -e3;
    }
    let rot = Matrix3::from_rows(&[e1.transpose(), e2.transpose(), e3.transpose()]);
    let mut motion = AffineMap::new(rot, -(rot * origin));
    let mut labels = [i1, i2, i3, apex];

    let alpha = (v[i2] - v[i1]).norm();
    let tol = TIE_TOL * alpha;
    if motion.apply(&v[apex]).x > alpha / 2.0 + tol {
        let flip = AffineMap::new(Matrix3::from_diagonal(&Vec3::new(-1.0, 1.0, 1.0)), Vec3::new(alpha, 0.0, 0.0));
        motion = flip.compose(&motion);
        labels = [i2, i1, i3, apex];
    }

    let p3 = motion.apply(&v[i3]);
    let p4 = motion.apply(&v[apex]);
    let (case, beta, s1) = if p3.x <= alpha / 2.0 + tol {
        let beta = p3.x.hypot(p3.y);
        (PositionCase::I, beta, p3.x / beta)
    } else {
        let beta = (alpha - p3.x).hypot(p3.y);
        (PositionCase::II, beta, (alpha - p3.x) / beta)
    };
    let t1 = p3.y / beta;
    let gamma = p4.norm();
    let (s21, s22, t2) = (p4.x / gamma, p4.y / gamma, p4.z / gamma);
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::DegenerateElement("apex or third vertex on the base line".into()));
    }

    Ok(StandardPosition {
        alpha,
        beta,
        gamma,
        // rounding can leave x3 a hair left of x1 when it sits right above it
        s1: s1.max(0.0),
        t1,
        s21,
        s22,
        t2,
        case,
        motion,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn regular() -> Tetrahedron {
        let h = 3f64.sqrt() / 2.0;
        Tetrahedron::new([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, h, 0.0], [0.5, h / 3.0, (2.0f64 / 3.0).sqrt()]])
            .unwrap()
    }

    fn assert_round_trip(k: &Tetrahedron, sp: &StandardPosition) {
        let scale = k.diameter();
        for (a, b) in sp.original_vertices().iter().zip(k.vertices()) {
            assert!((a - b).norm() <= 1e-10 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn regular_tetrahedron_every_base() {
        let k = regular();
        for apex in 0..4 {
            let sp = standard_position(&k, apex).unwrap();
            assert_relative_eq!(sp.alpha, 1.0, epsilon = 1e-12);
            assert_relative_eq!(sp.beta, 1.0, epsilon = 1e-12);
            assert_relative_eq!(sp.gamma, 1.0, epsilon = 1e-12);
            assert_relative_eq!(sp.s1, 0.5, epsilon = 1e-12);
            assert_relative_eq!(sp.t1, 3f64.sqrt() / 2.0, epsilon = 1e-12);
            assert_relative_eq!(sp.s21, 0.5, epsilon = 1e-12);
            assert_relative_eq!(sp.s22.abs(), 3f64.sqrt() / 6.0, epsilon = 1e-12);
            assert_relative_eq!(sp.t2, 6f64.sqrt() / 3.0, epsilon = 1e-12);
            assert_relative_eq!(sp.s21.powi(2) + sp.s22.powi(2) + sp.t2.powi(2), 1.0, epsilon = 1e-14);
            assert_eq!(sp.case, PositionCase::I);
            assert_round_trip(&k, &sp);
        }
    }

    #[test]
    fn already_standard_is_fixed_point() {
        let sp0 = StandardPosition::from_parameters(2.0, 1.2, 0.9, 0.3, 0.2, -0.4, PositionCase::I).unwrap();
        let k = sp0.to_tetrahedron().unwrap();
        let sp = standard_position(&k, 3).unwrap();
        for (a, b) in [
            (sp.alpha, sp0.alpha),
            (sp.beta, sp0.beta),
            (sp.gamma, sp0.gamma),
            (sp.s1, sp0.s1),
            (sp.t1, sp0.t1),
            (sp.s21, sp0.s21),
            (sp.s22, sp0.s22),
            (sp.t2, sp0.t2),
        ] {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
        assert_eq!(sp.case, PositionCase::I);
        assert_eq!(sp.labels, [0, 1, 2, 3]);
        assert_relative_eq!(sp.motion.linear, Matrix3::identity(), epsilon = 1e-15);
    }

    #[test]
    fn case_ii_detected() {
        let sp0 = StandardPosition::from_parameters(2.0, 1.2, 0.9, 0.3, 0.2, 0.4, PositionCase::II).unwrap();
        let k = sp0.to_tetrahedron().unwrap();
        let sp = standard_position(&k, 3).unwrap();
        assert_eq!(sp.case, PositionCase::II);
        assert_relative_eq!(sp.beta, 1.2, epsilon = 1e-14);
        assert_relative_eq!(sp.s1, 0.3, epsilon = 1e-14);
        assert_round_trip(&k, &sp);
    }

    #[test]
    fn apex_beyond_midplane_is_reflected() {
        let k = Tetrahedron::new([[0., 0., 0.], [2., 0., 0.], [0.5, 1., 0.], [1.8, 0.3, 0.7]]).unwrap();
        let sp = standard_position(&k, 3).unwrap();
        assert_eq!(sp.labels[..2], [1, 0]);
        assert!(sp.gamma * sp.s21 <= sp.alpha / 2.0);
        assert_eq!(sp.case, PositionCase::II);
        assert!(sp.motion.determinant() < 0.0);
        assert_round_trip(&k, &sp);
    }

    #[test]
    fn sliver_round_trip() {
        let h: f64 = 0.1;
        let z = h.powf(2.5);
        let k = Tetrahedron::new([[h, 0., 0.], [-h, 0., 0.], [0., -h, z], [0., h, z]]).unwrap();
        for apex in 0..4 {
            let sp = standard_position(&k, apex).unwrap();
            assert_round_trip(&k, &sp);
            assert!(sp.s_bold_2() < 1.0 && sp.s_bold_1() < 1.0);
        }
    }

    #[test]
    fn zero_s1_from_parameters() {
        let sp = StandardPosition::from_parameters(1.0, 0.5, 0.8, 0.0, 0.2, 0.1, PositionCase::I).unwrap();
        assert_eq!(sp.s1, 0.0);
        assert_relative_eq!(sp.t1, 1.0, epsilon = 1e-15);
        let [_, _, x3, _] = sp.vertices();
        assert_relative_eq!(x3.x, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn base_circumradius_closed_form() {
        let sp = StandardPosition::from_parameters(1.0, 1.0, 1.0, 0.5, 0.1, 0.1, PositionCase::I).unwrap();
        assert_relative_eq!(sp.base_circumradius(), 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        let [p, q, r, _] = sp.vertices();
        assert_relative_eq!(
            super::super::facet_circumradius(&p, &q, &r).unwrap(),
            sp.base_circumradius(),
            epsilon = 1e-15
        );
    }
}
