//! Independent oracles shared by the integration tests. None of these call
//! into the code paths they are used to check.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tia_core::simplex::StandardPosition;
use tia_core::{MultiPolynomial, Tetrahedron, Vec3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reasonably shaped random element: a jittered regular-ish tetrahedron,
/// scaled and shifted.
pub fn well_shaped(rng: &mut impl Rng) -> Tetrahedron {
    let base = [[1.0, 0.0, 0.0], [-0.5, 0.87, 0.0], [-0.5, -0.87, 0.0], [0.0, 0.0, 1.2]];
    let s = rng.random_range(0.5..2.0);
    let shift: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    let v = base.map(|p| {
        let mut q = [0.0; 3];
        for i in 0..3 {
            q[i] = s * (p[i] + rng.random_range(-0.2..0.2)) + shift[i];
        }
        q
    });
    Tetrahedron::new(v).unwrap()
}

/// Circumcentre from `2 (x_i - x_0) . c = |x_i|^2 - |x_0|^2`.
pub fn circumsphere_oracle(v: &[Vec3; 4]) -> (Vec3, f64) {
    let mut a = Matrix3::zeros();
    let mut b = Vector3::zeros();
    for i in 1..4 {
        let d = v[i] - v[0];
        a.set_row(i - 1, &(2.0 * d).transpose());
        b[i - 1] = v[i].norm_squared() - v[0].norm_squared();
    }
    let c = a.lu().solve(&b).unwrap();
    (c, (v[0] - c).norm())
}

/// `abc / (4 area)`.
pub fn triangle_circumradius(p: &Vec3, q: &Vec3, r: &Vec3) -> f64 {
    let (a, b, c) = ((q - r).norm(), (p - r).norm(), (p - q).norm());
    let area = 0.5 * (q - p).cross(&(r - p)).norm();
    a * b * c / (4.0 * area)
}

/// Projection of the standard position after rotating by `theta` about the
/// z axis, keeping `(x, z)`; circumradius of the bounding triangle.
pub fn projected_radius_oracle(sp: &StandardPosition, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let v = sp.vertices();
    let xs: Vec<f64> = v[..3].iter().map(|p| c * p.x - s * p.y).collect();
    let lo = xs.iter().copied().fold(f64::MAX, f64::min);
    let hi = xs.iter().copied().fold(f64::MIN, f64::max);
    let apex = Vec3::new(c * v[3].x - s * v[3].y, 0.0, v[3].z);
    triangle_circumradius(&Vec3::new(lo, 0.0, 0.0), &Vec3::new(hi, 0.0, 0.0), &apex)
}

/// Max over a uniform theta sample.
pub fn brute_force_r_p(sp: &StandardPosition, samples: usize) -> f64 {
    let half = std::f64::consts::FRAC_PI_2;
    (0..=samples)
        .map(|i| projected_radius_oracle(sp, -half + 2.0 * half * i as f64 / samples as f64))
        .fold(0.0, f64::max)
}

pub fn monomials_up_to(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for total in 0..=d {
        for a in (0..=total).rev() {
            for b in (0..=total - a).rev() {
                out.push([a, b, total - a - b]);
            }
        }
    }
    out
}

fn monomial_value(e: [u32; 3], x: &Vec3) -> f64 {
    x.x.powi(e[0] as i32) * x.y.powi(e[1] as i32) * x.z.powi(e[2] as i32)
}

/// Principal lattice of order `k`, built from barycentric combinations.
pub fn lattice(k_elem: &Tetrahedron, k: u32) -> Vec<Vec3> {
    let v = k_elem.vertices();
    let mut out = Vec::new();
    for a in 0..=k {
        for b in 0..=k - a {
            for c in 0..=k - a - b {
                let d = k - a - b - c;
                let w = [a, b, c, d].map(|i| f64::from(i) / f64::from(k));
                out.push(w[0] * v[0] + w[1] * v[1] + w[2] * v[2] + w[3] * v[3]);
            }
        }
    }
    out
}

/// Interpolant from a Vandermonde solve in the monomial basis.
pub fn vandermonde_interpolant(k_elem: &Tetrahedron, k: u32, f: impl Fn(&Vec3) -> f64) -> MultiPolynomial {
    let pts = lattice(k_elem, k);
    let exps = monomials_up_to(k);
    assert_eq!(pts.len(), exps.len());
    let n = pts.len();
    let a = DMatrix::from_fn(n, n, |i, j| monomial_value(exps[j], &pts[i]));
    let b = DVector::from_iterator(n, pts.iter().map(&f));
    let c = a.lu().solve(&b).expect("unisolvent lattice");
    MultiPolynomial::from_terms(exps.into_iter().zip(c.iter().copied()))
}

/// Gauss–Legendre nodes and weights on [0, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

/// Tensor Gauss–Legendre through the collapsed map
/// `(u, v, w) -> (u, (1-u) v, (1-u)(1-v) w)` onto the element.
pub fn integrate_oracle(k_elem: &Tetrahedron, n: usize, f: impl Fn(&Vec3) -> f64) -> f64 {
    let gl = gauss_legendre(n);
    let v = k_elem.vertices();
    let t = Matrix3::from_columns(&[v[1] - v[0], v[2] - v[0], v[3] - v[0]]);
    let jac = t.determinant().abs();
    let mut sum = 0.0;
    for &(u, wu) in &gl {
        for &(s, ws) in &gl {
            for &(r, wr) in &gl {
                let xi = Vec3::new(u, (1.0 - u) * s, (1.0 - u) * (1.0 - s) * r);
                let x = v[0] + t * xi;
                sum += wu * ws * wr * (1.0 - u).powi(2) * (1.0 - s) * f(&x);
            }
        }
    }
    jac * sum
}

/// `(sum_delta int |d^delta q|^p)^(1/p)` with the integrals from `integrate_oracle`.
pub fn seminorm_oracle(k_elem: &Tetrahedron, q: &MultiPolynomial, m: u32, p: f64, n: usize) -> f64 {
    let mut total = 0.0;
    for e in monomials_up_to(m).into_iter().filter(|e| e.iter().sum::<u32>() == m) {
        let d = q.differentiate(e);
        total += integrate_oracle(k_elem, n, |x| d.eval(x).abs().powf(p));
    }
    total.powf(1.0 / p)
}

pub fn assert_close(a: f64, b: f64, rel: f64, what: &str) {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    assert!((a - b).abs() <= rel * scale, "{what}: {a} vs {b} (rel tol {rel})");
}
