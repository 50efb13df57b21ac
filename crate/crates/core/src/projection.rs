//! Projected circumradius.
//!
//! For a tetrahedron in standard position, `delta_theta` rotates about the
//! z-axis by `theta` and projects onto the xz-plane. The image is a triangle
//! whose circumradius `R_theta` is maximised over `[-pi/2, pi/2]` to give
//! `R_P`; the projected circumradius is `R_K = min_B R_B R_P / h_B` over the
//! four facets.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::simplex::{facet_circumradius, standard_position, StandardPosition, Tetrahedron, Vec3};

/// Uniform grid size for the `R_P` search.
pub const DEFAULT_GRID: usize = 2048;
/// Default angle for the constructive theta selection; satisfies
/// `sin(2 phi) tan(2 phi) <= 1/6`.
pub const DEFAULT_PHI: f64 = 0.2;

const DEGENERATE_REL: f64 = 1e-13;
const REFINE_REL_TOL: f64 = 1e-10;

/// Image of the tetrahedron under `delta_theta`: base segment `[x_lo, x_hi]`
/// on the x-axis and the projected apex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedTriangle {
    pub x_lo: f64,
    pub x_hi: f64,
    pub apex_x: f64,
    pub apex_z: f64,
    pub theta: f64,
}

/// `w(theta) = s21 cos(theta) - s22 sin(theta)`.
pub fn apex_direction(sp: &StandardPosition, theta: f64) -> f64 {
    sp.s21 * theta.cos() - sp.s22 * theta.sin()
}

pub fn project_theta(sp: &StandardPosition, theta: f64) -> ProjectedTriangle {
    let (sin, cos) = theta.sin_cos();
    let xs = [0.0, sp.alpha * cos, sp.eta() * cos - sp.xi() * sin];
    let x_lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ProjectedTriangle { x_lo, x_hi, apex_x: sp.gamma * apex_direction(sp, theta), apex_z: sp.gamma * sp.t2, theta }
}

impl ProjectedTriangle {
    pub fn points(&self) -> [Vec3; 3] {
        [Vec3::new(self.x_lo, 0.0, 0.0), Vec3::new(self.x_hi, 0.0, 0.0), Vec3::new(self.apex_x, 0.0, self.apex_z)]
    }

    fn scale(&self) -> f64 {
        [self.x_hi - self.x_lo, self.x_lo.abs(), self.x_hi.abs(), self.apex_x.abs(), self.apex_z]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Circumradius of the projected triangle,
/// `sqrt((x_hi - a)^2 + z^2) sqrt((x_lo - a)^2 + z^2) / (2 z)`.
pub fn r_theta(pt: &ProjectedTriangle) -> Result<f64> {
    let eps = DEGENERATE_REL * pt.scale();
    if !(pt.apex_z > eps && pt.x_hi - pt.x_lo > eps) {
        return Err(Error::DegenerateProjection { theta: pt.theta });
    }
    let z = pt.apex_z;
    let right = (pt.x_hi - pt.apex_x).hypot(z);
    let left = (pt.x_lo - pt.apex_x).hypot(z);
    Ok(right * left / (2.0 * z))
}

fn r_at(sp: &StandardPosition, theta: f64) -> Result<f64> {
    r_theta(&project_theta(sp, theta))
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if b - a <= rel_tol * (a.abs().max(b.abs()).max(1.0)) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `R_P` and its maximiser, using the default grid.
pub fn r_p(sp: &StandardPosition) -> Result<(f64, f64)> {
    r_p_with_grid(sp, DEFAULT_GRID)
}

/// `max R_theta` over `[-pi/2, pi/2]`: uniform grid of `grid` points, then
/// golden-section refinement on the cell pair around the best sample. The
/// returned value is never below any grid sample.
pub fn r_p_with_grid(sp: &StandardPosition, grid: usize) -> Result<(f64, f64)> {
    let grid = grid.max(3);
    let step = 2.0 * FRAC_PI_2 / (grid - 1) as f64;
    let theta = |i: usize| -FRAC_PI_2 + i as f64 * step;
    let samples = par::map_range(grid, |i| r_at(sp, theta(i)));
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, r) in samples.into_iter().enumerate() {
        let r = r?;
        if r > best.1 {
            best = (i, r);
        }
    }
    let lo = theta(best.0.saturating_sub(1));
    let hi = theta((best.0 + 1).min(grid - 1));
    // failures inside the bracket only happen next to an already-rejected
    // grid point, so they can safely lose the comparison
    let (t, r) = golden_section_max(|t| r_at(sp, t).unwrap_or(f64::NEG_INFINITY), lo, hi, REFINE_REL_TOL);
    Ok(if r > best.1 { (r, t) } else { (best.1, theta(best.0)) })
}

/// Per-facet ingredients of the projected circumradius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FacetProjectionReport {
    /// Label of the apex; the base is the facet opposite it.
    #[serde(rename = "base")]
    pub base_index: usize,
    #[serde(rename = "R_B")]
    pub r_b: f64,
    #[serde(rename = "R_P")]
    pub r_p: f64,
    pub theta_at_max: f64,
    /// `R_B R_P / h_B`.
    pub ratio: f64,
    #[serde(skip)]
    pub h_b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedCircumradius {
    pub r_k: f64,
    pub facets: [FacetProjectionReport; 4],
}

pub fn facet_report(k: &Tetrahedron, base_index: usize) -> Result<FacetProjectionReport> {
    let sp = standard_position(k, base_index)?;
    let [p, q, r] = k.facet(base_index);
    let r_b = facet_circumradius(&p, &q, &r).map_err(|_| Error::DegenerateElement("flat facet".into()))?;
    let (r_p, theta_at_max) = r_p(&sp)?;
    let h_b = sp.h_base();
    Ok(FacetProjectionReport { base_index, r_b, r_p, theta_at_max, ratio: r_b * r_p / h_b, h_b })
}

/// `R_K` together with the four per-facet reports.
pub fn projected_circumradius(k: &Tetrahedron) -> Result<ProjectedCircumradius> {
    let reports = par::map_range(4, |i| facet_report(k, i));
    let mut facets = Vec::with_capacity(4);
    for r in reports {
        facets.push(r?);
    }
    let facets: [FacetProjectionReport; 4] = facets.try_into().expect("four facets");
    let r_k = facets.iter().map(|f| f.ratio).fold(f64::INFINITY, f64::min);
    Ok(ProjectedCircumradius { r_k, facets })
}

/// Quality measures of a single tetrahedron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    #[serde(rename = "h_K")]
    pub h_k: f64,
    #[serde(rename = "rho_K")]
    pub rho_k: f64,
    #[serde(rename = "R_sphere")]
    pub r_sphere: f64,
    #[serde(rename = "R_K")]
    pub r_k: f64,
    pub facets: Vec<FacetProjectionReport>,
}

pub fn geometry_report(k: &Tetrahedron) -> Result<GeometryReport> {
    let (rho_k, r_sphere) = k.inradius_circumradius()?;
    let pc = projected_circumradius(k)?;
    Ok(GeometryReport { h_k: k.diameter(), rho_k, r_sphere, r_k: pc.r_k, facets: pc.facets.to_vec() })
}

/// Which of the three constructive cases picked `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaCase {
    One = 1,
    Two = 2,
    Three = 3,
}

/// Constructive choice of `theta` and both sides of the two key
/// inequalities `gamma w <= (x_lo + x_hi)/2` and
/// `|x_lo - gamma w| >= C1 gamma s2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSelection {
    pub case: ThetaCase,
    pub theta: f64,
    pub phi: f64,
    pub c1: f64,
    pub lhs_midpoint: f64,
    pub rhs_midpoint: f64,
    pub lhs_separation: f64,
    pub rhs_separation: f64,
}

impl ThetaSelection {
    pub fn midpoint_holds(&self, slack: f64) -> bool {
        self.lhs_midpoint <= self.rhs_midpoint + slack
    }

    pub fn separation_holds(&self, slack: f64) -> bool {
        self.lhs_separation >= self.rhs_separation - slack
    }

    /// Separation constant the constructive argument supports in this
    /// case: `C1` in cases 1 and 2, `C1 / 2` in case 3.
    pub fn proven_constant(&self) -> f64 {
        match self.case {
            ThetaCase::Three => self.c1 / 2.0,
            _ => self.c1,
        }
    }

    /// `separation_holds` with `proven_constant` in place of `C1`.
    pub fn proven_separation_holds(&self, slack: f64) -> bool {
        self.lhs_separation >= self.rhs_separation * self.proven_constant() / self.c1 - slack
    }
}

pub fn check_phi(phi: f64) -> Result<()> {
    if phi > 0.0 && phi < FRAC_PI_6 && (2.0 * phi).sin() * (2.0 * phi).tan() <= 1.0 / 6.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!(
            "phi = {phi} must satisfy 0 < phi < pi/6 and sin(2 phi) tan(2 phi) <= 1/6"
        )))
    }
}

pub fn select_theta(sp: &StandardPosition, phi: f64) -> Result<ThetaSelection> {
    check_phi(phi)?;
    let (case, theta) = if sp.s22.abs() * phi.tan() <= sp.s21.abs() {
        (ThetaCase::One, 0.0)
    } else if 3.0 * sp.gamma * sp.s22 * (2.0 * phi).tan() <= sp.alpha {
        (ThetaCase::Two, -2.0 * phi)
    } else {
        (ThetaCase::Three, 2.0 * phi)
    };
    let pt = project_theta(sp, theta);
    let c1 = phi.sin();
    Ok(ThetaSelection {
        case,
        theta,
        phi,
        c1,
        lhs_midpoint: pt.apex_x,
        rhs_midpoint: 0.5 * (pt.x_lo + pt.x_hi),
        lhs_separation: (pt.x_lo - pt.apex_x).abs(),
        rhs_separation: c1 * sp.gamma * sp.s_bold_2(),
    })
}

/// `C3 = min{C1, 1/4} min{1, C1} / (2 sqrt 2)` with `C1 = sin(phi)`.
pub fn c3_constant(phi: f64) -> f64 {
    let c1 = phi.sin();
    c1.min(0.25) * c1.min(1.0) / (2.0 * std::f64::consts::SQRT_2)
}

/// `4 sqrt 2 / C3`: combines `R_B >= h_B / (4 sqrt 2 sqrt(1 - s1))` with
/// `R_P >= C3 max{alpha, gamma} / sqrt(1 - s2)`.
pub fn lemma_constant(phi: f64) -> f64 {
    4.0 * std::f64::consts::SQRT_2 / c3_constant(phi)
}

/// Returns `(prod (1 - s_i)^(-1/2), R_B R_P / (h_B max{alpha, gamma}))`.
pub fn lemma_geometric_check(sp: &StandardPosition) -> Result<(f64, f64)> {
    let (s1, s2) = (sp.s_bold_1(), sp.s_bold_2());
    if !(s1 < 1.0 && s2 < 1.0) {
        return Err(Error::ParameterOutOfRange(format!("s1 = {s1}, s2 = {s2} must be below 1")));
    }
    let lhs = 1.0 / ((1.0 - s1) * (1.0 - s2)).sqrt();
    let (r_p, _) = r_p(sp)?;
    let rhs = sp.base_circumradius() * r_p / (sp.alpha * sp.alpha.max(sp.gamma));
    Ok((lhs, rhs))
}
