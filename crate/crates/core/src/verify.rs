//! Seeded property suites: geometry, interpolation, seminorms, and the
//! error-bound sweeps.
//!
//! Every property reports how many cases it checked, how many failed, and
//! the worst observed violation measure (0 when nothing failed).

use std::fmt;
use std::str::FromStr;

use nalgebra::{Quaternion, UnitQuaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::experiments::{
    b_lower_bound_with, bound_sweep, function_battery, make_family, sliver_rejection_demo, ElementFamily,
};
use crate::interp::{lagrange_basis, lattice_indices, LagrangeInterpolator, MultiPolynomial};
use crate::norms::{scaling_identity_check, seminorm, seminorm_cubature, validate_p, PExponent, SeminormSpec};
use crate::projection::{
    c3_constant, lemma_constant, lemma_geometric_check, project_theta, projected_circumradius, r_p, r_theta,
    select_theta, DEFAULT_PHI,
};
use crate::simplex::{
    facet_circumradius, make_squeeze, matrix_factorization, reference_tetrahedron, standard_position, AffineMap,
    Reference, Squeeze, StandardPosition, Tetrahedron, Vec3,
};

/// Seed shared by every suite.
pub const VERIFY_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Geometry,
    Interp,
    Norms,
    Bounds,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Geometry, Suite::Interp, Suite::Norms, Suite::Bounds];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Interp => "interp",
            Suite::Norms => "norms",
            Suite::Bounds => "bounds",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite {0:?}")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> std::result::Result<Self, UnknownSuite> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub suite: Suite,
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub worst: f64,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }
}

impl fmt::Display for PropertyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<10} {:<32} {:>6} checked {:>4} failed",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite.name(),
            self.name,
            self.checked,
            self.failed,
        )?;
        if self.failed > 0 {
            write!(f, " (worst {:.3e})", self.worst)?;
        }
        Ok(())
    }
}

/// Accumulates checks for one property. A check is a violation amount:
/// `<= 0` passes, anything else (including NaN) fails.
struct Tally {
    suite: Suite,
    name: &'static str,
    checked: usize,
    failed: usize,
    worst: f64,
}

impl Tally {
    fn new(suite: Suite, name: &'static str) -> Self {
        Tally { suite, name, checked: 0, failed: 0, worst: 0.0 }
    }

    fn violation(&mut self, v: f64) {
        self.checked += 1;
        if !(v <= 0.0) {
            self.failed += 1;
            self.worst = if v.is_nan() { f64::NAN } else { self.worst.max(v) };
        }
    }

    fn holds(&mut self, ok: bool) {
        self.violation(if ok { 0.0 } else { 1.0 });
    }

    fn within(&mut self, diff: f64, tol: f64) {
        self.violation(diff.abs() - tol);
    }

    fn result<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(_) => {
                self.violation(f64::INFINITY);
                None
            }
        }
    }

    fn finish(self) -> PropertyOutcome {
        PropertyOutcome {
            suite: self.suite,
            name: self.name,
            checked: self.checked,
            failed: self.failed,
            worst: self.worst,
        }
    }
}

/// Uniformly random vertices in the unit cube, rejecting volume `<= 1e-4`.
pub fn random_tetrahedra(seed: u64, count: usize) -> Vec<Tetrahedron> {
    make_family(&ElementFamily::random(seed, count)).expect("random family construction cannot fail")
}

/// A uniformly random rotation followed by a translation in `[-5, 5]^3`.
pub fn random_rigid_motion(rng: &mut impl Rng) -> AffineMap {
    let q = loop {
        let q = Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            break q;
        }
    };
    let rotation = UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner();
    let t = Vec3::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    AffineMap::new(rotation, t)
}

/// Polynomial of total degree `<= d` with coefficients in `[-1, 1]`.
pub fn random_polynomial(rng: &mut impl Rng, d: u32) -> MultiPolynomial {
    MultiPolynomial::from_terms(
        (0..=d)
            .flat_map(MultiPolynomial::exponents_of_degree)
            .map(|e| (e, rng.random_range(-1.0..=1.0)))
            .collect::<Vec<_>>(),
    )
}

fn standard_positions(tets: &[Tetrahedron]) -> Vec<Result<StandardPosition>> {
    tets.iter().flat_map(|k| (0..4).map(move |apex| standard_position(k, apex))).collect()
}

fn max_coeff_diff(a: &MultiPolynomial, b: &MultiPolynomial) -> f64 {
    (a - b).max_abs_coeff()
}

pub fn run_suite(suite: Suite) -> Vec<PropertyOutcome> {
    match suite {
        Suite::Geometry => geometry_suite(),
        Suite::Interp => interp_suite(),
        Suite::Norms => norms_suite(),
        Suite::Bounds => bounds_suite(),
    }
}

pub fn run_suites(suites: &[Suite]) -> Vec<PropertyOutcome> {
    suites.iter().flat_map(|s| run_suite(*s)).collect()
}

fn geometry_suite() -> Vec<PropertyOutcome> {
    let g = Suite::Geometry;
    let tets = random_tetrahedra(VERIFY_SEED, 1000);
    let positions = standard_positions(&tets);
    let mut out = Vec::new();

    let mut t = Tally::new(g, "standard position round trip");
    for (i, sp) in positions.iter().enumerate() {
        let k = &tets[i / 4];
        if let Some(sp) = t.result(sp.clone()) {
            let back = sp.original_vertices();
            let err = (0..4).map(|j| (back[j] - k.vertex(j)).norm()).fold(0.0, f64::max);
            t.within(err / k.diameter(), 1e-10);
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(g, "standard position constraints");
    for sp in positions.iter().flatten() {
        let tol = 1e-12 * sp.alpha;
        t.holds(
            sp.beta * sp.s1 <= sp.alpha / 2.0 + tol
                && sp.gamma * sp.s21 <= sp.alpha / 2.0 + tol
                && sp.s1 >= 0.0
                && sp.t1 > 0.0
                && sp.t2 > 0.0
                && sp.beta <= sp.alpha * (1.0 + 1e-12)
                && (sp.s1.hypot(sp.t1) - 1.0).abs() <= 1e-12
                && ((sp.s21 * sp.s21 + sp.s22 * sp.s22 + sp.t2 * sp.t2).sqrt() - 1.0).abs() <= 1e-12,
        );
    }
    out.push(t.finish());

    let mut t = Tally::new(g, "matrix factorization");
    for sp in positions.iter().flatten() {
        let f = matrix_factorization(sp);
        let (s1, s2) = (sp.s_bold_1(), sp.s_bold_2());
        t.within((f.a - f.x * f.y).amax(), 1e-14);
        t.within(f.a.determinant() - sp.t1 * sp.t2, 1e-12);
        for (ev, want) in f.eigenvalues_xtx.iter().zip([1.0 - s2, 1.0, 1.0 + s2]) {
            t.within(ev - want, 1e-10);
        }
        for (ev, want) in f.eigenvalues_yty.iter().zip([1.0 - s1, 1.0, 1.0 + s1]) {
            t.within(ev - want, 1e-10);
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(g, "base circumradius closed form");
    for sp in positions.iter().flatten() {
        let [p, q, r, _] = sp.vertices();
        if let Some(generic) = t.result(facet_circumradius(&p, &q, &r)) {
            t.within((generic - sp.base_circumradius()) / generic, 1e-12);
        }
    }
    out.push(t.finish());

    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 1);
    let mut t = Tally::new(g, "rigid motion invariance");
    for k in tets.iter().take(200) {
        let moved = k.transformed(&random_rigid_motion(&mut rng)).expect("rigid image is non-degenerate");
        let h = k.diameter();
        t.within((moved.diameter() - h) / h, 1e-10);
        let (a, b) = (k.inradius_circumradius().unwrap(), moved.inradius_circumradius().unwrap());
        t.within((a.0 - b.0) / a.0, 1e-10);
        t.within((a.1 - b.1) / a.1, 1e-10);
        for i in 0..4 {
            let [p, q, r] = k.facet(i);
            let [p2, q2, r2] = moved.facet(i);
            let (x, y) = (facet_circumradius(&p, &q, &r).unwrap(), facet_circumradius(&p2, &q2, &r2).unwrap());
            t.within((x - y) / x, 1e-10);
        }
        if let (Some(x), Some(y)) = (t.result(projected_circumradius(k)), t.result(projected_circumradius(&moved))) {
            t.within((x.r_k - y.r_k) / x.r_k, 1e-8);
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(g, "R_K homogeneity");
    for k in tets.iter().take(100) {
        let c = rng.random_range(0.1..10.0);
        let scaled = k.transformed(&make_squeeze(Squeeze::Similarity(c)).unwrap()).unwrap();
        if let (Some(x), Some(y)) = (t.result(projected_circumradius(k)), t.result(projected_circumradius(&scaled))) {
            t.within((c * x.r_k - y.r_k) / y.r_k, 1e-8);
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(g, "R_theta closed form");
    for sp in positions.iter().flatten().take(1000) {
        let theta = rng.random_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2);
        let pt = project_theta(sp, theta);
        let [a, b, c] = pt.points();
        if let (Ok(x), Ok(y)) = (r_theta(&pt), facet_circumradius(&a, &b, &c)) {
            t.within((x - y) / y, 1e-10);
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(g, "R_P dominates sampled R_theta");
    for sp in positions.iter().flatten().take(20) {
        if let Some((rp, _)) = t.result(r_p(sp)) {
            for _ in 0..500 {
                let theta = rng.random_range(-std::f64::consts::FRAC_PI_2..=std::f64::consts::FRAC_PI_2);
                if let Ok(r) = r_theta(&project_theta(sp, theta)) {
                    t.violation((r - rp) / rp - 1e-12);
                }
            }
        }
    }
    out.push(t.finish());

    // constructive inequalities; evaluated once and reused by several tallies
    let c3 = c3_constant(DEFAULT_PHI);
    let lemma_c = lemma_constant(DEFAULT_PHI);
    let (mut t51, mut t52, mut t53, mut t54, mut tl) = (
        Tally::new(g, "base circumradius lower bound"),
        Tally::new(g, "projected circumradius lower bound"),
        Tally::new(g, "theta selection midpoint"),
        Tally::new(g, "theta selection separation"),
        Tally::new(g, "geometric lemma"),
    );
    let rows = crate::par::map(&positions, |sp| -> Result<(StandardPosition, f64, f64, f64)> {
        let sp = sp.clone()?;
        let (rp, _) = r_p(&sp)?;
        let (lhs, rhs) = lemma_geometric_check(&sp)?;
        Ok((sp, rp, lhs, rhs))
    });
    for row in rows {
        let Ok((sp, rp, lhs, rhs)) = row else {
            for t in [&mut t51, &mut t52, &mut tl] {
                t.violation(f64::INFINITY);
            }
            continue;
        };
        let (s1, s2) = (sp.s_bold_1(), sp.s_bold_2());
        let bound = sp.alpha / (4.0 * std::f64::consts::SQRT_2 * (1.0 - s1).sqrt());
        t51.violation(bound - sp.base_circumradius() - 1e-12);
        let bound = c3 * sp.alpha.max(sp.gamma) / (1.0 - s2).sqrt();
        t52.violation(bound - rp - 1e-12);
        match select_theta(&sp, DEFAULT_PHI) {
            Ok(sel) => {
                t53.violation(sel.lhs_midpoint - sel.rhs_midpoint - 1e-12);
                t54.violation(sel.rhs_separation * sel.proven_constant() / sel.c1 - sel.lhs_separation - 1e-12);
            }
            Err(_) => {
                t53.violation(f64::INFINITY);
                t54.violation(f64::INFINITY);
            }
        }
        tl.violation((lhs - lemma_c * rhs) / lhs - 1e-12);
    }
    out.extend([t51, t52, t53, t54, tl].map(Tally::finish));
    out
}

fn interp_suite() -> Vec<PropertyOutcome> {
    let s = Suite::Interp;
    let mut out = Vec::new();
    let tets = random_tetrahedra(VERIFY_SEED ^ 2, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 3);

    let mut t = Tally::new(s, "basis cardinality");
    for k in 1..=4 {
        let idx = lattice_indices(k);
        for g in &idx {
            let basis = lagrange_basis(k, *g).unwrap();
            for h in &idx {
                let want = if g == h { 1.0 } else { 0.0 };
                t.within(basis.eval(&h.barycentric()) - want, 0.0);
            }
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "partition of unity");
    for _ in 0..1000 {
        let k = rng.random_range(1..=4u32);
        let mut lam = [0.0; 4];
        for l in lam.iter_mut() {
            *l = rng.random::<f64>();
        }
        let total: f64 = lam.iter().sum();
        lam.iter_mut().for_each(|l| *l /= total);
        let sum: f64 = lattice_indices(k).iter().map(|g| lagrange_basis(k, *g).unwrap().eval(&lam)).sum();
        t.within(sum - 1.0, 1e-12);
    }
    out.push(t.finish());

    let interpolators: Vec<Vec<LagrangeInterpolator>> = crate::par::map(&tets, |el| {
        (1..=4).map(|k| LagrangeInterpolator::new(el, k).expect("valid element and degree")).collect()
    });

    let mut t = Tally::new(s, "polynomial reproduction");
    for per_tet in &interpolators {
        for (k, interp) in (1..=4).zip(per_tet) {
            for d in 0..=k {
                for e in MultiPolynomial::exponents_of_degree(d) {
                    let q = MultiPolynomial::monomial(e, 1.0);
                    let scale = interp.coefficient_scale(&q).max(1.0);
                    t.within(max_coeff_diff(&interp.interpolate_poly(&q), &q) / scale, 1e-9);
                }
            }
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "interpolation conditions");
    for per_tet in interpolators.iter().take(25) {
        for (k, interp) in (1..=4).zip(per_tet) {
            let v = random_polynomial(&mut rng, k + 1);
            let iv = interp.interpolate_poly(&v);
            let coefficient_scale = interp.coefficient_scale(&v);
            for node in interp.nodes() {
                let reach = (1.0 + node.point.amax()).powi(k as i32);
                let scale = (coefficient_scale * reach).max(1.0);
                t.within((iv.eval(&node.point) - v.eval(&node.point)) / scale, 1e-9);
            }
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "linearity");
    for per_tet in interpolators.iter().take(25) {
        for (k, interp) in (1..=4).zip(per_tet) {
            let (v, w) = (random_polynomial(&mut rng, k + 1), random_polynomial(&mut rng, k + 1));
            let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let lhs = interp.interpolate_poly(&(&v * a + &w * b));
            let rhs = &interp.interpolate_poly(&v) * a + &interp.interpolate_poly(&w) * b;
            let scale = a.abs() * interp.coefficient_scale(&v) + b.abs() * interp.coefficient_scale(&w);
            t.within(max_coeff_diff(&lhs, &rhs) / scale.max(1.0), 1e-10);
        }
    }
    out.push(t.finish());
    out
}

fn norms_suite() -> Vec<PropertyOutcome> {
    let s = Suite::Norms;
    let mut out = Vec::new();
    let k_hat = reference_tetrahedron(Reference::Hat);
    let tets = random_tetrahedra(VERIFY_SEED ^ 4, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 5);

    let mut t = Tally::new(s, "reference seminorm value");
    let r2 = MultiPolynomial::from_terms([([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0)]);
    if let Some(v) = t.result(seminorm(&k_hat, &r2, SeminormSpec::new(2, PExponent::Finite(2.0)))) {
        t.within(v - std::f64::consts::SQRT_2, 1e-10);
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "exact versus cubature");
    for el in tets.iter().take(6) {
        let q = random_polynomial(&mut rng, 5);
        for (m, p) in [(0, 2.0), (1, 2.0), (2, 4.0)] {
            let exact = seminorm(el, &q, SeminormSpec::new(m, PExponent::Finite(p)));
            let numeric = seminorm_cubature(el, &q, m, p);
            if let (Some(a), Some(b)) = (t.result(exact), t.result(numeric)) {
                t.within((a - b) / a, 1e-7);
            }
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "homogeneity");
    for el in tets.iter().take(30) {
        let q = random_polynomial(&mut rng, 3);
        let c = rng.random_range(-5.0..5.0);
        for p in [PExponent::Finite(2.0), PExponent::Finite(3.0), PExponent::Infinity] {
            let spec = SeminormSpec::new(1, p);
            if let (Ok(a), Ok(b)) = (seminorm(el, &q, spec), seminorm(el, &(&q * c), spec)) {
                t.within((b - c.abs() * a) / b.max(f64::MIN_POSITIVE), 1e-12);
            }
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "rotation invariance order 0");
    for el in tets.iter().take(30) {
        let q = random_polynomial(&mut rng, 3);
        let mut rot = random_rigid_motion(&mut rng);
        rot.translation = Vec3::zeros();
        let rotated_q = q.compose_affine(&rot).unwrap();
        let moved = el.transformed(&rot.inverse().unwrap()).unwrap();
        for p in [PExponent::Finite(2.0), PExponent::Finite(4.0)] {
            let spec = SeminormSpec::new(0, p);
            if let (Ok(a), Ok(b)) = (seminorm(el, &q, spec), seminorm(&moved, &rotated_q, spec)) {
                t.within((a - b) / a, 1e-10);
            }
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "scaling identity");
    for el in &tets {
        let q = random_polynomial(&mut rng, 4);
        let alpha = rng.random_range(0.2..5.0);
        let k = rng.random_range(0..=3u32);
        for (p, tol) in [(PExponent::Finite(2.0), 1e-10), (PExponent::Finite(4.0), 1e-10), (PExponent::Infinity, 1e-3)]
        {
            if let Some((lhs, rhs)) = t.result(scaling_identity_check(&q, el, alpha, k, p)) {
                if lhs > 0.0 {
                    t.within((lhs - rhs) / lhs, tol);
                }
            }
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "admissible exponents");
    for k in 1..=4u32 {
        for m in 0..=k {
            for p in [1.0, 1.5, 1.6, 2.0, 2.1, 3.0, f64::INFINITY] {
                let pe = if p.is_infinite() { PExponent::Infinity } else { PExponent::Finite(p) };
                let want = if k == m {
                    p > 2.0
                } else if k == 1 {
                    p > 1.5
                } else {
                    p >= 1.0
                };
                t.holds(validate_p(k, m, pe) == want);
            }
        }
    }
    out.push(t.finish());
    out
}

/// Largest over smallest entry.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    max / min
}

fn bounds_suite() -> Vec<PropertyOutcome> {
    let s = Suite::Bounds;
    let mut out = Vec::new();
    let h_grid = [0.2, 0.1, 0.05, 0.025];

    let mut t = Tally::new(s, "sliver rejection");
    if let Some(rows) = t.result(sliver_rejection_demo(2.5, &h_grid)) {
        for w in rows.windows(2) {
            t.violation(2.0 - w[1].naive_quotient / w[0].naive_quotient);
        }
        let projected: Vec<f64> = rows.iter().map(|r| r.projected_quotient).collect();
        t.violation(spread(&projected) - 3.0);
        for r in &rows {
            t.within(r.interpolant_max_coeff, 1e-12);
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "projected ratio boundedness");
    let families = [
        ElementFamily::sliver(2.5, &h_grid),
        ElementFamily::squeezed(Reference::Hat, 1.0, &[1.0, 4.0, 16.0]),
        ElementFamily::needle(4.0, &[1.0, 0.25, 0.0625]),
    ];
    let cases = [(2, 1, PExponent::Finite(2.0)), (1, 1, PExponent::Infinity), (2, 0, PExponent::Finite(2.0))];
    for fam in &families {
        for (k, m, p) in cases {
            if let Some(res) = t.result(bound_sweep(fam, k, m, p, VERIFY_SEED)) {
                t.violation(spread(&res.max_ratios_projected()) - 5.0);
                for r in &res.records {
                    t.holds(validate_p(r.k, r.m, r.p));
                }
            }
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "naive ratio divergence");
    let fam = ElementFamily::sliver(2.5, &h_grid);
    if let Some(res) = t.result(bound_sweep(&fam, 1, 1, PExponent::Infinity, VERIFY_SEED)) {
        for w in res.max_ratios_naive().windows(2) {
            t.violation(2.0 - w[1] / w[0]);
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "sweep determinism");
    let fam = ElementFamily::random(VERIFY_SEED, 8);
    let csv = || -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        bound_sweep(&fam, 2, 1, PExponent::Finite(2.0), VERIFY_SEED)?.write_csv(&mut buf).expect("writing to memory");
        Ok(buf)
    };
    if let (Some(a), Some(b)) = (t.result(csv()), t.result(csv())) {
        t.holds(a == b);
    }
    out.push(t.finish());

    let mut t = Tally::new(s, "battery lower bound monotone");
    let battery = function_battery(1, VERIFY_SEED).unwrap();
    let el = reference_tetrahedron(Reference::Hat);
    let mut previous = 0.0;
    for n in [1, 3, 6, 12, battery.len()] {
        if let Some(b) = t.result(b_lower_bound_with(&el, 1, 0, PExponent::Finite(2.0), &battery[..n])) {
            t.holds(b > 0.0 && b >= previous);
            previous = b;
        }
    }
    out.push(t.finish());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn tally_treats_nan_as_failure() {
        let mut t = Tally::new(Suite::Norms, "x");
        t.violation(f64::NAN);
        t.violation(-1.0);
        let o = t.finish();
        assert_eq!((o.checked, o.failed), (2, 1));
        assert!(!o.passed());
    }

    #[test]
    fn empty_property_does_not_pass() {
        assert!(!Tally::new(Suite::Bounds, "empty").finish().passed());
    }
}
