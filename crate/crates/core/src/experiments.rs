//! Element families, the polynomial test battery, and the error-ratio
//! harness.
//!
//! For each element `K` and test function `v` the harness records
//! `|v - I_K^k v|_{m,p,K}` against `R^m h_K^{k+1-2m} |v|_{k+1,p,K}` with `R`
//! either the projected circumradius (`ratio_projected`) or the radius of
//! the circumscribed sphere (`ratio_naive`).

use std::io::Write;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interp::{LagrangeInterpolator, MultiPolynomial};
use crate::norms::{check_p, seminorm, PExponent, SeminormSpec};
use crate::par;
use crate::projection::projected_circumradius;
use crate::simplex::{make_squeeze, reference_tetrahedron, Reference, Squeeze, Tetrahedron};

/// Number of seeded random polynomials in the battery.
pub const RANDOM_BATTERY_SIZE: usize = 20;
/// Minimum volume accepted by the random family.
pub const RANDOM_MIN_VOLUME: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// `(h,0,0), (-h,0,0), (0,-h,h^a), (0,h,h^a)`; the grid holds `h`.
    Sliver { alpha_exponent: f64 },
    /// `sq1(a, b)` applied to a reference element; the grid holds `b`.
    SqueezedReference { which: Reference, a: f64 },
    /// `sq2(1, e, aspect * e)` applied to `K_hat`; the grid holds `e`.
    Needle { aspect: f64 },
    /// Uniform vertices in the unit cube; the grid is ignored.
    Random { seed: u64, count: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementFamily {
    pub kind: FamilyKind,
    pub parameter_grid: Vec<f64>,
}

impl ElementFamily {
    pub fn sliver(alpha_exponent: f64, h_grid: &[f64]) -> Self {
        ElementFamily { kind: FamilyKind::Sliver { alpha_exponent }, parameter_grid: h_grid.to_vec() }
    }

    pub fn squeezed(which: Reference, a: f64, b_grid: &[f64]) -> Self {
        ElementFamily { kind: FamilyKind::SqueezedReference { which, a }, parameter_grid: b_grid.to_vec() }
    }

    pub fn needle(aspect: f64, eps_grid: &[f64]) -> Self {
        ElementFamily { kind: FamilyKind::Needle { aspect }, parameter_grid: eps_grid.to_vec() }
    }

    pub fn random(seed: u64, count: usize) -> Self {
        ElementFamily { kind: FamilyKind::Random { seed, count }, parameter_grid: Vec::new() }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Sliver { .. } => "sliver",
            FamilyKind::SqueezedReference { .. } => "squeezed",
            FamilyKind::Needle { .. } => "needle",
            FamilyKind::Random { .. } => "random",
        }
    }

    /// The scalar that parameterises the family as a whole.
    pub fn kind_param(&self) -> f64 {
        match self.kind {
            FamilyKind::Sliver { alpha_exponent } => alpha_exponent,
            FamilyKind::SqueezedReference { a, .. } => a,
            FamilyKind::Needle { aspect } => aspect,
            FamilyKind::Random { seed, .. } => seed as f64,
        }
    }
}

pub fn sliver(h: f64, alpha_exponent: f64) -> Result<Tetrahedron> {
    if !(h > 0.0 && alpha_exponent > 0.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "sliver needs h > 0 and exponent > 0, got h = {h}, exponent = {alpha_exponent}"
        )));
    }
    let z = h.powf(alpha_exponent);
    Tetrahedron::new([[h, 0.0, 0.0], [-h, 0.0, 0.0], [0.0, -h, z], [0.0, h, z]])
}

/// `v1 = x^2 - h^2 + h^(2 - a) z`, which vanishes at the sliver's vertices.
pub fn sliver_v1(h: f64, alpha_exponent: f64) -> MultiPolynomial {
    MultiPolynomial::from_terms([([2, 0, 0], 1.0), ([0, 0, 0], -h * h), ([0, 0, 1], h.powf(2.0 - alpha_exponent))])
}

/// Family members paired with their grid parameter (the index for the
/// random family).
pub fn family_members(family: &ElementFamily) -> Result<Vec<(f64, Tetrahedron)>> {
    match family.kind {
        FamilyKind::Sliver { alpha_exponent } => {
            family.parameter_grid.iter().map(|&h| Ok((h, sliver(h, alpha_exponent)?))).collect()
        }
        FamilyKind::SqueezedReference { which, a } => {
            let reference = reference_tetrahedron(which);
            family
                .parameter_grid
                .iter()
                .map(|&b| Ok((b, reference.transformed(&make_squeeze(Squeeze::Sq1 { a, b })?)?)))
                .collect()
        }
        FamilyKind::Needle { aspect } => {
            let reference = reference_tetrahedron(Reference::Hat);
            family
                .parameter_grid
                .iter()
                .map(|&e| {
                    let map = make_squeeze(Squeeze::Sq2 { alpha: 1.0, beta: e, gamma: aspect * e })?;
                    Ok((e, reference.transformed(&map)?))
                })
                .collect()
        }
        FamilyKind::Random { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let mut v = [[0.0; 3]; 4];
                for p in v.iter_mut() {
                    for c in p.iter_mut() {
                        *c = rng.random::<f64>();
                    }
                }
                if let Ok(k) = Tetrahedron::new(v) {
                    if k.volume() > RANDOM_MIN_VOLUME {
                        out.push((out.len() as f64, k));
                    }
                }
            }
            Ok(out)
        }
    }
}

pub fn make_family(family: &ElementFamily) -> Result<Vec<Tetrahedron>> {
    Ok(family_members(family)?.into_iter().map(|(_, k)| k).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryFunction {
    pub id: String,
    pub poly: MultiPolynomial,
}

/// All monomials of degree `k + 1` followed by seeded random polynomials of
/// degree `k + 1` with coefficients in `[-1, 1]`.
pub fn function_battery(k: u32, seed: u64) -> Result<Vec<BatteryFunction>> {
    if !(1..=4).contains(&k) {
        return Err(Error::ParameterOutOfRange(format!("battery degree k = {k} not in 1..=4")));
    }
    let d = k + 1;
    let mut out: Vec<BatteryFunction> = MultiPolynomial::exponents_of_degree(d)
        .into_iter()
        .map(|e| BatteryFunction {
            id: format!("mono_{}_{}_{}", e[0], e[1], e[2]),
            poly: MultiPolynomial::monomial(e, 1.0),
        })
        .collect();
    let exps: Vec<_> = (0..=d).flat_map(MultiPolynomial::exponents_of_degree).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..RANDOM_BATTERY_SIZE {
        let poly = MultiPolynomial::from_terms(exps.iter().map(|e| (*e, rng.random_range(-1.0..=1.0))));
        out.push(BatteryFunction { id: format!("rand_{i:02}"), poly });
    }
    Ok(out)
}

fn serialize_p<S: Serializer>(p: &PExponent, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// One experiment row; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRatioRecord {
    pub family: String,
    pub kind_param: f64,
    pub h_param: f64,
    pub k: u32,
    pub m: u32,
    #[serde(serialize_with = "serialize_p")]
    pub p: PExponent,
    pub function_id: String,
    #[serde(rename = "h_K")]
    pub h_k: f64,
    #[serde(rename = "rho_K")]
    pub rho_k: f64,
    #[serde(rename = "R_sphere")]
    pub r_sphere: f64,
    #[serde(rename = "R_K")]
    pub r_k: f64,
    pub error_seminorm: f64,
    pub data_seminorm: f64,
    pub ratio_projected: f64,
    pub ratio_naive: f64,
}

pub const CSV_COLUMNS: [&str; 15] = [
    "family",
    "kind_param",
    "h_param",
    "k",
    "m",
    "p",
    "function_id",
    "h_K",
    "rho_K",
    "R_sphere",
    "R_K",
    "error_seminorm",
    "data_seminorm",
    "ratio_projected",
    "ratio_naive",
];

/// Geometry and interpolation operator of one element, shared by every
/// test function evaluated on it.
#[derive(Debug, Clone)]
pub struct ElementContext {
    pub element: Tetrahedron,
    pub h_k: f64,
    pub rho_k: f64,
    pub r_sphere: f64,
    pub r_k: f64,
    interpolator: LagrangeInterpolator,
}

impl ElementContext {
    pub fn new(element: &Tetrahedron, k: u32) -> Result<Self> {
        let (rho_k, r_sphere) = element.inradius_circumradius()?;
        let r_k = projected_circumradius(element)?.r_k;
        Ok(ElementContext {
            element: element.clone(),
            h_k: element.diameter(),
            rho_k,
            r_sphere,
            r_k,
            interpolator: LagrangeInterpolator::new(element, k)?,
        })
    }

    pub fn degree(&self) -> u32 {
        self.interpolator.degree()
    }

    /// `(|v - I v|_{m,p}, |v|_{k+1,p})`.
    pub fn seminorms(&self, v: &MultiPolynomial, m: u32, p: PExponent) -> Result<(f64, f64)> {
        let k = self.degree();
        let err = v - &self.interpolator.interpolate_poly(v);
        let error = seminorm(&self.element, &err, SeminormSpec::new(m, p))?;
        let data = seminorm(&self.element, v, SeminormSpec::new(k + 1, p))?;
        Ok((error, data))
    }

    pub fn record(&self, v: &MultiPolynomial, m: u32, p: PExponent) -> Result<ErrorRatioRecord> {
        let k = self.degree();
        check_p(k, m, p)?;
        if v.degree() > k + 1 {
            warn!("test function of degree {} exceeds k + 1 = {}", v.degree(), k + 1);
        }
        let (error, data) = self.seminorms(v, m, p)?;
        let (ratio_projected, ratio_naive) = if data > 0.0 {
            let scale = self.h_k.powi(k as i32 + 1 - 2 * m as i32) * data;
            (error / (self.r_k.powi(m as i32) * scale), error / (self.r_sphere.powi(m as i32) * scale))
        } else if error <= 1e-9 * v.max_abs_coeff().max(f64::MIN_POSITIVE) * self.h_k.max(1.0).powi(k as i32 + 1) {
            // v in P_k: interpolation is exact and the bound holds trivially
            (0.0, 0.0)
        } else {
            return Err(Error::ZeroDataSeminorm);
        };
        Ok(ErrorRatioRecord {
            family: "custom".into(),
            kind_param: 0.0,
            h_param: 0.0,
            k,
            m,
            p,
            function_id: "custom".into(),
            h_k: self.h_k,
            rho_k: self.rho_k,
            r_sphere: self.r_sphere,
            r_k: self.r_k,
            error_seminorm: error,
            data_seminorm: data,
            ratio_projected,
            ratio_naive,
        })
    }
}

/// Error record for one element and one test function.
pub fn error_ratio(
    element: &Tetrahedron,
    v: &MultiPolynomial,
    k: u32,
    m: u32,
    p: PExponent,
) -> Result<ErrorRatioRecord> {
    check_p(k, m, p)?;
    ElementContext::new(element, k)?.record(v, m, p)
}

/// Per-element maxima of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementSummary {
    pub h_param: f64,
    pub max_ratio_projected: f64,
    pub max_ratio_naive: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub records: Vec<ErrorRatioRecord>,
    pub summaries: Vec<ElementSummary>,
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), csv::Error> {
        write_csv(&self.records, writer)
    }

    pub fn max_ratios_projected(&self) -> Vec<f64> {
        self.summaries.iter().map(|s| s.max_ratio_projected).collect()
    }

    pub fn max_ratios_naive(&self) -> Vec<f64> {
        self.summaries.iter().map(|s| s.max_ratio_naive).collect()
    }
}

pub fn write_csv<W: Write>(records: &[ErrorRatioRecord], writer: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Battery for one family member: the shared battery, plus `v1` on slivers
/// when `k = 1`.
fn member_battery(family: &ElementFamily, h: f64, k: u32, shared: &[BatteryFunction]) -> Vec<BatteryFunction> {
    let mut out = shared.to_vec();
    if let (FamilyKind::Sliver { alpha_exponent }, 1) = (family.kind, k) {
        out.push(BatteryFunction { id: "v1".into(), poly: sliver_v1(h, alpha_exponent) });
    }
    out
}

/// Evaluates every battery function on every family member.
pub fn bound_sweep(family: &ElementFamily, k: u32, m: u32, p: PExponent, seed: u64) -> Result<SweepResult> {
    check_p(k, m, p)?;
    let members = family_members(family)?;
    let shared = function_battery(k, seed)?;
    let contexts: Vec<Result<ElementContext>> = par::map(&members, |(_, el)| ElementContext::new(el, k));
    let contexts: Vec<ElementContext> = contexts.into_iter().collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for (i, (h, _)) in members.iter().enumerate() {
        for f in member_battery(family, *h, k, &shared) {
            jobs.push((i, *h, f));
        }
    }
    let records = par::map(&jobs, |(i, h, f)| {
        contexts[*i].record(&f.poly, m, p).map(|mut r| {
            r.family = family.name().into();
            r.kind_param = family.kind_param();
            r.h_param = *h;
            r.function_id = f.id.clone();
            r
        })
    });
    let records: Vec<ErrorRatioRecord> = records.into_iter().collect::<Result<_>>()?;

    let summaries = members
        .iter()
        .enumerate()
        .map(|(i, (h, _))| {
            let rows = jobs.iter().zip(&records).filter(|((j, _, _), _)| *j == i).map(|(_, r)| r);
            let (mut proj, mut naive) = (0.0f64, 0.0f64);
            for r in rows {
                proj = proj.max(r.ratio_projected);
                naive = naive.max(r.ratio_naive);
            }
            ElementSummary { h_param: *h, max_ratio_projected: proj, max_ratio_naive: naive }
        })
        .collect();
    Ok(SweepResult { records, summaries })
}

/// `max |v - I v|_{m,p} / |v|_{k+1,p}` over the given functions.
pub fn b_lower_bound_with(
    element: &Tetrahedron,
    k: u32,
    m: u32,
    p: PExponent,
    battery: &[BatteryFunction],
) -> Result<f64> {
    check_p(k, m, p)?;
    let ctx = ElementContext::new(element, k)?;
    let quotients = par::map(battery, |f| -> Result<f64> {
        let (error, data) = ctx.seminorms(&f.poly, m, p)?;
        Ok(if data > 0.0 { error / data } else { 0.0 })
    });
    let mut best = 0.0f64;
    for q in quotients {
        best = best.max(q?);
    }
    Ok(best)
}

/// Lower bound for the best interpolation constant, from the seeded battery.
pub fn b_lower_bound(element: &Tetrahedron, k: u32, m: u32, p: PExponent, seed: u64) -> Result<f64> {
    b_lower_bound_with(element, k, m, p, &function_battery(k, seed)?)
}

/// One row of the sliver demonstration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RejectionRow {
    pub h: f64,
    /// `|v1 - I v1|_{1,inf,K}`.
    pub error: f64,
    #[serde(rename = "R_sphere")]
    pub r_sphere: f64,
    #[serde(rename = "R_K")]
    pub r_k: f64,
    pub naive_quotient: f64,
    pub projected_quotient: f64,
    /// Largest coefficient of `I v1`, which should vanish.
    pub interpolant_max_coeff: f64,
}

/// Linear interpolation of `v1` on slivers of shrinking size.
pub fn sliver_rejection_demo(alpha_exponent: f64, h_grid: &[f64]) -> Result<Vec<RejectionRow>> {
    if !(alpha_exponent > 2.0) {
        return Err(Error::ParameterOutOfRange(format!("the demonstration needs exponent > 2, got {alpha_exponent}")));
    }
    let rows = par::map(h_grid, |&h| -> Result<RejectionRow> {
        let k = sliver(h, alpha_exponent)?;
        let v1 = sliver_v1(h, alpha_exponent);
        let interp = LagrangeInterpolator::new(&k, 1)?.interpolate_poly(&v1);
        let error = seminorm(&k, &(&v1 - &interp), SeminormSpec::new(1, PExponent::Infinity))?;
        let (_, r_sphere) = k.inradius_circumradius()?;
        let r_k = projected_circumradius(&k)?.r_k;
        Ok(RejectionRow {
            h,
            error,
            r_sphere,
            r_k,
            naive_quotient: error / r_sphere,
            projected_quotient: error / r_k,
            interpolant_max_coeff: interp.max_abs_coeff(),
        })
    });
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sliver_vertices() {
        let k = sliver(0.1, 3.0).unwrap();
        let expected = [[0.1, 0.0, 0.0], [-0.1, 0.0, 0.0], [0.0, -0.1, 0.001], [0.0, 0.1, 0.001]];
        for (v, e) in k.vertices().iter().zip(expected) {
            assert_relative_eq!(*v, crate::simplex::Vec3::from(e), epsilon = 1e-16);
        }
        assert!(sliver(0.0, 2.0).is_err());
        assert!(sliver(0.1, -1.0).is_err());
    }

    #[test]
    fn unit_squeeze_is_reference() {
        let fam = ElementFamily::squeezed(Reference::Hat, 1.0, &[1.0]);
        assert_eq!(make_family(&fam).unwrap()[0], reference_tetrahedron(Reference::Hat));
        let bad = ElementFamily::squeezed(Reference::Hat, 2.0, &[1.0]);
        assert!(matches!(make_family(&bad), Err(Error::ParameterOutOfRange(_))));
    }

    #[test]
    fn random_family_is_reproducible() {
        let fam = ElementFamily::random(42, 10);
        let a = make_family(&fam).unwrap();
        let b = make_family(&fam).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!(a, b);
        assert!(a.iter().all(|k| k.volume() > RANDOM_MIN_VOLUME));
        assert_ne!(a, make_family(&ElementFamily::random(43, 10)).unwrap());
    }

    #[test]
    fn battery_composition() {
        let b = function_battery(1, 7).unwrap();
        assert_eq!(b.iter().filter(|f| f.id.starts_with("mono")).count(), 6);
        assert_eq!(b.len(), 6 + RANDOM_BATTERY_SIZE);
        assert!(b.iter().all(|f| f.poly.degree() == 2));
        assert_eq!(b, function_battery(1, 7).unwrap());
        assert_ne!(b, function_battery(1, 8).unwrap());
        assert!(function_battery(5, 0).is_err());
    }

    #[test]
    fn v1_only_for_linear_sliver_runs() {
        let shared = function_battery(1, 0).unwrap();
        let fam = ElementFamily::sliver(2.5, &[0.1]);
        assert!(member_battery(&fam, 0.1, 1, &shared).iter().any(|f| f.id == "v1"));
        let shared2 = function_battery(2, 0).unwrap();
        assert!(!member_battery(&fam, 0.1, 2, &shared2).iter().any(|f| f.id == "v1"));
    }

    #[test]
    fn polynomials_in_pk_have_zero_rows() {
        let k = reference_tetrahedron(Reference::Hat);
        let v = MultiPolynomial::from_terms([([1, 1, 0], 2.0), ([0, 0, 1], -1.0)]);
        let r = error_ratio(&k, &v, 2, 1, PExponent::Finite(2.0)).unwrap();
        assert!(r.error_seminorm < 1e-12);
        assert_eq!((r.ratio_projected, r.ratio_naive), (0.0, 0.0));
    }

    #[test]
    fn invalid_p_is_rejected() {
        let k = reference_tetrahedron(Reference::Hat);
        let v = MultiPolynomial::var(0).powi(2);
        assert!(matches!(error_ratio(&k, &v, 1, 1, PExponent::Finite(2.0)), Err(Error::InvalidPForKM { .. })));
        let fam = ElementFamily::sliver(2.5, &[0.1]);
        assert!(bound_sweep(&fam, 1, 1, PExponent::Finite(2.0), 0).is_err());
    }

    #[test]
    fn demo_requires_rejection_regime() {
        assert!(sliver_rejection_demo(1.5, &[0.1]).is_err());
    }

    #[test]
    fn csv_header_and_infinity() {
        let k = reference_tetrahedron(Reference::Hat);
        let v = MultiPolynomial::var(0).powi(2);
        let r = error_ratio(&k, &v, 1, 1, PExponent::Infinity).unwrap();
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 15);
        assert_eq!(row[5], "inf");
        assert_eq!(row[6], "custom");
    }
}
