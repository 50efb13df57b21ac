//! Minimal JSON mesh format and the per-element quality audit.

use serde::{Deserialize, Serialize};
use tia_core::projection::geometry_report;
use tia_core::{par, Tetrahedron};

/// Default `R_K / h_K` above which an element is flagged as a sliver.
pub const DEFAULT_SLIVER_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 3]>,
    pub tets: Vec<[usize; 4]>,
}

impl MeshFile {
    /// First element referencing a vertex that does not exist.
    pub fn check_indices(&self) -> Result<(), String> {
        let n = self.vertices.len();
        match self.tets.iter().enumerate().find(|(_, t)| t.iter().any(|&i| i >= n)) {
            Some((e, t)) => Err(format!("element {e} references {t:?} but the mesh has {n} vertices")),
            None => Ok(()),
        }
    }
}

/// One audit row. Geometry fields are empty for degenerate elements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRow {
    pub index: usize,
    #[serde(rename = "h_K")]
    pub h_k: Option<f64>,
    #[serde(rename = "rho_K")]
    pub rho_k: Option<f64>,
    #[serde(rename = "R_sphere")]
    pub r_sphere: Option<f64>,
    #[serde(rename = "R_K")]
    pub r_k: Option<f64>,
    #[serde(rename = "R_K/h_K")]
    pub r_k_over_h_k: Option<f64>,
    pub sliver_flag: bool,
    pub degenerate: bool,
}

fn audit_element(index: usize, vertices: [[f64; 3]; 4], threshold: f64) -> AuditRow {
    let report = Tetrahedron::new(vertices).and_then(|k| geometry_report(&k));
    match report {
        Ok(r) => {
            let ratio = r.r_k / r.h_k;
            AuditRow {
                index,
                h_k: Some(r.h_k),
                rho_k: Some(r.rho_k),
                r_sphere: Some(r.r_sphere),
                r_k: Some(r.r_k),
                r_k_over_h_k: Some(ratio),
                sliver_flag: ratio > threshold,
                degenerate: false,
            }
        }
        Err(_) => AuditRow {
            index,
            h_k: None,
            rho_k: None,
            r_sphere: None,
            r_k: None,
            r_k_over_h_k: None,
            sliver_flag: false,
            degenerate: true,
        },
    }
}

/// Audits every element; indices must already be checked.
pub fn audit(mesh: &MeshFile, threshold: f64) -> Vec<AuditRow> {
    par::map_range(mesh.tets.len(), |e| {
        let vertices = mesh.tets[e].map(|i| mesh.vertices[i]);
        audit_element(e, vertices, threshold)
    })
}
