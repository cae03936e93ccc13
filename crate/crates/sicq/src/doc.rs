//! JSON document formats shared by the CLI and any external consumer.
//!
//! Every file is a UTF-8 JSON object with a `schema_version` string and a
//! `kind` tag (`state`, `povm`, `sic`, `probabilities`, `report`).
//! Complex numbers are two-element `[re, im]` arrays; matrices are
//! row-major arrays of rows. Emission is canonical: struct field order is
//! fixed and numbers print as shortest round-trip decimals, so identical
//! values serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::measurement::ProbabilityVector;
use crate::povm::{sic_effects, Povm, SicPovm};
use crate::states::{DensityOperator, StateVector, Tolerances};

pub const SCHEMA_VERSION: &str = "1";

pub type ComplexEntry = [f64; 2];
pub type MatrixData = Vec<Vec<ComplexEntry>>;
pub type VectorData = Vec<ComplexEntry>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub schema_version: String,
    #[serde(flatten)]
    pub body: Body,
}

impl Document {
    pub fn new(body: Body) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            body,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        let doc: Document = serde_json::from_str(text)?;
        Ok(doc)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Body {
    State(StateDoc),
    Povm(PovmDoc),
    Sic(SicDoc),
    Probabilities(ProbabilitiesDoc),
    Report(ReportDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateDoc {
    pub dim: usize,
    pub matrix: MatrixData,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmDoc {
    pub dim: usize,
    pub effects: Vec<MatrixData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SicDoc {
    pub dim: usize,
    pub fiducial: VectorData,
    pub vectors: Vec<VectorData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbabilitiesDoc {
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "snake_case")]
pub enum ReportDoc {
    SicSearch(SicSearchReport),
    Verify(VerifyReport),
    FtpCompare(FtpCompareReport),
    Reconstruction(ReconstructionReport),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SicSearchReport {
    pub dim: usize,
    pub converged: bool,
    pub final_potential: f64,
    pub potential_gap: f64,
    pub iterations_used: usize,
    pub restart_index: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub dim: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_overlap_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_trace_symmetry_deviation: Option<f64>,
    pub completeness_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_potential_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_effect_eigenvalue: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FtpCompareCase {
    pub born: Vec<f64>,
    pub classical: Vec<f64>,
    pub qbist: Vec<f64>,
    pub deviation_classical: f64,
    pub deviation_qbist: f64,
    /// Residual of the alternative reading of the update identity that
    /// conditions on a single posterior: min over reference outcomes i of
    /// max_j |qbist_j - r(j|i)|.
    pub alt_posterior_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FtpCompareReport {
    pub dim: usize,
    pub cases: Vec<FtpCompareCase>,
    pub max_deviation_classical: f64,
    pub max_deviation_qbist: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub feasible: bool,
    pub detail: String,
}

fn complex_to_entry(z: C64) -> ComplexEntry {
    [z.re, z.im]
}

fn entry_to_complex(e: ComplexEntry) -> C64 {
    C64::new(e[0], e[1])
}

pub fn matrix_to_data(m: &ComplexMatrix) -> MatrixData {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| complex_to_entry(m[(i, j)])).collect())
        .collect()
}

pub fn data_to_matrix(data: &MatrixData) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<C64>> = data
        .iter()
        .map(|r| r.iter().map(|&e| entry_to_complex(e)).collect())
        .collect();
    ComplexMatrix::from_rows(rows)
}

pub fn vector_to_data(v: &StateVector) -> VectorData {
    v.amplitudes().iter().map(|&z| complex_to_entry(z)).collect()
}

pub fn data_to_vector(data: &VectorData, tol: &Tolerances) -> Result<StateVector> {
    StateVector::new(data.iter().map(|&e| entry_to_complex(e)).collect(), tol)
}

pub fn state_doc(rho: &DensityOperator) -> Document {
    Document::new(Body::State(StateDoc {
        dim: rho.dim(),
        matrix: matrix_to_data(rho.matrix()),
    }))
}

pub fn load_state(doc: &StateDoc, tol: &Tolerances) -> Result<DensityOperator> {
    let m = data_to_matrix(&doc.matrix)?;
    if m.rows() != doc.dim {
        return Err(Error::Dimension(format!(
            "declared dim {} but matrix is {}x{}",
            doc.dim,
            m.rows(),
            m.cols()
        )));
    }
    DensityOperator::new(m, tol)
}

pub fn povm_doc(povm: &Povm) -> Document {
    Document::new(Body::Povm(PovmDoc {
        dim: povm.dim(),
        effects: povm.effects().iter().map(matrix_to_data).collect(),
    }))
}

pub fn load_povm(doc: &PovmDoc, tol: &Tolerances) -> Result<Povm> {
    let effects = doc
        .effects
        .iter()
        .map(data_to_matrix)
        .collect::<Result<Vec<_>>>()?;
    if effects.iter().any(|e| e.rows() != doc.dim) {
        return Err(Error::Dimension(format!(
            "declared dim {} does not match effect shapes",
            doc.dim
        )));
    }
    Povm::new(effects, tol)
}

pub fn sic_doc(fiducial: &StateVector, vectors: &[StateVector]) -> Document {
    Document::new(Body::Sic(SicDoc {
        dim: fiducial.dim(),
        fiducial: vector_to_data(fiducial),
        vectors: vectors.iter().map(vector_to_data).collect(),
    }))
}

pub fn load_sic(doc: &SicDoc, tol: &Tolerances) -> Result<SicPovm> {
    let vectors = doc
        .vectors
        .iter()
        .map(|v| data_to_vector(v, tol))
        .collect::<Result<Vec<_>>>()?;
    if vectors.iter().any(|v| v.dim() != doc.dim) {
        return Err(Error::Dimension(format!(
            "declared dim {} does not match vector dimensions",
            doc.dim
        )));
    }
    sic_effects(&vectors, tol)
}

pub fn probabilities_doc(p: &ProbabilityVector) -> Document {
    Document::new(Body::Probabilities(ProbabilitiesDoc {
        values: p.values().to_vec(),
    }))
}
