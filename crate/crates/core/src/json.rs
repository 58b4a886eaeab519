//! JSON wire formats. Matrices are row-major nested arrays of numbers.

use serde::{Deserialize, Serialize};

use crate::bundle::{BundlePoint, CosetLabel};
use crate::lie::{GroupDescriptor, Matrix, Vector};
use crate::prolongation::{ProlongedMatrix, TangentFiberVector};
use crate::sections::SampledEquivariantSection;
use crate::star::StarElement;

pub type Rows = Vec<Vec<f64>>;

pub fn matrix_to_rows(m: &Matrix) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Parses a row-major nested array; rejects ragged input.
pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<Matrix, String> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
        return Err(format!("row {i} has {} entries, expected {ncols}", r.len()));
    }
    Ok(Matrix::from_row_iterator(nrows, ncols, rows.iter().flatten().copied()))
}

pub fn vector_to_vec(v: &Vector) -> Vec<f64> {
    v.iter().copied().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptorJson {
    pub name: String,
    pub matrix_size: usize,
    pub basis: Vec<Rows>,
    pub tolerance: f64,
}

impl From<&GroupDescriptor> for DescriptorJson {
    fn from(d: &GroupDescriptor) -> Self {
        DescriptorJson {
            name: d.name().to_string(),
            matrix_size: d.matrix_size(),
            basis: d.basis().iter().map(matrix_to_rows).collect(),
            tolerance: d.tolerance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarElementJson {
    pub a: Vec<f64>,
    pub g: Rows,
}

impl From<&StarElement> for StarElementJson {
    fn from(p: &StarElement) -> Self {
        StarElementJson { a: vector_to_vec(p.a().coords()), g: matrix_to_rows(p.g().matrix()) }
    }
}

/// An element `(b, h)` of `H*` relating two bundle representatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub b: Vec<f64>,
    pub h: Rows,
}

impl From<&StarElement> for WitnessJson {
    fn from(k: &StarElement) -> Self {
        WitnessJson { b: vector_to_vec(k.a().coords()), h: matrix_to_rows(k.g().matrix()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentFiberJson {
    pub xi: Vec<f64>,
    pub u: Vec<f64>,
}

impl From<&TangentFiberVector> for TangentFiberJson {
    fn from(v: &TangentFiberVector) -> Self {
        TangentFiberJson { xi: vector_to_vec(&v.xi), u: vector_to_vec(&v.u) }
    }
}

impl From<&TangentFiberJson> for TangentFiberVector {
    fn from(v: &TangentFiberJson) -> Self {
        TangentFiberVector { xi: Vector::from_vec(v.xi.clone()), u: Vector::from_vec(v.u.clone()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundlePointJson {
    pub a: Vec<f64>,
    pub g: Rows,
    pub xi: Vec<f64>,
    pub u: Vec<f64>,
}

impl From<&BundlePoint> for BundlePointJson {
    fn from(p: &BundlePoint) -> Self {
        BundlePointJson {
            a: vector_to_vec(p.star.a().coords()),
            g: matrix_to_rows(p.star.g().matrix()),
            xi: vector_to_vec(&p.fiber.xi),
            u: vector_to_vec(&p.fiber.u),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProlongedMatrixJson {
    pub matrix: Rows,
    pub block_structure_valid: bool,
}

impl From<&ProlongedMatrix> for ProlongedMatrixJson {
    fn from(p: &ProlongedMatrix) -> Self {
        ProlongedMatrixJson { matrix: matrix_to_rows(p.matrix()), block_structure_valid: p.block_structure_valid() }
    }
}

/// An embedded tangent vector: ambient base point and vector plus the
/// manifold identifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentVectorJson {
    pub manifold: String,
    pub base: Vec<f64>,
    pub vec: Vec<f64>,
}

impl From<&CosetLabel> for TangentVectorJson {
    fn from(x: &CosetLabel) -> Self {
        TangentVectorJson {
            manifold: x.manifold().name().to_string(),
            base: vector_to_vec(x.base().coords()),
            vec: vector_to_vec(x.vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionJson {
    pub points: Vec<Rows>,
    pub values: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

impl From<&SampledEquivariantSection> for SectionJson {
    fn from(s: &SampledEquivariantSection) -> Self {
        SectionJson {
            points: s.points().iter().map(|g| matrix_to_rows(g.matrix())).collect(),
            values: s.values().iter().map(vector_to_vec).collect(),
            generator: s.generator().map(|f| f.name().to_string()),
        }
    }
}
