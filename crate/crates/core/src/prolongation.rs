//! Prolongation of a representation `sigma: H -> GL(F)` to the star group:
//!
//! ```text
//! sigma*(b, h) = [ sigma(h)                 0        ]
//!                [ d sigma_e(b) sigma(h)    sigma(h) ]
//! ```
//!
//! acting on `TF = F x F` with coordinates `(xi, u)`. Pairs `(b, h)` are
//! taken in right-trivialized form, so the same map realizes the
//! prolongation on `TH`.

use crate::error::{Error, Result};
use crate::lie::{adjoint, AlgebraElement, GroupElement, Matrix, Vector};
use crate::representation::{DifferentialPath, Representation};
use crate::star::StarElement;

/// A vector `(xi, u)` of the tangent fiber `TF`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFiberVector {
    pub xi: Vector,
    pub u: Vector,
}

impl TangentFiberVector {
    pub fn new(xi: Vector, u: Vector) -> Result<Self> {
        if xi.len() != u.len() {
            return Err(Error::DimensionMismatch { expected: xi.len(), found: u.len() });
        }
        Ok(TangentFiberVector { xi, u })
    }

    pub fn zeros(m: usize) -> Self {
        TangentFiberVector { xi: Vector::zeros(m), u: Vector::zeros(m) }
    }

    pub fn fiber_dim(&self) -> usize {
        self.xi.len()
    }

    pub fn stacked(&self) -> Vector {
        let m = self.xi.len();
        Vector::from_iterator(2 * m, self.xi.iter().chain(self.u.iter()).copied())
    }

    pub fn from_stacked(v: &Vector) -> Self {
        let m = v.len() / 2;
        TangentFiberVector { xi: v.rows(0, m).into_owned(), u: v.rows(m, m).into_owned() }
    }

    pub fn linear_combination(&self, alpha: f64, other: &TangentFiberVector, beta: f64) -> Result<Self> {
        if self.fiber_dim() != other.fiber_dim() {
            return Err(Error::DimensionMismatch { expected: self.fiber_dim(), found: other.fiber_dim() });
        }
        Ok(TangentFiberVector { xi: &self.xi * alpha + &other.xi * beta, u: &self.u * alpha + &other.u * beta })
    }

    /// Max-abs distance on the stacked vector.
    pub fn distance(&self, other: &TangentFiberVector) -> f64 {
        if self.fiber_dim() != other.fiber_dim() {
            return f64::INFINITY;
        }
        if self.fiber_dim() == 0 {
            return 0.0;
        }
        (self.stacked() - other.stacked()).amax()
    }
}

/// A `2m x 2m` block lower-triangular matrix with equal diagonal blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct ProlongedMatrix {
    fiber_dim: usize,
    matrix: Matrix,
}

impl ProlongedMatrix {
    /// Assembles `[[diag, 0], [lower, diag]]`.
    pub fn from_blocks(diag: &Matrix, lower: &Matrix) -> Self {
        let m = diag.nrows();
        assert!(diag.ncols() == m && lower.nrows() == m && lower.ncols() == m);
        let mut matrix = Matrix::zeros(2 * m, 2 * m);
        matrix.view_mut((0, 0), (m, m)).copy_from(diag);
        matrix.view_mut((m, m), (m, m)).copy_from(diag);
        matrix.view_mut((m, 0), (m, m)).copy_from(lower);
        ProlongedMatrix { fiber_dim: m, matrix }
    }

    /// Wraps an arbitrary `2m x 2m` matrix; use
    /// [`block_structure_valid`](Self::block_structure_valid) to check it.
    pub fn from_matrix(matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: 2 * (matrix.nrows() / 2), found: matrix.ncols() });
        }
        Ok(ProlongedMatrix { fiber_dim: matrix.nrows() / 2, matrix })
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    fn block(&self, row: usize, col: usize) -> Matrix {
        let m = self.fiber_dim;
        self.matrix.view((row * m, col * m), (m, m)).into_owned()
    }

    pub fn top_left(&self) -> Matrix {
        self.block(0, 0)
    }

    pub fn top_right(&self) -> Matrix {
        self.block(0, 1)
    }

    pub fn bottom_left(&self) -> Matrix {
        self.block(1, 0)
    }

    pub fn bottom_right(&self) -> Matrix {
        self.block(1, 1)
    }

    /// Exact (bitwise) check: zero top-right block and identical diagonal
    /// blocks.
    pub fn block_structure_valid(&self) -> bool {
        self.top_right().iter().all(|v| *v == 0.0) && self.top_left() == self.bottom_right()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn product(&self, other: &ProlongedMatrix) -> ProlongedMatrix {
        ProlongedMatrix { fiber_dim: self.fiber_dim, matrix: &self.matrix * &other.matrix }
    }

    pub fn apply(&self, v: &TangentFiberVector) -> Result<TangentFiberVector> {
        apply(self, v)
    }
}

fn check_domain(sigma: &Representation, b: &AlgebraElement, h: &GroupElement) -> Result<()> {
    for name in [b.descriptor().name(), h.descriptor().name()] {
        if name != sigma.domain().name() {
            return Err(Error::DomainMismatch { expected: sigma.domain().name().to_string(), found: name.to_string() });
        }
    }
    Ok(())
}

/// `sigma*(b, h)` using the representation's preferred differential.
pub fn prolong(sigma: &Representation, b: &AlgebraElement, h: &GroupElement) -> Result<ProlongedMatrix> {
    prolong_with(sigma, b, h, DifferentialPath::Auto)
}

pub fn prolong_with(
    sigma: &Representation,
    b: &AlgebraElement,
    h: &GroupElement,
    path: DifferentialPath,
) -> Result<ProlongedMatrix> {
    check_domain(sigma, b, h)?;
    let s = sigma.evaluate(h)?;
    let ds = sigma.differential_with(b, path)?;
    Ok(ProlongedMatrix::from_blocks(&s, &(ds * &s)))
}

/// `sigma*` of a star element over the representation's domain.
pub fn prolong_element(sigma: &Representation, k: &StarElement, path: DifferentialPath) -> Result<ProlongedMatrix> {
    prolong_with(sigma, k.a(), k.g(), path)
}

/// `(xi, u) -> (A xi, C xi + A u)` for `P = [[A, 0], [C, A]]`.
pub fn apply(p: &ProlongedMatrix, v: &TangentFiberVector) -> Result<TangentFiberVector> {
    if v.fiber_dim() != p.fiber_dim {
        return Err(Error::DimensionMismatch { expected: p.fiber_dim, found: v.fiber_dim() });
    }
    let a = p.top_left();
    let c = p.bottom_left();
    Ok(TangentFiberVector { xi: &a * &v.xi, u: &c * &v.xi + p.bottom_right() * &v.u })
}

/// `sigma*((b, h)^-1) v`, with `(b, h)^-1 = (Ad(h^-1)(-b), h^-1)`.
///
/// Componentwise: `xi~ = sigma(h^-1) xi` and
/// `u~ = d sigma_e(-Ad(h^-1) b) sigma(h^-1) xi + sigma(h^-1) u`.
pub fn apply_inverse_action(
    sigma: &Representation,
    b: &AlgebraElement,
    h: &GroupElement,
    v: &TangentFiberVector,
) -> Result<TangentFiberVector> {
    apply_inverse_action_with(sigma, b, h, v, DifferentialPath::Auto)
}

pub fn apply_inverse_action_with(
    sigma: &Representation,
    b: &AlgebraElement,
    h: &GroupElement,
    v: &TangentFiberVector,
    path: DifferentialPath,
) -> Result<TangentFiberVector> {
    check_domain(sigma, b, h)?;
    let h_inv = h.inverse();
    let b_inv = adjoint(&h_inv, &b.neg())?;
    apply(&prolong_with(sigma, &b_inv, &h_inv, path)?, v)
}

/// Alternative inverse-action formula in which the lower block acts on
/// `xi` directly: `u~ = d sigma_e(-Ad(h^-1) b) xi + sigma(h^-1) u`.
///
/// This drops the `sigma(h^-1)` factor carried by the block matrix, so it
/// agrees with [`apply_inverse_action`] only when `sigma(h^-1) xi = xi`.
/// It exists for diagnostics only.
pub fn direct_lower_block_inverse_action(
    sigma: &Representation,
    b: &AlgebraElement,
    h: &GroupElement,
    v: &TangentFiberVector,
) -> Result<TangentFiberVector> {
    check_domain(sigma, b, h)?;
    if v.fiber_dim() != sigma.fiber_dim() {
        return Err(Error::DimensionMismatch { expected: sigma.fiber_dim(), found: v.fiber_dim() });
    }
    let h_inv = h.inverse();
    let b_inv = adjoint(&h_inv, &b.neg())?;
    let s_inv = sigma.evaluate(&h_inv)?;
    let ds = sigma.differential_at_identity(&b_inv)?;
    Ok(TangentFiberVector { xi: &s_inv * &v.xi, u: ds * &v.xi + &s_inv * &v.u })
}

/// Max-abs gap between the `u` components of [`apply_inverse_action`] and
/// [`direct_lower_block_inverse_action`].
pub fn lower_block_discrepancy(
    sigma: &Representation,
    b: &AlgebraElement,
    h: &GroupElement,
    v: &TangentFiberVector,
) -> Result<f64> {
    let block = apply_inverse_action(sigma, b, h, v)?;
    let direct = direct_lower_block_inverse_action(sigma, b, h, v)?;
    Ok(block.distance(&direct))
}
