//! Matrix Lie groups and their Lie algebras.
//!
//! A [`GroupDescriptor`] fixes a matrix size, an ordered basis of the Lie
//! algebra and a residual-valued membership predicate. Group and algebra
//! elements carry a shared handle to their descriptor; binary operations
//! refuse to mix descriptors.

mod expm;
pub mod groups;
mod sample;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub use expm::{expm, planar_rotation_exp, rodrigues_exp};
pub use sample::{random_group_element, Sampler, SAMPLE_COORD_BOUND};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Default membership tolerance for catalog descriptors.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

/// Maximum projection residual accepted when a matrix is read back as an
/// algebra element (scaled by `max(1, |X|)`).
pub const SPAN_TOLERANCE: f64 = 1e-9;

/// Residual-valued membership predicate on `n x n` matrices.
pub type MembershipFn = fn(&Matrix) -> f64;

/// Closed-form exponential available for a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormExp {
    /// `exp(theta J) = [[cos, -sin], [sin, cos]]` on 2x2 skew matrices.
    PlanarRotation,
    /// Rodrigues' formula on 3x3 skew matrices.
    Rodrigues,
}

pub struct GroupDescriptor {
    name: String,
    matrix_size: usize,
    basis: Vec<Matrix>,
    tolerance: f64,
    membership: MembershipFn,
    closed_form: Option<ClosedFormExp>,
    // d x n^2, rows are vectorized basis matrices
    basis_rows: Matrix,
    gram_inverse: Matrix,
}

impl fmt::Debug for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupDescriptor")
            .field("name", &self.name)
            .field("matrix_size", &self.matrix_size)
            .field("dim", &self.basis.len())
            .field("tolerance", &self.tolerance)
            .field("closed_form", &self.closed_form)
            .finish()
    }
}

impl GroupDescriptor {
    /// Builds and validates a descriptor.
    ///
    /// Validation checks that the basis has the right shape, is linearly
    /// independent, closes under the commutator (residual at most
    /// [`SPAN_TOLERANCE`]) and that the identity passes membership.
    pub fn new(
        name: impl Into<String>,
        matrix_size: usize,
        basis: Vec<Matrix>,
        tolerance: f64,
        membership: MembershipFn,
        closed_form: Option<ClosedFormExp>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidDescriptor { name: name.clone(), reason };
        if matrix_size == 0 {
            return Err(invalid("matrix size must be positive".into()));
        }
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(invalid("tolerance must be nonnegative".into()));
        }
        for (i, b) in basis.iter().enumerate() {
            if b.nrows() != matrix_size || b.ncols() != matrix_size {
                return Err(invalid(format!("basis element {i} is not {matrix_size}x{matrix_size}")));
            }
        }

        let d = basis.len();
        let n2 = matrix_size * matrix_size;
        let mut basis_rows = Matrix::zeros(d, n2);
        for (i, b) in basis.iter().enumerate() {
            for (j, v) in b.iter().enumerate() {
                basis_rows[(i, j)] = *v;
            }
        }
        let gram = &basis_rows * basis_rows.transpose();
        let gram_inverse = if d == 0 {
            Matrix::zeros(0, 0)
        } else {
            let det = gram.determinant();
            if det.abs() <= 1e-12 {
                return Err(invalid(format!("basis is linearly dependent (Gram determinant {det:e})")));
            }
            gram.clone().try_inverse().ok_or_else(|| invalid("Gram matrix is singular".into()))?
        };

        let descriptor = GroupDescriptor {
            name: name.clone(),
            matrix_size,
            basis,
            tolerance,
            membership,
            closed_form,
            basis_rows,
            gram_inverse,
        };

        for i in 0..d {
            for j in (i + 1)..d {
                let (bi, bj) = (&descriptor.basis[i], &descriptor.basis[j]);
                let commutator = bi * bj - bj * bi;
                let (_, residual) = descriptor.project(&commutator);
                if residual > SPAN_TOLERANCE {
                    return Err(invalid(format!(
                        "basis not closed under commutator: [b{i}, b{j}] residual {residual:e}"
                    )));
                }
            }
        }
        let id_residual = membership(&Matrix::identity(matrix_size, matrix_size));
        if id_residual > tolerance {
            return Err(invalid(format!("identity fails membership (residual {id_residual:e})")));
        }
        Ok(Arc::new(descriptor))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix_size(&self) -> usize {
        self.matrix_size
    }

    /// Dimension of the Lie algebra.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn closed_form(&self) -> Option<ClosedFormExp> {
        self.closed_form
    }

    pub fn membership_residual(&self, m: &Matrix) -> f64 {
        if m.nrows() != self.matrix_size || m.ncols() != self.matrix_size {
            return f64::INFINITY;
        }
        (self.membership)(m)
    }

    /// Least-squares coordinates of `m` in the algebra basis plus the
    /// Frobenius norm of what the basis does not reach.
    pub fn project(&self, m: &Matrix) -> (Vector, f64) {
        let d = self.dim();
        if m.nrows() != self.matrix_size || m.ncols() != self.matrix_size {
            return (Vector::zeros(d), f64::INFINITY);
        }
        let flat = Vector::from_iterator(m.len(), m.iter().copied());
        let coords = &self.gram_inverse * (&self.basis_rows * &flat);
        let residual = (m - self.combine(&coords)).norm();
        (coords, residual)
    }

    /// `sum_i coords[i] * basis[i]`.
    pub fn combine(&self, coords: &Vector) -> Matrix {
        let n = self.matrix_size;
        let mut m = Matrix::zeros(n, n);
        for (c, b) in coords.iter().zip(&self.basis) {
            m += b * *c;
        }
        m
    }
}

/// Least-squares projection onto the algebra basis of `descriptor`.
///
/// Returns the coordinates and the residual norm; callers decide whether
/// the residual is small enough for their purpose.
pub fn to_coords(m: &Matrix, descriptor: &GroupDescriptor) -> (Vector, f64) {
    descriptor.project(m)
}

pub(crate) fn same_descriptor(a: &GroupDescriptor, b: &GroupDescriptor) -> Result<()> {
    if std::ptr::eq(a, b) || a.name == b.name {
        Ok(())
    } else {
        Err(Error::DomainMismatch { expected: a.name.clone(), found: b.name.clone() })
    }
}

/// An element of a matrix Lie group.
#[derive(Clone)]
pub struct GroupElement {
    descriptor: Arc<GroupDescriptor>,
    matrix: Matrix,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupElement").field("group", &self.descriptor.name).field("matrix", &self.matrix).finish()
    }
}

impl GroupElement {
    /// Wraps a matrix after checking membership and invertibility.
    pub fn new(descriptor: &Arc<GroupDescriptor>, matrix: Matrix) -> Result<Self> {
        let residual = descriptor.membership_residual(&matrix);
        if residual.is_nan() || residual > descriptor.tolerance {
            return Err(Error::MembershipViolation { group: descriptor.name.clone(), residual });
        }
        if matrix.determinant().abs() <= 1e-12 {
            return Err(Error::MembershipViolation { group: descriptor.name.clone(), residual: f64::INFINITY });
        }
        Ok(GroupElement { descriptor: descriptor.clone(), matrix })
    }

    pub fn identity(descriptor: &Arc<GroupDescriptor>) -> Self {
        let n = descriptor.matrix_size;
        GroupElement { descriptor: descriptor.clone(), matrix: Matrix::identity(n, n) }
    }

    pub(crate) fn from_parts(descriptor: Arc<GroupDescriptor>, matrix: Matrix) -> Self {
        GroupElement { descriptor, matrix }
    }

    pub fn descriptor(&self) -> &Arc<GroupDescriptor> {
        &self.descriptor
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn membership_residual(&self) -> f64 {
        self.descriptor.membership_residual(&self.matrix)
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        same_descriptor(&self.descriptor, &other.descriptor)?;
        Ok(GroupElement::from_parts(self.descriptor.clone(), &self.matrix * &other.matrix))
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = self.matrix.clone().try_inverse().expect("group elements are invertible");
        GroupElement::from_parts(self.descriptor.clone(), inv)
    }

    /// Max-abs distance between matrices.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        (&self.matrix - &other.matrix).amax()
    }

    pub fn is_identity(&self) -> bool {
        let n = self.descriptor.matrix_size;
        self.matrix == Matrix::identity(n, n)
    }
}

/// An element of the Lie algebra, held both as a matrix and as
/// coordinates in the descriptor's basis.
#[derive(Clone)]
pub struct AlgebraElement {
    descriptor: Arc<GroupDescriptor>,
    matrix: Matrix,
    coords: Vector,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraElement")
            .field("group", &self.descriptor.name)
            .field("coords", &self.coords.as_slice())
            .finish()
    }
}

impl AlgebraElement {
    pub fn from_coords(descriptor: &Arc<GroupDescriptor>, coords: Vector) -> Result<Self> {
        if coords.len() != descriptor.dim() {
            return Err(Error::DimensionMismatch { expected: descriptor.dim(), found: coords.len() });
        }
        Ok(Self::from_coords_unchecked(descriptor.clone(), coords))
    }

    pub(crate) fn from_coords_unchecked(descriptor: Arc<GroupDescriptor>, coords: Vector) -> Self {
        let matrix = descriptor.combine(&coords);
        AlgebraElement { descriptor, matrix, coords }
    }

    /// Reads a matrix back into the algebra; fails with `SpanViolation`
    /// when the projection residual exceeds the span tolerance.
    pub fn from_matrix(descriptor: &Arc<GroupDescriptor>, m: &Matrix) -> Result<Self> {
        Self::from_matrix_with_tolerance(descriptor, m, SPAN_TOLERANCE)
    }

    pub(crate) fn from_matrix_with_tolerance(
        descriptor: &Arc<GroupDescriptor>,
        m: &Matrix,
        tolerance: f64,
    ) -> Result<Self> {
        let (coords, residual) = descriptor.project(m);
        let scale = m.norm().max(1.0);
        if residual.is_nan() || residual > tolerance * scale {
            return Err(Error::SpanViolation { group: descriptor.name.clone(), residual });
        }
        Ok(Self::from_coords_unchecked(descriptor.clone(), coords))
    }

    pub fn zero(descriptor: &Arc<GroupDescriptor>) -> Self {
        Self::from_coords_unchecked(descriptor.clone(), Vector::zeros(descriptor.dim()))
    }

    /// The `i`-th basis element.
    pub fn basis_element(descriptor: &Arc<GroupDescriptor>, i: usize) -> Self {
        let mut coords = Vector::zeros(descriptor.dim());
        coords[i] = 1.0;
        Self::from_coords_unchecked(descriptor.clone(), coords)
    }

    pub fn descriptor(&self) -> &Arc<GroupDescriptor> {
        &self.descriptor
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        same_descriptor(&self.descriptor, &other.descriptor)?;
        Ok(Self::from_coords_unchecked(self.descriptor.clone(), &self.coords + &other.coords))
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        same_descriptor(&self.descriptor, &other.descriptor)?;
        Ok(Self::from_coords_unchecked(self.descriptor.clone(), &self.coords - &other.coords))
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        Self::from_coords_unchecked(self.descriptor.clone(), &self.coords * s)
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(-1.0)
    }

    /// Max-abs distance between coordinate vectors.
    pub fn distance(&self, other: &AlgebraElement) -> f64 {
        if self.coords.len() != other.coords.len() {
            return f64::INFINITY;
        }
        if self.coords.is_empty() {
            return 0.0;
        }
        (&self.coords - &other.coords).amax()
    }
}

/// Group exponential of an algebra element.
///
/// Uses the descriptor's closed form when one is flagged, otherwise
/// scaling and squaring. Fails with `MembershipViolation` when the result
/// leaves the group, which points at an inconsistent descriptor.
pub fn exp(x: &AlgebraElement) -> Result<GroupElement> {
    let d = &x.descriptor;
    let m = match d.closed_form {
        Some(ClosedFormExp::PlanarRotation) if d.matrix_size == 2 => planar_rotation_exp(&x.matrix),
        Some(ClosedFormExp::Rodrigues) if d.matrix_size == 3 => rodrigues_exp(&x.matrix),
        _ => expm(&x.matrix),
    };
    let residual = d.membership_residual(&m);
    if residual.is_nan() || residual > d.tolerance {
        return Err(Error::MembershipViolation { group: d.name.clone(), residual });
    }
    Ok(GroupElement::from_parts(d.clone(), m))
}

/// Adjoint action `Ad(g) X = g X g^-1`.
pub fn adjoint(g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    same_descriptor(&g.descriptor, &x.descriptor)?;
    let inv = g.inverse();
    let conj = &g.matrix * &x.matrix * &inv.matrix;
    AlgebraElement::from_matrix(&x.descriptor, &conj)
}

/// Lie bracket `[X, Y] = XY - YX`.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    same_descriptor(&x.descriptor, &y.descriptor)?;
    let m = &x.matrix * &y.matrix - &y.matrix * &x.matrix;
    AlgebraElement::from_matrix(&x.descriptor, &m)
}
