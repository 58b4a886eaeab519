//! Catalog of concrete matrix groups.

use std::sync::{Arc, LazyLock};

use super::{ClosedFormExp, GroupDescriptor, Matrix, MEMBERSHIP_TOLERANCE};
use crate::error::{Error, Result};

fn unit(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// Generator of rotations in the `(i, j)` plane: `e_j e_i^T - e_i e_j^T`.
fn rotation_generator(n: usize, i: usize, j: usize) -> Matrix {
    unit(n, j, i) - unit(n, i, j)
}

fn special_orthogonal_residual(m: &Matrix) -> f64 {
    let n = m.nrows();
    (m.transpose() * m - Matrix::identity(n, n)).norm() + (m.determinant() - 1.0).abs()
}

fn se2_residual(m: &Matrix) -> f64 {
    let r = m.view((0, 0), (2, 2)).into_owned();
    let bottom = (m[(2, 0)].powi(2) + m[(2, 1)].powi(2) + (m[(2, 2)] - 1.0).powi(2)).sqrt();
    special_orthogonal_residual(&r) + bottom
}

fn so2z_residual(m: &Matrix) -> f64 {
    let column = (m[(0, 2)].powi(2) + m[(1, 2)].powi(2) + (m[(2, 2)] - 1.0).powi(2)).sqrt();
    let row = (m[(2, 0)].powi(2) + m[(2, 1)].powi(2)).sqrt();
    special_orthogonal_residual(m) + column + row
}

fn so2_in_se2_residual(m: &Matrix) -> f64 {
    se2_residual(m) + (m[(0, 2)].powi(2) + m[(1, 2)].powi(2)).sqrt()
}

fn identity_residual(m: &Matrix) -> f64 {
    let n = m.nrows();
    (m - Matrix::identity(n, n)).norm()
}

static SO2: LazyLock<Arc<GroupDescriptor>> = LazyLock::new(|| {
    GroupDescriptor::new(
        "so2",
        2,
        vec![rotation_generator(2, 0, 1)],
        MEMBERSHIP_TOLERANCE,
        special_orthogonal_residual,
        Some(ClosedFormExp::PlanarRotation),
    )
    .expect("so2 descriptor")
});

static SO3: LazyLock<Arc<GroupDescriptor>> = LazyLock::new(|| {
    GroupDescriptor::new(
        "so3",
        3,
        vec![rotation_generator(3, 1, 2), rotation_generator(3, 2, 0), rotation_generator(3, 0, 1)],
        MEMBERSHIP_TOLERANCE,
        special_orthogonal_residual,
        Some(ClosedFormExp::Rodrigues),
    )
    .expect("so3 descriptor")
});

static SE2: LazyLock<Arc<GroupDescriptor>> = LazyLock::new(|| {
    GroupDescriptor::new(
        "se2",
        3,
        vec![rotation_generator(3, 0, 1), unit(3, 0, 2), unit(3, 1, 2)],
        MEMBERSHIP_TOLERANCE,
        se2_residual,
        None,
    )
    .expect("se2 descriptor")
});

static SO2Z: LazyLock<Arc<GroupDescriptor>> = LazyLock::new(|| {
    GroupDescriptor::new(
        "so2z",
        3,
        vec![rotation_generator(3, 0, 1)],
        MEMBERSHIP_TOLERANCE,
        so2z_residual,
        Some(ClosedFormExp::Rodrigues),
    )
    .expect("so2z descriptor")
});

static SO2_SE2: LazyLock<Arc<GroupDescriptor>> = LazyLock::new(|| {
    GroupDescriptor::new(
        "so2-se2",
        3,
        vec![rotation_generator(3, 0, 1)],
        MEMBERSHIP_TOLERANCE,
        so2_in_se2_residual,
        None,
    )
    .expect("so2-se2 descriptor")
});

static TRIVIAL2: LazyLock<Arc<GroupDescriptor>> = LazyLock::new(|| build_trivial(2));
static TRIVIAL3: LazyLock<Arc<GroupDescriptor>> = LazyLock::new(|| build_trivial(3));

fn build_trivial(n: usize) -> Arc<GroupDescriptor> {
    GroupDescriptor::new(format!("trivial-{n}"), n, vec![], MEMBERSHIP_TOLERANCE, identity_residual, None)
        .expect("trivial descriptor")
}

/// Rotations of the plane, basis `J = [[0, -1], [1, 0]]`.
pub fn so2() -> Arc<GroupDescriptor> {
    SO2.clone()
}

/// Rotations of space, basis `(L_x, L_y, L_z)`.
pub fn so3() -> Arc<GroupDescriptor> {
    SO3.clone()
}

/// Rigid motions of the plane as 3x3 homogeneous matrices, basis
/// `(rotation, x-translation, y-translation)`.
pub fn se2() -> Arc<GroupDescriptor> {
    SE2.clone()
}

/// Rotations about the z-axis inside SO(3), basis `(L_z)`.
pub fn so2_about_z() -> Arc<GroupDescriptor> {
    SO2Z.clone()
}

/// Rotations about the origin inside SE(2).
pub fn so2_in_se2() -> Arc<GroupDescriptor> {
    SO2_SE2.clone()
}

/// The one-element group `{I}` in `n x n` matrices (n = 2 or 3 are cached).
pub fn trivial(n: usize) -> Arc<GroupDescriptor> {
    match n {
        2 => TRIVIAL2.clone(),
        3 => TRIVIAL3.clone(),
        _ => build_trivial(n),
    }
}

pub const GROUP_NAMES: [&str; 7] = ["so2", "so3", "se2", "so2z", "so2-se2", "trivial-2", "trivial-3"];

pub fn group_by_name(name: &str) -> Result<Arc<GroupDescriptor>> {
    match name {
        "so2" => Ok(so2()),
        "so3" => Ok(so3()),
        "se2" => Ok(se2()),
        "so2z" => Ok(so2_about_z()),
        "so2-se2" => Ok(so2_in_se2()),
        "trivial-2" => Ok(trivial(2)),
        "trivial-3" => Ok(trivial(3)),
        other => Err(Error::UnknownGroup(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{exp, AlgebraElement, Sampler, Vector};

    #[test]
    fn every_catalog_group_builds() {
        for name in GROUP_NAMES {
            let d = group_by_name(name).unwrap();
            assert_eq!(d.name(), name);
        }
        assert!(group_by_name("so4").is_err());
    }

    #[test]
    fn subgroup_membership_is_strict() {
        let rz = so3().basis()[2].clone() * 0.7;
        let rx = so3().basis()[0].clone() * 0.7;
        let d = so2_about_z();
        assert!(d.membership_residual(&crate::lie::expm(&rz)) < 1e-12);
        assert!(d.membership_residual(&crate::lie::expm(&rx)) > 0.1);

        let t = se2().basis()[1].clone();
        assert!(so2_in_se2().membership_residual(&crate::lie::expm(&t)) > 0.5);
        assert!(se2().membership_residual(&crate::lie::expm(&t)) < 1e-12);
    }

    #[test]
    fn exp_inverse_pairs_cancel() {
        let mut s = Sampler::new(3);
        for d in [so2(), so3(), se2(), so2_about_z(), so2_in_se2()] {
            for _ in 0..100 {
                let x = s.coords(d.dim(), 5.0);
                let a = AlgebraElement::from_coords(&d, x.clone()).unwrap();
                let b = AlgebraElement::from_coords(&d, -x).unwrap();
                let prod = exp(&a).unwrap().compose(&exp(&b).unwrap()).unwrap();
                let n = d.matrix_size();
                assert!((prod.matrix() - Matrix::identity(n, n)).amax() < 1e-10);
            }
        }
        let _ = Vector::zeros(0);
    }
}
