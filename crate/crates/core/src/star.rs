//! The star group `G* = Lie(G) x| G` with law
//! `(a, g)(a', g') = (a + Ad(g) a', g g')`, its identification with `TG`
//! by right translation, and its action on tangent bundles of spaces on
//! which `G` acts linearly.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::{adjoint, exp, same_descriptor, AlgebraElement, GroupDescriptor, GroupElement, Matrix, Vector};

/// Singular values above this count toward the infinitesimal rank.
pub const RANK_THRESHOLD: f64 = 1e-6;

/// Default step for the finite-difference Jacobian behind
/// [`infinitesimal_rank`].
pub const RANK_FD_STEP: f64 = 1e-5;

/// Tolerance for manifold constraints and tangency.
pub const MANIFOLD_TOLERANCE: f64 = 1e-9;

/// An element `(a, g)` of the star group.
#[derive(Clone)]
pub struct StarElement {
    a: AlgebraElement,
    g: GroupElement,
}

impl fmt::Debug for StarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StarElement").field("a", &self.a.coords().as_slice()).field("g", self.g.matrix()).finish()
    }
}

impl StarElement {
    pub fn new(a: AlgebraElement, g: GroupElement) -> Result<Self> {
        same_descriptor(a.descriptor(), g.descriptor())?;
        Ok(StarElement { a, g })
    }

    pub fn identity(d: &Arc<GroupDescriptor>) -> Self {
        StarElement { a: AlgebraElement::zero(d), g: GroupElement::identity(d) }
    }

    pub fn a(&self) -> &AlgebraElement {
        &self.a
    }

    pub fn g(&self) -> &GroupElement {
        &self.g
    }

    pub fn descriptor(&self) -> &Arc<GroupDescriptor> {
        self.g.descriptor()
    }

    pub fn multiply(&self, other: &StarElement) -> Result<StarElement> {
        star_multiply(self, other)
    }

    pub fn inverse(&self) -> StarElement {
        star_inverse(self)
    }

    /// Max of the coordinate and matrix max-abs distances.
    pub fn distance(&self, other: &StarElement) -> f64 {
        self.a.distance(&other.a).max(self.g.distance(&other.g))
    }
}

/// `(a, g)(a', g') = (a + Ad(g) a', g g')`.
pub fn star_multiply(p: &StarElement, q: &StarElement) -> Result<StarElement> {
    same_descriptor(p.descriptor(), q.descriptor())?;
    let a = p.a.add(&adjoint(&p.g, &q.a)?)?;
    let g = p.g.compose(&q.g)?;
    Ok(StarElement { a, g })
}

/// `(a, g)^-1 = (Ad(g^-1)(-a), g^-1)`.
pub fn star_inverse(p: &StarElement) -> StarElement {
    let g_inv = p.g.inverse();
    let a = adjoint(&g_inv, &p.a.neg()).expect("Ad preserves a valid descriptor's algebra");
    StarElement { a, g: g_inv }
}

/// A tangent vector to the group: base point `g` and tangent matrix `V`
/// at `g`.
#[derive(Debug, Clone)]
pub struct GroupTangent {
    pub base: GroupElement,
    pub tangent: Matrix,
}

/// Right-translation identification `(a, g) -> (g, a g)`.
pub fn theta(p: &StarElement) -> GroupTangent {
    GroupTangent { base: p.g.clone(), tangent: p.a.matrix() * p.g.matrix() }
}

/// Inverse of [`theta`]; fails with `SpanViolation` if `V g^-1` is not in
/// the algebra.
pub fn theta_inverse(t: &GroupTangent) -> Result<StarElement> {
    let right = &t.tangent * t.base.inverse().matrix();
    let a = AlgebraElement::from_matrix(t.base.descriptor(), &right)?;
    Ok(StarElement { a, g: t.base.clone() })
}

/// Spaces with a linear ambient realization on which the catalog groups act
/// by matrix multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddedManifold {
    /// Unit circle in `R^2`.
    Circle,
    /// Unit sphere in `R^3`.
    Sphere,
    /// The plane `{(x, y, 1)}` in homogeneous coordinates.
    AffinePlane,
}

impl EmbeddedManifold {
    pub fn name(&self) -> &'static str {
        match self {
            EmbeddedManifold::Circle => "circle",
            EmbeddedManifold::Sphere => "sphere",
            EmbeddedManifold::AffinePlane => "affine-plane",
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "circle" => Some(EmbeddedManifold::Circle),
            "sphere" => Some(EmbeddedManifold::Sphere),
            "affine-plane" => Some(EmbeddedManifold::AffinePlane),
            _ => None,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            EmbeddedManifold::Circle => 2,
            EmbeddedManifold::Sphere | EmbeddedManifold::AffinePlane => 3,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            EmbeddedManifold::Circle => 1,
            EmbeddedManifold::Sphere | EmbeddedManifold::AffinePlane => 2,
        }
    }

    pub fn constraint_residual(&self, x: &Vector) -> f64 {
        if x.len() != self.ambient_dim() {
            return f64::INFINITY;
        }
        match self {
            EmbeddedManifold::Circle | EmbeddedManifold::Sphere => (x.norm() - 1.0).abs(),
            EmbeddedManifold::AffinePlane => (x[2] - 1.0).abs(),
        }
    }

    pub fn tangency_residual(&self, x: &Vector, v: &Vector) -> f64 {
        if v.len() != self.ambient_dim() {
            return f64::INFINITY;
        }
        match self {
            EmbeddedManifold::Circle | EmbeddedManifold::Sphere => x.dot(v).abs(),
            EmbeddedManifold::AffinePlane => v[2].abs(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddedManifoldPoint {
    manifold: EmbeddedManifold,
    coords: Vector,
}

impl EmbeddedManifoldPoint {
    pub fn new(manifold: EmbeddedManifold, coords: Vector) -> Result<Self> {
        let residual = manifold.constraint_residual(&coords);
        if residual.is_nan() || residual > MANIFOLD_TOLERANCE {
            return Err(Error::ManifoldViolation { manifold: manifold.name().into(), residual });
        }
        Ok(EmbeddedManifoldPoint { manifold, coords })
    }

    pub fn manifold(&self) -> EmbeddedManifold {
        self.manifold
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }
}

/// A point of `TX`: base point plus an ambient tangent vector.
#[derive(Debug, Clone)]
pub struct EmbeddedTangentVector {
    base: EmbeddedManifoldPoint,
    vec: Vector,
}

impl EmbeddedTangentVector {
    pub fn new(base: EmbeddedManifoldPoint, vec: Vector) -> Result<Self> {
        let residual = base.manifold.tangency_residual(&base.coords, &vec);
        if residual.is_nan() || residual > MANIFOLD_TOLERANCE * (1.0 + vec.amax()) {
            return Err(Error::TangencyViolation { manifold: base.manifold.name().into(), residual });
        }
        Ok(EmbeddedTangentVector { base, vec })
    }

    pub fn zero_at(base: EmbeddedManifoldPoint) -> Self {
        let n = base.coords.len();
        EmbeddedTangentVector { base, vec: Vector::zeros(n) }
    }

    pub fn base(&self) -> &EmbeddedManifoldPoint {
        &self.base
    }

    pub fn vec(&self) -> &Vector {
        &self.vec
    }

    pub fn manifold(&self) -> EmbeddedManifold {
        self.base.manifold
    }

    /// `(base, vec)` stacked into one vector of length `2N`.
    pub fn stacked(&self) -> Vector {
        let n = self.vec.len();
        Vector::from_iterator(2 * n, self.base.coords.iter().chain(self.vec.iter()).copied())
    }

    /// Max-abs distance on the stacked representation.
    pub fn distance(&self, other: &EmbeddedTangentVector) -> f64 {
        if self.manifold() != other.manifold() {
            return f64::INFINITY;
        }
        (self.stacked() - other.stacked()).amax()
    }
}

/// `(a, g) . v = g v + a (g x)` at base `g x`, for `v` based at `x`.
///
/// For linear actions `d sigma_g` is multiplication by `g` and the
/// fundamental field of `a` is `x -> a x`.
pub fn act_on_tangent(p: &StarElement, v: &EmbeddedTangentVector) -> Result<EmbeddedTangentVector> {
    let n = p.descriptor().matrix_size();
    let manifold = v.manifold();
    if n != manifold.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: manifold.ambient_dim(), found: n });
    }
    let g = p.g.matrix();
    let base = g * &v.base.coords;
    let vec = g * &v.vec + p.a.matrix() * &base;
    let point = EmbeddedManifoldPoint::new(manifold, base)?;
    EmbeddedTangentVector::new(point, vec)
}

/// Finite-difference Jacobian of the star action at `v`: one column per
/// basis direction of `Lie(G*) = Lie(G) + Lie(G)`, rows in the stacked
/// `(base, vec)` ambient space.
///
/// The first `d` columns follow the paths `t -> (t E_i, e)`, the last `d`
/// follow `t -> (0, exp(t E_i))`.
pub fn infinitesimal_jacobian(v: &EmbeddedTangentVector, d: &Arc<GroupDescriptor>, fd_step: f64) -> Result<Matrix> {
    let dim = d.dim();
    let rows = 2 * v.manifold().ambient_dim();
    let mut jac = Matrix::zeros(rows, 2 * dim);
    for i in 0..dim {
        let e_i = AlgebraElement::basis_element(d, i);
        let translate = |t: f64| StarElement { a: e_i.scale(t), g: GroupElement::identity(d) };
        let rotate =
            |t: f64| -> Result<StarElement> { Ok(StarElement { a: AlgebraElement::zero(d), g: exp(&e_i.scale(t))? }) };
        let col_a = (act_on_tangent(&translate(fd_step), v)?.stacked()
            - act_on_tangent(&translate(-fd_step), v)?.stacked())
            / (2.0 * fd_step);
        let col_g = (act_on_tangent(&rotate(fd_step)?, v)?.stacked()
            - act_on_tangent(&rotate(-fd_step)?, v)?.stacked())
            / (2.0 * fd_step);
        jac.set_column(i, &col_a);
        jac.set_column(dim + i, &col_g);
    }
    Ok(jac)
}

/// Numerical rank of the linearized star action at `v`, counting singular
/// values above [`RANK_THRESHOLD`].
pub fn infinitesimal_rank(v: &EmbeddedTangentVector, d: &Arc<GroupDescriptor>, fd_step: f64) -> Result<usize> {
    let jac = infinitesimal_jacobian(v, d, fd_step)?;
    if jac.ncols() == 0 {
        return Ok(0);
    }
    let sv = jac.svd(false, false).singular_values;
    Ok(sv.iter().filter(|s| **s > RANK_THRESHOLD).count())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::lie::groups::{se2, so2, so3, trivial};
    use crate::lie::Sampler;

    fn v3(x: f64, y: f64, z: f64) -> Vector {
        Vector::from_vec(vec![x, y, z])
    }

    fn rz(theta: f64) -> GroupElement {
        exp(&AlgebraElement::from_coords(&so3(), v3(0.0, 0.0, theta)).unwrap()).unwrap()
    }

    fn sphere_vector(base: Vector, vec: Vector) -> EmbeddedTangentVector {
        EmbeddedTangentVector::new(EmbeddedManifoldPoint::new(EmbeddedManifold::Sphere, base).unwrap(), vec).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let d = so3();
        let mut s = Sampler::new(4);
        let p = StarElement::new(s.algebra_element(&d), s.group_element(&d).unwrap()).unwrap();
        let e = StarElement::identity(&d);
        assert!(star_multiply(&e, &p).unwrap().distance(&p) < 1e-15);
        assert!(star_multiply(&p, &e).unwrap().distance(&p) < 1e-15);
        assert!(star_inverse(&e).distance(&e) == 0.0);
    }

    #[test]
    fn multiply_example_cancels() {
        // Ad(R_z(pi/2)) L_y = -L_x, so (L_x, R_z)(L_y, e) = (0, R_z)
        let d = so3();
        let p = StarElement::new(AlgebraElement::basis_element(&d, 0), rz(FRAC_PI_2)).unwrap();
        let q = StarElement::new(AlgebraElement::basis_element(&d, 1), GroupElement::identity(&d)).unwrap();
        let r = p.multiply(&q).unwrap();
        assert!(r.a().coords().amax() < 1e-15);
        assert!(r.g().distance(&rz(FRAC_PI_2)) == 0.0);
        let direct =
            rz(FRAC_PI_2).matrix() * AlgebraElement::basis_element(&d, 1).matrix() * rz(FRAC_PI_2).matrix().transpose();
        assert!((direct + AlgebraElement::basis_element(&d, 0).matrix()).amax() < 1e-15);
    }

    #[test]
    fn abelian_inverse() {
        let d = so2();
        let quarter = exp(&AlgebraElement::from_coords(&d, Vector::from_vec(vec![FRAC_PI_2])).unwrap()).unwrap();
        let p = StarElement::new(AlgebraElement::basis_element(&d, 0), quarter).unwrap();
        let inv = p.inverse();
        assert!((inv.a().coords()[0] + 1.0).abs() < 1e-15);
        let expected = Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!((inv.g().matrix() - expected).amax() < 1e-15);
        let round = p.multiply(&inv).unwrap();
        assert!(round.distance(&StarElement::identity(&d)) < 1e-15);
    }

    #[test]
    fn group_axioms_on_samples() {
        let mut s = Sampler::new(17);
        for d in [so2(), so3(), se2()] {
            for _ in 0..200 {
                let mut draw = || StarElement::new(s.algebra_element(&d), s.group_element(&d).unwrap()).unwrap();
                let (p, q, r) = (draw(), draw(), draw());
                let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
                let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
                assert!(left.distance(&right) <= 1e-10);
                let e = StarElement::identity(&d);
                assert!(p.multiply(&p.inverse()).unwrap().distance(&e) <= 1e-10);
                assert!(p.inverse().multiply(&p).unwrap().distance(&e) <= 1e-10);
            }
        }
    }

    #[test]
    fn mixed_descriptors_rejected() {
        let p = StarElement::identity(&so3());
        let q = StarElement::identity(&se2());
        assert!(matches!(star_multiply(&p, &q), Err(Error::DomainMismatch { .. })));
        assert!(StarElement::new(AlgebraElement::zero(&so3()), GroupElement::identity(&se2())).is_err());
    }

    #[test]
    fn theta_examples_and_round_trip() {
        let d = so3();
        let g = rz(0.4);
        let t = theta(&StarElement::new(AlgebraElement::zero(&d), g.clone()).unwrap());
        assert_eq!(t.tangent, Matrix::zeros(3, 3));
        let a = AlgebraElement::basis_element(&d, 1);
        let t = theta(&StarElement::new(a.clone(), GroupElement::identity(&d)).unwrap());
        assert_eq!(&t.tangent, a.matrix());

        let mut s = Sampler::new(23);
        for _ in 0..100 {
            let p = StarElement::new(s.algebra_element(&d), s.group_element(&d).unwrap()).unwrap();
            let back = theta_inverse(&theta(&p)).unwrap();
            assert!(back.distance(&p) <= 1e-12);
        }
        let bad = GroupTangent { base: GroupElement::identity(&d), tangent: Matrix::identity(3, 3) };
        assert!(matches!(theta_inverse(&bad), Err(Error::SpanViolation { .. })));
    }

    #[test]
    fn action_examples_on_sphere() {
        let d = so3();
        let v = sphere_vector(v3(0.0, 0.0, 1.0), v3(1.0, 0.0, 0.0));
        let p = StarElement::new(AlgebraElement::basis_element(&d, 2), GroupElement::identity(&d)).unwrap();
        let out = act_on_tangent(&p, &v).unwrap();
        assert!((out.base().coords() - v3(0.0, 0.0, 1.0)).amax() < 1e-15);
        assert!((out.vec() - v3(1.0, 0.0, 0.0)).amax() < 1e-15);

        let v = sphere_vector(v3(1.0, 0.0, 0.0), v3(0.0, 0.0, 1.0));
        let p = StarElement::new(AlgebraElement::zero(&d), rz(FRAC_PI_2)).unwrap();
        let out = act_on_tangent(&p, &v).unwrap();
        assert!((out.base().coords() - v3(0.0, 1.0, 0.0)).amax() < 1e-15);
        assert!((out.vec() - v3(0.0, 0.0, 1.0)).amax() < 1e-15);

        let same = act_on_tangent(&StarElement::identity(&d), &v).unwrap();
        assert_eq!(same.distance(&v), 0.0);
    }

    #[test]
    fn action_is_a_left_action() {
        let d = so3();
        let mut s = Sampler::new(31);
        for _ in 0..200 {
            let p = StarElement::new(s.algebra_element(&d), s.group_element(&d).unwrap()).unwrap();
            let q = StarElement::new(s.algebra_element(&d), s.group_element(&d).unwrap()).unwrap();
            let x = s.coords(3, 1.0).normalize();
            let w = s.coords(3, 1.0);
            let w = &w - &x * x.dot(&w);
            let v = sphere_vector(x, w);
            let lhs = act_on_tangent(&p, &act_on_tangent(&q, &v).unwrap()).unwrap();
            let rhs = act_on_tangent(&p.multiply(&q).unwrap(), &v).unwrap();
            assert!(lhs.distance(&rhs) <= 1e-9);
        }
    }

    #[test]
    fn off_manifold_inputs_rejected() {
        assert!(EmbeddedManifoldPoint::new(EmbeddedManifold::Sphere, v3(0.0, 0.0, 2.0)).is_err());
        let base = EmbeddedManifoldPoint::new(EmbeddedManifold::Sphere, v3(0.0, 0.0, 1.0)).unwrap();
        assert!(matches!(EmbeddedTangentVector::new(base, v3(0.0, 0.0, 1.0)), Err(Error::TangencyViolation { .. })));
        let circle = EmbeddedTangentVector::zero_at(
            EmbeddedManifoldPoint::new(EmbeddedManifold::Circle, Vector::from_vec(vec![1.0, 0.0])).unwrap(),
        );
        assert!(matches!(
            act_on_tangent(&StarElement::identity(&so3()), &circle),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    // Oracle: the Jacobian of the star action at v = (x, w) has the closed
    // form column E_i -> (0, E_i x) for translations and
    // E_i -> (E_i x, E_i w) for rotations.
    fn analytic_jacobian(v: &EmbeddedTangentVector, d: &Arc<GroupDescriptor>) -> Matrix {
        let n = v.manifold().ambient_dim();
        let dim = d.dim();
        let mut jac = Matrix::zeros(2 * n, 2 * dim);
        for (i, b) in d.basis().iter().enumerate() {
            let bx = b * v.base().coords();
            let bw = b * v.vec();
            for r in 0..n {
                jac[(n + r, i)] = bx[r];
                jac[(r, dim + i)] = bx[r];
                jac[(n + r, dim + i)] = bw[r];
            }
        }
        jac
    }

    #[test]
    fn sphere_rank_is_four() {
        let d = so3();
        let mut s = Sampler::new(77);
        for _ in 0..50 {
            let x = s.coords(3, 1.0).normalize();
            let w = s.coords(3, 2.0);
            let w = &w - &x * x.dot(&w);
            let v = sphere_vector(x, w);
            let fd = infinitesimal_jacobian(&v, &d, RANK_FD_STEP).unwrap();
            let exact = analytic_jacobian(&v, &d);
            assert!((&fd - &exact).amax() < 1e-8);
            let sv = exact.svd(false, false).singular_values;
            assert_eq!(sv.iter().filter(|s| **s > RANK_THRESHOLD).count(), 4);
            assert_eq!(infinitesimal_rank(&v, &d, RANK_FD_STEP).unwrap(), 4);
        }
    }

    #[test]
    fn circle_rank_is_two_and_trivial_is_zero() {
        let base = EmbeddedManifoldPoint::new(EmbeddedManifold::Circle, Vector::from_vec(vec![0.6, 0.8])).unwrap();
        let v = EmbeddedTangentVector::new(base, Vector::from_vec(vec![-0.8, 0.6]) * 1.5).unwrap();
        assert_eq!(infinitesimal_rank(&v, &so2(), RANK_FD_STEP).unwrap(), 2);
        let v = sphere_vector(v3(0.0, 0.0, 1.0), v3(0.3, 0.1, 0.0));
        assert_eq!(infinitesimal_rank(&v, &trivial(3), RANK_FD_STEP).unwrap(), 0);
    }

    #[test]
    fn plane_rank_is_four() {
        let base = EmbeddedManifoldPoint::new(EmbeddedManifold::AffinePlane, v3(0.4, -1.2, 1.0)).unwrap();
        let v = EmbeddedTangentVector::new(base, v3(0.5, 0.7, 0.0)).unwrap();
        assert_eq!(infinitesimal_rank(&v, &se2(), RANK_FD_STEP).unwrap(), 4);
    }
}
