//! The prolonged bundle `E* = G* x_{H*} TF`.
//!
//! Points are represented by pairs `((a, g), (xi, u))`; `H*` acts on the
//! right by
//!
//! ```text
//! ((a, g), v) . (b, h) = ((a, g)(b, h), sigma*((b, h)^-1) v)
//! ```
//!
//! and two pairs are equivalent when one is carried to the other by some
//! `(b, h)`. Coset labels realize `G*/H*` as the tangent bundle of `G/H`:
//! the label of `(a, g)` is the image of the zero vector at the base point
//! under the star action.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::groups::{se2, so2, so2_about_z, so2_in_se2, so3, trivial};
use crate::lie::{exp, AlgebraElement, GroupDescriptor, GroupElement, Matrix, Sampler, Vector};
use crate::prolongation::{apply, apply_inverse_action_with, prolong_with, TangentFiberVector};
use crate::representation::{DifferentialPath, Representation};
use crate::star::{act_on_tangent, EmbeddedManifold, EmbeddedManifoldPoint, EmbeddedTangentVector, StarElement};

/// Decision tolerance for equivalence, projection and trivialization.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-8;

/// The sphere chart excludes labels with `1 + <x, p0>` below this margin.
pub const SPHERE_CHART_MARGIN: f64 = 1e-3;

/// A point of `T(G/H)` naming an `H*`-coset of `G*`.
pub type CosetLabel = EmbeddedTangentVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// `SO(2)/{e}`: the circle.
    Circle,
    /// `SO(3)/SO(2)`: the 2-sphere, isotropy about the z-axis.
    Sphere,
    /// `SE(2)/SO(2)`: the Euclidean plane.
    Euclidean,
}

/// A homogeneous space `G/H` with the data needed to work with `G*/H*`.
#[derive(Debug)]
pub struct HomogeneousSpace {
    name: &'static str,
    kind: SpaceKind,
    big: Arc<GroupDescriptor>,
    sub: Arc<GroupDescriptor>,
    // dim G x dim H coordinate embedding of Lie(H) into Lie(G)
    inclusion: Matrix,
    manifold: EmbeddedManifold,
    base_point: Vector,
    representations: &'static [&'static str],
}

impl HomogeneousSpace {
    pub fn circle() -> Self {
        HomogeneousSpace {
            name: "circle",
            kind: SpaceKind::Circle,
            big: so2(),
            sub: trivial(2),
            inclusion: Matrix::zeros(1, 0),
            manifold: EmbeddedManifold::Circle,
            base_point: Vector::from_vec(vec![1.0, 0.0]),
            representations: &["trivial-2", "trivial-1"],
        }
    }

    pub fn sphere() -> Self {
        HomogeneousSpace {
            name: "sphere",
            kind: SpaceKind::Sphere,
            big: so3(),
            sub: so2_about_z(),
            inclusion: Matrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]),
            manifold: EmbeddedManifold::Sphere,
            base_point: Vector::from_vec(vec![0.0, 0.0, 1.0]),
            representations: &["so2-standard", "so3-standard", "trivial-2"],
        }
    }

    pub fn euclidean() -> Self {
        HomogeneousSpace {
            name: "euclidean",
            kind: SpaceKind::Euclidean,
            big: se2(),
            sub: so2_in_se2(),
            inclusion: Matrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]),
            manifold: EmbeddedManifold::AffinePlane,
            base_point: Vector::from_vec(vec![0.0, 0.0, 1.0]),
            representations: &["so2-standard", "trivial-2"],
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn big_group(&self) -> &Arc<GroupDescriptor> {
        &self.big
    }

    pub fn subgroup(&self) -> &Arc<GroupDescriptor> {
        &self.sub
    }

    pub fn inclusion(&self) -> &Matrix {
        &self.inclusion
    }

    pub fn manifold(&self) -> EmbeddedManifold {
        self.manifold
    }

    pub fn base_point(&self) -> &Vector {
        &self.base_point
    }

    /// Representation identifiers available on the subgroup; the first is
    /// the default.
    pub fn representations(&self) -> &'static [&'static str] {
        self.representations
    }

    pub fn default_representation(&self) -> &'static str {
        self.representations[0]
    }

    pub fn subgroup_membership(&self, g: &GroupElement) -> f64 {
        self.sub.membership_residual(g.matrix())
    }

    pub fn include_algebra(&self, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.expect_sub(b.descriptor())?;
        AlgebraElement::from_coords(&self.big, &self.inclusion * b.coords())
    }

    /// Embeds `(b, h)` in `H*` into `G*`.
    pub fn include(&self, k: &StarElement) -> Result<StarElement> {
        self.expect_sub(k.descriptor())?;
        let a = self.include_algebra(k.a())?;
        let g = GroupElement::new(&self.big, k.g().matrix().clone())?;
        StarElement::new(a, g)
    }

    /// Reads a `G*` element as an element of `H*`, failing with
    /// `SubgroupViolation` when either component leaves `H` or `Lie(H)`.
    pub fn restrict(&self, p: &StarElement) -> Result<StarElement> {
        if p.descriptor().name() == self.sub.name() {
            return Ok(p.clone());
        }
        self.expect_big(p.descriptor())?;
        let violation = |residual: f64| Error::SubgroupViolation { subgroup: self.sub.name().to_string(), residual };
        let h = GroupElement::new(&self.sub, p.g().matrix().clone())
            .map_err(|_| violation(self.subgroup_membership(p.g())))?;
        let b = AlgebraElement::from_matrix_with_tolerance(&self.sub, p.a().matrix(), EQUIVALENCE_TOLERANCE).map_err(
            |e| match e {
                Error::SpanViolation { residual, .. } => violation(residual),
                other => other,
            },
        )?;
        StarElement::new(b, h)
    }

    fn expect_sub(&self, d: &GroupDescriptor) -> Result<()> {
        if d.name() == self.sub.name() {
            Ok(())
        } else {
            Err(Error::DomainMismatch { expected: self.sub.name().to_string(), found: d.name().to_string() })
        }
    }

    fn expect_big(&self, d: &GroupDescriptor) -> Result<()> {
        if d.name() == self.big.name() {
            Ok(())
        } else {
            Err(Error::DomainMismatch { expected: self.big.name().to_string(), found: d.name().to_string() })
        }
    }

    fn base(&self) -> EmbeddedManifoldPoint {
        EmbeddedManifoldPoint::new(self.manifold, self.base_point.clone()).expect("catalog base point")
    }

    /// `(a, g) -> (a, g) . 0_{p0} = (g p0, a g p0)`, constant on `H*`-cosets.
    pub fn coset_label(&self, p: &StarElement) -> Result<CosetLabel> {
        self.expect_big(p.descriptor())?;
        act_on_tangent(p, &EmbeddedTangentVector::zero_at(self.base()))
    }

    /// Label of the identity coset.
    pub fn identity_label(&self) -> CosetLabel {
        EmbeddedTangentVector::zero_at(self.base())
    }

    pub fn in_chart(&self, x: &CosetLabel) -> bool {
        match self.kind {
            SpaceKind::Sphere => 1.0 + x.base().coords().dot(&self.base_point) > SPHERE_CHART_MARGIN,
            SpaceKind::Circle | SpaceKind::Euclidean => true,
        }
    }

    /// A star element whose coset label is `x`.
    ///
    /// * circle: rotation by the polar angle of the base point;
    /// * sphere: the minimal rotation taking `p0` to the base point, defined
    ///   away from the antipode of `p0`;
    /// * euclidean: pure translation.
    ///
    /// The algebra part is the horizontal lift `a` with `a x = w`.
    pub fn section(&self, x: &CosetLabel) -> Result<StarElement> {
        if x.manifold() != self.manifold {
            return Err(Error::ChartViolation {
                space: self.name.into(),
                reason: format!("label lives on `{}`", x.manifold().name()),
            });
        }
        if !self.in_chart(x) {
            return Err(Error::ChartViolation {
                space: self.name.into(),
                reason: "base point too close to the antipode of p0".into(),
            });
        }
        let p = x.base().coords();
        let w = x.vec();
        let (a_coords, g_matrix) = match self.kind {
            SpaceKind::Circle => {
                let theta = p[1].atan2(p[0]);
                let g = exp(&AlgebraElement::from_coords(&self.big, Vector::from_vec(vec![theta]))?)?;
                let speed = -p[1] * w[0] + p[0] * w[1];
                (Vector::from_vec(vec![speed]), g.matrix().clone())
            }
            SpaceKind::Sphere => {
                let c = p[2];
                let k = Matrix::from_row_slice(3, 3, &[0.0, 0.0, p[0], 0.0, 0.0, p[1], -p[0], -p[1], 0.0]);
                let r = Matrix::identity(3, 3) + &k + &k * &k / (1.0 + c);
                (p.cross(w), r)
            }
            SpaceKind::Euclidean => {
                let mut g = Matrix::identity(3, 3);
                g[(0, 2)] = p[0];
                g[(1, 2)] = p[1];
                (Vector::from_vec(vec![0.0, w[0], w[1]]), g)
            }
        };
        let a = AlgebraElement::from_coords(&self.big, a_coords)?;
        let g = GroupElement::new(&self.big, g_matrix)?;
        StarElement::new(a, g)
    }

    /// Random `(b, h)` in `H*`.
    pub fn random_subgroup_element(&self, s: &mut Sampler) -> Result<StarElement> {
        let b = s.algebra_element(&self.sub);
        let h = s.group_element(&self.sub)?;
        StarElement::new(b, h)
    }

    /// Random `(a, g)` in `G*`.
    pub fn random_star(&self, s: &mut Sampler) -> Result<StarElement> {
        let a = s.algebra_element(&self.big);
        let g = s.group_element(&self.big)?;
        StarElement::new(a, g)
    }
}

static CATALOG: std::sync::LazyLock<Vec<Arc<HomogeneousSpace>>> = std::sync::LazyLock::new(|| {
    vec![
        Arc::new(HomogeneousSpace::circle()),
        Arc::new(HomogeneousSpace::sphere()),
        Arc::new(HomogeneousSpace::euclidean()),
    ]
});

/// The shipping catalog in stable order: circle, sphere, euclidean.
pub fn catalog() -> Vec<Arc<HomogeneousSpace>> {
    CATALOG.clone()
}

pub fn space_by_name(name: &str) -> Result<Arc<HomogeneousSpace>> {
    CATALOG.iter().find(|s| s.name == name).cloned().ok_or_else(|| Error::UnknownExample(name.to_string()))
}

/// A representative `((a, g), (xi, u))` of a point of `E*`.
#[derive(Debug, Clone)]
pub struct BundlePoint {
    pub star: StarElement,
    pub fiber: TangentFiberVector,
}

impl BundlePoint {
    pub fn new(star: StarElement, fiber: TangentFiberVector) -> Self {
        BundlePoint { star, fiber }
    }

    /// Max of star and fiber distances.
    pub fn distance(&self, other: &BundlePoint) -> f64 {
        self.star.distance(&other.star).max(self.fiber.distance(&other.fiber))
    }
}

/// A homogeneous space together with the representation of `H` on `F`
/// that the prolonged bundle is associated with.
#[derive(Debug, Clone)]
pub struct ProlongedBundle {
    space: Arc<HomogeneousSpace>,
    rep: Representation,
    path: DifferentialPath,
}

impl ProlongedBundle {
    pub fn new(space: Arc<HomogeneousSpace>, rep: Representation) -> Result<Self> {
        if rep.domain().name() != space.sub.name() {
            return Err(Error::DomainMismatch {
                expected: space.sub.name().to_string(),
                found: rep.domain().name().to_string(),
            });
        }
        Ok(ProlongedBundle { space, rep, path: DifferentialPath::Auto })
    }

    /// Catalog bundle; `rep` defaults to the space's first representation.
    pub fn from_catalog(example: &str, rep: Option<&str>) -> Result<Self> {
        let space = space_by_name(example)?;
        let id = rep.unwrap_or(space.default_representation());
        let rep = Representation::by_id(id, &space.sub)?;
        ProlongedBundle::new(space, rep)
    }

    /// Same bundle with the differential forced through `path`.
    pub fn with_differential_path(mut self, path: DifferentialPath) -> Self {
        self.path = path;
        self
    }

    pub fn space(&self) -> &Arc<HomogeneousSpace> {
        &self.space
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn fiber_dim(&self) -> usize {
        self.rep.fiber_dim()
    }

    pub fn point(&self, star: StarElement, fiber: TangentFiberVector) -> Result<BundlePoint> {
        self.space.expect_big(star.descriptor())?;
        if fiber.fiber_dim() != self.fiber_dim() {
            return Err(Error::DimensionMismatch { expected: self.fiber_dim(), found: fiber.fiber_dim() });
        }
        Ok(BundlePoint { star, fiber })
    }

    pub fn random_fiber(&self, s: &mut Sampler) -> TangentFiberVector {
        let m = self.fiber_dim();
        TangentFiberVector { xi: s.coords(m, 2.0), u: s.coords(m, 2.0) }
    }

    pub fn random_point(&self, s: &mut Sampler) -> Result<BundlePoint> {
        let star = self.space.random_star(s)?;
        Ok(BundlePoint::new(star, self.random_fiber(s)))
    }

    /// Random point whose coset label lies inside the section chart.
    pub fn random_point_in_chart(&self, s: &mut Sampler) -> Result<BundlePoint> {
        loop {
            let p = self.random_point(s)?;
            if self.space.in_chart(&self.space.coset_label(&p.star)?) {
                return Ok(p);
            }
        }
    }

    /// Right action `p . k = (p.star (b, h), sigma*((b, h)^-1) p.fiber)`.
    ///
    /// `k` may be given over `H` or over `G`; in the latter case it must lie
    /// in `H*` or the call fails with `SubgroupViolation`.
    pub fn prolonged_action(&self, p: &BundlePoint, k: &StarElement) -> Result<BundlePoint> {
        let k_sub = self.space.restrict(k)?;
        let k_big = self.space.include(&k_sub)?;
        let star = p.star.multiply(&k_big)?;
        let fiber = apply_inverse_action_with(&self.rep, k_sub.a(), k_sub.g(), &p.fiber, self.path)?;
        Ok(BundlePoint { star, fiber })
    }

    /// Decides whether `q = p . k` for some `k` in `H*` and returns it.
    ///
    /// The candidate is forced by the star parts: `h = g^-1 g'` and
    /// `b = Ad(g^-1)(a' - a)`. It is accepted only if `h` is in `H`, `b` is in
    /// `Lie(H)` up to [`EQUIVALENCE_TOLERANCE`], and `p . k` reproduces `q`
    /// within the same tolerance.
    pub fn are_equivalent(&self, p: &BundlePoint, q: &BundlePoint) -> Option<StarElement> {
        if p.fiber.fiber_dim() != self.fiber_dim() || q.fiber.fiber_dim() != self.fiber_dim() {
            return None;
        }
        let g_inv = p.star.g().inverse();
        let h_matrix = g_inv.matrix() * q.star.g().matrix();
        let h = GroupElement::new(&self.space.sub, h_matrix).ok()?;
        let diff = q.star.a().sub(p.star.a()).ok()?;
        let b_matrix = g_inv.matrix() * diff.matrix() * p.star.g().matrix();
        let b = AlgebraElement::from_matrix_with_tolerance(&self.space.sub, &b_matrix, EQUIVALENCE_TOLERANCE).ok()?;
        let k = StarElement::new(b, h).ok()?;
        let reproduced = self.prolonged_action(p, &k).ok()?;
        (reproduced.distance(q) <= EQUIVALENCE_TOLERANCE).then_some(k)
    }

    /// The representative of `p`'s class whose star part is the section
    /// value at `p`'s coset label.
    pub fn canonicalize(&self, p: &BundlePoint) -> Result<BundlePoint> {
        let label = self.space.coset_label(&p.star)?;
        let s = self.space.section(&label)?;
        let k = self
            .space
            .restrict(&p.star.inverse().multiply(&s)?)
            .map_err(|e| Error::SectionFailure { space: self.space.name.into(), reason: e.to_string() })?;
        let moved = self.prolonged_action(p, &k)?;
        if moved.star.distance(&s) > EQUIVALENCE_TOLERANCE {
            return Err(Error::SectionFailure {
                space: self.space.name.into(),
                reason: format!("transported star part misses the section by {:e}", moved.star.distance(&s)),
            });
        }
        Ok(BundlePoint { star: s, fiber: moved.fiber })
    }

    /// `((a, g), v) H* -> (a, g) H*`, reported as a coset label.
    pub fn bundle_projection(&self, p: &BundlePoint) -> Result<CosetLabel> {
        self.space.coset_label(&p.star)
    }

    /// `p -> (x, sigma*(b, h) v)` with `x` the coset label and
    /// `(b, h) = section(x)^-1 (a, g)`.
    pub fn local_trivialization(&self, p: &BundlePoint) -> Result<(CosetLabel, TangentFiberVector)> {
        let label = self.space.coset_label(&p.star)?;
        let s = self.space.section(&label)?;
        let k = self.space.restrict(&s.inverse().multiply(&p.star)?)?;
        let fiber = apply(&prolong_with(&self.rep, k.a(), k.g(), self.path)?, &p.fiber)?;
        Ok((label, fiber))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    fn v2(a: f64, b: f64) -> Vector {
        Vector::from_vec(vec![a, b])
    }

    fn sphere() -> ProlongedBundle {
        ProlongedBundle::from_catalog("sphere", None).unwrap()
    }

    #[test]
    fn catalog_order_and_lookup() {
        let names: Vec<_> = catalog().iter().map(|s| s.name()).collect();
        assert_eq!(names, ["circle", "sphere", "euclidean"]);
        assert!(matches!(space_by_name("torus"), Err(Error::UnknownExample(_))));
    }

    #[test]
    fn inclusions_match_matrices() {
        for space in catalog() {
            for i in 0..space.subgroup().dim() {
                let b = AlgebraElement::basis_element(space.subgroup(), i);
                let a = space.include_algebra(&b).unwrap();
                assert_eq!(a.matrix(), b.matrix(), "{}", space.name());
            }
            assert_eq!(space.big_group().dim() - space.subgroup().dim(), space.manifold().dim(), "{}", space.name());
        }
    }

    #[test]
    fn subgroup_elements_fix_the_base_point() {
        let mut s = Sampler::new(2);
        for space in catalog() {
            for _ in 0..20 {
                let h = s.group_element(space.subgroup()).unwrap();
                assert!(space.big_group().membership_residual(h.matrix()) <= 1e-9);
                assert!((h.matrix() * space.base_point() - space.base_point()).amax() < 1e-12);
                for b in space.subgroup().basis() {
                    assert!((b * space.base_point()).amax() == 0.0);
                }
            }
        }
    }

    #[test]
    fn sphere_action_example() {
        let bundle = sphere();
        let d = so3();
        let p = BundlePoint::new(
            StarElement::new(AlgebraElement::basis_element(&d, 0), GroupElement::identity(&d)).unwrap(),
            TangentFiberVector::new(v2(1.0, 0.0), v2(0.0, 0.0)).unwrap(),
        );
        let sub = so2_about_z();
        let k = StarElement::new(AlgebraElement::basis_element(&sub, 0), GroupElement::identity(&sub)).unwrap();
        let out = bundle.prolonged_action(&p, &k).unwrap();
        assert!((out.star.a().coords() - Vector::from_vec(vec![1.0, 0.0, 1.0])).amax() < 1e-15);
        assert!(out.star.g().is_identity());
        assert!((&out.fiber.xi - v2(1.0, 0.0)).amax() < 1e-15);
        assert!((&out.fiber.u - v2(0.0, -1.0)).amax() < 1e-15);

        // the same k given over G is accepted
        let k_big = bundle.space().include(&k).unwrap();
        let again = bundle.prolonged_action(&p, &k_big).unwrap();
        assert!(again.distance(&out) == 0.0);

        let off = StarElement::new(AlgebraElement::basis_element(&d, 0), GroupElement::identity(&d)).unwrap();
        assert!(matches!(bundle.prolonged_action(&p, &off), Err(Error::SubgroupViolation { .. })));
    }

    #[test]
    fn identity_action_is_exact_on_star() {
        let bundle = sphere();
        let mut s = Sampler::new(5);
        let p = bundle.random_point(&mut s).unwrap();
        let e = StarElement::identity(bundle.space().subgroup());
        let out = bundle.prolonged_action(&p, &e).unwrap();
        assert_eq!(out.star.g().matrix(), p.star.g().matrix());
        assert_eq!(out.star.a().coords(), p.star.a().coords());
        assert!(out.fiber.distance(&p.fiber) <= 1e-12);
    }

    #[test]
    fn equivalence_reflexive_and_constructive() {
        for space in catalog() {
            for rep in space.representations() {
                let bundle = ProlongedBundle::from_catalog(space.name(), Some(rep)).unwrap();
                let mut s = Sampler::new(9);
                for _ in 0..30 {
                    let p = bundle.random_point(&mut s).unwrap();
                    let w = bundle.are_equivalent(&p, &p).expect("reflexive");
                    assert!(w.a().coords().iter().all(|c| c.abs() < 1e-12));
                    assert!(w.g().distance(&GroupElement::identity(space.subgroup())) < 1e-12);

                    let k = space.random_subgroup_element(&mut s).unwrap();
                    let q = bundle.prolonged_action(&p, &k).unwrap();
                    let found = bundle.are_equivalent(&p, &q).expect("constructive witness");
                    assert!(found.distance(&k) <= 1e-9, "{} {}", space.name(), rep);
                }
            }
        }
    }

    #[test]
    fn coset_breaking_pair_has_no_witness() {
        let bundle = sphere();
        let d = so3();
        let fiber = TangentFiberVector::new(v2(1.0, 2.0), v2(0.0, 1.0)).unwrap();
        let p = BundlePoint::new(StarElement::identity(&d), fiber.clone());
        let rx = exp(&AlgebraElement::from_coords(&d, Vector::from_vec(vec![FRAC_PI_2, 0.0, 0.0])).unwrap()).unwrap();
        let q = BundlePoint::new(StarElement::new(AlgebraElement::zero(&d), rx).unwrap(), fiber.clone());
        assert!(bundle.are_equivalent(&p, &q).is_none());

        // right coset but wrong fiber
        let q =
            BundlePoint::new(StarElement::identity(&d), TangentFiberVector::new(v2(1.0, 2.0), v2(0.0, 1.1)).unwrap());
        assert!(bundle.are_equivalent(&p, &q).is_none());

        // star part moved by an algebra element outside Lie(H)
        let shifted = StarElement::new(AlgebraElement::basis_element(&d, 1), GroupElement::identity(&d)).unwrap();
        assert!(bundle.are_equivalent(&p, &BundlePoint::new(shifted, fiber)).is_none());
    }

    #[test]
    fn canonicalize_is_class_invariant_and_idempotent() {
        for space in catalog() {
            let bundle = ProlongedBundle::from_catalog(space.name(), None).unwrap();
            let mut s = Sampler::new(40);
            for _ in 0..30 {
                let p = bundle.random_point_in_chart(&mut s).unwrap();
                let k = space.random_subgroup_element(&mut s).unwrap();
                let c1 = bundle.canonicalize(&p).unwrap();
                let c2 = bundle.canonicalize(&bundle.prolonged_action(&p, &k).unwrap()).unwrap();
                assert!(c1.distance(&c2) <= 1e-8, "{}", space.name());
                assert!(bundle.are_equivalent(&p, &c1).is_some());
                let again = bundle.canonicalize(&c1).unwrap();
                assert!(again.distance(&c1) <= 1e-12);
                let label = bundle.bundle_projection(&c1).unwrap();
                assert!(label.distance(&bundle.bundle_projection(&p).unwrap()) <= 1e-12);
            }
        }
    }

    #[test]
    fn sphere_section_moves_base_point() {
        let bundle = sphere();
        let mut s = Sampler::new(41);
        for _ in 0..30 {
            let p = bundle.random_point_in_chart(&mut s).unwrap();
            let label = bundle.bundle_projection(&p).unwrap();
            let c = bundle.canonicalize(&p).unwrap();
            let moved = c.star.g().matrix() * bundle.space().base_point();
            assert!((moved - label.base().coords()).amax() < 1e-12);
        }
    }

    #[test]
    fn sphere_chart_excludes_antipode() {
        let space = HomogeneousSpace::sphere();
        let d = so3();
        let flip =
            exp(&AlgebraElement::from_coords(&d, Vector::from_vec(vec![std::f64::consts::PI, 0.0, 0.0])).unwrap())
                .unwrap();
        let label = space.coset_label(&StarElement::new(AlgebraElement::zero(&d), flip).unwrap()).unwrap();
        assert!(matches!(space.section(&label), Err(Error::ChartViolation { .. })));
    }

    #[test]
    fn projection_of_identity_coset() {
        for space in catalog() {
            let label = space.coset_label(&StarElement::identity(space.big_group())).unwrap();
            assert_eq!(label.distance(&space.identity_label()), 0.0);
        }
    }

    #[test]
    fn trivialization_at_section_values() {
        let bundle = sphere();
        let mut s = Sampler::new(50);
        let p = bundle.random_point_in_chart(&mut s).unwrap();
        let label = bundle.bundle_projection(&p).unwrap();
        let at_section = BundlePoint::new(bundle.space().section(&label).unwrap(), p.fiber.clone());
        let (x, v) = bundle.local_trivialization(&at_section).unwrap();
        assert!(x.distance(&label) < 1e-12);
        assert!(v.distance(&p.fiber) < 1e-12);
    }

    #[test]
    fn identity_fiber_dimension_on_sphere() {
        let bundle = sphere();
        let p = BundlePoint::new(StarElement::identity(&so3()), TangentFiberVector::zeros(2));
        let (_, v) = bundle.local_trivialization(&p).unwrap();
        assert_eq!(v.stacked().len(), 4);
    }

    #[test]
    fn mismatched_representation_is_rejected() {
        let space = space_by_name("sphere").unwrap();
        let rep = Representation::by_id("so2-standard", &so2()).unwrap();
        assert!(matches!(ProlongedBundle::new(space, rep), Err(Error::DomainMismatch { .. })));
        assert!(ProlongedBundle::from_catalog("circle", Some("so2-standard")).is_err());
    }
}
