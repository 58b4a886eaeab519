//! Induced representations on sections, at finite sample resolution.
//!
//! A section of `E = G x_H F` is modelled as an equivariant function
//! `f: G -> F` with `f(g h) = sigma(h^-1) f(g)`, tabulated at a finite set
//! of group elements and optionally backed by a generator that can be
//! evaluated anywhere. `G` acts by `(rho(g) f)(x) = f(g^-1 x)`.
//!
//! Sections of the prolonged bundle are functions `F: G* -> TF`, equivariant
//! under `H*` through `sigma*`, and `G*` acts by the same left-translation
//! rule.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::bundle::{ProlongedBundle, SpaceKind};
use crate::error::{Error, Result};
use crate::lie::{exp, same_descriptor, AlgebraElement, GroupElement, Matrix, Sampler, Vector};
use crate::prolongation::{apply_inverse_action, TangentFiberVector};
use crate::star::StarElement;

/// Sample points per catalog space unless stated otherwise.
pub const DEFAULT_SAMPLE_POINTS: usize = 64;

/// Distance under which a translated sample point counts as tabulated.
pub const TABULATED_MATCH_TOLERANCE: f64 = 1e-12;

const LIFT_STEP: f64 = 1e-4;

pub type SectionFn = Arc<dyn Fn(&GroupElement) -> Result<Vector> + Send + Sync>;
pub type StarSectionFn = Arc<dyn Fn(&StarElement) -> Result<TangentFiberVector> + Send + Sync>;

/// A named function `G -> F`.
#[derive(Clone)]
pub struct SectionGenerator {
    name: String,
    f: SectionFn,
}

impl fmt::Debug for SectionGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("SectionGenerator").field(&self.name).finish()
    }
}

impl SectionGenerator {
    pub fn new(name: impl Into<String>, f: SectionFn) -> Self {
        SectionGenerator { name: name.into(), f }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, g: &GroupElement) -> Result<Vector> {
        (self.f)(g)
    }
}

/// A named function `G* -> TF`.
#[derive(Clone)]
pub struct StarSectionGenerator {
    name: String,
    f: StarSectionFn,
}

impl fmt::Debug for StarSectionGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("StarSectionGenerator").field(&self.name).finish()
    }
}

impl StarSectionGenerator {
    pub fn new(name: impl Into<String>, f: StarSectionFn) -> Self {
        StarSectionGenerator { name: name.into(), f }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, p: &StarElement) -> Result<TangentFiberVector> {
        (self.f)(p)
    }
}

pub const GENERATOR_NAMES: [&str; 6] = [
    "sphere-height-times-frame",
    "sphere-ambient-field",
    "euclidean-rotation-field",
    "circle-first-column",
    "coset-function",
    "constant",
];

/// The catalog generator matching a bundle's space and representation.
pub fn default_generator_name(bundle: &ProlongedBundle) -> &'static str {
    let rep = bundle.representation().id();
    match (bundle.space().kind(), rep) {
        (SpaceKind::Sphere, "so2-standard") => "sphere-height-times-frame",
        (SpaceKind::Sphere, "so3-standard") => "sphere-ambient-field",
        (SpaceKind::Euclidean, "so2-standard") => "euclidean-rotation-field",
        (SpaceKind::Circle, "trivial-2") => "circle-first-column",
        _ => "coset-function",
    }
}

/// Looks up a catalog generator and checks it fits `bundle`.
///
/// `constant` fits every bundle but is equivariant only for trivial
/// representations.
pub fn named_generator(name: &str, bundle: &ProlongedBundle) -> Result<SectionGenerator> {
    let space = bundle.space().clone();
    let rep = bundle.representation().id().to_string();
    let m = bundle.fiber_dim();
    let mismatch = || Error::UnknownGenerator(format!("{name} (on {} / {rep})", space.name()));
    let f: SectionFn = match name {
        "sphere-height-times-frame" if space.kind() == SpaceKind::Sphere && rep == "so2-standard" => {
            let p0 = space.base_point().clone();
            Arc::new(move |g: &GroupElement| {
                let x = g.matrix() * &p0;
                let field = (Vector::from_vec(vec![1.0, 0.0, 0.0]) - &x * x[0]) * x[2];
                let local = g.matrix().transpose() * field;
                Ok(local.rows(0, 2).into_owned())
            })
        }
        "sphere-ambient-field" if space.kind() == SpaceKind::Sphere && rep == "so3-standard" => {
            let p0 = space.base_point().clone();
            Arc::new(move |g: &GroupElement| {
                let x = g.matrix() * &p0;
                let field = Vector::from_vec(vec![x[1], x[2] * x[2], 1.0 - 0.5 * x[0]]);
                Ok(g.matrix().transpose() * field)
            })
        }
        "euclidean-rotation-field" if space.kind() == SpaceKind::Euclidean && rep == "so2-standard" => {
            Arc::new(|g: &GroupElement| {
                let m = g.matrix();
                let (t0, t1) = (m[(0, 2)], m[(1, 2)]);
                let field = Vector::from_vec(vec![-t1 + 0.3, t0 + 0.1 * t0 * t1]);
                Ok(m.view((0, 0), (2, 2)).transpose() * field)
            })
        }
        "circle-first-column" if space.kind() == SpaceKind::Circle && m == 2 => {
            Arc::new(|g: &GroupElement| Ok(g.matrix().column(0).into_owned()))
        }
        "coset-function" if rep.starts_with("trivial-") => {
            let p0 = space.base_point().clone();
            Arc::new(move |g: &GroupElement| {
                let x = g.matrix() * &p0;
                let n = x.len();
                Ok(Vector::from_iterator(m, (0..m).map(|i| (i + 1) as f64 * x[i % n] + 0.25 * x[(i + 1) % n].powi(2))))
            })
        }
        "constant" => {
            Arc::new(move |_: &GroupElement| Ok(Vector::from_iterator(m, (0..m).map(|i| 0.5f64.powi(i as i32)))))
        }
        other if GENERATOR_NAMES.contains(&other) => return Err(mismatch()),
        other => return Err(Error::UnknownGenerator(other.to_string())),
    };
    Ok(SectionGenerator::new(name, f))
}

/// `count` quasi-uniform coset representatives of `G/H`, each multiplied on
/// the right by a seeded random element of `H`.
pub fn default_points(bundle: &ProlongedBundle, count: usize, seed: u64) -> Result<Vec<GroupElement>> {
    let space = bundle.space();
    let g_desc = space.big_group();
    let mut sampler = Sampler::new(seed);
    let mut out = Vec::with_capacity(count);
    let side = (count as f64).sqrt().ceil().max(1.0) as usize;
    let golden = PI * (3.0 - 5f64.sqrt());
    for k in 0..count {
        let rep = match space.kind() {
            SpaceKind::Circle => {
                let theta = 2.0 * PI * k as f64 / count as f64;
                exp(&AlgebraElement::from_coords(g_desc, Vector::from_vec(vec![theta]))?)?
            }
            SpaceKind::Sphere => {
                // Fibonacci lattice: polar angle from z, then azimuth
                let z = 1.0 - (2 * k + 1) as f64 / count as f64;
                let polar = z.clamp(-1.0, 1.0).acos();
                let azimuth = golden * k as f64;
                let ry = exp(&AlgebraElement::from_coords(g_desc, Vector::from_vec(vec![0.0, polar, 0.0]))?)?;
                let rz = exp(&AlgebraElement::from_coords(g_desc, Vector::from_vec(vec![0.0, 0.0, azimuth]))?)?;
                rz.compose(&ry)?
            }
            SpaceKind::Euclidean => {
                let step = if side > 1 { 4.0 / (side - 1) as f64 } else { 0.0 };
                let (i, j) = (k % side, k / side);
                let mut m = Matrix::identity(3, 3);
                m[(0, 2)] = -2.0 + step * i as f64;
                m[(1, 2)] = -2.0 + step * j as f64;
                GroupElement::new(g_desc, m)?
            }
        };
        let h = sampler.group_element(space.subgroup())?;
        let h_big = GroupElement::new(g_desc, h.matrix().clone())?;
        out.push(rep.compose(&h_big)?);
    }
    Ok(out)
}

/// A sampled section of `E`.
#[derive(Debug, Clone)]
pub struct SampledEquivariantSection {
    bundle: ProlongedBundle,
    points: Vec<GroupElement>,
    values: Vec<Vector>,
    generator: Option<SectionGenerator>,
}

impl SampledEquivariantSection {
    pub fn from_generator(
        bundle: ProlongedBundle,
        points: Vec<GroupElement>,
        generator: SectionGenerator,
    ) -> Result<Self> {
        for p in &points {
            same_descriptor(bundle.space().big_group(), p.descriptor())?;
        }
        let values = points.iter().map(|p| generator.eval(p)).collect::<Result<Vec<_>>>()?;
        let s = SampledEquivariantSection { bundle, points, values, generator: Some(generator) };
        s.check_dims()?;
        Ok(s)
    }

    /// Catalog section: default points and the bundle's default generator.
    pub fn catalog(bundle: ProlongedBundle, seed: u64) -> Result<Self> {
        let points = default_points(&bundle, DEFAULT_SAMPLE_POINTS, seed)?;
        let generator = named_generator(default_generator_name(&bundle), &bundle)?;
        Self::from_generator(bundle, points, generator)
    }

    pub fn tabulated(bundle: ProlongedBundle, points: Vec<GroupElement>, values: Vec<Vector>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: values.len() });
        }
        for p in &points {
            same_descriptor(bundle.space().big_group(), p.descriptor())?;
        }
        let s = SampledEquivariantSection { bundle, points, values, generator: None };
        s.check_dims()?;
        Ok(s)
    }

    fn check_dims(&self) -> Result<()> {
        let m = self.bundle.fiber_dim();
        match self.values.iter().find(|v| v.len() != m) {
            Some(v) => Err(Error::DimensionMismatch { expected: m, found: v.len() }),
            None => Ok(()),
        }
    }

    pub fn bundle(&self) -> &ProlongedBundle {
        &self.bundle
    }

    pub fn points(&self) -> &[GroupElement] {
        &self.points
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn generator(&self) -> Option<&SectionGenerator> {
        self.generator.as_ref()
    }

    pub fn without_generator(mut self) -> Self {
        self.generator = None;
        self
    }

    pub fn eval(&self, g: &GroupElement) -> Result<Vector> {
        self.generator.as_ref().ok_or(Error::GeneratorRequired)?.eval(g)
    }

    /// `alpha * self + beta * other` on shared sample points.
    pub fn linear_combination(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.points.len() != other.points.len() {
            return Err(Error::DimensionMismatch { expected: self.points.len(), found: other.points.len() });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * alpha + b * beta).collect();
        let generator = match (&self.generator, &other.generator) {
            (Some(f1), Some(f2)) => {
                let (f1, f2) = (f1.clone(), f2.clone());
                let name = format!("{alpha}*{}+{beta}*{}", f1.name, f2.name);
                Some(SectionGenerator::new(
                    name,
                    Arc::new(move |g: &GroupElement| Ok(f1.eval(g)? * alpha + f2.eval(g)? * beta)),
                ))
            }
            _ => None,
        };
        Ok(SampledEquivariantSection { bundle: self.bundle.clone(), points: self.points.clone(), values, generator })
    }

    /// Max-abs gap between values at corresponding sample points.
    pub fn max_distance(&self, other: &Self) -> f64 {
        if self.values.len() != other.values.len() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| if a.is_empty() { 0.0 } else { (a - b).amax() })
            .fold(0.0, f64::max)
    }
}

/// `(rho(g) f)(x) = f(g^-1 x)`.
///
/// Tabulated-only sections support `g = e` and elements that permute the
/// sample points; anything else needs a generator.
pub fn rho_apply(g: &GroupElement, s: &SampledEquivariantSection) -> Result<SampledEquivariantSection> {
    same_descriptor(s.bundle.space().big_group(), g.descriptor())?;
    if g.is_identity() {
        return Ok(s.clone());
    }
    let g_inv = g.inverse();
    match &s.generator {
        Some(f) => {
            let f = f.clone();
            let name = format!("translated({})", f.name);
            let translated = SectionGenerator::new(name, Arc::new(move |x: &GroupElement| f.eval(&g_inv.compose(x)?)));
            SampledEquivariantSection::from_generator(s.bundle.clone(), s.points.clone(), translated)
        }
        None => {
            let values = s
                .points
                .iter()
                .map(|p| {
                    let target = g_inv.compose(p)?;
                    s.points
                        .iter()
                        .position(|q| q.distance(&target) <= TABULATED_MATCH_TOLERANCE)
                        .map(|j| s.values[j].clone())
                        .ok_or(Error::GeneratorRequired)
                })
                .collect::<Result<Vec<_>>>()?;
            SampledEquivariantSection::tabulated(s.bundle.clone(), s.points.clone(), values)
        }
    }
}

/// Max over sample points `g` and `samples` random `h` in `H` of
/// `|f(g h) - sigma(h^-1) f(g)|`.
pub fn equivariance_residual(s: &SampledEquivariantSection, samples: usize, seed: u64) -> Result<f64> {
    let f = s.generator.as_ref().ok_or(Error::GeneratorRequired)?;
    let space = s.bundle.space();
    let rep = s.bundle.representation();
    let mut sampler = Sampler::new(seed);
    let mut worst: f64 = 0.0;
    for (g, value) in s.points.iter().zip(&s.values) {
        for _ in 0..samples {
            let h = sampler.group_element(space.subgroup())?;
            let h_big = GroupElement::new(space.big_group(), h.matrix().clone())?;
            let lhs = f.eval(&g.compose(&h_big)?)?;
            let rhs = rep.evaluate(&h.inverse())? * value;
            if !lhs.is_empty() {
                worst = worst.max((lhs - rhs).amax());
            }
        }
    }
    Ok(worst)
}

/// Lifts `f: G -> F` to `F*: G* -> TF`, `F*(a, g) = (f(g), D_a f(g))` with
/// `D_a f(g) = d/dt f(exp(t a) g)` at `t = 0`.
///
/// If `f` is `sigma`-equivariant then the lift is `sigma*`-equivariant. The
/// derivative is a Richardson-extrapolated central difference.
pub fn tangent_lift(f: &SectionGenerator) -> StarSectionGenerator {
    let f = f.clone();
    let name = format!("lift({})", f.name);
    StarSectionGenerator::new(
        name,
        Arc::new(move |p: &StarElement| {
            let value = f.eval(p.g())?;
            let central = |t: f64| -> Result<Vector> {
                let plus = exp(&p.a().scale(t))?.compose(p.g())?;
                let minus = exp(&p.a().scale(-t))?.compose(p.g())?;
                Ok((f.eval(&plus)? - f.eval(&minus)?) / (2.0 * t))
            };
            let coarse = central(LIFT_STEP)?;
            let fine = central(LIFT_STEP / 2.0)?;
            let derivative = (fine * 4.0 - coarse) / 3.0;
            TangentFiberVector::new(value, derivative)
        }),
    )
}

/// A sampled section of `E*`.
#[derive(Debug, Clone)]
pub struct SampledStarSection {
    bundle: ProlongedBundle,
    points: Vec<StarElement>,
    values: Vec<TangentFiberVector>,
    generator: Option<StarSectionGenerator>,
}

impl SampledStarSection {
    pub fn from_generator(
        bundle: ProlongedBundle,
        points: Vec<StarElement>,
        generator: StarSectionGenerator,
    ) -> Result<Self> {
        for p in &points {
            same_descriptor(bundle.space().big_group(), p.descriptor())?;
        }
        let values = points.iter().map(|p| generator.eval(p)).collect::<Result<Vec<_>>>()?;
        let m = bundle.fiber_dim();
        if let Some(v) = values.iter().find(|v| v.fiber_dim() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: v.fiber_dim() });
        }
        Ok(SampledStarSection { bundle, points, values, generator: Some(generator) })
    }

    /// Catalog star section: default base points with seeded algebra parts
    /// and the tangent lift of the default generator.
    pub fn catalog(bundle: ProlongedBundle, seed: u64) -> Result<Self> {
        let base = default_points(&bundle, DEFAULT_SAMPLE_POINTS, seed)?;
        let mut sampler = Sampler::new(seed ^ 0x5eed);
        let big = bundle.space().big_group().clone();
        let points =
            base.into_iter().map(|g| StarElement::new(sampler.algebra_element(&big), g)).collect::<Result<Vec<_>>>()?;
        let generator = tangent_lift(&named_generator(default_generator_name(&bundle), &bundle)?);
        Self::from_generator(bundle, points, generator)
    }

    pub fn tabulated(
        bundle: ProlongedBundle,
        points: Vec<StarElement>,
        values: Vec<TangentFiberVector>,
    ) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: values.len() });
        }
        Ok(SampledStarSection { bundle, points, values, generator: None })
    }

    pub fn bundle(&self) -> &ProlongedBundle {
        &self.bundle
    }

    pub fn points(&self) -> &[StarElement] {
        &self.points
    }

    pub fn values(&self) -> &[TangentFiberVector] {
        &self.values
    }

    pub fn generator(&self) -> Option<&StarSectionGenerator> {
        self.generator.as_ref()
    }

    pub fn linear_combination(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.points.len() != other.points.len() {
            return Err(Error::DimensionMismatch { expected: self.points.len(), found: other.points.len() });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.linear_combination(alpha, b, beta))
            .collect::<Result<Vec<_>>>()?;
        let generator = match (&self.generator, &other.generator) {
            (Some(f1), Some(f2)) => {
                let (f1, f2) = (f1.clone(), f2.clone());
                let name = format!("{alpha}*{}+{beta}*{}", f1.name, f2.name);
                Some(StarSectionGenerator::new(
                    name,
                    Arc::new(move |p: &StarElement| f1.eval(p)?.linear_combination(alpha, &f2.eval(p)?, beta)),
                ))
            }
            _ => None,
        };
        Ok(SampledStarSection { bundle: self.bundle.clone(), points: self.points.clone(), values, generator })
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        if self.values.len() != other.values.len() {
            return f64::INFINITY;
        }
        self.values.iter().zip(&other.values).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
    }
}

/// `(rho*(w) F)(P) = F(w^-1 P)` with the star-group product.
pub fn rho_star_apply(w: &StarElement, s: &SampledStarSection) -> Result<SampledStarSection> {
    same_descriptor(s.bundle.space().big_group(), w.descriptor())?;
    if w.g().is_identity() && w.a().coords().iter().all(|c| *c == 0.0) {
        return Ok(s.clone());
    }
    let w_inv = w.inverse();
    match &s.generator {
        Some(f) => {
            let f = f.clone();
            let name = format!("translated({})", f.name);
            let translated =
                StarSectionGenerator::new(name, Arc::new(move |p: &StarElement| f.eval(&w_inv.multiply(p)?)));
            SampledStarSection::from_generator(s.bundle.clone(), s.points.clone(), translated)
        }
        None => {
            let values = s
                .points
                .iter()
                .map(|p| {
                    let target = w_inv.multiply(p)?;
                    s.points
                        .iter()
                        .position(|q| q.distance(&target) <= TABULATED_MATCH_TOLERANCE)
                        .map(|j| s.values[j].clone())
                        .ok_or(Error::GeneratorRequired)
                })
                .collect::<Result<Vec<_>>>()?;
            SampledStarSection::tabulated(s.bundle.clone(), s.points.clone(), values)
        }
    }
}

/// Max over sample points `P` and `samples` random `k` in `H*` of
/// `|F(P k) - sigma*(k)^-1 F(P)|`.
pub fn star_equivariance_residual(s: &SampledStarSection, samples: usize, seed: u64) -> Result<f64> {
    let f = s.generator.as_ref().ok_or(Error::GeneratorRequired)?;
    let space = s.bundle.space();
    let rep = s.bundle.representation();
    let mut sampler = Sampler::new(seed);
    let mut worst: f64 = 0.0;
    for (p, value) in s.points.iter().zip(&s.values) {
        for _ in 0..samples {
            let k = space.random_subgroup_element(&mut sampler)?;
            let lhs = f.eval(&p.multiply(&space.include(&k)?)?)?;
            let rhs = apply_inverse_action(rep, k.a(), k.g(), value)?;
            worst = worst.max(lhs.distance(&rhs));
        }
    }
    Ok(worst)
}
