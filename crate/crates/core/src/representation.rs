//! Finite-dimensional representations `sigma: H -> GL(F)` and their
//! differential at the identity.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::{exp, same_descriptor, AlgebraElement, GroupDescriptor, GroupElement, Matrix, Sampler};

/// Base step of the central-difference differential.
pub const FD_STEP: f64 = 1e-4;

/// Tolerance on `d sigma_e` identities along the finite-difference path.
pub const FD_DIFFERENTIAL_TOLERANCE: f64 = 1e-6;

/// Tolerance on `d sigma_e` identities along the analytic path.
pub const ANALYTIC_DIFFERENTIAL_TOLERANCE: f64 = 1e-10;

pub type MatrixMap = Arc<dyn Fn(&Matrix) -> Matrix + Send + Sync>;

/// Which route `differential_with` takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DifferentialPath {
    /// Analytic when available, finite differences otherwise.
    #[default]
    Auto,
    Analytic,
    FiniteDifference,
}

/// A representation carried as an evaluation map on group matrices, with an
/// optional analytic differential on algebra matrices.
#[derive(Clone)]
pub struct Representation {
    id: String,
    domain: Arc<GroupDescriptor>,
    fiber_dim: usize,
    evaluate: MatrixMap,
    analytic_differential: Option<MatrixMap>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("id", &self.id)
            .field("domain", &self.domain.name())
            .field("fiber_dim", &self.fiber_dim)
            .field("analytic", &self.analytic_differential.is_some())
            .finish()
    }
}

impl Representation {
    pub fn new(id: impl Into<String>, domain: Arc<GroupDescriptor>, fiber_dim: usize, evaluate: MatrixMap) -> Self {
        Representation { id: id.into(), domain, fiber_dim, evaluate, analytic_differential: None }
    }

    pub fn with_analytic_differential(mut self, differential: MatrixMap) -> Self {
        self.analytic_differential = Some(differential);
        self
    }

    /// Drops the analytic differential so every call goes through finite
    /// differences.
    pub fn without_analytic_differential(mut self) -> Self {
        self.analytic_differential = None;
        self
    }

    /// The trivial representation on `R^m`.
    pub fn trivial(domain: Arc<GroupDescriptor>, m: usize) -> Self {
        Representation::new(format!("trivial-{m}"), domain, m, Arc::new(move |_| Matrix::identity(m, m)))
            .with_analytic_differential(Arc::new(move |_| Matrix::zeros(m, m)))
    }

    /// The representation `h -> top-left m x m block of h`, which is a
    /// homomorphism whenever the domain is block diagonal there (rotations
    /// about z inside SO(3), rotations inside SE(2), ...).
    pub fn leading_block(id: impl Into<String>, domain: Arc<GroupDescriptor>, m: usize) -> Self {
        assert!(m <= domain.matrix_size());
        Representation::new(id, domain, m, Arc::new(move |g: &Matrix| g.view((0, 0), (m, m)).into_owned()))
            .with_analytic_differential(Arc::new(move |x: &Matrix| x.view((0, 0), (m, m)).into_owned()))
    }

    /// Catalog lookup by identifier on a given domain.
    ///
    /// * `so2-standard`: rotations acting on `R^2` (so2, so2z, so2-se2);
    /// * `so3-standard`: the defining 3-dimensional action (so3, so2z);
    /// * `trivial-<m>`: identity matrices on `R^m`, any domain.
    pub fn by_id(id: &str, domain: &Arc<GroupDescriptor>) -> Result<Self> {
        let unknown = || Error::UnknownRepresentation { id: id.to_string(), domain: domain.name().to_string() };
        match id {
            "so2-standard" if matches!(domain.name(), "so2" | "so2z" | "so2-se2") => {
                Ok(Self::leading_block(id, domain.clone(), 2))
            }
            "so3-standard" if matches!(domain.name(), "so3" | "so2z") => Ok(Self::leading_block(id, domain.clone(), 3)),
            _ => match id.strip_prefix("trivial-").map(str::parse::<usize>) {
                Some(Ok(m)) if m > 0 => Ok(Self::trivial(domain.clone(), m)),
                _ => Err(unknown()),
            },
        }
    }

    /// `factor * sigma`, with the differential scaled alike. Not a
    /// homomorphism for `factor != 1`; used as a negative control.
    pub fn scaled(&self, factor: f64) -> Self {
        let eval = self.evaluate.clone();
        let mut out = Representation::new(
            format!("{}*{factor}", self.id),
            self.domain.clone(),
            self.fiber_dim,
            Arc::new(move |g: &Matrix| eval(g) * factor),
        );
        if let Some(diff) = self.analytic_differential.clone() {
            out = out.with_analytic_differential(Arc::new(move |x: &Matrix| diff(x) * factor));
        }
        out
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn domain(&self) -> &Arc<GroupDescriptor> {
        &self.domain
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn has_analytic_differential(&self) -> bool {
        self.analytic_differential.is_some()
    }

    pub fn evaluate(&self, h: &GroupElement) -> Result<Matrix> {
        same_descriptor(&self.domain, h.descriptor())?;
        Ok((self.evaluate)(h.matrix()))
    }

    /// `d sigma_e (X)`, analytic when available.
    pub fn differential_at_identity(&self, x: &AlgebraElement) -> Result<Matrix> {
        self.differential_with(x, DifferentialPath::Auto)
    }

    pub fn differential_with(&self, x: &AlgebraElement, path: DifferentialPath) -> Result<Matrix> {
        same_descriptor(&self.domain, x.descriptor())?;
        match (path, &self.analytic_differential) {
            (DifferentialPath::Auto | DifferentialPath::Analytic, Some(diff)) => Ok(diff(x.matrix())),
            (DifferentialPath::Analytic, None) => Err(Error::UnknownRepresentation {
                id: format!("{} (analytic differential)", self.id),
                domain: self.domain.name().to_string(),
            }),
            _ => self.finite_difference_differential(x),
        }
    }

    /// Central differences of `t -> sigma(exp(tX))` at steps `h` and `h/2`,
    /// combined by one Richardson level.
    pub fn finite_difference_differential(&self, x: &AlgebraElement) -> Result<Matrix> {
        same_descriptor(&self.domain, x.descriptor())?;
        let central = |t: f64| -> Result<Matrix> {
            let plus = (self.evaluate)(exp(&x.scale(t))?.matrix());
            let minus = (self.evaluate)(exp(&x.scale(-t))?.matrix());
            Ok((plus - minus) / (2.0 * t))
        };
        let coarse = central(FD_STEP)?;
        let fine = central(FD_STEP / 2.0)?;
        Ok((fine * 4.0 - coarse) / 3.0)
    }

    /// Max-abs `|sigma(h1 h2) - sigma(h1) sigma(h2)|` over `samples` seeded
    /// random pairs.
    pub fn homomorphism_residual(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut sampler = Sampler::new(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples.max(1) {
            let h1 = sampler.group_element(&self.domain)?;
            let h2 = sampler.group_element(&self.domain)?;
            let lhs = self.evaluate(&h1.compose(&h2)?)?;
            let rhs = self.evaluate(&h1)? * self.evaluate(&h2)?;
            worst = worst.max((lhs - rhs).amax());
        }
        Ok(worst)
    }
}
