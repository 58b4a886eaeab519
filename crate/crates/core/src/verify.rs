//! Seeded property suites over the catalog, reported as JSON-serializable
//! [`VerificationReport`]s.
//!
//! Every check records the worst residual it saw and the threshold it was
//! held to. Reports are a pure function of the options unless timing is
//! requested.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::{space_by_name, BundlePoint, HomogeneousSpace, ProlongedBundle};
use crate::error::Error;
use crate::lie::{adjoint, bracket, exp, AlgebraElement, GroupDescriptor, GroupElement, Matrix, Sampler};
use crate::prolongation::{apply, apply_inverse_action, lower_block_discrepancy, prolong_with, TangentFiberVector};
use crate::representation::{DifferentialPath, Representation};
use crate::sections::{
    equivariance_residual, rho_apply, rho_star_apply, star_equivariance_residual, SampledEquivariantSection,
    SampledStarSection,
};
use crate::star::{act_on_tangent, infinitesimal_jacobian, infinitesimal_rank, StarElement, RANK_FD_STEP};

/// Factor applied to `sigma` by the corrupted-representation control.
pub const CORRUPTION_FACTOR: f64 = 2.0;

/// Pinned default tolerances, by key.
pub const DEFAULT_TOLERANCES: [(&str, f64); 24] = [
    ("star_axioms", 1e-10),
    ("exp_inverse", 1e-10),
    ("adjoint_laws", 1e-9),
    ("rep_homomorphism", 1e-10),
    ("homomorphism_analytic", 1e-10),
    ("homomorphism_fd", 1e-6),
    ("differential_paths", 1e-6),
    ("determinant_relative", 1e-9),
    ("inverse_compat", 1e-9),
    ("differential_equivariance", 1e-10),
    ("right_action", 1e-9),
    ("identity_fiber", 1e-12),
    ("left_action", 1e-9),
    ("tangency", 1e-9),
    ("fundamental_field_fd", 1e-8),
    ("witness_recovery", 1e-9),
    ("equivalence", 1e-8),
    ("projection", 1e-8),
    ("trivialization_linearity", 1e-10),
    ("injectivity_separation", 1e-6),
    ("induced_rep", 1e-9),
    ("induced_linearity", 1e-10),
    ("equivariance", 1e-9),
    ("lower_block_nonzero", 1e-6),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    GroupAxioms,
    ProlongationHomomorphism,
    ActionLaws,
    Equivalence,
    ProjectionTrivialization,
    InducedRep,
    RankTransitivity,
    All,
}

impl Suite {
    pub const ALL_SUITES: [Suite; 7] = [
        Suite::GroupAxioms,
        Suite::ProlongationHomomorphism,
        Suite::ActionLaws,
        Suite::Equivalence,
        Suite::ProjectionTrivialization,
        Suite::InducedRep,
        Suite::RankTransitivity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::GroupAxioms => "group-axioms",
            Suite::ProlongationHomomorphism => "prolongation-homomorphism",
            Suite::ActionLaws => "action-laws",
            Suite::Equivalence => "equivalence",
            Suite::ProjectionTrivialization => "projection-trivialization",
            Suite::InducedRep => "induced-rep",
            Suite::RankTransitivity => "rank-transitivity",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL_SUITES
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| VerifyError::Usage(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    /// Bad example, suite or tolerance key.
    #[error("{0}")]
    Usage(String),
    /// An operation failed while running a suite.
    #[error(transparent)]
    Op(#[from] Error),
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub example: String,
    pub suite: Suite,
    pub samples: usize,
    pub seed: u64,
    pub tolerance_overrides: BTreeMap<String, f64>,
    /// Replace every representation by `2 sigma` (negative control).
    pub corrupt_representation: bool,
    /// Also compare the direct lower-block inverse-action formula.
    pub paper_variant: bool,
    /// Fill `duration_ms`; otherwise it is 0 and reports are byte-stable.
    pub timing: bool,
}

impl VerifyOptions {
    pub fn new(example: impl Into<String>, suite: Suite, samples: usize, seed: u64) -> Self {
        VerifyOptions {
            example: example.into(),
            suite,
            samples,
            seed,
            tolerance_overrides: BTreeMap::new(),
            corrupt_representation: false,
            paper_variant: false,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Pass when `max_residual <= threshold`.
    AtMost,
    /// Pass when `max_residual >= threshold` (nonzero-effect checks).
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
    pub bound: Bound,
}

impl Check {
    pub fn at_most(name: impl Into<String>, max_residual: f64, threshold: f64) -> Self {
        Check { name: name.into(), max_residual, threshold, pass: max_residual <= threshold, bound: Bound::AtMost }
    }

    pub fn at_least(name: impl Into<String>, max_residual: f64, threshold: f64) -> Self {
        Check { name: name.into(), max_residual, threshold, pass: max_residual >= threshold, bound: Bound::AtLeast }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub example: String,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub overall: bool,
    pub duration_ms: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Checks whose name starts with `prefix`.
    pub fn checks_named<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name.starts_with(prefix))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} / {}  samples={} seed={}", self.example, self.suite, self.samples, self.seed);
        for c in &self.checks {
            let op = match c.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            let _ = writeln!(
                out,
                "  {} {:<52} {:>11.3e} {op} {:.0e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.max_residual,
                c.threshold
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        let _ = writeln!(out, "overall: {}", if self.overall { "PASS" } else { "FAIL" });
        out
    }
}

/// Runs the requested suite(s) against one catalog example.
pub fn verify(options: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let started = Instant::now();
    let space = space_by_name(&options.example)
        .map_err(|_| VerifyError::Usage(format!("unknown example `{}`", options.example)))?;
    let mut tolerances: BTreeMap<String, f64> = DEFAULT_TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for (k, v) in &options.tolerance_overrides {
        match tolerances.get_mut(k) {
            Some(slot) => *slot = *v,
            None => return Err(VerifyError::Usage(format!("unknown tolerance key `{k}`"))),
        }
    }
    if options.samples == 0 {
        return Err(VerifyError::Usage("samples must be at least 1".into()));
    }

    let mut run = Runner { space: &space, options, tol: &tolerances, checks: Vec::new(), notes: Vec::new() };
    let suites: Vec<Suite> = match options.suite {
        Suite::All => Suite::ALL_SUITES.to_vec(),
        s => vec![s],
    };
    for suite in &suites {
        match suite {
            Suite::GroupAxioms => run.group_axioms()?,
            Suite::ProlongationHomomorphism => run.prolongation()?,
            Suite::ActionLaws => run.action_laws()?,
            Suite::Equivalence => run.equivalence()?,
            Suite::ProjectionTrivialization => run.projection_trivialization()?,
            Suite::InducedRep => run.induced()?,
            Suite::RankTransitivity => run.rank()?,
            Suite::All => unreachable!(),
        }
    }

    let Runner { checks, notes, .. } = run;
    let overall = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        suite: options.suite.name().to_string(),
        example: space.name().to_string(),
        samples: options.samples,
        seed: options.seed,
        tolerances,
        checks,
        overall,
        duration_ms: if options.timing { started.elapsed().as_millis() as u64 } else { 0 },
        notes,
    })
}

/// FNV-1a of `tag`, mixed into `seed`, so each check draws an independent
/// stream regardless of which other suites run.
fn sub_seed(seed: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    seed ^ h
}

fn max_abs(m: &Matrix) -> f64 {
    if m.is_empty() {
        0.0
    } else {
        m.amax()
    }
}

struct Runner<'a> {
    space: &'a HomogeneousSpace,
    options: &'a VerifyOptions,
    tol: &'a BTreeMap<String, f64>,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Runner<'_> {
    fn t(&self, key: &str) -> f64 {
        self.tol[key]
    }

    fn sampler(&self, tag: &str) -> Sampler {
        Sampler::new(sub_seed(self.options.seed, tag))
    }

    fn samples(&self) -> usize {
        self.options.samples
    }

    fn at_most(&mut self, name: String, residual: f64, key: &str) {
        let threshold = self.t(key);
        self.checks.push(Check::at_most(name, residual, threshold));
    }

    fn representation(&self, id: &str) -> Result<Representation, Error> {
        let rep = Representation::by_id(id, self.space.subgroup())?;
        Ok(if self.options.corrupt_representation { rep.scaled(CORRUPTION_FACTOR) } else { rep })
    }

    fn bundles(&self) -> Result<Vec<ProlongedBundle>, Error> {
        let space = space_by_name(self.space.name())?;
        self.space
            .representations()
            .iter()
            .map(|id| ProlongedBundle::new(space.clone(), self.representation(id)?))
            .collect()
    }

    fn group_axioms(&mut self) -> Result<(), Error> {
        for d in [self.space.big_group().clone(), self.space.subgroup().clone()] {
            let name = d.name().to_string();
            let mut s = self.sampler(&format!("axioms/{name}"));
            let e = StarElement::identity(&d);
            let (mut assoc, mut left_id, mut right_id, mut left_inv, mut right_inv) = (0f64, 0f64, 0f64, 0f64, 0f64);
            let (mut exp_inv, mut ad_hom, mut ad_bracket) = (0f64, 0f64, 0f64);
            for _ in 0..self.samples() {
                let draw = |s: &mut Sampler| -> Result<StarElement, Error> {
                    StarElement::new(s.algebra_element(&d), s.group_element(&d)?)
                };
                let (p, q, r) = (draw(&mut s)?, draw(&mut s)?, draw(&mut s)?);
                let lhs = p.multiply(&q)?.multiply(&r)?;
                let rhs = p.multiply(&q.multiply(&r)?)?;
                assoc = assoc.max(lhs.distance(&rhs));
                left_id = left_id.max(e.multiply(&p)?.distance(&p));
                right_id = right_id.max(p.multiply(&e)?.distance(&p));
                let inv = p.inverse();
                left_inv = left_inv.max(inv.multiply(&p)?.distance(&e));
                right_inv = right_inv.max(p.multiply(&inv)?.distance(&e));

                let x = AlgebraElement::from_coords(&d, s.coords(d.dim(), 5.0))?;
                let n = d.matrix_size();
                let prod = exp(&x)?.compose(&exp(&x.neg())?)?;
                exp_inv = exp_inv.max(max_abs(&(prod.matrix() - Matrix::identity(n, n))));

                let (g1, g2) = (p.g(), q.g());
                let y = r.a();
                let nested = adjoint(g1, &adjoint(g2, y)?)?;
                ad_hom = ad_hom.max(adjoint(&g1.compose(g2)?, y)?.distance(&nested));
                let lhs = adjoint(g1, &bracket(p.a(), y)?)?;
                let rhs = bracket(&adjoint(g1, p.a())?, &adjoint(g1, y)?)?;
                ad_bracket = ad_bracket.max(lhs.distance(&rhs));
            }
            self.at_most(format!("star_associativity[{name}]"), assoc, "star_axioms");
            self.at_most(format!("star_left_identity[{name}]"), left_id, "star_axioms");
            self.at_most(format!("star_right_identity[{name}]"), right_id, "star_axioms");
            self.at_most(format!("star_left_inverse[{name}]"), left_inv, "star_axioms");
            self.at_most(format!("star_right_inverse[{name}]"), right_inv, "star_axioms");
            self.at_most(format!("exp_inverse[{name}]"), exp_inv, "exp_inverse");
            self.at_most(format!("adjoint_homomorphism[{name}]"), ad_hom, "adjoint_laws");
            self.at_most(format!("adjoint_bracket[{name}]"), ad_bracket, "adjoint_laws");
        }
        Ok(())
    }

    fn prolongation(&mut self) -> Result<(), Error> {
        let h_desc = self.space.subgroup().clone();
        for id in self.space.representations() {
            let rep = self.representation(id)?;
            let tag = rep.id().to_string();
            let mut s = self.sampler(&format!("prolong/{tag}"));
            let rep_hom =
                rep.homomorphism_residual(self.samples(), sub_seed(self.options.seed, &format!("rephom/{tag}")))?;
            let (mut hom_a, mut hom_fd, mut paths, mut broken, mut det_rel, mut inv_compat, mut equiv, mut round) =
                (0f64, 0f64, 0f64, 0f64, 0f64, 0f64, 0f64, 0f64);
            let (mut gap_identity, mut gap_generic, mut generic_seen) = (0f64, 0f64, false);
            for _ in 0..self.samples() {
                let k1 = self.space.random_subgroup_element(&mut s)?;
                let k2 = self.space.random_subgroup_element(&mut s)?;
                let k12 = k1.multiply(&k2)?;
                for (path, slot) in
                    [(DifferentialPath::Analytic, &mut hom_a), (DifferentialPath::FiniteDifference, &mut hom_fd)]
                {
                    let lhs = prolong_with(&rep, k12.a(), k12.g(), path)?;
                    let rhs =
                        prolong_with(&rep, k1.a(), k1.g(), path)?.product(&prolong_with(&rep, k2.a(), k2.g(), path)?);
                    *slot = slot.max(max_abs(&(lhs.matrix() - rhs.matrix())));
                }
                let (b, h) = (k1.a(), k1.g());
                let analytic = rep.differential_with(b, DifferentialPath::Analytic)?;
                let numeric = rep.differential_with(b, DifferentialPath::FiniteDifference)?;
                paths = paths.max(max_abs(&(&analytic - numeric)));

                let p = prolong_with(&rep, b, h, DifferentialPath::Analytic)?;
                if !p.block_structure_valid() {
                    broken += 1.0;
                }
                let sd = rep.evaluate(h)?.determinant();
                let expected = sd * sd;
                det_rel = det_rel.max((p.determinant() - expected).abs() / expected.abs().max(f64::MIN_POSITIVE));

                let h_inv = h.inverse();
                let b_inv = adjoint(&h_inv, &b.neg())?;
                let q = prolong_with(&rep, &b_inv, &h_inv, DifferentialPath::Analytic)?;
                let p_inv = p
                    .matrix()
                    .clone()
                    .try_inverse()
                    .unwrap_or_else(|| Matrix::from_element(p.matrix().nrows(), p.matrix().ncols(), f64::NAN));
                inv_compat = inv_compat.max(max_abs(&(p_inv - q.matrix())));

                let sh = rep.evaluate(h)?;
                let sh_inv = rep.evaluate(&h_inv)?;
                let x = s.algebra_element(&h_desc);
                let lhs = rep.differential_with(&adjoint(h, &x)?, DifferentialPath::Analytic)?;
                let rhs = &sh * rep.differential_with(&x, DifferentialPath::Analytic)? * &sh_inv;
                equiv = equiv.max(max_abs(&(lhs - rhs)));

                let v = TangentFiberVector::new(s.coords(rep.fiber_dim(), 2.0), s.coords(rep.fiber_dim(), 2.0))?;
                let w = apply_inverse_action(&rep, b, h, &v)?;
                round = round.max(apply(&p, &w)?.distance(&v));

                if self.options.paper_variant {
                    let e = GroupElement::identity(&h_desc);
                    gap_identity = gap_identity.max(lower_block_discrepancy(&rep, b, &e, &v)?);
                    if max_abs(&(&sh_inv - Matrix::identity(rep.fiber_dim(), rep.fiber_dim()))) > 1e-3 {
                        generic_seen = true;
                        gap_generic = gap_generic.max(lower_block_discrepancy(&rep, b, h, &v)?);
                    }
                }
            }
            self.at_most(format!("rep_homomorphism[{tag}]"), rep_hom, "rep_homomorphism");
            self.at_most(format!("sigma_star_homomorphism_analytic[{tag}]"), hom_a, "homomorphism_analytic");
            self.at_most(format!("sigma_star_homomorphism_fd[{tag}]"), hom_fd, "homomorphism_fd");
            self.at_most(format!("differential_paths_agree[{tag}]"), paths, "differential_paths");
            self.checks.push(Check::at_most(format!("block_structure_violations[{tag}]"), broken, 0.0));
            self.at_most(format!("determinant_relative[{tag}]"), det_rel, "determinant_relative");
            self.at_most(format!("inverse_compatibility[{tag}]"), inv_compat, "inverse_compat");
            self.at_most(format!("differential_equivariance[{tag}]"), equiv, "differential_equivariance");
            self.at_most(format!("inverse_action_round_trip[{tag}]"), round, "inverse_compat");
            if self.options.paper_variant {
                self.checks.push(Check::at_most(format!("lower_block_discrepancy_identity[{tag}]"), gap_identity, 0.0));
                if generic_seen {
                    let threshold = self.t("lower_block_nonzero");
                    self.checks.push(Check::at_least(
                        format!("lower_block_discrepancy_generic[{tag}]"),
                        gap_generic,
                        threshold,
                    ));
                } else {
                    self.notes.push(format!(
                        "lower_block_discrepancy_generic[{tag}] skipped: sigma(h^-1) = I on every sample"
                    ));
                }
            }
        }
        if self.options.paper_variant {
            self.notes.push(
                "paper-variant: compares the block-matrix inverse action with the formula applying the lower block to xi directly".into(),
            );
        }
        Ok(())
    }

    fn action_laws(&mut self) -> Result<(), Error> {
        for bundle in self.bundles()? {
            let tag = bundle.representation().id().to_string();
            let mut s = self.sampler(&format!("action/{tag}"));
            let (mut right, mut id_star, mut id_fiber) = (0f64, 0f64, 0f64);
            let e = StarElement::identity(self.space.subgroup());
            for _ in 0..self.samples() {
                let p = bundle.random_point(&mut s)?;
                let k1 = self.space.random_subgroup_element(&mut s)?;
                let k2 = self.space.random_subgroup_element(&mut s)?;
                let lhs = bundle.prolonged_action(&bundle.prolonged_action(&p, &k1)?, &k2)?;
                let rhs = bundle.prolonged_action(&p, &k1.multiply(&k2)?)?;
                right = right.max(lhs.distance(&rhs));
                let same = bundle.prolonged_action(&p, &e)?;
                id_star = id_star.max(same.star.distance(&p.star));
                id_fiber = id_fiber.max(same.fiber.distance(&p.fiber));
            }
            self.at_most(format!("right_action[{tag}]"), right, "right_action");
            self.checks.push(Check::at_most(format!("right_action_identity_star[{tag}]"), id_star, 0.0));
            self.at_most(format!("right_action_identity_fiber[{tag}]"), id_fiber, "identity_fiber");
        }

        let g = self.space.big_group().clone();
        let mut s = self.sampler("tangent-action");
        let (mut left, mut ident, mut tangency, mut field) = (0f64, 0f64, 0f64, 0f64);
        let e = StarElement::identity(&g);
        for _ in 0..self.samples() {
            let p = self.space.random_star(&mut s)?;
            let q = self.space.random_star(&mut s)?;
            let v = self.space.coset_label(&self.space.random_star(&mut s)?)?;
            let lhs = act_on_tangent(&p, &act_on_tangent(&q, &v)?)?;
            let rhs = act_on_tangent(&p.multiply(&q)?, &v)?;
            left = left.max(lhs.distance(&rhs));
            ident = ident.max(act_on_tangent(&e, &v)?.distance(&v));
            let m = lhs.manifold();
            tangency = tangency.max(m.tangency_residual(lhs.base().coords(), lhs.vec()));

            // fundamental field: d/dt exp(t a) x at 0 against a x
            let a = s.algebra_element(&g);
            let x = v.base().coords();
            let step = 1e-5;
            let fd = (exp(&a.scale(step))?.matrix() * x - exp(&a.scale(-step))?.matrix() * x) / (2.0 * step);
            let exact = a.matrix() * x;
            field = field.max((fd - exact).amax());
        }
        self.at_most("tangent_left_action".into(), left, "left_action");
        self.checks.push(Check::at_most("tangent_identity_action", ident, 0.0));
        self.at_most("tangent_output_tangency".into(), tangency, "tangency");
        self.at_most("fundamental_field_fd".into(), field, "fundamental_field_fd");
        Ok(())
    }

    /// A `G` element leaving the `H`-coset: `exp` of a random algebra
    /// element orthogonal to `Lie(H)` with norm in `[0.5, 2]`.
    fn coset_breaker(&self, s: &mut Sampler) -> Result<GroupElement, Error> {
        let g = self.space.big_group();
        let inc = self.space.inclusion();
        let mut c = s.coords(g.dim(), 1.0);
        for col in inc.column_iter() {
            let dot = col.dot(&c);
            c -= col * dot;
        }
        let norm = c.norm().max(1e-12);
        let c = c * (s.uniform(0.5, 2.0) / norm);
        exp(&AlgebraElement::from_coords(g, c)?)
    }

    fn equivalence(&mut self) -> Result<(), Error> {
        for bundle in self.bundles()? {
            let tag = bundle.representation().id().to_string();
            let mut s = self.sampler(&format!("equivalence/{tag}"));
            let (mut recovery, mut reflexive, mut symmetry, mut transitivity, mut false_positive) =
                (0f64, 0f64, 0f64, 0f64, 0f64);
            let (mut canon_class, mut canon_idem) = (0f64, 0f64);
            let e = StarElement::identity(self.space.subgroup());
            for _ in 0..self.samples() {
                let p = bundle.random_point_in_chart(&mut s)?;
                let k1 = self.space.random_subgroup_element(&mut s)?;
                let k2 = self.space.random_subgroup_element(&mut s)?;
                let q = bundle.prolonged_action(&p, &k1)?;
                let r = bundle.prolonged_action(&q, &k2)?;

                recovery = recovery.max(bundle.are_equivalent(&p, &q).map_or(f64::INFINITY, |w| w.distance(&k1)));
                reflexive = reflexive.max(bundle.are_equivalent(&p, &p).map_or(f64::INFINITY, |w| w.distance(&e)));

                let back = bundle.prolonged_action(&q, &k1.inverse())?;
                let found = bundle.are_equivalent(&q, &p).map_or(f64::INFINITY, |w| w.distance(&k1.inverse()));
                symmetry = symmetry.max(back.distance(&p)).max(found);

                let composed = bundle.prolonged_action(&p, &k1.multiply(&k2)?)?;
                let found = bundle.are_equivalent(&p, &r).map_or(f64::INFINITY, |w| {
                    // any witness must reproduce r
                    bundle.prolonged_action(&p, &w).map_or(f64::INFINITY, |x| x.distance(&r))
                });
                transitivity = transitivity.max(composed.distance(&r)).max(found);

                let breaker = self.coset_breaker(&mut s)?;
                let broken_star = StarElement::new(q.star.a().clone(), q.star.g().compose(&breaker)?)?;
                let broken = BundlePoint::new(broken_star, q.fiber.clone());
                if bundle.are_equivalent(&p, &broken).is_some() {
                    false_positive += 1.0;
                }

                let c1 = bundle.canonicalize(&p)?;
                let c2 = bundle.canonicalize(&q)?;
                canon_class = canon_class.max(c1.distance(&c2));
                canon_idem = canon_idem.max(bundle.canonicalize(&c1)?.distance(&c1));
            }
            self.at_most(format!("witness_recovery[{tag}]"), recovery, "witness_recovery");
            self.at_most(format!("reflexivity[{tag}]"), reflexive, "equivalence");
            self.at_most(format!("symmetry[{tag}]"), symmetry, "equivalence");
            self.at_most(format!("transitivity[{tag}]"), transitivity, "equivalence");
            self.checks.push(Check::at_most(format!("coset_breaking_false_positives[{tag}]"), false_positive, 0.0));
            self.at_most(format!("canonical_class_invariance[{tag}]"), canon_class, "equivalence");
            self.at_most(format!("canonical_idempotence[{tag}]"), canon_idem, "equivalence");
        }
        Ok(())
    }

    fn projection_trivialization(&mut self) -> Result<(), Error> {
        let separation = self.t("injectivity_separation");
        for bundle in self.bundles()? {
            let tag = bundle.representation().id().to_string();
            let mut s = self.sampler(&format!("trivialization/{tag}"));
            let (mut proj, mut triv, mut linear, mut collisions, mut at_section) = (0f64, 0f64, 0f64, 0f64, 0f64);
            for _ in 0..self.samples() {
                let p = bundle.random_point_in_chart(&mut s)?;
                let k = self.space.random_subgroup_element(&mut s)?;
                let q = bundle.prolonged_action(&p, &k)?;
                proj = proj.max(bundle.bundle_projection(&p)?.distance(&bundle.bundle_projection(&q)?));

                let (xp, vp) = bundle.local_trivialization(&p)?;
                let (xq, vq) = bundle.local_trivialization(&q)?;
                triv = triv.max(xp.distance(&xq)).max(vp.distance(&vq));

                let f2 = bundle.random_fiber(&mut s);
                let sum = p.fiber.linear_combination(1.0, &f2, 1.0)?;
                let (_, v2) = bundle.local_trivialization(&BundlePoint::new(p.star.clone(), f2))?;
                let (_, vsum) = bundle.local_trivialization(&BundlePoint::new(p.star.clone(), sum))?;
                linear = linear.max(vsum.distance(&vp.linear_combination(1.0, &v2, 1.0)?));

                // distinct classes: an independent point, and a fiber nudge
                let other = bundle.random_point_in_chart(&mut s)?;
                let mut nudged = p.clone();
                nudged.fiber.u[0] += 10.0 * separation;
                for r in [other, nudged] {
                    let (c1, c2) = (bundle.canonicalize(&p)?, bundle.canonicalize(&r)?);
                    if c1.distance(&c2) > separation {
                        let (xr, vr) = bundle.local_trivialization(&r)?;
                        if xr.distance(&xp).max(vr.distance(&vp)) <= separation {
                            collisions += 1.0;
                        }
                    }
                }

                let section = self.space.section(&xp)?;
                let (x0, v0) = bundle.local_trivialization(&BundlePoint::new(section, p.fiber.clone()))?;
                at_section = at_section.max(x0.distance(&xp)).max(v0.distance(&p.fiber));
            }
            self.at_most(format!("projection_class_invariance[{tag}]"), proj, "projection");
            self.at_most(format!("trivialization_class_invariance[{tag}]"), triv, "projection");
            self.at_most(format!("trivialization_fiber_linearity[{tag}]"), linear, "trivialization_linearity");
            self.checks.push(Check::at_most(format!("trivialization_injectivity_collisions[{tag}]"), collisions, 0.0));
            self.at_most(format!("trivialization_at_section[{tag}]"), at_section, "trivialization_linearity");
        }
        Ok(())
    }

    fn induced(&mut self) -> Result<(), Error> {
        let trials = self.samples().clamp(1, 10);
        for bundle in self.bundles()? {
            let tag = bundle.representation().id().to_string();
            let seed = sub_seed(self.options.seed, &format!("induced/{tag}"));
            let mut s = Sampler::new(seed);
            let section = SampledEquivariantSection::catalog(bundle.clone(), seed)?;
            let star_section = SampledStarSection::catalog(bundle.clone(), seed)?;
            let other = rho_apply(&s.group_element(self.space.big_group())?, &section)?;
            let star_other = rho_star_apply(&self.space.random_star(&mut s)?, &star_section)?;

            let base_eq = equivariance_residual(&section, 2, seed)?;
            let star_base_eq = star_equivariance_residual(&star_section, 2, seed)?;
            let identity = rho_apply(&GroupElement::identity(self.space.big_group()), &section)?.max_distance(&section);
            let star_identity = rho_star_apply(&StarElement::identity(self.space.big_group()), &star_section)?
                .max_distance(&star_section);

            let (mut comp, mut preserve, mut linear) = (0f64, 0f64, 0f64);
            let (mut star_comp, mut star_preserve, mut star_linear) = (0f64, 0f64, 0f64);
            for t in 0..trials {
                let g1 = s.group_element(self.space.big_group())?;
                let g2 = s.group_element(self.space.big_group())?;
                let lhs = rho_apply(&g1.compose(&g2)?, &section)?;
                let rhs = rho_apply(&g1, &rho_apply(&g2, &section)?)?;
                comp = comp.max(lhs.max_distance(&rhs));
                let moved = rho_apply(&g1, &section)?;
                preserve = preserve.max(equivariance_residual(&moved, 1, seed ^ t as u64)? - base_eq);
                let (alpha, beta) = (s.uniform(-2.0, 2.0), s.uniform(-2.0, 2.0));
                let lhs = rho_apply(&g1, &section.linear_combination(alpha, &other, beta)?)?;
                let rhs = moved.linear_combination(alpha, &rho_apply(&g1, &other)?, beta)?;
                linear = linear.max(lhs.max_distance(&rhs));

                let w1 = self.space.random_star(&mut s)?;
                let w2 = self.space.random_star(&mut s)?;
                let lhs = rho_star_apply(&w1.multiply(&w2)?, &star_section)?;
                let rhs = rho_star_apply(&w1, &rho_star_apply(&w2, &star_section)?)?;
                star_comp = star_comp.max(lhs.max_distance(&rhs));
                let moved = rho_star_apply(&w1, &star_section)?;
                star_preserve =
                    star_preserve.max(star_equivariance_residual(&moved, 1, seed ^ t as u64)? - star_base_eq);
                let lhs = rho_star_apply(&w1, &star_section.linear_combination(alpha, &star_other, beta)?)?;
                let rhs = moved.linear_combination(alpha, &rho_star_apply(&w1, &star_other)?, beta)?;
                star_linear = star_linear.max(lhs.max_distance(&rhs));
            }
            self.checks.push(Check::at_most(format!("rho_identity[{tag}]"), identity, 0.0));
            self.at_most(format!("rho_composition[{tag}]"), comp, "induced_rep");
            self.at_most(format!("section_equivariance[{tag}]"), base_eq, "equivariance");
            self.at_most(format!("rho_preserves_equivariance[{tag}]"), preserve.max(0.0), "equivariance");
            self.at_most(format!("rho_linearity[{tag}]"), linear, "induced_linearity");
            self.checks.push(Check::at_most(format!("rho_star_identity[{tag}]"), star_identity, 0.0));
            self.at_most(format!("rho_star_composition[{tag}]"), star_comp, "induced_rep");
            self.at_most(format!("star_section_equivariance[{tag}]"), star_base_eq, "equivariance");
            self.at_most(format!("rho_star_preserves_equivariance[{tag}]"), star_preserve.max(0.0), "equivariance");
            self.at_most(format!("rho_star_linearity[{tag}]"), star_linear, "induced_linearity");
        }
        self.notes.push(
            "rho_star: interpreted as G* acting by left translation on sigma*-equivariant functions G* -> TF".into(),
        );
        Ok(())
    }

    fn rank(&mut self) -> Result<(), Error> {
        let g = self.space.big_group().clone();
        let h = self.space.subgroup().clone();
        let expected = 2 * (g.dim() - h.dim());
        let mut s = self.sampler("rank");
        let mut worst = 0usize;
        let mut vectors = vec![self.space.identity_label()];
        for _ in 0..self.samples() {
            vectors.push(self.space.coset_label(&self.space.random_star(&mut s)?)?);
        }
        for v in &vectors {
            let rank = infinitesimal_rank(v, &g, RANK_FD_STEP)?;
            worst = worst.max(rank.abs_diff(expected));
        }
        self.checks.push(Check::at_most("infinitesimal_rank_deficit", worst as f64, 0.0));

        let dim_star = |d: &std::sync::Arc<GroupDescriptor>| -> Result<usize, Error> {
            Ok(infinitesimal_jacobian(&self.space.identity_label(), d, RANK_FD_STEP)?.ncols())
        };
        let (star_g, star_h) = (dim_star(&g)?, 2 * h.dim());
        let gap = (star_g as i64 - star_h as i64) - 2 * (g.dim() as i64 - h.dim() as i64);
        self.checks.push(Check::at_most("dimension_identity", gap.unsigned_abs() as f64, 0.0));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL_SUITES.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn usage_errors() {
        let mut o = VerifyOptions::new("torus", Suite::GroupAxioms, 5, 1);
        assert!(matches!(verify(&o), Err(VerifyError::Usage(_))));
        o.example = "circle".into();
        o.tolerance_overrides.insert("nope".into(), 1.0);
        assert!(matches!(verify(&o), Err(VerifyError::Usage(_))));
        o.tolerance_overrides.clear();
        o.samples = 0;
        assert!(matches!(verify(&o), Err(VerifyError::Usage(_))));
    }

    #[test]
    fn overall_is_conjunction() {
        let mut o = VerifyOptions::new("circle", Suite::GroupAxioms, 5, 1);
        o.tolerance_overrides.insert("star_axioms".into(), -1.0);
        let r = verify(&o).unwrap();
        assert!(!r.overall);
        assert!(r.checks.iter().any(|c| !c.pass));
        assert_eq!(r.tolerances["star_axioms"], -1.0);
    }

    #[test]
    fn reports_are_deterministic() {
        let o = VerifyOptions::new("sphere", Suite::All, 4, 9);
        let a = verify(&o).unwrap().to_json();
        let b = verify(&o).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn suite_results_do_not_depend_on_neighbours() {
        let single = verify(&VerifyOptions::new("euclidean", Suite::Equivalence, 5, 3)).unwrap();
        let all = verify(&VerifyOptions::new("euclidean", Suite::All, 5, 3)).unwrap();
        for c in &single.checks {
            assert_eq!(all.check(&c.name), Some(c));
        }
    }
}
