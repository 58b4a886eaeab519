//! Prolongations of homogeneous vector bundles over matrix Lie groups.
//!
//! The crate builds, bottom-up:
//!
//! * [`lie`]: matrix Lie groups, their algebras, `exp`, `Ad` and brackets;
//! * [`representation`]: finite-dimensional representations and their
//!   differential at the identity;
//! * [`star`]: the semidirect product `G* = Lie(G) x| G`, its identification
//!   with `TG`, and its action on tangent bundles of embedded spaces;
//! * [`prolongation`]: the block lower-triangular representation of `H*`
//!   on `TF = F x F`;
//! * [`bundle`]: the prolonged bundle `G* x_{H*} TF` with its equivalence
//!   decision, projection and local trivialization;
//! * [`sections`]: induced representations on sampled equivariant sections;
//! * [`verify`] and [`compute`]: the engines behind the `prolong` CLI.
//!
//! ```
//! use prolong_core::{ProlongedBundle, Sampler};
//!
//! let bundle = ProlongedBundle::from_catalog("sphere", None)?;
//! let mut s = Sampler::new(7);
//! let p = bundle.random_point_in_chart(&mut s)?;
//! let k = bundle.space().random_subgroup_element(&mut s)?;
//! let q = bundle.prolonged_action(&p, &k)?;
//! let witness = bundle.are_equivalent(&p, &q).expect("same class");
//! assert!(witness.distance(&k) < 1e-9);
//! # Ok::<(), prolong_core::Error>(())
//! ```

pub mod bundle;
pub mod compute;
pub mod error;
pub mod json;
pub mod lie;
pub mod prolongation;
pub mod representation;
pub mod sections;
pub mod star;
pub mod verify;

pub use bundle::{
    catalog, space_by_name, BundlePoint, CosetLabel, HomogeneousSpace, ProlongedBundle, SpaceKind,
    EQUIVALENCE_TOLERANCE,
};
pub use error::{Error, Result};
pub use lie::{
    adjoint, bracket, exp, random_group_element, to_coords, AlgebraElement, GroupDescriptor, GroupElement, Matrix,
    Sampler, Vector,
};
pub use prolongation::{
    apply, apply_inverse_action, direct_lower_block_inverse_action, prolong, ProlongedMatrix, TangentFiberVector,
};
pub use representation::{DifferentialPath, Representation};
pub use sections::{SampledEquivariantSection, SampledStarSection};
pub use star::{
    act_on_tangent, infinitesimal_rank, star_inverse, star_multiply, theta, theta_inverse, EmbeddedManifold,
    EmbeddedManifoldPoint, EmbeddedTangentVector, GroupTangent, StarElement,
};
pub use verify::{verify, Check, Suite, VerificationReport, VerifyError, VerifyOptions};
