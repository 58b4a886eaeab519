use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{exp, AlgebraElement, GroupDescriptor, GroupElement, Vector};
use crate::error::Result;

/// Bound on algebra coordinates drawn by the sampler.
pub const SAMPLE_COORD_BOUND: f64 = 2.0;

/// Seeded source of random algebra and group elements.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..=hi)
    }

    /// Vector with entries uniform in `[-bound, bound]`.
    pub fn coords(&mut self, len: usize, bound: f64) -> Vector {
        Vector::from_iterator(len, (0..len).map(|_| self.uniform(-bound, bound)))
    }

    pub fn next_seed(&mut self) -> u64 {
        self.rng.random()
    }

    pub fn algebra_element(&mut self, d: &Arc<GroupDescriptor>) -> AlgebraElement {
        let c = self.coords(d.dim(), SAMPLE_COORD_BOUND);
        AlgebraElement::from_coords_unchecked(d.clone(), c)
    }

    /// `exp` of a random algebra element with coordinates in `[-2, 2]`.
    pub fn group_element(&mut self, d: &Arc<GroupDescriptor>) -> Result<GroupElement> {
        exp(&self.algebra_element(d))
    }
}

/// Deterministic random group element for `seed`.
pub fn random_group_element(d: &Arc<GroupDescriptor>, seed: u64) -> Result<GroupElement> {
    Sampler::new(seed).group_element(d)
}
