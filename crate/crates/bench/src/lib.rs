//! Fixtures shared by the kernel benchmarks.

use sspace_core::catalog::{self, CatalogEntry};
use sspace_core::rng::seeded;
use sspace_core::{Rng, Vector};

pub fn entry(name: &str) -> CatalogEntry {
    catalog::entry(name).expect("catalog instance")
}

/// `count` sample points of `e`, drawn from a fixed seed.
pub fn points(e: &CatalogEntry, count: usize) -> Vec<Vector> {
    let mut rng: Rng = seeded(7);
    (0..count).map(|_| e.sspace.sample_point(&mut rng)).collect()
}
