#![allow(dead_code)]

use std::sync::Arc;

use crdiam_core::complexes::Window;
use crdiam_core::polyring::QuotientRing;
use crdiam_core::resolve::{complete_resolution, random_presentation, CompleteResolutionBundle, ModulePresentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SIZE: usize = 20;
pub const CORPUS_WINDOW: Window = Window { lo: -10, hi: 10 };

pub fn ring(p: u32, n: usize, gens: &[&str]) -> Arc<QuotientRing> {
    Arc::new(QuotientRing::from_strings(p, n, gens).unwrap())
}

pub fn example_ring() -> Arc<QuotientRing> {
    ring(2, 2, &["x^2", "y^2"])
}

pub fn second_ring() -> Arc<QuotientRing> {
    ring(3, 2, &["x^2", "y^3"])
}

/// Seeded random modules whose complete resolution on `window` is nonzero.
pub fn corpus(r: &Arc<QuotientRing>, seed: u64, size: usize, window: Window) -> Vec<(ModulePresentation, CompleteResolutionBundle)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < size {
        let b = rng.gen_range(1..=3);
        let a = rng.gen_range(1..=3);
        let m = random_presentation(r.clone(), b, a, 0.4, &mut rng);
        if let Ok(bundle) = complete_resolution(&m, window) {
            if !bundle.complex.is_zero() {
                out.push((m, bundle));
            }
        }
    }
    out
}

pub fn both_corpora(window: Window) -> Vec<(ModulePresentation, CompleteResolutionBundle)> {
    let mut v = corpus(&example_ring(), 11, CORPUS_SIZE, window);
    v.extend(corpus(&second_ring(), 23, CORPUS_SIZE, window));
    v
}
