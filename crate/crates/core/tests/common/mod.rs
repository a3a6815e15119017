#![allow(dead_code)]

use enso_core::{dtm, CoupledParams, DelayedParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Coupled parameters uniform in [-2, 2], ε uniform in (0.01, 1).
pub fn coupled(rng: &mut ChaCha8Rng) -> CoupledParams {
    CoupledParams::new(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(0.01..1.0),
    )
    .unwrap()
}

/// Delayed parameters drawn like `coupled`, redrawn while `|1 - βσ| < 0.5`
/// or while the order-`order` transform overflows.
pub fn delayed(rng: &mut ChaCha8Rng, order: usize) -> DelayedParams {
    loop {
        let p = DelayedParams::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.01..1.0),
        );
        let Ok(p) = p else { continue };
        if (1.0 - p.beta * p.sigma).abs() < 0.5 {
            continue;
        }
        if dtm::transform_delayed(&p, order).is_ok() {
            return p;
        }
    }
}

pub fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}
