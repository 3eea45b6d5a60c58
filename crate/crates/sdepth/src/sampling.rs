//! Seeded random ideals and random verified partitions.
//!
//! Callers own the RNG (the CLI and the self-test suite use ChaCha8 with a
//! fixed seed and one stream per instance), so every sample is reproducible
//! across runs and platforms.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::ideal::{Exponent, MonomialIdeal, MAX_SUBSET_VARS};
use crate::poset::{for_each_in_box, CharacteristicPoset, Interval, IntervalPartition};

const SAMPLE_ATTEMPTS: usize = 10_000;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("cannot sample {m} distinct minimal generators over {n} variables")]
    Infeasible { n: usize, m: usize },
    #[error("no admissible sample of {m} generators over {n} variables in {SAMPLE_ATTEMPTS} attempts")]
    Exhausted { n: usize, m: usize },
}

/// A squarefree ideal with exactly `m` minimal generators over `n`
/// variables, every variable appearing in some generator. Samples `m`
/// distinct nonempty subsets and retries until the minimalized set still has
/// `m` generators and full support.
pub fn random_ideal(
    n: usize,
    m: usize,
    rng: &mut impl Rng,
) -> Result<MonomialIdeal, SampleError> {
    if n == 0 || n > MAX_SUBSET_VARS || m == 0 || m as u64 > (1u64 << n) - 1 {
        return Err(SampleError::Infeasible { n, m });
    }
    let full = (1u64 << n) - 1;
    for _ in 0..SAMPLE_ATTEMPTS {
        let mut masks: Vec<u64> = Vec::with_capacity(m);
        while masks.len() < m {
            let candidate = rng.gen_range(1..=full);
            if !masks.contains(&candidate) {
                masks.push(candidate);
            }
        }
        let gens = masks.iter().map(|&g| Exponent::from_mask(g, n)).collect();
        let ideal = MonomialIdeal::new(n, gens).expect("nonzero squarefree generators");
        let support = ideal.lcm_exponent().support_mask();
        if ideal.num_generators() == m && support == full {
            return Ok(ideal);
        }
    }
    Err(SampleError::Exhausted { n, m })
}

/// A uniformly sloppy verified partition: repeatedly take the least
/// uncovered element and pick an admissible interval top at random. Always
/// terminates because a singleton is always admissible.
pub fn random_partition(
    poset: &Arc<CharacteristicPoset>,
    rng: &mut impl Rng,
) -> IntervalPartition {
    let mut covered = vec![false; poset.len()];
    let mut intervals = Vec::new();
    let g = poset.bound().coords();
    let weights = poset.weights();
    loop {
        let lo_idx = match covered.iter().position(|&c| !c) {
            None => break,
            Some(i) => i,
        };
        let lo = poset.element(lo_idx);
        let mut tops: Vec<u64> = Vec::new();
        for_each_in_box(lo.coords(), g, weights, |code| {
            tops.push(code);
            true
        });
        tops.retain(|&top| {
            let hi = poset.decode(top);
            for_each_in_box(lo.coords(), hi.coords(), weights, |code| {
                !covered[poset.index_of_code(code).expect("box inside up-set") as usize]
            })
        });
        let hi = poset.decode(tops[rng.gen_range(0..tops.len())]);
        for_each_in_box(lo.coords(), hi.coords(), weights, |code| {
            covered[poset.index_of_code(code).expect("box inside up-set") as usize] = true;
            true
        });
        intervals.push(Interval::new(lo, hi).with_rule("random"));
    }
    let part = IntervalPartition::new(Arc::clone(poset), intervals);
    debug_assert!(part.verify().is_ok());
    part
}
