//! Deterministic partition constructions.
//!
//! Each operation here builds an interval partition by explicit rewrite
//! rules and then verifies the result on a freshly built poset, checking the
//! bound it is supposed to achieve. A construction that cannot verify its
//! own output returns an error instead of degrading — the constructions are
//! executable proofs of the lower bounds they implement.
//!
//! * [`lem_lift`] / [`rem_lift`] — private-variable lifts that raise the
//!   partition depth (resp. upper-discrete degree) by exactly one;
//! * [`ci_partition`] — optimal witnesses for squarefree complete
//!   intersections, built by lifting a searched base partition;
//! * [`boolean_upper_discrete`] / [`upper_discrete_refine`] — upper-discrete
//!   partitions of the full subset lattice and degree-`k` refinements of
//!   arbitrary verified partitions;
//! * [`GeneratorTriple`], [`step0_extend`], [`step_private_extend`],
//!   [`three_gen_partition`] — the 3-generator pipeline proving depth at
//!   least `n - 1`;
//! * [`split_ideal`], [`compose_split`], [`four_gen_partition`] — the
//!   4-generator recursion proving depth at least `n - 2`.

mod ci;
mod engine;
mod four_gen;
mod lifts;
mod three_gen;
mod upper_discrete;

pub use ci::ci_partition;
pub use four_gen::{compose_split, four_gen_partition, split_ideal};
pub use lifts::{lem_lift, rem_lift, LiftInstruction, LiftKind};
pub use three_gen::{
    parse_generator_triple, step0_extend, step_private_extend, three_gen_partition,
    GeneratorTriple,
};
pub use upper_discrete::{boolean_upper_discrete, upper_discrete_refine};

use thiserror::Error;

use crate::ideal::{Exponent, IdealError, MonomialIdeal};
use crate::poset::{
    CharacteristicPoset, Interval, IntervalPartition, PosetError, Violation,
};

use engine::MaskIv;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("ideal is not squarefree")]
    NotSquarefree,
    #[error("not a complete intersection")]
    NotCompleteIntersection,
    #[error("expected {expected} minimal generators, found {found}")]
    WrongGeneratorCount { expected: &'static str, found: usize },
    #[error("pivot x{pivot} must appear in exactly one generator")]
    BadPivot { pivot: usize },
    #[error("appended variable must be x{expected}, the first unused index")]
    BadAppended { expected: usize },
    #[error("degree {k} out of range 0..={max}")]
    DegreeOutOfRange { k: usize, max: usize },
    #[error("partition does not belong to the given ideal's poset")]
    IdealMismatch,
    #[error("input partition does not verify: {0}")]
    InputUnverified(Violation),
    #[error("input partition is not upper-discrete of degree {k}")]
    NotUpperDiscrete { k: usize },
    #[error("every variable must appear in some generator; x{var} does not")]
    NormalizationRequired { var: usize },
    #[error("generators do not have the required shape: {0}")]
    Shape(String),
    #[error("{what} produced an invalid partition: {detail}")]
    Postcondition { what: &'static str, detail: String },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Search(#[from] crate::search::SdepthError),
}

/// Bound a finished construction must meet, checked loudly.
#[derive(Clone, Copy, Debug)]
pub(crate) enum MinRho {
    AtLeast(usize),
    Exactly(usize),
}

/// Build the partition over the ideal's default poset and verify it.
pub(crate) fn assemble(
    ideal: &MonomialIdeal,
    ivs: Vec<MaskIv>,
    what: &'static str,
) -> Result<IntervalPartition, ConstructionError> {
    let n = ideal.ambient();
    let poset = CharacteristicPoset::build(ideal, None)?;
    let intervals = ivs
        .into_iter()
        .map(|iv| {
            Interval::new(Exponent::from_mask(iv.lo, n), Exponent::from_mask(iv.hi, n))
                .with_rule(iv.rule)
        })
        .collect();
    let part = IntervalPartition::new(poset, intervals);
    if let Err(v) = part.verify() {
        return Err(ConstructionError::Postcondition { what, detail: v.to_string() });
    }
    Ok(part)
}

pub(crate) fn require_min_rho(
    part: &IntervalPartition,
    bound: MinRho,
    what: &'static str,
) -> Result<(), ConstructionError> {
    let got = part.min_rho();
    let ok = match bound {
        MinRho::AtLeast(b) => got >= b,
        MinRho::Exactly(b) => got == b,
    };
    if !ok {
        return Err(ConstructionError::Postcondition {
            what,
            detail: format!("minimum rho {got} does not meet {bound:?}"),
        });
    }
    Ok(())
}

pub(crate) fn require_upper_discrete(
    part: &IntervalPartition,
    k: usize,
    what: &'static str,
) -> Result<(), ConstructionError> {
    let ok = part
        .is_upper_discrete(k)
        .map_err(|e| ConstructionError::Postcondition { what, detail: e.to_string() })?;
    if !ok {
        return Err(ConstructionError::Postcondition {
            what,
            detail: format!("result is not upper-discrete of degree {k}"),
        });
    }
    Ok(())
}

/// The partition must sit on the squarefree default poset of `ideal`.
pub(crate) fn check_same_ideal(
    part: &IntervalPartition,
    ideal: &MonomialIdeal,
) -> Result<(), ConstructionError> {
    if !part.poset().is_squarefree() || part.poset().ideal() != ideal {
        return Err(ConstructionError::IdealMismatch);
    }
    Ok(())
}

pub(crate) fn check_verified(part: &IntervalPartition) -> Result<(), ConstructionError> {
    part.verify().map_err(ConstructionError::InputUnverified)
}

/// Intervals of a squarefree partition as mask pairs, in order.
pub(crate) fn masks_of(part: &IntervalPartition) -> Vec<MaskIv> {
    part.intervals()
        .iter()
        .map(|iv| MaskIv::new(iv.lo().support_mask(), iv.hi().support_mask(), "input"))
        .collect()
}
