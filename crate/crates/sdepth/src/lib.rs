//! Stanley depth of monomial ideals.
//!
//! A Stanley decomposition of a monomial ideal corresponds to a partition of
//! its characteristic poset into intervals, and the depth of the
//! decomposition is the minimum number of free directions over the interval
//! tops. This crate provides:
//!
//! * [`ideal`] — monomials, minimal generating sets, radicals, support
//!   classifications, and parsing of the compact/JSON ideal formats;
//! * [`poset`] — the characteristic poset, interval partitions, and the
//!   partition verifier;
//! * [`search`] — an exact solver (complete backtracking over interval
//!   partitions) and an independent brute-force oracle for tiny posets;
//! * [`constructions`] — deterministic partition constructions: private
//!   variable lifts, complete-intersection witnesses, upper-discrete
//!   refinements, and the 3/4-generator lower-bound pipelines, each of which
//!   verifies its own output;
//! * [`witness`] — JSON (de)serialization of partitions as witness files;
//! * [`sampling`] — seeded random ideals and partitions;
//! * [`acceptance`] — the self-test suite exercised by `cargo test` and the
//!   CLI.

pub mod acceptance;
pub mod constructions;
pub mod ideal;
pub mod poset;
pub mod sampling;
pub mod search;
pub mod witness;

pub use ideal::{parse_ideal, Exponent, MonomialIdeal, Subset};
pub use poset::{CharacteristicPoset, Interval, IntervalPartition, Violation, ViolationKind};
pub use search::{
    brute_force_sdepth, has_partition_min_rho, sdepth_exact, SdepthResult, SearchConfig,
    SearchOutcome,
};
