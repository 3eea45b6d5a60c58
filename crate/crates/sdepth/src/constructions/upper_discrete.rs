//! Upper-discrete partitions: every interval top has size at least `k`, and
//! intervals topping out above `k` are singletons.

use crate::ideal::MonomialIdeal;
use crate::poset::IntervalPartition;

use super::{
    assemble, check_same_ideal, check_verified, engine, require_upper_discrete,
    ConstructionError,
};

/// Upper-discrete partition of degree `k` of the full subset lattice on `n`
/// variables (the poset of the unit ideal, empty set included).
pub fn boolean_upper_discrete(
    n: usize,
    k: usize,
) -> Result<IntervalPartition, ConstructionError> {
    if k > n {
        return Err(ConstructionError::DegreeOutOfRange { k, max: n });
    }
    let positions: Vec<u32> = (0..n as u32).collect();
    let ivs = engine::boolean_ud(&positions, k);
    let part = assemble(&MonomialIdeal::unit(n), ivs, "boolean_upper_discrete")?;
    require_upper_discrete(&part, k, "boolean_upper_discrete")?;
    Ok(part)
}

/// Refine a verified partition into an upper-discrete one of degree
/// `k <= partition depth`, covering exactly the same elements: each interval
/// `[c, d]` is replaced by the image of an upper-discrete partition of the
/// free cube `d \ c` at degree `k - |c|` (degree 0 when `|c| >= k`).
pub fn upper_discrete_refine(
    ideal: &MonomialIdeal,
    part: &IntervalPartition,
    k: usize,
) -> Result<IntervalPartition, ConstructionError> {
    if !ideal.is_squarefree() {
        return Err(ConstructionError::NotSquarefree);
    }
    check_same_ideal(part, ideal)?;
    check_verified(part)?;
    let depth = part.min_rho();
    if k > depth {
        return Err(ConstructionError::DegreeOutOfRange { k, max: depth });
    }

    let mut out = Vec::new();
    for iv in part.intervals() {
        let lo = iv.lo().support_mask();
        let hi = iv.hi().support_mask();
        let free: Vec<u32> = (0..64u32)
            .filter(|b| (hi >> b) & 1 == 1 && (lo >> b) & 1 == 0)
            .collect();
        let base = lo.count_ones() as usize;
        let degree = k.saturating_sub(base);
        debug_assert!(degree <= free.len(), "degree above the free cube dimension");
        out.extend(
            engine::boolean_ud(&free, degree)
                .into_iter()
                .map(|sub| engine::MaskIv::new(sub.lo | lo, sub.hi | lo, sub.rule)),
        );
    }
    let refined = assemble(ideal, out, "upper_discrete_refine")?;
    require_upper_discrete(&refined, k, "upper_discrete_refine")?;
    Ok(refined)
}
