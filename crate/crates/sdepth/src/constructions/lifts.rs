//! Private-variable lifts: append a fresh variable to the one generator that
//! owns the pivot variable, and rewrite a partition of the old poset into a
//! partition of the new one.

use crate::ideal::{Exponent, MonomialIdeal};
use crate::poset::IntervalPartition;

use super::{
    check_same_ideal, check_verified, engine, masks_of, require_min_rho,
    require_upper_discrete, ConstructionError, MinRho,
};

/// How a lift changed the generators: which rule family, which variable was
/// appended, to which generators. `degree` is carried by the degree-aware
/// lifts only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftInstruction {
    pub kind: LiftKind,
    pub appended: usize,
    pub targets: Vec<usize>,
    pub degree: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftKind {
    Lem,
    Rem,
    Step0,
    Step1,
    Step2,
    Step3,
}

impl LiftInstruction {
    /// The appended variable must be the first unused index.
    pub(crate) fn validated(
        kind: LiftKind,
        appended: usize,
        targets: Vec<usize>,
        degree: Option<usize>,
        used: usize,
    ) -> Result<Self, ConstructionError> {
        if appended != used + 1 {
            return Err(ConstructionError::BadAppended { expected: used + 1 });
        }
        Ok(LiftInstruction { kind, appended, targets, degree })
    }
}

/// Index (0-based) of the unique generator whose support contains `pivot`.
fn pivot_owner(ideal: &MonomialIdeal, pivot: usize) -> Result<usize, ConstructionError> {
    if pivot < 1 || pivot > ideal.ambient() {
        return Err(ConstructionError::BadPivot { pivot });
    }
    let holders: Vec<usize> = ideal
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.get(pivot) > 0)
        .map(|(i, _)| i)
        .collect();
    match holders.as_slice() {
        [one] => Ok(*one),
        _ => Err(ConstructionError::BadPivot { pivot }),
    }
}

/// `ideal` with variable `n + 1` appended to generator `owner`.
fn append_to_generator(ideal: &MonomialIdeal, owner: usize) -> MonomialIdeal {
    let n = ideal.ambient();
    let gens = ideal
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut coords = g.coords().to_vec();
            coords.push(if i == owner { 1 } else { 0 });
            Exponent::new(coords)
        })
        .collect();
    MonomialIdeal::new(n + 1, gens).expect("appending a fresh variable keeps the antichain")
}

/// Lift a verified partition along a private-variable extension.
///
/// `pivot` must occur in exactly one generator of the squarefree `ideal`;
/// the returned partition lives on the poset of the ideal where `x_{n+1}`
/// joins that generator, and its depth exceeds the input's by exactly one.
pub fn lem_lift(
    ideal: &MonomialIdeal,
    part: &IntervalPartition,
    pivot: usize,
    appended: usize,
) -> Result<IntervalPartition, ConstructionError> {
    if !ideal.is_squarefree() {
        return Err(ConstructionError::NotSquarefree);
    }
    let owner = pivot_owner(ideal, pivot)?;
    LiftInstruction::validated(LiftKind::Lem, appended, vec![owner + 1], None, ideal.ambient())?;
    check_same_ideal(part, ideal)?;
    check_verified(part)?;

    let lifted = append_to_generator(ideal, owner);
    let out = engine::lem_rules(&masks_of(part), 1 << (pivot - 1), 1 << (appended - 1));
    let result = assemble_lift(&lifted, out, "lem_lift")?;
    require_min_rho(&result, MinRho::Exactly(part.min_rho() + 1), "lem_lift")?;
    Ok(result)
}

/// Degree-aware lift for upper-discrete partitions of complete
/// intersections: the input must be upper-discrete of degree `k`, and the
/// output is an upper-discrete partition of degree `k + 1` of the extended
/// ideal's poset.
pub fn rem_lift(
    ideal: &MonomialIdeal,
    part: &IntervalPartition,
    k: usize,
    pivot: usize,
    appended: usize,
) -> Result<IntervalPartition, ConstructionError> {
    if !ideal.is_squarefree() {
        return Err(ConstructionError::NotSquarefree);
    }
    if !ideal.is_complete_intersection() {
        return Err(ConstructionError::NotCompleteIntersection);
    }
    let owner = pivot_owner(ideal, pivot)?;
    LiftInstruction::validated(
        LiftKind::Rem,
        appended,
        vec![owner + 1],
        Some(k),
        ideal.ambient(),
    )?;
    check_same_ideal(part, ideal)?;
    check_verified(part)?;
    if !part.is_upper_discrete(k).unwrap_or(false) {
        return Err(ConstructionError::NotUpperDiscrete { k });
    }

    let lifted = append_to_generator(ideal, owner);
    let out = engine::rem_rules(&masks_of(part), k, 1 << (pivot - 1), 1 << (appended - 1))
        .map_err(ConstructionError::Shape)?;
    let result = assemble_lift(&lifted, out, "rem_lift")?;
    require_upper_discrete(&result, k + 1, "rem_lift")?;
    Ok(result)
}

fn assemble_lift(
    lifted: &MonomialIdeal,
    out: Vec<engine::MaskIv>,
    what: &'static str,
) -> Result<IntervalPartition, ConstructionError> {
    super::assemble(lifted, out, what)
}
