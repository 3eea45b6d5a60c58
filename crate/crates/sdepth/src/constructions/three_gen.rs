//! The 3-generator pipeline: a verified partition of depth at least `n - 1`
//! for every squarefree ideal with three minimal generators.
//!
//! The reductions run over generator *tuples* rather than minimal ideals,
//! because the inductive core walks through degenerate states (repeated
//! generators, the unit generator) that no minimal generating set can
//! represent. A variable is classified by how many of the three tuple slots
//! contain it: type-0 variables are stripped and restored as free
//! directions, type-3 variables divide out of everything and shift the
//! partition, extra type-1 variables are merged away by recorded
//! private-variable lifts, and the remaining all-type-2 core is built up one
//! variable at a time from the empty tuple. Slots owning a private variable
//! are handled by the three dedicated steps afterwards, then the recorded
//! lifts replay in reverse.

use std::fmt;
use std::sync::Arc;

use crate::ideal::{mask_full, parse_monomial, Exponent, MonomialIdeal, ParseError, Subset};
use crate::poset::{CharacteristicPoset, IntervalPartition, PosetError};

use super::engine::{self, MaskIv};
use super::lifts::{LiftInstruction, LiftKind};
use super::{
    assemble, check_verified, masks_of, require_min_rho, require_upper_discrete,
    ConstructionError, MinRho,
};

/// An ordered tuple of three squarefree monomials over `n` variables.
/// Entries may repeat and may be 1 (the empty product); such tuples arise as
/// the intermediate states of the all-type-2 induction.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct GeneratorTriple {
    n: usize,
    gens: [u64; 3],
}

impl GeneratorTriple {
    pub fn new(n: usize, gens: [u64; 3]) -> Result<Self, ConstructionError> {
        for &g in &gens {
            Subset::new(n, g)?;
        }
        Ok(GeneratorTriple { n, gens })
    }

    /// The empty tuple `(1, 1, 1)` over no variables, the base of the
    /// all-type-2 induction.
    pub fn base() -> Self {
        GeneratorTriple { n: 0, gens: [0; 3] }
    }

    /// The one-interval partition of the base tuple's poset, checked before
    /// being handed out.
    pub fn base_partition() -> Result<IntervalPartition, ConstructionError> {
        let part = assemble(
            &GeneratorTriple::base().poset_ideal(),
            vec![MaskIv::new(0, 0, "step0:base")],
            "base_partition",
        )?;
        require_upper_discrete(&part, 0, "base_partition")?;
        Ok(part)
    }

    pub fn from_ideal(ideal: &MonomialIdeal) -> Result<Self, ConstructionError> {
        if !ideal.is_squarefree() {
            return Err(ConstructionError::NotSquarefree);
        }
        if ideal.num_generators() != 3 {
            return Err(ConstructionError::WrongGeneratorCount {
                expected: "exactly 3",
                found: ideal.num_generators(),
            });
        }
        let masks = ideal.support_masks()?;
        GeneratorTriple::new(ideal.ambient(), [masks[0], masks[1], masks[2]])
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn generator_masks(&self) -> [u64; 3] {
        self.gens
    }

    /// The ideal generated by the tuple entries; the unit ideal when an
    /// entry is 1. Only the poset of this ideal matters here.
    pub fn poset_ideal(&self) -> MonomialIdeal {
        if self.gens.contains(&0) {
            return MonomialIdeal::unit(self.n);
        }
        let gens = self
            .gens
            .iter()
            .map(|&g| Exponent::from_mask(g, self.n))
            .collect();
        MonomialIdeal::new(self.n, gens).expect("nonzero squarefree generators")
    }

    pub fn poset(&self) -> Result<Arc<CharacteristicPoset>, PosetError> {
        CharacteristicPoset::build(&self.poset_ideal(), None)
    }

    /// Number of tuple slots whose generator contains the variable.
    pub fn slot_count(&self, var: usize) -> usize {
        let bit = 1u64 << (var - 1);
        self.gens.iter().filter(|&&g| g & bit != 0).count()
    }

    /// True iff every ambient variable lies in exactly two slots.
    pub fn is_all_type_two(&self) -> bool {
        (1..=self.n).all(|v| self.slot_count(v) == 2)
    }
}

impl fmt::Debug for GeneratorTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneratorTriple(n={}; ", self.n)?;
        for (i, &g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if g == 0 {
                write!(f, "1")?;
            } else {
                write!(f, "{}", Exponent::from_mask(g, self.n))?;
            }
        }
        write!(f, ")")
    }
}

/// Parse `n=<int>; g1, g2, g3` where each entry is a squarefree monomial or
/// the literal `1`.
pub fn parse_generator_triple(text: &str) -> Result<GeneratorTriple, ParseError> {
    let (head, body) = text
        .split_once(';')
        .ok_or_else(|| ParseError::Syntax("expected `n=<int>; g1, g2, g3`".into()))?;
    let n: usize = head
        .trim()
        .strip_prefix("n")
        .map(str::trim_start)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| ParseError::Syntax(format!("expected `n=<int>`, got `{head}`")))?
        .trim()
        .parse()
        .map_err(|_| ParseError::Syntax(format!("invalid variable count in `{head}`")))?;
    let entries: Vec<&str> = body.split(',').map(str::trim).collect();
    if entries.len() != 3 {
        return Err(ParseError::Syntax(format!(
            "expected exactly 3 generators, got {}",
            entries.len()
        )));
    }
    let mut gens = [0u64; 3];
    for (slot, entry) in entries.iter().enumerate() {
        if *entry == "1" {
            continue;
        }
        let e = parse_monomial(entry, n)?;
        if !e.is_squarefree() {
            return Err(ParseError::Syntax(format!("generator `{entry}` is not squarefree")));
        }
        gens[slot] = e.support_mask();
    }
    GeneratorTriple::new(n, gens).map_err(|e| ParseError::Syntax(e.to_string()))
}

fn check_triple_partition(
    triple: &GeneratorTriple,
    part: &IntervalPartition,
) -> Result<(), ConstructionError> {
    if !part.poset().is_squarefree() || part.poset().ideal() != &triple.poset_ideal() {
        return Err(ConstructionError::IdealMismatch);
    }
    check_verified(part)
}

/// Extend an all-type-2 tuple by one shared variable: the new variable joins
/// the two slots named by `pair`, and an upper-discrete partition of degree
/// `n - 1` rewrites into one of degree `n` for the extended tuple.
pub fn step0_extend(
    triple: &GeneratorTriple,
    part: &IntervalPartition,
    pair: (usize, usize),
    appended: usize,
) -> Result<(GeneratorTriple, IntervalPartition), ConstructionError> {
    let n = triple.ambient();
    let (i, j) = pair;
    if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(ConstructionError::Shape(format!(
            "pair ({i},{j}) must name two distinct generators"
        )));
    }
    LiftInstruction::validated(LiftKind::Step0, appended, vec![i, j], None, n)?;
    if !triple.is_all_type_two() {
        return Err(ConstructionError::Shape(
            "every variable must be shared by exactly two generators".into(),
        ));
    }
    check_triple_partition(triple, part)?;
    if !part.is_upper_discrete(n.saturating_sub(1)).unwrap_or(false) {
        return Err(ConstructionError::NotUpperDiscrete { k: n.saturating_sub(1) });
    }

    let third = 6 - i - j; // slots are 1, 2, 3
    let bit = 1u64 << n;
    let out = engine::step0_rules(
        &masks_of(part),
        mask_full(n),
        triple.gens[third - 1],
        bit,
    )
    .map_err(ConstructionError::Shape)?;

    let mut gens = triple.gens;
    gens[i - 1] |= bit;
    gens[j - 1] |= bit;
    let extended = GeneratorTriple::new(n + 1, gens)?;
    let result = assemble(&extended.poset_ideal(), out, "step0_extend")?;
    require_upper_discrete(&result, n, "step0_extend")?;
    Ok((extended, result))
}

/// Append a private variable to generator `step` of a tuple whose first
/// `step - 1` slots already own one private variable each (appended in slot
/// order on top of an all-type-2 core). Raises the upper-discrete degree by
/// one.
pub fn step_private_extend(
    triple: &GeneratorTriple,
    part: &IntervalPartition,
    step: usize,
    appended: usize,
) -> Result<(GeneratorTriple, IntervalPartition), ConstructionError> {
    if !(1..=3).contains(&step) {
        return Err(ConstructionError::Shape(format!("step {step} out of 1..=3")));
    }
    let ambient = triple.ambient();
    let kind = [LiftKind::Step1, LiftKind::Step2, LiftKind::Step3][step - 1];
    LiftInstruction::validated(kind, appended, vec![step], None, ambient)?;
    if ambient + 1 < step {
        return Err(ConstructionError::Shape(format!(
            "ambient {ambient} too small for step {step}"
        )));
    }
    let core_n = ambient + 1 - step;
    let core_mask = mask_full(core_n);

    // slots step..3 live inside the core; slots before `step` own exactly
    // their one private variable above it
    let mut prior = Vec::with_capacity(step - 1);
    for s in 0..3 {
        let high = triple.gens[s] & !core_mask;
        let expected = if s + 1 < step { 1u64 << (core_n + s) } else { 0 };
        if high != expected {
            return Err(ConstructionError::Shape(format!(
                "generator {} must own exactly the private variables of steps before {step}",
                s + 1
            )));
        }
        if expected != 0 {
            prior.push(expected);
        }
    }
    let core = [
        triple.gens[0] & core_mask,
        triple.gens[1] & core_mask,
        triple.gens[2] & core_mask,
    ];
    let core_triple = GeneratorTriple::new(core_n, core)?;
    if !core_triple.is_all_type_two() {
        return Err(ConstructionError::Shape(
            "core variables must be shared by exactly two generators".into(),
        ));
    }
    check_triple_partition(triple, part)?;
    let degree_in = (core_n + step).saturating_sub(2);
    if !part.is_upper_discrete(degree_in).unwrap_or(false) {
        return Err(ConstructionError::NotUpperDiscrete { k: degree_in });
    }

    let input = masks_of(part);
    let a_new = 1u64 << ambient;
    let out = match step {
        1 => engine::step1_rules(&input, core_mask, core[0], a_new),
        2 => engine::step2_rules(&input, core_mask, core[1], prior[0], a_new),
        3 => engine::step3_rules(&input, core_mask, core[2], prior[0], prior[1], a_new),
        _ => unreachable!(),
    }
    .map_err(ConstructionError::Shape)?;

    let mut gens = triple.gens;
    gens[step - 1] |= a_new;
    let extended = GeneratorTriple::new(ambient + 1, gens)?;
    let result = assemble(&extended.poset_ideal(), out, "step_private_extend")?;
    require_upper_discrete(&result, core_n + step - 1, "step_private_extend")?;
    Ok((extended, result))
}

/// Verified partition of depth at least `n - 1` for a squarefree ideal with
/// exactly three minimal generators.
pub fn three_gen_partition(
    ideal: &MonomialIdeal,
) -> Result<IntervalPartition, ConstructionError> {
    let triple = GeneratorTriple::from_ideal(ideal)?;
    let n = ideal.ambient();
    let ivs = triple_pipeline(triple.generator_masks(), mask_full(n))?;
    let part = assemble(ideal, ivs, "three_gen_partition")?;
    require_min_rho(&part, MinRho::AtLeast(n.saturating_sub(1)), "three_gen_partition")?;
    Ok(part)
}

/// Run the full reduction pipeline for a generator tuple over an active
/// variable set, producing interval masks that partition the tuple's poset
/// over `active` with minimum top size at least `|active| - 1`.
pub(crate) fn triple_pipeline(
    slots: [u64; 3],
    active: u64,
) -> Result<Vec<MaskIv>, ConstructionError> {
    let union = slots[0] | slots[1] | slots[2];
    debug_assert_eq!(union & !active, 0, "generators outside the active set");
    let type0 = active & !union;
    let type3 = slots[0] & slots[1] & slots[2];
    let mut work = [slots[0] & !type3, slots[1] & !type3, slots[2] & !type3];
    let mut act = (active & union) & !type3;

    // classify what is left: each variable now lies in one or two slots
    let mut privates: [Vec<u32>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut rest = act;
    while rest != 0 {
        let b = rest.trailing_zeros();
        rest &= rest - 1;
        let holders: Vec<usize> =
            (0..3).filter(|&s| work[s] & (1 << b) != 0).collect();
        match holders.as_slice() {
            [one] => privates[*one].push(b),
            [_, _] => {}
            _ => {
                return Err(ConstructionError::Shape(format!(
                    "variable x{} lies in {} generators after reduction",
                    b + 1,
                    holders.len()
                )))
            }
        }
    }

    // merge surplus private variables, keeping the lowest per slot
    let mut replays: Vec<(u64, u64)> = Vec::new();
    for s in 0..3 {
        if privates[s].len() > 1 {
            let keep = 1u64 << privates[s][0];
            for &y in &privates[s][1..] {
                replays.push((keep, 1 << y));
                work[s] &= !(1 << y);
                act &= !(1 << y);
            }
            privates[s].truncate(1);
        }
    }

    // slots with a private variable first, in slot order
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by_key(|&s| (privates[s].is_empty(), s));
    let pvars: Vec<u64> = order
        .iter()
        .filter(|&&s| !privates[s].is_empty())
        .map(|&s| 1u64 << privates[s][0])
        .collect();
    let core = [
        work[order[0]] & !pvars.first().copied().unwrap_or(0),
        work[order[1]] & !pvars.get(1).copied().unwrap_or(0),
        work[order[2]] & !pvars.get(2).copied().unwrap_or(0),
    ];
    let core_act = act & !pvars.iter().fold(0, |m, &p| m | p);

    let mut part = step0_build(&core, core_act)?;
    for (s, &a) in pvars.iter().enumerate() {
        part = match s {
            0 => engine::step1_rules(&part, core_act, core[0], a),
            1 => engine::step2_rules(&part, core_act, core[1], pvars[0], a),
            2 => engine::step3_rules(&part, core_act, core[2], pvars[0], pvars[1], a),
            _ => unreachable!(),
        }
        .map_err(ConstructionError::Shape)?;
    }

    for &(pivot, appended) in replays.iter().rev() {
        part = engine::lem_rules(&part, pivot, appended);
    }

    if type3 != 0 {
        for iv in &mut part {
            iv.lo |= type3;
            iv.hi |= type3;
        }
    }
    if type0 != 0 {
        for iv in &mut part {
            iv.hi |= type0;
        }
    }
    Ok(part)
}

/// Build the all-type-2 core partition from the empty tuple, adding the
/// active variables in ascending order; each addition joins the two slots
/// that contain it.
fn step0_build(core: &[u64; 3], core_act: u64) -> Result<Vec<MaskIv>, ConstructionError> {
    let mut part = vec![MaskIv::new(0, 0, "step0:base")];
    let mut processed = 0u64;
    let mut rest = core_act;
    while rest != 0 {
        let b = rest.trailing_zeros();
        rest &= rest - 1;
        let bit = 1u64 << b;
        let holders: Vec<usize> = (0..3).filter(|&s| core[s] & bit != 0).collect();
        if holders.len() != 2 {
            return Err(ConstructionError::Shape(format!(
                "core variable x{} lies in {} generators, expected 2",
                b + 1,
                holders.len()
            )));
        }
        let third = 3 - holders[0] - holders[1];
        part = engine::step0_rules(&part, processed, core[third] & processed, bit)
            .map_err(ConstructionError::Shape)?;
        processed |= bit;
    }
    Ok(part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::parse_ideal;
    use crate::search::{sdepth_exact, SearchConfig};

    fn masks(part: &IntervalPartition) -> Vec<(u64, u64)> {
        part.intervals()
            .iter()
            .map(|iv| (iv.lo().support_mask(), iv.hi().support_mask()))
            .collect()
    }

    #[test]
    fn base_partition_verifies() {
        let part = GeneratorTriple::base_partition().unwrap();
        assert_eq!(part.len(), 1);
        assert_eq!(part.poset().len(), 1);
    }

    #[test]
    fn replay_triangle_from_base() {
        // (x1*x2, x1*x3, x2*x3) built by three shared-variable extensions
        let t0 = GeneratorTriple::base();
        let p0 = GeneratorTriple::base_partition().unwrap();
        let (t1, p1) = step0_extend(&t0, &p0, (1, 2), 1).unwrap();
        assert_eq!(t1.generator_masks(), [0b001, 0b001, 0b000]);
        let (t2, p2) = step0_extend(&t1, &p1, (1, 3), 2).unwrap();
        assert_eq!(t2.generator_masks(), [0b011, 0b001, 0b010]);
        let (t3, p3) = step0_extend(&t2, &p2, (2, 3), 3).unwrap();
        assert_eq!(t3.generator_masks(), [0b011, 0b101, 0b110]);
        assert_eq!(
            masks(&p3),
            vec![(0b110, 0b110), (0b101, 0b101), (0b011, 0b011), (0b111, 0b111)]
        );
        assert_eq!(p3.sdepth().unwrap(), 2);
        assert!(p3.is_upper_discrete(2).unwrap());
    }

    #[test]
    fn step0_rejects_wrong_appended_index() {
        let t = GeneratorTriple::base();
        let p = GeneratorTriple::base_partition().unwrap();
        assert!(matches!(
            step0_extend(&t, &p, (1, 2), 3),
            Err(ConstructionError::BadAppended { expected: 1 })
        ));
    }

    #[test]
    fn step0_rejects_non_type_two_tuple() {
        let t = GeneratorTriple::new(1, [0b1, 0, 0]).unwrap();
        let poset = t.poset().unwrap();
        let part = IntervalPartition::new(
            poset,
            vec![crate::poset::Interval::new(
                Exponent::from_mask(0, 1),
                Exponent::from_mask(1, 1),
            )],
        );
        assert!(matches!(
            step0_extend(&t, &part, (1, 2), 2),
            Err(ConstructionError::Shape(_))
        ));
    }

    #[test]
    fn private_steps_on_triangle() {
        // start from the all-type-2 triangle and hand each generator a
        // private variable in turn
        let ideal = parse_ideal("n=3; x1*x2, x1*x3, x2*x3").unwrap();
        let t3 = GeneratorTriple::from_ideal(&ideal).unwrap();
        let p3 = three_gen_partition(&ideal).unwrap();
        assert!(p3.is_upper_discrete(2).unwrap());

        let (t4, p4) = step_private_extend(&t3, &p3, 1, 4).unwrap();
        assert_eq!(t4.generator_masks(), [0b1011, 0b0101, 0b0110]);
        assert!(p4.is_upper_discrete(3).unwrap());
        assert!(p4.min_rho() >= 3);

        let (t5, p5) = step_private_extend(&t4, &p4, 2, 5).unwrap();
        assert_eq!(t5.generator_masks(), [0b01011, 0b10101, 0b00110]);
        assert!(p5.is_upper_discrete(4).unwrap());
        assert!(p5.min_rho() >= 4);

        let (t6, p6) = step_private_extend(&t5, &p5, 3, 6).unwrap();
        assert_eq!(t6.generator_masks(), [0b001011, 0b010101, 0b100110]);
        assert!(p6.is_upper_discrete(5).unwrap());
        assert!(p6.min_rho() >= 5);
    }

    #[test]
    fn step_order_is_enforced() {
        let ideal = parse_ideal("n=3; x1*x2, x1*x3, x2*x3").unwrap();
        let t3 = GeneratorTriple::from_ideal(&ideal).unwrap();
        let p3 = three_gen_partition(&ideal).unwrap();
        // step 2 before step 1: generator 1 lacks its private variable
        assert!(matches!(
            step_private_extend(&t3, &p3, 2, 4),
            Err(ConstructionError::Shape(_))
        ));
    }

    #[test]
    fn triangle_and_embedded_triangle() {
        let ideal = parse_ideal("n=3; x1*x2, x2*x3, x1*x3").unwrap();
        assert_eq!(three_gen_partition(&ideal).unwrap().sdepth().unwrap(), 2);

        let wide = parse_ideal("n=5; x1*x2, x2*x3, x1*x3").unwrap();
        let part = three_gen_partition(&wide).unwrap();
        assert_eq!(part.sdepth().unwrap(), 4);
    }

    #[test]
    fn mixed_types_worked_example() {
        let ideal = parse_ideal("n=5; x1*x2*x3, x3*x4, x1*x4*x5").unwrap();
        let part = three_gen_partition(&ideal).unwrap();
        assert!(part.sdepth().unwrap() >= 4);
        let exact = sdepth_exact(&ideal, &SearchConfig::default()).unwrap().value;
        assert_eq!(exact, 4);
    }

    #[test]
    fn maximal_ideal_runs_through_private_steps() {
        let ideal = parse_ideal("n=3; x1, x2, x3").unwrap();
        let part = three_gen_partition(&ideal).unwrap();
        assert_eq!(part.sdepth().unwrap(), 2);
    }

    #[test]
    fn type_three_division() {
        let ideal = parse_ideal("n=5; x1*x2*x3, x1*x2*x4, x1*x2*x5").unwrap();
        let part = three_gen_partition(&ideal).unwrap();
        assert_eq!(part.sdepth().unwrap(), 4);
        let exact = sdepth_exact(&ideal, &SearchConfig::default()).unwrap().value;
        assert_eq!(exact, 4);
    }

    #[test]
    fn surplus_private_variables_are_merged() {
        // generator supports of sizes (4, 2, 2) with plenty of private vars
        let ideal = parse_ideal("n=7; x1*x2*x3*x4, x4*x5, x1*x6*x7").unwrap();
        let part = three_gen_partition(&ideal).unwrap();
        assert!(part.sdepth().unwrap() >= 6);
    }

    #[test]
    fn rejects_wrong_generator_count() {
        let ideal = parse_ideal("n=3; x1, x2").unwrap();
        assert!(matches!(
            three_gen_partition(&ideal),
            Err(ConstructionError::WrongGeneratorCount { found: 2, .. })
        ));
    }

    #[test]
    fn random_three_generated_meet_bound() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let cfg = SearchConfig::default();
        for _ in 0..25 {
            let n = 3 + (rand::Rng::gen_range(&mut rng, 0..4usize));
            let ideal = crate::sampling::random_ideal(n, 3, &mut rng).unwrap();
            let part = three_gen_partition(&ideal).unwrap();
            assert!(part.sdepth().unwrap() >= n - 1, "bound failed for {ideal}");
            let exact = sdepth_exact(&ideal, &cfg).unwrap().value;
            assert_eq!(exact, n - 1, "exact value off for {ideal}");
        }
    }

    #[test]
    fn parse_triple_accepts_units() {
        let t = parse_generator_triple("n=2; x1, 1, x1*x2").unwrap();
        assert_eq!(t.generator_masks(), [0b01, 0, 0b11]);
        assert!(parse_generator_triple("n=2; x1, x2").is_err());
        assert!(parse_generator_triple("n=1; x1^2, 1, 1").is_err());
    }
}
