//! The 4-generator recursion: a verified partition of depth at least `n - 2`
//! for every squarefree ideal with at most four minimal generators.
//!
//! After discarding unused variables, the poset splits along the last
//! variable `x_n` into the layer without it — the poset of the generators
//! free of `x_n` — and the layer with it, the poset of all generators with
//! `x_n` divided out. The first layer has at most three generators and the
//! 3-generator pipeline applies; the second recurses. Gluing the two
//! partitions back (the second shifted by `x_n`) costs one from the second
//! layer's depth, giving `min(s0, s1 + 1)`.

use crate::ideal::{mask_full, Exponent, MonomialIdeal};
use crate::poset::IntervalPartition;

use super::engine::{self, MaskIv};
use super::three_gen::triple_pipeline;
use super::{
    assemble, check_verified, masks_of, require_min_rho, ConstructionError, MinRho,
};

/// Split a fully-supported squarefree ideal at its last variable: the ideal
/// of the generators free of `x_n`, and the ideal of all generators with
/// `x_n` divided out, both over `n - 1` variables. The first may be zero,
/// the second may be the unit ideal.
pub fn split_ideal(
    ideal: &MonomialIdeal,
) -> Result<(MonomialIdeal, MonomialIdeal), ConstructionError> {
    if !ideal.is_squarefree() {
        return Err(ConstructionError::NotSquarefree);
    }
    if ideal.is_zero() || ideal.is_unit() || ideal.ambient() == 0 {
        return Err(ConstructionError::Shape(
            "splitting needs a proper ideal over at least one variable".into(),
        ));
    }
    let n = ideal.ambient();
    let lcm = ideal.lcm_exponent();
    if let Some(var) = (1..=n).find(|&v| lcm.get(v) == 0) {
        return Err(ConstructionError::NormalizationRequired { var });
    }

    let low: Vec<Exponent> = ideal
        .generators()
        .iter()
        .filter(|g| g.get(n) == 0)
        .map(|g| Exponent::new(g.coords()[..n - 1].to_vec()))
        .collect();
    let without = if low.is_empty() {
        MonomialIdeal::zero(n - 1)
    } else {
        MonomialIdeal::new(n - 1, low)?
    };

    let divided: Vec<Exponent> = ideal
        .generators()
        .iter()
        .map(|g| Exponent::new(g.coords()[..n - 1].to_vec()))
        .collect();
    let quotient = if divided.iter().any(Exponent::is_zero) {
        MonomialIdeal::unit(n - 1)
    } else {
        MonomialIdeal::new(n - 1, divided)?
    };

    Ok((without, quotient))
}

/// Glue verified partitions of the two split layers into a partition of the
/// parent poset: the `x_n`-free layer keeps its intervals, the other layer's
/// intervals gain `x_n` at both ends. The result is verified and reaches
/// depth at least `min(s0, s1 + 1)`.
pub fn compose_split(
    part0: &IntervalPartition,
    part1: &IntervalPartition,
) -> Result<IntervalPartition, ConstructionError> {
    let p0 = part0.poset();
    let p1 = part1.poset();
    if !p0.is_squarefree() || !p1.is_squarefree() || p0.ambient() != p1.ambient() {
        return Err(ConstructionError::Shape(
            "compose needs two squarefree partitions over the same ambient".into(),
        ));
    }
    check_verified(part0)?;
    check_verified(part1)?;
    let n1 = p0.ambient();
    let n = n1 + 1;

    let mut gens: Vec<Exponent> = Vec::new();
    for g in p0.ideal().generators() {
        let mut coords = g.coords().to_vec();
        coords.push(0);
        gens.push(Exponent::new(coords));
    }
    for g in p1.ideal().generators() {
        let mut coords = g.coords().to_vec();
        coords.push(1);
        gens.push(Exponent::new(coords));
    }
    if gens.is_empty() {
        return Err(ConstructionError::Shape("both layers are zero ideals".into()));
    }
    let parent = MonomialIdeal::new(n, gens)?;

    let top_bit = 1u64 << n1;
    let mut out = masks_of(part0);
    out.extend(
        masks_of(part1)
            .into_iter()
            .map(|iv| MaskIv::new(iv.lo | top_bit, iv.hi | top_bit, "compose:shift")),
    );

    let bound = if part0.is_empty() {
        part1.min_rho() + 1
    } else {
        part0.min_rho().min(part1.min_rho() + 1)
    };
    let composed = assemble(&parent, out, "compose_split")?;
    require_min_rho(&composed, MinRho::AtLeast(bound), "compose_split")?;
    Ok(composed)
}

/// Verified partition of depth at least `n - 2` for a squarefree ideal with
/// at most four minimal generators (`n - 1` when there are at most three).
pub fn four_gen_partition(
    ideal: &MonomialIdeal,
) -> Result<IntervalPartition, ConstructionError> {
    if !ideal.is_squarefree() {
        return Err(ConstructionError::NotSquarefree);
    }
    let m = ideal.num_generators();
    if m == 0 || ideal.is_unit() || m > 4 {
        return Err(ConstructionError::WrongGeneratorCount {
            expected: "1 to 4 proper generators",
            found: m,
        });
    }
    let n = ideal.ambient();
    let ivs = descend(&ideal.support_masks()?, mask_full(n))?;
    let part = assemble(ideal, ivs, "four_gen_partition")?;
    let bound = if m == 4 { n.saturating_sub(2) } else { n.saturating_sub(1) };
    require_min_rho(&part, MinRho::AtLeast(bound), "four_gen_partition")?;
    Ok(part)
}

/// Recursive mask-level core of [`four_gen_partition`]: partition the poset
/// of the given generators over the active variables.
fn descend(raw_gens: &[u64], active: u64) -> Result<Vec<MaskIv>, ConstructionError> {
    let gens = engine::minimalize_masks(raw_gens);
    let union = gens.iter().fold(0u64, |acc, &g| acc | g);
    let free = active & !union;
    let act = active & union;

    let mut out = match gens.len() {
        0 => Vec::new(),
        1 => vec![MaskIv::new(gens[0], act, "four:principal")],
        2 => triple_pipeline([gens[0], gens[0], gens[1]], act)?,
        3 => triple_pipeline([gens[0], gens[1], gens[2]], act)?,
        4 => {
            let split_bit = 1u64 << (63 - act.leading_zeros());
            let low: Vec<u64> =
                gens.iter().copied().filter(|g| g & split_bit == 0).collect();
            let divided: Vec<u64> = gens.iter().map(|g| g & !split_bit).collect();
            let mut glued = descend(&low, act & !split_bit)?;
            glued.extend(
                descend(&divided, act & !split_bit)?
                    .into_iter()
                    .map(|iv| {
                        MaskIv::new(iv.lo | split_bit, iv.hi | split_bit, "compose:shift")
                    }),
            );
            glued
        }
        found => {
            return Err(ConstructionError::WrongGeneratorCount {
                expected: "at most 4",
                found,
            })
        }
    };

    if free != 0 {
        for iv in &mut out {
            iv.hi |= free;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::three_gen_partition;
    use crate::ideal::parse_ideal;
    use crate::poset::CharacteristicPoset;
    use crate::search::{sdepth_exact, SearchConfig};
    use std::sync::Arc;

    #[test]
    fn split_symmetric_four_generator_ideal() {
        let ideal = parse_ideal("n=4; x1*x2*x3, x1*x2*x4, x1*x3*x4, x2*x3*x4").unwrap();
        let (i0, i1) = split_ideal(&ideal).unwrap();
        assert_eq!(i0, parse_ideal("n=3; x1*x2*x3").unwrap());
        assert_eq!(i1, parse_ideal("n=3; x1*x2, x1*x3, x2*x3").unwrap());
    }

    #[test]
    fn split_small_example() {
        let ideal = parse_ideal("n=3; x1, x2*x3").unwrap();
        let (i0, i1) = split_ideal(&ideal).unwrap();
        assert_eq!(i0, parse_ideal("n=2; x1").unwrap());
        assert_eq!(i1, parse_ideal("n=2; x1, x2").unwrap());
    }

    #[test]
    fn split_produces_unit_layer() {
        let ideal = parse_ideal("n=4; x4, x1*x2, x1*x3, x2*x3").unwrap();
        let (i0, i1) = split_ideal(&ideal).unwrap();
        assert_eq!(i0, parse_ideal("n=3; x1*x2, x1*x3, x2*x3").unwrap());
        assert!(i1.is_unit());
    }

    #[test]
    fn split_requires_full_support() {
        let ideal = parse_ideal("n=3; x1*x2").unwrap();
        assert!(matches!(
            split_ideal(&ideal),
            Err(ConstructionError::NormalizationRequired { var: 3 })
        ));
    }

    #[test]
    fn every_generator_lands_in_exactly_one_layer() {
        let ideal = parse_ideal("n=5; x1*x2*x5, x2*x3, x3*x4*x5, x1*x4").unwrap();
        let (i0, i1) = split_ideal(&ideal).unwrap();
        let with_last = ideal
            .generators()
            .iter()
            .filter(|g| g.get(5) > 0)
            .count();
        assert_eq!(i0.num_generators(), ideal.num_generators() - with_last);
        assert!(i1.num_generators() <= ideal.num_generators());
    }

    #[test]
    fn compose_recovers_symmetric_ideal() {
        let ideal = parse_ideal("n=4; x1*x2*x3, x1*x2*x4, x1*x3*x4, x2*x3*x4").unwrap();
        let (i0, i1) = split_ideal(&ideal).unwrap();

        let poset0 = CharacteristicPoset::build(&i0, None).unwrap();
        let part0 = IntervalPartition::new(
            Arc::clone(&poset0),
            vec![crate::poset::Interval::new(
                Exponent::from_mask(0b111, 3),
                Exponent::from_mask(0b111, 3),
            )],
        );
        let part1 = three_gen_partition(&i1).unwrap();

        let composed = compose_split(&part0, &part1).unwrap();
        assert_eq!(composed.poset().ideal(), &ideal);
        assert_eq!(composed.sdepth().unwrap(), 3);
        assert_eq!(
            composed.poset().len(),
            part0.poset().len() + part1.poset().len()
        );
    }

    #[test]
    fn compose_with_empty_first_layer() {
        let ideal = parse_ideal("n=4; x1*x4, x2*x3*x4").unwrap();
        let (i0, i1) = split_ideal(&ideal).unwrap();
        assert!(i0.is_zero());

        let poset0 = CharacteristicPoset::build(&i0, None).unwrap();
        let part0 = IntervalPartition::new(poset0, Vec::new());
        let part1 = sdepth_exact(&i1, &SearchConfig::default()).unwrap().witness;
        let composed = compose_split(&part0, &part1).unwrap();
        assert!(composed.sdepth().unwrap() >= 3);
    }

    #[test]
    fn four_gen_symmetric_example() {
        let ideal = parse_ideal("n=4; x1*x2*x3, x1*x2*x4, x1*x3*x4, x2*x3*x4").unwrap();
        let part = four_gen_partition(&ideal).unwrap();
        assert!(part.sdepth().unwrap() >= 2);
        assert_eq!(sdepth_exact(&ideal, &SearchConfig::default()).unwrap().value, 3);
    }

    #[test]
    fn four_gen_cycle() {
        let ideal = parse_ideal("n=4; x1*x2, x2*x3, x3*x4, x1*x4").unwrap();
        let part = four_gen_partition(&ideal).unwrap();
        assert!(part.sdepth().unwrap() >= 2);
        let exact = sdepth_exact(&ideal, &SearchConfig::default()).unwrap().value;
        let oracle = crate::search::brute_force_sdepth(&ideal).unwrap();
        assert_eq!(exact, oracle);
        assert!(exact >= 2);
    }

    #[test]
    fn four_gen_delegates_below_four() {
        let three = parse_ideal("n=4; x1*x2, x2*x3, x3*x4").unwrap();
        assert!(four_gen_partition(&three).unwrap().sdepth().unwrap() >= 3);
        let two = parse_ideal("n=3; x1*x2, x2*x3").unwrap();
        assert!(four_gen_partition(&two).unwrap().sdepth().unwrap() >= 2);
        let one = parse_ideal("n=3; x1*x2*x3").unwrap();
        assert_eq!(four_gen_partition(&one).unwrap().sdepth().unwrap(), 3);
    }

    #[test]
    fn four_gen_rejects_five_generators() {
        let ideal = parse_ideal("n=5; x1, x2, x3, x4, x5").unwrap();
        assert!(matches!(
            four_gen_partition(&ideal),
            Err(ConstructionError::WrongGeneratorCount { found: 5, .. })
        ));
    }

    #[test]
    fn random_four_generated_meet_bound() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let n = 4 + rand::Rng::gen_range(&mut rng, 0..3usize);
            let ideal = crate::sampling::random_ideal(n, 4, &mut rng).unwrap();
            let part = four_gen_partition(&ideal).unwrap();
            assert!(part.sdepth().unwrap() >= n - 2, "bound failed for {ideal}");
        }
    }
}
