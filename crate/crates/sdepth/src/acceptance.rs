//! The self-test suite: eight checks pinning the solver and every
//! construction against known values, seeded random corpora, and the
//! brute-force oracle. `cargo test` runs them as the `acceptance`
//! integration target; `sdepth selftest` runs them from the CLI.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{
    boolean_upper_discrete, ci_partition, four_gen_partition, lem_lift, rem_lift,
    three_gen_partition, upper_discrete_refine,
};
use crate::ideal::{Exponent, MonomialIdeal};
use crate::poset::{CharacteristicPoset, Interval, IntervalPartition};
use crate::sampling::{random_ideal, random_partition};
use crate::search::{brute_force_sdepth, sdepth_exact, SearchConfig};

/// Seed for every random corpus below; instance `i` uses stream `i`.
pub const CORPUS_SEED: u64 = 0x5d31_c0de;

pub const NUM_CRITERIA: usize = 8;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {}: {} — {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

pub fn criterion_names() -> [&'static str; NUM_CRITERIA] {
    [
        "maximal ideals",
        "complete intersections",
        "radical invariance",
        "3-generated ideals",
        "4-generated ideals",
        "upper-discrete partitions",
        "oracle equivalence",
        "lift exactness",
    ]
}

pub fn run_criterion(id: usize) -> CriterionResult {
    let name = criterion_names()[id - 1];
    let start = Instant::now();
    let outcome = match id {
        1 => maximal_ideals(),
        2 => complete_intersections(),
        3 => radical_invariance(),
        4 => three_generated(),
        5 => four_generated(),
        6 => upper_discrete_suite(),
        7 => oracle_equivalence(),
        8 => lift_exactness(),
        _ => Err(format!("no criterion {id}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => CriterionResult { id, name, passed: true, detail, seconds },
        Err(detail) => CriterionResult { id, name, passed: false, detail, seconds },
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=NUM_CRITERIA).map(run_criterion).collect()
}

fn rng_for(instance: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    rng.set_stream(instance);
    rng
}

/// Largest antichain in the subset lattice: binomial(n, n/2).
fn max_antichain(n: usize) -> usize {
    let k = n / 2;
    (1..=k).fold(1usize, |acc, i| acc * (n - k + i) / i)
}

fn maximal(n: usize) -> MonomialIdeal {
    let gens = (0..n)
        .map(|i| {
            let mut coords = vec![0u32; n];
            coords[i] = 1;
            Exponent::new(coords)
        })
        .collect();
    MonomialIdeal::new(n, gens).expect("maximal ideal")
}

/// sdepth of the maximal ideal is ceil(n/2) for n = 1..=6.
fn maximal_ideals() -> Result<String, String> {
    let cfg = SearchConfig::default();
    for n in 1..=6 {
        let got = sdepth_exact(&maximal(n), &cfg).map_err(|e| e.to_string())?.value;
        let want = n.div_ceil(2);
        if got != want {
            return Err(format!("maximal ideal n={n}: solver found {got}, want {want}"));
        }
    }
    Ok("sdepth = ceil(n/2) for n = 1..=6".into())
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for cuts in 0u32..1 << (n - 1) {
        let mut sizes = Vec::new();
        let mut run = 1usize;
        for i in 0..n - 1 {
            if (cuts >> i) & 1 == 1 {
                sizes.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        sizes.push(run);
        out.push(sizes);
    }
    out
}

fn ci_from_sizes(sizes: &[usize]) -> MonomialIdeal {
    let n: usize = sizes.iter().sum();
    let mut gens = Vec::with_capacity(sizes.len());
    let mut next = 0usize;
    for &s in sizes {
        let mut coords = vec![0u32; n];
        for v in next..next + s {
            coords[v] = 1;
        }
        next += s;
        gens.push(Exponent::new(coords));
    }
    MonomialIdeal::new(n, gens).expect("complete intersection blocks")
}

/// Every squarefree complete intersection with n <= 7 has
/// sdepth = n - floor(m/2), by exact search and by the explicit witness.
fn complete_intersections() -> Result<String, String> {
    let cfg = SearchConfig::default();
    let mut checked = 0usize;
    for n in 1..=7 {
        for sizes in compositions(n) {
            let m = sizes.len();
            let ideal = ci_from_sizes(&sizes);
            let want = n - m / 2;
            let got = sdepth_exact(&ideal, &cfg).map_err(|e| e.to_string())?.value;
            if got != want {
                return Err(format!("{ideal}: solver found {got}, want {want}"));
            }
            let witness = ci_partition(&ideal).map_err(|e| e.to_string())?;
            let depth = witness.sdepth().map_err(|e| e.to_string())?;
            if depth != want {
                return Err(format!("{ideal}: witness depth {depth}, want {want}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} complete intersections match n - floor(m/2)"))
}

/// sdepth is blind to exponents: the cube (x1^2, x2*x3^2) on its lcm box
/// and its radical (x1, x2*x3) both come out at 2.
fn radical_invariance() -> Result<String, String> {
    let cfg = SearchConfig::default();
    let ideal = crate::ideal::parse_ideal("n=3; x1^2, x2*x3^2").map_err(|e| e.to_string())?;
    let direct = sdepth_exact(&ideal, &cfg).map_err(|e| e.to_string())?.value;
    let rad = sdepth_exact(&ideal.radical(), &cfg).map_err(|e| e.to_string())?.value;
    if direct != 2 || rad != 2 {
        return Err(format!("got {direct} on the lcm box, {rad} on the radical; want 2"));
    }
    Ok("sdepth 2 on the lcm box and on the radical".into())
}

/// 200 random non-principal 3-generated squarefree ideals, n <= 7: the
/// pipeline witness reaches n - 1 and the exact value is n - 1.
fn three_generated() -> Result<String, String> {
    let cfg = SearchConfig::default();
    for i in 0..200u64 {
        let mut rng = rng_for(0x3000 + i);
        let n = 3 + rng.gen_range(0..5usize); // 3..=7
        let ideal = random_ideal(n, 3, &mut rng).map_err(|e| e.to_string())?;
        let part = three_gen_partition(&ideal).map_err(|e| format!("{ideal}: {e}"))?;
        let depth = part.sdepth().map_err(|e| e.to_string())?;
        if depth < n - 1 {
            return Err(format!("{ideal}: witness depth {depth} below {}", n - 1));
        }
        let exact = sdepth_exact(&ideal, &cfg).map_err(|e| e.to_string())?.value;
        if exact != n - 1 {
            return Err(format!("{ideal}: exact sdepth {exact}, want {}", n - 1));
        }
    }
    Ok("200 instances: witness >= n-1 and exact value = n-1".into())
}

/// The symmetric 4-generated ideal has sdepth 3 with a verified witness at
/// >= 2; 100 random 4-generated ideals with n <= 6 stay above n - 2.
fn four_generated() -> Result<String, String> {
    let cfg = SearchConfig::default();
    let symmetric = crate::ideal::parse_ideal("n=4; x1*x2*x3, x1*x2*x4, x1*x3*x4, x2*x3*x4")
        .map_err(|e| e.to_string())?;
    let exact = sdepth_exact(&symmetric, &cfg).map_err(|e| e.to_string())?.value;
    if exact != 3 {
        return Err(format!("symmetric ideal: exact sdepth {exact}, want 3"));
    }
    let witness = four_gen_partition(&symmetric).map_err(|e| e.to_string())?;
    let depth = witness.sdepth().map_err(|e| e.to_string())?;
    if depth < 2 {
        return Err(format!("symmetric ideal: witness depth {depth} below 2"));
    }
    for i in 0..100u64 {
        let mut rng = rng_for(0x4000 + i);
        let n = 4 + rng.gen_range(0..3usize); // 4..=6
        let ideal = random_ideal(n, 4, &mut rng).map_err(|e| e.to_string())?;
        let part = four_gen_partition(&ideal).map_err(|e| format!("{ideal}: {e}"))?;
        let lower = part.sdepth().map_err(|e| e.to_string())?;
        if lower < n - 2 {
            return Err(format!("{ideal}: witness depth {lower} below {}", n - 2));
        }
        let exact = sdepth_exact(&ideal, &cfg).map_err(|e| e.to_string())?.value;
        if exact < n - 2 {
            return Err(format!("{ideal}: exact sdepth {exact} below {}", n - 2));
        }
    }
    Ok("symmetric ideal at 3; 100 instances stay above n-2".into())
}

fn triangle_partition(
    poset: &Arc<CharacteristicPoset>,
    raw: &[(u64, u64)],
) -> IntervalPartition {
    let intervals = raw
        .iter()
        .map(|&(lo, hi)| Interval::new(Exponent::from_mask(lo, 3), Exponent::from_mask(hi, 3)))
        .collect();
    IntervalPartition::new(Arc::clone(poset), intervals)
}

/// The discrete triangle partition is upper-discrete of degree 2, the
/// shorter one is not, and refinement yields upper-discreteness for every
/// degree up to the partition depth on 100 random verified partitions.
fn upper_discrete_suite() -> Result<String, String> {
    let triangle = crate::ideal::parse_ideal("n=3; x1*x2, x2*x3, x1*x3")
        .map_err(|e| e.to_string())?;
    let poset = CharacteristicPoset::build(&triangle, None).map_err(|e| e.to_string())?;
    let discrete = triangle_partition(
        &poset,
        &[(0b011, 0b011), (0b110, 0b110), (0b101, 0b101), (0b111, 0b111)],
    );
    if discrete.verify().is_err() || !discrete.is_upper_discrete(2).map_err(|e| e.to_string())? {
        return Err("discrete triangle partition failed".into());
    }
    let shorter = triangle_partition(&poset, &[(0b011, 0b111), (0b110, 0b110), (0b101, 0b101)]);
    if shorter.verify().is_err() {
        return Err("shorter triangle partition should verify".into());
    }
    if shorter.is_upper_discrete(2).map_err(|e| e.to_string())? {
        return Err("shorter triangle partition wrongly accepted at degree 2".into());
    }
    for i in 0..100u64 {
        let mut rng = rng_for(0x6000 + i);
        let n = 3 + rng.gen_range(0..4usize); // 3..=6
        let m = 1 + rng.gen_range(0..4usize); // 1..=4
        let ideal = match random_ideal(n, m, &mut rng) {
            Ok(i) => i,
            Err(_) => continue,
        };
        let poset = CharacteristicPoset::build(&ideal, None).map_err(|e| e.to_string())?;
        let part = random_partition(&poset, &mut rng);
        let depth = part.sdepth().map_err(|e| e.to_string())?;
        for k in 0..=depth {
            let refined = upper_discrete_refine(&ideal, &part, k)
                .map_err(|e| format!("{ideal} at k={k}: {e}"))?;
            if !refined.is_upper_discrete(k).map_err(|e| e.to_string())? {
                return Err(format!("{ideal}: refinement at k={k} not upper-discrete"));
            }
        }
    }
    Ok("triangle examples and 100 random refinements behave".into())
}

/// The solver agrees with the exhaustive oracle on 500 small posets.
fn oracle_equivalence() -> Result<String, String> {
    let cfg = SearchConfig::default();
    let mut checked = 0usize;
    let mut instance = 0u64;
    while checked < 500 {
        let mut rng = rng_for(0x7000 + instance);
        instance += 1;
        let n = 1 + rng.gen_range(0..5usize); // 1..=5
        let m_cap = max_antichain(n).min(3);
        let m = 1 + rng.gen_range(0..m_cap);
        let ideal = match random_ideal(n, m, &mut rng) {
            Ok(i) => i,
            Err(_) => continue,
        };
        let poset = CharacteristicPoset::build(&ideal, None).map_err(|e| e.to_string())?;
        if poset.len() > crate::search::ORACLE_MAX_ELEMENTS {
            continue;
        }
        let exact = sdepth_exact(&ideal, &cfg).map_err(|e| e.to_string())?.value;
        let oracle = brute_force_sdepth(&ideal).map_err(|e| e.to_string())?;
        if exact != oracle {
            return Err(format!("{ideal}: solver {exact} != oracle {oracle}"));
        }
        checked += 1;
    }
    Ok("500 posets of at most 18 elements: solver = oracle".into())
}

/// 100 private-variable lifts raise the depth by exactly one; 100
/// degree-aware lifts raise the upper-discrete degree by exactly one.
fn lift_exactness() -> Result<String, String> {
    for i in 0..100u64 {
        let mut rng = rng_for(0x8000 + i);
        let n = 2 + rng.gen_range(0..4usize); // 2..=5
        let m_cap = max_antichain(n).min(3);
        let m = 1 + rng.gen_range(0..m_cap);
        let base = random_ideal(n, m, &mut rng).map_err(|e| e.to_string())?;
        // hand one generator a fresh private variable to pivot on
        let target = rng.gen_range(0..m);
        let gens = base
            .generators()
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                let mut coords = g.coords().to_vec();
                coords.push(u32::from(gi == target));
                Exponent::new(coords)
            })
            .collect();
        let shaped = MonomialIdeal::new(n + 1, gens).map_err(|e| e.to_string())?;
        let poset = CharacteristicPoset::build(&shaped, None).map_err(|e| e.to_string())?;
        let part = random_partition(&poset, &mut rng);
        let before = part.sdepth().map_err(|e| e.to_string())?;
        let lifted = lem_lift(&shaped, &part, n + 1, n + 2)
            .map_err(|e| format!("{shaped}: {e}"))?;
        let after = lifted.sdepth().map_err(|e| e.to_string())?;
        if after != before + 1 {
            return Err(format!("{shaped}: depth went {before} -> {after}"));
        }
    }
    for i in 0..100u64 {
        let mut rng = rng_for(0x9000 + i);
        let n = 2 + rng.gen_range(0..5usize); // 2..=6
        let sizes = {
            let mut left = n;
            let mut sizes = Vec::new();
            while left > 0 && sizes.len() < 2 {
                let s = 1 + rng.gen_range(0..left);
                sizes.push(s);
                left -= s;
            }
            if left > 0 {
                sizes.push(left);
            }
            sizes
        };
        let ideal = ci_from_sizes(&sizes);
        let witness = ci_partition(&ideal).map_err(|e| e.to_string())?;
        let depth = witness.sdepth().map_err(|e| e.to_string())?;
        let k = rng.gen_range(0..=depth);
        let ud = upper_discrete_refine(&ideal, &witness, k).map_err(|e| e.to_string())?;
        let pivot = 1 + rng.gen_range(0..n);
        let lifted = rem_lift(&ideal, &ud, k, pivot, n + 1)
            .map_err(|e| format!("{ideal} pivot x{pivot} k={k}: {e}"))?;
        if !lifted.is_upper_discrete(k + 1).map_err(|e| e.to_string())? {
            return Err(format!("{ideal}: lifted partition not upper-discrete at {}", k + 1));
        }
    }
    let _ = boolean_upper_discrete(4, 2).map_err(|e| e.to_string())?;
    Ok("100 depth lifts and 100 degree lifts are exact".into())
}
