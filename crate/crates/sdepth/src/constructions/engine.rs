//! Mask-level rewrite rules shared by the partition constructions.
//!
//! Everything here works on squarefree data: an interval is a pair of subset
//! masks `lo <= hi` (bitwise containment), and a partition is a list of such
//! pairs over some active variable set. The rules are pure rewrites; the
//! public operations wrap them with shape checks and verify the results on a
//! real poset. Variable identity is carried by bit position throughout, so a
//! rule can append or pivot on any variable, not just the highest one.

/// An interval of subset masks with the label of the rule that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MaskIv {
    pub lo: u64,
    pub hi: u64,
    pub rule: &'static str,
}

impl MaskIv {
    pub fn new(lo: u64, hi: u64, rule: &'static str) -> Self {
        debug_assert_eq!(lo & !hi, 0, "interval lo not below hi");
        MaskIv { lo, hi, rule }
    }
}

fn card(m: u64) -> usize {
    m.count_ones() as usize
}

/// Private-variable lift. The pivot `p` occurs in exactly one generator and
/// the fresh variable `a` joins that generator. Per interval `[c, d]`:
/// if `p in c` emit `[c+a, d+a]`; otherwise emit `[c, d+a]`, plus
/// `[c+p, d+p]` when `p` is not in `d`. Every top grows by exactly one
/// element, so the minimum top size rises by exactly one.
pub(crate) fn lem_rules(input: &[MaskIv], p: u64, a: u64) -> Vec<MaskIv> {
    let mut out = Vec::with_capacity(input.len() * 2);
    for iv in input {
        if iv.lo & p != 0 {
            out.push(MaskIv::new(iv.lo | a, iv.hi | a, "lem:B1"));
        } else {
            out.push(MaskIv::new(iv.lo, iv.hi | a, "lem:B2"));
            if iv.hi & p == 0 {
                out.push(MaskIv::new(iv.lo | p, iv.hi | p, "lem:B3"));
            }
        }
    }
    out
}

/// Degree-preserving variant of [`lem_rules`] for upper-discrete partitions
/// of degree `k`: intervals whose lo already exceeds size `k` are singletons
/// and stay put, spawning the two singletons above them instead of being
/// lifted. Takes degree `k` and yields a partition of degree `k + 1`.
pub(crate) fn rem_rules(
    input: &[MaskIv],
    k: usize,
    p: u64,
    a: u64,
) -> Result<Vec<MaskIv>, String> {
    let mut out = Vec::with_capacity(input.len() * 3);
    for iv in input {
        if iv.lo & p != 0 {
            out.push(MaskIv::new(iv.lo | a, iv.hi | a, "rem:B1"));
        } else if card(iv.lo) <= k {
            out.push(MaskIv::new(iv.lo, iv.hi | a, "rem:B2"));
            if iv.hi & p == 0 {
                out.push(MaskIv::new(iv.lo | p, iv.hi | p, "rem:B3"));
            }
        } else {
            if iv.lo != iv.hi {
                return Err(format!(
                    "interval [{:#b},{:#b}] has lo above degree {k} but is not a singleton",
                    iv.lo, iv.hi
                ));
            }
            out.push(MaskIv::new(iv.lo, iv.lo, "rem:B4"));
            out.push(MaskIv::new(iv.lo | p, iv.lo | p, "rem:B5"));
            out.push(MaskIv::new(iv.lo | a, iv.lo | a, "rem:B6"));
        }
    }
    Ok(out)
}

/// One step of the all-type-2 induction. The appended variable `a` joins two
/// of the three generators; `third` is the untouched generator's support so
/// far, `full` the set of variables present so far. The input must be
/// upper-discrete of degree `|full| - 1`: tops of size `|full| - 1` split on
/// whether the third generator divides the lo, and the unique `[full, full]`
/// singleton doubles.
pub(crate) fn step0_rules(
    input: &[MaskIv],
    full: u64,
    third: u64,
    a: u64,
) -> Result<Vec<MaskIv>, String> {
    let n = card(full);
    let mut out = Vec::with_capacity(input.len() * 2);
    for iv in input {
        let top = card(iv.hi);
        if top == n {
            if iv.lo != full || iv.hi != full {
                return Err(format!(
                    "full-size interval [{:#b},{:#b}] is not the top singleton",
                    iv.lo, iv.hi
                ));
            }
            out.push(MaskIv::new(full, full, "step0:B3"));
            out.push(MaskIv::new(full | a, full | a, "step0:B4"));
        } else if n >= 1 && top == n - 1 {
            if third & !iv.lo == 0 {
                out.push(MaskIv::new(iv.lo, iv.hi | a, "step0:B1"));
            } else {
                out.push(MaskIv::new(iv.lo | a, iv.hi | a, "step0:B2"));
            }
        } else {
            return Err(format!(
                "interval top size {top} incompatible with upper-discrete degree {}",
                n.saturating_sub(1)
            ));
        }
    }
    Ok(out)
}

/// First private-variable step: `a1` joins the first generator (`gen1`).
/// Input is an all-type-2 partition of degree `|full| - 1`; intervals whose
/// lo is divisible by `gen1` are lifted wholesale, the rest keep their lo.
pub(crate) fn step1_rules(
    input: &[MaskIv],
    full: u64,
    gen1: u64,
    a1: u64,
) -> Result<Vec<MaskIv>, String> {
    let n = card(full);
    let mut out = Vec::with_capacity(input.len() * 2);
    for iv in input {
        let top = card(iv.hi);
        if top == n {
            if iv.lo != full || iv.hi != full {
                return Err(format!(
                    "full-size interval [{:#b},{:#b}] is not the top singleton",
                    iv.lo, iv.hi
                ));
            }
            out.push(MaskIv::new(full, full, "step1:B3"));
            out.push(MaskIv::new(full | a1, full | a1, "step1:B4"));
        } else if n >= 1 && top == n - 1 {
            if gen1 & !iv.lo == 0 {
                out.push(MaskIv::new(iv.lo | a1, iv.hi | a1, "step1:B1"));
            } else {
                out.push(MaskIv::new(iv.lo, iv.hi | a1, "step1:B2"));
            }
        } else {
            return Err(format!(
                "interval top size {top} incompatible with upper-discrete degree {}",
                n.saturating_sub(1)
            ));
        }
    }
    Ok(out)
}

/// Second private-variable step: `a2` joins the second generator. The input
/// is the step-1 output (degree `|full|`); the unique singleton above
/// `full + a1` is replaced by the two-element interval `[full, full + a1]`
/// and the singleton above it.
pub(crate) fn step2_rules(
    input: &[MaskIv],
    full: u64,
    gen2: u64,
    a1: u64,
    a2: u64,
) -> Result<Vec<MaskIv>, String> {
    let n = card(full);
    let mut out = Vec::with_capacity(input.len() * 2);
    for iv in input {
        let top = card(iv.hi);
        if top == n + 1 {
            if iv.lo != (full | a1) || iv.hi != (full | a1) {
                return Err(format!(
                    "size-{top} interval [{:#b},{:#b}] is not the top singleton",
                    iv.lo, iv.hi
                ));
            }
            out.push(MaskIv::new(full, full | a1, "step2:B3"));
            out.push(MaskIv::new(full | a1 | a2, full | a1 | a2, "step2:B4"));
        } else if top == n {
            if gen2 & !iv.lo == 0 {
                out.push(MaskIv::new(iv.lo | a2, iv.hi | a2, "step2:B1"));
            } else {
                out.push(MaskIv::new(iv.lo, iv.hi | a2, "step2:B2"));
            }
        } else {
            return Err(format!(
                "interval top size {top} incompatible with upper-discrete degree {n}"
            ));
        }
    }
    Ok(out)
}

/// Third private-variable step: `a3` joins the third generator. The three
/// intervals of the step-2 output that sit above `full` are replaced as a
/// group by four intervals covering everything above `full` except `full`
/// itself (which leaves the poset once every generator has a private
/// variable); all other intervals split on divisibility by `gen3`.
pub(crate) fn step3_rules(
    input: &[MaskIv],
    full: u64,
    gen3: u64,
    a1: u64,
    a2: u64,
    a3: u64,
) -> Result<Vec<MaskIv>, String> {
    let n = card(full);
    let mut out = Vec::with_capacity(input.len() * 2);
    let mut specials: Vec<(u64, u64)> = Vec::new();
    for iv in input {
        if full & !iv.hi == 0 {
            specials.push((iv.lo, iv.hi));
        } else if card(iv.hi) == n + 1 {
            if gen3 & !iv.lo == 0 {
                out.push(MaskIv::new(iv.lo | a3, iv.hi | a3, "step3:B1"));
            } else {
                out.push(MaskIv::new(iv.lo, iv.hi | a3, "step3:B2"));
            }
        } else {
            return Err(format!(
                "interval [{:#b},{:#b}] has neither the group shape nor top size {}",
                iv.lo,
                iv.hi,
                n + 1
            ));
        }
    }
    let mut expected = vec![
        (full, full | a1),
        (full | a2, full | a2),
        (full | a1 | a2, full | a1 | a2),
    ];
    expected.sort_unstable();
    specials.sort_unstable();
    if specials != expected {
        return Err(format!(
            "intervals above the core are {specials:?}, expected {expected:?}"
        ));
    }
    out.push(MaskIv::new(full | a1, full | a1 | a2, "step3:B3"));
    out.push(MaskIv::new(full | a2, full | a2 | a3, "step3:B4"));
    out.push(MaskIv::new(full | a3, full | a1 | a3, "step3:B5"));
    out.push(MaskIv::new(full | a1 | a2 | a3, full | a1 | a2 | a3, "step3:B6"));
    Ok(out)
}

/// Upper-discrete partition of degree `k` for the Boolean lattice spanned by
/// the given bit positions: recursive doubling on the highest position, a
/// degree-`k` copy without it glued to a degree-`k-1` copy shifted by it.
pub(crate) fn boolean_ud(positions: &[u32], k: usize) -> Vec<MaskIv> {
    let n = positions.len();
    debug_assert!(k <= n);
    let all: u64 = positions.iter().map(|&p| 1u64 << p).sum();
    if k == n {
        return vec![MaskIv::new(0, all, "ud:full")];
    }
    if k == 0 {
        // all singletons
        return (0u64..1 << n)
            .map(|bits| {
                let m = positions
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (bits >> i) & 1 == 1)
                    .fold(0u64, |acc, (_, &p)| acc | (1 << p));
                MaskIv::new(m, m, "ud:point")
            })
            .collect();
    }
    let last = 1u64 << positions[n - 1];
    let rest = &positions[..n - 1];
    let mut out = boolean_ud(rest, k);
    out.extend(
        boolean_ud(rest, k - 1)
            .into_iter()
            .map(|iv| MaskIv::new(iv.lo | last, iv.hi | last, "ud:shift")),
    );
    out
}

/// Keep the masks minimal under containment, deduplicated, largest (in
/// variable-1-first lexicographic order) first.
pub(crate) fn minimalize_masks(masks: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(masks.len());
    for &m in masks {
        if masks.iter().any(|&h| h != m && h & !m == 0 && m & !h != 0) {
            continue;
        }
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out.sort_unstable_by_key(|m| std::cmp::Reverse(m.reverse_bits()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(ivs: &[MaskIv]) -> Vec<(u64, u64)> {
        ivs.iter().map(|iv| (iv.lo, iv.hi)).collect()
    }

    #[test]
    fn lem_rules_worked_example() {
        // intervals of the poset of (x1, x2*x3); pivot x3, appended x4
        let input = vec![
            MaskIv::new(0b001, 0b011, "in"),
            MaskIv::new(0b101, 0b101, "in"),
            MaskIv::new(0b110, 0b111, "in"),
        ];
        let out = lem_rules(&input, 0b100, 0b1000);
        assert_eq!(
            pairs(&out),
            vec![
                (0b0001, 0b1011),
                (0b0101, 0b0111),
                (0b1101, 0b1101),
                (0b1110, 0b1111),
            ]
        );
    }

    #[test]
    fn lem_rules_single_interval() {
        // principal (x1*x2), pivot x2: the one interval rides along
        let input = vec![MaskIv::new(0b11, 0b11, "in")];
        let out = lem_rules(&input, 0b10, 0b100);
        assert_eq!(pairs(&out), vec![(0b111, 0b111)]);
    }

    #[test]
    fn rem_rules_branch_selection() {
        let input = vec![
            MaskIv::new(0b01, 0b01, "in"),  // pivot out, small lo: B2 + B3
            MaskIv::new(0b10, 0b11, "in"),  // pivot in lo: B1
            MaskIv::new(0b11, 0b11, "in"),  // pivot in lo: B1
        ];
        let out = rem_rules(&input, 1, 0b10, 0b100).unwrap();
        assert_eq!(
            pairs(&out),
            vec![
                (0b001, 0b101),
                (0b011, 0b011),
                (0b110, 0b111),
                (0b111, 0b111),
            ]
        );
    }

    #[test]
    fn rem_rules_rejects_bad_shape() {
        let input = vec![MaskIv::new(0b011, 0b111, "in")];
        assert!(rem_rules(&input, 1, 0b100, 0b1000).is_err());
    }

    #[test]
    fn boolean_ud_two_vars_degree_one() {
        let out = boolean_ud(&[0, 1], 1);
        assert_eq!(pairs(&out), vec![(0b00, 0b01), (0b10, 0b10), (0b11, 0b11)]);
    }

    #[test]
    fn boolean_ud_degenerate_degrees() {
        assert_eq!(pairs(&boolean_ud(&[0, 1, 2], 3)), vec![(0, 0b111)]);
        let points = boolean_ud(&[0, 1, 2], 0);
        assert_eq!(points.len(), 8);
        assert!(points.iter().all(|iv| iv.lo == iv.hi));
    }

    #[test]
    fn boolean_ud_respects_sparse_positions() {
        let out = boolean_ud(&[1, 3], 1);
        assert_eq!(
            pairs(&out),
            vec![(0b0000, 0b0010), (0b1000, 0b1000), (0b1010, 0b1010)]
        );
    }

    #[test]
    fn minimalize_masks_orders_canonically() {
        let out = minimalize_masks(&[0b110, 0b011, 0b111, 0b011]);
        assert_eq!(out, vec![0b011, 0b110]);
    }
}
