//! Monomials and monomial ideals: exponent vectors, squarefree subsets,
//! minimal generating sets, and the support-based classifications the
//! partition constructions depend on.
//!
//! Variables are 1-indexed `x1..xn`. Squarefree monomials double as subsets
//! of `{1..n}`; bit `i-1` of a mask stores variable `i`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest ambient variable count for which subsets fit in a machine word.
pub const MAX_SUBSET_VARS: usize = 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("generator {index} has {got} coordinates, ambient has {want}")]
    LengthMismatch { index: usize, got: usize, want: usize },
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("the unit ideal is not allowed here")]
    UnitNotAllowed,
    #[error("ideal is not squarefree")]
    NotSquarefree,
    #[error("ambient variable count {0} exceeds the subset limit of {MAX_SUBSET_VARS}")]
    TooManyVars(usize),
    #[error("variable index {var} out of range 1..={n}")]
    VarOutOfRange { var: usize, n: usize },
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("variable index {var} out of range 1..={n}")]
    VarOutOfRange { var: usize, n: usize },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// An exponent vector in `N^n`; the monomial `x^c = prod x_i^{c(i)}`.
///
/// `Ord` is plain lexicographic on the coordinate sequence and exists only
/// as a tie-breaker; divisibility is [`Exponent::divides`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(coords: Vec<u32>) -> Self {
        Exponent(coords)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// Number of ambient variables.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of variable `var` (1-indexed).
    pub fn get(&self, var: usize) -> u32 {
        self.0[var - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    /// Componentwise `<=`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum (the lcm of the two monomials).
    pub fn lcm(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.len(), other.len());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Sum of coordinates, `|c|`.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Indices with positive exponent, as a bit mask (bit `i-1` = variable `i`).
    pub fn support_mask(&self) -> u64 {
        debug_assert!(self.len() <= MAX_SUBSET_VARS);
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << i))
    }

    /// Clamp every coordinate to 0/1.
    pub fn radical(&self) -> Exponent {
        Exponent(self.0.iter().map(|&e| e.min(1)).collect())
    }

    /// Squarefree exponent from a subset mask.
    pub fn from_mask(mask: u64, n: usize) -> Exponent {
        Exponent((0..n).map(|i| ((mask >> i) & 1) as u32).collect())
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A subset of `{1..n}`, bit-packed (bit `i-1` stores variable `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    bits: u64,
    n: u8,
}

impl Subset {
    pub fn new(n: usize, bits: u64) -> Result<Self, IdealError> {
        if n > MAX_SUBSET_VARS {
            return Err(IdealError::TooManyVars(n));
        }
        if n < 64 && bits >> n != 0 {
            let var = 64 - bits.leading_zeros() as usize;
            return Err(IdealError::VarOutOfRange { var, n });
        }
        Ok(Subset { bits, n: n as u8 })
    }

    pub fn empty(n: usize) -> Self {
        Subset::new(n, 0).expect("empty subset")
    }

    pub fn full(n: usize) -> Self {
        Subset::new(n, mask_full(n)).expect("full subset")
    }

    pub fn from_exponent(e: &Exponent) -> Result<Self, IdealError> {
        if !e.is_squarefree() {
            return Err(IdealError::NotSquarefree);
        }
        Subset::new(e.len(), e.support_mask())
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn ambient(&self) -> usize {
        self.n as usize
    }

    pub fn contains(&self, var: usize) -> bool {
        var >= 1 && var <= self.n as usize && (self.bits >> (var - 1)) & 1 == 1
    }

    /// Cardinality `|u|`.
    pub fn card(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn to_exponent(&self) -> Exponent {
        Exponent::from_mask(self.bits, self.n as usize)
    }

    /// Member variables in ascending order (1-indexed).
    pub fn iter_vars(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n as usize).filter(move |&v| self.contains(v))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter_vars().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// All-ones mask over `n` bits.
pub(crate) fn mask_full(n: usize) -> u64 {
    debug_assert!(n <= MAX_SUBSET_VARS);
    (1u64 << n) - 1
}

/// A monomial ideal given by its minimal monomial generators.
///
/// Construction canonicalizes: generators are minimalized (none divides
/// another), deduplicated, and sorted in descending lexicographic order on
/// exponent sequences, so `x1`-heavy generators come first. The unit ideal
/// (single generator 1) and the zero ideal (no generators) are representable
/// but only produced by the dedicated constructors; `new` rejects them.
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    n: usize,
    generators: Vec<Exponent>,
    squarefree: bool,
}

impl MonomialIdeal {
    /// Minimalize, canonicalize and validate a generating set.
    pub fn new(n: usize, gens: Vec<Exponent>) -> Result<Self, IdealError> {
        if gens.is_empty() {
            return Err(IdealError::EmptyGenerators);
        }
        for (i, g) in gens.iter().enumerate() {
            if g.len() != n {
                return Err(IdealError::LengthMismatch { index: i, got: g.len(), want: n });
            }
        }
        if gens.iter().any(|g| g.is_zero()) {
            return Err(IdealError::UnitNotAllowed);
        }
        let generators = minimalize(gens);
        let squarefree = generators.iter().all(|g| g.is_squarefree());
        Ok(MonomialIdeal { n, generators, squarefree })
    }

    /// The unit ideal `(1)`. Legal only inside the lattice machinery
    /// (full Boolean poset) and as a `split_ideal` factor.
    pub fn unit(n: usize) -> Self {
        MonomialIdeal { n, generators: vec![Exponent::zero(n)], squarefree: true }
    }

    /// The zero ideal (no generators, empty poset).
    pub fn zero(n: usize) -> Self {
        MonomialIdeal { n, generators: Vec::new(), squarefree: true }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_principal(&self) -> bool {
        self.generators.len() == 1
    }

    /// Exponent of `lcm(v_1,...,v_m)`; zero vector for the zero ideal.
    pub fn lcm_exponent(&self) -> Exponent {
        self.generators
            .iter()
            .fold(Exponent::zero(self.n), |acc, g| acc.lcm(g))
    }

    /// Support masks of the generators, in canonical order.
    pub fn support_masks(&self) -> Result<Vec<u64>, IdealError> {
        if self.n > MAX_SUBSET_VARS {
            return Err(IdealError::TooManyVars(self.n));
        }
        Ok(self.generators.iter().map(|g| g.support_mask()).collect())
    }

    /// True iff generator supports are pairwise disjoint (the generators
    /// form a regular sequence).
    pub fn is_complete_intersection(&self) -> bool {
        let masks: Vec<u64> = if self.n <= MAX_SUBSET_VARS {
            self.generators.iter().map(|g| g.support_mask()).collect()
        } else {
            // No mask shortcut past 63 variables; compare supports directly.
            return self.is_complete_intersection_slow();
        };
        for i in 0..masks.len() {
            for j in i + 1..masks.len() {
                if masks[i] & masks[j] != 0 {
                    return false;
                }
            }
        }
        true
    }

    fn is_complete_intersection_slow(&self) -> bool {
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                let a = &self.generators[i];
                let b = &self.generators[j];
                if a.coords().iter().zip(b.coords()).any(|(x, y)| *x > 0 && *y > 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Generator-wise exponent clamp to 0/1, minimalized.
    pub fn radical(&self) -> MonomialIdeal {
        if self.squarefree {
            return self.clone();
        }
        let gens = self.generators.iter().map(Exponent::radical).collect();
        MonomialIdeal { n: self.n, generators: minimalize(gens), squarefree: true }
    }

    /// Per-variable support counts.
    ///
    /// `type_count(x_j)` is the number of generators whose support contains
    /// `x_j`; `owner` is the 1-based index (canonical order) of the unique
    /// such generator when the count is 1.
    pub fn classify_variables(&self) -> Result<Vec<VariableType>, IdealError> {
        if !self.squarefree {
            return Err(IdealError::NotSquarefree);
        }
        let mut out = Vec::with_capacity(self.n);
        for var in 1..=self.n {
            let mut count = 0usize;
            let mut owner = None;
            for (gi, g) in self.generators.iter().enumerate() {
                if g.get(var) > 0 {
                    count += 1;
                    owner = Some(gi + 1);
                }
            }
            out.push(VariableType { count, owner: if count == 1 { owner } else { None } });
        }
        Ok(out)
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; ", self.n)?;
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Classification of one variable by how many generator supports contain it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VariableType {
    pub count: usize,
    /// 1-based generator index, set iff `count == 1`.
    pub owner: Option<usize>,
}

/// Keep the generators minimal under componentwise divisibility,
/// deduplicated, in canonical (descending lexicographic) order.
pub fn minimalize(gens: Vec<Exponent>) -> Vec<Exponent> {
    let mut out: Vec<Exponent> = Vec::with_capacity(gens.len());
    for g in &gens {
        if gens.iter().any(|h| h != g && h.divides(g) && !g.divides(h)) {
            continue; // strictly divisible by another generator
        }
        if !out.contains(g) {
            out.push(g.clone());
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

#[derive(Deserialize)]
struct IdealJson {
    n: usize,
    generators: Vec<Vec<u32>>,
}

/// Parse an ideal from either the compact text grammar
/// `n=<int>; <mono>(, <mono>)*` with `<mono> = x<i>(^<e>)?` terms joined by
/// `*`, or the JSON form `{"n": int, "generators": [[e1,...,en], ...]}`.
///
/// The result is minimalized; the squarefree flag is set iff every generator
/// exponent is 0/1.
pub fn parse_ideal(text: &str) -> Result<MonomialIdeal, ParseError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let spec: IdealJson = serde_json::from_str(trimmed)?;
        let gens = spec.generators.into_iter().map(Exponent::new).collect();
        return Ok(MonomialIdeal::new(spec.n, gens)?);
    }
    parse_compact(text)
}

fn parse_compact(text: &str) -> Result<MonomialIdeal, ParseError> {
    let (head, body) = text
        .split_once(';')
        .ok_or_else(|| ParseError::Syntax("expected `n=<int>; <generators>`".into()))?;
    let head = head.trim();
    let n: usize = head
        .strip_prefix("n")
        .map(str::trim_start)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| ParseError::Syntax(format!("expected `n=<int>`, got `{head}`")))?
        .trim()
        .parse()
        .map_err(|_| ParseError::Syntax(format!("invalid variable count in `{head}`")))?;
    if n == 0 {
        return Err(ParseError::Syntax("variable count must be positive".into()));
    }
    let mut gens = Vec::new();
    for mono in body.split(',') {
        let mono = mono.trim();
        if mono.is_empty() {
            return Err(ParseError::Syntax("empty generator".into()));
        }
        gens.push(parse_monomial(mono, n)?);
    }
    Ok(MonomialIdeal::new(n, gens)?)
}

pub(crate) fn parse_monomial(mono: &str, n: usize) -> Result<Exponent, ParseError> {
    let mut coords = vec![0u32; n];
    for term in mono.split('*') {
        let term = term.trim();
        let rest = term
            .strip_prefix('x')
            .ok_or_else(|| ParseError::Syntax(format!("expected `x<i>`, got `{term}`")))?;
        let (var_str, exp_str) = match rest.split_once('^') {
            Some((v, e)) => (v.trim(), Some(e.trim())),
            None => (rest.trim(), None),
        };
        let var: usize = var_str
            .parse()
            .map_err(|_| ParseError::Syntax(format!("invalid variable index in `{term}`")))?;
        if var < 1 || var > n {
            return Err(ParseError::VarOutOfRange { var, n });
        }
        let exp: u32 = match exp_str {
            Some(e) => e
                .parse()
                .map_err(|_| ParseError::Syntax(format!("invalid exponent in `{term}`")))?,
            None => 1,
        };
        coords[var - 1] = coords[var - 1]
            .checked_add(exp)
            .ok_or_else(|| ParseError::Syntax(format!("exponent overflow in `{mono}`")))?;
    }
    Ok(Exponent::new(coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exps(raw: &[&[u32]]) -> Vec<Exponent> {
        raw.iter().map(|c| Exponent::new(c.to_vec())).collect()
    }

    #[test]
    fn parse_triangle() {
        let ideal = parse_ideal("n=3; x1*x2, x2*x3, x1*x3").unwrap();
        assert_eq!(ideal.num_generators(), 3);
        assert!(ideal.is_squarefree());
        let masks = ideal.support_masks().unwrap();
        let mut sorted = masks.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0b011, 0b101, 0b110]);
    }

    #[test]
    fn parse_minimalizes() {
        let ideal = parse_ideal("n=2; x1, x1*x2").unwrap();
        assert_eq!(ideal.num_generators(), 1);
        assert_eq!(ideal.generators()[0], Exponent::new(vec![1, 0]));
    }

    #[test]
    fn parse_general_exponents() {
        let ideal = parse_ideal("n=3; x1^2, x2*x3^2").unwrap();
        assert!(!ideal.is_squarefree());
        assert_eq!(
            ideal.generators(),
            &exps(&[&[2, 0, 0], &[0, 1, 2]])[..]
        );
    }

    #[test]
    fn parse_json_form() {
        let ideal = parse_ideal(r#"{"n": 3, "generators": [[1,1,0],[0,1,1]]}"#).unwrap();
        assert_eq!(ideal.num_generators(), 2);
        assert!(ideal.is_squarefree());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_ideal("").is_err());
        assert!(parse_ideal("n=3").is_err());
        assert!(parse_ideal("n=3;").is_err());
        assert!(parse_ideal("n=3; y1").is_err());
        assert!(parse_ideal("n=3; x4").is_err());
        assert!(parse_ideal("n=0; x1").is_err());
        assert!(parse_ideal("n=2; x1^0").is_err()); // unit generator
        assert!(parse_ideal(r#"{"n": 2, "generators": []}"#).is_err());
    }

    #[test]
    fn minimalize_divisible() {
        let out = minimalize(exps(&[&[1, 1, 0], &[1, 1, 1]]));
        assert_eq!(out, exps(&[&[1, 1, 0]]));
    }

    #[test]
    fn minimalize_antichain_kept() {
        let out = minimalize(exps(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn minimalize_general() {
        let out = minimalize(exps(&[&[2, 0], &[1, 1], &[2, 1]]));
        assert_eq!(out, exps(&[&[2, 0], &[1, 1]]));
    }

    #[test]
    fn minimalize_dedups_and_orders() {
        let a = minimalize(exps(&[&[0, 1, 1], &[1, 1, 0], &[0, 1, 1]]));
        let b = minimalize(exps(&[&[1, 1, 0], &[0, 1, 1]]));
        assert_eq!(a, b);
        // descending lex: x1x2 before x2x3
        assert_eq!(a[0], Exponent::new(vec![1, 1, 0]));
    }

    #[test]
    fn complete_intersection_detection() {
        assert!(parse_ideal("n=3; x1, x2*x3").unwrap().is_complete_intersection());
        assert!(!parse_ideal("n=3; x1*x2, x2*x3").unwrap().is_complete_intersection());
        assert!(parse_ideal("n=3; x1^2, x2*x3^2").unwrap().is_complete_intersection());
    }

    #[test]
    fn radical_clamps_and_minimalizes() {
        let r = parse_ideal("n=3; x1^2, x2*x3^2").unwrap().radical();
        assert_eq!(r, parse_ideal("n=3; x1, x2*x3").unwrap());
        let sq = parse_ideal("n=3; x1*x2, x2*x3").unwrap();
        assert_eq!(sq.radical(), sq);
        let collapsed = parse_ideal("n=2; x1^2, x1*x2^3").unwrap().radical();
        assert_eq!(collapsed, parse_ideal("n=2; x1").unwrap());
    }

    #[test]
    fn radical_idempotent_and_preserves_ci() {
        let ideal = parse_ideal("n=4; x1^3*x2, x3^2").unwrap();
        assert_eq!(ideal.radical().radical(), ideal.radical());
        assert!(ideal.is_complete_intersection());
        assert!(ideal.radical().is_complete_intersection());
    }

    #[test]
    fn classify_triangle_all_type_two() {
        let ideal = parse_ideal("n=3; x1*x2, x2*x3, x1*x3").unwrap();
        let types = ideal.classify_variables().unwrap();
        assert!(types.iter().all(|t| t.count == 2 && t.owner.is_none()));
    }

    #[test]
    fn classify_owners() {
        // canonical order puts x1 first, x2*x3 second
        let ideal = parse_ideal("n=4; x1, x2*x3").unwrap();
        assert_eq!(ideal.generators()[0], Exponent::new(vec![1, 0, 0, 0]));
        let types = ideal.classify_variables().unwrap();
        assert_eq!(types[0], VariableType { count: 1, owner: Some(1) });
        assert_eq!(types[1], VariableType { count: 1, owner: Some(2) });
        assert_eq!(types[2], VariableType { count: 1, owner: Some(2) });
        assert_eq!(types[3], VariableType { count: 0, owner: None });
    }

    #[test]
    fn classify_principal() {
        let ideal = parse_ideal("n=3; x1*x2*x3").unwrap();
        let types = ideal.classify_variables().unwrap();
        assert!(types.iter().all(|t| t.count == 1 && t.owner == Some(1)));
    }

    #[test]
    fn type_counts_sum_to_ambient() {
        let ideal = parse_ideal("n=5; x1*x2, x2*x3, x4").unwrap();
        let types = ideal.classify_variables().unwrap();
        assert_eq!(types.len(), 5);
        // every variable gets exactly one type
        let total: usize = (0..=ideal.num_generators())
            .map(|t| types.iter().filter(|v| v.count == t).count())
            .sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn generators_form_antichain() {
        let ideal = parse_ideal("n=4; x1*x2, x2*x3, x1*x2*x3, x4").unwrap();
        let gens = ideal.generators();
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                if i != j {
                    assert!(!gens[i].divides(&gens[j]));
                }
            }
        }
    }

    #[test]
    fn subset_roundtrip() {
        let s = Subset::new(5, 0b10110).unwrap();
        assert_eq!(s.card(), 3);
        assert!(s.contains(2) && s.contains(3) && s.contains(5));
        assert!(!s.contains(1));
        assert_eq!(Subset::from_exponent(&s.to_exponent()).unwrap(), s);
        assert!(Subset::new(3, 0b1000).is_err());
    }

    #[test]
    fn display_roundtrip() {
        for text in ["n=3; x1*x2, x2*x3, x1*x3", "n=3; x1^2, x2*x3^2", "n=2; x1"] {
            let ideal = parse_ideal(text).unwrap();
            let again = parse_ideal(&ideal.to_string()).unwrap();
            assert_eq!(ideal, again);
        }
    }
}
