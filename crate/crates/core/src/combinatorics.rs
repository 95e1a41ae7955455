//! Signatures, arrays, patterns and their hypercube decomposition, plus the
//! lattice-path bijections behind the Catalan identity at `x = -1`.
//!
//! Indexing follows the tower picture: cells are numbered `1..=n-1` from the
//! bottom, and *location* `j` (`1 <= j <= n-2`) sits between cells `j` and
//! `j + 1`. A pattern `t` has a descent at location `j` when `t[j+1] < t[j]`.
//! A block boundary may sit at any location and must sit at every
//! non-descent, so the blocks of an array are determined by which descent
//! locations carry a boundary.

use std::collections::{BTreeMap, HashSet};
use std::env;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::binomial;

/// Default largest `n` for pattern enumeration; `11!` patterns at `n = 12`.
pub const DEFAULT_PATTERN_CAP: usize = 12;
/// Default largest `n` for brute-force lattice paths; `C(28, 14)` words at 14.
pub const DEFAULT_PATH_CAP: usize = 14;
/// Environment variable overriding both enumeration caps.
pub const CAP_ENV_VAR: &str = "BINREC_CAP";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("n = {n} exceeds the enumeration cap {cap} (set {CAP_ENV_VAR} to raise it)")]
    AboveCap { n: usize, cap: usize },
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("invalid signature for n = {n}: {reason}")]
    InvalidSignature { n: usize, reason: String },
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid array: {0}")]
    InvalidArray(String),
    #[error("cannot split at location {location}: {reason}")]
    Split { location: usize, reason: String },
    #[error("cannot merge at location {location}: {reason}")]
    Merge { location: usize, reason: String },
}

type Result<T> = std::result::Result<T, CombinatoricsError>;

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub patterns: usize,
    pub paths: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            patterns: DEFAULT_PATTERN_CAP,
            paths: DEFAULT_PATH_CAP,
        }
    }
}

impl Caps {
    /// Defaults, overridden by `BINREC_CAP` when it parses as an integer.
    pub fn from_env() -> Self {
        match env::var(CAP_ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            Some(cap) => Caps {
                patterns: cap,
                paths: cap,
            },
            None => Caps::default(),
        }
    }

    fn check_patterns(&self, n: usize) -> Result<()> {
        if n > self.patterns {
            return Err(CombinatoricsError::AboveCap {
                n,
                cap: self.patterns,
            });
        }
        Ok(())
    }

    fn check_paths(&self, n: usize) -> Result<()> {
        if n > self.paths {
            return Err(CombinatoricsError::AboveCap { n, cap: self.paths });
        }
        Ok(())
    }
}

/// An `n`-signature: block positions `1 = b_1 < b_2 < ... < b_s < n` with
/// `b_{j+1} <= 2 b_j` and `b_{s+1} := n`.
///
/// For `n = 1` the tower is empty and the only signature has no blocks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Signature {
    n: usize,
    b: Vec<usize>,
}

impl Signature {
    pub fn new(n: usize, b: Vec<usize>) -> Result<Self> {
        let invalid = |reason: &str| CombinatoricsError::InvalidSignature {
            n,
            reason: reason.to_string(),
        };
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        if n == 1 {
            return if b.is_empty() {
                Ok(Signature { n, b })
            } else {
                Err(invalid("n = 1 has no blocks"))
            };
        }
        if b.first() != Some(&1) {
            return Err(invalid("first block must sit at position 1"));
        }
        if *b.last().unwrap() >= n {
            return Err(invalid("block positions must be below n"));
        }
        let mut bounds = b.clone();
        bounds.push(n);
        for w in bounds.windows(2) {
            if w[1] <= w[0] {
                return Err(invalid("block positions must strictly increase"));
            }
            if w[1] > 2 * w[0] {
                return Err(invalid("a block is taller than its position"));
            }
        }
        Ok(Signature { n, b })
    }

    /// The canonical signature `(1, 2, ..., n-1)`.
    pub fn canonical(n: usize) -> Self {
        Signature {
            n,
            b: (1..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[usize] {
        &self.b
    }

    pub fn block_count(&self) -> usize {
        self.b.len()
    }

    /// Exponent of the weight `x^(s+1)` this signature's arrays contribute.
    pub fn weight_exponent(&self) -> usize {
        self.b.len() + 1
    }

    pub fn is_canonical(&self) -> bool {
        self.b.len() + 1 == self.n
    }

    /// `(position, length)` for each block, bottom to top.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.b.iter().enumerate().map(move |(j, &p)| {
            let next = self.b.get(j + 1).copied().unwrap_or(self.n);
            (p, next - p)
        })
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.b.iter().map(|v| v.to_string()).collect();
        write!(f, "({}; {})", self.n, parts.join(","))
    }
}

/// All `n`-signatures in lexicographic order of their position tuples.
pub fn enumerate_signatures(n: usize) -> Result<Vec<Signature>> {
    if n == 0 {
        return Err(CombinatoricsError::TooSmall { n, min: 1 });
    }
    if n == 1 {
        return Ok(vec![Signature { n, b: Vec::new() }]);
    }
    fn extend(n: usize, b: &mut Vec<usize>, out: &mut Vec<Signature>) {
        let last = *b.last().unwrap();
        if n <= 2 * last {
            out.push(Signature { n, b: b.clone() });
        }
        for next in last + 1..=(2 * last).min(n - 1) {
            b.push(next);
            extend(n, b, out);
            b.pop();
        }
    }
    let mut out = Vec::new();
    extend(n, &mut vec![1], &mut out);
    Ok(out)
}

/// Number of arrays filling the tower of `s`: `prod_j C(b_j, b_{j+1} - b_j)`.
pub fn count_arrays(s: &Signature) -> BigInt {
    s.blocks().fold(BigInt::one(), |acc, (pos, len)| {
        acc * binomial(pos, len as i64)
    })
}

/// A pattern `(t_1, ..., t_{n-1})` with `1 <= t_j <= j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pattern(Vec<usize>);

impl Pattern {
    pub fn new(t: Vec<usize>) -> Result<Self> {
        for (i, &v) in t.iter().enumerate() {
            if v == 0 || v > i + 1 {
                return Err(CombinatoricsError::InvalidPattern(format!(
                    "entry t_{} = {} outside 1..={}",
                    i + 1,
                    v,
                    i + 1
                )));
            }
        }
        Ok(Pattern(t))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// The index `n` this pattern belongs to (one more than its length).
    pub fn n(&self) -> usize {
        self.0.len() + 1
    }

    /// 1-based entry `t_j`.
    pub fn t(&self, j: usize) -> usize {
        self.0[j - 1]
    }

    pub fn is_descent(&self, location: usize) -> bool {
        location >= 1 && location < self.0.len() && self.t(location + 1) < self.t(location)
    }

    /// Locations `j` with `t_{j+1} < t_j`, ascending.
    pub fn descent_locations(&self) -> Vec<usize> {
        (1..self.0.len()).filter(|&j| self.is_descent(j)).collect()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn descent_count(p: &Pattern) -> usize {
    p.0.windows(2).filter(|w| w[1] < w[0]).count()
}

/// Streams all `(n-1)!` patterns of index `n` in lexicographic order.
#[derive(Clone, Debug)]
pub struct PatternIter {
    current: Vec<usize>,
    done: bool,
}

impl Iterator for PatternIter {
    type Item = Pattern;

    fn next(&mut self) -> Option<Pattern> {
        if self.done {
            return None;
        }
        let out = Pattern(self.current.clone());
        self.done = !odometer_step(&mut self.current);
        Some(out)
    }
}

// Advances a pattern odometer; returns false after the last pattern.
fn odometer_step(t: &mut [usize]) -> bool {
    for i in (0..t.len()).rev() {
        if t[i] < i + 1 {
            t[i] += 1;
            return true;
        }
        t[i] = 1;
    }
    false
}

pub fn enumerate_patterns(n: usize, caps: &Caps) -> Result<PatternIter> {
    if n == 0 {
        return Err(CombinatoricsError::TooSmall { n, min: 1 });
    }
    caps.check_patterns(n)?;
    Ok(PatternIter {
        current: vec![1; n - 1],
        done: false,
    })
}

/// Calls `f` on every pattern without allocating per pattern.
pub fn for_each_pattern(n: usize, caps: &Caps, mut f: impl FnMut(&[usize])) -> Result<()> {
    if n == 0 {
        return Err(CombinatoricsError::TooSmall { n, min: 1 });
    }
    caps.check_patterns(n)?;
    let mut t = vec![1; n - 1];
    loop {
        f(&t);
        if !odometer_step(&mut t) {
            return Ok(());
        }
    }
}

/// A filled tower: a pattern together with its block structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrayObj {
    pattern: Pattern,
    signature: Signature,
}

impl ArrayObj {
    pub fn new(pattern: Pattern, signature: Signature) -> Result<Self> {
        if pattern.n() != signature.n() {
            return Err(CombinatoricsError::InvalidArray(format!(
                "pattern has index {} but signature has {}",
                pattern.n(),
                signature.n()
            )));
        }
        for (pos, len) in signature.blocks() {
            let cells = &pattern.0[pos - 1..pos - 1 + len];
            if cells[0] > pos {
                return Err(CombinatoricsError::InvalidArray(format!(
                    "block at position {pos} holds {} > {pos}",
                    cells[0]
                )));
            }
            if cells.windows(2).any(|w| w[1] >= w[0]) {
                return Err(CombinatoricsError::InvalidArray(format!(
                    "block at position {pos} is not descending"
                )));
            }
        }
        Ok(ArrayObj { pattern, signature })
    }

    /// The array of `pattern` with boundaries exactly at the descent locations
    /// selected by `mask` (bit `k` refers to the `k`-th descent location).
    pub fn from_mask(pattern: &Pattern, descents: &[usize], mask: u64) -> Self {
        let n = pattern.n();
        let mut starts = Vec::with_capacity(n);
        if n > 1 {
            starts.push(1);
        }
        let mut k = 0;
        for loc in 1..n.saturating_sub(1) {
            let boundary = if descents.get(k) == Some(&loc) {
                let bit = mask >> k & 1 == 1;
                k += 1;
                bit
            } else {
                true
            };
            if boundary {
                starts.push(loc + 1);
            }
        }
        ArrayObj {
            pattern: pattern.clone(),
            signature: Signature { n, b: starts },
        }
    }

    /// The unique array of `pattern` in which no two blocks can be merged.
    pub fn primitive(pattern: &Pattern) -> Self {
        Self::from_mask(pattern, &pattern.descent_locations(), 0)
    }

    /// The unique array of `pattern` whose blocks all have length one.
    pub fn canonical(pattern: &Pattern) -> Self {
        ArrayObj {
            pattern: pattern.clone(),
            signature: Signature::canonical(pattern.n()),
        }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn block_count(&self) -> usize {
        self.signature.block_count()
    }

    pub fn cell_count(&self) -> usize {
        self.pattern.0.len()
    }

    fn has_boundary(&self, location: usize) -> bool {
        self.signature.b.binary_search(&(location + 1)).is_ok()
    }

    pub fn is_canonical(&self) -> bool {
        self.signature.is_canonical()
    }

    pub fn is_primitive(&self) -> bool {
        self.mergeable_locations().is_empty()
    }

    pub fn splittable_locations(&self) -> Vec<usize> {
        (1..self.cell_count())
            .filter(|&j| !self.has_boundary(j))
            .collect()
    }

    pub fn mergeable_locations(&self) -> Vec<usize> {
        (1..self.cell_count())
            .filter(|&j| self.has_boundary(j) && self.pattern.is_descent(j))
            .collect()
    }

    /// Cuts the block containing cells `location` and `location + 1`.
    pub fn split(&self, location: usize) -> Result<Self> {
        let err = |reason: &str| CombinatoricsError::Split {
            location,
            reason: reason.to_string(),
        };
        if location == 0 || location >= self.cell_count() {
            return Err(err("location is outside the tower"));
        }
        if self.has_boundary(location) {
            return Err(err("location is already a block boundary"));
        }
        let mut b = self.signature.b.clone();
        let at = b.binary_search(&(location + 1)).unwrap_err();
        b.insert(at, location + 1);
        Ok(ArrayObj {
            pattern: self.pattern.clone(),
            signature: Signature {
                n: self.signature.n,
                b,
            },
        })
    }

    /// Joins the two blocks meeting at `location`.
    pub fn merge(&self, location: usize) -> Result<Self> {
        let err = |reason: &str| CombinatoricsError::Merge {
            location,
            reason: reason.to_string(),
        };
        if location == 0 || location >= self.cell_count() {
            return Err(err("location is outside the tower"));
        }
        if !self.has_boundary(location) {
            return Err(err("no block boundary at this location"));
        }
        if !self.pattern.is_descent(location) {
            return Err(err("numbers do not descend across the boundary"));
        }
        let b = self
            .signature
            .b
            .iter()
            .copied()
            .filter(|&p| p != location + 1)
            .collect();
        Ok(ArrayObj {
            pattern: self.pattern.clone(),
            signature: Signature {
                n: self.signature.n,
                b,
            },
        })
    }
}

/// One connected component of the split/merge graph: all arrays sharing a
/// pattern, indexed by subsets of its descent locations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypercubeComponent {
    pub pattern: Pattern,
    pub descent_locations: Vec<usize>,
    pub dimension: usize,
}

impl HypercubeComponent {
    pub fn of(pattern: Pattern) -> Self {
        let descent_locations = pattern.descent_locations();
        let dimension = descent_locations.len();
        HypercubeComponent {
            pattern,
            descent_locations,
            dimension,
        }
    }

    pub fn size(&self) -> u64 {
        1u64 << self.dimension
    }

    pub fn member(&self, mask: u64) -> ArrayObj {
        ArrayObj::from_mask(&self.pattern, &self.descent_locations, mask)
    }

    pub fn members(&self) -> impl Iterator<Item = ArrayObj> + '_ {
        (0..self.size()).map(|mask| self.member(mask))
    }

    pub fn primitive(&self) -> ArrayObj {
        self.member(0)
    }

    pub fn canonical(&self) -> ArrayObj {
        self.member(self.size() - 1)
    }

    /// Checks that the component is a copy of the hypercube graph of its
    /// dimension: `2^l` distinct valid arrays, one primitive, one canonical,
    /// and toggling any coordinate is a split or merge that undoes itself.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let mut seen = HashSet::new();
        let mut primitive = 0;
        let mut canonical = 0;
        for mask in 0..self.size() {
            let a = self.member(mask);
            ArrayObj::new(a.pattern.clone(), a.signature.clone()).map_err(|e| e.to_string())?;
            if !seen.insert(a.signature.clone()) {
                return Err(format!("duplicate array for mask {mask:b}"));
            }
            primitive += a.is_primitive() as usize;
            canonical += a.is_canonical() as usize;
            for (k, &loc) in self.descent_locations.iter().enumerate() {
                let neighbor = self.member(mask ^ (1 << k));
                let stepped = if mask >> k & 1 == 1 {
                    a.merge(loc)
                } else {
                    a.split(loc)
                };
                let stepped = stepped.map_err(|e| format!("mask {mask:b}: {e}"))?;
                if stepped != neighbor {
                    return Err(format!(
                        "toggle at location {loc} does not reach the neighbor"
                    ));
                }
                let back = if mask >> k & 1 == 1 {
                    stepped.split(loc)
                } else {
                    stepped.merge(loc)
                };
                if back.as_ref() != Ok(&a) {
                    return Err(format!("toggle at location {loc} is not an involution"));
                }
            }
        }
        if primitive != 1 || canonical != 1 {
            return Err(format!(
                "{primitive} primitive and {canonical} canonical members"
            ));
        }
        let n = self.pattern.n();
        if n >= 2 && self.primitive().block_count() != n - 1 - self.dimension {
            return Err("primitive block count does not match the dimension".into());
        }
        Ok(())
    }
}

/// One component per pattern, `(n-1)!` in all.
pub fn hypercube_decomposition(n: usize, caps: &Caps) -> Result<Vec<HypercubeComponent>> {
    Ok(enumerate_patterns(n, caps)?
        .map(HypercubeComponent::of)
        .collect())
}

/// Aggregate counts of the decomposition, computed by streaming.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionSummary {
    pub n: usize,
    pub components: u64,
    pub arrays: u64,
    /// Number of components of each dimension.
    pub by_dimension: BTreeMap<usize, u64>,
}

impl DecompositionSummary {
    /// Primitive counts `P(n, r)` keyed by `r = n - dimension`.
    pub fn primitive_counts(&self) -> BTreeMap<usize, BigInt> {
        self.by_dimension
            .iter()
            .map(|(&l, &c)| (self.n - l, BigInt::from(c)))
            .collect()
    }
}

pub fn decomposition_summary(n: usize, caps: &Caps) -> Result<DecompositionSummary> {
    let mut by_dimension: BTreeMap<usize, u64> = BTreeMap::new();
    let mut components = 0u64;
    let mut arrays = 0u64;
    for_each_pattern(n, caps, |t| {
        let l = t.windows(2).filter(|w| w[1] < w[0]).count();
        *by_dimension.entry(l).or_default() += 1;
        components += 1;
        arrays += 1u64 << l;
    })?;
    Ok(DecompositionSummary {
        n,
        components,
        arrays,
        by_dimension,
    })
}

/// `P(n, r)` for every `r`, by dynamic programming over
/// (position, last value, descents so far).
pub fn primitive_counts_dp(n: usize) -> BTreeMap<usize, BigInt> {
    if n <= 1 {
        return BTreeMap::from([(1, BigInt::one())]);
    }
    // cur[v][d]: prefixes of length j ending in value v with d descents
    let mut cur = vec![vec![BigInt::zero(); 1]; 2];
    cur[1][0] = BigInt::one();
    for j in 1..n - 1 {
        let width = j; // descents possible so far: 0..=j-1
        let mut prefix = vec![vec![BigInt::zero(); width]; j + 1];
        for v in 1..=j {
            let (done, rest) = prefix.split_at_mut(v);
            for (d, cell) in rest[0].iter_mut().enumerate() {
                *cell = &done[v - 1][d] + cur[v].get(d).cloned().unwrap_or_default();
            }
        }
        let mut next = vec![vec![BigInt::zero(); width + 1]; j + 2];
        for (w, row) in next.iter_mut().enumerate().skip(1) {
            let upto = w.min(j);
            for d in 0..=width {
                let mut count = BigInt::zero();
                if d < width {
                    count += &prefix[upto][d];
                }
                if d >= 1 && upto < j {
                    count += &prefix[j][d - 1] - &prefix[upto][d - 1];
                }
                row[d] = count;
            }
        }
        cur = next;
    }
    let mut out = BTreeMap::new();
    for row in cur.iter().skip(1) {
        for (d, c) in row.iter().enumerate() {
            if !c.is_zero() {
                *out.entry(n - d).or_insert_with(BigInt::zero) += c;
            }
        }
    }
    out
}

/// Number of patterns of index `n` with exactly `n - r` descents.
pub fn primitive_count_dp(n: usize, r: usize) -> BigInt {
    primitive_counts_dp(n).remove(&r).unwrap_or_default()
}

/// `P(n, r)` by grouping enumerated patterns by descent count.
pub fn primitive_counts_by_enumeration(n: usize, caps: &Caps) -> Result<BTreeMap<usize, BigInt>> {
    Ok(decomposition_summary(n, caps)?.primitive_counts())
}

/// A monotone lattice path as a word of `E` (bit 0) and `N` (bit 1) steps,
/// first step in bit 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticePath {
    pub steps: u64,
    pub len: u32,
}

impl LatticePath {
    pub fn endpoint(&self) -> (u32, u32) {
        let up = (self.steps & mask(self.len)).count_ones();
        (self.len - up, up)
    }

    /// Index of the first step that reaches a point `(j, j+1)`, if any.
    pub fn first_crossing(&self) -> Option<u32> {
        let mut balance = 0i64;
        for i in 0..self.len {
            balance += if self.steps >> i & 1 == 1 { 1 } else { -1 };
            if balance > 0 {
                return Some(i);
            }
        }
        None
    }

    pub fn crosses_diagonal(&self) -> bool {
        self.first_crossing().is_some()
    }

    /// Reflects the part after the first crossing on the line `y = x + 1`.
    pub fn reflect_after_first_crossing(&self) -> Option<LatticePath> {
        let i = self.first_crossing()?;
        let tail = mask(self.len) & !mask(i + 1);
        Some(LatticePath {
            steps: self.steps ^ tail,
            len: self.len,
        })
    }

    /// Heights at which the horizontal steps are taken.
    pub fn horizontal_heights(&self) -> Vec<usize> {
        let mut height = 0;
        let mut out = Vec::new();
        for i in 0..self.len {
            if self.steps >> i & 1 == 1 {
                height += 1;
            } else {
                out.push(height);
            }
        }
        out
    }

    /// The path to `(k, top)` taking its `i`-th horizontal step at `heights[i]`.
    pub fn from_horizontal_heights(heights: &[usize], top: usize) -> LatticePath {
        let mut steps = 0u64;
        let mut pos = 0u32;
        let mut height = 0;
        for &h in heights.iter().chain(std::iter::once(&top)) {
            while height < h {
                steps |= 1 << pos;
                pos += 1;
                height += 1;
            }
            pos += 1;
        }
        LatticePath {
            steps,
            len: pos - 1,
        }
    }
}

fn mask(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// All words of length `len` with `ones` set bits, in increasing order (Gosper).
fn words_with_ones(len: u32, ones: u32) -> impl Iterator<Item = u64> {
    let limit = 1u64 << len;
    let first = if ones == 0 { 0 } else { mask(ones) };
    let mut state = Some(first);
    std::iter::from_fn(move || {
        let cur = state?;
        if cur >= limit && !(ones == 0 && cur == 0) {
            state = None;
            return None;
        }
        state = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let next = (((r ^ cur) >> 2) / c) | r;
            (next < limit).then_some(next)
        };
        Some(cur)
    })
}

/// All monotone paths from `(0,0)` to `(h, v)`.
pub fn monotone_paths(h: u32, v: u32) -> impl Iterator<Item = LatticePath> {
    words_with_ones(h + v, v).map(move |steps| LatticePath { steps, len: h + v })
}

/// Brute-force count of monotone paths `(0,0) -> (n,n)` that never pass
/// above the diagonal. Equals `C(2n, n) / (n + 1)`.
pub fn monotone_path_count(n: usize, caps: &Caps) -> Result<BigInt> {
    if n == 0 {
        return Err(CombinatoricsError::TooSmall { n, min: 1 });
    }
    caps.check_paths(n)?;
    let count = monotone_paths(n as u32, n as u32)
        .filter(|p| !p.crosses_diagonal())
        .count();
    Ok(BigInt::from(count))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionRecord {
    pub n: usize,
    pub all_paths: u64,
    pub noncrossing: u64,
    pub crossing: u64,
    /// Monotone paths `(0,0) -> (n-1, n+1)`.
    pub reflected_targets: u64,
    /// Reflection is injective, lands on the targets, and its inverse covers them.
    pub bijective: bool,
}

/// Verifies that reflecting after the first crossing is a bijection from
/// crossing paths to `(n,n)` onto all paths to `(n-1, n+1)`.
pub fn reflection_check(n: usize, caps: &Caps) -> Result<ReflectionRecord> {
    if n == 0 {
        return Err(CombinatoricsError::TooSmall { n, min: 1 });
    }
    caps.check_paths(n)?;
    let n32 = n as u32;
    let mut images = HashSet::new();
    let mut all_paths = 0u64;
    let mut crossing = 0u64;
    let mut lands = true;
    for p in monotone_paths(n32, n32) {
        all_paths += 1;
        if let Some(q) = p.reflect_after_first_crossing() {
            crossing += 1;
            lands &= q.endpoint() == (n32 - 1, n32 + 1);
            lands &= q.reflect_after_first_crossing() == Some(p);
            images.insert(q.steps);
        }
    }
    let mut targets = 0u64;
    let mut covered = true;
    for q in monotone_paths(n32 - 1, n32 + 1) {
        targets += 1;
        covered &= images.contains(&q.steps);
    }
    let injective = images.len() as u64 == crossing;
    Ok(ReflectionRecord {
        n,
        all_paths,
        noncrossing: all_paths - crossing,
        crossing,
        reflected_targets: targets,
        bijective: lands && covered && injective && targets == crossing,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternPathRecord {
    pub n: usize,
    pub patterns: u64,
    pub distinct_paths: u64,
    pub all_noncrossing: bool,
    pub round_trip: bool,
}

impl PatternPathRecord {
    pub fn passed(&self) -> bool {
        self.all_noncrossing && self.round_trip && self.patterns == self.distinct_paths
    }
}

fn nondecreasing_patterns(n: usize) -> Vec<Pattern> {
    fn extend(len: usize, t: &mut Vec<usize>, out: &mut Vec<Pattern>) {
        if t.len() == len {
            out.push(Pattern(t.clone()));
            return;
        }
        let j = t.len() + 1;
        let lo = t.last().copied().unwrap_or(1);
        for v in lo..=j {
            t.push(v);
            extend(len, t, out);
            t.pop();
        }
    }
    let mut out = Vec::new();
    extend(n - 1, &mut Vec::new(), &mut out);
    out
}

/// Maps each nondecreasing pattern of index `n` to the non-crossing path
/// `(0,0) -> (n-1, n-1)` whose horizontal steps sit at heights `t_j - 1`.
pub fn nondecreasing_pattern_path_bijection(n: usize, caps: &Caps) -> Result<PatternPathRecord> {
    if n == 0 {
        return Err(CombinatoricsError::TooSmall { n, min: 1 });
    }
    caps.check_patterns(n)?;
    let patterns = nondecreasing_patterns(n);
    let mut paths = HashSet::new();
    let mut all_noncrossing = true;
    let mut round_trip = true;
    for p in &patterns {
        let heights: Vec<usize> = p.entries().iter().map(|t| t - 1).collect();
        let path = LatticePath::from_horizontal_heights(&heights, n - 1);
        all_noncrossing &=
            !path.crosses_diagonal() && path.endpoint() == ((n - 1) as u32, (n - 1) as u32);
        let back: Vec<usize> = path.horizontal_heights().iter().map(|h| h + 1).collect();
        round_trip &= Pattern::new(back).as_ref() == Ok(p);
        paths.insert(path.steps);
    }
    Ok(PatternPathRecord {
        n,
        patterns: patterns.len() as u64,
        distinct_paths: paths.len() as u64,
        all_noncrossing,
        round_trip,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::{basic_format, binomial_format, catalan, nzc_sequence};

    fn caps() -> Caps {
        Caps::default()
    }

    fn pat(t: &[usize]) -> Pattern {
        Pattern::new(t.to_vec()).unwrap()
    }

    fn sig(n: usize, b: &[usize]) -> Signature {
        Signature::new(n, b.to_vec()).unwrap()
    }

    #[test]
    fn signatures_of_small_n() {
        assert_eq!(enumerate_signatures(2).unwrap(), vec![sig(2, &[1])]);
        assert_eq!(enumerate_signatures(1).unwrap().len(), 1);
        let five = enumerate_signatures(5).unwrap();
        assert_eq!(
            five,
            vec![
                sig(5, &[1, 2, 3]),
                sig(5, &[1, 2, 3, 4]),
                sig(5, &[1, 2, 4])
            ]
        );
        assert_eq!(enumerate_signatures(6).unwrap().len(), 6);
    }

    #[test]
    fn signature_validation() {
        assert!(Signature::new(5, vec![1, 3]).is_err());
        assert!(Signature::new(5, vec![1, 2]).is_err());
        assert!(Signature::new(5, vec![2, 3]).is_err());
        assert!(Signature::new(5, vec![1, 2, 5]).is_err());
        assert!(Signature::new(1, vec![1]).is_err());
    }

    #[test]
    fn second_position_is_two() {
        for n in 3..=14 {
            for s in enumerate_signatures(n).unwrap() {
                assert_eq!(s.positions()[1], 2, "{s}");
            }
        }
    }

    #[test]
    fn signature_counts_follow_nzc() {
        let nzc = nzc_sequence(20).unwrap();
        for n in 1..=20 {
            assert_eq!(
                BigInt::from(enumerate_signatures(n).unwrap().len()),
                nzc[n - 1],
                "n = {n}"
            );
        }
    }

    #[test]
    fn array_counts() {
        assert_eq!(count_arrays(&sig(6, &[1, 2, 3, 4])), BigInt::from(36));
        assert_eq!(count_arrays(&sig(6, &[1, 2, 3, 5])), BigInt::from(30));
        assert_eq!(count_arrays(&sig(6, &[1, 2, 4, 5])), BigInt::from(20));
        assert_eq!(count_arrays(&sig(5, &[1, 2, 3])), BigInt::from(6));
    }

    #[test]
    fn array_counts_by_weight_are_basic_format() {
        for n in 1..=14 {
            let mut by_weight: BTreeMap<usize, BigInt> = BTreeMap::new();
            for s in enumerate_signatures(n).unwrap() {
                *by_weight.entry(s.weight_exponent()).or_default() += count_arrays(&s);
            }
            assert_eq!(by_weight, basic_format(n).unwrap().xi, "n = {n}");
        }
    }

    #[test]
    fn pattern_enumeration() {
        let three: Vec<_> = enumerate_patterns(3, &caps()).unwrap().collect();
        assert_eq!(three, vec![pat(&[1, 1]), pat(&[1, 2])]);
        assert_eq!(enumerate_patterns(4, &caps()).unwrap().count(), 6);
        assert_eq!(enumerate_patterns(5, &caps()).unwrap().count(), 24);
        assert!(enumerate_patterns(5, &caps())
            .unwrap()
            .all(|p| Pattern::new(p.0.clone()).is_ok()));
        let tight = Caps {
            patterns: 4,
            paths: 4,
        };
        assert_eq!(
            enumerate_patterns(5, &tight).unwrap_err(),
            CombinatoricsError::AboveCap { n: 5, cap: 4 }
        );
    }

    #[test]
    fn pattern_validity() {
        assert!(Pattern::new(vec![1, 3]).is_err());
        assert!(Pattern::new(vec![0]).is_err());
        assert!(Pattern::new(vec![1, 2, 1, 4, 2]).is_ok());
    }

    #[test]
    fn descent_examples() {
        assert_eq!(descent_count(&pat(&[1, 2, 1, 4, 2])), 2);
        assert_eq!(pat(&[1, 2, 1, 4, 2]).descent_locations(), vec![2, 4]);
        assert_eq!(descent_count(&pat(&[1, 2, 3, 4])), 0);
        assert_eq!(descent_count(&pat(&[1, 1, 2, 2, 1])), 1);
    }

    #[test]
    fn array_validation() {
        // signature (5; 1,2,3) with pattern 1232: the top block holds 3,2
        let a = ArrayObj::new(pat(&[1, 2, 3, 2]), sig(5, &[1, 2, 3])).unwrap();
        assert!(a.is_primitive());
        assert!(ArrayObj::new(pat(&[1, 2, 2, 3]), sig(5, &[1, 2, 3])).is_err());
        assert!(ArrayObj::new(pat(&[1, 2, 3]), sig(5, &[1, 2, 3])).is_err());
    }

    #[test]
    fn six_arrays_of_signature_five_three_two_one() {
        let s = sig(5, &[1, 2, 3]);
        let count = enumerate_patterns(5, &caps())
            .unwrap()
            .filter(|p| ArrayObj::new(p.clone(), s.clone()).is_ok())
            .count();
        assert_eq!(count, 6);
    }

    #[test]
    fn split_and_merge_examples() {
        let p = pat(&[1, 2, 1, 4, 2]);
        let canon = ArrayObj::canonical(&p);
        assert!(canon.splittable_locations().is_empty());
        for loc in 1..=4 {
            assert!(canon.split(loc).is_err());
        }
        let prim = ArrayObj::primitive(&p);
        assert!(prim.mergeable_locations().is_empty());
        for loc in 1..=4 {
            assert!(prim.merge(loc).is_err());
        }
        let mut reached = HashSet::new();
        let a = prim.split(2).unwrap();
        let b = prim.split(4).unwrap();
        let ab = a.split(4).unwrap();
        assert_eq!(ab, b.split(2).unwrap());
        for arr in [prim.clone(), a.clone(), b, ab.clone()] {
            reached.insert(arr);
        }
        assert_eq!(reached.len(), 4);
        assert_eq!(ab, canon);
        assert_eq!(a.merge(2).unwrap(), prim);
        assert!(matches!(
            prim.split(1),
            Err(CombinatoricsError::Split { location: 1, .. })
        ));
        assert!(matches!(
            canon.merge(1),
            Err(CombinatoricsError::Merge { location: 1, .. })
        ));
        assert!(prim.split(9).is_err());
    }

    #[test]
    fn splitting_reaches_canonical_in_cells_minus_blocks_steps() {
        for p in enumerate_patterns(7, &caps()).unwrap() {
            let c = HypercubeComponent::of(p);
            for a in c.members() {
                let mut cur = a.clone();
                let mut steps = 0;
                while let Some(&loc) = cur.splittable_locations().first() {
                    cur = cur.split(loc).unwrap();
                    steps += 1;
                }
                assert!(cur.is_canonical());
                assert_eq!(steps, a.cell_count() - a.block_count());
            }
        }
    }

    #[test]
    fn splits_commute() {
        for p in enumerate_patterns(7, &caps()).unwrap() {
            let c = HypercubeComponent::of(p);
            for a in c.members() {
                let locs = a.splittable_locations();
                for (i, &u) in locs.iter().enumerate() {
                    for &v in &locs[i + 1..] {
                        let uv = a.split(u).unwrap().split(v).unwrap();
                        let vu = a.split(v).unwrap().split(u).unwrap();
                        assert_eq!(uv, vu);
                    }
                }
            }
        }
    }

    #[test]
    fn components_are_hypercubes() {
        for n in 2..=8 {
            for c in hypercube_decomposition(n, &caps()).unwrap() {
                c.verify().unwrap_or_else(|e| panic!("{}: {e}", c.pattern));
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let six = decomposition_summary(6, &caps()).unwrap();
        assert_eq!(six.arrays, 214);
        assert_eq!(six.components, 120);
        assert_eq!(six.by_dimension[&2], 8);
        let two = hypercube_decomposition(2, &caps()).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].dimension, 0);
    }

    #[test]
    fn every_array_lies_in_exactly_one_component() {
        for n in 2..=8 {
            let total: BigInt = enumerate_signatures(n)
                .unwrap()
                .iter()
                .map(count_arrays)
                .sum();
            assert_eq!(
                BigInt::from(decomposition_summary(n, &caps()).unwrap().arrays),
                total
            );
        }
    }

    #[test]
    fn dp_examples() {
        assert_eq!(primitive_count_dp(6, 5), BigInt::from(70));
        assert_eq!(primitive_count_dp(6, 6), BigInt::from(42));
        assert_eq!(primitive_count_dp(6, 4), BigInt::from(8));
        assert_eq!(primitive_count_dp(6, 3), BigInt::zero());
        for n in 1..=15 {
            assert_eq!(primitive_count_dp(n, n), catalan(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn dp_matches_enumeration_and_back_substitution() {
        for n in 1..=9 {
            let dp = primitive_counts_dp(n);
            assert_eq!(
                dp,
                primitive_counts_by_enumeration(n, &caps()).unwrap(),
                "n = {n}"
            );
            assert_eq!(dp, binomial_format(n).unwrap().prim, "n = {n}");
        }
        for n in [15, 25, 40] {
            assert_eq!(
                primitive_counts_dp(n),
                binomial_format(n).unwrap().prim,
                "n = {n}"
            );
        }
    }

    #[test]
    fn path_counts() {
        assert_eq!(monotone_path_count(1, &caps()).unwrap(), BigInt::from(1));
        assert_eq!(monotone_path_count(3, &caps()).unwrap(), BigInt::from(5));
        assert_eq!(monotone_path_count(4, &caps()).unwrap(), BigInt::from(14));
        assert_eq!(monotone_path_count(5, &caps()).unwrap(), BigInt::from(42));
        assert!(monotone_path_count(15, &caps()).is_err());
    }

    #[test]
    fn word_enumeration_counts() {
        assert_eq!(words_with_ones(6, 3).count(), 20);
        assert_eq!(words_with_ones(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(words_with_ones(3, 3).collect::<Vec<_>>(), vec![0b111]);
        assert!(words_with_ones(8, 4).all(|w| w.count_ones() == 4 && w < 256));
    }

    #[test]
    fn reflection_examples() {
        for n in 1..=8 {
            let rec = reflection_check(n, &caps()).unwrap();
            assert!(rec.bijective, "n = {n}: {rec:?}");
            assert_eq!(BigInt::from(rec.noncrossing), catalan(n + 1).unwrap());
            assert_eq!(
                BigInt::from(rec.reflected_targets),
                binomial(2 * n, n as i64 - 1)
            );
        }
    }

    #[test]
    fn heights_round_trip() {
        let p = LatticePath::from_horizontal_heights(&[0, 0, 1], 3);
        assert_eq!(p.endpoint(), (3, 3));
        assert_eq!(p.horizontal_heights(), vec![0, 0, 1]);
        assert!(!p.crosses_diagonal());
    }

    #[test]
    fn pattern_path_bijection() {
        let four = nondecreasing_pattern_path_bijection(4, &caps()).unwrap();
        assert_eq!(four.patterns, 5);
        assert!(four.passed());
        let two = nondecreasing_pattern_path_bijection(2, &caps()).unwrap();
        assert_eq!(two.patterns, 1);
        assert!(two.passed());
        let six = nondecreasing_pattern_path_bijection(6, &caps()).unwrap();
        assert_eq!(six.patterns, 42);
        assert!(six.passed());
    }
}
