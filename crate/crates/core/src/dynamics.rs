//! The pattern-ending sums `S_n(r)`, their one-step recursion, and detection of
//! the sign change / extreme / inflection structure of `S_n` for `x in (-1, 0)`.
//!
//! `S_n(r)` (for `1 <= r <= n-1`) sums the contributions `x^(n-l) (1+x)^l` of
//! all patterns ending in `t_{n-1} = r`. The auxiliary entry `S_n(0)` is kept
//! alongside; it does not belong to the sequence but takes part in the
//! finite-difference relation and in the shape scan.
//!
//! With `x = p/q` every `S_n(r)` is an integer over `q^n`, so the sequence is
//! stored as integer numerators over that common denominator. Steps then need
//! no gcd reductions, and signs and comparisons are read off the numerators.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{format_rational, BigRational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("the parameter x must be nonzero")]
    ZeroParameter,
    #[error("index must be at least 2, got {0}")]
    IndexTooSmall(usize),
    #[error("shape detection needs x in (-1, 0), got {0}")]
    OutOfContract(String),
}

/// `S_n(0..=n-1)` at a fixed rational `x = p/q`.
#[derive(Clone, Debug, PartialEq)]
pub struct SSequence {
    n: usize,
    x: BigRational,
    y: BigRational,
    /// `q^n`.
    den: BigInt,
    /// `q^n S_n(r)` for `r = 0..=n-1`; entry 0 is the auxiliary term.
    nums: Vec<BigInt>,
    /// `q^(n-1) S_{n-1}(0..=n-2)` when this sequence came from a step.
    previous: Option<Vec<BigInt>>,
}

impl SSequence {
    /// `S_2(1) = x^2`, with `S_2(0) = y a_1`.
    pub fn initial(x: &BigRational) -> Result<Self, DynamicsError> {
        if x.is_zero() {
            return Err(DynamicsError::ZeroParameter);
        }
        let y = x + BigRational::one();
        let (p, q) = (x.numer(), x.denom());
        Ok(SSequence {
            n: 2,
            den: q * q,
            nums: vec![(p + q) * p, p * p],
            x: x.clone(),
            y,
            previous: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    /// The common denominator `q^n`.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// `q^n S_n(0), ..., q^n S_n(n-1)`.
    pub fn numerators(&self) -> &[BigInt] {
        &self.nums
    }

    /// `q^(n-1) S_{n-1}(0..=n-2)`, if retained.
    pub fn previous_numerators(&self) -> Option<&[BigInt]> {
        self.previous.as_deref()
    }

    /// `S_n(r)` for `0 <= r <= n-1`.
    pub fn get(&self, r: usize) -> BigRational {
        BigRational::new(self.nums[r].clone(), self.den.clone())
    }

    pub fn aux(&self) -> BigRational {
        self.get(0)
    }

    /// `S_n(1), ..., S_n(n-1)`.
    pub fn values(&self) -> Vec<BigRational> {
        (1..self.n).map(|r| self.get(r)).collect()
    }

    /// `S_n(0), ..., S_n(n-1)`.
    pub fn with_aux(&self) -> Vec<BigRational> {
        (0..self.n).map(|r| self.get(r)).collect()
    }

    /// `S_{n-1}(0..=n-2)`, if retained.
    pub fn previous(&self) -> Option<Vec<BigRational>> {
        let den = &self.den / self.x.denom();
        self.previous.as_ref().map(|p| {
            p.iter()
                .map(|v| BigRational::new(v.clone(), den.clone()))
                .collect()
        })
    }

    fn total_numerator(&self) -> BigInt {
        self.nums[1..].iter().sum()
    }

    /// `sum_{j=1}^{n-1} S_n(j) = a_n`.
    pub fn total(&self) -> BigRational {
        BigRational::new(self.total_numerator(), self.den.clone())
    }
}

impl fmt::Display for SSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values().iter().map(format_rational).collect();
        write!(
            f,
            "S_{} = ({}) [aux {}]",
            self.n,
            parts.join(", "),
            format_rational(&self.aux())
        )
    }
}

/// One application of the recursion, `O(n)` via prefix sums.
pub fn s_step(s: &SSequence) -> SSequence {
    let n = s.n;
    let (p, q) = (s.x.numer(), s.x.denom());
    let pq = p + q;
    let total = s.total_numerator();
    let mut nums = Vec::with_capacity(n + 1);
    nums.push(&pq * &total);
    let mut prefix = BigInt::zero();
    for r in 1..=n - 2 {
        prefix += &s.nums[r];
        nums.push(p * &prefix + &pq * (&total - &prefix));
    }
    let top = p * &total;
    nums.push(top.clone());
    nums.push(top);
    SSequence {
        n: n + 1,
        x: s.x.clone(),
        y: s.y.clone(),
        den: &s.den * q,
        nums,
        previous: Some(s.nums.clone()),
    }
}

/// Yields `S_2, S_3, ...` without bound.
#[derive(Clone, Debug)]
pub struct SIter {
    next: Option<SSequence>,
}

impl Iterator for SIter {
    type Item = SSequence;

    fn next(&mut self) -> Option<SSequence> {
        let cur = self.next.take()?;
        self.next = Some(s_step(&cur));
        Some(cur)
    }
}

pub fn s_iter(x: &BigRational) -> Result<SIter, DynamicsError> {
    Ok(SIter {
        next: Some(SSequence::initial(x)?),
    })
}

pub fn s_sequence(x: &BigRational, n: usize) -> Result<SSequence, DynamicsError> {
    if n < 2 {
        return Err(DynamicsError::IndexTooSmall(n));
    }
    Ok(s_iter(x)?.nth(n - 2).expect("unbounded iterator"))
}

/// Checks `S_{n+1}(r) = S_{n+1}(r-1) - S_n(r)` for `1 <= r <= n-1`.
pub fn finite_difference_check(prev: &SSequence, s: &SSequence) -> bool {
    if s.n != prev.n + 1 || s.x != prev.x {
        return false;
    }
    // bring S_n over the denominator of S_{n+1}
    let q = s.x.denom();
    (1..prev.n).all(|r| s.nums[r] == &s.nums[r - 1] - &prev.nums[r] * q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremeKind {
    Max,
    Min,
}

impl fmt::Display for ExtremeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtremeKind::Max => "max",
            ExtremeKind::Min => "min",
        })
    }
}

/// `S(a) != 0`, `S(a+1) = ... = S(b-1) = 0`, `S(b)` of the opposite sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignChange {
    pub a: usize,
    pub b: usize,
    pub up: bool,
    /// `a >= 1`, i.e. the auxiliary entry is not involved.
    pub strict: bool,
}

/// `S(a) < S(a+1) = ... = S(b-1) > S(b)` (maximum) or the reverse.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Extreme {
    pub a: usize,
    pub b: usize,
    pub kind: ExtremeKind,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    pub strict: bool,
}

/// An extreme of the discrete derivative, read off `S_{n-1}` whose flanks share
/// a sign. `c` and `d` are shifted down by one from the `S_{n-1}` flank
/// indices, so `c` can be `-1` when the auxiliary entry is a flank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inflection {
    pub c: i64,
    pub d: i64,
    pub kind: ExtremeKind,
    pub strict: bool,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeReport {
    pub n: usize,
    pub sign_changes: Vec<SignChange>,
    pub extremes: Vec<Extreme>,
    pub inflections: Vec<Inflection>,
    /// Number of `r in 1..=n-1` with `S_n(r) = 0`.
    pub zero_count: usize,
}

impl ShapeReport {
    pub fn sign_change_locus(&self) -> Option<(usize, usize)> {
        match self.sign_changes.as_slice() {
            [e] => Some((e.a, e.b)),
            _ => None,
        }
    }

    pub fn extreme_locus(&self) -> Option<(usize, usize, ExtremeKind)> {
        match self.extremes.as_slice() {
            [e] => Some((e.a, e.b, e.kind)),
            _ => None,
        }
    }

    pub fn inflection_locus(&self) -> Option<(i64, i64)> {
        match self.inflections.as_slice() {
            [e] => Some((e.c, e.d)),
            _ => None,
        }
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.sign_changes.len(),
            self.extremes.len(),
            self.inflections.len(),
        )
    }
}

fn find_sign_changes<T: Ord + Zero>(seq: &[T]) -> Vec<SignChange> {
    let zero = T::zero();
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for (i, v) in seq.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        if let Some(a) = last {
            if (seq[a] > zero) != (*v > zero) {
                out.push(SignChange {
                    a,
                    b: i,
                    up: *v > zero,
                    strict: a >= 1,
                });
            }
        }
        last = Some(i);
    }
    out
}

// (left flank, right flank, kind) of every strict local extreme of the
// plateau-collapsed sequence.
fn find_extremes<T: Ord>(seq: &[T]) -> Vec<(usize, usize, ExtremeKind)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < seq.len() {
        let mut j = i;
        while j + 1 < seq.len() && seq[j + 1] == seq[i] {
            j += 1;
        }
        runs.push((i, j));
        i = j + 1;
    }
    runs.windows(3)
        .filter_map(|w| {
            let (before, here, after) = (&seq[w[0].1], &seq[w[1].0], &seq[w[2].0]);
            let kind = if here > before && here > after {
                ExtremeKind::Max
            } else if here < before && here < after {
                ExtremeKind::Min
            } else {
                return None;
            };
            Some((w[0].1, w[2].0, kind))
        })
        .collect()
}

fn check_contract(x: &BigRational) -> Result<(), DynamicsError> {
    if !x.is_negative() || *x <= -BigRational::one() {
        return Err(DynamicsError::OutOfContract(format_rational(x)));
    }
    Ok(())
}

/// Detects the shape events of `S_n` over `S_n(0..=n-2)`; the last entry
/// `S_n(n-1)` never takes part. Inflections need the retained `S_{n-1}`.
pub fn shape_report(s: &SSequence) -> Result<ShapeReport, DynamicsError> {
    check_contract(&s.x)?;
    let n = s.n;
    let window = &s.nums[..n - 1];
    let sign_changes = if n >= 4 {
        find_sign_changes(window)
    } else {
        Vec::new()
    };
    let extremes = if n >= 5 {
        find_extremes(window)
            .into_iter()
            .map(|(a, b, kind)| Extreme {
                a,
                b,
                kind,
                value: s.get(a + 1),
                strict: a >= 1,
            })
            .collect()
    } else {
        Vec::new()
    };
    let inflections = match s.previous_numerators() {
        Some(p) if n >= 6 => find_extremes(p)
            .into_iter()
            .filter(|&(a, b, kind)| match kind {
                ExtremeKind::Max => p[a].is_positive() && p[b].is_positive(),
                ExtremeKind::Min => p[a].is_negative() && p[b].is_negative(),
            })
            .map(|(a, b, kind)| Inflection {
                c: a as i64 - 1,
                d: b as i64 - 1,
                kind,
                strict: a >= 2,
            })
            .collect(),
        _ => Vec::new(),
    };
    let zero_count = s.nums[1..].iter().filter(|v| v.is_zero()).count();
    Ok(ShapeReport {
        n,
        sign_changes,
        extremes,
        inflections,
        zero_count,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ShapeRule {
    /// Exactly one sign change, one extreme and one inflection.
    ShA,
    /// Maxima are positive, minima negative.
    ShB,
    /// At most one zero.
    ShC,
    /// The maximum or the minimum lies between `x a_{n-1}` and `y a_{n-1}`.
    ShD,
    /// Sign and slope of `S_{n-1}(0..=2)` relative to the extreme and inflection.
    ShE,
}

impl fmt::Display for ShapeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeViolation {
    pub n: usize,
    pub rule: ShapeRule,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeScan {
    pub x: String,
    pub reports: Vec<ShapeReport>,
    pub violations: Vec<ShapeViolation>,
    /// Indices at which the ShE hypotheses held and it was tested.
    pub she_tested: usize,
}

impl ShapeScan {
    pub fn violations_of(&self, rule: ShapeRule) -> impl Iterator<Item = &ShapeViolation> {
        self.violations.iter().filter(move |v| v.rule == rule)
    }

    pub fn passes(&self, rule: ShapeRule) -> bool {
        self.violations_of(rule).next().is_none()
    }
}

fn between(v: &BigInt, p: &BigInt, q: &BigInt) -> bool {
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    lo <= v && v <= hi
}

fn check_rules(s: &SSequence, report: &ShapeReport, out: &mut Vec<ShapeViolation>) -> bool {
    let n = s.n;
    let mut push = |rule, detail: String| out.push(ShapeViolation { n, rule, detail });
    let as_rational = |v: &BigInt| format_rational(&BigRational::new(v.clone(), s.den.clone()));

    let (sc, ex, inf) = report.counts();
    if (sc, ex, inf) != (1, 1, 1) {
        push(
            ShapeRule::ShA,
            format!("{sc} sign changes, {ex} extremes, {inf} inflections"),
        );
    }
    for e in &report.extremes {
        let ok = match e.kind {
            ExtremeKind::Max => e.value.is_positive(),
            ExtremeKind::Min => e.value.is_negative(),
        };
        if !ok {
            push(
                ShapeRule::ShB,
                format!(
                    "{} at ({}, {}) has value {}",
                    e.kind,
                    e.a,
                    e.b,
                    format_rational(&e.value)
                ),
            );
        }
    }
    if report.zero_count > 1 {
        push(ShapeRule::ShC, format!("{} zeros", report.zero_count));
    }

    // x a_{n-1} and y a_{n-1} over the common denominator q^n
    let prev = s
        .previous_numerators()
        .expect("scanned sequences come from a step");
    let a_prev: BigInt = prev[1..].iter().sum();
    let (p, q) = (s.x.numer(), s.x.denom());
    let lo_end = p * &a_prev;
    let hi_end = (p + q) * &a_prev;
    let min = s.nums[1..].iter().min().unwrap();
    let max = s.nums[1..].iter().max().unwrap();
    if !between(min, &lo_end, &hi_end) && !between(max, &lo_end, &hi_end) {
        push(
            ShapeRule::ShD,
            format!(
                "min {} and max {} both outside [{}, {}]",
                as_rational(min),
                as_rational(max),
                as_rational(&lo_end),
                as_rational(&hi_end)
            ),
        );
    }

    let strict_ex: Vec<&Extreme> = report.extremes.iter().filter(|e| e.strict).collect();
    let strict_inf: Vec<&Inflection> = report.inflections.iter().filter(|e| e.strict).collect();
    if let ([e], [i]) = (strict_ex.as_slice(), strict_inf.as_slice()) {
        let q: Vec<BigInt> = prev[..3]
            .iter()
            .map(|v| {
                if e.kind == ExtremeKind::Max {
                    v.clone()
                } else {
                    -v
                }
            })
            .collect();
        let zero = BigInt::zero();
        let (ok, expect) = if (e.a as i64) <= i.c {
            (
                q[0] < q[1] && q[1] < q[2] && q[2] < zero,
                "increasing and below zero",
            )
        } else {
            (
                zero > q[0] && q[0] > q[1] && q[1] > q[2],
                "decreasing and below zero",
            )
        };
        if !ok {
            push(
                ShapeRule::ShE,
                format!(
                    "S_{}(0..=2) not {expect} (extreme at {}, inflection at {})",
                    n - 1,
                    e.a,
                    i.c
                ),
            );
        }
        return true;
    }
    false
}

/// Scans `6 <= n <= n_max` and checks ShA to ShE.
pub fn shape_scan(x: &BigRational, n_max: usize) -> Result<ShapeScan, DynamicsError> {
    shape_scan_range(x, 6, n_max)
}

pub fn shape_scan_range(
    x: &BigRational,
    n_lo: usize,
    n_hi: usize,
) -> Result<ShapeScan, DynamicsError> {
    check_contract(x)?;
    let n_lo = n_lo.max(6);
    let mut reports = Vec::new();
    let mut violations = Vec::new();
    let mut she_tested = 0;
    for s in s_iter(x)?
        .skip(n_lo - 2)
        .take((n_hi + 1).saturating_sub(n_lo))
    {
        let report = shape_report(&s)?;
        she_tested += check_rules(&s, &report, &mut violations) as usize;
        reports.push(report);
    }
    Ok(ShapeScan {
        x: format_rational(x),
        reports,
        violations,
        she_tested,
    })
}
