//! Step-function embedding of `S_n`, the averaged operators `A_n` and their
//! limit `T`, the eigenstructure of `T`, and the angle / growth diagnostics.
//!
//! `s_n` lives on `[0, 1)` with `n - 1` uniform steps of height
//! `S_n(j) / (n-2)!`, so that `a_n = (n-1)! * integral(s_n)`. Kernels:
//! `alpha_n(u, v)` is `x` on the rectangles `i >= j` of the `n x (n-1)` grid and
//! `y = 1 + x` elsewhere; the limit kernel `kappa(u, v)` is `x` for `u >= v`
//! and `y` otherwise.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, RangeInclusive, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{s_iter, DynamicsError, SSequence};
use crate::exact::{factorial, ln_abs, ratio_to_f64, to_f64, BigRational};
use crate::recursion::a_sequence;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("this operation needs x in (-1, 0), got {0}")]
    OutOfContract(String),
    #[error("expected a step function with {expected} intervals, got {got}")]
    IntervalMismatch { expected: usize, got: usize },
    #[error("index must be at least {min}, got {n}")]
    IndexTooSmall { n: usize, min: usize },
    #[error("degenerate fit: {points} usable points out of {requested}")]
    DegenerateFit { points: usize, requested: usize },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

type Result<T> = std::result::Result<T, SpectralError>;

/// Field operations shared by the exact and floating-point pipelines.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_count(n: usize) -> Self;
}

impl Scalar for f64 {
    fn from_count(n: usize) -> Self {
        n as f64
    }
}

impl Scalar for BigRational {
    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > -1.0 && x < 0.0 {
        Ok(())
    } else {
        Err(SpectralError::OutOfContract(x.to_string()))
    }
}

fn check_x_exact(x: &BigRational) -> Result<f64> {
    let xf = to_f64(x);
    if x.is_negative() && *x > -BigRational::from_integer(BigInt::from(1)) {
        Ok(xf)
    } else {
        Err(SpectralError::OutOfContract(crate::exact::format_rational(
            x,
        )))
    }
}

/// A step function on `[0, 1)` with uniform breakpoints `k / len`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<T> {
    values: Vec<T>,
}

impl<T: Scalar> StepFunction<T> {
    pub fn new(values: Vec<T>) -> Self {
        assert!(
            !values.is_empty(),
            "a step function needs at least one interval"
        );
        StepFunction { values }
    }

    pub fn constant(value: T, intervals: usize) -> Self {
        Self::new(vec![value; intervals])
    }

    pub fn n_intervals(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn integral(&self) -> T {
        let sum = self
            .values
            .iter()
            .cloned()
            .fold(T::zero(), |acc, v| acc + v);
        sum / T::from_count(self.values.len())
    }
}

impl StepFunction<f64> {
    pub fn eval(&self, u: f64) -> f64 {
        let k = ((u * self.values.len() as f64) as usize).min(self.values.len() - 1);
        self.values[k]
    }

    pub fn norm_1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl StepFunction<BigRational> {
    pub fn to_f64(&self) -> StepFunction<f64> {
        StepFunction {
            values: self.values.iter().map(to_f64).collect(),
        }
    }
}

/// `s_n` with exact values `S_n(j) / (n-2)!`.
pub fn embed(s: &SSequence) -> StepFunction<BigRational> {
    let den = s.denominator() * factorial(s.n() - 2);
    StepFunction::new(
        s.numerators()[1..]
            .iter()
            .map(|v| BigRational::new(v.clone(), den.clone()))
            .collect(),
    )
}

/// `s_n` in floating point, converted without reducing the huge quotients.
pub fn embed_f64(s: &SSequence) -> StepFunction<f64> {
    let den = s.denominator() * factorial(s.n() - 2);
    StepFunction::new(
        s.numerators()[1..]
            .iter()
            .map(|v| ratio_to_f64(v, &den))
            .collect(),
    )
}

/// `(A_n s)(u) = integral alpha_n(u, v) s(v) dv`, mapping `n - 1` steps to `n`.
pub fn apply_a_n<T: Scalar>(s: &StepFunction<T>, n: usize, x: &T) -> Result<StepFunction<T>> {
    if n < 2 {
        return Err(SpectralError::IndexTooSmall { n, min: 2 });
    }
    if s.n_intervals() != n - 1 {
        return Err(SpectralError::IntervalMismatch {
            expected: n - 1,
            got: s.n_intervals(),
        });
    }
    let y = x.clone() + T::from_count(1);
    let width = T::from_count(n - 1);
    let total = s.values.iter().cloned().fold(T::zero(), |acc, v| acc + v);
    let mut prefix = T::zero();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        if i < n {
            prefix = prefix + s.values[i - 1].clone();
        }
        let v = x.clone() * prefix.clone() + y.clone() * (total.clone() - prefix.clone());
        out.push(v / width.clone());
    }
    Ok(StepFunction::new(out))
}

/// A continuous piecewise-linear function given by its values at breakpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    pub breakpoints: Vec<f64>,
    pub nodes: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn eval(&self, u: f64) -> f64 {
        let k = self
            .breakpoints
            .partition_point(|&b| b <= u)
            .clamp(1, self.breakpoints.len() - 1);
        let (u0, u1) = (self.breakpoints[k - 1], self.breakpoints[k]);
        let t = (u - u0) / (u1 - u0);
        self.nodes[k - 1] + t * (self.nodes[k] - self.nodes[k - 1])
    }
}

/// `(T f)(u) = -F(u) + y F(1) - x F(0)` with `F` the primitive vanishing at 0.
pub fn apply_t(s: &StepFunction<f64>, x: f64) -> PiecewiseLinear {
    let y = 1.0 + x;
    let len = s.n_intervals();
    let mut primitive = Vec::with_capacity(len + 1);
    primitive.push(0.0);
    for v in s.values() {
        primitive.push(primitive.last().unwrap() + v / len as f64);
    }
    let (f0, f1) = (primitive[0], primitive[len]);
    PiecewiseLinear {
        breakpoints: (0..=len).map(|k| k as f64 / len as f64).collect(),
        nodes: primitive.iter().map(|f| -f + y * f1 - x * f0).collect(),
    }
}

/// An eigenpair of `T`: `lambda_m = -1 / z_m` with `z_m = log|x/y| + (2m+1) pi i`
/// and eigenfunction `f_m(u) = exp(z_m u)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Eigenpair {
    pub m: i64,
    pub lambda: Complex64,
    pub z: Complex64,
}

impl Eigenpair {
    pub fn eigenfunction(&self, u: f64) -> Complex64 {
        (self.z * u).exp()
    }

    pub fn modulus(&self) -> f64 {
        self.lambda.norm()
    }
}

/// `log |x / y|`.
pub fn log_ratio(x: f64) -> f64 {
    (x / (1.0 + x)).abs().ln()
}

pub fn eigenpairs(x: f64, ms: RangeInclusive<i64>) -> Result<Vec<Eigenpair>> {
    check_x(x)?;
    let l = log_ratio(x);
    Ok(ms
        .map(|m| {
            let z = Complex64::new(l, (2 * m + 1) as f64 * PI);
            Eigenpair {
                m,
                lambda: -z.inv(),
                z,
            }
        })
        .collect())
}

/// `(lambda, mu)`: the moduli of the leading pair `m in {-1, 0}` and the next
/// pair `m in {-2, 1}`.
pub fn dominant_moduli(x: f64) -> Result<(f64, f64)> {
    check_x(x)?;
    let l = log_ratio(x);
    Ok((1.0 / l.hypot(PI), 1.0 / l.hypot(3.0 * PI)))
}

/// `sup_k |(T f)(u_k) - lambda f(u_k)|` on a uniform grid, with the primitive of
/// `f` built by 3-point Gauss-Legendre on each grid cell.
pub fn eigen_residual(x: f64, pair: &Eigenpair, grid: usize) -> f64 {
    const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let y = 1.0 + x;
    let h = 1.0 / grid as f64;
    let mut primitive = Vec::with_capacity(grid + 1);
    primitive.push(Complex64::zero());
    for k in 0..grid {
        let mid = (k as f64 + 0.5) * h;
        let cell: Complex64 = NODES
            .iter()
            .zip(WEIGHTS)
            .map(|(t, w)| pair.eigenfunction(mid + 0.5 * h * t) * w)
            .sum();
        primitive.push(primitive[k] + cell * (0.5 * h));
    }
    let (f0, f1) = (primitive[0], primitive[grid]);
    (0..=grid)
        .map(|k| {
            let u = k as f64 * h;
            let tf = -primitive[k] + f1 * y - f0 * x;
            (tf - pair.lambda * pair.eigenfunction(u)).norm()
        })
        .fold(0.0, f64::max)
}

/// The region where `kappa` and `alpha_n` disagree, and the resulting gap.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorGap {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub measure: BigRational,
    pub hs_norm: f64,
    /// `1 / sqrt(n)`.
    pub hs_bound: f64,
}

fn ser_rational<S: serde::Serializer>(
    q: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exact::format_rational(q))
}

// Twice the area of {u < v} inside [u0, u1] x [v0, v1], in integer grid units.
fn twice_area_below_diagonal(u0: i128, u1: i128, v0: i128, v1: i128) -> i128 {
    let mut area = 0;
    // v in [u0, u1]: the slice has length v - u0
    let (a, b) = (v0.max(u0), v1.min(u1));
    if a < b {
        area += (b - u0).pow(2) - (a - u0).pow(2);
    }
    // v above u1: the full width
    let c = v0.max(u1);
    if c < v1 {
        area += 2 * (v1 - c) * (u1 - u0);
    }
    area
}

/// Exact measure of `{kappa != alpha_n}`, summed over grid rectangles.
///
/// Rectangles with `i < j` lie strictly above the diagonal where both kernels
/// are `y`; of those with `i >= j` only the part with `u < v` disagrees, and
/// only the two columns nearest the diagonal reach that far. Coordinates are
/// scaled by `n (n - 1)` so every corner is an integer.
pub fn omega_measure(n: usize) -> Result<BigRational> {
    if n < 2 {
        return Err(SpectralError::IndexTooSmall { n, min: 2 });
    }
    let (rows, cols) = (n as i128, n as i128 - 1);
    let mut total: i128 = 0;
    for i in 1..=n {
        let (u0, u1) = ((i as i128 - 1) * cols, i as i128 * cols);
        let j_lo = ((i - 1) * (n - 1) / n).max(1);
        for j in j_lo..=i.min(n - 1) {
            total += twice_area_below_diagonal(u0, u1, (j as i128 - 1) * rows, j as i128 * rows);
        }
    }
    let scale = rows * cols;
    Ok(BigRational::new(
        BigInt::from(total),
        BigInt::from(2 * scale * scale),
    ))
}

// Length of {v : kappa(u, v) != alpha_n(u, v)} for u in row i.
fn gap_length(n: usize, i: usize, u: f64) -> f64 {
    let w = 1.0 / (n - 1) as f64;
    (1..n)
        .map(|j| {
            let (v0, v1) = ((j - 1) as f64 * w, j as f64 * w);
            if j <= i {
                (v1 - v0.max(u)).max(0.0)
            } else {
                (u.min(v1) - v0).max(0.0)
            }
        })
        .sum()
}

/// `||kappa - alpha_n||_HS`, integrating the squared kernel difference (always
/// `(x - y)^2 = 1` where they differ) row by row with Simpson's rule on every
/// cell of the joint `1/n`, `1/(n-1)` grid.
pub fn hs_norm(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(SpectralError::IndexTooSmall { n, min: 2 });
    }
    let mut cuts: Vec<(usize, usize)> = (0..=n)
        .map(|k| (k, n))
        .chain((1..n - 1).map(|j| (j, n - 1)))
        .collect();
    cuts.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    let points: Vec<f64> = cuts.iter().map(|&(k, d)| k as f64 / d as f64).collect();
    let mut sq = 0.0;
    for w in points.windows(2) {
        let (p, q) = (w[0], w[1]);
        if q <= p {
            continue;
        }
        let mid = 0.5 * (p + q);
        let row = ((mid * n as f64) as usize + 1).min(n);
        let f = |u| gap_length(n, row, u);
        sq += (q - p) / 6.0 * (f(p) + 4.0 * f(mid) + f(q));
    }
    Ok(sq.sqrt())
}

pub fn operator_gap(n: usize) -> Result<OperatorGap> {
    Ok(OperatorGap {
        n,
        measure: omega_measure(n)?,
        hs_norm: hs_norm(n)?,
        hs_bound: 1.0 / (n as f64).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Cos,
    Sin,
}

/// `|x/y|^v cos((2m+1) pi v)` or the sine analogue.
pub fn basis_function(basis: Basis, m: i64, x: f64) -> impl Fn(f64) -> f64 {
    let l = log_ratio(x);
    let k = (2 * m + 1) as f64 * PI;
    move |v| {
        let t = k * v;
        (l * v).exp()
            * if basis == Basis::Cos {
                t.cos()
            } else {
                t.sin()
            }
    }
}

// Antiderivative of e^{a v} cos(b v) or e^{a v} sin(b v), b != 0.
fn exp_trig_primitive(basis: Basis, a: f64, b: f64, v: f64) -> f64 {
    let (c, s) = ((b * v).cos(), (b * v).sin());
    let e = (a * v).exp() / (a * a + b * b);
    match basis {
        Basis::Cos => e * (a * c + b * s),
        Basis::Sin => e * (a * s - b * c),
    }
}

/// `<s, g> = integral |x/y|^{-2v} s(v) g(v) dv` in closed form per step.
pub fn weighted_inner(s: &StepFunction<f64>, basis: Basis, m: i64, x: f64) -> f64 {
    let a = -log_ratio(x);
    let b = (2 * m + 1) as f64 * PI;
    let len = s.n_intervals() as f64;
    s.values()
        .iter()
        .enumerate()
        .map(|(j, sj)| {
            let (v0, v1) = (j as f64 / len, (j + 1) as f64 / len);
            sj * (exp_trig_primitive(basis, a, b, v1) - exp_trig_primitive(basis, a, b, v0))
        })
        .sum()
}

/// `||s||_w^2 = integral |x/y|^{-2v} s(v)^2 dv`.
pub fn weighted_norm_sq(s: &StepFunction<f64>, x: f64) -> f64 {
    let c = -2.0 * log_ratio(x);
    let len = s.n_intervals() as f64;
    let h = 1.0 / len;
    let cell = |v0: f64| {
        if c == 0.0 {
            h
        } else {
            (c * v0).exp() * (c * h).exp_m1() / c
        }
    };
    s.values()
        .iter()
        .enumerate()
        .map(|(j, sj)| sj * sj * cell(j as f64 / len))
        .sum()
}

/// One point of the angle trace, in the weighted norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleRecord {
    pub n: usize,
    pub proj_norm: f64,
    pub perp_norm: f64,
    pub theta: f64,
    pub tan_theta: f64,
}

/// `(||P s||, ||P_perp s||)` where `P` projects onto the real span `E` of the
/// leading eigenfunction pair. The basis of `E` is orthogonal with squared
/// norms `1/2`.
pub fn projection_norms(s: &StepFunction<f64>, x: f64) -> (f64, f64) {
    let scale = s.norm_inf();
    if scale == 0.0 {
        return (0.0, 0.0);
    }
    let unit = StepFunction::new(s.values().iter().map(|v| v / scale).collect());
    let c = weighted_inner(&unit, Basis::Cos, 0, x);
    let sn = weighted_inner(&unit, Basis::Sin, 0, x);
    let proj_sq = 2.0 * (c * c + sn * sn);
    let perp_sq = (weighted_norm_sq(&unit, x) - proj_sq).max(0.0);
    (proj_sq.sqrt() * scale, perp_sq.sqrt() * scale)
}

pub fn angle_record(n: usize, s: &StepFunction<f64>, x: f64) -> AngleRecord {
    let (proj_norm, perp_norm) = projection_norms(s, x);
    let theta = perp_norm.atan2(proj_norm);
    AngleRecord {
        n,
        proj_norm,
        perp_norm,
        theta,
        tan_theta: perp_norm / proj_norm,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleTrace {
    pub x: f64,
    pub records: Vec<AngleRecord>,
}

impl AngleTrace {
    pub fn get(&self, n: usize) -> Option<&AngleRecord> {
        self.records.iter().find(|r| r.n == n)
    }

    pub fn theta_sup(&self) -> f64 {
        self.records.iter().map(|r| r.theta).fold(0.0, f64::max)
    }
}

/// Runs the exact `S_n` pipeline and calls `f(n, s_n)` for `n_lo <= n <= n_hi`.
pub fn for_each_embedded(
    x: &BigRational,
    n_lo: usize,
    n_hi: usize,
    mut f: impl FnMut(usize, StepFunction<f64>),
) -> Result<()> {
    let n_lo = n_lo.max(2);
    for s in s_iter(x)?
        .skip(n_lo - 2)
        .take((n_hi + 1).saturating_sub(n_lo))
    {
        f(s.n(), embed_f64(&s));
    }
    Ok(())
}

pub fn angle_trace(x: &BigRational, n_lo: usize, n_hi: usize) -> Result<AngleTrace> {
    let xf = check_x_exact(x)?;
    let mut records = Vec::new();
    for_each_embedded(x, n_lo, n_hi, |n, s| records.push(angle_record(n, &s, xf)))?;
    Ok(AngleTrace { x: xf, records })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `sqrt(n) sin(theta_n) >= 3 / (lambda - mu)`: `tan` must decrease.
    Relative,
    /// Otherwise: `tan(theta_{n+1})` must stay below the absolute bound.
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TanViolation {
    pub n: usize,
    pub regime: Regime,
    pub tan_n: f64,
    pub tan_next: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TanRegimeReport {
    pub lambda: f64,
    pub mu: f64,
    /// Largest observed angle, standing in for the uniform bound.
    pub theta_sup: f64,
    /// Steps `n -> n+1` are checked only for `n` above this.
    pub threshold: f64,
    pub checked: usize,
    pub relative_steps: usize,
    pub absolute_steps: usize,
    /// Absolute-regime steps whose bound has a nonpositive denominator.
    pub vacuous_steps: usize,
    pub violations: Vec<TanViolation>,
}

impl TanRegimeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Classifies each step of the trace and checks the decrease it should show.
pub fn tan_regime_check(trace: &AngleTrace, x: f64) -> Result<TanRegimeReport> {
    let (lambda, mu) = dominant_moduli(x)?;
    let gap = lambda - mu;
    let theta_sup = trace.theta_sup();
    let threshold = 9.0 / (theta_sup.cos().powi(2) * gap * gap);
    let mut report = TanRegimeReport {
        lambda,
        mu,
        theta_sup,
        threshold,
        checked: 0,
        relative_steps: 0,
        absolute_steps: 0,
        vacuous_steps: 0,
        violations: Vec::new(),
    };
    for w in trace.records.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        if next.n != cur.n + 1 || (cur.n as f64) <= threshold {
            continue;
        }
        report.checked += 1;
        let root_n = (cur.n as f64).sqrt();
        let (regime, bound) = if root_n * cur.theta.sin() >= 3.0 / gap {
            report.relative_steps += 1;
            (Regime::Relative, cur.tan_theta)
        } else {
            report.absolute_steps += 1;
            let denom = lambda * (cur.n as f64 - 9.0 / (gap * gap)).sqrt() - 1.0;
            if denom <= 0.0 {
                report.vacuous_steps += 1;
                continue;
            }
            (Regime::Absolute, (3.0 * mu / gap + 1.0) / denom)
        };
        if next.tan_theta.is_nan() || next.tan_theta >= bound {
            report.violations.push(TanViolation {
                n: cur.n,
                regime,
                tan_n: cur.tan_theta,
                tan_next: next.tan_theta,
                bound,
            });
        }
    }
    Ok(report)
}

/// Least-squares slope of `log(|a_n| / (n-1)!)` against `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub n_lo: usize,
    pub n_hi: usize,
    pub points: usize,
    pub slope: f64,
    pub intercept: f64,
    /// `log(lambda)`.
    pub predicted: f64,
    pub relative_error: f64,
}

/// `(n, log(|a_n| / (n-1)!))` for nonzero `a_n`, exact up to the final logarithm.
pub fn log_growth_points(x: &BigRational, n_lo: usize, n_hi: usize) -> Result<Vec<(usize, f64)>> {
    if n_lo == 0 {
        return Err(SpectralError::IndexTooSmall { n: 0, min: 1 });
    }
    let a = a_sequence(x, n_hi.max(1)).map_err(|_| SpectralError::OutOfContract("0".into()))?;
    Ok((n_lo..=n_hi)
        .filter(|&n| !a[n - 1].is_zero())
        .map(|n| {
            let r = &a[n - 1] / BigRational::from_integer(factorial(n - 1));
            (n, ln_abs(&r))
        })
        .collect())
}

fn least_squares(points: &[(usize, f64)]) -> (f64, f64) {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 as f64 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn growth_rate(x: &BigRational, n_lo: usize, n_hi: usize) -> Result<GrowthFit> {
    let xf = check_x_exact(x)?;
    let requested = (n_hi + 1).saturating_sub(n_lo);
    let points = log_growth_points(x, n_lo, n_hi)?;
    if points.len() < 3 || 2 * points.len() < requested {
        return Err(SpectralError::DegenerateFit {
            points: points.len(),
            requested,
        });
    }
    let (slope, intercept) = least_squares(&points);
    let predicted = dominant_moduli(xf)?.0.ln();
    Ok(GrowthFit {
        n_lo,
        n_hi,
        points: points.len(),
        slope,
        intercept,
        predicted,
        relative_error: ((slope - predicted) / predicted).abs(),
    })
}

/// `(n, ||s_n||_1 / ||s_n||_inf)` over a range.
pub fn norm_ratio_trace(x: &BigRational, n_lo: usize, n_hi: usize) -> Result<Vec<(usize, f64)>> {
    check_x_exact(x)?;
    let mut out = Vec::new();
    for_each_embedded(x, n_lo, n_hi, |n, s| {
        out.push((n, s.norm_1() / s.norm_inf()))
    })?;
    Ok(out)
}
