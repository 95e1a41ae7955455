//! Exact scalar and polynomial arithmetic.
//!
//! Rationals are [`num_rational::BigRational`]; polynomials are dense vectors of
//! [`BigInt`] coefficients indexed by degree. Binomial coefficients come from a
//! process-wide Pascal triangle that grows on demand.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use num_rational::BigRational;

/// A polynomial in one variable with arbitrary-precision integer coefficients.
///
/// `coeffs[d]` is the coefficient of `x^d`. Trailing zeros are never stored, so
/// the zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BigPolynomial {
    coeffs: Vec<BigInt>,
}

impl BigPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        BigPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        BigPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    /// `coeff * x^degree`.
    pub fn monomial(coeff: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = coeff;
        Self::new(coeffs)
    }

    /// `(1 + x)^n`, expanded with binomial coefficients.
    pub fn one_plus_x_pow(n: usize) -> Self {
        Self::new((0..=n).map(|k| binomial(n, k as i64)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, degree: usize) -> BigInt {
        self.coeffs.get(degree).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        BigPolynomial { coeffs }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Horner evaluation at a rational point; exact.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// Floating-point evaluation, used only in diagnostics.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for &BigPolynomial {
    type Output = BigPolynomial;

    fn add(self, rhs: &BigPolynomial) -> BigPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        BigPolynomial::new((0..len).map(|d| self.coeff(d) + rhs.coeff(d)).collect())
    }
}

impl Sub for &BigPolynomial {
    type Output = BigPolynomial;

    fn sub(self, rhs: &BigPolynomial) -> BigPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        BigPolynomial::new((0..len).map(|d| self.coeff(d) - rhs.coeff(d)).collect())
    }
}

impl Neg for &BigPolynomial {
    type Output = BigPolynomial;

    fn neg(self) -> BigPolynomial {
        BigPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &BigPolynomial {
    type Output = BigPolynomial;

    fn mul(self, rhs: &BigPolynomial) -> BigPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return BigPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BigPolynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for BigPolynomial {
            type Output = BigPolynomial;
            fn $m(self, rhs: BigPolynomial) -> BigPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for BigPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (d, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{d}")?,
                (_, false) => write!(f, "{mag}x^{d}")?,
            }
        }
        Ok(())
    }
}

/// Pascal's triangle, grown row by row on demand.
///
/// Readers share a read lock; growth takes the write lock once per request
/// that exceeds the current size.
#[derive(Debug, Default)]
pub struct BinomialCache {
    rows: RwLock<Vec<Vec<BigInt>>>,
}

impl BinomialCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of rows currently materialized.
    pub fn len(&self) -> usize {
        self.rows.read().expect("binomial cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `C(n, r)`; zero when `r < 0` or `r > n`.
    pub fn get(&self, n: usize, r: i64) -> BigInt {
        if r < 0 || r as u64 > n as u64 {
            return BigInt::zero();
        }
        let r = r as usize;
        // symmetric storage is not worth the index juggling at these sizes
        {
            let rows = self.rows.read().expect("binomial cache poisoned");
            if let Some(row) = rows.get(n) {
                return row[r].clone();
            }
        }
        let mut rows = self.rows.write().expect("binomial cache poisoned");
        while rows.len() <= n {
            let next = match rows.last() {
                None => vec![BigInt::one()],
                Some(prev) => {
                    let mut row = Vec::with_capacity(prev.len() + 1);
                    row.push(BigInt::one());
                    for w in prev.windows(2) {
                        row.push(&w[0] + &w[1]);
                    }
                    row.push(BigInt::one());
                    row
                }
            };
            rows.push(next);
        }
        rows[n][r].clone()
    }
}

fn global_cache() -> &'static BinomialCache {
    static CACHE: OnceLock<BinomialCache> = OnceLock::new();
    CACHE.get_or_init(BinomialCache::new)
}

/// `C(n, r)` from the shared cache; zero outside `0 <= r <= n`.
pub fn binomial(n: usize, r: i64) -> BigInt {
    global_cache().get(n, r)
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Converts a rational to the nearest `f64` without forming huge intermediates.
///
/// Numerator and denominator may each have thousands of bits; the quotient is
/// taken with 64 significant bits and then scaled by a power of two.
pub fn to_f64(q: &BigRational) -> f64 {
    let num = q.numer();
    let den = q.denom();
    if num.is_zero() {
        return 0.0;
    }
    let (mantissa, exp2) = scaled_quotient(num, den);
    ldexp(mantissa, exp2)
}

/// `num / den` as the nearest `f64`, for a positive `den`; no reduction needed.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let (mantissa, exp2) = scaled_quotient(num, den);
    ldexp(mantissa, exp2)
}

/// `ln |q|` for nonzero `q`, accurate even when `|q|` is outside `f64` range.
pub fn ln_abs(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mantissa, exp2) = scaled_quotient(q.numer(), q.denom());
    mantissa.abs().ln() + exp2 as f64 * std::f64::consts::LN_2
}

// Returns (m, e) with num/den ~= m * 2^e and |m| in [2^63, 2^65).
fn scaled_quotient(num: &BigInt, den: &BigInt) -> (f64, i64) {
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let (n, d) = if shift >= 0 {
        (num.abs() << shift as usize, den.clone())
    } else {
        (num.abs(), den << (-shift) as usize)
    };
    let (quot, rem) = n.div_rem(&d);
    // round half up on the truncated quotient; 64+ bits make this sub-ulp
    let quot = if (&rem << 1usize) >= d {
        quot + 1u32
    } else {
        quot
    };
    let m = quot.to_f64().expect("quotient fits in f64");
    let m = if num.sign() == Sign::Minus { -m } else { m };
    (m, -shift)
}

fn ldexp(mut m: f64, mut e: i64) -> f64 {
    // step in chunks so intermediate powers never overflow or flush to zero early
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e as i32)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    BadInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `p/q`, `p`, or a terminating decimal such as `-0.25`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let bad = |s: &str| ParseRationalError::BadInteger(s.to_string());
    if let Some((p, q)) = text.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad(p))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad(q))?;
        if q.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(text.to_string()));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad(text));
        }
        let mut num = BigInt::from_str(&digits).map_err(|_| bad(text))?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(BigRational::new(num, den));
    }
    BigInt::from_str(text)
        .map(BigRational::from_integer)
        .map_err(|_| bad(text))
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> BigPolynomial {
        BigPolynomial::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn pascal_recurrence_on_cached_rows() {
        let cache = BinomialCache::new();
        cache.get(60, 30);
        assert!(cache.len() >= 61);
        for n in 1..=60usize {
            assert_eq!(cache.get(n, 0), BigInt::one());
            assert_eq!(cache.get(n, n as i64), BigInt::one());
            for r in 1..n as i64 {
                assert_eq!(
                    cache.get(n, r),
                    cache.get(n - 1, r - 1) + cache.get(n - 1, r)
                );
            }
        }
    }

    #[test]
    fn poly_eval_examples() {
        let minus_one = int(-1);
        assert_eq!(poly(&[0, 0, 0, 1, 6]).eval(&minus_one), int(5));
        assert_eq!(BigPolynomial::zero().eval(&rational(3, 7)), int(0));
        assert_eq!(poly(&[0, 0, 0, 0, 8, 86, 120]).eval(&minus_one), int(42));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = poly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(poly(&[0, 0]).is_zero());
        assert_eq!((&p - &p).coeffs().len(), 0);
    }

    #[test]
    fn one_plus_x_power() {
        assert_eq!(BigPolynomial::one_plus_x_pow(3), poly(&[1, 3, 3, 1]));
        assert_eq!(BigPolynomial::one_plus_x_pow(0), BigPolynomial::one());
    }

    #[test]
    fn display() {
        assert_eq!(poly(&[0, 0, 0, 1, 6]).to_string(), "x^3 + 6x^4");
        assert_eq!(poly(&[-2, 1]).to_string(), "-2 + x");
    }

    #[test]
    fn float_conversion_handles_huge_parts() {
        let big = factorial(400);
        let q = BigRational::new(big.clone() * 3u32, big * 4u32);
        assert_eq!(to_f64(&q), 0.75);
        let tiny = BigRational::new(BigInt::one(), factorial(200));
        let expected = -(1..=200).map(|k| (k as f64).ln()).sum::<f64>();
        assert!((ln_abs(&tiny) - expected).abs() < 1e-9);
        assert_eq!(to_f64(&tiny), 0.0);
        assert_eq!(to_f64(&rational(-1, 3)), -1.0 / 3.0);
        assert_eq!(to_f64(&int(0)), 0.0);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-1/2").unwrap(), rational(-1, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-0.25").unwrap(), rational(-1, 4));
        assert_eq!(parse_rational("4/-8").unwrap(), rational(-1, 2));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(format_rational(&rational(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    fn small_poly() -> impl Strategy<Value = BigPolynomial> {
        prop::collection::vec(-50i64..50, 0..6).prop_map(|c| poly(&c))
    }

    proptest! {
        #[test]
        fn eval_is_multiplicative(p in small_poly(), q in small_poly(), num in -9i64..9, den in 1i64..9) {
            let x = rational(num, den);
            prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        }

        #[test]
        fn eval_is_additive(p in small_poly(), q in small_poly(), num in -9i64..9, den in 1i64..9) {
            let x = rational(num, den);
            prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
        }

        #[test]
        fn f64_conversion_is_close(num in -1_000_000i64..1_000_000, den in 1i64..1_000_000) {
            let q = rational(num, den);
            let f = num as f64 / den as f64;
            prop_assert!((to_f64(&q) - f).abs() <= f.abs() * 1e-15);
        }
    }
}
