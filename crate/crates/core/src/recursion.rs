//! The recursion `a_1 = x`, `a_n = x * sum_{r=ceil(n/2)}^{n-1} C(r, n-r) a_r`,
//! evaluated exactly at rational `x`, symbolically in `x`, and in the binomial
//! basis `x^r (1+x)^(n-r)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{binomial, BigPolynomial, BigRational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecursionError {
    #[error("the parameter x must be nonzero")]
    ZeroParameter,
    #[error("index must be at least 1, got {0}")]
    IndexTooSmall(usize),
    #[error("negative primitive count P({n},{r}) = {value} during back-substitution")]
    NegativePrimitiveCount { n: usize, r: usize, value: BigInt },
}

/// Runs the recursion over any ring, given integer scaling and multiplication by `x`.
fn run<T, S, F>(first: T, zero: T, n_max: usize, scale: S, times_x: F) -> Vec<T>
where
    T: Clone + std::ops::Add<Output = T>,
    S: Fn(&T, &BigInt) -> T,
    F: Fn(&T) -> T,
{
    let mut seq: Vec<T> = Vec::with_capacity(n_max);
    seq.push(first);
    for n in 2..=n_max {
        let mut sum = zero.clone();
        for r in n.div_ceil(2)..n {
            sum = sum + scale(&seq[r - 1], &binomial(r, (n - r) as i64));
        }
        seq.push(times_x(&sum));
    }
    seq
}

/// `[a_1, ..., a_{n_max}]` at a rational parameter.
pub fn a_sequence(x: &BigRational, n_max: usize) -> Result<Vec<BigRational>, RecursionError> {
    if x.is_zero() {
        return Err(RecursionError::ZeroParameter);
    }
    if n_max == 0 {
        return Err(RecursionError::IndexTooSmall(0));
    }
    Ok(run(
        x.clone(),
        BigRational::zero(),
        n_max,
        |a, c| a * BigRational::from_integer(c.clone()),
        |s| s * x,
    ))
}

/// `[a_1, ..., a_{n_max}]` as polynomials in `x`.
pub fn a_polynomials(n_max: usize) -> Vec<BigPolynomial> {
    run(
        BigPolynomial::x(),
        BigPolynomial::zero(),
        n_max,
        |p, c| p.scale(c),
        |p| p.shift(1),
    )
}

/// `a_n = sum_r xi_r x^r`; `xi_r` counts arrays with `r - 1` blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicFormat {
    pub n: usize,
    pub xi: BTreeMap<usize, BigInt>,
}

impl BasicFormat {
    pub fn from_polynomial(n: usize, p: &BigPolynomial) -> Self {
        let xi = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(r, c)| (r, c.clone()))
            .collect();
        BasicFormat { n, xi }
    }

    pub fn to_polynomial(&self) -> BigPolynomial {
        self.xi.iter().fold(BigPolynomial::zero(), |acc, (&r, c)| {
            &acc + &BigPolynomial::monomial(c.clone(), r)
        })
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.to_polynomial().eval(x)
    }

    /// Total number of arrays (`a_n` at `x = 1`).
    pub fn total(&self) -> BigInt {
        self.xi.values().sum()
    }
}

/// `a_n = sum_r P(n,r) x^r (1+x)^(n-r)`; `P(n,r)` counts primitive arrays with
/// `r - 1` blocks, i.e. patterns with `n - r` descents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialFormat {
    pub n: usize,
    pub prim: BTreeMap<usize, BigInt>,
}

impl BinomialFormat {
    pub fn to_polynomial(&self) -> BigPolynomial {
        self.prim
            .iter()
            .fold(BigPolynomial::zero(), |acc, (&r, p)| {
                let term = BigPolynomial::one_plus_x_pow(self.n - r).shift(r).scale(p);
                &acc + &term
            })
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let y = x + BigRational::one();
        self.prim.iter().fold(BigRational::zero(), |acc, (&r, p)| {
            let term = num_traits::pow(x.clone(), r) * num_traits::pow(y.clone(), self.n - r);
            acc + term * BigRational::from_integer(p.clone())
        })
    }

    /// Equals `(n-1)!`: one primitive array per hypercube component.
    pub fn total(&self) -> BigInt {
        self.prim.values().sum()
    }
}

pub fn basic_format(n: usize) -> Result<BasicFormat, RecursionError> {
    if n == 0 {
        return Err(RecursionError::IndexTooSmall(n));
    }
    let polys = a_polynomials(n);
    Ok(BasicFormat::from_polynomial(n, &polys[n - 1]))
}

/// Basic formats for every index up to `n_max`, sharing one symbolic run.
pub fn basic_formats(n_max: usize) -> Vec<BasicFormat> {
    a_polynomials(n_max)
        .iter()
        .enumerate()
        .map(|(i, p)| BasicFormat::from_polynomial(i + 1, p))
        .collect()
}

/// Converts a basic format to the binomial basis.
///
/// The coefficient of `x^k` receives `P(n,r) * C(n-r, k-r)` from every `r <= k`,
/// so the system is triangular and is solved from the lowest degree upward.
pub fn binomial_format_from(basic: &BasicFormat) -> Result<BinomialFormat, RecursionError> {
    let n = basic.n;
    let mut prim: BTreeMap<usize, BigInt> = BTreeMap::new();
    for k in 0..=n {
        let mut residual = basic.xi.get(&k).cloned().unwrap_or_default();
        for (&r, p) in &prim {
            residual -= p * binomial(n - r, (k - r) as i64);
        }
        if residual.is_negative() {
            return Err(RecursionError::NegativePrimitiveCount {
                n,
                r: k,
                value: residual,
            });
        }
        if !residual.is_zero() {
            prim.insert(k, residual);
        }
    }
    Ok(BinomialFormat { n, prim })
}

pub fn binomial_format(n: usize) -> Result<BinomialFormat, RecursionError> {
    binomial_format_from(&basic_format(n)?)
}

/// Catalan numbers indexed so that `catalan(1) = catalan(2) = 1`, `catalan(3) = 2`:
/// `catalan(n + 1) = C(2n, n) / (n + 1)` (OEIS A000108 shifted by one).
pub fn catalan(n: usize) -> Result<BigInt, RecursionError> {
    if n == 0 {
        return Err(RecursionError::IndexTooSmall(n));
    }
    let m = n - 1;
    let (q, r) = binomial(2 * m, m as i64).div_rem(&BigInt::from(m + 1));
    debug_assert!(r.is_zero());
    Ok(q)
}

/// The Narayana-Zidek-Capell numbers (OEIS A002083): `N_1 = 1`,
/// `N_n = sum_{r=ceil(n/2)}^{n-1} N_r`. `N_n` counts `n`-signatures.
pub fn nzc_sequence(n_max: usize) -> Result<Vec<BigInt>, RecursionError> {
    if n_max == 0 {
        return Err(RecursionError::IndexTooSmall(0));
    }
    let mut seq = vec![BigInt::one()];
    for n in 2..=n_max {
        let next: BigInt = seq[n.div_ceil(2) - 1..n - 1].iter().sum();
        seq.push(next);
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, int, rational};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&k| BigInt::from(k)).collect()
    }

    fn map(pairs: &[(usize, i64)]) -> BTreeMap<usize, BigInt> {
        pairs.iter().map(|&(r, c)| (r, BigInt::from(c))).collect()
    }

    #[test]
    fn sequence_at_one() {
        let seq = a_sequence(&int(1), 7).unwrap();
        let expected: Vec<_> = [1, 1, 2, 7, 34, 214, 1652]
            .iter()
            .map(|&v| int(v))
            .collect();
        assert_eq!(seq, expected);
    }

    #[test]
    fn sequence_at_minus_one() {
        let seq = a_sequence(&int(-1), 6).unwrap();
        let expected: Vec<_> = [-1, 1, -2, 5, -14, 42].iter().map(|&v| int(v)).collect();
        assert_eq!(seq, expected);
    }

    #[test]
    fn sequence_at_minus_half() {
        // x, x^2, 2x^3, x^3 + 6x^4 at x = -1/2
        let seq = a_sequence(&rational(-1, 2), 4).unwrap();
        assert_eq!(
            seq,
            vec![
                rational(-1, 2),
                rational(1, 4),
                rational(-1, 4),
                rational(1, 4)
            ]
        );
    }

    #[test]
    fn rejects_zero_and_empty() {
        assert_eq!(a_sequence(&int(0), 3), Err(RecursionError::ZeroParameter));
        assert_eq!(
            a_sequence(&int(1), 0),
            Err(RecursionError::IndexTooSmall(0))
        );
    }

    #[test]
    fn basic_format_examples() {
        assert_eq!(
            basic_format(6).unwrap().xi,
            map(&[(4, 8), (5, 86), (6, 120)])
        );
        assert_eq!(basic_format(5).unwrap().xi, map(&[(4, 10), (5, 24)]));
        assert_eq!(basic_format(1).unwrap().xi, map(&[(1, 1)]));
        assert_eq!(basic_format(4).unwrap().xi, map(&[(3, 1), (4, 6)]));
    }

    #[test]
    fn binomial_format_examples() {
        assert_eq!(
            binomial_format(6).unwrap().prim,
            map(&[(4, 8), (5, 70), (6, 42)])
        );
        assert_eq!(binomial_format(5).unwrap().prim, map(&[(4, 10), (5, 14)]));
        assert_eq!(binomial_format(4).unwrap().prim, map(&[(3, 1), (4, 5)]));
        assert_eq!(binomial_format(2).unwrap().prim, map(&[(2, 1)]));
    }

    #[test]
    fn back_substitution_rejects_impossible_input() {
        // x^2 - x^3 at n = 3 would need P(3,3) = -1 - 1
        let bogus = BasicFormat {
            n: 3,
            xi: map(&[(2, 1), (3, -1)]),
        };
        assert!(matches!(
            binomial_format_from(&bogus),
            Err(RecursionError::NegativePrimitiveCount { n: 3, r: 3, .. })
        ));
    }

    #[test]
    fn catalan_examples() {
        let got: Vec<_> = (1..=7).map(|n| catalan(n).unwrap()).collect();
        assert_eq!(got, ints(&[1, 1, 2, 5, 14, 42, 132]));
        assert!(catalan(0).is_err());
    }

    #[test]
    fn nzc_examples() {
        assert_eq!(
            nzc_sequence(9).unwrap(),
            ints(&[1, 1, 1, 2, 3, 6, 11, 22, 42])
        );
        assert_eq!(nzc_sequence(1).unwrap(), ints(&[1]));
        assert_eq!(nzc_sequence(4).unwrap(), ints(&[1, 1, 1, 2]));
    }

    #[test]
    fn format_invariants_up_to_twenty() {
        for f in basic_formats(20) {
            let n = f.n;
            assert!(f.xi.values().all(|c| c.is_positive()));
            assert_eq!(f.xi[&n], factorial(n - 1), "xi_n at n = {n}");
            let lowest = *f.xi.keys().next().unwrap();
            let log2_ceil = (usize::BITS - (n - 1).leading_zeros()) as usize;
            // fewest blocks is ceil(log2 n), and r counts blocks + 1
            assert_eq!(lowest, log2_ceil + 1, "lowest degree at n = {n}");
            let b = binomial_format_from(&f).unwrap();
            assert_eq!(b.prim[&n], catalan(n).unwrap());
            assert_eq!(b.total(), factorial(n - 1));
            assert_eq!(b.to_polynomial(), f.to_polynomial());
        }
    }

    #[test]
    fn factorial_lower_bounds() {
        for (num, den) in [(1, 1), (2, 1), (1, 2)] {
            let x = rational(num, den);
            for (i, a) in a_sequence(&x, 30).unwrap().iter().enumerate() {
                let n = i + 1;
                let bound =
                    BigRational::from_integer(factorial(n - 1)) * num_traits::pow(x.clone(), n);
                // a_n has a single monomial for n <= 3, so the bound is attained there
                if n <= 3 {
                    assert_eq!(*a, bound);
                } else {
                    assert!(*a > bound, "x = {x}, n = {n}");
                }
            }
        }
        for (num, den) in [(-2, 1), (-3, 2)] {
            let x = rational(num, den);
            let y = &x + BigRational::one();
            for (i, a) in a_sequence(&x, 30).unwrap().iter().enumerate().skip(1) {
                let n = i + 1;
                let bound =
                    BigRational::from_integer(factorial(n - 1)) * num_traits::pow(y.abs(), n);
                assert!(a.abs() > bound, "x = {x}, n = {n}");
            }
        }
    }
}
