//! Density-side quantities: the logarithmic integral, the Artin product,
//! empirical averages of `(phi(p-1)/(p-1))^k` over primes, the main terms
//! `M(x)` and `M(f, p)`, and the empirical densities of simultaneous roots.
//!
//! Prime sums are accumulated in double-double arithmetic (about 106 bits of
//! significand). Per-prime terms are computed in parallel and then summed in
//! prime order, so results do not depend on the number of threads.

use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, primes_in_range};
use crate::counting::{simultaneous_spectrum, sweep_series, SWEEP_BATCH};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::roots::PrimeContext;

/// Largest `x` accepted by the exact rational accumulators.
pub const EXACT_LIMIT: u64 = 10_000;

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Published value of the Artin constant, used as the reference for `a_1`.
#[allow(clippy::excessive_precision)]
pub const ARTIN_CONSTANT: f64 = 0.373_955_813_619_202_288_05;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// Exact for integers up to `2^106`.
    pub fn from_u128(n: u128) -> Self {
        let hi = n as f64;
        let rest = n as i128 - hi as i128;
        let (hi, lo) = quick_two_sum(hi, rest as f64);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn powi(self, k: u32) -> Self {
        (0..k).fold(DoubleDouble::ONE, |acc, _| acc * self)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + DoubleDouble {
            hi: -rhs.hi,
            lo: -rhs.lo,
        }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let p = self.hi * rhs.hi;
        let e = self.hi.mul_add(rhs.hi, -p);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * DoubleDouble::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * DoubleDouble::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from_f64(q3)
    }
}

impl std::iter::Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(DoubleDouble::ZERO, |a, b| a + b)
    }
}

/// Principal-value logarithmic integral `li(x)` for `x >= 2`, via
/// `li(x) = Ei(ln x) = gamma + ln ln x + sum_{n>=1} (ln x)^n / (n * n!)`.
pub fn log_integral(x: f64) -> Result<f64> {
    if x.is_nan() || x < 2.0 {
        return Err(Error::Precondition(format!(
            "li(x) requires x >= 2, got {x}"
        )));
    }
    let y = x.ln();
    let mut term = DoubleDouble::ONE;
    let mut series = DoubleDouble::ZERO;
    let yd = DoubleDouble::from_f64(y);
    for n in 1..1000u32 {
        term = term * yd / DoubleDouble::from_f64(n as f64);
        let add = term / DoubleDouble::from_f64(n as f64);
        series = series + add;
        if add.hi < series.hi * 1e-18 {
            break;
        }
    }
    let total = series + DoubleDouble::from_f64(EULER_GAMMA) + DoubleDouble::from_f64(y.ln());
    Ok(total.to_f64())
}

/// Partial Euler product for the Artin constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArtinProduct {
    pub bound: u64,
    pub value: f64,
    /// Upper bound `1/bound` on `sum_{p > bound} 1/(p(p-1))`, which in turn
    /// bounds the relative change contributed by the omitted factors.
    pub tail_bound: f64,
    pub primes: u64,
}

/// `prod_{p <= bound} (1 - 1/(p(p-1)))`.
pub fn artin_product(bound: u64) -> Result<ArtinProduct> {
    if bound < 2 {
        return Err(Error::Precondition("artin product needs bound >= 2".into()));
    }
    let mut value = DoubleDouble::ONE;
    let mut primes = 0;
    for p in primes_in_range(2, bound)? {
        let pp = DoubleDouble::from_u128(p as u128 * (p as u128 - 1));
        value = value - value / pp;
        primes += 1;
    }
    Ok(ArtinProduct {
        bound,
        value: value.to_f64(),
        tail_bound: 1.0 / bound as f64,
        primes,
    })
}

/// Normalized sums of `(phi(p-1)/(p-1))^k` over primes `p <= x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub x: u64,
    pub k: u32,
    /// The prime sum, as a double-double.
    pub sum: DoubleDouble,
    pub li_x: f64,
    pub pi_x: u64,
    pub ratio_li: f64,
    pub ratio_pi: f64,
}

fn phi_ratio(p: u64) -> DoubleDouble {
    // p - 1 >= 1 and factorization of p - 1 cannot fail for primes in range.
    let phi = factorize(p - 1).map(|f| f.euler_phi()).unwrap_or(1);
    DoubleDouble::from_u128(phi as u128) / DoubleDouble::from_u128(p as u128 - 1)
}

fn prime_terms<F>(x: u64, term: F) -> Result<Vec<(u64, DoubleDouble)>>
where
    F: Fn(u64) -> DoubleDouble + Sync,
{
    let primes: Vec<u64> = primes_in_range(2, x)?.collect();
    Ok(primes
        .par_chunks(SWEEP_BATCH)
        .flat_map_iter(|chunk| chunk.iter().map(|&p| (p, term(p))))
        .collect())
}

/// Cumulative sums read off at each of the ascending checkpoints `xs`.
fn cumulative_at(terms: &[(u64, DoubleDouble)], xs: &[u64]) -> Vec<(DoubleDouble, u64)> {
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = DoubleDouble::ZERO;
    let mut count = 0u64;
    let mut it = terms.iter().peekable();
    for &x in xs {
        while let Some(&&(p, t)) = it.peek() {
            if p > x {
                break;
            }
            acc = acc + t;
            count += 1;
            it.next();
        }
        out.push((acc, count));
    }
    out
}

fn report(x: u64, k: u32, sum: DoubleDouble, pi_x: u64) -> Result<DensityReport> {
    let li_x = log_integral(x as f64)?;
    let s = sum.to_f64();
    Ok(DensityReport {
        x,
        k,
        sum,
        li_x,
        pi_x,
        ratio_li: s / li_x,
        ratio_pi: if pi_x == 0 {
            0.0
        } else {
            (sum / DoubleDouble::from_u128(pi_x as u128)).to_f64()
        },
    })
}

/// Empirical estimate of `a_k` from the primes up to `x`.
pub fn empirical_ak(x: u64, k: u32) -> Result<DensityReport> {
    Ok(empirical_ak_series(&[x], k)?.remove(0))
}

/// [`empirical_ak`] at several ascending cutoffs, sharing one pass over the primes.
pub fn empirical_ak_series(xs: &[u64], k: u32) -> Result<Vec<DensityReport>> {
    check_ascending(xs)?;
    let max = *xs
        .last()
        .ok_or_else(|| Error::Precondition("no cutoffs".into()))?;
    let terms = prime_terms(max, |p| phi_ratio(p).powi(k))?;
    cumulative_at(&terms, xs)
        .into_iter()
        .zip(xs)
        .map(|((sum, pi), &x)| report(x, k, sum, pi))
        .collect()
}

fn check_ascending(xs: &[u64]) -> Result<()> {
    if xs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("cutoffs must be ascending".into()));
    }
    if xs.first().is_some_and(|&x| x < 2) {
        return Err(Error::Precondition("cutoffs must be at least 2".into()));
    }
    Ok(())
}

fn exact_phi_ratio(p: u64) -> Result<BigRational> {
    let phi = factorize(p - 1)?.euler_phi();
    Ok(BigRational::new(BigInt::from(phi), BigInt::from(p - 1)))
}

fn check_exact_limit(x: u64) -> Result<()> {
    if x > EXACT_LIMIT {
        return Err(Error::Precondition(format!(
            "exact accumulation supports x <= {EXACT_LIMIT}"
        )));
    }
    Ok(())
}

/// `sum_{p <= x} (phi(p-1)/(p-1))^k` as an exact rational, for `x <= 10^4`.
pub fn empirical_ak_exact(x: u64, k: u32) -> Result<BigRational> {
    check_exact_limit(x)?;
    let mut sum = BigRational::zero();
    for p in primes_in_range(2, x)? {
        sum += num_traits::pow(exact_phi_ratio(p)?, k as usize);
    }
    Ok(sum)
}

fn mx_term(p: u64) -> DoubleDouble {
    let r = phi_ratio(p);
    let pd = DoubleDouble::from_u128(p as u128);
    let s = (pd - DoubleDouble::ONE) / pd;
    r * r * s * s
}

/// `M(x) = sum_{p <= x} (phi(p-1)/(p-1))^2 (1 - 1/p)^2`.
pub fn main_term_mx(x: u64) -> Result<DoubleDouble> {
    if x < 2 {
        return Err(Error::Precondition("M(x) requires x >= 2".into()));
    }
    Ok(prime_terms(x, mx_term)?.into_iter().map(|(_, t)| t).sum())
}

/// Exact rational `M(x)` for `x <= 10^4`.
pub fn main_term_mx_exact(x: u64) -> Result<BigRational> {
    check_exact_limit(x)?;
    let mut sum = BigRational::zero();
    for p in primes_in_range(2, x)? {
        let r = exact_phi_ratio(p)?;
        let s = BigRational::new(BigInt::from(p - 1), BigInt::from(p));
        sum += &r * &r * &s * &s;
    }
    Ok(sum)
}

/// Successive values of a sequence with their absolute successive differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceDiagnostic {
    pub points: Vec<(u64, f64)>,
    pub differences: Vec<f64>,
    /// Whether the absolute differences strictly decrease.
    pub strictly_decreasing: bool,
    pub max_difference: f64,
}

impl ConvergenceDiagnostic {
    pub fn new(points: Vec<(u64, f64)>) -> Self {
        let differences: Vec<f64> = points.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
        let strictly_decreasing = differences.windows(2).all(|w| w[1] < w[0]);
        let max_difference = differences.iter().copied().fold(0.0, f64::max);
        ConvergenceDiagnostic {
            points,
            differences,
            strictly_decreasing,
            max_difference,
        }
    }
}

/// `M(x)/li(x)` at `x, 2x, 4x, ...` (`steps` points in total).
pub fn mx_stability(x: u64, steps: u32) -> Result<ConvergenceDiagnostic> {
    let xs: Vec<u64> = (0..steps).map(|i| x << i).collect();
    check_ascending(&xs)?;
    let terms = prime_terms(*xs.last().unwrap_or(&x), mx_term)?;
    let points = cumulative_at(&terms, &xs)
        .into_iter()
        .zip(&xs)
        .map(|((m, _), &x)| Ok((x, m.to_f64() / log_integral(x as f64)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceDiagnostic::new(points))
}

/// Which closed form of the per-prime main term to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MainTermMode {
    /// `(phi(p-1)/(p-1))^2 (1 - 1/p)^2 p`, which simplifies to `phi(p-1)^2 / p`.
    Exact,
    /// `(phi(p-1)/(p-1))^2 p`.
    Asymptotic,
}

pub fn main_term_mfp(ctx: &PrimeContext, mode: MainTermMode) -> BigRational {
    let phi = BigInt::from(ctx.phi_p_minus_1());
    let p = BigInt::from(ctx.p());
    let n = BigInt::from(ctx.p() - 1);
    match mode {
        MainTermMode::Exact => BigRational::new(&phi * &phi, p),
        MainTermMode::Asymptotic => BigRational::new(&phi * &phi * p, &n * &n),
    }
}

/// `pi_f(x, z) / pi(x)`; zero when no prime lies below `x`.
pub fn empirical_delta(x: u64, z: i64, f: &IntPolynomial) -> Result<f64> {
    Ok(delta_series(&[x], z, f)?.points[0].1)
}

/// `pi_f(x, z) / pi(x)` at several ascending cutoffs from one sweep,
/// with the successive-difference diagnostic.
pub fn delta_series(xs: &[u64], z: i64, f: &IntPolynomial) -> Result<ConvergenceDiagnostic> {
    check_ascending(xs)?;
    let max = *xs
        .last()
        .ok_or_else(|| Error::Precondition("no cutoffs".into()))?;
    let series = sweep_series(max, z, f)?;
    let points = xs
        .iter()
        .map(|&x| {
            let pi = series.records.iter().take_while(|r| r.p <= x).count();
            let pi_f = series.pi_f_at(x);
            let d = if pi == 0 {
                0.0
            } else {
                pi_f as f64 / pi as f64
            };
            (x, d)
        })
        .collect();
    Ok(ConvergenceDiagnostic::new(points))
}

/// Per-prime empirical constant `N_f(p) / ((phi(p-1)/(p-1))^2 p)`.
pub fn empirical_cfp(ctx: &PrimeContext, f: &IntPolynomial) -> Result<BigRational> {
    let spectrum = simultaneous_spectrum(ctx.p(), std::slice::from_ref(f))?;
    let n = BigRational::from_integer(BigInt::from(spectrum.tuple_count()));
    Ok(n / main_term_mfp(ctx, MainTermMode::Asymptotic))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
