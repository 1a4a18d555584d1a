//! Counting simultaneous primitive roots: per prime over residues (the
//! spectrum of a prime) and per integer over primes (the prime sweep), plus
//! a handful of statistics over the set of primitive roots of one prime.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, primes_in_range, FactoredInteger, Modulus};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::roots::{enumerate_primitive_roots, has_full_order, is_primitive_root, PrimeContext};

/// Number of primes handed to one parallel task. Fixed so that every
/// reduction sees the same partition regardless of thread count.
pub const SWEEP_BATCH: usize = 4096;

/// One primitive root `z` with the values `f_i(z) mod p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub z: u64,
    pub values: Vec<u64>,
    pub is_tuple: bool,
}

/// All primitive roots of `p` with their polynomial values, flagging the
/// rows where every value is itself a primitive root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleSpectrum {
    p: u64,
    polys: Vec<IntPolynomial>,
    rows: Vec<SpectrumRow>,
    tuple_count: usize,
}

impl TupleSpectrum {
    /// Rebuilds a spectrum from stored rows, checking every invariant against
    /// a fresh computation.
    pub fn from_rows(p: u64, polys: Vec<IntPolynomial>, rows: Vec<SpectrumRow>) -> Result<Self> {
        let fresh = simultaneous_spectrum(p, &polys)?;
        if fresh.rows != rows {
            return Err(Error::Precondition(format!(
                "stored rows do not match the spectrum of p = {p}"
            )));
        }
        Ok(fresh)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }

    pub fn rows(&self) -> &[SpectrumRow] {
        &self.rows
    }

    pub fn tuple_count(&self) -> usize {
        self.tuple_count
    }

    pub fn tuple_rows(&self) -> impl Iterator<Item = &SpectrumRow> {
        self.rows.iter().filter(|r| r.is_tuple)
    }

    /// Rows in the published-table convention: values of non-tuple rows are 0.
    pub fn sentinel_rows(&self) -> Vec<(u64, Vec<u64>)> {
        self.rows
            .iter()
            .map(|r| {
                let vals = if r.is_tuple {
                    r.values.clone()
                } else {
                    vec![0; r.values.len()]
                };
                (r.z, vals)
            })
            .collect()
    }
}

/// Exhaustive scan of `z in [1, p-1]` for simultaneous primitive roots
/// `z, f_1(z), ..., f_k(z)`.
pub fn simultaneous_spectrum(p: u64, polys: &[IntPolynomial]) -> Result<TupleSpectrum> {
    if polys.is_empty() {
        return Err(Error::NoPolynomials);
    }
    let ctx = PrimeContext::new(p)?;
    let m = ctx.modulus();
    let rows: Vec<SpectrumRow> = enumerate_primitive_roots(&ctx)
        .into_iter()
        .map(|z| {
            let values: Vec<u64> = polys.iter().map(|f| f.eval_mod(z, m)).collect();
            let is_tuple = values.iter().all(|&v| is_primitive_root(v, &ctx));
            SpectrumRow {
                z,
                values,
                is_tuple,
            }
        })
        .collect();
    let tuple_count = rows.iter().filter(|r| r.is_tuple).count();
    Ok(TupleSpectrum {
        p,
        polys: polys.to_vec(),
        rows,
        tuple_count,
    })
}

/// Whether `z mod p` and `f(z) mod p` are both primitive roots mod the prime `p`.
/// Zero residues never qualify.
pub fn is_simultaneous_hit(p: u64, z: i64, f: &IntPolynomial) -> bool {
    let Ok(m) = Modulus::new(p) else { return false };
    let zr = m.reduce_signed(z as i128);
    if zr == 0 {
        return false;
    }
    let fz = f.eval_mod(zr, m);
    if fz == 0 {
        return false;
    }
    let p_minus_1: FactoredInteger = match factorize(p - 1) {
        Ok(fi) => fi,
        Err(_) => return false,
    };
    has_full_order(zr, p, &p_minus_1) && has_full_order(fz, p, &p_minus_1)
}

/// Hit flags for an ascending slice of primes, evaluated in parallel on the
/// current rayon pool. The output order follows `primes`.
pub fn sweep_hits(primes: &[u64], z: i64, f: &IntPolynomial) -> Vec<bool> {
    primes
        .par_chunks(SWEEP_BATCH)
        .flat_map_iter(|chunk| chunk.iter().map(|&p| is_simultaneous_hit(p, z, f)))
        .collect()
}

fn primes_up_to(x: u64) -> Result<Vec<u64>> {
    Ok(primes_in_range(2, x)?.collect())
}

/// `#{p <= x : z and f(z) are simultaneous primitive roots mod p}`.
pub fn count_pi_f(x: u64, z: i64, f: &IntPolynomial) -> Result<u64> {
    let primes = primes_up_to(x)?;
    Ok(primes
        .par_chunks(SWEEP_BATCH)
        .map(|chunk| {
            chunk
                .iter()
                .filter(|&&p| is_simultaneous_hit(p, z, f))
                .count() as u64
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum())
}

/// One evaluated prime of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub p: u64,
    pub hit: bool,
}

/// Per-prime hit record for a fixed `z` and `f` over every prime `<= x_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub z: i64,
    pub poly: IntPolynomial,
    pub x_max: u64,
    pub records: Vec<SweepRecord>,
}

impl SweepSeries {
    pub fn pi_f(&self) -> u64 {
        self.records.iter().filter(|r| r.hit).count() as u64
    }

    pub fn pi(&self) -> u64 {
        self.records.len() as u64
    }

    /// `pi_f(x)` for `x <= x_max`, read off the records.
    pub fn pi_f_at(&self, x: u64) -> u64 {
        self.records
            .iter()
            .take_while(|r| r.p <= x)
            .filter(|r| r.hit)
            .count() as u64
    }
}

pub fn sweep_series(x_max: u64, z: i64, f: &IntPolynomial) -> Result<SweepSeries> {
    let primes = primes_up_to(x_max)?;
    let hits = sweep_hits(&primes, z, f);
    Ok(SweepSeries {
        z,
        poly: f.clone(),
        x_max,
        records: primes
            .into_iter()
            .zip(hits)
            .map(|(p, hit)| SweepRecord { p, hit })
            .collect(),
    })
}

/// `U(p)`: the number of primes `q < p` that are primitive roots mod `p`.
pub fn prime_primitive_root_count(ctx: &PrimeContext) -> u64 {
    enumerate_primitive_roots(ctx)
        .into_iter()
        .filter(|&q| is_prime(q))
        .count() as u64
}

/// The classical arithmetic functions summed over primitive roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithmeticFunction {
    /// `d(n)`, number of divisors.
    Divisors,
    /// `sigma(n)`, sum of divisors.
    DivisorSum,
    /// `phi(n)`, Euler's totient.
    Totient,
}

impl ArithmeticFunction {
    pub const ALL: [ArithmeticFunction; 3] = [
        ArithmeticFunction::Divisors,
        ArithmeticFunction::DivisorSum,
        ArithmeticFunction::Totient,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            ArithmeticFunction::Divisors => "d",
            ArithmeticFunction::DivisorSum => "sigma",
            ArithmeticFunction::Totient => "phi",
        }
    }

    pub fn eval(self, n: u64) -> Result<u128> {
        let fi = factorize(n)?;
        Ok(match self {
            ArithmeticFunction::Divisors => fi.divisor_count() as u128,
            ArithmeticFunction::DivisorSum => fi.divisor_sum(),
            ArithmeticFunction::Totient => fi.euler_phi() as u128,
        })
    }
}

/// Sum of `func(n)` over the primitive roots `n` of `p`, restricted to
/// `n <= limit` when a limit is given.
pub fn restricted_average_order(
    ctx: &PrimeContext,
    func: ArithmeticFunction,
    limit: Option<u64>,
) -> Result<u128> {
    if let Some(x) = limit {
        if x > ctx.p() - 1 {
            return Err(Error::OutOfRange {
                value: x,
                lo: 0,
                hi: ctx.p() - 1,
            });
        }
    }
    let bound = limit.unwrap_or(ctx.p() - 1);
    enumerate_primitive_roots(ctx)
        .into_iter()
        .take_while(|&n| n <= bound)
        .map(|n| func.eval(n))
        .sum()
}

/// `#{tau primitive root : func(tau) mod p is a primitive root}`.
pub fn value_set_count(ctx: &PrimeContext, func: ArithmeticFunction) -> Result<u64> {
    let mut count = 0;
    for tau in enumerate_primitive_roots(ctx) {
        let v = (func.eval(tau)? % ctx.p() as u128) as u64;
        if is_primitive_root(v, ctx) {
            count += 1;
        }
    }
    Ok(count)
}

/// Fraction of tuple rows `z` whose mirror `p - z` is also a tuple row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryStatistic {
    pub mirrored: u64,
    pub total: u64,
    /// Set when the spectrum has no tuple rows; the value is then 0.
    pub empty: bool,
}

impl SymmetryStatistic {
    pub fn ratio(&self) -> Ratio<u64> {
        if self.empty {
            Ratio::from_integer(0)
        } else {
            Ratio::new(self.mirrored, self.total)
        }
    }

    pub fn value(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.mirrored as f64 / self.total as f64
        }
    }
}

pub fn symmetry_statistic(spec: &TupleSpectrum) -> SymmetryStatistic {
    let p = spec.p();
    let tuples: Vec<u64> = spec.tuple_rows().map(|r| r.z).collect();
    let mirrored = tuples
        .iter()
        .filter(|&&z| tuples.binary_search(&(p - z)).is_ok())
        .count() as u64;
    SymmetryStatistic {
        mirrored,
        total: tuples.len() as u64,
        empty: tuples.is_empty(),
    }
}
