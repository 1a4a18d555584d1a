//! Multiplicative orders, primitive roots, discrete logarithms and the
//! exponential-sum characteristic function of primitive roots.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, is_prime, FactoredInteger, Modulus};
use crate::error::{Error, Result};

/// A prime together with the data every primitive-root computation needs:
/// the factorization of `p - 1`, `phi(p - 1)` and the least primitive root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeContext {
    p: u64,
    p_minus_1: FactoredInteger,
    phi_p_minus_1: u64,
    tau: u64,
}

impl PrimeContext {
    /// Builds the context for the prime `p`, fixing `tau` as its least primitive root.
    pub fn new(p: u64) -> Result<Self> {
        least_primitive_root(p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.p).expect("validated at construction")
    }

    pub fn p_minus_1(&self) -> &FactoredInteger {
        &self.p_minus_1
    }

    pub fn phi_p_minus_1(&self) -> u64 {
        self.phi_p_minus_1
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    /// Primitive-root test that assumes `1 <= z < p`.
    #[inline]
    fn full_order(&self, z: u64) -> bool {
        let m = self.modulus();
        let n = self.p - 1;
        self.p_minus_1.primes().all(|q| m.pow(z, n / q) != 1)
    }

    fn check_nonzero(&self, z: u64) -> Result<u64> {
        let z = z % self.p;
        if z == 0 {
            Err(Error::ZeroResidue(self.p))
        } else {
            Ok(z)
        }
    }
}

/// Least `k >= 1` with `z^k = 1 (mod p)`.
pub fn multiplicative_order(z: u64, ctx: &PrimeContext) -> Result<u64> {
    let z = ctx.check_nonzero(z)?;
    let m = ctx.modulus();
    let mut order = ctx.p - 1;
    for &(q, e) in ctx.p_minus_1.factors() {
        for _ in 0..e {
            if m.pow(z, order / q) == 1 {
                order /= q;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Whether `z` generates the multiplicative group mod `p`. Zero is never a primitive root.
pub fn is_primitive_root(z: u64, ctx: &PrimeContext) -> bool {
    let z = z % ctx.p;
    z != 0 && ctx.full_order(z)
}

/// Primitive-root test against a prime `p` whose `p - 1` is already factored.
/// Skips the least-root search that building a [`PrimeContext`] entails.
pub fn has_full_order(z: u64, p: u64, p_minus_1: &FactoredInteger) -> bool {
    let m = match Modulus::new(p) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let z = m.reduce(z);
    z != 0 && p_minus_1.primes().all(|q| m.pow(z, (p - 1) / q) != 1)
}

/// Builds the [`PrimeContext`] of `p` by ascending search for its least primitive root.
pub fn least_primitive_root(p: u64) -> Result<PrimeContext> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p_minus_1 = factorize(p - 1)?;
    let phi_p_minus_1 = p_minus_1.euler_phi();
    let mut ctx = PrimeContext {
        p,
        p_minus_1,
        phi_p_minus_1,
        tau: 1,
    };
    ctx.tau = (1..p)
        .find(|&z| ctx.full_order(z))
        .expect("every prime has a primitive root");
    Ok(ctx)
}

/// All primitive roots mod `p`, ascending. Built as `{tau^n : gcd(n, p-1) = 1}`.
pub fn enumerate_primitive_roots(ctx: &PrimeContext) -> Vec<u64> {
    let m = ctx.modulus();
    let n = ctx.p - 1;
    let mut roots = Vec::with_capacity(ctx.phi_p_minus_1 as usize);
    let mut power = 1 % ctx.p;
    for k in 1..=n {
        power = m.mul(power, ctx.tau);
        if gcd(k, n) == 1 {
            roots.push(power);
        }
    }
    roots.sort_unstable();
    roots
}

/// Baby-step giant-step solver for `tau^k = u (mod p)`.
///
/// The baby-step table is built once and reused for every query.
pub struct DiscreteLog {
    modulus: Modulus,
    order: u64,
    step: u64,
    baby: HashMap<u64, u64>,
    giant: u64,
}

impl DiscreteLog {
    pub fn new(ctx: &PrimeContext) -> Self {
        let m = ctx.modulus();
        let order = ctx.p - 1;
        let step = ((order as f64).sqrt().ceil() as u64).max(1);
        let step = if step * step < order { step + 1 } else { step };
        let mut baby = HashMap::with_capacity(step as usize);
        let mut power = 1 % ctx.p;
        for j in 0..step {
            baby.entry(power).or_insert(j);
            power = m.mul(power, ctx.tau);
        }
        // tau^(-step) = tau^(order - step mod order)
        let inv_exp = (order - step % order) % order;
        let giant = m.pow(ctx.tau, inv_exp);
        DiscreteLog {
            modulus: m,
            order,
            step,
            baby,
            giant,
        }
    }

    /// The unique `k` in `[0, p-2]` with `tau^k = u`.
    pub fn log(&self, u: u64) -> Result<u64> {
        let u = u % self.modulus.get();
        if u == 0 {
            return Err(Error::ZeroResidue(self.modulus.get()));
        }
        let mut gamma = u;
        for i in 0..self.step {
            if let Some(&j) = self.baby.get(&gamma) {
                return Ok((i * self.step + j) % self.order.max(1));
            }
            gamma = self.modulus.mul(gamma, self.giant);
        }
        unreachable!("tau generates the group, so every nonzero residue has a log")
    }
}

/// Discrete logarithm of `u` to the base `ctx.tau()`.
pub fn discrete_log(u: u64, ctx: &PrimeContext) -> Result<u64> {
    DiscreteLog::new(ctx).log(u)
}

/// Full index table `u -> log_tau(u)` filled by walking the powers of `tau`.
/// Memory is linear in `p`, so this is meant for whole-group scans.
pub struct IndexTable {
    index: Vec<u32>,
}

impl IndexTable {
    pub const MAX_PRIME: u64 = 1 << 31;

    pub fn new(ctx: &PrimeContext) -> Result<Self> {
        if ctx.p > Self::MAX_PRIME {
            return Err(Error::Precondition(format!(
                "index table needs p <= {}",
                Self::MAX_PRIME
            )));
        }
        let m = ctx.modulus();
        let mut index = vec![u32::MAX; ctx.p as usize];
        let mut power = 1 % ctx.p;
        for k in 0..(ctx.p - 1).max(1) {
            index[power as usize] = k as u32;
            power = m.mul(power, ctx.tau);
        }
        Ok(IndexTable { index })
    }

    pub fn log(&self, u: u64) -> Option<u64> {
        match self.index.get(u as usize) {
            Some(&k) if k != u32::MAX => Some(k as u64),
            _ => None,
        }
    }
}

/// Divisor-free characteristic value: `1` iff `gcd(log_tau(u), p - 1) = 1`.
/// Zero residues map to `0`.
pub fn psi_exact(u: u64, ctx: &PrimeContext) -> u8 {
    psi_exact_with(u, ctx, &DiscreteLog::new(ctx))
}

/// [`psi_exact`] reusing a prepared discrete-log solver.
pub fn psi_exact_with(u: u64, ctx: &PrimeContext, dlog: &DiscreteLog) -> u8 {
    match dlog.log(u) {
        Ok(k) => (gcd(k, ctx.p - 1) == 1) as u8,
        Err(_) => 0,
    }
}

/// Powers `tau^n` for the exponents `n in [1, p-1]` coprime to `p - 1`.
pub(crate) fn coprime_powers(ctx: &PrimeContext) -> Vec<u64> {
    let m = ctx.modulus();
    let n = ctx.p - 1;
    let mut out = Vec::with_capacity(ctx.phi_p_minus_1 as usize);
    let mut power = 1 % ctx.p;
    for k in 1..=n.max(1) {
        power = m.mul(power, ctx.tau);
        if gcd(k, n) == 1 {
            out.push(power);
        }
    }
    out
}

/// The table `e^(2 pi i j / p)` for `j in [0, p)`.
pub(crate) fn unit_roots(p: u64) -> Vec<Complex64> {
    (0..p)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / p as f64))
        .collect()
}

/// Direct evaluation of
/// `sum_{gcd(n, p-1) = 1} (1/p) sum_{0 <= k <= p-1} e^(2 pi i (tau^n - u) k / p)`
/// in complex floating point. Cost is `O(p * phi(p-1))`.
pub fn psi_literal(u: u64, ctx: &PrimeContext) -> Complex64 {
    psi_literal_with(u, ctx, &coprime_powers(ctx), &unit_roots(ctx.p))
}

pub(crate) fn psi_literal_with(
    u: u64,
    ctx: &PrimeContext,
    powers: &[u64],
    roots: &[Complex64],
) -> Complex64 {
    let m = ctx.modulus();
    let p = ctx.p;
    let mut total = Complex64::new(0.0, 0.0);
    for &t in powers {
        let r = m.sub(t, u % p);
        let mut inner = Complex64::new(0.0, 0.0);
        let mut idx = 0u64;
        for _ in 0..p {
            inner += roots[idx as usize];
            idx += r;
            if idx >= p {
                idx -= p;
            }
        }
        total += inner;
    }
    total / p as f64
}
