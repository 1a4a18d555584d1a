//! Exact modular and multiplicative arithmetic over `u64`.
//!
//! Every modulus is capped at 2^62 so that products widened to `u128` are
//! always exact. Primality is decided by Miller-Rabin with a witness set that
//! is deterministic for all 64-bit inputs; factorization combines trial
//! division with Pollard-Brent rho driven by a fixed seed schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus.
pub const MODULUS_CEILING: u64 = 1 << 62;

/// Segment length used by the segmented sieve.
pub const SEGMENT_LEN: u64 = 1 << 20;

/// Ranges ending at or below this bound are served by a single full sieve.
pub const FULL_SIEVE_LIMIT: u64 = 1 << 24;

/// A validated modulus in `[1, 2^62]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            Err(Error::ZeroModulus)
        } else if m > MODULUS_CEILING {
            Err(Error::ModulusTooLarge(m))
        } else {
            Ok(Modulus(m))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, a: u64) -> u64 {
        a % self.0
    }

    /// Reduces a signed integer into `[0, m)`.
    #[inline]
    pub fn reduce_signed(self, a: i128) -> u64 {
        a.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.0 as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        let (a, b) = (a % self.0, b % self.0);
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    pub fn pow(self, base: u64, mut exp: u64) -> u64 {
        let mut result = 1 % self.0;
        let mut base = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }
}

/// `(a * b) mod m` with a widened intermediate product.
pub fn mul_mod(a: u64, b: u64, m: u64) -> Result<u64> {
    Ok(Modulus::new(m)?.mul(a, b))
}

/// `a^e mod m` by square-and-multiply.
pub fn pow_mod(a: u64, e: u64, m: u64) -> Result<u64> {
    Ok(Modulus::new(m)?.pow(a, e))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Integer square root: the largest `r` with `r * r <= n`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

// Witnesses 2..37 are deterministic for every n < 3.3 * 10^24.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test for `n <= 2^62` (and in fact all `u64`).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    if n < 37 * 37 {
        return true;
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    let m = Modulus(n);
    'witness: for &a in &MR_WITNESSES {
        let mut x = m.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = m.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A positive integer together with its prime-power factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs in strictly increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }

    /// Euler's totient, computed exactly from the factorization.
    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(q, e)| acc * (q - 1) * q.pow(e - 1))
    }

    /// Number of divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// Sum of divisors. Returned as `u128` since it can exceed `2^64` near the ceiling.
    pub fn divisor_sum(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(q, e)| {
                let q = q as u128;
                (q.pow(e + 1) - 1) / (q - 1)
            })
            .product()
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(q, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= q;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

const TRIAL_BOUND: u64 = 1 << 10;

/// Complete factorization of `1 <= n <= 2^62`.
pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::OutOfRange {
            value: 0,
            lo: 1,
            hi: MODULUS_CEILING,
        });
    }
    if n > MODULUS_CEILING {
        return Err(Error::ModulusTooLarge(n));
    }
    let mut rest = n;
    let mut primes = Vec::new();
    let tz = rest.trailing_zeros();
    primes.resize(tz as usize, 2);
    rest >>= tz;
    let mut q = 3;
    while q < TRIAL_BOUND && q * q <= rest {
        while rest.is_multiple_of(q) {
            primes.push(q);
            rest /= q;
        }
        q += 2;
    }
    if rest > 1 {
        if rest < TRIAL_BOUND * TRIAL_BOUND {
            primes.push(rest);
        } else {
            split_large(rest, &mut primes);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(FactoredInteger { value: n, factors })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = isqrt(n);
    if r * r == n {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Finds a nontrivial factor of the odd composite `n`. The increment `c`
/// walks a fixed schedule 1, 2, 3, ... so the result is reproducible.
fn pollard_brent(n: u64) -> u64 {
    let m = Modulus(n);
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let f = |x: u64| m.add(m.mul(x, x), c);
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = m.mul(q, x.abs_diff(y));
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho schedule is unbounded")
}

/// Euler's totient of a factored integer.
pub fn euler_phi(n: &FactoredInteger) -> u64 {
    n.euler_phi()
}

/// `d(n)`, the number of divisors of `n >= 1`.
pub fn divisor_count(n: u64) -> Result<u64> {
    Ok(factorize(n)?.divisor_count())
}

/// `sigma(n)`, the sum of divisors of `n >= 1`.
pub fn divisor_sum(n: u64) -> Result<u128> {
    Ok(factorize(n)?.divisor_sum())
}

/// All primes `<= limit` by the sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(estimate_prime_count(limit));
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            if let Some(start) = i.checked_mul(i) {
                let mut j = start;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
    }
    primes
}

fn estimate_prime_count(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize
}

/// The primes in `[lo, hi]` in ascending order.
///
/// Ranges with `hi <= 2^24` come from one full sieve; anything higher is
/// sieved lazily in segments of `2^20` integers.
pub fn primes_in_range(lo: u64, hi: u64) -> Result<PrimeRange> {
    if hi > MODULUS_CEILING {
        return Err(Error::ModulusTooLarge(hi));
    }
    Ok(PrimeRange::new(lo, hi))
}

/// Iterator over the primes of a closed interval.
pub struct PrimeRange {
    hi: u64,
    base: Vec<u64>,
    seg_lo: u64,
    buffer: Vec<u64>,
    pos: usize,
    done: bool,
}

impl PrimeRange {
    fn new(lo: u64, hi: u64) -> Self {
        let lo = lo.max(2);
        let mut range = PrimeRange {
            hi,
            base: Vec::new(),
            seg_lo: lo,
            buffer: Vec::new(),
            pos: 0,
            done: lo > hi,
        };
        if range.done {
            return range;
        }
        if hi <= FULL_SIEVE_LIMIT {
            range.buffer = sieve_primes(hi).into_iter().filter(|&p| p >= lo).collect();
            range.seg_lo = hi.saturating_add(1);
        } else {
            range.base = sieve_primes(isqrt(hi));
        }
        range
    }

    fn fill_segment(&mut self) {
        self.buffer.clear();
        self.pos = 0;
        if self.seg_lo > self.hi {
            self.done = true;
            return;
        }
        let lo = self.seg_lo;
        let hi = lo.saturating_add(SEGMENT_LEN - 1).min(self.hi);
        let len = (hi - lo + 1) as usize;
        let mut composite = vec![false; len];
        for &q in &self.base {
            if q * q > hi {
                break;
            }
            let mut start = lo.div_ceil(q) * q;
            if start < q * q {
                start = q * q;
            }
            let mut j = start;
            while j <= hi {
                composite[(j - lo) as usize] = true;
                j += q;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            let n = lo + i as u64;
            if !c && n >= 2 {
                self.buffer.push(n);
            }
        }
        self.seg_lo = hi.saturating_add(1);
        if hi == self.hi {
            self.seg_lo = self.hi.saturating_add(1);
        }
    }
}

impl Iterator for PrimeRange {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.pos < self.buffer.len() {
                let p = self.buffer[self.pos];
                self.pos += 1;
                return Some(p);
            }
            if self.done || self.seg_lo > self.hi {
                self.done = true;
                return None;
            }
            self.fill_segment();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn mul_mod_examples() {
        assert_eq!(mul_mod(3, 4, 5).unwrap(), 2);
        assert_eq!(mul_mod(0, 7, 11).unwrap(), 0);
        // 2^62 mod (2^61 - 1) = 2, from a big-integer reference.
        assert_eq!(mul_mod(1 << 31, 1 << 31, (1 << 61) - 1).unwrap(), 2);
        assert_eq!(mul_mod(1, 1, 0), Err(Error::ZeroModulus));
        let m = (1u64 << 62) - 57;
        // (m-1)^2 = 1 mod m
        assert_eq!(mul_mod(m - 1, m - 1, m).unwrap(), 1);
    }

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(5, 96, 97).unwrap(), 1);
        assert_eq!(pow_mod(5, 48, 97).unwrap(), 96);
        assert_eq!(pow_mod(12, 0, 7).unwrap(), 1);
        assert_eq!(pow_mod(12, 0, 1).unwrap(), 0);
        assert_eq!(pow_mod(2, 3, 0), Err(Error::ZeroModulus));
    }

    #[test]
    fn fermat_for_small_primes() {
        for p in sieve_primes(10_000) {
            let m = Modulus::new(p).unwrap();
            for a in 1..p {
                assert_eq!(m.pow(a, p - 1), 1, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn is_prime_examples() {
        assert!(is_prime(97));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(341));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(is_prime((1u64 << 62) - 57));
    }

    #[test]
    fn is_prime_matches_trial_division() {
        let sieved = sieve_primes(1_000_000);
        let mut it = sieved.iter().peekable();
        for n in 0..=1_000_000u64 {
            let expect = it.peek().is_some_and(|&&p| p == n);
            if expect {
                it.next();
            }
            assert_eq!(is_prime(n), expect, "n={n}");
        }
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial_is_prime(n));
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(96).unwrap().factors(), &[(2, 5), (3, 1)]);
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(100).unwrap().factors(), &[(2, 2), (5, 2)]);
        assert!(factorize(0).is_err());
        let big = ((1u64 << 31) - 1) * 1_000_003;
        assert_eq!(
            factorize(big).unwrap().factors(),
            &[(1_000_003, 1), ((1 << 31) - 1, 1)]
        );
        let m31 = (1u64 << 31) - 1;
        assert_eq!(factorize(m31 * m31).unwrap().factors(), &[(m31, 2)]);
        let f = factorize((1u64 << 62) - 2).unwrap();
        assert_eq!(
            f.factors().iter().map(|&(q, e)| q.pow(e)).product::<u64>(),
            (1u64 << 62) - 2
        );
    }

    #[test]
    fn factorization_invariants_small_range() {
        // phi, d and sigma tables by direct sieving / enumeration.
        const N: usize = 100_000;
        let mut phi: Vec<u64> = (0..=N as u64).collect();
        for i in 2..=N {
            if phi[i] == i as u64 {
                let mut j = i;
                while j <= N {
                    phi[j] -= phi[j] / i as u64;
                    j += i;
                }
            }
        }
        let mut d = vec![0u64; N + 1];
        let mut s = vec![0u128; N + 1];
        for i in 1..=N {
            let mut j = i;
            while j <= N {
                d[j] += 1;
                s[j] += i as u128;
                j += i;
            }
        }
        for n in 1..=N as u64 {
            let f = factorize(n).unwrap();
            let mut prev = 0;
            let mut product = 1u64;
            for &(q, e) in f.factors() {
                assert!(q > prev && e >= 1 && is_prime(q));
                prev = q;
                product *= q.pow(e);
            }
            assert_eq!(product, n);
            assert_eq!(f.euler_phi(), phi[n as usize], "phi({n})");
            assert_eq!(f.divisor_count(), d[n as usize], "d({n})");
            assert_eq!(f.divisor_sum(), s[n as usize], "sigma({n})");
        }
    }

    #[test]
    fn phi_d_sigma_examples() {
        assert_eq!(euler_phi(&factorize(96).unwrap()), 32);
        assert_eq!(euler_phi(&factorize(100).unwrap()), 40);
        assert_eq!(euler_phi(&factorize(1).unwrap()), 1);
        assert_eq!(divisor_count(6).unwrap(), 4);
        assert_eq!(divisor_sum(6).unwrap(), 12);
        assert_eq!(divisor_count(96).unwrap(), 12);
        assert_eq!(factorize(12).unwrap().divisors(), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn primes_in_range_examples() {
        let v: Vec<u64> = primes_in_range(1, 10).unwrap().collect();
        assert_eq!(v, vec![2, 3, 5, 7]);
        let v: Vec<u64> = primes_in_range(90, 105).unwrap().collect();
        assert_eq!(v, vec![97, 101, 103]);
        assert_eq!(primes_in_range(1, 1_000_000).unwrap().count(), 78498);
        assert_eq!(primes_in_range(10, 5).unwrap().count(), 0);
        assert_eq!(primes_in_range(7, 7).unwrap().collect::<Vec<_>>(), vec![7]);
    }

    #[test]
    fn segmented_matches_primality_test() {
        let lo = FULL_SIEVE_LIMIT - 1000;
        let hi = FULL_SIEVE_LIMIT + 3 * SEGMENT_LEN + 17;
        let got: Vec<u64> = primes_in_range(lo, hi).unwrap().collect();
        let want: Vec<u64> = (lo..=hi).filter(|&n| is_prime(n)).collect();
        assert_eq!(got, want);
        let lo = (1u64 << 40) + 5;
        let got: Vec<u64> = primes_in_range(lo, lo + 5000).unwrap().collect();
        let want: Vec<u64> = (lo..=lo + 5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn isqrt_edges() {
        for n in 0..10_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
    }
}
