//! The exponential sum `T(u, p)` and the four-way split of
//! `sum_{z < p} Psi(z) Psi(f(z))` by trivial/nontrivial additive characters.
//!
//! Every quantity has a literal complex-float route (a direct double sum of
//! roots of unity) and an exact route through `Psi`. The literal routes cost
//! `O(p * phi(p-1))` per residue and are capped accordingly.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::simultaneous_spectrum;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::roots::{
    coprime_powers, is_primitive_root, psi_exact_with, unit_roots, DiscreteLog, IndexTable,
    PrimeContext,
};

/// Largest prime for which single-residue literal sums are evaluated.
pub const LITERAL_LIMIT: u64 = 2000;

/// Largest prime for which the decomposition is evaluated through literal
/// root-of-unity sums; above it the per-residue closed forms are used.
pub const LITERAL_DECOMPOSITION_LIMIT: u64 = 10_000;

/// Agreement tolerance per unit of `p` between literal and exact values.
pub const TOLERANCE_PER_P: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpSumResult {
    pub u: u64,
    pub p: u64,
    /// `(re, im)` of the literal double sum; absent above [`LITERAL_LIMIT`].
    pub literal_value: Option<(f64, f64)>,
    pub exact_value: i64,
    /// `log_p |exact_value|`, absent when the value is 0.
    pub normalized_exponent: Option<f64>,
}

fn check_residue(u: u64, ctx: &PrimeContext) -> Result<()> {
    if u == 0 || u >= ctx.p() {
        return Err(Error::OutOfRange {
            value: u,
            lo: 1,
            hi: ctx.p() - 1,
        });
    }
    Ok(())
}

fn exponent(value: i64, p: u64) -> Option<f64> {
    (value != 0 && p > 1).then(|| (value.unsigned_abs() as f64).ln() / (p as f64).ln())
}

/// Sum of `e^(2 pi i j / p)` over `j = r*a mod p` for `a` in `range`.
fn geometric(r: u64, p: u64, start: u64, roots: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut idx = (r as u128 * start as u128 % p as u128) as u64;
    for _ in start..p {
        acc += roots[idx as usize];
        idx += r;
        if idx >= p {
            idx -= p;
        }
    }
    acc
}

/// `sum_{0 < a < p} sum_{gcd(n, p-1) = 1} e(a (tau^n - u) / p)` by direct summation.
pub fn t_sum_literal(u: u64, ctx: &PrimeContext) -> Result<Complex64> {
    check_residue(u, ctx)?;
    let roots = unit_roots(ctx.p());
    Ok(literal_sum(u, ctx, &coprime_powers(ctx), &roots, 1))
}

fn literal_sum(
    u: u64,
    ctx: &PrimeContext,
    powers: &[u64],
    roots: &[Complex64],
    start: u64,
) -> Complex64 {
    let m = ctx.modulus();
    powers
        .iter()
        .map(|&t| geometric(m.sub(t, u), ctx.p(), start, roots))
        .sum()
}

/// `T(u, p) = p * Psi(u) - phi(p-1)`, exactly.
pub fn t_sum_exact(u: u64, ctx: &PrimeContext) -> Result<i64> {
    check_residue(u, ctx)?;
    Ok(t_exact_from_psi(
        psi_exact_with(u, ctx, &DiscreteLog::new(ctx)),
        ctx,
    ))
}

fn t_exact_from_psi(psi: u8, ctx: &PrimeContext) -> i64 {
    ctx.p() as i64 * psi as i64 - ctx.phi_p_minus_1() as i64
}

/// Both routes for one residue.
pub fn exp_sum(u: u64, ctx: &PrimeContext) -> Result<ExpSumResult> {
    let exact_value = t_sum_exact(u, ctx)?;
    let literal_value = if ctx.p() <= LITERAL_LIMIT {
        let v = t_sum_literal(u, ctx)?;
        Some((v.re, v.im))
    } else {
        None
    };
    Ok(ExpSumResult {
        u,
        p: ctx.p(),
        literal_value,
        exact_value,
        normalized_exponent: exponent(exact_value, ctx.p()),
    })
}

/// Literal `sum_{0 <= a < p} sum_{gcd(n, p-1) = 1} e(a (tau^n - u) / p)` for a
/// non-primitive `u`, where every inner geometric sum runs over a full period
/// and vanishes.
pub fn vanishing_check_e0(u: u64, ctx: &PrimeContext) -> Result<Complex64> {
    check_residue(u, ctx)?;
    if is_primitive_root(u, ctx) {
        return Err(Error::Precondition(format!(
            "{u} is a primitive root mod {}; the vanishing sum needs ord(u) != p - 1",
            ctx.p()
        )));
    }
    let roots = unit_roots(ctx.p());
    Ok(literal_sum(u, ctx, &coprime_powers(ctx), &roots, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionRoute {
    /// Inner sums evaluated as literal sums of roots of unity.
    Literal,
    /// Inner sums replaced by their per-residue closed forms.
    ClosedForm,
}

/// `M + E0 + E1 + E2` next to the brute-force count `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub p: u64,
    pub poly: IntPolynomial,
    pub route: DecompositionRoute,
    /// Both additive characters trivial.
    pub m: f64,
    /// Trivial in `z`, nontrivial in `f(z)`.
    pub e0: f64,
    /// Nontrivial in `z`, trivial in `f(z)`.
    pub e1: f64,
    /// Both nontrivial.
    pub e2: f64,
    pub total: f64,
    /// Largest imaginary part seen in any piece.
    pub max_imag: f64,
    pub n: u64,
    pub consistent: bool,
}

/// Splits `sum_{z in F_p} Psi(z) Psi(f(z))` by `a = 0` / `b = 0` and checks the
/// pieces reassemble the tuple count within `1e-6` relative.
pub fn decomposition_check(ctx: &PrimeContext, f: &IntPolynomial) -> Result<DecompositionReport> {
    let p = ctx.p();
    let m = ctx.modulus();
    let pf = p as f64;
    let phi = ctx.phi_p_minus_1() as f64;
    let trivial = phi / pf;

    let route = if p <= LITERAL_DECOMPOSITION_LIMIT {
        DecompositionRoute::Literal
    } else {
        DecompositionRoute::ClosedForm
    };

    // nontrivial part of the inner sum for a residue r: Psi(r) - phi/p
    let nontrivial: Box<dyn Fn(u64) -> Complex64 + Sync> = match route {
        DecompositionRoute::Literal => {
            let roots = unit_roots(p);
            let s: Vec<Complex64> = (0..p)
                .into_par_iter()
                .map(|r| geometric(r, p, 1, &roots))
                .collect();
            let powers = coprime_powers(ctx);
            Box::new(move |r: u64| {
                powers
                    .iter()
                    .map(|&t| s[m.sub(t, r) as usize])
                    .sum::<Complex64>()
                    / pf
            })
        }
        DecompositionRoute::ClosedForm => {
            let ctx = ctx.clone();
            Box::new(move |r: u64| {
                let psi = if is_primitive_root(r, &ctx) { 1.0 } else { 0.0 };
                Complex64::new(psi - trivial, 0.0)
            })
        }
    };

    let pieces: Vec<[Complex64; 3]> = (0..p)
        .into_par_iter()
        .map(|z| {
            let a1 = nontrivial(z);
            let b1 = nontrivial(f.eval_mod(z, m));
            [a1 * trivial, b1 * trivial, a1 * b1]
        })
        .collect();
    let (mut e1, mut e0, mut e2) = (
        Complex64::default(),
        Complex64::default(),
        Complex64::default(),
    );
    for [a, b, ab] in pieces {
        e1 += a;
        e0 += b;
        e2 += ab;
    }
    let m_term = pf * trivial * trivial;
    let total = m_term + e0.re + e1.re + e2.re;
    let max_imag = e0.im.abs().max(e1.im.abs()).max(e2.im.abs());
    let n = simultaneous_spectrum(p, std::slice::from_ref(f))?.tuple_count() as u64;
    let consistent = (total - n as f64).abs() <= 1e-6 * (n as f64).max(1.0);
    Ok(DecompositionReport {
        p,
        poly: f.clone(),
        route,
        m: m_term,
        e0: e0.re,
        e1: e1.re,
        e2: e2.re,
        total,
        max_imag,
        n,
        consistent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TScan {
    pub p: u64,
    pub max_abs: u64,
    pub argmax_u: u64,
    /// `log_p max_abs`, 0 when the maximum is 0.
    pub exponent: f64,
}

/// `max_u |T(u, p)|` over `u in [1, p-1]`, ties resolved to the smallest `u`.
pub fn max_t_scan(ctx: &PrimeContext) -> Result<TScan> {
    let p = ctx.p();
    let table = IndexTable::new(ctx)?;
    let n = p - 1;
    let (max_abs, argmax_u) = (1..p)
        .into_par_iter()
        .map(|u| {
            let k = table.log(u).expect("nonzero residue");
            let psi = (crate::arith::gcd(k, n) == 1) as u8;
            (t_exact_from_psi(psi, ctx).unsigned_abs(), u)
        })
        .reduce(
            || (0, u64::MAX),
            |a, b| {
                if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
                    a
                } else {
                    b
                }
            },
        );
    Ok(TScan {
        p,
        max_abs,
        argmax_u,
        exponent: exponent(max_abs as i64, p).unwrap_or(0.0),
    })
}
