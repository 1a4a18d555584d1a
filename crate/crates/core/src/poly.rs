//! Integer polynomials in one variable `t`: parsing, modular evaluation and
//! the perfect-square test used to rule out inadmissible polynomials.
//!
//! Coefficients are `i128` and every ring operation is checked, so expansion
//! either succeeds exactly or reports [`Error::CoefficientOverflow`]. The
//! square-free decomposition runs over the rationals with big-integer
//! coefficients, which keeps intermediate remainders exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Modulus;
use crate::error::{Error, Result};

/// Degree cap applied by the parser to `^` expansions.
pub const MAX_DEGREE: usize = 4096;

/// An integer-coefficient polynomial, coefficients in ascending degree order.
///
/// The zero polynomial has no coefficients; otherwise the leading coefficient
/// is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<i128>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i128) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn identity() -> Self {
        Self::new(vec![0, 1])
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<i128> {
        self.coeffs.last().copied()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out.push(a.checked_add(b).ok_or(Error::CoefficientOverflow)?);
        }
        Ok(Self::new(out))
    }

    pub fn checked_neg(&self) -> Result<Self> {
        let out = self
            .coeffs
            .iter()
            .map(|c| c.checked_neg().ok_or(Error::CoefficientOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(out))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = a.checked_mul(b).ok_or(Error::CoefficientOverflow)?;
                out[i + j] = out[i + j]
                    .checked_add(prod)
                    .ok_or(Error::CoefficientOverflow)?;
            }
        }
        Ok(Self::new(out))
    }

    pub fn checked_pow(&self, exp: u32) -> Result<Self> {
        if let Some(d) = self.degree() {
            if d.saturating_mul(exp as usize) > MAX_DEGREE {
                return Err(Error::CoefficientOverflow);
            }
        }
        let mut result = Self::constant(1);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `f(z) mod p` by Horner's rule, coefficients reduced into `[0, p)` first.
    pub fn eval_mod(&self, z: u64, m: Modulus) -> u64 {
        let z = m.reduce(z);
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| m.add(m.mul(acc, z), m.reduce_signed(c)))
    }

    /// Exact evaluation over the integers, `None` on overflow.
    pub fn eval_exact(&self, z: i128) -> Option<i128> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0i128, |acc, &c| acc.checked_mul(z)?.checked_add(c))
    }

    pub fn derivative(&self) -> Result<Self> {
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c.checked_mul(i as i128).ok_or(Error::CoefficientOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(out))
    }

    /// Gcd of the coefficients carrying the sign of the leading coefficient.
    /// The zero polynomial has content 0.
    pub fn content(&self) -> i128 {
        let g = self.coeffs.iter().fold(0i128, |g, &c| g.gcd(&c));
        match self.leading_coefficient() {
            Some(lc) if lc < 0 => -g,
            _ => g,
        }
    }
}

/// `f(z) mod p` with `p` given as a plain integer.
pub fn eval_mod(f: &IntPolynomial, z: u64, p: u64) -> Result<u64> {
    Ok(f.eval_mod(z, Modulus::new(p)?))
}

pub fn poly_derivative(f: &IntPolynomial) -> Result<IntPolynomial> {
    f.derivative()
}

pub fn poly_content(f: &IntPolynomial) -> i128 {
    f.content()
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let neg = c < 0;
            let mag = c.unsigned_abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_poly(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses and expands a polynomial expression in `t`.
///
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := factor ('*' factor)*
/// factor := '-' factor | base ('^' nonneg_int)?
/// base   := 't' | int_literal | '(' expr ')'
/// ```
///
/// Whitespace is ignored and multiplication must be explicit. Positions in
/// errors are 0-based byte offsets into `text`.
pub fn parse_poly(text: &str) -> Result<IntPolynomial> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error(format!(
            "unexpected character '{}'",
            parser.src[parser.pos] as char
        )));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' {
                acc.checked_add(&rhs)?
            } else {
                acc.checked_sub(&rhs)?
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = acc.checked_mul(&rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IntPolynomial> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return self.factor()?.checked_neg();
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let start = self.pos;
            let exp = match self.peek() {
                Some(c) if c.is_ascii_digit() => self.literal()?,
                _ => return Err(self.error("exponent must be a nonnegative integer literal")),
            };
            let exp = u32::try_from(exp).map_err(|_| Error::Parse {
                position: start,
                message: "exponent too large".into(),
            })?;
            return base.checked_pow(exp);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<IntPolynomial> {
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                Ok(IntPolynomial::identity())
            }
            Some(c) if c.is_ascii_digit() => Ok(IntPolynomial::constant(self.literal()?)),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn literal(&mut self) -> Result<i128> {
        let start = self.pos;
        let mut value: i128 = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as i128))
                .ok_or(Error::CoefficientOverflow)?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected integer literal"));
        }
        Ok(value)
    }
}

// Dense polynomials over Q, used only by the gcd and square-free routines.
type QPoly = Vec<BigRational>;

fn q_from_int(f: &IntPolynomial) -> QPoly {
    f.coeffs
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

fn q_trim(mut f: QPoly) -> QPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

fn q_monic(f: QPoly) -> QPoly {
    match f.last().cloned() {
        Some(lc) => f.into_iter().map(|c| c / &lc).collect(),
        None => f,
    }
}

fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    q_trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    q_trim(out)
}

fn q_derivative(f: &QPoly) -> QPoly {
    q_trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

/// Quotient and remainder; `b` must be nonzero.
fn q_div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut rem = a.clone();
    let db = b.len() - 1;
    let lc = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db && !rem.is_empty() {
        let shift = rem.len() - 1 - db;
        let c = rem.last().unwrap() / &lc;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &c * bc;
        }
        quot[shift] = c;
        rem.pop();
        rem = q_trim(rem);
    }
    (q_trim(quot), rem)
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = q_div_rem(&a, &b);
        a = b;
        b = r;
    }
    q_monic(a)
}

fn q_is_one(f: &QPoly) -> bool {
    f.len() == 1 && f[0].is_one()
}

/// Clears denominators and returns the primitive integer polynomial with
/// positive leading coefficient.
fn q_to_primitive(f: &QPoly) -> Result<IntPolynomial> {
    if f.is_empty() {
        return Ok(IntPolynomial::zero());
    }
    let lcm = f.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = f.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let sign = if ints.last().unwrap().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let coeffs = ints
        .iter()
        .map(|c| (c / &g * &sign).to_i128().ok_or(Error::CoefficientOverflow))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::new(coeffs))
}

/// Gcd over `Q[t]`, returned primitive with positive leading coefficient.
pub fn poly_gcd_rational(f: &IntPolynomial, g: &IntPolynomial) -> Result<IntPolynomial> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    q_to_primitive(&q_gcd(&q_from_int(f), &q_from_int(g)))
}

/// Yun's square-free decomposition of a nonconstant polynomial over `Q`:
/// monic factors `a_1, a_2, ...` with `f = lc(f) * prod a_i^i`.
fn square_free_decomposition(f: &QPoly) -> Vec<QPoly> {
    let df = q_derivative(f);
    let a0 = q_gcd(f, &df);
    let mut b = q_div_rem(f, &a0).0;
    let c = q_div_rem(&df, &a0).0;
    let mut d = q_sub(&c, &q_derivative(&b));
    let mut parts = Vec::new();
    loop {
        let a = q_gcd(&b, &d);
        let b_next = q_div_rem(&b, &a).0;
        let c_next = q_div_rem(&d, &a).0;
        parts.push(a);
        b = b_next;
        if b.len() <= 1 {
            break;
        }
        d = q_sub(&c_next, &q_derivative(&b));
    }
    parts
}

fn integer_sqrt_exact(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let n = n as u128;
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r as i128)
}

/// Whether `f = g^2` for some `g` in `Z[t]`.
///
/// Decided by square-free decomposition: every odd-multiplicity part must be
/// trivial, the leading coefficient must be a perfect square, and the
/// reassembled candidate must square back to `f`.
pub fn is_perfect_square(f: &IntPolynomial) -> Result<bool> {
    let lc = f.leading_coefficient().ok_or(Error::ZeroPolynomial)?;
    let Some(root_lc) = integer_sqrt_exact(lc) else {
        return Ok(false);
    };
    if f.degree() == Some(0) {
        return Ok(true);
    }
    if f.degree().unwrap() % 2 == 1 {
        return Ok(false);
    }
    let parts = square_free_decomposition(&q_from_int(f));
    let mut candidate: QPoly = vec![BigRational::from_integer(BigInt::from(root_lc))];
    for (i, a) in parts.iter().enumerate() {
        let multiplicity = i + 1;
        if multiplicity % 2 == 1 {
            if !q_is_one(a) {
                return Ok(false);
            }
            continue;
        }
        for _ in 0..multiplicity / 2 {
            candidate = q_mul(&candidate, a);
        }
    }
    if candidate.iter().any(|c| !c.is_integer()) {
        return Ok(false);
    }
    let g = candidate
        .iter()
        .map(|c| c.to_integer().to_i128().ok_or(Error::CoefficientOverflow))
        .collect::<Result<Vec<_>>>()?;
    let g = IntPolynomial::new(g);
    Ok(g.checked_mul(&g).is_ok_and(|sq| &sq == f))
}

/// `false` iff `z` is `1`, `-1` or a perfect square (including `0`).
pub fn is_admissible_base(z: i128) -> bool {
    !(z == 1 || z == -1 || integer_sqrt_exact(z).is_some())
}
