//! Simultaneous primitive roots modulo primes.
//!
//! For a prime `p` and an integer polynomial `f`, this crate counts the
//! residues `z` for which `z` and `f(z)` are both primitive roots mod `p`,
//! and for a fixed integer `z` it counts the primes with the same property.
//! Around those two counts sit the supporting pieces: exact modular
//! arithmetic, an exponential-sum characteristic function of primitive
//! roots, the density constants the counts are compared against, and the
//! character-sum decomposition of the per-prime count.

pub mod arith;
pub mod counting;
pub mod densities;
pub mod error;
pub mod expsums;
pub mod poly;
pub mod roots;

pub use arith::{
    divisor_count, divisor_sum, euler_phi, factorize, is_prime, mul_mod, pow_mod, primes_in_range,
    FactoredInteger, Modulus,
};
pub use counting::{
    count_pi_f, simultaneous_spectrum, symmetry_statistic, ArithmeticFunction, SweepSeries,
    TupleSpectrum,
};
pub use error::{Error, Result};
pub use poly::{parse_poly, IntPolynomial};
pub use roots::{
    discrete_log, enumerate_primitive_roots, is_primitive_root, least_primitive_root,
    multiplicative_order, psi_exact, psi_literal, PrimeContext,
};
