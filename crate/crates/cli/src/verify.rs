//! The worked-example battery behind `simroots verify-paper`.
//!
//! Four reference spectra are embedded below in the published-table
//! convention: every primitive root `z` of `p` in ascending order, paired
//! with `f(z) mod p` when `f(z)` is itself a primitive root and 0 otherwise.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use simroots::densities::{main_term_mfp, MainTermMode};
use simroots::expsums::decomposition_check;
use simroots::{enumerate_primitive_roots, parse_poly, simultaneous_spectrum, PrimeContext};

use crate::error::CliResult;

#[rustfmt::skip]
const TABLE_97: &[(u64, u64)] = &[
    (5, 26), (7, 0), (10, 0), (13, 0), (14, 0), (15, 0), (17, 0), (21, 0),
    (23, 0), (26, 0), (29, 0), (37, 0), (38, 87), (39, 0), (40, 0), (41, 0),
    (56, 0), (57, 0), (58, 0), (59, 87), (60, 0), (68, 0), (71, 0), (74, 0),
    (76, 0), (80, 0), (82, 0), (83, 0), (84, 0), (87, 0), (90, 0), (92, 26),
];

#[rustfmt::skip]
const TABLE_101: &[(u64, u64)] = &[
    (2, 0), (3, 0), (7, 50), (8, 0), (11, 0), (12, 0), (15, 0), (18, 0),
    (26, 0), (27, 0), (28, 0), (29, 34), (34, 46), (35, 0), (38, 0), (40, 86),
    (42, 48), (46, 0), (48, 83), (50, 0), (51, 0), (53, 83), (55, 0), (59, 48),
    (61, 86), (63, 0), (66, 0), (67, 46), (72, 34), (73, 0), (74, 0), (75, 0),
    (83, 0), (86, 0), (89, 0), (90, 0), (93, 0), (94, 50), (98, 0), (99, 0),
];

#[rustfmt::skip]
const TABLE_127: &[(u64, u64)] = &[
    (3, 0), (6, 0), (7, 0), (12, 0), (14, 0), (23, 0), (29, 0), (39, 0),
    (43, 0), (45, 0), (46, 114), (48, 0), (53, 106), (55, 0), (56, 101), (57, 0),
    (58, 0), (65, 6), (67, 0), (78, 43), (83, 0), (85, 0), (86, 0), (91, 6),
    (92, 0), (93, 0), (96, 0), (97, 0), (101, 0), (106, 0), (109, 0), (110, 97),
    (112, 0), (114, 67), (116, 116), (118, 0),
];

#[rustfmt::skip]
const TABLE_89: &[(u64, u64)] = &[
    (3, 0), (6, 0), (7, 0), (13, 3), (14, 0), (15, 0), (19, 0), (23, 0),
    (24, 0), (26, 31), (27, 41), (28, 43), (29, 43), (30, 0), (31, 61), (33, 54),
    (35, 70), (38, 0), (41, 24), (43, 0), (46, 33), (48, 0), (51, 0), (54, 33),
    (56, 29), (58, 66), (59, 0), (60, 14), (61, 3), (62, 0), (63, 41), (65, 0),
    (66, 0), (70, 0), (74, 33), (75, 19), (76, 0), (82, 0), (83, 0), (86, 0),
];

/// One worked example: a prime, a polynomial and the published values.
#[derive(Debug, Clone, Copy)]
pub struct Example {
    pub label: &'static str,
    pub p: u64,
    pub poly: &'static str,
    pub phi: u64,
    pub tuples: u64,
    /// Published main term as `(numerator, denominator)`.
    pub main_term: (i64, i64),
    pub table: &'static [(u64, u64)],
}

pub const EXAMPLES: [Example; 4] = [
    Example {
        label: "p=97, t^2+1",
        p: 97,
        poly: "t^2+1",
        phi: 32,
        tuples: 4,
        main_term: (24832, 2401),
        table: TABLE_97,
    },
    Example {
        label: "p=101, t^2+1",
        p: 101,
        poly: "t^2+1",
        phi: 40,
        tuples: 12,
        main_term: (404, 25),
        table: TABLE_101,
    },
    Example {
        label: "p=127, (t+2)*(t+1)^2",
        p: 127,
        poly: "(t+2)*(t+1)^2",
        phi: 36,
        tuples: 9,
        main_term: (508, 49),
        table: TABLE_127,
    },
    Example {
        label: "p=89, (t+2)*(t+1)^2",
        p: 89,
        poly: "(t+2)*(t+1)^2",
        phi: 40,
        tuples: 18,
        main_term: (2225, 121),
        table: TABLE_89,
    },
];

/// The published main term for p = 97 disagrees with `phi(96)^2 * 97 / 96^2 = 97/9`.
/// It equals `97 * (16/49)^2`, so the mismatch is reported as a known discrepancy.
pub const KNOWN_DISCREPANCY_P: u64 = 97;

/// Tuple set expected for p = 97.
pub const TUPLES_97: [(u64, u64); 4] = [(5, 26), (38, 87), (59, 87), (92, 26)];

pub const TIME_LIMIT: Duration = Duration::from_secs(1);

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub example: String,
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub p: u64,
    pub published: String,
    pub recomputed: String,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub discrepancies: Vec<Discrepancy>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} [{}] {}", c.example, c.name));
            if c.passed {
                out.push_str(&format!(": {}\n", c.actual));
            } else {
                out.push_str(&format!(
                    "\n    expected: {}\n    actual:   {}\n",
                    c.expected, c.actual
                ));
            }
        }
        for d in &self.discrepancies {
            out.push_str(&format!(
                "NOTE [p={}] main term: published {} vs recomputed {} ({})\n",
                d.p, d.published, d.recomputed, d.note
            ));
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        out
    }
}

struct Recorder<'a> {
    example: &'a str,
    checks: &'a mut Vec<Check>,
}

impl Recorder<'_> {
    fn check<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, expected: T, actual: T) {
        let show = |v: &T| format!("{v:?}").trim_matches('"').to_string();
        self.checks.push(Check {
            example: self.example.to_string(),
            name: name.to_string(),
            passed: expected == actual,
            expected: show(&expected),
            actual: show(&actual),
        });
    }
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn run_example(
    ex: &Example,
    checks: &mut Vec<Check>,
    notes: &mut Vec<Discrepancy>,
) -> CliResult<()> {
    let started = Instant::now();
    let mut rec = Recorder {
        example: ex.label,
        checks,
    };
    let poly = parse_poly(ex.poly)?;
    let ctx = PrimeContext::new(ex.p)?;
    rec.check("phi(p-1)", ex.phi, ctx.phi_p_minus_1());

    let roots = enumerate_primitive_roots(&ctx);
    let table_z: Vec<u64> = ex.table.iter().map(|&(z, _)| z).collect();
    rec.check("primitive roots", table_z, roots);

    let spectrum = simultaneous_spectrum(ex.p, std::slice::from_ref(&poly))?;
    let rows: Vec<(u64, u64)> = spectrum
        .sentinel_rows()
        .into_iter()
        .map(|(z, v)| (z, v[0]))
        .collect();
    rec.check("table rows", ex.table.to_vec(), rows);
    rec.check("tuple count", ex.tuples, spectrum.tuple_count() as u64);
    if ex.p == 97 {
        let set: Vec<(u64, u64)> = spectrum.tuple_rows().map(|r| (r.z, r.values[0])).collect();
        rec.check("tuple set", TUPLES_97.to_vec(), set);
    }

    let decomposition = decomposition_check(&ctx, &poly)?;
    rec.check(
        "decomposition reassembles count",
        true,
        decomposition.consistent,
    );

    let recomputed = main_term_mfp(&ctx, MainTermMode::Asymptotic);
    let published = rational(ex.main_term.0, ex.main_term.1);
    if ex.p == KNOWN_DISCREPANCY_P {
        rec.check(
            "main term (recomputed)",
            rational(97, 9).to_string(),
            recomputed.to_string(),
        );
        notes.push(Discrepancy {
            p: ex.p,
            published: published.to_string(),
            recomputed: recomputed.to_string(),
            note: "expected; the published value equals 97*(16/49)^2".into(),
        });
    } else {
        rec.check("main term", published.to_string(), recomputed.to_string());
    }

    let elapsed = started.elapsed();
    rec.checks.push(Check {
        example: ex.label.to_string(),
        name: "runtime".into(),
        passed: elapsed < TIME_LIMIT,
        expected: format!("< {TIME_LIMIT:?}"),
        actual: format!("{elapsed:?}"),
    });
    Ok(())
}

pub fn verify_paper() -> CliResult<VerifyReport> {
    let mut checks = Vec::new();
    let mut discrepancies = Vec::new();
    for ex in &EXAMPLES {
        run_example(ex, &mut checks, &mut discrepancies)?;
    }
    Ok(VerifyReport {
        checks,
        discrepancies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_have_published_sizes() {
        let sizes: Vec<usize> = EXAMPLES.iter().map(|e| e.table.len()).collect();
        assert_eq!(sizes, [32, 40, 36, 40]);
        for ex in &EXAMPLES {
            assert!(ex.table.windows(2).all(|w| w[0].0 < w[1].0));
            let nonzero = ex.table.iter().filter(|r| r.1 != 0).count() as u64;
            assert_eq!(nonzero, ex.tuples, "{}", ex.label);
        }
    }

    #[test]
    fn battery_passes() {
        let report = verify_paper().unwrap();
        assert!(report.all_passed(), "{}", report.render());
        assert_eq!(report.discrepancies.len(), 1);
        assert_eq!(report.discrepancies[0].recomputed, "97/9");
        assert_eq!(report.discrepancies[0].published, "24832/2401");
    }
}
