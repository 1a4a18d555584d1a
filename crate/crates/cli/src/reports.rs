//! JSON reports for `stats`, `density` and `expsum`.

use serde::Serialize;
use simroots::counting::{prime_primitive_root_count, restricted_average_order, value_set_count};
use simroots::densities::{
    artin_product, empirical_ak_series, ArtinProduct, ConvergenceDiagnostic, DensityReport,
};
use simroots::expsums::{
    decomposition_check, exp_sum, max_t_scan, DecompositionReport, ExpSumResult, TScan,
};
use simroots::{
    primes_in_range, simultaneous_spectrum, symmetry_statistic, ArithmeticFunction, IntPolynomial,
    PrimeContext,
};

use crate::error::{CliError, CliResult};

pub const DEFAULT_ARTIN_BOUND: u64 = 10_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct FunctionStats {
    pub function: &'static str,
    /// Sum over all primitive roots.
    pub complete_sum: String,
    /// Sum over primitive roots up to `--limit`, when given.
    pub incomplete_sum: Option<String>,
    pub value_set_count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub poly: IntPolynomial,
    pub mirrored: u64,
    pub total: u64,
    pub empty: bool,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub p: u64,
    pub prime_primitive_roots: u64,
    pub pi_p: u64,
    pub prime_primitive_root_ratio: f64,
    pub functions: Vec<FunctionStats>,
    pub symmetry: Option<SymmetryReport>,
}

pub fn stats(p: u64, poly: Option<&IntPolynomial>, limit: Option<u64>) -> CliResult<StatsReport> {
    let ctx = PrimeContext::new(p)?;
    let u = prime_primitive_root_count(&ctx);
    let pi_p = primes_in_range(2, p)?.count() as u64;
    let functions = ArithmeticFunction::ALL
        .iter()
        .map(|&func| {
            Ok(FunctionStats {
                function: func.symbol(),
                complete_sum: restricted_average_order(&ctx, func, None)?.to_string(),
                incomplete_sum: limit
                    .map(|x| restricted_average_order(&ctx, func, Some(x)).map(|s| s.to_string()))
                    .transpose()?,
                value_set_count: value_set_count(&ctx, func)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let symmetry = poly
        .map(|f| -> CliResult<SymmetryReport> {
            let spec = simultaneous_spectrum(p, std::slice::from_ref(f))?;
            let s = symmetry_statistic(&spec);
            Ok(SymmetryReport {
                poly: f.clone(),
                mirrored: s.mirrored,
                total: s.total,
                empty: s.empty,
                value: s.value(),
            })
        })
        .transpose()?;
    Ok(StatsReport {
        p,
        prime_primitive_roots: u,
        pi_p,
        prime_primitive_root_ratio: u as f64 / pi_p as f64,
        functions,
        symmetry,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityOutput {
    #[serde(flatten)]
    pub report: DensityReport,
    pub artin: Option<ArtinOutput>,
    /// The same estimate at `x/100`, `x/10`, `x` (cutoffs below 2 dropped).
    pub series: ConvergenceDiagnostic,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtinOutput {
    #[serde(flatten)]
    pub product: ArtinProduct,
    pub ratio_pi_minus_product: f64,
    /// Least-squares `b` in `|sum - a_1 li(x)| ~ C x / (ln x)^b` over the
    /// series cutoffs; absent with fewer than two usable points.
    pub fitted_b: Option<f64>,
}

fn fit_log_power(reports: &[DensityReport], a1: f64) -> Option<f64> {
    // ln(err / x) = ln C - b ln ln x
    let pts: Vec<(f64, f64)> = reports
        .iter()
        .filter_map(|r| {
            let x = r.x as f64;
            let err = (r.sum.to_f64() - a1 * r.li_x).abs();
            (err > 0.0 && x > std::f64::consts::E).then(|| (x.ln().ln(), (err / x).ln()))
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let sxy: f64 = pts.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| -sxy / sxx)
}

pub fn density(x: u64, k: u32, artin_bound: u64) -> CliResult<DensityOutput> {
    if x < 2 {
        return Err(CliError::Failure("--x must be at least 2".into()));
    }
    let mut xs: Vec<u64> = [x / 100, x / 10, x]
        .into_iter()
        .filter(|&c| c >= 2)
        .collect();
    xs.dedup();
    let reports = empirical_ak_series(&xs, k)?;
    let report = *reports.last().expect("x itself is a cutoff");
    let series = ConvergenceDiagnostic::new(reports.iter().map(|r| (r.x, r.ratio_pi)).collect());
    let artin = if k == 1 {
        let product = artin_product(artin_bound)?;
        Some(ArtinOutput {
            ratio_pi_minus_product: report.ratio_pi - product.value,
            fitted_b: fit_log_power(&reports, product.value),
            product,
        })
    } else {
        None
    };
    Ok(DensityOutput {
        report,
        artin,
        series,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ExpSumOutput {
    Single(ExpSumResult),
    Scan(TScan),
    Decomposition(DecompositionReport),
}

#[derive(Debug, Clone)]
pub enum ExpSumRequest {
    Single(u64),
    Scan,
    Decompose(IntPolynomial),
}

pub fn expsum(p: u64, request: &ExpSumRequest) -> CliResult<ExpSumOutput> {
    let ctx = PrimeContext::new(p)?;
    Ok(match request {
        ExpSumRequest::Single(u) => ExpSumOutput::Single(exp_sum(*u, &ctx)?),
        ExpSumRequest::Scan => ExpSumOutput::Scan(max_t_scan(&ctx)?),
        ExpSumRequest::Decompose(f) => ExpSumOutput::Decomposition(decomposition_check(&ctx, f)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use simroots::parse_poly;

    #[test]
    fn stats_examples() {
        let s = stats(7, None, None).unwrap();
        assert_eq!(s.prime_primitive_roots, 2);
        assert_eq!(s.functions[0].complete_sum, "4");
        assert_eq!(stats(3, None, None).unwrap().prime_primitive_roots, 1);
        let s = stats(97, Some(&parse_poly("t^2+1").unwrap()), Some(50)).unwrap();
        assert_eq!(s.prime_primitive_roots, 11);
        let sums: Vec<&str> = s
            .functions
            .iter()
            .map(|f| f.complete_sum.as_str())
            .collect();
        assert_eq!(sums, ["150", "2638", "902"]);
        let v: Vec<u64> = s.functions.iter().map(|f| f.value_set_count).collect();
        assert_eq!(v, [1, 17, 5]);
        assert_eq!(s.symmetry.unwrap().value, 1.0);
    }

    #[test]
    fn density_k0_is_one() {
        let d = density(100, 0, 10).unwrap();
        assert_eq!(d.report.ratio_pi, 1.0);
        assert!(d.artin.is_none());
        assert_eq!(d.series.points.len(), 2);
    }

    #[test]
    fn density_k1_carries_artin_diagnostics() {
        let d = density(100_000, 1, 100_000).unwrap();
        let a = d.artin.unwrap();
        assert_eq!(a.product.tail_bound, 1e-5);
        assert!(a.fitted_b.is_some_and(f64::is_finite));
        assert!(a.ratio_pi_minus_product.abs() < 0.01);
    }

    #[test]
    fn expsum_examples() {
        let ExpSumOutput::Single(r) = expsum(7, &ExpSumRequest::Single(3)).unwrap() else {
            panic!()
        };
        assert_eq!(r.exact_value, 5);
        let ExpSumOutput::Scan(s) = expsum(97, &ExpSumRequest::Scan).unwrap() else {
            panic!()
        };
        assert_eq!((s.max_abs, s.argmax_u), (65, 5));
        let f = parse_poly("t^2+1").unwrap();
        let ExpSumOutput::Decomposition(d) = expsum(97, &ExpSumRequest::Decompose(f)).unwrap()
        else {
            panic!()
        };
        assert!((d.total - 4.0).abs() < 1e-6);
    }
}
