//! CSV, JSON and plot-data encodings of a [`TupleSpectrum`].
//!
//! Full CSV: header `z,f1[,f2,...],is_tuple` with the true values.
//! Published-table CSV: header `z,f(z)` with 0 in place of every value of a
//! non-tuple row. The plot file holds the same coordinates, whitespace
//! separated, one point per line.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use simroots::counting::{SpectrumRow, TupleSpectrum};
use simroots::IntPolynomial;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableStyle {
    Full,
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn value_headers(k: usize, style: TableStyle) -> Vec<String> {
    match (style, k) {
        (TableStyle::Paper, 1) => vec!["f(z)".to_string()],
        (TableStyle::Paper, _) => (1..=k).map(|i| format!("f{i}(z)")).collect(),
        (TableStyle::Full, _) => (1..=k).map(|i| format!("f{i}")).collect(),
    }
}

pub fn write_csv<W: Write>(spec: &TupleSpectrum, style: TableStyle, out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let k = spec.polys().len();
    let mut header = vec!["z".to_string()];
    header.extend(value_headers(k, style));
    if style == TableStyle::Full {
        header.push("is_tuple".to_string());
    }
    w.write_record(&header)?;
    match style {
        TableStyle::Full => {
            for r in spec.rows() {
                let mut rec = vec![r.z.to_string()];
                rec.extend(r.values.iter().map(u64::to_string));
                rec.push(r.is_tuple.to_string());
                w.write_record(&rec)?;
            }
        }
        TableStyle::Paper => {
            for (z, vals) in spec.sentinel_rows() {
                let mut rec = vec![z.to_string()];
                rec.extend(vals.iter().map(u64::to_string));
                w.write_record(&rec)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a full-style CSV back into a spectrum, validating it against `p` and `polys`.
pub fn read_csv<R: Read>(input: R, p: u64, polys: Vec<IntPolynomial>) -> CliResult<TupleSpectrum> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let k = polys.len();
    if header.len() != k + 2 || &header[0] != "z" || &header[k + 1] != "is_tuple" {
        return Err(CliError::Failure(format!(
            "expected header z,f1..f{k},is_tuple; got {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let bad = |what: &str| CliError::Failure(format!("malformed spectrum row: {what}"));
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let z = rec[0].parse().map_err(|_| bad(&rec[0]))?;
        let values = (1..=k)
            .map(|i| rec[i].parse::<u64>().map_err(|_| bad(&rec[i])))
            .collect::<CliResult<Vec<_>>>()?;
        let is_tuple = rec[k + 1].parse().map_err(|_| bad(&rec[k + 1]))?;
        rows.push(SpectrumRow {
            z,
            values,
            is_tuple,
        });
    }
    Ok(TupleSpectrum::from_rows(p, polys, rows)?)
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    p: u64,
    polys: Vec<IntPolynomial>,
    tuple_count: usize,
    rows: Vec<SpectrumRow>,
}

pub fn write_json<W: Write>(spec: &TupleSpectrum, out: W) -> CliResult<()> {
    let doc = SpectrumJson {
        p: spec.p(),
        polys: spec.polys().to_vec(),
        tuple_count: spec.tuple_count(),
        rows: spec.rows().to_vec(),
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> CliResult<TupleSpectrum> {
    let doc: SpectrumJson = serde_json::from_reader(input)?;
    let spec = TupleSpectrum::from_rows(doc.p, doc.polys, doc.rows)?;
    if spec.tuple_count() != doc.tuple_count {
        return Err(CliError::Failure("tuple_count does not match rows".into()));
    }
    Ok(spec)
}

/// Two-column (or `k + 1` column) point list `z f(z)-or-0`.
pub fn plot_data(spec: &TupleSpectrum) -> String {
    let mut out = String::from("# z f(z); 0 marks a row that is not a simultaneous tuple\n");
    for (z, vals) in spec.sentinel_rows() {
        out.push_str(&z.to_string());
        for v in vals {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}
