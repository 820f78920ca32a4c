//! CSV input and output. Floats are written with 17 significant digits.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use zakdd::Complex64;

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> Table<W> {
    pub fn new(out: W, header: &[&str]) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(header)?;
        Ok(Self { inner })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Writes `index,re,im` rows.
pub fn write_samples(out: impl Write, values: &[Complex64]) -> Result<()> {
    let mut t = Table::new(out, &["index", "re", "im"])?;
    for (i, v) in values.iter().enumerate() {
        t.row(&[i.to_string(), float(v.re), float(v.im)])?;
    }
    t.finish()
}

/// Writes `k,l,re,im` rows for a row-major `M x N` grid.
pub fn write_grid(out: impl Write, n: usize, values: &[Complex64]) -> Result<()> {
    let mut t = Table::new(out, &["k", "l", "re", "im"])?;
    for (i, v) in values.iter().enumerate() {
        t.row(&[
            (i / n).to_string(),
            (i % n).to_string(),
            float(v.re),
            float(v.im),
        ])?;
    }
    t.finish()
}

fn records(input: impl Read, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let got: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if got != header {
        bail!(
            "expected CSV header {:?}, got {:?}",
            header.join(","),
            got.join(",")
        );
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .zip(header)
            .map(|(field, name)| {
                field.parse::<f64>().with_context(|| {
                    format!("row {}: column {name}: {field:?} is not a number", line + 1)
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Reads `index,re,im` rows; indices must run 0, 1, 2, ...
pub fn read_samples(input: impl Read) -> Result<Vec<Complex64>> {
    records(input, &["index", "re", "im"])?
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            if r[0] != i as f64 {
                bail!("row {}: index {} out of order", i + 1, r[0]);
            }
            Ok(Complex64::new(r[1], r[2]))
        })
        .collect()
}

/// Reads `k,l,re,im` rows in row-major order for an `M x N` grid.
pub fn read_grid(input: impl Read, n: usize) -> Result<Vec<Complex64>> {
    records(input, &["k", "l", "re", "im"])?
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            if r[0] != (i / n) as f64 || r[1] != (i % n) as f64 {
                bail!(
                    "row {}: cell ({}, {}) out of row-major order",
                    i + 1,
                    r[0],
                    r[1]
                );
            }
            Ok(Complex64::new(r[2], r[3]))
        })
        .collect()
}
