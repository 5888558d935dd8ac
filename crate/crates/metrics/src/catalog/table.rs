//! Delimited metrics table: a `# schema:` comment line, a `class,<names>`
//! header, then one row per class.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! table read back reproduces the extracted values exactly.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::MetricsError;

use super::schema::{MetricSchema, SCHEMA_VERSION};
use super::vector::FeatureVector;

const SCHEMA_PREFIX: &str = "# schema: ";

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsTable {
    pub schema_version: String,
    pub names: Vec<String>,
    pub rows: Vec<FeatureVector>,
}

impl MetricsTable {
    /// Table over the full schema.
    pub fn from_vectors(rows: Vec<FeatureVector>) -> Self {
        MetricsTable {
            schema_version: SCHEMA_VERSION.to_string(),
            names: MetricSchema::full().names().map(str::to_string).collect(),
            rows,
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<(), MetricsError> {
        writeln!(out, "{SCHEMA_PREFIX}{}", self.schema_version)?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
        let header = std::iter::once("class").chain(self.names.iter().map(String::as_str));
        w.write_record(header).map_err(csv_error)?;
        for row in &self.rows {
            let mut record = Vec::with_capacity(row.values.len() + 1);
            record.push(row.class.clone());
            record.extend(row.values.iter().map(|v| v.to_string()));
            w.write_record(&record).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self, MetricsError> {
        let mut input = BufReader::new(input);
        let mut first = String::new();
        input.read_line(&mut first)?;
        let schema_version = first
            .trim_end()
            .strip_prefix(SCHEMA_PREFIX)
            .ok_or_else(|| MetricsError::Table("missing `# schema:` line".into()))?
            .to_string();
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header = r.headers().map_err(csv_error)?.clone();
        if header.get(0) != Some("class") {
            return Err(MetricsError::Table("first column must be `class`".into()));
        }
        let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, record) in r.records().enumerate() {
            // comment line and header precede the first row
            let line = i + 3;
            let record = record.map_err(|e| MetricsError::TableRow { line, message: e.to_string() })?;
            if record.len() != names.len() + 1 {
                return Err(MetricsError::TableRow {
                    line,
                    message: format!("expected {} fields, found {}", names.len() + 1, record.len()),
                });
            }
            let values = record
                .iter()
                .skip(1)
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|_| MetricsError::TableRow {
                        line,
                        message: format!("`{f}` is not a number"),
                    })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            rows.push(FeatureVector {
                class: record[0].to_string(),
                values,
            });
        }
        Ok(MetricsTable {
            schema_version,
            names,
            rows,
        })
    }
}

fn csv_error(e: csv::Error) -> MetricsError {
    MetricsError::Table(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let values: Vec<f64> = (0..296).map(|i| (i as f64).ln_1p() / 3.0).collect();
        let t = MetricsTable::from_vectors(vec![FeatureVector {
            class: "p.A".into(),
            values,
        }]);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# schema: coverageability-schema/1\nclass,PKLOC,"));
        assert_eq!(MetricsTable::read_from(buf.as_slice()).unwrap(), t);
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "# schema: x\nclass,A,B\np.A,1,2\np.B,1,zz\n";
        match MetricsTable::read_from(text.as_bytes()) {
            Err(MetricsError::TableRow { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }
}
