//! Dataset artifacts: `train.csv` and `test.csv` with header
//! `class,<features...>,target_statement,target_branch,target_mean,target_coverageability`
//! plus a `provenance.json` sidecar.

use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{CoreError, Result};
use crate::labeling::TargetVector;

use super::{Dataset, Provenance, Rows, TARGET_COLUMNS};

pub const TRAIN_FILE: &str = "train.csv";
pub const TEST_FILE: &str = "test.csv";
pub const PROVENANCE_FILE: &str = "provenance.json";

pub fn write_rows<W: Write>(names: &[String], rows: &Rows, out: W) -> Result<()> {
    let mut w = crate::csv_writer(out);
    let header = std::iter::once("class")
        .chain(names.iter().map(String::as_str))
        .chain(TARGET_COLUMNS);
    w.write_record(header).map_err(csv_err)?;
    for (i, class) in rows.classes.iter().enumerate() {
        let mut rec = Vec::with_capacity(names.len() + 5);
        rec.push(class.clone());
        rec.extend(rows.x.row(i).iter().map(|v| v.to_string()));
        rec.extend(rows.y[i].as_array().iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CoreError::Format(e.to_string()))?;
    Ok(())
}

/// Reads a rows file; returns feature names and rows.
pub fn read_rows<R: Read>(input: R, source: &str) -> Result<(Vec<String>, Rows)> {
    let err = |line: usize, message: String| CoreError::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| err(1, e.to_string()))?.clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 5 || cols[0] != "class" || cols[cols.len() - 4..] != TARGET_COLUMNS {
        return Err(err(1, "unexpected dataset header".into()));
    }
    let names: Vec<String> = cols[1..cols.len() - 4].iter().map(|s| s.to_string()).collect();
    let mut classes = Vec::new();
    let mut data = Vec::new();
    let mut y = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| err(line, e.to_string()))?;
        if rec.len() != cols.len() {
            return Err(err(line, format!("expected {} fields, found {}", cols.len(), rec.len())));
        }
        let nums = rec
            .iter()
            .skip(1)
            .map(|f| f.parse::<f64>().map_err(|_| err(line, format!("`{f}` is not a number"))))
            .collect::<Result<Vec<f64>>>()?;
        classes.push(rec[0].to_string());
        data.extend_from_slice(&nums[..names.len()]);
        let t = &nums[names.len()..];
        y.push(TargetVector::from_array([t[0], t[1], t[2], t[3]]));
    }
    let x = Array2::from_shape_vec((classes.len(), names.len()), data).expect("row widths checked");
    Ok((names, Rows { classes, x, y }))
}

/// Serialises `(train.csv, test.csv, provenance.json)` contents.
pub fn render_dataset(d: &Dataset) -> Result<[Vec<u8>; 3]> {
    let mut train = Vec::new();
    write_rows(&d.names, &d.train, &mut train)?;
    let mut test = Vec::new();
    write_rows(&d.names, &d.test, &mut test)?;
    let mut prov = serde_json::to_vec_pretty(&d.provenance).map_err(|e| CoreError::Format(e.to_string()))?;
    prov.push(b'\n');
    Ok([train, test, prov])
}

pub fn read_dataset(dir: &Path) -> Result<Dataset> {
    let open = |name: &str| {
        let p = dir.join(name);
        std::fs::File::open(&p).map_err(|e| CoreError::io(p, e))
    };
    let (names, train) = read_rows(open(TRAIN_FILE)?, TRAIN_FILE)?;
    let (test_names, test) = read_rows(open(TEST_FILE)?, TEST_FILE)?;
    let provenance: Provenance =
        serde_json::from_reader(open(PROVENANCE_FILE)?).map_err(|e| CoreError::Format(format!("{PROVENANCE_FILE}: {e}")))?;
    if test_names != names || provenance.mask != names || provenance.scaler.width() != names.len() {
        return Err(CoreError::SchemaMismatch("dataset files disagree on feature columns".into()));
    }
    Ok(Dataset {
        variant: provenance.settings.variant,
        names,
        train,
        test,
        provenance,
    })
}

fn csv_err(e: csv::Error) -> CoreError {
    CoreError::Format(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::super::{prepare, tests::synthetic_rows, FilterLog, PipelineSettings, Variant};
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let d = prepare(synthetic_rows(40, 5), FilterLog::default(), &PipelineSettings::new(Variant::DS2, 3)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        for (name, bytes) in [TRAIN_FILE, TEST_FILE, PROVENANCE_FILE].iter().zip(render_dataset(&d).unwrap()) {
            std::fs::write(dir.path().join(name), bytes).unwrap();
        }
        let back = read_dataset(dir.path()).unwrap();
        assert_eq!(back, d);
        let header = std::fs::read_to_string(dir.path().join(TRAIN_FILE)).unwrap();
        let first = header.lines().next().unwrap();
        assert!(first.starts_with("class,"));
        assert!(first.ends_with(",target_statement,target_branch,target_mean,target_coverageability"));
        assert_eq!(first.split(',').count(), 1 + 15 + 4);
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "class,A,target_statement,target_branch,target_mean,target_coverageability\np.X,1,1,1,1,1\np.Y,q,1,1,1,1\n";
        match read_rows(text.as_bytes(), "t.csv") {
            Err(CoreError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
