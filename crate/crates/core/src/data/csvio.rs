//! Dataset CSV files: header `f0,...,f{k-1},label`, one example per row.

use std::io::{Read, Write};
use std::path::Path;

use super::{pad_and_normalize, Dataset, DomainPoint};
use crate::error::{Error, Result};

/// How rows are turned into domain points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ingest {
    /// Rows are raw features; pad to the given dimension (raw + 2 when `None`).
    Pad(Option<usize>),
    /// Rows already lie in the domain and are validated as-is.
    AsDomain,
}

pub fn read_rows<R: Read>(reader: R) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let label_col = headers
        .iter()
        .position(|h| h == "label")
        .ok_or_else(|| Error::Malformed("missing `label` column".into()))?;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let mut feats = Vec::with_capacity(record.len().saturating_sub(1));
        for (i, field) in record.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Malformed(format!("row {}: bad number `{field}`", line + 1)))?;
            if i == label_col {
                labels.push(v);
            } else {
                feats.push(v);
            }
        }
        rows.push(feats);
    }
    Ok((rows, labels))
}

pub fn read_dataset<R: Read>(reader: R, ingest: Ingest) -> Result<Dataset> {
    let (rows, labels) = read_rows(reader)?;
    if rows.is_empty() {
        return Err(Error::Empty("dataset file has no rows"));
    }
    let points = match ingest {
        Ingest::Pad(d_out) => {
            let d_out = d_out.unwrap_or(rows[0].len() + 2);
            pad_and_normalize(&rows, d_out)?
        }
        Ingest::AsDomain => rows
            .into_iter()
            .map(DomainPoint::new)
            .collect::<Result<Vec<_>>>()?,
    };
    Dataset::new(points, labels)
}

pub fn load_dataset(path: &Path, ingest: Ingest) -> Result<Dataset> {
    read_dataset(std::fs::File::open(path)?, ingest)
}

pub fn write_dataset<W: Write>(ds: &Dataset, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..ds.d()).map(|i| format!("f{i}")).collect();
    header.push("label".into());
    wtr.write_record(&header)?;
    for (p, y) in ds.points().iter().zip(ds.labels()) {
        let mut rec: Vec<String> = p.coords().iter().map(|v| format!("{v:?}")).collect();
        rec.push(format!("{y:?}"));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}
