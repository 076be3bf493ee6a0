//! The clustering input: an `n × m` feature matrix with optional class labels.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Immutable `n × m` matrix of finite features, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n: usize,
    m: usize,
    labels: Option<Vec<String>>,
    attribute_names: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from rows. Every row must have the same non-zero
    /// length and every value must be finite.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::invalid("dataset needs at least one object"));
        }
        let m = rows[0].as_ref().len();
        if m == 0 {
            return Err(Error::invalid("dataset needs at least one attribute"));
        }
        let mut features = Vec::with_capacity(n * m);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::invalid(format!(
                    "row {i} has {} values, expected {m}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("non-finite value at row {i}, column {j}")));
            }
            features.extend_from_slice(row);
        }
        Ok(Self {
            features,
            n,
            m,
            labels: None,
            attribute_names: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::invalid(format!(
                "{} labels for {} objects",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_attribute_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.m {
            return Err(Error::invalid(format!(
                "{} attribute names for {} attributes",
                names.len(),
                self.m
            )));
        }
        self.attribute_names = Some(names);
        Ok(self)
    }

    /// Number of objects.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of attributes.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.m)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn attribute_names(&self) -> Option<&[String]> {
        self.attribute_names.as_deref()
    }

    /// Number of distinct class labels, if labels are present.
    pub fn distinct_labels(&self) -> Option<usize> {
        self.labels.as_ref().map(|l| l.iter().collect::<BTreeSet<_>>().len())
    }

    /// Column-wise arithmetic mean.
    pub fn mean(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.m];
        for row in self.rows() {
            for (s, v) in sum.iter_mut().zip(row) {
                *s += v;
            }
        }
        let n = self.n as f64;
        sum.iter().map(|s| s / n).collect()
    }

    /// Writes the dataset as CSV with a header line. Labels, when present,
    /// go in a trailing `label` column.
    pub fn write_csv<W: Write>(&self, out: W, delimiter: u8) -> Result<()> {
        let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(out);
        let mut header: Vec<String> = match &self.attribute_names {
            Some(names) => names.clone(),
            None => (0..self.m).map(|j| format!("x{j}")).collect(),
        };
        if self.labels.is_some() {
            header.push("label".to_string());
        }
        w.write_record(&header).map_err(csv_write_err)?;
        for (i, row) in self.rows().enumerate() {
            let mut record: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            if let Some(labels) = &self.labels {
                record.push(labels[i].clone());
            }
            w.write_record(&record).map_err(csv_write_err)?;
        }
        w.flush().map_err(|e| Error::io("writing csv", e))?;
        Ok(())
    }
}

fn csv_write_err(e: csv::Error) -> Error {
    Error::io("writing csv", std::io::Error::other(e))
}

/// Name of the last column if its first value is not a number, the usual
/// layout of labelled benchmark files. `None` when the file has no data rows
/// or the last column is numeric.
pub fn detect_label_column(path: impl AsRef<Path>, delimiter: u8) -> Result<Option<String>> {
    let path = path.as_ref();
    let ingest = |message: String| Error::Ingestion {
        path: path.to_path_buf(),
        message,
    };
    let file = std::fs::File::open(path).map_err(|e| ingest(format!("cannot open file: {e}")))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = reader
        .headers()
        .map_err(|e| ingest(format!("cannot read header: {e}")))?
        .clone();
    let Some(first) = reader.records().next() else {
        return Ok(None);
    };
    let first = first.map_err(|e| ingest(format!("row 2: {e}")))?;
    let (Some(name), Some(value)) = (header.iter().next_back(), first.iter().next_back()) else {
        return Ok(None);
    };
    Ok(value.parse::<f64>().is_err().then(|| name.to_string()))
}

/// Reads a headered CSV file. Every column except `label_column` must parse
/// as a finite real number.
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&str>, delimiter: u8) -> Result<Dataset> {
    let path = path.as_ref();
    let ingest = |message: String| Error::Ingestion {
        path: path.to_path_buf(),
        message,
    };

    let file = std::fs::File::open(path).map_err(|e| ingest(format!("cannot open file: {e}")))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let header: Vec<String> = reader
        .headers()
        .map_err(|e| ingest(format!("cannot read header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();

    let label_idx = match label_column {
        Some(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| ingest(format!("label column `{name}` not found in header")))?,
        ),
        None => None,
    };
    let attribute_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(j, _)| Some(*j) != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    if attribute_names.is_empty() {
        return Err(ingest("no feature columns".to_string()));
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        // Line 1 is the header.
        let line = idx + 2;
        let record = record.map_err(|e| ingest(format!("row {line}: {e}")))?;
        if record.len() != header.len() {
            return Err(ingest(format!(
                "row {line}: expected {} fields, found {}",
                header.len(),
                record.len()
            )));
        }
        let mut row = Vec::with_capacity(attribute_names.len());
        for (j, cell) in record.iter().enumerate() {
            if Some(j) == label_idx {
                labels.push(cell.to_string());
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| {
                ingest(format!(
                    "row {line}, column {} (`{}`): cannot parse `{cell}` as a number",
                    j + 1,
                    header[j]
                ))
            })?;
            if !value.is_finite() {
                return Err(ingest(format!(
                    "row {line}, column {} (`{}`): non-finite value `{cell}`",
                    j + 1,
                    header[j]
                )));
            }
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ingest("no data rows".to_string()));
    }

    let mut ds = Dataset::from_rows(&rows)
        .map_err(|e| ingest(e.to_string()))?
        .with_attribute_names(attribute_names)?;
    if label_idx.is_some() {
        ds = ds.with_labels(labels)?;
    }
    Ok(ds)
}

/// Rescales every attribute to `[0, 1]`; constant attributes map to 0.
pub fn normalize_min_max(d: &Dataset) -> Dataset {
    let m = d.m;
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for row in d.rows() {
        for j in 0..m {
            lo[j] = lo[j].min(row[j]);
            hi[j] = hi[j].max(row[j]);
        }
    }
    let features = d
        .features
        .chunks_exact(m)
        .flat_map(|row| {
            row.iter().enumerate().map(|(j, &v)| {
                let span = hi[j] - lo[j];
                if span > 0.0 {
                    (v - lo[j]) / span
                } else {
                    0.0
                }
            })
        })
        .collect();
    Dataset { features, ..d.clone() }
}
