//! Paired input/output observations and their CSV representation.
//!
//! CSV dialect: comma separated, mandatory header row, `.` as decimal point,
//! no thousands separators, scientific notation accepted. Values are written
//! with Rust's shortest round-trip formatting so a write/read cycle is
//! bit-exact.

use std::io::{Read, Write};

use ndarray::{Array2, ArrayView1, ArrayView2};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("dataset needs at least one sample")]
    Empty,
    #[error("dataset needs at least one input column")]
    NoInputs,
    #[error("{inputs} input rows but {outputs} output values")]
    LengthMismatch { inputs: usize, outputs: usize },
    #[error("expected {expected} column names (inputs then output), got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("non-finite value {value} at sample {row}, column '{column}'")]
    NonFinite {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("CSV line {line}, column '{column}': cannot parse '{text}' as a number")]
    Parse {
        line: u64,
        column: String,
        text: String,
    },
    #[error("CSV line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("CSV header has no column named '{0}'")]
    MissingColumn(String),
    #[error("column '{0}' is listed more than once")]
    DuplicateColumn(String),
    #[error("CSV input is missing its header row")]
    MissingHeader,
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// `N` observations of `n` inputs and one scalar output.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    inputs: Array2<f64>,
    output: Vec<f64>,
    column_names: Vec<String>,
}

impl Dataset {
    /// `column_names` lists the `n` input names followed by the output name.
    pub fn new(
        inputs: Array2<f64>,
        output: Vec<f64>,
        column_names: Vec<String>,
    ) -> Result<Self, DatasetError> {
        let (rows, cols) = inputs.dim();
        if rows == 0 {
            return Err(DatasetError::Empty);
        }
        if cols == 0 {
            return Err(DatasetError::NoInputs);
        }
        if rows != output.len() {
            return Err(DatasetError::LengthMismatch {
                inputs: rows,
                outputs: output.len(),
            });
        }
        if column_names.len() != cols + 1 {
            return Err(DatasetError::NameCount {
                expected: cols + 1,
                got: column_names.len(),
            });
        }
        for ((row, col), &value) in inputs.indexed_iter() {
            if !value.is_finite() {
                return Err(DatasetError::NonFinite {
                    row,
                    column: column_names[col].clone(),
                    value,
                });
            }
        }
        if let Some((row, &value)) = output.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(DatasetError::NonFinite {
                row,
                column: column_names[cols].clone(),
                value,
            });
        }
        Ok(Dataset {
            inputs,
            output,
            column_names,
        })
    }

    /// Convenience constructor naming inputs `X1..Xn` and the output `Y`.
    pub fn with_default_names(inputs: Array2<f64>, output: Vec<f64>) -> Result<Self, DatasetError> {
        let mut names: Vec<String> = (1..=inputs.ncols()).map(|i| format!("X{i}")).collect();
        names.push("Y".to_string());
        Dataset::new(inputs, output, names)
    }

    pub fn n_samples(&self) -> usize {
        self.output.len()
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.ncols()
    }

    pub fn inputs(&self) -> ArrayView2<'_, f64> {
        self.inputs.view()
    }

    pub fn input_column(&self, col: usize) -> ArrayView1<'_, f64> {
        self.inputs.column(col)
    }

    pub fn output(&self) -> &[f64] {
        &self.output
    }

    pub fn input_names(&self) -> &[String] {
        &self.column_names[..self.n_inputs()]
    }

    pub fn output_name(&self) -> &str {
        &self.column_names[self.n_inputs()]
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    /// Same inputs with a different output vector.
    pub fn with_output(&self, output: Vec<f64>) -> Result<Self, DatasetError> {
        Dataset::new(self.inputs.clone(), output, self.column_names.clone())
    }

    /// Rows picked by index (with repetition), inputs and output together.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        let inputs = self.inputs.select(ndarray::Axis(0), rows);
        let output = rows.iter().map(|&r| self.output[r]).collect();
        Dataset {
            inputs,
            output,
            column_names: self.column_names.clone(),
        }
    }

    /// Applies `f` to input column `col`, keeping everything else.
    pub fn map_input_column(
        &self,
        col: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Dataset, DatasetError> {
        let mut inputs = self.inputs.clone();
        inputs.column_mut(col).mapv_inplace(f);
        Dataset::new(inputs, self.output.clone(), self.column_names.clone())
    }

    /// Population mean and variance of the output (`1/N` normalization).
    pub fn output_moments(&self) -> (f64, f64) {
        let n = self.output.len() as f64;
        let mean = self.output.iter().sum::<f64>() / n;
        let var = self
            .output
            .iter()
            .map(|y| (y - mean) * (y - mean))
            .sum::<f64>()
            / n;
        (mean, var)
    }

    /// Writes inputs then output, header first.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DatasetError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.column_names)?;
        let mut record: Vec<String> = Vec::with_capacity(self.column_names.len());
        for (row, y) in self.inputs.rows().into_iter().zip(&self.output) {
            record.clear();
            record.extend(row.iter().map(|v| format!("{v:?}")));
            record.push(format!("{y:?}"));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Which CSV columns to read. `inputs = None` selects every column except the output.
#[derive(Debug, Clone)]
pub struct CsvSelection {
    pub output: String,
    pub inputs: Option<Vec<String>>,
}

impl CsvSelection {
    pub fn output(name: impl Into<String>) -> Self {
        CsvSelection {
            output: name.into(),
            inputs: None,
        }
    }
}

/// Parses CSV text into a dataset. Errors carry 1-based line numbers
/// (the header is line 1) and the offending column name.
pub fn read_csv<R: Read>(reader: R, selection: &CsvSelection) -> Result<Dataset, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(DatasetError::MissingHeader),
    };
    let header: Vec<String> = header
        .iter()
        .map(|s| s.trim_start_matches('\u{feff}').to_string())
        .collect();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DatasetError::MissingColumn(name.to_string()))
    };
    let out_idx = find(&selection.output)?;
    let input_names: Vec<String> = match &selection.inputs {
        Some(names) => names.clone(),
        None => header
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != out_idx)
            .map(|(_, h)| h.clone())
            .collect(),
    };
    let mut in_idx = Vec::with_capacity(input_names.len());
    for (k, name) in input_names.iter().enumerate() {
        if input_names[..k].contains(name) || *name == selection.output {
            return Err(DatasetError::DuplicateColumn(name.clone()));
        }
        in_idx.push(find(name)?);
    }
    if in_idx.is_empty() {
        return Err(DatasetError::NoInputs);
    }

    let parse = |text: &str, line: u64, col: usize| -> Result<f64, DatasetError> {
        let value: f64 = text.parse().map_err(|_| DatasetError::Parse {
            line,
            column: header[col].clone(),
            text: text.to_string(),
        })?;
        if !value.is_finite() {
            return Err(DatasetError::Parse {
                line,
                column: header[col].clone(),
                text: text.to_string(),
            });
        }
        Ok(value)
    };

    let mut flat = Vec::new();
    let mut output = Vec::new();
    for (k, record) in records.enumerate() {
        let record = record?;
        let line = record.position().map_or(k as u64 + 2, |p| p.line());
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != header.len() {
            return Err(DatasetError::FieldCount {
                line,
                expected: header.len(),
                found: record.len(),
            });
        }
        for &c in &in_idx {
            flat.push(parse(&record[c], line, c)?);
        }
        output.push(parse(&record[out_idx], line, out_idx)?);
    }
    if output.is_empty() {
        return Err(DatasetError::Empty);
    }
    let inputs = Array2::from_shape_vec((output.len(), in_idx.len()), flat)
        .expect("row-major buffer matches shape");
    let mut names = input_names;
    names.push(selection.output.clone());
    Dataset::new(inputs, output, names)
}
