//! I×2 dose-response tables and their empirical joint probability vectors.
//!
//! A table holds one row per dose group: the dose value `x_i`, the number of
//! trials `n_i` and the number of successes `N_i1`. Column 1 is always the
//! success column.

use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance used when validating probability vectors.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("a table needs at least 2 dose groups, got {0}")]
    TooFewRows(usize),
    #[error("column lengths differ: {doses} doses, {sizes} group sizes, {successes} success counts")]
    LengthMismatch {
        doses: usize,
        sizes: usize,
        successes: usize,
    },
    #[error("dose in row {row} is not finite")]
    NonFiniteDose { row: usize },
    #[error("duplicate dose {dose} in rows {first} and {second}")]
    DuplicateDose { dose: f64, first: usize, second: usize },
    #[error("doses must be strictly increasing (row {row})")]
    UnsortedDoses { row: usize },
    #[error("group size in row {row} must be positive")]
    EmptyGroup { row: usize },
    #[error("successes exceed trials in row {row} ({successes} > {n})")]
    SuccessesExceedTrials { row: usize, successes: u64, n: u64 },
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("malformed input: {0}")]
    Format(String),
}

/// Observed I×2 table under product-binomial sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableDocument", into = "TableDocument")]
pub struct DoseResponseTable {
    doses: Vec<f64>,
    group_sizes: Vec<u64>,
    successes: Vec<u64>,
}

impl DoseResponseTable {
    /// Builds a validated table. Doses must already be strictly increasing.
    pub fn new(doses: Vec<f64>, group_sizes: Vec<u64>, successes: Vec<u64>) -> Result<Self, TableError> {
        if doses.len() != group_sizes.len() || doses.len() != successes.len() {
            return Err(TableError::LengthMismatch {
                doses: doses.len(),
                sizes: group_sizes.len(),
                successes: successes.len(),
            });
        }
        if doses.len() < 2 {
            return Err(TableError::TooFewRows(doses.len()));
        }
        for (i, ((&x, &n), &s)) in doses.iter().zip(&group_sizes).zip(&successes).enumerate() {
            let row = i + 1;
            if !x.is_finite() {
                return Err(TableError::NonFiniteDose { row });
            }
            if n == 0 {
                return Err(TableError::EmptyGroup { row });
            }
            if s > n {
                return Err(TableError::SuccessesExceedTrials { row, successes: s, n });
            }
            if i > 0 {
                let prev = doses[i - 1];
                if x == prev {
                    return Err(TableError::DuplicateDose { dose: x, first: i, second: row });
                }
                if x < prev {
                    return Err(TableError::UnsortedDoses { row });
                }
            }
        }
        Ok(Self {
            doses,
            group_sizes,
            successes,
        })
    }

    /// Builds a table from rows in any dose order. Returns the table and
    /// whether the rows had to be reordered.
    pub fn from_unsorted_rows(rows: &[TableRow]) -> Result<(Self, bool), TableError> {
        let mut indexed: Vec<(usize, &TableRow)> = rows.iter().enumerate().collect();
        // Validate per-row constraints against the original row numbers first.
        for (i, row) in &indexed {
            if !row.dose.is_finite() {
                return Err(TableError::NonFiniteDose { row: i + 1 });
            }
            if row.n == 0 {
                return Err(TableError::EmptyGroup { row: i + 1 });
            }
            if row.successes > row.n {
                return Err(TableError::SuccessesExceedTrials {
                    row: i + 1,
                    successes: row.successes,
                    n: row.n,
                });
            }
        }
        let was_sorted = rows.windows(2).all(|w| w[0].dose < w[1].dose);
        indexed.sort_by(|a, b| a.1.dose.total_cmp(&b.1.dose));
        for w in indexed.windows(2) {
            if w[0].1.dose == w[1].1.dose {
                let (a, b) = (w[0].0.min(w[1].0) + 1, w[0].0.max(w[1].0) + 1);
                return Err(TableError::DuplicateDose {
                    dose: w[0].1.dose,
                    first: a,
                    second: b,
                });
            }
        }
        let table = Self::new(
            indexed.iter().map(|(_, r)| r.dose).collect(),
            indexed.iter().map(|(_, r)| r.n).collect(),
            indexed.iter().map(|(_, r)| r.successes).collect(),
        )?;
        Ok((table, !was_sorted))
    }

    pub fn groups(&self) -> usize {
        self.doses.len()
    }

    pub fn doses(&self) -> &[f64] {
        &self.doses
    }

    pub fn group_sizes(&self) -> &[u64] {
        &self.group_sizes
    }

    pub fn successes(&self) -> &[u64] {
        &self.successes
    }

    pub fn failures(&self) -> impl Iterator<Item = u64> + '_ {
        self.group_sizes.iter().zip(&self.successes).map(|(n, s)| n - s)
    }

    /// Total number of trials `n`.
    pub fn total(&self) -> u64 {
        self.group_sizes.iter().sum()
    }

    pub fn total_successes(&self) -> u64 {
        self.successes.iter().sum()
    }

    /// Pooled success proportion `Σ N_i1 / n`.
    pub fn pooled_proportion(&self) -> f64 {
        self.total_successes() as f64 / self.total() as f64
    }

    /// Trial-weighted mean dose `(1/n) Σ n_i x_i`.
    pub fn mean_dose(&self) -> f64 {
        let n = self.total() as f64;
        self.doses
            .iter()
            .zip(&self.group_sizes)
            .map(|(x, &ni)| x * ni as f64)
            .sum::<f64>()
            / n
    }

    pub fn rows(&self) -> impl Iterator<Item = TableRow> + '_ {
        self.doses
            .iter()
            .zip(&self.group_sizes)
            .zip(&self.successes)
            .map(|((&dose, &n), &successes)| TableRow { dose, n, successes })
    }

    /// Same counts with successes and failures exchanged.
    pub fn swap_columns(&self) -> Self {
        Self {
            doses: self.doses.clone(),
            group_sizes: self.group_sizes.clone(),
            successes: self.failures().collect(),
        }
    }

    /// Same counts attached to different dose values.
    pub fn with_doses(&self, doses: Vec<f64>) -> Result<Self, TableError> {
        Self::new(doses, self.group_sizes.clone(), self.successes.clone())
    }

    /// Applies `x -> scale * x + shift`. A negative scale reverses the row
    /// order so that doses stay increasing.
    pub fn transform_doses(&self, scale: f64, shift: f64) -> Result<Self, TableError> {
        let rows: Vec<TableRow> = self
            .rows()
            .map(|r| TableRow {
                dose: scale * r.dose + shift,
                ..r
            })
            .collect();
        Self::from_unsorted_rows(&rows).map(|(t, _)| t)
    }

    /// Writes the table in the CSV layout accepted by [`parse_table`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dose,n,successes\n");
        for r in self.rows() {
            out.push_str(&format!("{:?},{},{}\n", r.dose, r.n, r.successes));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serialization is infallible")
    }
}

/// One dose group as it appears in input files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub dose: f64,
    pub n: u64,
    pub successes: u64,
}

#[derive(Serialize, Deserialize)]
struct TableDocument {
    rows: Vec<TableRow>,
}

impl TryFrom<TableDocument> for DoseResponseTable {
    type Error = TableError;

    fn try_from(doc: TableDocument) -> Result<Self, Self::Error> {
        Self::from_unsorted_rows(&doc.rows).map(|(t, _)| t)
    }
}

impl From<DoseResponseTable> for TableDocument {
    fn from(t: DoseResponseTable) -> Self {
        Self { rows: t.rows().collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Json,
}

impl InputFormat {
    /// Guesses the format from a file name; anything not ending in `.json` is CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub table: DoseResponseTable,
    /// True when the input rows were not in increasing dose order.
    pub reordered: bool,
}

/// Reads a table from CSV (`dose,n,successes`) or JSON (`{"rows":[...]}`).
pub fn parse_table<R: Read>(source: R, format: InputFormat) -> Result<ParsedTable, TableError> {
    let rows = match format {
        InputFormat::Csv => read_csv_rows(source)?,
        InputFormat::Json => read_json_rows(source)?,
    };
    if rows.len() < 2 {
        return Err(TableError::TooFewRows(rows.len()));
    }
    let (table, reordered) = DoseResponseTable::from_unsorted_rows(&rows)?;
    Ok(ParsedTable { table, reordered })
}

fn read_csv_rows<R: Read>(source: R) -> Result<Vec<TableRow>, TableError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| TableError::Format(e.to_string()))?
        .clone();
    let expected = ["dose", "n", "successes"];
    if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(TableError::Format(format!(
            "expected header `dose,n,successes`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| TableError::Parse { row, message: e.to_string() })?;
        if record.len() != 3 {
            return Err(TableError::Parse {
                row,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let dose: f64 = record[0].parse().map_err(|_| TableError::Parse {
            row,
            message: format!("dose `{}` is not a number", &record[0]),
        })?;
        let n = parse_count(&record[1], "n", row)?;
        let successes = parse_count(&record[2], "successes", row)?;
        rows.push(TableRow { dose, n, successes });
    }
    Ok(rows)
}

fn parse_count(field: &str, name: &str, row: usize) -> Result<u64, TableError> {
    field.parse().map_err(|_| TableError::Parse {
        row,
        message: format!("{name} `{field}` is not a non-negative integer"),
    })
}

fn read_json_rows<R: Read>(source: R) -> Result<Vec<TableRow>, TableError> {
    let doc: TableDocument =
        serde_json::from_reader(source).map_err(|e| TableError::Format(e.to_string()))?;
    Ok(doc.rows)
}

/// Which model a joint probability vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointKind {
    Empirical,
    Model,
    Homogeneous,
}

/// Joint probabilities `(p_11, p_12, ..., p_I1, p_I2)` of an I×2 table.
#[derive(Debug, Clone, PartialEq)]
pub struct JointProbVector {
    entries: Vec<f64>,
    kind: JointKind,
}

impl JointProbVector {
    /// Wraps an arbitrary probability vector after checking non-negativity
    /// and unit sum.
    pub fn from_entries(entries: Vec<f64>, kind: JointKind) -> Result<Self, TableError> {
        if let Some(i) = entries.iter().position(|&p| !p.is_finite() || p < 0.0) {
            return Err(TableError::Format(format!("entry {} is not a probability", i + 1)));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL * entries.len().max(1) as f64 {
            return Err(TableError::Format(format!("entries sum to {sum}, not 1")));
        }
        Ok(Self { entries, kind })
    }

    pub(crate) fn from_raw(entries: Vec<f64>, kind: JointKind) -> Self {
        Self { entries, kind }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn kind(&self) -> JointKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Row sums `p_i1 + p_i2`.
    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(2).map(|c| c.iter().sum()).collect()
    }
}

impl AsRef<[f64]> for JointProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.entries
    }
}

/// Empirical joint vector `N / n`.
pub fn empirical_joint(table: &DoseResponseTable) -> JointProbVector {
    let n = table.total() as f64;
    let entries = table
        .group_sizes()
        .iter()
        .zip(table.successes())
        .flat_map(|(&ni, &s)| [s as f64 / n, (ni - s) as f64 / n])
        .collect();
    JointProbVector::from_raw(entries, JointKind::Empirical)
}
