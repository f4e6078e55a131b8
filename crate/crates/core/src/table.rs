//! Loading numeric decision tables and discretizing them.
//!
//! A [`RawMatrix`] holds real-valued condition attributes (columns) for n
//! samples plus an integer class label per sample. [`fit_discretizer`] runs
//! 1-D K-Means per column and [`discretize`] replaces every cell with its
//! nearest-centroid code, producing a [`DecisionTable`] of small contiguous
//! integer codes suitable for the rough-set operations.
//!
//! Error positions in CSV input are reported as 1-based data row and column
//! numbers (the header row is not counted).

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering;
use crate::error::{Error, Result};
use crate::seeding;

/// Default number of discretization bins per attribute.
pub const DEFAULT_BINS: usize = 3;

/// Which CSV column carries the class label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassColumn {
    /// The last column (default).
    Last,
    /// Zero-based column index.
    Index(usize),
    /// Header name; requires a header row.
    Name(String),
}

impl Default for ClassColumn {
    fn default() -> Self {
        ClassColumn::Last
    }
}

/// Delimiter and header settings for CSV input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvFormat {
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for CsvFormat {
    fn default() -> Self {
        CsvFormat {
            delimiter: b',',
            has_header: true,
        }
    }
}

/// Real-valued samples-by-attributes matrix with one class label per sample.
///
/// Class labels are coded by first appearance in the input, so code 0 is the
/// first distinct label seen; `class_names[code]` recovers the original text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawMatrix {
    pub values: Vec<Vec<f64>>,
    pub attribute_names: Vec<String>,
    pub class_labels: Vec<usize>,
    pub class_names: Vec<String>,
}

impl RawMatrix {
    pub fn new(
        values: Vec<Vec<f64>>,
        attribute_names: Vec<String>,
        class_labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NoRows);
        }
        let width = attribute_names.len();
        for (i, row) in values.iter().enumerate() {
            if row.len() != width {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        row: i + 1,
                        column: j + 1,
                        value: v,
                    });
                }
            }
        }
        if class_labels.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: class_labels.len(),
                right: values.len(),
            });
        }
        let mut seen = vec![false; class_names.len()];
        for &label in &class_labels {
            if label >= class_names.len() {
                return Err(Error::invalid(format!(
                    "class code {label} has no name (only {} classes)",
                    class_names.len()
                )));
            }
            seen[label] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::invalid(
                "every class name must be used by at least one sample".to_string(),
            ));
        }
        Ok(RawMatrix {
            values,
            attribute_names,
            class_labels,
            class_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.values.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[j]).collect()
    }

    /// Copy of this matrix restricted to the given attribute columns
    /// (ascending index order).
    pub fn select_columns(&self, attrs: &BTreeSet<usize>) -> Result<RawMatrix> {
        for &a in attrs {
            if a >= self.n_attributes() {
                return Err(Error::AttributeOutOfRange {
                    index: a,
                    attributes: self.n_attributes(),
                });
            }
        }
        let values = self
            .values
            .iter()
            .map(|row| attrs.iter().map(|&a| row[a]).collect())
            .collect();
        let names = attrs
            .iter()
            .map(|&a| self.attribute_names[a].clone())
            .collect();
        Ok(RawMatrix {
            values,
            attribute_names: names,
            class_labels: self.class_labels.clone(),
            class_names: self.class_names.clone(),
        })
    }
}

/// Loads a delimiter-separated numeric table with one class-label column.
///
/// Every non-class cell must parse as a finite number. Class labels may be
/// arbitrary text and are coded by first appearance.
pub fn load_csv(path: &Path, format: CsvFormat, class_column: &ClassColumn) -> Result<RawMatrix> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter)
        .has_headers(format.has_header)
        .flexible(true)
        .from_reader(file);

    let header: Option<Vec<String>> = if format.has_header {
        let record = reader.headers().map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        Some(record.iter().map(|s| s.trim().to_string()).collect())
    } else {
        None
    };

    let mut width = header.as_ref().map(|h| h.len());
    let mut values: Vec<Vec<f64>> = Vec::new();
    let mut class_cells: Vec<String> = Vec::new();
    let mut class_index: Option<usize> = None;

    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                row,
                expected,
                found: record.len(),
            });
        }
        let class_at = *class_index.get_or_insert(resolve_class_column(
            class_column,
            expected,
            header.as_deref(),
        )?);

        let mut data_row = Vec::with_capacity(expected - 1);
        for (j, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if j == class_at {
                class_cells.push(cell.to_string());
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| Error::BadCell {
                row,
                column: j + 1,
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    row,
                    column: j + 1,
                    value,
                });
            }
            data_row.push(value);
        }
        values.push(data_row);
    }

    if values.is_empty() {
        return Err(Error::NoRows);
    }

    let width = width.expect("width known after at least one row");
    let class_at = class_index.expect("class column resolved");
    let attribute_names: Vec<String> = match &header {
        Some(names) => names
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != class_at)
            .map(|(_, n)| n.clone())
            .collect(),
        None => (0..width).filter(|&j| j != class_at).map(|j| format!("c{j}")).collect(),
    };

    // First-appearance coding of the class labels.
    let mut class_names: Vec<String> = Vec::new();
    let mut class_labels = Vec::with_capacity(class_cells.len());
    for cell in class_cells {
        let code = match class_names.iter().position(|n| *n == cell) {
            Some(code) => code,
            None => {
                class_names.push(cell);
                class_names.len() - 1
            }
        };
        class_labels.push(code);
    }

    RawMatrix::new(values, attribute_names, class_labels, class_names)
}

fn resolve_class_column(
    class_column: &ClassColumn,
    width: usize,
    header: Option<&[String]>,
) -> Result<usize> {
    if width == 0 {
        return Err(Error::NoRows);
    }
    match class_column {
        ClassColumn::Last => Ok(width - 1),
        ClassColumn::Index(i) => {
            if *i >= width {
                Err(Error::ClassColumnOutOfRange {
                    index: *i,
                    columns: width,
                })
            } else {
                Ok(*i)
            }
        }
        ClassColumn::Name(name) => match header {
            None => Err(Error::invalid(
                "selecting the class column by name requires a header row".to_string(),
            )),
            Some(names) => names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::ClassColumnNotFound { name: name.clone() }),
        },
    }
}

/// Per-column 1-D K-Means centroids used to code continuous values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discretizer {
    bins: usize,
    seed: u64,
    centroids: Vec<Vec<f64>>,
}

impl Discretizer {
    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_attributes(&self) -> usize {
        self.centroids.len()
    }

    /// Sorted centroids for one column. The code of a value is the index of
    /// its nearest centroid here.
    pub fn column_centroids(&self, j: usize) -> &[f64] {
        &self.centroids[j]
    }

    /// Restriction of this discretizer to a subset of its columns, in
    /// ascending index order. Coding of the kept columns is unchanged.
    pub fn select_columns(&self, attrs: &BTreeSet<usize>) -> Result<Discretizer> {
        for &a in attrs {
            if a >= self.centroids.len() {
                return Err(Error::AttributeOutOfRange {
                    index: a,
                    attributes: self.centroids.len(),
                });
            }
        }
        Ok(Discretizer {
            bins: self.bins,
            seed: self.seed,
            centroids: attrs.iter().map(|&a| self.centroids[a].clone()).collect(),
        })
    }

    /// Human/machine-readable summary of the fitted bins for a run report.
    pub fn report(&self, attribute_names: &[String]) -> DiscretizationReport {
        DiscretizationReport {
            bins_requested: self.bins,
            seed: self.seed,
            columns: self
                .centroids
                .iter()
                .enumerate()
                .map(|(j, c)| ColumnDiscretization {
                    name: attribute_names
                        .get(j)
                        .cloned()
                        .unwrap_or_else(|| format!("c{j}")),
                    bins: c.len(),
                    centroids: c.clone(),
                })
                .collect(),
        }
    }
}

/// Sidecar report listing the fitted centroids per column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationReport {
    pub bins_requested: usize,
    pub seed: u64,
    pub columns: Vec<ColumnDiscretization>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnDiscretization {
    pub name: String,
    pub bins: usize,
    pub centroids: Vec<f64>,
}

/// Fits per-column 1-D K-Means with `bins` clusters per column.
///
/// Columns with fewer distinct values than `bins` are clamped to that count;
/// `bins == 1` stores the column mean. Each column derives its own seed from
/// `seed` and its index, so fitting is deterministic regardless of the
/// per-column execution order.
pub fn fit_discretizer(matrix: &RawMatrix, bins: usize, seed: u64) -> Result<Discretizer> {
    if bins == 0 {
        return Err(Error::invalid("bins must be at least 1".to_string()));
    }
    if matrix.n_attributes() == 0 {
        return Ok(Discretizer {
            bins,
            seed,
            centroids: Vec::new(),
        });
    }
    let centroids: Vec<Result<Vec<f64>>> = (0..matrix.n_attributes())
        .into_par_iter()
        .map(|j| fit_column(&matrix.column(j), bins, seeding::indexed_seed(seed, j as u64)))
        .collect();
    let mut out = Vec::with_capacity(centroids.len());
    for c in centroids {
        out.push(c?);
    }
    Ok(Discretizer {
        bins,
        seed,
        centroids: out,
    })
}

fn fit_column(values: &[f64], bins: usize, seed: u64) -> Result<Vec<f64>> {
    let mut distinct = values.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    distinct.dedup();
    let k = bins.min(distinct.len());
    if k == 1 {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        return Ok(vec![mean]);
    }
    let points: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
    // tol = 0 runs Lloyd to exact assignment stability, which keeps
    // discretization idempotent on already-coded integer data.
    let model = clustering::kmeans(&points, k, seed, clustering::DEFAULT_MAX_ITER, 0.0)?;
    let mut centroids: Vec<f64> = model.centroids.iter().map(|c| c[0]).collect();
    centroids.sort_by(|a, b| a.partial_cmp(b).expect("finite centroids"));
    centroids.dedup();
    Ok(centroids)
}

/// Code of `value` in a sorted centroid list: nearest centroid, ties to the
/// lower index.
fn nearest_code(value: f64, centroids: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = (value - centroids[0]).abs();
    for (j, &c) in centroids.iter().enumerate().skip(1) {
        let d = (value - c).abs();
        if d < best_d {
            best = j;
            best_d = d;
        }
    }
    best
}

/// Replaces every cell with its nearest-centroid code and attaches the class
/// labels as the decision column.
///
/// Codes are re-ranked order-preservingly per column so each column uses the
/// contiguous range `0..k`. On the matrix the discretizer was fitted to this
/// is the identity (every fitted centroid is nearest to at least one value);
/// it only compresses when the discretizer is applied to other data.
pub fn discretize(matrix: &RawMatrix, disc: &Discretizer) -> Result<DecisionTable> {
    if matrix.n_attributes() != disc.n_attributes() {
        return Err(Error::LengthMismatch {
            left: matrix.n_attributes(),
            right: disc.n_attributes(),
        });
    }
    let n = matrix.n_samples();
    let d = matrix.n_attributes();
    let mut condition = vec![vec![0usize; d]; n];
    for j in 0..d {
        let centroids = disc.column_centroids(j);
        let mut codes: Vec<usize> = matrix
            .values
            .iter()
            .map(|row| nearest_code(row[j], centroids))
            .collect();
        compress_codes(&mut codes);
        for (i, code) in codes.into_iter().enumerate() {
            condition[i][j] = code;
        }
    }
    DecisionTable::new(condition, matrix.class_labels.clone(), matrix.attribute_names.clone())
}

/// Order-preserving remap of codes onto the contiguous range `0..k`.
fn compress_codes(codes: &mut [usize]) {
    let mut present: Vec<usize> = codes.to_vec();
    present.sort_unstable();
    present.dedup();
    if present.last().map_or(true, |&m| m + 1 == present.len()) {
        return; // already contiguous from zero
    }
    for code in codes.iter_mut() {
        *code = present.binary_search(code).expect("code seen during scan");
    }
}

/// Integer-coded decision table: condition attribute codes plus a decision
/// (class) code per sample.
///
/// Invariants enforced at construction: rows are rectangular, every condition
/// column uses the contiguous code range `0..k` for some `k >= 1`, and the
/// decision column does too. A table may have zero condition attributes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableData")]
pub struct DecisionTable {
    condition: Vec<Vec<usize>>,
    decision: Vec<usize>,
    attribute_names: Vec<String>,
}

/// Unvalidated mirror of [`DecisionTable`] used during deserialization.
#[derive(Deserialize)]
struct TableData {
    condition: Vec<Vec<usize>>,
    decision: Vec<usize>,
    attribute_names: Vec<String>,
}

impl TryFrom<TableData> for DecisionTable {
    type Error = Error;

    fn try_from(raw: TableData) -> Result<Self> {
        DecisionTable::new(raw.condition, raw.decision, raw.attribute_names)
    }
}

impl DecisionTable {
    pub fn new(
        condition: Vec<Vec<usize>>,
        decision: Vec<usize>,
        attribute_names: Vec<String>,
    ) -> Result<Self> {
        if decision.is_empty() {
            return Err(Error::NoRows);
        }
        if condition.len() != decision.len() {
            return Err(Error::LengthMismatch {
                left: condition.len(),
                right: decision.len(),
            });
        }
        let width = attribute_names.len();
        for (i, row) in condition.iter().enumerate() {
            if row.len() != width {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
        }
        for j in 0..width {
            check_contiguous(condition.iter().map(|row| row[j]), &format!("column {j}"))?;
        }
        check_contiguous(decision.iter().copied(), "decision column")?;
        Ok(DecisionTable {
            condition,
            decision,
            attribute_names,
        })
    }

    /// Builds a table from arbitrary (possibly sparse) non-negative integer
    /// codes, compacting every condition column and the decision column onto
    /// contiguous ranges order-preservingly. Use [`DecisionTable::new`] when
    /// the codes are known to be contiguous already.
    pub fn from_codes(
        mut condition: Vec<Vec<usize>>,
        mut decision: Vec<usize>,
        attribute_names: Vec<String>,
    ) -> Result<Self> {
        if decision.is_empty() {
            return Err(Error::NoRows);
        }
        if condition.len() != decision.len() {
            return Err(Error::LengthMismatch {
                left: condition.len(),
                right: decision.len(),
            });
        }
        let width = attribute_names.len();
        for (i, row) in condition.iter().enumerate() {
            if row.len() != width {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
        }
        for j in 0..width {
            let mut codes: Vec<usize> = condition.iter().map(|row| row[j]).collect();
            compress_codes(&mut codes);
            for (row, code) in condition.iter_mut().zip(codes) {
                row[j] = code;
            }
        }
        compress_codes(&mut decision);
        DecisionTable::new(condition, decision, attribute_names)
    }

    /// Builds a table directly from a matrix whose cells are already small
    /// non-negative integer codes (no K-Means involved). Codes are compacted
    /// order-preservingly per column.
    pub fn from_integer_matrix(matrix: &RawMatrix) -> Result<Self> {
        let n = matrix.n_samples();
        let d = matrix.n_attributes();
        let mut condition = vec![vec![0usize; d]; n];
        for j in 0..d {
            for (i, row) in matrix.values.iter().enumerate() {
                let v = row[j];
                if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
                    return Err(Error::BadCell {
                        row: i + 1,
                        column: j + 1,
                        value: format!("{v} (expected a small non-negative integer code)"),
                    });
                }
                condition[i][j] = v as usize;
            }
        }
        Self::from_codes(condition, matrix.class_labels.clone(), matrix.attribute_names.clone())
    }

    pub fn universe_size(&self) -> usize {
        self.decision.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn code(&self, row: usize, attribute: usize) -> usize {
        self.condition[row][attribute]
    }

    pub fn row(&self, row: usize) -> &[usize] {
        &self.condition[row]
    }

    pub fn decision(&self, row: usize) -> usize {
        self.decision[row]
    }

    pub fn decision_codes(&self) -> &[usize] {
        &self.decision
    }

    pub fn n_decision_classes(&self) -> usize {
        self.decision.iter().copied().max().unwrap_or(0) + 1
    }

    /// Number of distinct codes in one condition column.
    pub fn column_cardinality(&self, attribute: usize) -> usize {
        self.condition
            .iter()
            .map(|row| row[attribute])
            .max()
            .unwrap_or(0)
            + 1
    }

    /// Table restricted to the given condition attributes (ascending index
    /// order). The decision column is kept; an empty set is allowed and
    /// yields a zero-attribute table.
    pub fn project(&self, attrs: &BTreeSet<usize>) -> Result<DecisionTable> {
        for &a in attrs {
            if a >= self.n_attributes() {
                return Err(Error::AttributeOutOfRange {
                    index: a,
                    attributes: self.n_attributes(),
                });
            }
        }
        let condition = self
            .condition
            .iter()
            .map(|row| attrs.iter().map(|&a| row[a]).collect())
            .collect();
        let names = attrs
            .iter()
            .map(|&a| self.attribute_names[a].clone())
            .collect();
        DecisionTable::new(condition, self.decision.clone(), names)
    }
}

fn check_contiguous(codes: impl Iterator<Item = usize>, what: &str) -> Result<()> {
    let mut present = BTreeSet::new();
    for code in codes {
        present.insert(code);
    }
    let max = *present.iter().next_back().expect("at least one row");
    if max + 1 != present.len() {
        return Err(Error::invalid(format!(
            "{what}: codes must form a contiguous range from 0 (saw max {max} over {} distinct)",
            present.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    fn matrix_1col(values: &[f64]) -> RawMatrix {
        RawMatrix::new(
            values.iter().map(|&v| vec![v]).collect(),
            vec!["g0".to_string()],
            vec![0; values.len()],
            vec!["x".to_string()],
        )
        .unwrap()
    }

    #[test]
    fn loads_comma_csv_with_header() {
        let f = write_temp("g1,g2,label\n1.0,2.0,A\n1.5,2.5,A\n9.0,8.0,B\n");
        let m = load_csv(f.path(), CsvFormat::default(), &ClassColumn::Last).unwrap();
        assert_eq!(m.attribute_names, vec!["g1", "g2"]);
        assert_eq!(m.values, vec![vec![1.0, 2.0], vec![1.5, 2.5], vec![9.0, 8.0]]);
        assert_eq!(m.class_labels, vec![0, 0, 1]);
        assert_eq!(m.class_names, vec!["A", "B"]);
    }

    #[test]
    fn class_column_by_name_and_index() {
        let f = write_temp("label,g1\nB,1.0\nA,2.0\nB,3.0\n");
        let by_name = load_csv(
            f.path(),
            CsvFormat::default(),
            &ClassColumn::Name("label".to_string()),
        )
        .unwrap();
        assert_eq!(by_name.class_names, vec!["B", "A"]);
        assert_eq!(by_name.class_labels, vec![0, 1, 0]);
        assert_eq!(by_name.values, vec![vec![1.0], vec![2.0], vec![3.0]]);

        let by_index = load_csv(f.path(), CsvFormat::default(), &ClassColumn::Index(0)).unwrap();
        assert_eq!(by_index.values, by_name.values);

        let missing = load_csv(
            f.path(),
            CsvFormat::default(),
            &ClassColumn::Name("nope".to_string()),
        );
        assert!(matches!(missing, Err(Error::ClassColumnNotFound { .. })));
    }

    #[test]
    fn loads_tab_delimited_without_header() {
        let f = write_temp("1.0\t5.0\tx\n2.0\t6.0\ty\n");
        let format = CsvFormat {
            delimiter: b'\t',
            has_header: false,
        };
        let m = load_csv(f.path(), format, &ClassColumn::Last).unwrap();
        assert_eq!(m.attribute_names, vec!["c0", "c1"]);
        assert_eq!(m.class_names, vec!["x", "y"]);
    }

    #[test]
    fn empty_input_reports_no_rows() {
        let f = write_temp("");
        let err = load_csv(f.path(), CsvFormat::default(), &ClassColumn::Last).unwrap_err();
        assert!(matches!(err, Error::NoRows), "{err}");
        // Header only, no data rows.
        let f = write_temp("a,b,label\n");
        let err = load_csv(f.path(), CsvFormat::default(), &ClassColumn::Last).unwrap_err();
        assert!(matches!(err, Error::NoRows), "{err}");
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        let f = write_temp("a,b,label\n1.0,2.0,x\n1.0,oops,y\n");
        let err = load_csv(f.path(), CsvFormat::default(), &ClassColumn::Last).unwrap_err();
        match err {
            Error::BadCell { row, column, value } => {
                assert_eq!((row, column), (2, 2));
                assert_eq!(value, "oops");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn non_finite_cell_is_rejected() {
        let f = write_temp("a,label\ninf,x\n");
        let err = load_csv(f.path(), CsvFormat::default(), &ClassColumn::Last).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 1, column: 1, .. }), "{err}");
    }

    #[test]
    fn ragged_row_is_rejected() {
        let f = write_temp("a,b,label\n1.0,2.0,x\n1.0,y\n");
        let err = load_csv(f.path(), CsvFormat::default(), &ClassColumn::Last).unwrap_err();
        assert!(
            matches!(err, Error::RaggedRow { row: 2, expected: 3, found: 2 }),
            "{err}"
        );
    }

    #[test]
    fn class_by_name_requires_header() {
        let f = write_temp("1.0,x\n");
        let format = CsvFormat {
            delimiter: b',',
            has_header: false,
        };
        let err = load_csv(f.path(), format, &ClassColumn::Name("label".into())).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)), "{err}");
    }

    /// Exhaustive search over contiguous splits of the sorted values: the
    /// optimal 1-D clustering is always of that form.
    fn oracle_1d_centroids(values: &[f64], k: usize) -> (Vec<f64>, f64) {
        fn stats(vals: &[f64]) -> (f64, f64) {
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let ss = vals.iter().map(|v| (v - mean) * (v - mean)).sum();
            (mean, ss)
        }
        fn search(vals: &[f64], k: usize) -> (Vec<f64>, f64) {
            if k == 1 {
                let (mean, ss) = stats(vals);
                return (vec![mean], ss);
            }
            let mut best: Option<(Vec<f64>, f64)> = None;
            for cut in 1..=(vals.len() - (k - 1)) {
                let (head_mean, head_ss) = stats(&vals[..cut]);
                let (mut tail_means, tail_ss) = search(&vals[cut..], k - 1);
                let total = head_ss + tail_ss;
                if best.as_ref().map_or(true, |(_, b)| total < *b) {
                    let mut means = vec![head_mean];
                    means.append(&mut tail_means);
                    best = Some((means, total));
                }
            }
            best.expect("at least one split")
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        search(&sorted, k)
    }

    #[test]
    fn fit_matches_exhaustive_oracle_on_two_lumps() {
        let values = [1.0, 1.1, 5.0, 5.2];
        let m = matrix_1col(&values);
        let disc = fit_discretizer(&m, 2, 17).unwrap();
        let fitted = disc.column_centroids(0);
        let (oracle, _) = oracle_1d_centroids(&values, 2);
        assert_eq!(fitted.len(), 2);
        for (f, o) in fitted.iter().zip(&oracle) {
            assert!((f - o).abs() < 1e-9, "fitted {fitted:?} oracle {oracle:?}");
        }
        assert!((fitted[0] - 1.05).abs() < 1e-9);
        assert!((fitted[1] - 5.1).abs() < 1e-9);
    }

    #[test]
    fn bins_clamp_to_distinct_value_count() {
        let disc = fit_discretizer(&matrix_1col(&[2.0, 2.0, 2.0]), 3, 0).unwrap();
        assert_eq!(disc.column_centroids(0), &[2.0]);

        let disc = fit_discretizer(&matrix_1col(&[1.0, 1.0, 4.0, 4.0]), 5, 0).unwrap();
        assert_eq!(disc.column_centroids(0), &[1.0, 4.0]);
    }

    #[test]
    fn one_bin_stores_the_column_mean() {
        let disc = fit_discretizer(&matrix_1col(&[1.0, 2.0, 6.0]), 1, 0).unwrap();
        assert!((disc.column_centroids(0)[0] - 3.0).abs() < 1e-12);
        assert!(fit_discretizer(&matrix_1col(&[1.0]), 0, 0).is_err());
    }

    #[test]
    fn discretize_codes_by_nearest_centroid() {
        let m = matrix_1col(&[1.0, 1.1, 5.0, 5.2]);
        let disc = fit_discretizer(&m, 2, 17).unwrap();
        let table = discretize(&m, &disc).unwrap();
        let codes: Vec<usize> = (0..4).map(|i| table.code(i, 0)).collect();
        assert_eq!(codes, vec![0, 0, 1, 1]);
        assert_eq!(table.column_cardinality(0), 2);
    }

    #[test]
    fn equidistant_value_takes_the_lower_code() {
        // Centroids land exactly on 1 and 3; the value 2 is equidistant.
        let train = matrix_1col(&[1.0, 1.0, 3.0, 3.0]);
        let disc = fit_discretizer(&train, 2, 4).unwrap();
        assert_eq!(disc.column_centroids(0), &[1.0, 3.0]);
        let apply = matrix_1col(&[2.0]);
        let table = discretize(&apply, &disc).unwrap();
        assert_eq!(table.code(0, 0), 0);
    }

    #[test]
    fn single_centroid_column_codes_to_zero() {
        let m = matrix_1col(&[4.0, 5.0, 6.0]);
        let disc = fit_discretizer(&m, 1, 0).unwrap();
        let table = discretize(&m, &disc).unwrap();
        assert_eq!((0..3).map(|i| table.code(i, 0)).collect::<Vec<_>>(), vec![0, 0, 0]);
    }

    #[test]
    fn discretize_checks_column_count() {
        let m = matrix_1col(&[1.0, 2.0]);
        let wide = RawMatrix::new(
            vec![vec![1.0, 2.0]],
            vec!["a".into(), "b".into()],
            vec![0],
            vec!["x".into()],
        )
        .unwrap();
        let disc = fit_discretizer(&m, 2, 0).unwrap();
        assert!(discretize(&wide, &disc).is_err());
    }

    #[test]
    fn applying_a_discretizer_to_foreign_data_keeps_codes_contiguous() {
        let train = matrix_1col(&[0.0, 0.0, 5.0, 5.0, 10.0, 10.0]);
        let disc = fit_discretizer(&train, 3, 1).unwrap();
        assert_eq!(disc.column_centroids(0).len(), 3);
        // Values near only the extreme centroids: code 1 never fires and the
        // remaining codes must compress to {0, 1}.
        let apply = matrix_1col(&[0.1, 9.9, 0.2]);
        let table = discretize(&apply, &disc).unwrap();
        let codes: Vec<usize> = (0..3).map(|i| table.code(i, 0)).collect();
        assert_eq!(codes, vec![0, 1, 0]);
    }

    #[test]
    fn project_keeps_selected_columns_and_decision() {
        let table = DecisionTable::new(
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 1]],
            vec![0, 1, 1],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let sub = table.project(&BTreeSet::from([0, 2])).unwrap();
        assert_eq!(sub.attribute_names(), &["a".to_string(), "c".to_string()]);
        assert_eq!(sub.row(2), &[1, 1]);
        assert_eq!(sub.decision_codes(), table.decision_codes());

        let empty = table.project(&BTreeSet::new()).unwrap();
        assert_eq!(empty.n_attributes(), 0);
        assert_eq!(empty.universe_size(), 3);

        assert!(table.project(&BTreeSet::from([3])).is_err());
    }

    #[test]
    fn construction_rejects_non_contiguous_codes() {
        let err = DecisionTable::new(vec![vec![0], vec![2]], vec![0, 1], vec!["a".into()]);
        assert!(err.is_err());
        let err = DecisionTable::new(vec![vec![0], vec![1]], vec![0, 2], vec!["a".into()]);
        assert!(err.is_err());
    }

    #[test]
    fn from_integer_matrix_compacts_codes() {
        let m = RawMatrix::new(
            vec![vec![0.0, 10.0], vec![2.0, 20.0], vec![2.0, 10.0]],
            vec!["a".into(), "b".into()],
            vec![0, 1, 1],
            vec!["x".into(), "y".into()],
        )
        .unwrap();
        let table = DecisionTable::from_integer_matrix(&m).unwrap();
        assert_eq!(table.row(0), &[0, 0]);
        assert_eq!(table.row(1), &[1, 1]);
        assert_eq!(table.row(2), &[1, 0]);

        let bad = RawMatrix::new(
            vec![vec![0.5]],
            vec!["a".into()],
            vec![0],
            vec!["x".into()],
        )
        .unwrap();
        assert!(DecisionTable::from_integer_matrix(&bad).is_err());
    }

    #[test]
    fn from_codes_compacts_sparse_codes_everywhere() {
        let table = DecisionTable::from_codes(
            vec![vec![7], vec![3], vec![7]],
            vec![5, 9, 5],
            vec!["a".into()],
        )
        .unwrap();
        assert_eq!(
            (0..3).map(|i| table.code(i, 0)).collect::<Vec<_>>(),
            vec![1, 0, 1]
        );
        assert_eq!(table.decision_codes(), &[0, 1, 0]);
    }

    #[test]
    fn decision_table_round_trips_through_json() {
        let table = DecisionTable::new(
            vec![vec![0, 0], vec![1, 1]],
            vec![0, 1],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let json = serde_json::to_string(&table).unwrap();
        let back: DecisionTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, table);

        // Deserialization re-validates.
        let bad = r#"{"condition":[[0],[2]],"decision":[0,1],"attribute_names":["a"]}"#;
        assert!(serde_json::from_str::<DecisionTable>(bad).is_err());
    }

    #[test]
    fn fitting_is_deterministic_per_seed() {
        let values: Vec<f64> = (0..40).map(|i| ((i * 37 % 17) as f64) * 0.73).collect();
        let m = matrix_1col(&values);
        let a = fit_discretizer(&m, 4, 9).unwrap();
        let b = fit_discretizer(&m, 4, 9).unwrap();
        assert_eq!(a, b);
        let bits = |d: &Discretizer| -> Vec<u64> {
            d.column_centroids(0).iter().map(|c| c.to_bits()).collect()
        };
        assert_eq!(bits(&a), bits(&b));
    }
}
