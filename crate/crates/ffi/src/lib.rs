//! C ABI over the core toolkit: opaque handles, status codes, and
//! caller-owned buffers. The matching header is generated into
//! `include/roughsel.h` at build time.
//!
//! Conventions:
//! - Every fallible call returns an [`RsStatus`]; `RS_STATUS_OK` (0) means
//!   success. On failure [`rs_last_error`] describes what went wrong.
//! - Handles returned through out-pointers are owned by the caller and must
//!   be released with the matching `*_free` function. Strings returned
//!   through out-pointers are released with [`rs_string_free`].
//! - Matrix arguments are row-major with the stated dimensions; result
//!   buffers are allocated by the caller at the documented length.
//! - Every entry point catches panics; nothing unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use roughsel::clustering::{self, FcmModel, KMeansModel};
use roughsel::evaluation;
use roughsel::roughset::{self, ReductResult};
use roughsel::table::{
    discretize, fit_discretizer, load_csv, ClassColumn, CsvFormat, DecisionTable,
};
use roughsel::Error;

/// Result code of a toolkit call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument value was out of range or inconsistent.
    InvalidArgument = 2,
    /// The input data could not be read or fails validation.
    DataError = 3,
    /// An internal invariant failed; the handle state is unchanged.
    Panic = 4,
}

/// An exact dependency-degree fraction.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RsGamma {
    pub numerator: usize,
    pub denominator: usize,
}

/// Binary confusion counts and rates. Rates are NaN when their defining
/// class is absent from the truth labels.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsConfusion {
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
    pub n: usize,
    pub accuracy: f64,
    pub error: f64,
    pub tp_rate: f64,
    pub fn_rate: f64,
    pub tn_rate: f64,
    pub fp_rate: f64,
}

/// A discretized decision table (opaque).
pub struct RsTable {
    inner: DecisionTable,
}

/// A finished attribute selection (opaque).
pub struct RsReduct {
    result: ReductResult,
    names: Vec<String>,
}

/// A fitted K-Means model (opaque).
pub struct RsKMeans {
    model: KMeansModel,
    dim: usize,
}

/// A fitted fuzzy C-Means model (opaque).
pub struct RsFcm {
    model: FcmModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn fail(err: &Error) -> RsStatus {
    set_error(err.to_string());
    match err {
        Error::InvalidArgument(_) => RsStatus::InvalidArgument,
        _ => RsStatus::DataError,
    }
}

fn null_arg(name: &str) -> RsStatus {
    set_error(format!("{name} must not be null"));
    RsStatus::NullPointer
}

fn guard(f: impl FnOnce() -> RsStatus) -> RsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            RsStatus::Panic
        }
    }
}

/// Message for the most recent failure on this thread, or null if no call
/// has failed yet. The pointer stays valid until the next failing call on
/// the same thread; do not free it.
#[no_mangle]
pub extern "C" fn rs_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |text| text.as_ptr())
    })
}

/// Releases a string returned through an out-pointer.
///
/// # Safety
/// `s` must be a pointer previously returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn rs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn rs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a decision table from integer codes. `codes` is row-major with
/// `n_rows * n_cols` entries; `decision` has `n_rows` entries. Attributes
/// are named a0, a1, ….
///
/// # Safety
/// The pointers must be valid for the stated lengths, and `out` must be a
/// valid location to store the new handle.
#[no_mangle]
pub unsafe extern "C" fn rs_table_from_codes(
    codes: *const usize,
    n_rows: usize,
    n_cols: usize,
    decision: *const usize,
    out: *mut *mut RsTable,
) -> RsStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        if codes.is_null() {
            return null_arg("codes");
        }
        if decision.is_null() {
            return null_arg("decision");
        }
        let flat = std::slice::from_raw_parts(codes, n_rows.saturating_mul(n_cols));
        let condition: Vec<Vec<usize>> = flat.chunks(n_cols.max(1)).map(<[usize]>::to_vec).collect();
        let decision = std::slice::from_raw_parts(decision, n_rows).to_vec();
        let names = (0..n_cols).map(|j| format!("a{j}")).collect();
        match DecisionTable::from_codes(condition, decision, names) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RsTable { inner }));
                RsStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Loads a headered comma-separated file whose last column is the class,
/// discretizes every attribute into `bins` codes, and returns the table.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn rs_table_discretize_csv(
    path: *const c_char,
    bins: usize,
    seed: u64,
    out: *mut *mut RsTable,
) -> RsStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        if path.is_null() {
            return null_arg("path");
        }
        let path = match CStr::from_ptr(path).to_str() {
            Ok(text) => std::path::PathBuf::from(text),
            Err(_) => {
                set_error("path is not valid UTF-8".to_string());
                return RsStatus::InvalidArgument;
            }
        };
        let built = (|| {
            let matrix = load_csv(&path, CsvFormat::default(), &ClassColumn::Last)?;
            let disc = fit_discretizer(&matrix, bins, seed)?;
            discretize(&matrix, &disc)
        })();
        match built {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RsTable { inner }));
                RsStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Number of samples in the table; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rs_table_rows(table: *const RsTable) -> usize {
    if table.is_null() {
        return 0;
    }
    unsafe { (&(*table).inner).universe_size() }
}

/// Number of condition attributes in the table; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rs_table_attributes(table: *const RsTable) -> usize {
    if table.is_null() {
        return 0;
    }
    unsafe { (&(*table).inner).n_attributes() }
}

/// Releases a table handle.
///
/// # Safety
/// `table` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn rs_table_free(table: *mut RsTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Dependency degree of the decision on the given attribute subset, as an
/// exact fraction. `attrs` may be null when `attrs_len` is 0 (the empty
/// set).
///
/// # Safety
/// `attrs` must hold `attrs_len` indices and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_gamma(
    table: *const RsTable,
    attrs: *const usize,
    attrs_len: usize,
    out: *mut RsGamma,
) -> RsStatus {
    guard(|| {
        if table.is_null() {
            return null_arg("table");
        }
        if out.is_null() {
            return null_arg("out");
        }
        if attrs.is_null() && attrs_len > 0 {
            return null_arg("attrs");
        }
        let subset = if attrs_len == 0 {
            std::collections::BTreeSet::new()
        } else {
            std::slice::from_raw_parts(attrs, attrs_len)
                .iter()
                .copied()
                .collect()
        };
        match roughset::gamma(&(*table).inner, &subset) {
            Ok(gamma) => {
                *out = RsGamma {
                    numerator: gamma.numerator(),
                    denominator: gamma.denominator(),
                };
                RsStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Runs the greedy attribute selection on a table.
///
/// # Safety
/// `table` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn rs_quick_reduct(
    table: *const RsTable,
    out: *mut *mut RsReduct,
) -> RsStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        if table.is_null() {
            return null_arg("table");
        }
        match roughset::quick_reduct(&(*table).inner) {
            Ok(result) => {
                let names = (&(*table).inner).attribute_names().to_vec();
                *out = Box::into_raw(Box::new(RsReduct { result, names }));
                RsStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Number of selected attributes; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rs_reduct_len(reduct: *const RsReduct) -> usize {
    if reduct.is_null() {
        return 0;
    }
    unsafe { (&(*reduct).result.selected).len() }
}

/// The `index`-th selected attribute (in selection order).
///
/// # Safety
/// `reduct` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn rs_reduct_attribute(
    reduct: *const RsReduct,
    index: usize,
    out: *mut usize,
) -> RsStatus {
    guard(|| {
        if reduct.is_null() {
            return null_arg("reduct");
        }
        if out.is_null() {
            return null_arg("out");
        }
        match (&(*reduct).result.selected).get(index) {
            Some(&attribute) => {
                *out = attribute;
                RsStatus::Ok
            }
            None => {
                set_error(format!(
                    "index {index} is out of range: {} attributes selected",
                    (&(*reduct).result.selected).len()
                ));
                RsStatus::InvalidArgument
            }
        }
    })
}

/// The dependency degree of the full attribute set.
///
/// # Safety
/// `reduct` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn rs_reduct_gamma(reduct: *const RsReduct, out: *mut RsGamma) -> RsStatus {
    guard(|| {
        if reduct.is_null() {
            return null_arg("reduct");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let gamma = (*reduct).result.gamma_full;
        *out = RsGamma {
            numerator: gamma.numerator(),
            denominator: gamma.denominator(),
        };
        RsStatus::Ok
    })
}

/// Whether the selection reproduces the full dependency degree; false for a
/// null handle.
#[no_mangle]
pub extern "C" fn rs_reduct_reached_full(reduct: *const RsReduct) -> bool {
    if reduct.is_null() {
        return false;
    }
    unsafe { (*reduct).result.reached_full }
}

/// Serializes the selection (indices, names, trace) as a JSON string the
/// caller frees with [`rs_string_free`].
///
/// # Safety
/// `reduct` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn rs_reduct_to_json(
    reduct: *const RsReduct,
    out: *mut *mut c_char,
) -> RsStatus {
    guard(|| {
        if reduct.is_null() {
            return null_arg("reduct");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let handle = &*reduct;
        let report = serde_json::json!({
            "selected_indices": handle.result.selected,
            "selected_names": handle
                .result
                .selected
                .iter()
                .map(|&a| handle.names[a].clone())
                .collect::<Vec<_>>(),
            "gamma_full": {
                "numerator": handle.result.gamma_full.numerator(),
                "denominator": handle.result.gamma_full.denominator(),
            },
            "reached_full": handle.result.reached_full,
        });
        let text = report.to_string();
        match CString::new(text) {
            Ok(text) => {
                *out = text.into_raw();
                RsStatus::Ok
            }
            Err(_) => {
                set_error("serialized JSON contained a NUL byte".to_string());
                RsStatus::Panic
            }
        }
    })
}

/// Releases a reduct handle.
///
/// # Safety
/// `reduct` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn rs_reduct_free(reduct: *mut RsReduct) {
    if !reduct.is_null() {
        drop(Box::from_raw(reduct));
    }
}

/// Fits K-Means on row-major data of shape `n_rows x n_cols`.
///
/// # Safety
/// `data` must hold `n_rows * n_cols` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_kmeans_fit(
    data: *const f64,
    n_rows: usize,
    n_cols: usize,
    k: usize,
    seed: u64,
    max_iter: usize,
    tol: f64,
    out: *mut *mut RsKMeans,
) -> RsStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        if data.is_null() {
            return null_arg("data");
        }
        let rows = to_rows(data, n_rows, n_cols);
        match clustering::kmeans(&rows, k, seed, max_iter, tol) {
            Ok(model) => {
                *out = Box::into_raw(Box::new(RsKMeans { model, dim: n_cols }));
                RsStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

unsafe fn to_rows(data: *const f64, n_rows: usize, n_cols: usize) -> Vec<Vec<f64>> {
    let flat = std::slice::from_raw_parts(data, n_rows.saturating_mul(n_cols));
    flat.chunks(n_cols.max(1)).map(<[f64]>::to_vec).collect()
}

/// Number of clustered points; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rs_kmeans_points(model: *const RsKMeans) -> usize {
    if model.is_null() {
        return 0;
    }
    unsafe { (&(*model).model.assignments).len() }
}

/// Number of clusters; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rs_kmeans_k(model: *const RsKMeans) -> usize {
    if model.is_null() {
        return 0;
    }
    unsafe { (&(*model).model.centroids).len() }
}

/// Column count of the fitted data; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rs_kmeans_dim(model: *const RsKMeans) -> usize {
    if model.is_null() {
        return 0;
    }
    unsafe { (*model).dim }
}

/// Final within-cluster sum of squares; NaN for a null handle.
#[no_mangle]
pub extern "C" fn rs_kmeans_inertia(model: *const RsKMeans) -> f64 {
    if model.is_null() {
        return f64::NAN;
    }
    unsafe { (*model).model.inertia }
}

/// Whether the fit converged before the iteration cap; false for a null
/// handle.
#[no_mangle]
pub extern "C" fn rs_kmeans_converged(model: *const RsKMeans) -> bool {
    if model.is_null() {
        return false;
    }
    unsafe { (*model).model.converged }
}

/// Copies the per-point cluster ids into `out` (length
/// [`rs_kmeans_points`]).
///
/// # Safety
/// `model` must be a live handle and `out` sized to the point count.
#[no_mangle]
pub unsafe extern "C" fn rs_kmeans_assignments(
    model: *const RsKMeans,
    out: *mut usize,
) -> RsStatus {
    guard(|| {
        if model.is_null() {
            return null_arg("model");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let assignments = &(*model).model.assignments;
        std::ptr::copy_nonoverlapping(assignments.as_ptr(), out, assignments.len());
        RsStatus::Ok
    })
}

/// Copies the centroids row-major into `out` (length
/// [`rs_kmeans_k`] * [`rs_kmeans_dim`]).
///
/// # Safety
/// `model` must be a live handle and `out` sized to `k * dim`.
#[no_mangle]
pub unsafe extern "C" fn rs_kmeans_centroids(model: *const RsKMeans, out: *mut f64) -> RsStatus {
    guard(|| {
        if model.is_null() {
            return null_arg("model");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let mut cursor = out;
        for centroid in &(*model).model.centroids {
            std::ptr::copy_nonoverlapping(centroid.as_ptr(), cursor, centroid.len());
            cursor = cursor.add(centroid.len());
        }
        RsStatus::Ok
    })
}

/// Releases a K-Means handle.
///
/// # Safety
/// `model` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn rs_kmeans_free(model: *mut RsKMeans) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Fits fuzzy C-Means on row-major data of shape `n_rows x n_cols` with
/// fuzziness `m` (> 1).
///
/// # Safety
/// `data` must hold `n_rows * n_cols` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_fcm_fit(
    data: *const f64,
    n_rows: usize,
    n_cols: usize,
    c: usize,
    m: f64,
    seed: u64,
    max_iter: usize,
    tol: f64,
    out: *mut *mut RsFcm,
) -> RsStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        if data.is_null() {
            return null_arg("data");
        }
        let rows = to_rows(data, n_rows, n_cols);
        match clustering::fcm(&rows, c, m, seed, max_iter, tol) {
            Ok(model) => {
                *out = Box::into_raw(Box::new(RsFcm { model }));
                RsStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Number of clustered points; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rs_fcm_points(model: *const RsFcm) -> usize {
    if model.is_null() {
        return 0;
    }
    unsafe { (&(*model).model.membership).len() }
}

/// Number of clusters; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rs_fcm_clusters(model: *const RsFcm) -> usize {
    if model.is_null() {
        return 0;
    }
    unsafe { (&(*model).model).c() }
}

/// Whether the fit converged before the iteration cap; false for a null
/// handle.
#[no_mangle]
pub extern "C" fn rs_fcm_converged(model: *const RsFcm) -> bool {
    if model.is_null() {
        return false;
    }
    unsafe { (*model).model.converged }
}

/// Copies the membership matrix row-major into `out` (length
/// [`rs_fcm_points`] * [`rs_fcm_clusters`]).
///
/// # Safety
/// `model` must be a live handle and `out` sized to `points * clusters`.
#[no_mangle]
pub unsafe extern "C" fn rs_fcm_membership(model: *const RsFcm, out: *mut f64) -> RsStatus {
    guard(|| {
        if model.is_null() {
            return null_arg("model");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let mut cursor = out;
        for row in &(*model).model.membership {
            std::ptr::copy_nonoverlapping(row.as_ptr(), cursor, row.len());
            cursor = cursor.add(row.len());
        }
        RsStatus::Ok
    })
}

/// Copies the argmax cluster of each point into `out` (length
/// [`rs_fcm_points`]).
///
/// # Safety
/// `model` must be a live handle and `out` sized to the point count.
#[no_mangle]
pub unsafe extern "C" fn rs_fcm_hard_assignments(
    model: *const RsFcm,
    out: *mut usize,
) -> RsStatus {
    guard(|| {
        if model.is_null() {
            return null_arg("model");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let hard = (&(*model).model).hard_assignments();
        std::ptr::copy_nonoverlapping(hard.as_ptr(), out, hard.len());
        RsStatus::Ok
    })
}

/// Releases a fuzzy C-Means handle.
///
/// # Safety
/// `model` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn rs_fcm_free(model: *mut RsFcm) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Confusion counts and rates of `predicted` against `truth` (both length
/// `len`), treating `positive_class` as the positive label. Undefined rates
/// come back as NaN.
///
/// # Safety
/// The label pointers must hold `len` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_confusion(
    predicted: *const usize,
    truth: *const usize,
    len: usize,
    positive_class: usize,
    out: *mut RsConfusion,
) -> RsStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        if predicted.is_null() {
            return null_arg("predicted");
        }
        if truth.is_null() {
            return null_arg("truth");
        }
        let predicted = std::slice::from_raw_parts(predicted, len);
        let truth = std::slice::from_raw_parts(truth, len);
        match evaluation::confusion(predicted, truth, positive_class) {
            Ok(report) => {
                let or_nan = |rate: Option<f64>| rate.unwrap_or(f64::NAN);
                *out = RsConfusion {
                    true_positives: report.true_positives,
                    false_positives: report.false_positives,
                    true_negatives: report.true_negatives,
                    false_negatives: report.false_negatives,
                    n: report.n,
                    accuracy: report.accuracy,
                    error: report.error,
                    tp_rate: or_nan(report.tp_rate),
                    fn_rate: or_nan(report.fn_rate),
                    tn_rate: or_nan(report.tn_rate),
                    fp_rate: or_nan(report.fp_rate),
                };
                RsStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Maps cluster ids onto class labels (best bijection for equal counts,
/// majority vote otherwise), writes the mapped labels into `out_mapped`
/// (length `len`), and stores the mapped accuracy.
///
/// # Safety
/// The id pointers must hold `len` values; `out_mapped` must have room for
/// `len` values; `out_accuracy` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_map_clusters(
    cluster_ids: *const usize,
    true_classes: *const usize,
    len: usize,
    out_mapped: *mut usize,
    out_accuracy: *mut f64,
) -> RsStatus {
    guard(|| {
        if cluster_ids.is_null() {
            return null_arg("cluster_ids");
        }
        if true_classes.is_null() {
            return null_arg("true_classes");
        }
        if out_mapped.is_null() {
            return null_arg("out_mapped");
        }
        if out_accuracy.is_null() {
            return null_arg("out_accuracy");
        }
        let ids = std::slice::from_raw_parts(cluster_ids, len);
        let classes = std::slice::from_raw_parts(true_classes, len);
        let mapped = (|| {
            let mapping = evaluation::map_clusters_to_classes(ids, classes)?;
            let mapped = mapping.apply(ids)?;
            Ok::<_, Error>((mapping.mapped_accuracy, mapped))
        })();
        match mapped {
            Ok((accuracy, labels)) => {
                std::ptr::copy_nonoverlapping(labels.as_ptr(), out_mapped, labels.len());
                *out_accuracy = accuracy;
                RsStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}
