//! C ABI over `qconcave`.
//!
//! Objects are opaque handles created by `*_new`/`qc_density_*` constructors
//! and released with the matching `*_free`. Every function returns a
//! [`QcStatus`]; on failure [`qc_last_error_message`] describes the error for
//! the calling thread. Panics never cross the boundary.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use qconcave::bounds::{self, BoundReport, CheckSelection, Winner};
use qconcave::entropies::{self, ExtendedReal};
use qconcave::harness::to_json;
use qconcave::hermitian::HermitianMatrix;
use qconcave::states::{
    from_bloch, random_density, BlochVector, DensityMatrix, MixtureProblem, SamplerConfig,
    HERMITIAN_LOAD_TOLERANCE,
};
use qconcave::Error;

/// Result code of every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    /// Matrix or Bloch vector does not describe a valid state.
    InvalidState = 2,
    DimensionMismatch = 3,
    /// Parameter outside its domain (order, weight, tolerance, rank).
    InvalidArgument = 4,
    /// Quantity undefined for this input, such as Kim's bound near `x = ½`.
    NotApplicable = 5,
    /// The two states coincide.
    Degenerate = 6,
    Panic = 7,
}

/// A validated density matrix.
pub struct QcDensity {
    inner: DensityMatrix,
}

/// Weight `x` with two states of equal dimension.
pub struct QcProblem {
    inner: MixtureProblem,
}

/// The gap, every bound and every checked relation for one problem.
pub struct QcReport {
    inner: BoundReport,
}

/// Scalar fields of a report.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcQuantity {
    Gap = 0,
    /// Kim's bound; `NotApplicable` near `x = ½`.
    Lowbd0 = 1,
    /// `½ x(1−x) ‖ρ1 − ρ2‖₁²`.
    Lowbd1 = 2,
    /// Carlen–Lieb.
    Lowbd2 = 3,
    BlockPinsker = 4,
    /// `h(x)`.
    Upbd = 5,
    RfzBures = 6,
    RfzTrace = 7,
    Audenaert = 8,
    MaxAbsSlack = 9,
}

/// Which checked relations count toward `qc_report_checks_ok`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcChecks {
    All = 0,
    /// All but the cited Kim and Bures bounds.
    Core = 1,
    /// `lowbd1 ≤ gap ≤ audenaert`.
    Theorem1 = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcWinner {
    Lowbd0 = 0,
    Lowbd1 = 1,
    Lowbd2 = 2,
    Tie = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(QcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DimensionMismatch(..) | Error::Dimension { .. } => QcStatus::DimensionMismatch,
            Error::Domain(_) => QcStatus::InvalidArgument,
            Error::IndeterminateAtHalf(_) => QcStatus::NotApplicable,
            Error::DegenerateProblem(_) => QcStatus::Degenerate,
            _ => QcStatus::InvalidState,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QcStatus::NullPointer, format!("{what} is null"))
}

fn guard<F>(f: F) -> QcStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {message}"));
            QcStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Boxes `value` into `*out`; nothing is allocated when `out` is null.
unsafe fn write_boxed<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

fn json_string(json: String) -> Result<*mut c_char, Failure> {
    CString::new(json)
        .map(CString::into_raw)
        .map_err(|_| Failure(QcStatus::Panic, "JSON contained a nul byte".into()))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Qubit state `(I + w·σ)/2` from `w[0..3]`.
#[no_mangle]
pub unsafe extern "C" fn qc_density_from_bloch(w: *const f64, out: *mut *mut QcDensity) -> QcStatus {
    guard(|| {
        if w.is_null() {
            return Err(null("w"));
        }
        let v = std::slice::from_raw_parts(w, 3);
        let rho = from_bloch(BlochVector::new([v[0], v[1], v[2]])?);
        write_boxed(out, QcDensity { inner: rho })
    })
}

/// State from row-major real and imaginary parts, `dim * dim` entries each.
/// `im` may be null for a real matrix.
#[no_mangle]
pub unsafe extern "C" fn qc_density_from_parts(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QcDensity,
) -> QcStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        if dim == 0 {
            return Err(Error::EmptyMatrix.into());
        }
        let n = dim.checked_mul(dim).ok_or_else(|| Failure(QcStatus::InvalidArgument, "dim too large".into()))?;
        let re = std::slice::from_raw_parts(re, n);
        let data = if im.is_null() {
            re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, n);
            re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
        };
        let h = HermitianMatrix::new_checked(dim, data, HERMITIAN_LOAD_TOLERANCE)?;
        let rho = DensityMatrix::new(h)?;
        write_boxed(out, QcDensity { inner: rho })
    })
}

/// Seeded random state of the given rank.
#[no_mangle]
pub unsafe extern "C" fn qc_density_random(
    dim: usize,
    rank: usize,
    seed: u64,
    out: *mut *mut QcDensity,
) -> QcStatus {
    guard(|| {
        let rho = random_density(SamplerConfig::new(dim, rank, seed)?);
        write_boxed(out, QcDensity { inner: rho })
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_density_free(rho: *mut QcDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

#[no_mangle]
pub unsafe extern "C" fn qc_density_dim(rho: *const QcDensity, out: *mut usize) -> QcStatus {
    guard(|| write(out, borrow(rho, "rho")?.inner.dim(), "out"))
}

/// Ascending eigenvalues into `out[0..len]`; `len` must be at least the dimension.
#[no_mangle]
pub unsafe extern "C" fn qc_density_eigenvalues(
    rho: *const QcDensity,
    out: *mut f64,
    len: usize,
) -> QcStatus {
    guard(|| {
        let values = borrow(rho, "rho")?.inner.eigenvalues();
        if out.is_null() {
            return Err(null("out"));
        }
        if len < values.len() {
            return Err(Failure(
                QcStatus::InvalidArgument,
                format!("buffer holds {len} values, need {}", values.len()),
            ));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
        Ok(())
    })
}

fn extended(v: ExtendedReal) -> f64 {
    v.value()
}

unsafe fn pair<'a>(
    rho: *const QcDensity,
    gamma: *const QcDensity,
) -> Result<(&'a DensityMatrix, &'a DensityMatrix), Failure> {
    let (r, g) = (&borrow(rho, "rho")?.inner, &borrow(gamma, "gamma")?.inner);
    if r.dim() != g.dim() {
        return Err(Error::DimensionMismatch(r.dim(), g.dim()).into());
    }
    Ok((r, g))
}

#[no_mangle]
pub unsafe extern "C" fn qc_von_neumann(rho: *const QcDensity, out: *mut f64) -> QcStatus {
    guard(|| write(out, entropies::von_neumann(&borrow(rho, "rho")?.inner), "out"))
}

/// `H(ρ, γ)`; `+inf` when the support of `ρ` leaves that of `γ`.
#[no_mangle]
pub unsafe extern "C" fn qc_relative_entropy(
    rho: *const QcDensity,
    gamma: *const QcDensity,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let (r, g) = pair(rho, gamma)?;
        write(out, extended(entropies::relative_entropy(r, g)), "out")
    })
}

/// Standard (Petz) Renyi divergence of the given order; may be `+inf`.
#[no_mangle]
pub unsafe extern "C" fn qc_renyi(
    order: f64,
    rho: *const QcDensity,
    gamma: *const QcDensity,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let (r, g) = pair(rho, gamma)?;
        write(out, extended(entropies::renyi(order, r, g)?), "out")
    })
}

/// Sandwiched Renyi divergence, order at least ½; may be `+inf`.
#[no_mangle]
pub unsafe extern "C" fn qc_sandwiched(
    order: f64,
    rho: *const QcDensity,
    gamma: *const QcDensity,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let (r, g) = pair(rho, gamma)?;
        write(out, extended(entropies::sandwiched(order, r, g)?), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_max_relative(
    rho: *const QcDensity,
    gamma: *const QcDensity,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let (r, g) = pair(rho, gamma)?;
        write(out, extended(entropies::max_relative(r, g)), "out")
    })
}

/// `Tr(√ρ γ √ρ)^{1/2}`.
#[no_mangle]
pub unsafe extern "C" fn qc_fidelity(
    rho: *const QcDensity,
    gamma: *const QcDensity,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let (r, g) = pair(rho, gamma)?;
        write(out, entropies::fidelity(r, g), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_bures_sq(
    rho: *const QcDensity,
    gamma: *const QcDensity,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let (r, g) = pair(rho, gamma)?;
        write(out, entropies::bures_sq(r, g), "out")
    })
}

/// `‖ρ − γ‖₁`, without the factor ½.
#[no_mangle]
pub unsafe extern "C" fn qc_trace_distance(
    rho: *const QcDensity,
    gamma: *const QcDensity,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let (r, g) = pair(rho, gamma)?;
        write(out, entropies::trace_distance(r, g), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_binary_entropy(x: f64, out: *mut f64) -> QcStatus {
    guard(|| write(out, entropies::binary_entropy(x)?, "out"))
}

/// Copies both states; the caller keeps ownership of `rho1` and `rho2`.
#[no_mangle]
pub unsafe extern "C" fn qc_problem_new(
    x: f64,
    rho1: *const QcDensity,
    rho2: *const QcDensity,
    out: *mut *mut QcProblem,
) -> QcStatus {
    guard(|| {
        let (r1, r2) = (&borrow(rho1, "rho1")?.inner, &borrow(rho2, "rho2")?.inner);
        let p = MixtureProblem::new(x, r1.clone(), r2.clone())?;
        write_boxed(out, QcProblem { inner: p })
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_problem_free(problem: *mut QcProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Full report with the given slack tolerance on every checked relation.
#[no_mangle]
pub unsafe extern "C" fn qc_report_new(
    problem: *const QcProblem,
    tolerance: f64,
    out: *mut *mut QcReport,
) -> QcStatus {
    guard(|| {
        let p = &borrow(problem, "problem")?.inner;
        if !(tolerance >= 0.0) || !tolerance.is_finite() {
            return Err(Failure(
                QcStatus::InvalidArgument,
                format!("tolerance must be finite and nonnegative, got {tolerance}"),
            ));
        }
        let report = bounds::full_report_with_tolerance(p, tolerance);
        write_boxed(out, QcReport { inner: report })
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_report_free(report: *mut QcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

#[no_mangle]
pub unsafe extern "C" fn qc_report_get(
    report: *const QcReport,
    quantity: QcQuantity,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let r = &borrow(report, "report")?.inner;
        let value = match quantity {
            QcQuantity::Gap => r.gap,
            QcQuantity::Lowbd0 => match r.lower.kim {
                Some(k) => k.value(),
                None => {
                    return Err(Failure(
                        QcStatus::NotApplicable,
                        format!("Kim bound is not evaluated at x = {}", r.x),
                    ))
                }
            },
            QcQuantity::Lowbd1 => r.lower.pinsker,
            QcQuantity::Lowbd2 => r.lower.carlen_lieb,
            QcQuantity::BlockPinsker => r.lower.block_pinsker,
            QcQuantity::Upbd => r.upper.binary_entropy,
            QcQuantity::RfzBures => r.upper.rfz_bures,
            QcQuantity::RfzTrace => r.upper.rfz_trace,
            QcQuantity::Audenaert => r.upper.audenaert,
            QcQuantity::MaxAbsSlack => r.max_abs_slack(),
        };
        write(out, value, "out")
    })
}

/// Whether every relation in the selected group holds.
#[no_mangle]
pub unsafe extern "C" fn qc_report_checks_ok(
    report: *const QcReport,
    checks: QcChecks,
    out: *mut bool,
) -> QcStatus {
    guard(|| {
        let selection = match checks {
            QcChecks::All => CheckSelection::All,
            QcChecks::Core => CheckSelection::Core,
            QcChecks::Theorem1 => CheckSelection::Theorem1,
        };
        write(out, borrow(report, "report")?.inner.ok_for(selection), "out")
    })
}

/// `lowbd1` against `lowbd2`.
#[no_mangle]
pub unsafe extern "C" fn qc_report_winner(report: *const QcReport, out: *mut QcWinner) -> QcStatus {
    guard(|| {
        let w = match borrow(report, "report")?.inner.comparison.winner {
            Winner::Lowbd0 => QcWinner::Lowbd0,
            Winner::Lowbd1 => QcWinner::Lowbd1,
            Winner::Lowbd2 => QcWinner::Lowbd2,
            Winner::Tie => QcWinner::Tie,
        };
        write(out, w, "out")
    })
}

/// The report as JSON; release with [`qc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qc_report_to_json(report: *const QcReport, out: *mut *mut c_char) -> QcStatus {
    guard(|| {
        let r = &borrow(report, "report")?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, json_string(to_json(r))?, "out")
    })
}

/// Critical Renyi orders as JSON; release with [`qc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qc_critical_params_json(
    problem: *const QcProblem,
    tolerance: f64,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        let p = &borrow(problem, "problem")?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let params = bounds::find_critical_params(p, tolerance)?;
        write(out, json_string(to_json(&params))?, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
