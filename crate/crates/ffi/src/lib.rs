//! C ABI over `ptcoupler`.
//!
//! Every fallible call returns a [`PtcStatus`]; on failure a message is kept
//! per thread and can be read with [`ptc_last_error`]. Handles
//! ([`PtcCoupler`], [`PtcTable`]) are opaque and must be released with their
//! `_free` function. Panics never cross the boundary; they surface as
//! `PTC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ptcoupler::coupler::{hamiltonian, propagator};
use ptcoupler::experiments::{
    run_figure, write_table, ConfigFile, FigureId, Format, SweepSpec, SweepTable,
};
use ptcoupler::fock::{
    interference_term, two_photon_probs_dist, two_photon_probs_indist, visibility,
};
use ptcoupler::linalg::{expm2, permanent};
use ptcoupler::{Complex, CouplerParams, Error, Mat2, SquareMatrix, SystemKind};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Unphysical = 4,
    DegenerateNormalization = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PtcComplex {
    pub re: f64,
    pub im: f64,
}

/// Row-major 2×2 complex matrix.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PtcMat2 {
    pub a11: PtcComplex,
    pub a12: PtcComplex,
    pub a21: PtcComplex,
    pub a22: PtcComplex,
}

/// Output probabilities for one photon entering each waveguide.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PtcProbs {
    pub p20: f64,
    pub p11: f64,
    pub p02: f64,
}

/// A coupler geometry together with its configuration (bare or sandwiched).
pub struct PtcCoupler {
    params: CouplerParams,
    kind: SystemKind,
}

/// A sweep result. Column names are kept as C strings owned by the table.
pub struct PtcTable {
    table: SweepTable,
    names: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PtcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => PtcStatus::Domain,
            Error::Unphysical { .. } => PtcStatus::Unphysical,
            Error::DegenerateNormalization => PtcStatus::DegenerateNormalization,
            Error::Config(_) => PtcStatus::InvalidArgument,
            Error::Io { .. } => PtcStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: String) {
    // interior NULs cannot be represented in a C string
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PtcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PtcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            PtcStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PtcStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PtcStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

fn to_c(z: Complex) -> PtcComplex {
    PtcComplex { re: z.re, im: z.im }
}

fn from_c(z: PtcComplex) -> Complex {
    Complex::new(z.re, z.im)
}

impl From<Mat2> for PtcMat2 {
    fn from(m: Mat2) -> Self {
        PtcMat2 {
            a11: to_c(m.a11),
            a12: to_c(m.a12),
            a21: to_c(m.a21),
            a22: to_c(m.a22),
        }
    }
}

impl From<PtcMat2> for Mat2 {
    fn from(m: PtcMat2) -> Self {
        Mat2::new(from_c(m.a11), from_c(m.a12), from_c(m.a21), from_c(m.a22))
    }
}

fn kind_of(sandwiched: c_int) -> SystemKind {
    if sandwiched != 0 {
        SystemKind::Sandwiched
    } else {
        SystemKind::Bare
    }
}

/// Message describing the last failure on this thread, or null if the last
/// call succeeded. Valid until the next `ptc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ptc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ptc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a coupler. `kappa` and `gamma` in 1/cm, `length` in cm.
///
/// # Safety
/// `out_coupler` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_coupler_new(
    kappa: f64,
    gamma: f64,
    length: f64,
    sandwiched: c_int,
    out_coupler: *mut *mut PtcCoupler,
) -> PtcStatus {
    guard(|| {
        let slot = out(out_coupler, "out_coupler")?;
        let params = CouplerParams::new(kappa, gamma, length)?;
        *slot = Box::into_raw(Box::new(PtcCoupler {
            params,
            kind: kind_of(sandwiched),
        }));
        Ok(())
    })
}

/// Creates a coupler whose length makes the lossless device an exact 50/50
/// splitter.
///
/// # Safety
/// `out_coupler` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_coupler_new_idealized(
    kappa: f64,
    gamma: f64,
    sandwiched: c_int,
    out_coupler: *mut *mut PtcCoupler,
) -> PtcStatus {
    guard(|| {
        let slot = out(out_coupler, "out_coupler")?;
        let params = CouplerParams::idealized(kappa, gamma)?;
        *slot = Box::into_raw(Box::new(PtcCoupler {
            params,
            kind: kind_of(sandwiched),
        }));
        Ok(())
    })
}

/// # Safety
/// `coupler` must be null or a handle from `ptc_coupler_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptc_coupler_free(coupler: *mut PtcCoupler) {
    if !coupler.is_null() {
        drop(Box::from_raw(coupler));
    }
}

/// Effective length in cm (differs from the requested one for idealized
/// couplers).
///
/// # Safety
/// `coupler` must be a live handle; `out_length` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_coupler_length(
    coupler: *const PtcCoupler,
    out_length: *mut f64,
) -> PtcStatus {
    guard(|| {
        *out(out_length, "out_length")? = deref(coupler, "coupler")?.params.length();
        Ok(())
    })
}

/// # Safety
/// `coupler` must be a live handle; `out_h` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_coupler_hamiltonian(
    coupler: *const PtcCoupler,
    out_h: *mut PtcMat2,
) -> PtcStatus {
    guard(|| {
        let c = deref(coupler, "coupler")?;
        *out(out_h, "out_h")? = hamiltonian(&c.params, c.kind).into();
        Ok(())
    })
}

/// `U = exp(-iHz)`.
///
/// # Safety
/// `coupler` must be a live handle; `out_u` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_coupler_propagator(
    coupler: *const PtcCoupler,
    out_u: *mut PtcMat2,
) -> PtcStatus {
    guard(|| {
        let c = deref(coupler, "coupler")?;
        *out(out_u, "out_u")? = propagator(&c.params, c.kind).into();
        Ok(())
    })
}

/// Post-selected two-photon output probabilities for input |1,1>.
///
/// # Safety
/// `coupler` must be a live handle; `out_probs` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_coupler_probs(
    coupler: *const PtcCoupler,
    distinguishable: c_int,
    out_probs: *mut PtcProbs,
) -> PtcStatus {
    guard(|| {
        let c = deref(coupler, "coupler")?;
        let slot = out(out_probs, "out_probs")?;
        let u = propagator(&c.params, c.kind);
        let p = if distinguishable != 0 {
            two_photon_probs_dist(&u)?
        } else {
            two_photon_probs_indist(&u)?
        };
        *slot = PtcProbs {
            p20: p.p20,
            p11: p.p11,
            p02: p.p02,
        };
        Ok(())
    })
}

/// Interference term `J`; `p11_indist = p11_dist + J`.
///
/// # Safety
/// `coupler` must be a live handle; `out_j` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_coupler_interference(
    coupler: *const PtcCoupler,
    out_j: *mut f64,
) -> PtcStatus {
    guard(|| {
        let c = deref(coupler, "coupler")?;
        let slot = out(out_j, "out_j")?;
        *slot = interference_term(&propagator(&c.params, c.kind))?;
        Ok(())
    })
}

/// Zero-delay HOM visibility; positive for a dip, negative for a peak.
///
/// # Safety
/// `coupler` must be a live handle; `out_v` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_coupler_visibility(
    coupler: *const PtcCoupler,
    v_max: f64,
    out_v: *mut f64,
) -> PtcStatus {
    guard(|| {
        let c = deref(coupler, "coupler")?;
        let slot = out(out_v, "out_v")?;
        if !(0.0..=1.0).contains(&v_max) {
            return Err(Failure(
                PtcStatus::Domain,
                format!("v_max must lie in [0, 1], got {v_max}"),
            ));
        }
        *slot = visibility(&propagator(&c.params, c.kind), v_max)?;
        Ok(())
    })
}

/// `exp(s·M)`, exact also for defective `M`.
///
/// # Safety
/// `m` must be readable and `out_e` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_expm2(m: *const PtcMat2, s: f64, out_e: *mut PtcMat2) -> PtcStatus {
    guard(|| {
        let m = *deref(m, "m")?;
        let slot = out(out_e, "out_e")?;
        *slot = expm2(&m.into(), s)?.into();
        Ok(())
    })
}

/// Permanent of the `n`×`n` row-major matrix at `data`.
///
/// # Safety
/// `data` must point to `n*n` readable elements; `out_perm` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_permanent(
    data: *const PtcComplex,
    n: usize,
    out_perm: *mut PtcComplex,
) -> PtcStatus {
    guard(|| {
        let slot = out(out_perm, "out_perm")?;
        let entries: Vec<Complex> = if n == 0 {
            Vec::new()
        } else {
            if data.is_null() {
                return Err(null("data"));
            }
            let len = n.checked_mul(n).ok_or_else(|| {
                Failure(
                    PtcStatus::InvalidArgument,
                    format!("matrix size {n} overflows"),
                )
            })?;
            std::slice::from_raw_parts(data, len)
                .iter()
                .map(|z| from_c(*z))
                .collect()
        };
        let m = SquareMatrix::from_row_major(entries)?;
        *slot = to_c(permanent(&m)?);
        Ok(())
    })
}

/// Runs one figure sweep. `figure` is one of `fig2b`, `fig3bcd`, `fig3e`,
/// `fig4b`, `fig4c`; `config_path` may be null for the defaults.
///
/// # Safety
/// `figure` must be a NUL-terminated string, `config_path` null or one, and
/// `out_table` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_figure_run(
    figure: *const c_char,
    config_path: *const c_char,
    out_table: *mut *mut PtcTable,
) -> PtcStatus {
    guard(|| {
        let slot = out(out_table, "out_table")?;
        let figure: FigureId = text(figure, "figure")?.parse()?;
        let mut spec = SweepSpec::for_figure(figure);
        if !config_path.is_null() {
            let cfg = ConfigFile::load(Path::new(text(config_path, "config_path")?))?;
            spec.apply_config(&cfg)?;
        }
        spec.validate()?;
        let table = run_figure(&spec)?;
        let names = table
            .columns()
            .iter()
            .map(|c| CString::new(c.name.as_str()).expect("column names have no NUL"))
            .collect();
        *slot = Box::into_raw(Box::new(PtcTable { table, names }));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle from `ptc_figure_run` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptc_table_free(table: *mut PtcTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of rows, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptc_table_nrows(table: *const PtcTable) -> usize {
    table.as_ref().map_or(0, |t| t.table.nrows())
}

/// Number of columns, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptc_table_ncols(table: *const PtcTable) -> usize {
    table.as_ref().map_or(0, |t| t.table.columns().len())
}

/// Name of column `index`. The string is owned by the table.
///
/// # Safety
/// `table` must be a live handle and `out_name` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_table_column_name(
    table: *const PtcTable,
    index: usize,
    out_name: *mut *const c_char,
) -> PtcStatus {
    guard(|| {
        let t = deref(table, "table")?;
        let slot = out(out_name, "out_name")?;
        let name = t
            .names
            .get(index)
            .ok_or_else(|| out_of_range(index, t.names.len()))?;
        *slot = name.as_ptr();
        Ok(())
    })
}

/// Borrowed view of column `index`: `*out_len` values at `*out_data`, owned
/// by the table.
///
/// # Safety
/// `table` must be a live handle; `out_data` and `out_len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptc_table_column(
    table: *const PtcTable,
    index: usize,
    out_data: *mut *const f64,
    out_len: *mut usize,
) -> PtcStatus {
    guard(|| {
        let t = deref(table, "table")?;
        let (data, len) = (out(out_data, "out_data")?, out(out_len, "out_len")?);
        let cols = t.table.columns();
        let col = cols
            .get(index)
            .ok_or_else(|| out_of_range(index, cols.len()))?;
        *data = col.values.as_ptr();
        *len = col.values.len();
        Ok(())
    })
}

/// Writes the table as CSV (`json == 0`) or JSON.
///
/// # Safety
/// `table` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ptc_table_write(
    table: *const PtcTable,
    path: *const c_char,
    json: c_int,
) -> PtcStatus {
    guard(|| {
        let t = deref(table, "table")?;
        let path = Path::new(text(path, "path")?);
        let format = if json != 0 { Format::Json } else { Format::Csv };
        write_table(&t.table, format, path)?;
        Ok(())
    })
}

fn out_of_range(index: usize, len: usize) -> Failure {
    Failure(
        PtcStatus::InvalidArgument,
        format!("column {index} out of range ({len} columns)"),
    )
}
