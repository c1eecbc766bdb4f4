//! C ABI over the `ntnsplit` analyzer.
//!
//! An `NtnAnalyzer` handle owns a geometry, timing and catalog
//! configuration. Every fallible call returns an `NtnStatus`; on failure the
//! message is available from `ntn_last_error()` on the same thread until the
//! next failing call. Strings returned through `char **` are owned by the
//! caller and must be released with `ntn_string_free`.
//!
//! Enumerations cross the boundary as `uint32_t` and are validated here, so
//! an out-of-range value yields `NTN_STATUS_INVALID_ARGUMENT` rather than
//! undefined behaviour.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ntnsplit::cho::{CatalogOptions, TimingConfig};
use ntnsplit::geometry::{link_delays, slant_range, GeometryConfig, LinkDelays};
use ntnsplit::metrics::{
    check_trends, evaluate_cell, run_grid_with_delays, serialize, to_canonical_json, Format,
};
use ntnsplit::split_catalog::{catalog_document, check_feasibility, AntennaCount, FeasibilityQuery, LatencyClass};
use ntnsplit::topology::{Deployment, ProcedureVariant, Scenario, SplitOption};
use ntnsplit::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    UnknownSplit = 4,
    UseCaseUndefined = 5,
    MissingCell = 6,
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtnScenario {
    A = 0,
    B1 = 1,
    B2 = 2,
    C = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtnSplit {
    Lls = 0,
    CuDu = 1,
    GnbOnboard = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtnLatencyClass {
    NonIdeal = 0,
    SubIdeal = 1,
    NearIdeal = 2,
    Ideal = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtnProcedure {
    IntraDu = 0,
    InterDu = 1,
    InterGnbIntraAmf = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtnFormat {
    Json = 0,
    Csv = 1,
    PlotCsv = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NtnLinkDelays {
    pub sl_ms: f64,
    pub fl_ms: f64,
    pub isl_ms: f64,
    pub igsl_ms: f64,
    pub sl_km: f64,
    pub fl_km: f64,
    pub isl_km: f64,
    pub igsl_km: f64,
}

impl From<LinkDelays> for NtnLinkDelays {
    fn from(d: LinkDelays) -> Self {
        Self {
            sl_ms: d.sl_ms,
            fl_ms: d.fl_ms,
            isl_ms: d.isl_ms,
            igsl_ms: d.igsl_ms,
            sl_km: d.sl_km,
            fl_km: d.fl_km,
            isl_km: d.isl_km,
            igsl_km: d.igsl_km,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NtnPhaseDurations {
    pub setup_ms: f64,
    pub buffer_ms: f64,
    pub execution_ms: f64,
    pub total_ms: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NtnLinkCounts {
    pub sl: u32,
    pub fl: u32,
    pub isl: u32,
    pub igsl: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NtnFeasibility {
    pub split_id: u8,
    /// NtnLatencyClass actually applied.
    pub use_case: u32,
    pub separation_km: f64,
    pub budget_km: f64,
    pub margin_km: f64,
    pub feasible: bool,
    pub bw_dl_mbps: f64,
    pub bw_ul_mbps: f64,
}

/// Opaque analyzer handle.
pub struct NtnAnalyzer {
    geometry: GeometryConfig,
    timing: TimingConfig,
    catalog: CatalogOptions,
    reference_delays: bool,
}

impl NtnAnalyzer {
    fn delays(&self) -> Result<LinkDelays, Error> {
        if self.reference_delays {
            Ok(LinkDelays::reference_leo600())
        } else {
            link_delays(&self.geometry)
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> NtnStatus {
    match err {
        Error::Domain(_) => NtnStatus::Domain,
        Error::UnknownSplit(_) => NtnStatus::UnknownSplit,
        Error::UseCaseUndefined { .. } => NtnStatus::UseCaseUndefined,
        Error::MissingCell(_) => NtnStatus::MissingCell,
        Error::InvalidArgument(_) | Error::UnsupportedFormat(_) | Error::Config(_) => NtnStatus::InvalidArgument,
        _ => NtnStatus::Internal,
    }
}

fn fail(status: NtnStatus, msg: impl Into<String>) -> NtnStatus {
    set_last_error(msg.into());
    status
}

/// Runs `body`, mapping errors and panics onto status codes.
fn guard(body: impl FnOnce() -> Result<(), Error>) -> NtnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => NtnStatus::Ok,
        Ok(Err(e)) => fail(status_of(&e), e.to_string()),
        Err(_) => fail(NtnStatus::Internal, "panic inside ntnsplit"),
    }
}

fn scenario_from(v: u32) -> Result<Scenario, Error> {
    Ok(match v {
        0 => Scenario::A,
        1 => Scenario::B1,
        2 => Scenario::B2,
        3 => Scenario::C,
        _ => return Err(Error::InvalidArgument(format!("scenario code {v}"))),
    })
}

fn split_from(v: u32) -> Result<SplitOption, Error> {
    Ok(match v {
        0 => SplitOption::Lls,
        1 => SplitOption::CuDu,
        2 => SplitOption::GnbOnboard,
        _ => return Err(Error::InvalidArgument(format!("split code {v}"))),
    })
}

fn latency_from(v: u32) -> Result<LatencyClass, Error> {
    Ok(match v {
        0 => LatencyClass::NonIdeal,
        1 => LatencyClass::SubIdeal,
        2 => LatencyClass::NearIdeal,
        3 => LatencyClass::Ideal,
        _ => return Err(Error::InvalidArgument(format!("latency class code {v}"))),
    })
}

fn latency_code(c: LatencyClass) -> u32 {
    match c {
        LatencyClass::NonIdeal => NtnLatencyClass::NonIdeal as u32,
        LatencyClass::SubIdeal => NtnLatencyClass::SubIdeal as u32,
        LatencyClass::NearIdeal => NtnLatencyClass::NearIdeal as u32,
        LatencyClass::Ideal => NtnLatencyClass::Ideal as u32,
    }
}

fn procedure_code(p: ProcedureVariant) -> u32 {
    match p {
        ProcedureVariant::IntraDu => NtnProcedure::IntraDu as u32,
        ProcedureVariant::InterDu => NtnProcedure::InterDu as u32,
        ProcedureVariant::InterGnbIntraAmf => NtnProcedure::InterGnbIntraAmf as u32,
    }
}

fn format_from(v: u32) -> Result<Format, Error> {
    Ok(match v {
        0 => Format::Json,
        1 => Format::Csv,
        2 => Format::PlotCsv,
        _ => return Err(Error::UnsupportedFormat(format!("format code {v}"))),
    })
}

/// # Safety
/// `out` must be NULL or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, value: T) {
    if !out.is_null() {
        // SAFETY: caller contract above
        unsafe { out.write(value) };
    }
}

fn into_c_string(bytes: Vec<u8>) -> Result<*mut c_char, Error> {
    CString::new(bytes)
        .map(CString::into_raw)
        .map_err(|_| Error::InvalidArgument("output contains NUL".into()))
}

/// Allocates an analyzer with the reference configuration
/// (600 km, SL 30 deg, FL 10 deg, 20 satellites per plane).
#[no_mangle]
pub extern "C" fn ntn_analyzer_new() -> *mut NtnAnalyzer {
    Box::into_raw(Box::new(NtnAnalyzer {
        geometry: GeometryConfig::default(),
        timing: TimingConfig::default(),
        catalog: CatalogOptions::default(),
        reference_delays: false,
    }))
}

/// # Safety
/// `handle` must be NULL or a pointer from `ntn_analyzer_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ntn_analyzer_free(handle: *mut NtnAnalyzer) {
    if !handle.is_null() {
        // SAFETY: handle came from Box::into_raw in ntn_analyzer_new
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// # Safety
/// `handle` must be a live analyzer.
#[no_mangle]
pub unsafe extern "C" fn ntn_analyzer_set_geometry(
    handle: *mut NtnAnalyzer,
    altitude_km: f64,
    sl_elevation_deg: f64,
    fl_elevation_deg: f64,
    sats_per_plane: u32,
) -> NtnStatus {
    // SAFETY: caller guarantees a live handle or NULL
    let Some(a) = (unsafe { handle.as_mut() }) else {
        return fail(NtnStatus::NullPointer, "analyzer handle is NULL");
    };
    guard(|| {
        let candidate = GeometryConfig {
            altitude_km,
            sl_elevation_deg,
            fl_elevation_deg,
            sats_per_plane,
            ..a.geometry
        };
        candidate.validate()?;
        a.geometry = candidate;
        Ok(())
    })
}

/// # Safety
/// `handle` must be a live analyzer.
#[no_mangle]
pub unsafe extern "C" fn ntn_analyzer_set_timing(
    handle: *mut NtnAnalyzer,
    per_message_processing_ms: f64,
    ssb_acquisition_ms: f64,
    cn_api_total_ms: f64,
    trigger_offset_ms: f64,
    processing_at_relays: bool,
) -> NtnStatus {
    // SAFETY: caller guarantees a live handle or NULL
    let Some(a) = (unsafe { handle.as_mut() }) else {
        return fail(NtnStatus::NullPointer, "analyzer handle is NULL");
    };
    guard(|| {
        let timing = TimingConfig {
            per_message_processing_ms,
            ssb_acquisition_ms,
            cn_api_total_ms,
            trigger_offset_ms,
            processing_at_relays,
        };
        timing.validate()?;
        a.timing = timing;
        Ok(())
    })
}

/// Switch between geometry-derived delays and the published rounded set.
///
/// # Safety
/// `handle` must be a live analyzer.
#[no_mangle]
pub unsafe extern "C" fn ntn_analyzer_use_reference_delays(handle: *mut NtnAnalyzer, enabled: bool) -> NtnStatus {
    // SAFETY: caller guarantees a live handle or NULL
    let Some(a) = (unsafe { handle.as_mut() }) else {
        return fail(NtnStatus::NullPointer, "analyzer handle is NULL");
    };
    a.reference_delays = enabled;
    NtnStatus::Ok
}

/// # Safety
/// `handle` must be a live analyzer; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ntn_analyzer_link_delays(handle: *const NtnAnalyzer, out: *mut NtnLinkDelays) -> NtnStatus {
    // SAFETY: caller guarantees a live handle or NULL
    let Some(a) = (unsafe { handle.as_ref() }) else {
        return fail(NtnStatus::NullPointer, "analyzer handle is NULL");
    };
    if out.is_null() {
        return fail(NtnStatus::NullPointer, "out is NULL");
    }
    guard(|| {
        let d = a.delays()?;
        // SAFETY: out checked non-null, caller guarantees validity
        unsafe { write_out(out, d.into()) };
        Ok(())
    })
}

/// Slant range for the default Earth radius.
///
/// # Safety
/// `out_km` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ntn_slant_range_km(altitude_km: f64, elevation_deg: f64, out_km: *mut f64) -> NtnStatus {
    if out_km.is_null() {
        return fail(NtnStatus::NullPointer, "out_km is NULL");
    }
    guard(|| {
        let cfg = GeometryConfig { altitude_km, ..GeometryConfig::default() };
        let d = slant_range(&cfg, elevation_deg)?;
        // SAFETY: out_km checked non-null
        unsafe { write_out(out_km, d) };
        Ok(())
    })
}

/// Judge one split at `use_case` (an `NtnLatencyClass`) over a fronthaul
/// path of `total_path_km`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ntn_check_feasibility(
    split_id: u8,
    use_case: u32,
    total_path_km: f64,
    antennas: u32,
    beams: u32,
    relax: bool,
    out: *mut NtnFeasibility,
) -> NtnStatus {
    if out.is_null() {
        return fail(NtnStatus::NullPointer, "out is NULL");
    }
    guard(|| {
        let query = FeasibilityQuery {
            split_id,
            use_case: latency_from(use_case)?,
            total_path_km,
            antennas: AntennaCount::try_from(antennas)?,
            beams,
            satellite_gops_capacity: None,
            relax,
        };
        let v = check_feasibility(&query)?;
        let result = NtnFeasibility {
            split_id: v.split_id,
            use_case: latency_code(v.use_case),
            separation_km: v.separation_km,
            budget_km: v.budget_km,
            margin_km: v.margin_km,
            feasible: v.feasible,
            bw_dl_mbps: v.bw_required_mbps.dl,
            bw_ul_mbps: v.bw_required_mbps.ul,
        };
        // SAFETY: out checked non-null
        unsafe { write_out(out, result) };
        Ok(())
    })
}

/// Evaluate one scenario/split cell. Any of the out pointers may be NULL.
///
/// # Safety
/// `handle` must be a live analyzer; non-NULL out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ntn_analyzer_evaluate_cell(
    handle: *const NtnAnalyzer,
    scenario: u32,
    split: u32,
    out_phases: *mut NtnPhaseDurations,
    out_counts: *mut NtnLinkCounts,
    out_procedure: *mut u32,
) -> NtnStatus {
    // SAFETY: caller guarantees a live handle or NULL
    let Some(a) = (unsafe { handle.as_ref() }) else {
        return fail(NtnStatus::NullPointer, "analyzer handle is NULL");
    };
    guard(|| {
        let dep = Deployment::new(scenario_from(scenario)?, split_from(split)?);
        let (cell, _) = evaluate_cell(dep, &a.delays()?, &a.timing, &a.catalog)?;
        // SAFETY: out pointers are NULL or valid per contract
        unsafe {
            write_out(
                out_phases,
                NtnPhaseDurations {
                    setup_ms: cell.setup_ms,
                    buffer_ms: cell.buffer_ms,
                    execution_ms: cell.execution_ms,
                    total_ms: cell.total_ms,
                },
            );
            write_out(
                out_counts,
                NtnLinkCounts {
                    sl: cell.counts.sl,
                    fl: cell.counts.fl,
                    isl: cell.counts.isl,
                    igsl: cell.counts.igsl,
                },
            );
            write_out(out_procedure, procedure_code(cell.procedure));
        }
        Ok(())
    })
}

/// Run the full 12-cell grid and serialize it (`format` is an `NtnFormat`).
/// The returned string must be released with `ntn_string_free`.
///
/// # Safety
/// `handle` must be a live analyzer; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ntn_analyzer_grid(handle: *const NtnAnalyzer, format: u32, out: *mut *mut c_char) -> NtnStatus {
    // SAFETY: caller guarantees a live handle or NULL
    let Some(a) = (unsafe { handle.as_ref() }) else {
        return fail(NtnStatus::NullPointer, "analyzer handle is NULL");
    };
    if out.is_null() {
        return fail(NtnStatus::NullPointer, "out is NULL");
    }
    guard(|| {
        let report = run_grid_with_delays(&a.delays()?, &a.timing, &a.catalog, None)?;
        let s = into_c_string(serialize(&report, format_from(format)?)?)?;
        // SAFETY: out checked non-null
        unsafe { write_out(out, s) };
        Ok(())
    })
}

/// Count the ordering checks passed on the full grid.
///
/// # Safety
/// `handle` must be a live analyzer; non-NULL out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ntn_analyzer_check_trends(
    handle: *const NtnAnalyzer,
    out_passed: *mut u32,
    out_total: *mut u32,
) -> NtnStatus {
    // SAFETY: caller guarantees a live handle or NULL
    let Some(a) = (unsafe { handle.as_ref() }) else {
        return fail(NtnStatus::NullPointer, "analyzer handle is NULL");
    };
    guard(|| {
        let report = run_grid_with_delays(&a.delays()?, &a.timing, &a.catalog, None)?;
        let checks = check_trends(&report)?;
        let passed = checks.iter().filter(|c| c.passed()).count() as u32;
        // SAFETY: out pointers are NULL or valid per contract
        unsafe {
            write_out(out_passed, passed);
            write_out(out_total, checks.len() as u32);
        }
        Ok(())
    })
}

/// The function-split catalog as JSON. Free with `ntn_string_free`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ntn_catalog_json(out: *mut *mut c_char) -> NtnStatus {
    if out.is_null() {
        return fail(NtnStatus::NullPointer, "out is NULL");
    }
    guard(|| {
        let s = into_c_string(to_canonical_json(&catalog_document())?)?;
        // SAFETY: out checked non-null
        unsafe { write_out(out, s) };
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ntn_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: s came from CString::into_raw in this crate
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Last error message on this thread, or NULL. Valid until the next failing
/// call on the same thread.
#[no_mangle]
pub extern "C" fn ntn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn ntn_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}
