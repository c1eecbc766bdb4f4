use std::ffi::{c_char, CStr};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ntnsplit_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { ntn_string_free(p) };
    s
}

fn last_error() -> String {
    let p = ntn_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Handle(*mut NtnAnalyzer);

impl Handle {
    fn new() -> Self {
        Handle(ntn_analyzer_new())
    }
}

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { ntn_analyzer_free(self.0) };
    }
}

#[test]
fn reference_anchor_cells() {
    let h = Handle::new();
    assert_eq!(unsafe { ntn_analyzer_use_reference_delays(h.0, true) }, NtnStatus::Ok);
    let mut p = NtnPhaseDurations::default();
    let mut c = NtnLinkCounts::default();
    let mut proc_ = u32::MAX;
    let st = unsafe {
        ntn_analyzer_evaluate_cell(h.0, NtnScenario::A as u32, NtnSplit::GnbOnboard as u32, &mut p, &mut c, &mut proc_)
    };
    assert_eq!(st, NtnStatus::Ok);
    assert!((p.buffer_ms - 38.36).abs() < 0.01);
    assert!((p.total_ms - 47.54).abs() < 0.01);
    assert_eq!(proc_, NtnProcedure::IntraDu as u32);
    assert_eq!(c.fl, 0);

    let st = unsafe {
        ntn_analyzer_evaluate_cell(h.0, NtnScenario::A as u32, NtnSplit::Lls as u32, &mut p, ptr::null_mut(), ptr::null_mut())
    };
    assert_eq!(st, NtnStatus::Ok);
    assert!((p.buffer_ms - 64.16).abs() < 0.01);
}

#[test]
fn link_delays_follow_geometry() {
    let h = Handle::new();
    let mut d = NtnLinkDelays::default();
    assert_eq!(unsafe { ntn_analyzer_link_delays(h.0, &mut d) }, NtnStatus::Ok);
    assert!((d.sl_ms / 3.59 - 1.0).abs() < 0.01);
    assert!((d.fl_ms / 6.45 - 1.0).abs() < 0.01);

    assert_eq!(unsafe { ntn_analyzer_set_geometry(h.0, 1200.0, 30.0, 10.0, 20) }, NtnStatus::Ok);
    let mut higher = NtnLinkDelays::default();
    assert_eq!(unsafe { ntn_analyzer_link_delays(h.0, &mut higher) }, NtnStatus::Ok);
    assert!(higher.sl_ms > d.sl_ms);

    assert_eq!(unsafe { ntn_analyzer_use_reference_delays(h.0, true) }, NtnStatus::Ok);
    assert_eq!(unsafe { ntn_analyzer_link_delays(h.0, &mut d) }, NtnStatus::Ok);
    assert_eq!(d.igsl_ms, 7.99);
}

#[test]
fn invalid_geometry_keeps_previous_state() {
    let h = Handle::new();
    let st = unsafe { ntn_analyzer_set_geometry(h.0, -5.0, 30.0, 10.0, 20) };
    assert_eq!(st, NtnStatus::Domain);
    assert!(!last_error().is_empty());
    let mut d = NtnLinkDelays::default();
    assert_eq!(unsafe { ntn_analyzer_link_delays(h.0, &mut d) }, NtnStatus::Ok);
    assert!((d.sl_ms / 3.59 - 1.0).abs() < 0.01);
}

#[test]
fn trend_checks_pass_by_default() {
    let h = Handle::new();
    let (mut passed, mut total) = (0u32, 0u32);
    assert_eq!(unsafe { ntn_analyzer_check_trends(h.0, &mut passed, &mut total) }, NtnStatus::Ok);
    assert!(total > 0);
    assert_eq!(passed, total);
}

#[test]
fn grid_serializations() {
    let h = Handle::new();
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { ntn_analyzer_grid(h.0, NtnFormat::Csv as u32, &mut out) }, NtnStatus::Ok);
    let csv = take_string(out);
    assert_eq!(csv.lines().count(), 13);

    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { ntn_analyzer_grid(h.0, NtnFormat::Json as u32, &mut out) }, NtnStatus::Ok);
    let json = take_string(out);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 12);

    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { ntn_analyzer_grid(h.0, 9, &mut out) }, NtnStatus::InvalidArgument);
    assert!(out.is_null());
}

#[test]
fn catalog_export() {
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { ntn_catalog_json(&mut out) }, NtnStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["splits"].as_array().unwrap().len(), 10);
}

#[test]
fn feasibility_examples() {
    let mut f = NtnFeasibility::default();
    let st = unsafe { ntn_check_feasibility(3, NtnLatencyClass::NonIdeal as u32, 1935.0, 2, 1, false, &mut f) };
    assert_eq!(st, NtnStatus::Ok);
    assert!(f.feasible);
    assert!((f.margin_km - 7065.0).abs() < 1e-9);

    let st = unsafe { ntn_check_feasibility(10, NtnLatencyClass::Ideal as u32, 600.0, 2, 1, false, &mut f) };
    assert_eq!(st, NtnStatus::Ok);
    assert!(!f.feasible);
    assert!((f.margin_km + 525.0).abs() < 1e-9);
}

#[test]
fn error_codes() {
    let mut f = NtnFeasibility::default();
    let st = unsafe { ntn_check_feasibility(0, NtnLatencyClass::Ideal as u32, 1.0, 2, 1, false, &mut f) };
    assert_eq!(st, NtnStatus::UnknownSplit);
    let st = unsafe { ntn_check_feasibility(1, NtnLatencyClass::Ideal as u32, 1.0, 2, 1, false, &mut f) };
    assert_eq!(st, NtnStatus::UseCaseUndefined);
    let st = unsafe { ntn_check_feasibility(1, 8, 1.0, 2, 1, false, &mut f) };
    assert_eq!(st, NtnStatus::InvalidArgument);
    let st = unsafe { ntn_check_feasibility(1, 0, 1.0, 3, 1, false, &mut f) };
    assert_eq!(st, NtnStatus::InvalidArgument);
    let st = unsafe { ntn_check_feasibility(1, 0, 1.0, 2, 1, false, ptr::null_mut()) };
    assert_eq!(st, NtnStatus::NullPointer);

    let st = unsafe { ntn_analyzer_link_delays(ptr::null(), &mut NtnLinkDelays::default()) };
    assert_eq!(st, NtnStatus::NullPointer);
    assert!(last_error().contains("NULL"));
    unsafe { ntn_analyzer_free(ptr::null_mut()) };
    unsafe { ntn_string_free(ptr::null_mut()) };
}

#[test]
fn slant_range_entry_point() {
    let mut km = 0.0;
    assert_eq!(unsafe { ntn_slant_range_km(600.0, 90.0, &mut km) }, NtnStatus::Ok);
    assert_eq!(km, 600.0);
    assert_eq!(unsafe { ntn_slant_range_km(600.0, 120.0, &mut km) }, NtnStatus::Domain);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ntn_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header_and_static_lib() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = profile_dir().join("libntnsplit_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let bin = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ntnsplit_c_smoke");
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(crate_dir.join("tests/c_smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("c smoke ok"));
}

fn which_cc() -> Result<String, ()> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_owned());
    match Command::new(&cc).arg("--version").output() {
        Ok(o) if o.status.success() => Ok(cc),
        _ => Err(()),
    }
}
