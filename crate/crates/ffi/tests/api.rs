use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use toric_diagonal_ffi::*;

const P1: &str = r#"{"dim":1,"rays":[[1],[-1]],"max_cones":[[0],[1]]}"#;
const BLP2: &str = r#"{"dim":2,"rays":[[1,0],[1,1],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,3],[3,0]]}"#;
const DOUBLE: &str =
    r#"{"dim":2,"rays":[[1,0],[2,1],[1,1],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,3],[3,4],[4,0]]}"#;

fn fan(json: &str) -> *mut TdFan {
    let s = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { td_fan_from_json(s.as_ptr(), &mut out) }, TdStatus::Ok);
    out
}

fn pipeline(f: *const TdFan, eps: Option<&str>, group: Option<&str>) -> (TdStatus, *mut TdPipeline) {
    let eps = eps.map(|e| CString::new(e).unwrap());
    let group = group.map(|g| CString::new(g).unwrap());
    let mut out = ptr::null_mut();
    let s = unsafe {
        td_pipeline_new(
            f,
            eps.as_ref().map_or(ptr::null(), |e| e.as_ptr()),
            group.as_ref().map_or(ptr::null(), |g| g.as_ptr()),
            0,
            &mut out,
        )
    };
    (s, out)
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { td_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(td_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn p1_mod_six() {
    let f = fan(P1);
    let (s, p) = pipeline(f, None, Some("6"));
    assert_eq!(s, TdStatus::Ok);
    let mut buf = [0usize; 2];
    let mut len = 0;
    assert_eq!(unsafe { td_pipeline_f_vector(p, buf.as_mut_ptr(), 2, &mut len) }, TdStatus::Ok);
    assert_eq!(buf, [6, 6]);
    assert_eq!(unsafe { td_pipeline_f_vector(p, buf.as_mut_ptr(), 1, &mut len) }, TdStatus::BufferTooSmall);
    assert_eq!(len, 2);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { td_pipeline_resolution_json(p, &mut out) }, TdStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(json["ranks"], serde_json::json!([6, 6]));
    unsafe {
        td_pipeline_free(p);
        td_fan_free(f);
    }
}

#[test]
fn blp2_cokernel() {
    let f = fan(BLP2);
    let (s, p) = pipeline(f, Some("1/100,0,0,1/100"), None);
    assert_eq!(s, TdStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { td_pipeline_cokernel_json(p, 16, &mut out) }, TdStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(json["extra_monomials"][0]["display"], "y2/x2");
    let (mut exact, mut resolves) = (false, true);
    assert_eq!(unsafe { td_pipeline_exactness(p, &mut exact, &mut resolves) }, TdStatus::Ok);
    assert!(exact);
    unsafe {
        td_pipeline_free(p);
        td_fan_free(f);
    }
}

#[test]
fn errors_are_reported() {
    let f = fan(DOUBLE);
    let mut uni = true;
    assert_eq!(unsafe { td_fan_is_unimodular(f, &mut uni) }, TdStatus::Ok);
    assert!(!uni);
    let (s, p) = pipeline(f, None, None);
    assert_eq!(s, TdStatus::InvalidInput);
    assert!(p.is_null());
    assert!(last_error().starts_with("degenerate_arrangement"));
    let (s, _) = pipeline(f, Some("1/2,x"), None);
    assert_eq!(s, TdStatus::InvalidInput);
    assert_eq!(unsafe { td_fan_from_json(ptr::null(), &mut ptr::null_mut()) }, TdStatus::NullPointer);
    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { td_fan_from_json(bad.as_ptr(), &mut ptr::null_mut()) }, TdStatus::InvalidInput);
    unsafe {
        td_fan_free(f);
        td_fan_free(ptr::null_mut());
        td_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/toric_diagonal.h")).unwrap();
    for name in ["td_fan_from_json", "td_pipeline_new", "td_pipeline_exactness", "td_string_free", "TD_STATUS_PANIC"] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib_dir = deps.parent().unwrap().to_path_buf();
    if !lib_dir.join("libtoric_diagonal_ffi.a").exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("td_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(lib_dir.join("libtoric_diagonal_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
