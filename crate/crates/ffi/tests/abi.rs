use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use fano_delta_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn text(p: *const std::ffi::c_char) -> String {
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

#[test]
fn bundle_blowup_value() {
    let (r, d) = (c("2"), c("1"));
    let mut res = ptr::null_mut();
    unsafe {
        assert_eq!(fd_bundle_delta(1, r.as_ptr(), d.as_ptr(), ptr::null(), ptr::null(), &mut res), FdStatus::Ok);
        assert_eq!(text(fd_delta_result_value(res)), "6/7");
        assert_eq!(fd_delta_result_minimizers(res), FD_MIN_V0);
        assert!(!fd_delta_result_lower_bound_only(res));
        assert_eq!(fd_delta_result_verdict(res), FD_VERDICT_NONE);
        let json: serde_json::Value = serde_json::from_str(&text(fd_delta_result_json(res))).unwrap();
        assert_eq!(json["schema"], "1");
        assert_eq!(json["value"], "6/7");
        let copy = fd_delta_result_json_copy(res);
        assert_eq!(text(copy), text(fd_delta_result_json(res)));
        fd_string_free(copy);
        let mut v = ptr::null_mut();
        assert_eq!(fd_delta_result_value_rational(res, &mut v), FdStatus::Ok);
        assert!((fd_rational_to_double(v) - 6.0 / 7.0).abs() < 1e-15);
        fd_rational_free(v);
        fd_delta_result_free(res);
    }
}

#[test]
fn cone_examples_and_flags() {
    let mut res = ptr::null_mut();
    let (one, ge1) = (c("1"), c("ge1"));
    unsafe {
        assert_eq!(fd_cone_delta(2, one.as_ptr(), ge1.as_ptr(), ptr::null(), &mut res), FdStatus::Ok);
        assert_eq!(text(fd_delta_result_value(res)), "2/3");
        assert!(!fd_delta_result_upper_bound_only(res));
        fd_delta_result_free(res);
        let big = c("5/2");
        assert_eq!(fd_cone_delta(1, big.as_ptr(), one.as_ptr(), ptr::null(), &mut res), FdStatus::Ok);
        assert!(fd_delta_result_upper_bound_only(res));
        fd_delta_result_free(res);
    }
}

#[test]
fn branched_cone_verdict() {
    let mut res = ptr::null_mut();
    unsafe {
        assert_eq!(fd_branched_cone_delta(2, 2, 3, 1, ptr::null(), &mut res), FdStatus::Ok);
        assert_eq!(text(fd_delta_result_value(res)), "1");
        assert_eq!(fd_delta_result_verdict(res), FD_VERDICT_K_SEMISTABLE);
        fd_delta_result_free(res);
        assert_eq!(fd_branched_cone_delta(2, 2, 2, 1, ptr::null(), &mut res), FdStatus::Domain);
        assert!(text(fd_last_error_message()).contains("k divides d*l - 1"));
    }
}

#[test]
fn scalar_entry_points() {
    let mut out = ptr::null_mut();
    unsafe {
        let r = c("2");
        assert_eq!(fd_beta_zero(1, r.as_ptr(), &mut out), FdStatus::Ok);
        assert_eq!(text(fd_rational_to_string(out)), "6/7");
        fd_rational_free(out);
        let lambda = c("2/3");
        assert_eq!(fd_optimal_angle_endpoint(2, lambda.as_ptr(), &mut out), FdStatus::Ok);
        assert_eq!(text(fd_rational_to_string(out)), "3/4");
        fd_rational_free(out);
        let s = c("-0.25");
        assert_eq!(fd_rational_parse(s.as_ptr(), &mut out), FdStatus::Ok);
        assert_eq!(text(fd_rational_to_string(out)), "-1/4");
        fd_rational_free(out);
        assert!(!text(fd_version()).is_empty());
    }
}

#[test]
fn error_statuses() {
    let mut res = ptr::null_mut();
    unsafe {
        let (bad, one) = (c("two"), c("1"));
        assert_eq!(fd_bundle_delta(1, bad.as_ptr(), one.as_ptr(), ptr::null(), ptr::null(), &mut res), FdStatus::Parse);
        let half = c("1/2");
        assert_eq!(fd_bundle_delta(1, half.as_ptr(), one.as_ptr(), ptr::null(), ptr::null(), &mut res), FdStatus::Domain);
        assert!(text(fd_last_error_message()).contains("1-r < a < 1"));
        assert_eq!(fd_bundle_delta(1, ptr::null(), one.as_ptr(), ptr::null(), ptr::null(), &mut res), FdStatus::NullPointer);
        assert!(res.is_null());
        fd_delta_result_free(ptr::null_mut());
        fd_string_free(ptr::null_mut());
        assert!(fd_delta_result_value(ptr::null()).is_null());
    }
}

#[test]
fn header_is_generated() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/fano_delta.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["fd_bundle_delta", "fd_cone_delta", "fd_branched_cone_delta", "fd_last_error_message", "FD_STATUS_DOMAIN", "typedef struct FdDeltaResult FdDeltaResult"] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

/// Compiles and runs a small C program against the header and static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libfano_delta_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("ffi_smoke.c");
    let bin = tmp.join("ffi_smoke");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "fano_delta.h"

int main(void) {
    FdDeltaResult *res = NULL;
    if (fd_bundle_delta(1, "2", "1", NULL, NULL, &res) != FD_STATUS_OK) return 1;
    if (strcmp(fd_delta_result_value(res), "6/7") != 0) return 2;
    if (fd_delta_result_minimizers(res) != FD_MIN_V0) return 3;
    fd_delta_result_free(res);
    if (fd_cone_delta(1, "1", "1", "1", &res) != FD_STATUS_DOMAIN) return 4;
    printf("%s\n", fd_last_error_message());
    return 0;
}
"#,
    )
    .unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("c must satisfy"));
}
