use std::ffi::{c_char, CStr, CString};
use std::ptr;

use rephom_ffi::*;

fn owned(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { rephom_string_free(s) };
    out
}

fn last_error() -> Option<String> {
    let p = rephom_last_error();
    (!p.is_null()).then(|| owned(p))
}

#[test]
fn compute_invariants_through_handles() {
    let spec = CString::new("cp:2").unwrap();
    let name = CString::new("sl2").unwrap();
    let mut sp = ptr::null_mut();
    let mut g = ptr::null_mut();
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(rephom_space_parse(spec.as_ptr(), &mut sp), RephomStatus::Ok);
        assert_eq!(rephom_group_new(name.as_ptr(), &mut g), RephomStatus::Ok);
        assert_eq!(rephom_group_dim(g), 3);
        assert_eq!(rephom_compute(sp, g, 12, 1, &mut rep), RephomStatus::Ok);
        assert_eq!(rephom_report_passed(rep), 1);
        let v: serde_json::Value = serde_json::from_str(&owned(rephom_report_json(rep))).unwrap();
        assert_eq!(v["invariant_series"]["text"], "1 + z^5 + z^7 + z^12");
        assert_eq!(v["schema"], "rephom/1");
        rephom_report_free(rep);
        rephom_group_free(g);
        rephom_space_free(sp);
    }
    assert!(last_error().is_none());
}

#[test]
fn model_json_and_drinfeld() {
    let model = CString::new(
        r#"{"type":"quillen","generators":[{"name":"v","degree":2}],"diff":{}}"#,
    )
    .unwrap();
    let name = CString::new("sl2").unwrap();
    let (mut sp, mut g, mut rep) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(rephom_space_from_model_json(model.as_ptr(), &mut sp), RephomStatus::Ok);
        assert_eq!(rephom_group_new(name.as_ptr(), &mut g), RephomStatus::Ok);
        assert_eq!(rephom_compute(sp, g, 8, 1, &mut rep), RephomStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&owned(rephom_report_json(rep))).unwrap();
        assert_eq!(v["invariant_series"]["text"], "1 + z^4 + z^8");
        rephom_report_free(rep);
        // Freeness needs a catalog space.
        assert_eq!(rephom_drinfeld_check(sp, g, 8, &mut rep), RephomStatus::InputError);
        assert!(last_error().unwrap().contains("catalog"));
        rephom_space_free(sp);
        let spec = CString::new("sphere(3)").unwrap();
        assert_eq!(rephom_space_parse(spec.as_ptr(), &mut sp), RephomStatus::Ok);
        assert_eq!(rephom_drinfeld_check(sp, g, 8, &mut rep), RephomStatus::Ok);
        rephom_report_free(rep);
        rephom_space_free(sp);
        rephom_group_free(g);
    }
}

#[test]
fn macdonald_report() {
    let t = CString::new("A1").unwrap();
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(rephom_macdonald_q(t.as_ptr(), 1, &mut rep), RephomStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&owned(rephom_report_json(rep))).unwrap();
        assert_eq!(v["chi_ct_q"]["text"], "1 - q^3");
        rephom_report_free(rep);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("klein").unwrap();
    let mut sp = ptr::null_mut();
    unsafe {
        assert_eq!(rephom_space_parse(bad.as_ptr(), &mut sp), RephomStatus::InputError);
        assert!(sp.is_null());
        assert!(last_error().unwrap().contains("unsupported space"));
        assert_eq!(rephom_space_parse(ptr::null(), &mut sp), RephomStatus::NullPointer);
        let ok = CString::new("cp:2").unwrap();
        assert_eq!(rephom_space_parse(ok.as_ptr(), ptr::null_mut()), RephomStatus::NullPointer);
        let invalid = [0xffu8, 0];
        assert_eq!(rephom_space_parse(invalid.as_ptr().cast(), &mut sp), RephomStatus::InvalidUtf8);
        let bad_model = CString::new(r#"{"type":"quillen","generators":[{"name":"v","degree":1}],"diff":{"v":[{"term":"w"}]}}"#).unwrap();
        assert_eq!(rephom_space_from_model_json(bad_model.as_ptr(), &mut sp), RephomStatus::InputError);
        assert!(last_error().unwrap().contains("unknown generator `w`"));
        // Null handles are tolerated by the accessors.
        assert_eq!(rephom_report_passed(ptr::null()), 0);
        assert!(rephom_report_json(ptr::null()).is_null());
        rephom_string_free(ptr::null_mut());
        rephom_report_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(rephom_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/rephom.h");
    let text = std::fs::read_to_string(header).unwrap();
    for sym in ["rephom_last_error", "rephom_string_free", "rephom_compute", "REPHOM_STATUS_INPUT_ERROR"] {
        assert!(text.contains(sym), "{sym}");
    }
    let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_against_staticlib() {
    // target/<profile>/deps/<test> → target/<profile>
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(|d| d.parent()).unwrap().join("librephom_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("invariants");
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/invariants.c");
    let inc = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let Ok(out) = std::process::Command::new("cc")
        .args(["-I", inc, src])
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = std::process::Command::new(&bin).output().unwrap();
    assert!(run.status.success());
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("1 + z^5 + z^7 + z^12"));
    assert!(stdout.contains("unsupported space `klein`"));
}
