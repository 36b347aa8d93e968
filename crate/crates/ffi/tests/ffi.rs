use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use weingarten_ffi::*;

struct Engine(*mut WgEngine);

impl Engine {
    fn new() -> Self {
        Engine(wg_engine_new())
    }
}

impl Drop for Engine {
    fn drop(&mut self) {
        unsafe { wg_engine_free(self.0) }
    }
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        wg_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_str().unwrap().to_string()
    }
}

fn value(e: &Engine, family: &str, element: &str, d: i64, dm: Option<i64>) -> Result<String, WgStatus> {
    let mut buf = [0 as c_char; 64];
    let (f, el) = (c(family), c(element));
    let st = unsafe {
        wg_value(e.0, f.as_ptr(), el.as_ptr(), d, dm.unwrap_or(0), dm.is_some(), false, buf.as_mut_ptr(), buf.len(), ptr::null_mut())
    };
    if st == WgStatus::Ok {
        Ok(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string())
    } else {
        Err(st)
    }
}

#[test]
fn values_through_the_c_abi() {
    let e = Engine::new();
    assert_eq!(value(&e, "u", "2,1", 5, None).unwrap(), "-1/120");
    assert_eq!(value(&e, "o", "1,2|3,4", 4, None).unwrap(), "5/72");
    assert_eq!(value(&e, "aiii", "2,1", 4, Some(2)).unwrap(), "1/5");
}

#[test]
fn error_codes() {
    let e = Engine::new();
    assert_eq!(value(&e, "u", "2,2", 5, None), Err(WgStatus::InvalidArgument));
    assert!(last_error().contains("permutation"), "{}", last_error());
    assert_eq!(value(&e, "q", "1", 5, None), Err(WgStatus::InvalidArgument));
    assert_eq!(value(&e, "u", "1,2,3", 2, None), Err(WgStatus::DomainError));
    assert!(last_error().contains("out of range"));
    let mut buf = [0 as c_char; 8];
    let st = unsafe {
        wg_value(e.0, c("u").as_ptr(), c("3,1,2").as_ptr(), 2, 0, false, true, buf.as_mut_ptr(), buf.len(), ptr::null_mut())
    };
    assert_eq!(st, WgStatus::Singular);
    let st = unsafe { wg_value(ptr::null(), c("u").as_ptr(), c("1").as_ptr(), 2, 0, false, false, buf.as_mut_ptr(), 8, ptr::null_mut()) };
    assert_eq!(st, WgStatus::NullPointer);
}

#[test]
fn buffer_sizing() {
    let e = Engine::new();
    let mut needed = 0usize;
    let (f, el) = (c("u"), c("2,1"));
    let st = unsafe { wg_value(e.0, f.as_ptr(), el.as_ptr(), 5, 0, false, false, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(st, WgStatus::BufferTooSmall);
    assert_eq!(needed, "-1/120".len() + 1);
    let mut buf = vec![0 as c_char; needed];
    let st = unsafe { wg_value(e.0, f.as_ptr(), el.as_ptr(), 5, 0, false, false, buf.as_mut_ptr(), needed, &mut needed) };
    assert_eq!(st, WgStatus::Ok);
}

#[test]
fn paths_and_moments() {
    let e = Engine::new();
    let mut buf = [0 as c_char; 64];
    let st = unsafe { wg_count_paths(e.0, c("u").as_ptr(), c("4,1,5,3,2").as_ptr(), 4, buf.as_mut_ptr(), 64, ptr::null_mut()) };
    assert_eq!(st, WgStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "14");
    let st = unsafe {
        wg_moment(e.0, c("coe").as_ptr(), c("rows=1;cols=1;crows=1;ccols=1").as_ptr(), 3, 0, false, buf.as_mut_ptr(), 64, ptr::null_mut())
    };
    assert_eq!(st, WgStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "1/2");
    let v = unsafe { CStr::from_ptr(wg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_generated_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/weingarten.h");
    let text = std::fs::read_to_string(&header).expect("header written by build.rs");
    for name in ["wg_engine_new", "wg_engine_free", "wg_value", "wg_count_paths", "wg_moment", "wg_last_error", "WG_STATUS_SINGULAR"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(status) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(&header)
            .status()
        else {
            eprintln!("{compiler} not found; skipping compile check");
            continue;
        };
        assert!(status.success(), "{compiler} rejected the header");
    }
}
