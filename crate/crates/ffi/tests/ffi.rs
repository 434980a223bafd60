use std::ffi::CStr;
use std::ptr;

use coamoeba_ffi::*;

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    coamoeba_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(coamoeba_last_error_message()).to_str().unwrap().to_string()
}

#[test]
fn exterior_category_roundtrip() {
    unsafe {
        let mut cat = ptr::null_mut();
        assert_eq!(coamoeba_category_build(CoamoebaCategoryKind::Exterior, 3, &mut cat), CoamoebaStatus::Ok);
        assert_eq!(coamoeba_category_object_count(cat), 4);
        assert_eq!(coamoeba_category_hom_dim(cat, 0, 2), 6);
        assert_eq!(coamoeba_category_hom_dim(cat, 2, 0), 0);
        let mut violations = 99;
        assert_eq!(coamoeba_category_check(cat, 4, &mut violations), CoamoebaStatus::Ok);
        assert_eq!(violations, 0);
        let mut json = ptr::null_mut();
        assert_eq!(coamoeba_category_to_json(cat, &mut json), CoamoebaStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["objects"].as_array().unwrap().len(), 4);
        coamoeba_category_free(cat);
    }
}

#[test]
fn coamoeba_and_delta_categories() {
    unsafe {
        let mut cat = ptr::null_mut();
        assert_eq!(coamoeba_category_build(CoamoebaCategoryKind::Coamoeba, 2, &mut cat), CoamoebaStatus::Ok);
        assert_eq!(coamoeba_category_hom_dim(cat, 0, 1), 3);
        coamoeba_category_free(cat);
        let mut cat = ptr::null_mut();
        assert_eq!(coamoeba_category_build(CoamoebaCategoryKind::Delta, 3, &mut cat), CoamoebaStatus::Ok);
        assert_eq!(coamoeba_category_object_count(cat), 8);
        assert_eq!(coamoeba_category_hom_dim(cat, 0, 3), 2);
        coamoeba_category_free(cat);
    }
}

#[test]
fn quotient_and_errors() {
    unsafe {
        let basis = [1i64, 1, 3, 0];
        let mut cat = ptr::null_mut();
        assert_eq!(coamoeba_quotient(2, basis.as_ptr(), 2, &mut cat), CoamoebaStatus::Ok);
        assert_eq!(coamoeba_category_object_count(cat), 9);
        coamoeba_category_free(cat);

        let singular = [1i64, 2, 2, 4];
        let mut cat = ptr::null_mut();
        assert_eq!(coamoeba_quotient(2, singular.as_ptr(), 2, &mut cat), CoamoebaStatus::NotFiniteIndex);
        assert!(cat.is_null());
        assert!(last_error().contains("finite index"));

        assert_eq!(coamoeba_category_build(CoamoebaCategoryKind::Exterior, 2, ptr::null_mut()), CoamoebaStatus::NullPointer);
        assert_eq!(coamoeba_category_object_count(ptr::null()), 0);
    }
}

#[test]
fn verify_report() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(coamoeba_verify(2, &mut r), CoamoebaStatus::Ok);
        assert!(coamoeba_report_passed(r));
        let mut json = ptr::null_mut();
        assert_eq!(coamoeba_report_json(r, &mut json), CoamoebaStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["verdict"], "pass");
        coamoeba_report_free(r);
        assert_eq!(coamoeba_verify(0, &mut r), CoamoebaStatus::UnsupportedDimension);
    }
}

#[test]
fn tessellation_export() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(coamoeba_tessellation_export(3, CoamoebaMeshFormat::Off, false, &mut s), CoamoebaStatus::Ok);
        assert!(take_string(s).starts_with("OFF"));
        assert_eq!(
            coamoeba_tessellation_export(5, CoamoebaMeshFormat::Obj, false, &mut s),
            CoamoebaStatus::UnsupportedDimension
        );
        assert_eq!(coamoeba_tessellation_export(5, CoamoebaMeshFormat::Json, false, &mut s), CoamoebaStatus::Ok);
        coamoeba_string_free(s);
    }
}

const HEADER: &str = include_str!("../include/coamoeba.h");

#[test]
fn header_declares_every_export() {
    let src = include_str!("../src/lib.rs");
    let exported: Vec<&str> = src
        .lines()
        .filter(|l| l.contains("extern \"C\" fn "))
        .map(|l| l.split("fn ").nth(1).unwrap().split('(').next().unwrap())
        .collect();
    assert_eq!(exported.len(), 14);
    for name in exported {
        assert!(HEADER.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile_dir();
    let file = dir.join("use_header.c");
    std::fs::write(
        &file,
        "#include \"coamoeba.h\"\nint main(void) { CoamoebaCategory *c = 0; \
         return coamoeba_category_build(COAMOEBA_CATEGORY_KIND_EXTERIOR, 2, &c) == COAMOEBA_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let out = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&file)
        .output()
        .expect("a C compiler is on PATH");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("coamoeba-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
