use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

use qmac_ffi::*;

const EXAMPLE_CODEBOOK: &str =
    r#"{"length_L": 2, "alice_strings": [["A", "A"]], "bob_strings": [["C", "C"], ["D", "D"]]}"#;

fn last_error() -> String {
    let p = qmac_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn example() -> *mut QmacEnsemble {
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { qmac_ensemble_two_basis_example(&mut e) }, QmacStatus::Ok);
    e
}

#[test]
fn entropy_profile_of_the_example() {
    let e = example();
    let mut p = QmacEntropyProfile {
        h_joint: 0.0,
        h_cond_a: 0.0,
        h_cond_b: 0.0,
    };
    assert_eq!(unsafe { qmac_entropy_profile(e, &mut p) }, QmacStatus::Ok);
    assert!((p.h_joint - 1.0).abs() < 1e-9);
    assert!((p.h_cond_a - 0.600876).abs() < 1e-6);
    assert!((p.h_cond_b - 1.0).abs() < 1e-9);
    assert!(qmac_last_error_message().is_null());
    unsafe { qmac_ensemble_free(e) };
}

#[test]
fn ensemble_json_round_trip_and_rejection() {
    let json = serde_json::to_string(&qmac::ensemble::two_basis_qubit_example()).unwrap();
    let c = CString::new(json).unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { qmac_ensemble_from_json(c.as_ptr(), &mut e) }, QmacStatus::Ok);
    assert!(!e.is_null());
    unsafe { qmac_ensemble_free(e) };

    let bad = CString::new("{\"dim\": 2}").unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { qmac_ensemble_from_json(bad.as_ptr(), &mut e) }, QmacStatus::InvalidJson);
    assert!(e.is_null());
    assert!(!last_error().is_empty());

    let unnormalized = CString::new(
        r#"{"alphabet_a": ["x"], "alphabet_b": ["y"], "dim": 2, "states": [[[[1.0, 0.0], [1.0, 0.0]]]], "p": [1.0], "q": [1.0]}"#,
    )
    .unwrap();
    assert_eq!(
        unsafe { qmac_ensemble_from_json(unnormalized.as_ptr(), &mut e) },
        QmacStatus::InvalidInput
    );
    assert!(last_error().contains("invalid ensemble"));

    assert_eq!(unsafe { qmac_ensemble_from_json(ptr::null(), &mut e) }, QmacStatus::NullPointer);
    unsafe { qmac_ensemble_free(ptr::null_mut()) };
}

#[test]
fn pentagon_vertices_and_membership() {
    let e = example();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { qmac_region_pentagon(e, &mut r) }, QmacStatus::Ok);
    let count = unsafe { qmac_region_vertex_count(r) };
    assert_eq!(count, 4);

    let mut written = 0;
    let mut small = [QmacRatePair { r1: 0.0, r2: 0.0 }; 2];
    assert_eq!(
        unsafe { qmac_region_vertices(r, small.as_mut_ptr(), small.len(), &mut written) },
        QmacStatus::BufferTooSmall
    );
    assert_eq!(written, 4);

    let mut buf = vec![QmacRatePair { r1: -1.0, r2: -1.0 }; count];
    assert_eq!(unsafe { qmac_region_vertices(r, buf.as_mut_ptr(), buf.len(), &mut written) }, QmacStatus::Ok);
    assert!((buf[2].r1 - 0.600876).abs() < 1e-6 && (buf[2].r2 - 0.399124).abs() < 1e-6);
    assert!((buf[3].r2 - 1.0).abs() < 1e-9);

    let mut inside = false;
    assert_eq!(
        unsafe { qmac_region_contains(r, QmacRatePair { r1: 0.3, r2: 0.5 }, 0.0, &mut inside) },
        QmacStatus::Ok
    );
    assert!(inside);
    unsafe { qmac_region_contains(r, QmacRatePair { r1: 0.6, r2: 0.6 }, 0.0, &mut inside) };
    assert!(!inside);

    let mut area = 0.0;
    assert_eq!(unsafe { qmac_region_area(r, &mut area) }, QmacStatus::Ok);
    assert!(area > 0.0);
    unsafe {
        qmac_region_free(r);
        qmac_ensemble_free(e);
    }
}

#[test]
fn union_grid_rejects_bad_step() {
    let e = example();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { qmac_region_union_grid(e, 0.3, &mut r) }, QmacStatus::InvalidInput);
    assert!(r.is_null());
    assert_eq!(unsafe { qmac_region_union_grid(e, 0.25, &mut r) }, QmacStatus::Ok);
    assert!(unsafe { qmac_region_vertex_count(r) } >= 4);
    unsafe {
        qmac_region_free(r);
        qmac_ensemble_free(e);
    }
}

#[test]
fn time_share_checks_lambda() {
    let a = QmacRatePair { r1: 1.0, r2: 0.0 };
    let b = QmacRatePair { r1: 0.0, r2: 1.0 };
    let mut out = QmacRatePair { r1: 0.0, r2: 0.0 };
    assert_eq!(unsafe { qmac_time_share(a, b, 0.25, &mut out) }, QmacStatus::Ok);
    assert_eq!(out, QmacRatePair { r1: 0.25, r2: 0.75 });
    assert_eq!(unsafe { qmac_time_share(a, b, 1.5, &mut out) }, QmacStatus::InvalidInput);
    assert!(last_error().contains("1.5"));
}

#[test]
fn error_probability_and_cap() {
    let e = example();
    let cb = CString::new(EXAMPLE_CODEBOOK).unwrap();
    let mut p = -1.0;
    assert_eq!(unsafe { qmac_error_probability(e, cb.as_ptr(), 1.0, 0, &mut p) }, QmacStatus::Ok);
    assert!(p.abs() < 1e-9);
    assert_eq!(
        unsafe { qmac_error_probability(e, cb.as_ptr(), 1.0, 2, &mut p) },
        QmacStatus::DimensionCapExceeded
    );
    let unknown = CString::new(r#"{"length_L": 1, "alice_strings": [["Z"]], "bob_strings": [["C"]]}"#).unwrap();
    assert_eq!(
        unsafe { qmac_error_probability(e, unknown.as_ptr(), 1.0, 0, &mut p) },
        QmacStatus::InvalidInput
    );
    unsafe { qmac_ensemble_free(e) };
}

#[test]
fn entanglement_entropy_of_bell_and_product() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = 0.0;
    assert_eq!(unsafe { qmac_entanglement_entropy([h, h].as_ptr(), 2, &mut out) }, QmacStatus::Ok);
    assert!((out - 1.0).abs() < 1e-12);
    assert_eq!(unsafe { qmac_entanglement_entropy([1.0, 0.0].as_ptr(), 2, &mut out) }, QmacStatus::Ok);
    assert!(out.abs() < 1e-12);
    assert_eq!(
        unsafe { qmac_entanglement_entropy([0.5, 0.5].as_ptr(), 2, &mut out) },
        QmacStatus::InvalidInput
    );
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(qmac_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qmac.h")).unwrap()
}

#[test]
fn header_declares_the_api() {
    let h = header();
    for name in [
        "typedef struct QmacEnsemble QmacEnsemble;",
        "typedef struct QmacRegion QmacRegion;",
        "QMAC_STATUS_OK = 0",
        "QMAC_STATUS_DIMENSION_CAP_EXCEEDED",
        "qmac_ensemble_from_json(",
        "qmac_ensemble_free(",
        "qmac_entropy_profile(",
        "qmac_region_pentagon(",
        "qmac_region_vertices(",
        "qmac_region_contains(",
        "qmac_region_free(",
        "qmac_time_share(",
        "qmac_error_probability(",
        "qmac_entanglement_entropy(",
        "qmac_last_error_message(",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile_dir();
    let src = dir.join("probe.c");
    std::fs::write(
        &src,
        "#include \"qmac.h\"\nint probe(void) { QmacRatePair r = {0.0, 1.0}; return (int)r.r2 + (int)QMAC_STATUS_OK; }\n",
    )
    .unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = std::process::Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(&include)
            .arg(&src)
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(_) => eprintln!("{compiler} not available, skipping"),
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qmac-ffi-probe-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
