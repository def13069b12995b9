use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use surfex_ffi::*;

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    surfex_string_free(p);
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(surfex_last_error()).to_str().unwrap().to_owned() }
}

#[test]
fn graph_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(surfex_construct_ex(20, 2, &mut g), SurfexStatus::Ok);
        assert_eq!((surfex_graph_order(g), surfex_graph_size(g)), (20, 60));
        let mut code = ptr::null_mut();
        assert_eq!(surfex_graph_to_graph6(g, &mut code), SurfexStatus::Ok);
        let code = CString::new(take_string(code)).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(surfex_graph_from_graph6(code.as_ptr(), &mut h), SurfexStatus::Ok);
        assert_eq!(surfex_graph_size(h), 60);
        surfex_graph_free(g);
        surfex_graph_free(h);
    }
}

#[test]
fn numbers() {
    unsafe {
        let mut g = ptr::null_mut();
        let k = CString::new("Ds_").unwrap();
        assert_eq!(surfex_graph_from_graph6(k.as_ptr(), &mut g), SurfexStatus::Ok);
        let mut rho = 0.0;
        assert_eq!(surfex_spectral_radius(g, 1e-12, &mut rho), SurfexStatus::Ok);
        let mut w = ptr::null_mut();
        assert_eq!(surfex_walk_count(g, 3, &mut w), SurfexStatus::Ok);
        // "Ds_" is K_{1,4}: ρ = 2 and w³ = 2·4·(4·1) = 32
        assert!((rho - 2.0).abs() < 1e-10);
        assert_eq!(take_string(w), "32");
        let mut r0 = 0.0;
        assert_eq!(surfex_rho0(10, &mut r0), SurfexStatus::Ok);
        // (ρ − 1)(ρ − 2) = 2(n − 2)
        assert!((r0 - (1.5 + 0.5 * 65f64.sqrt())).abs() < 1e-12);
        surfex_graph_free(g);
    }
}

#[test]
fn schemes_and_minors() {
    unsafe {
        let (mut g, mut s) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(surfex_extremal_candidate(20, 2, &mut g, &mut s), SurfexStatus::Ok);
        let (mut f, mut genus, mut orientable) = (0, 0, false);
        assert_eq!(surfex_scheme_trace(s, &mut f, &mut genus, &mut orientable), SurfexStatus::Ok);
        assert_eq!((f, genus), (2 * 60 / 3, 2));
        let mut json = ptr::null_mut();
        assert_eq!(surfex_scheme_to_json(s, &mut json), SurfexStatus::Ok);
        let json = CString::new(take_string(json)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(surfex_scheme_from_json(json.as_ptr(), &mut back), SurfexStatus::Ok);
        assert_eq!(surfex_scheme_trace(back, &mut f, &mut genus, &mut orientable), SurfexStatus::Ok);
        assert_eq!(genus, 2);

        let mut k33 = ptr::null_mut();
        let code = CString::new("EFz_").unwrap();
        assert_eq!(surfex_graph_from_graph6(code.as_ptr(), &mut k33), SurfexStatus::Ok);
        let mut found = false;
        assert_eq!(surfex_has_minor(g, k33, &mut found), SurfexStatus::Ok);
        assert!(found);
        let mut exact = false;
        assert_eq!(surfex_min_euler_genus(k33, false, &mut genus, &mut exact), SurfexStatus::Ok);
        assert_eq!((genus, exact), (1, true));
        surfex_graph_free(g);
        surfex_graph_free(k33);
        surfex_scheme_free(s);
        surfex_scheme_free(back);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(surfex_construct_ex(5, 1, &mut g), SurfexStatus::Precondition);
        assert!(last_error().contains("2*gamma + 4"));
        assert!(g.is_null());
        assert_eq!(surfex_construct_ex(60_000_000, 1, &mut g), SurfexStatus::ScaleRefusal);
        assert_eq!(surfex_construct_ex(10, 1, ptr::null_mut()), SurfexStatus::NullPointer);
        assert_eq!(surfex_graph_from_graph6(ptr::null(), &mut g), SurfexStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(surfex_graph_from_graph6(bad.as_ptr().cast(), &mut g), SurfexStatus::InvalidUtf8);
        assert_eq!(surfex_construct_ex(10, 1, &mut g), SurfexStatus::Ok);
        let mut rho = 0.0;
        assert_eq!(surfex_spectral_radius(g, 1e-40, &mut rho), SurfexStatus::NonConvergence);
        let json = CString::new(r#"{"n":3,"rotation":[[1],[0,2],[1,0]]}"#).unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(surfex_scheme_from_json(json.as_ptr(), &mut s), SurfexStatus::Precondition);
        assert!(last_error().contains("vertex"));
        assert_eq!(surfex_graph_order(ptr::null()), 0);
        surfex_graph_free(g);
        surfex_graph_free(ptr::null_mut());
        surfex_scheme_free(ptr::null_mut());
        surfex_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/surfex.h")).unwrap();
    for name in [
        "surfex_last_error",
        "surfex_graph_from_graph6",
        "surfex_construct_ex",
        "surfex_spectral_radius",
        "surfex_scheme_trace",
        "surfex_graph_free",
        "SURFEX_STATUS_SCALE_REFUSAL = 3",
        "typedef struct SurfexGraph SurfexGraph",
    ] {
        assert!(header.contains(name), "{name}");
    }
    let src = std::env::temp_dir().join(format!("surfex-header-{}.c", std::process::id()));
    std::fs::write(&src, "#include \"surfex.h\"\nint main(void) { return surfex_graph_order(0) == 0 ? 0 : 1; }\n").unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
        .expect("a C compiler is installed");
    std::fs::remove_file(src).unwrap();
    assert!(status.success());
}
