use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use polymu_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = polymu_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn parse(text: &str) -> *mut PolymuFormula {
    let mut phi = ptr::null_mut();
    assert_eq!(
        unsafe { polymu_formula_parse(c(text).as_ptr(), &mut phi) },
        PolymuStatus::Ok
    );
    phi
}

fn lts(text: &str) -> *mut PolymuLts {
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { polymu_lts_parse(c(text).as_ptr(), &mut l) }, PolymuStatus::Ok);
    l
}

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { polymu_string_free(p) };
    s
}

const CHAIN: &str = "states 3\ninit 0\nlabel 2 p\ntrans 0 a 1\ntrans 1 a 2\n";

#[test]
fn check_with_both_engines() {
    let phi = parse("mu X. (p(1) | <a>_1 X)");
    let l = lts(CHAIN);
    for engine in [PolymuEngine::Naive, PolymuEngine::Game] {
        for (s, want) in [(0usize, true), (2, true)] {
            let mut out = false;
            let st = unsafe { polymu_check(engine, phi, l, &s, 1, &mut out) };
            assert_eq!(st, PolymuStatus::Ok);
            assert_eq!(out, want);
        }
    }
    let never = parse("nu X. (~p(1) & [a]_1 X)");
    let mut out = true;
    assert_eq!(
        unsafe { polymu_check(PolymuEngine::Game, never, l, &0, 1, &mut out) },
        PolymuStatus::Ok
    );
    assert!(!out);
    unsafe {
        polymu_formula_free(phi);
        polymu_formula_free(never);
        polymu_lts_free(l);
    }
}

#[test]
fn errors_are_reported() {
    let mut phi = ptr::null_mut();
    assert_eq!(
        unsafe { polymu_formula_parse(c("mu X.").as_ptr(), &mut phi) },
        PolymuStatus::ParseError
    );
    assert!(phi.is_null());
    assert!(last_error().contains("syntax error"));

    assert_eq!(
        unsafe { polymu_formula_parse(ptr::null(), &mut phi) },
        PolymuStatus::NullArgument
    );
    assert_eq!(last_error(), "text is null");

    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { polymu_formula_parse(bad.as_ptr().cast(), &mut phi) },
        PolymuStatus::InvalidUtf8
    );

    let mut l = ptr::null_mut();
    assert_eq!(
        unsafe { polymu_lts_parse(c("states 1\n").as_ptr(), &mut l) },
        PolymuStatus::ParseError
    );
    assert!(last_error().contains("init"));

    // Tuple too short for the formula's arity.
    let phi = parse("p(2)");
    let l = lts(CHAIN);
    let mut out = false;
    assert_eq!(
        unsafe { polymu_check(PolymuEngine::Naive, phi, l, &0, 1, &mut out) },
        PolymuStatus::EvaluationError
    );
    assert_eq!(
        unsafe { polymu_check(PolymuEngine::Naive, phi, l, ptr::null(), 2, &mut out) },
        PolymuStatus::NullArgument
    );
    unsafe {
        polymu_formula_free(phi);
        polymu_lts_free(l);
    }
}

#[test]
fn formula_accessors() {
    let phi = parse("{1<->2} nu Y. (q(2) & [a]_2 Y)");
    assert_eq!(unsafe { polymu_formula_arity(phi) }, 2);
    let (mut sigma, mut pi) = (0, 0);
    assert_eq!(
        unsafe { polymu_formula_levels(phi, &mut sigma, &mut pi) },
        PolymuStatus::Ok
    );
    assert!(pi <= sigma);

    let mut neg = ptr::null_mut();
    assert_eq!(unsafe { polymu_formula_negate(phi, &mut neg) }, PolymuStatus::Ok);
    let text = take_string(unsafe { polymu_formula_to_string(neg) });
    assert!(text.contains("mu"), "{text}");

    let mut norm = ptr::null_mut();
    assert_eq!(unsafe { polymu_formula_normalize(phi, &mut norm) }, PolymuStatus::Ok);
    let round = parse(&take_string(unsafe { polymu_formula_to_string(norm) }));
    assert_eq!(unsafe { polymu_formula_arity(round) }, 2);
    unsafe {
        for f in [phi, neg, norm, round] {
            polymu_formula_free(f);
        }
        polymu_formula_free(ptr::null_mut());
        assert!(polymu_formula_to_string(ptr::null()).is_null());
    }
}

#[test]
fn lts_round_trip_and_bisimulation() {
    let text = "states 3\ninit 0\nlabel 1 p\nlabel 2 p\ntrans 0 a 1\ntrans 0 a 2\n";
    let l = lts(text);
    assert_eq!(unsafe { polymu_lts_num_states(l) }, 3);
    assert_eq!(unsafe { polymu_lts_init(l) }, 0);
    assert_eq!(take_string(unsafe { polymu_lts_to_string(l) }), text);
    let mut same = false;
    assert_eq!(unsafe { polymu_bisimilar(l, 1, 2, &mut same) }, PolymuStatus::Ok);
    assert!(same);
    assert_eq!(unsafe { polymu_bisimilar(l, 0, 1, &mut same) }, PolymuStatus::Ok);
    assert!(!same);
    assert_eq!(
        unsafe { polymu_bisimilar(l, 0, 9, &mut same) },
        PolymuStatus::InvalidArgument
    );
    unsafe { polymu_lts_free(l) };
}

#[test]
fn diagonal_through_the_abi() {
    let props = [c("p"), c("q")];
    let ptrs: Vec<*const c_char> = props.iter().map(|p| p.as_ptr()).collect();
    let phi = parse("mu X. (p(1) | <a>_1 X)");

    let mut enc = ptr::null_mut();
    assert_eq!(
        unsafe { polymu_encode(phi, false, 0, ptrs.as_ptr(), ptrs.len(), &mut enc) },
        PolymuStatus::Ok
    );
    assert!(unsafe { polymu_lts_num_states(enc) } > 1);

    let mut big = ptr::null_mut();
    assert_eq!(
        unsafe { polymu_diagonal_formula(1, 1, false, ptrs.as_ptr(), ptrs.len(), false, &mut big) },
        PolymuStatus::Ok
    );
    assert_eq!(unsafe { polymu_formula_arity(big) }, 2);

    for fixed in [false, true] {
        let mut r = PolymuDiagReport::default();
        let st = unsafe {
            polymu_diagonal_check(
                phi,
                1,
                1,
                PolymuClass::Sigma,
                PolymuEngine::Game,
                fixed,
                ptrs.as_ptr(),
                ptrs.len(),
                &mut r,
            )
        };
        if fixed {
            // `p` is not in the fixed signature.
            assert_eq!(st, PolymuStatus::InvalidArgument);
        } else {
            assert_eq!(st, PolymuStatus::Ok);
            assert_ne!(r.phi_holds, r.diag_holds);
        }
    }

    let fixed_phi = parse("mu X. (ppos(1) | <a>_1 X)");
    let mut r = PolymuDiagReport::default();
    let st = unsafe {
        polymu_diagonal_check(
            fixed_phi,
            1,
            1,
            PolymuClass::Sigma,
            PolymuEngine::Game,
            true,
            ptr::null(),
            0,
            &mut r,
        )
    };
    assert_eq!(st, PolymuStatus::Ok, "{}", last_error());
    assert_ne!(r.phi_holds, r.diag_holds);

    // Not admitted: a ν-binder cannot sit in Σ at level 1.
    let nu = parse("nu X. (ppos(1) & <a>_1 X)");
    let st = unsafe {
        polymu_diagonal_check(
            nu,
            1,
            1,
            PolymuClass::Sigma,
            PolymuEngine::Game,
            true,
            ptr::null(),
            0,
            &mut r,
        )
    };
    assert_eq!(st, PolymuStatus::InvalidArgument);
    unsafe {
        for f in [phi, big, fixed_phi, nu] {
            polymu_formula_free(f);
        }
        polymu_lts_free(enc);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(polymu_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

// Compiles a C program against the generated header and the static library.
#[test]
fn c_program_links_against_the_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/polymu.h");
    assert!(header.exists(), "header not generated");
    let test_exe = std::env::current_exe().unwrap();
    let profile_dir = test_exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libpolymu_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out_dir = std::env::temp_dir().join(format!("polymu-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("smoke");
    let status = match Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("skipping: no C compiler ({e})");
            return;
        }
    };
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "mu X. p(1) | <a>_1 X");
    std::fs::remove_dir_all(&out_dir).ok();
}
