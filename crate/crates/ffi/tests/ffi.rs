use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use polydiag_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    pd_string_free(s);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pd_last_error()).to_str().unwrap().to_owned() }
}

#[test]
fn counts() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pd_strata_count(9, -1, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "1036555120");
        assert_eq!(pd_strata_count(4, 3, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "18");
        assert_eq!(pd_fm_strata_count(5, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "472");
        assert_eq!(pd_strata_table_csv(3, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "n,fm_strata,polydiag_strata\n2,2,2\n3,8,8\n");
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pd_strata_count(0, -1, &mut s), PdStatus::Validation);
        assert!(last_error().starts_with("error[validation]"), "{}", last_error());
        assert!(s.is_null());
        assert_eq!(pd_strata_count(4, -1, ptr::null_mut()), PdStatus::NullPointer);

        let mut ctx = ptr::null_mut();
        assert_eq!(pd_hodge_context_new(0, &mut ctx), PdStatus::Validation);
        assert!(ctx.is_null());
        assert_eq!(pd_u_poly(ptr::null(), 3, PdVar::U, &mut s), PdStatus::NullPointer);

        let bad = CString::new("{not json").unwrap();
        let mut chain = ptr::null_mut();
        assert_eq!(pd_chain_from_json(bad.as_ptr(), &mut chain), PdStatus::Json);
        assert_eq!(pd_chain_len(ptr::null()), 0);
    }
}

#[test]
fn polynomials() {
    unsafe {
        let mut ctx = ptr::null_mut();
        assert_eq!(pd_hodge_context_new(1, &mut ctx), PdStatus::Ok);
        let mut s = ptr::null_mut();

        let parts = [1usize, 1, 1];
        assert_eq!(pd_brick_poly(ctx, parts.as_ptr(), 3, false, PdVar::U, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "u^2+4u+1");
        assert_eq!(pd_brick_poly(ctx, parts.as_ptr(), 3, false, PdVar::T, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "t^4+4t^2+1");
        let two = [2usize];
        assert_eq!(pd_brick_poly(ctx, two.as_ptr(), 1, true, PdVar::U, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "u-2");
        assert_eq!(pd_brick_poly(ctx, ptr::null(), 0, false, PdVar::U, &mut s), PdStatus::Validation);

        assert_eq!(pd_u_poly(ctx, 3, PdVar::U, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "x^3+u*x");

        let mut ok = false;
        let mut report = ptr::null_mut();
        assert_eq!(pd_consistency_check(ctx, 4, &mut ok, &mut report), PdStatus::Ok);
        assert!(ok);
        let report: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(report["ok"], true);
        assert_eq!(report["chains"], 64);
        pd_hodge_context_free(ctx);
    }
}

#[test]
fn chains_and_strata() {
    let json = r#"{"n":4,"partitions":[{"n":4,"blocks":[[1,2,3,4]]},{"n":4,"blocks":[[1,2],[3,4]]}]}"#;
    let json = CString::new(json).unwrap();
    unsafe {
        let mut chain = ptr::null_mut();
        assert_eq!(pd_chain_from_json(json.as_ptr(), &mut chain), PdStatus::Ok);
        assert_eq!(pd_chain_len(chain), 2);
        let mut s = ptr::null_mut();
        assert_eq!(pd_chain_to_string(chain, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "[1234 < 12|34]");
        assert_eq!(pd_chain_tree_dot(chain, &mut s), PdStatus::Ok);
        assert!(take(s).starts_with("digraph leveled_tree"));

        let mut ctx = ptr::null_mut();
        assert_eq!(pd_hodge_context_new(2, &mut ctx), PdStatus::Ok);
        // X<1> with fibers M^2_(1) = P^1 and M^2_(1,1) = (P^1)^2 blown up twice
        assert_eq!(pd_stratum_poly(ctx, chain, false, PdVar::U, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "(u^4+4u^3+6u^2+4u+1)*x");
        // (u+1)·(u−1)(u+1)²
        assert_eq!(pd_stratum_poly(ctx, chain, true, PdVar::U, &mut s), PdStatus::Ok);
        assert_eq!(take(s), "(u^4+2u^3-2u-1)*x");
        pd_hodge_context_free(ctx);
        pd_chain_free(chain);
    }
}

#[test]
fn classification() {
    let profile = r#"{"n":4,"exponents":[[null,"3","1","1"],["3",null,"1","1"],["1","1",null,"2"],["1","1","2",null]]}"#;
    let profile = CString::new(profile).unwrap();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pd_classify_json(profile.as_ptr(), &mut s), PdStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["nest"]["members"], serde_json::json!([[1, 2, 3, 4], [1, 2], [3, 4]]));
        assert_eq!(v["chain"]["partitions"].as_array().unwrap().len(), 3);

        let bad = CString::new(r#"{"n":3,"exponents":[[null,"2","0"],["2",null,"2"],["0","2",null]]}"#)
            .unwrap();
        assert_eq!(pd_classify_json(bad.as_ptr(), &mut s), PdStatus::Validation);
        assert!(last_error().contains("(1,2,3)"), "{}", last_error());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(pd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/polydiag.h");
    let text = std::fs::read_to_string(&header).unwrap();
    let lib = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exported: Vec<&str> = lib
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .filter_map(|rest| rest.split('(').next())
        .collect();
    assert!(exported.len() >= 15);
    for name in exported {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    for ty in ["typedef struct PdChain PdChain", "typedef struct PdHodgeContext PdHodgeContext"] {
        assert!(text.contains(ty), "{ty}");
    }

    // the header is valid C when a compiler is around
    if let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99"])
        .arg(&header)
        .status()
    {
        assert!(status.success(), "header does not compile as C99");
    }
}
