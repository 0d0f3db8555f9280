//! Lifecycle and error-code coverage for the C surface, driven from Rust.

use std::ffi::CStr;
use std::ptr;

use cryamabe_ffi::*;

fn fetch(status: CryStatus, value: f64) -> f64 {
    assert_eq!(status, CryStatus::Ok);
    value
}

#[test]
fn version_is_a_c_string() {
    let raw = cry_version();
    assert!(!raw.is_null());
    let text = unsafe { CStr::from_ptr(raw) }.to_str().unwrap();
    assert_eq!(text, env!("CARGO_PKG_VERSION"));
}

#[test]
fn scalar_queries_match_core() {
    assert_eq!(cry_homogeneous_dim(3), 8);

    let mut out = 0.0;
    let v = fetch(cry_lambda(1, 1.0, 3, &mut out), out);
    assert!((v - 3.5).abs() < 1e-12);

    let v = fetch(cry_critical_exponent(1, 1.0, &mut out), out);
    assert!((v - 4.0).abs() < 1e-12);

    let v = fetch(cry_sharp_sobolev_constant(2, 1.0, &mut out), out);
    let want = cryamabe::special::sharp_sobolev_constant(2, 1.0).unwrap();
    assert_eq!(v, want);

    let v = fetch(cry_fundamental_constant(1, 0.8, &mut out), out);
    let want = cryamabe::special::fundamental_constant(1, 0.8).unwrap();
    assert_eq!(v, want);
}

#[test]
fn scalar_queries_report_errors() {
    let mut out = 0.0;
    assert_eq!(cry_lambda(1, 2.0, 0, &mut out), CryStatus::Domain);
    assert_eq!(cry_lambda(0, 1.0, 0, &mut out), CryStatus::Domain);
    assert_eq!(cry_critical_exponent(0, 1.0, &mut out), CryStatus::Domain);
    assert_eq!(cry_critical_exponent(1, f64::NAN, &mut out), CryStatus::Domain);
    assert_eq!(cry_lambda(1, 1.0, 0, ptr::null_mut()), CryStatus::NullPointer);
}

#[test]
fn admissibility_branches() {
    let mut branch = 0i64;
    assert_eq!(cry_admissible_branch(2, 9, 4, &mut branch), CryStatus::Ok);
    assert_eq!(branch, 2);
    assert_eq!(cry_admissible_branch(2, 3, 2, &mut branch), CryStatus::Ok);
    assert_eq!(branch, -1);
    assert_eq!(cry_admissible_branch(2, 1, 0, &mut branch), CryStatus::Domain);
    assert_eq!(cry_admissible_branch(2, -1, 1, &mut branch), CryStatus::Domain);

    assert_eq!(cry_admissible_branch_f64(1, 1.2, &mut branch), CryStatus::Ok);
    assert_eq!(branch, 1);
    // Guard band: floats indistinguishable from the 4/3 endpoint are refused.
    let near = 4.0 / 3.0 + 1e-13;
    assert_eq!(cry_admissible_branch_f64(1, near, &mut branch), CryStatus::Domain);
}

#[test]
fn embedding_margin_closed_form() {
    // n=1, gamma=1: q_1* = 6 and p = 4, so the margin is exactly 2.
    let mut out = 0.0;
    assert_eq!(cry_embedding_margin(1, 1, 1, &mut out), CryStatus::Ok);
    assert_eq!(out, 2.0);
}

#[test]
fn solve_lifecycle() {
    let mut handle: *mut CrySolveResult = ptr::null_mut();
    assert_eq!(cry_solve_nodal(1.2, 4, 42, &mut handle), CryStatus::Ok);
    assert!(!handle.is_null());

    let reference =
        cryamabe::solver::solve_nodal(&cryamabe::solver::SolveConfig::new(1.2, 4, 42)).unwrap();

    let mut energy = 0.0;
    assert_eq!(cry_result_energy(handle, &mut energy), CryStatus::Ok);
    assert_eq!(energy, reference.energy);

    let mut grad = 0.0;
    assert_eq!(cry_result_grad_norm(handle, &mut grad), CryStatus::Ok);
    assert!(grad <= 1e-8);

    let mut nehari = 0.0;
    assert_eq!(cry_result_nehari_value(handle, &mut nehari), CryStatus::Ok);
    assert!(nehari.is_finite());

    let mut signs = 0usize;
    assert_eq!(cry_result_sign_changes(handle, &mut signs), CryStatus::Ok);
    assert!(signs >= 1);

    let mut iters = 0usize;
    assert_eq!(cry_result_iterations(handle, &mut iters), CryStatus::Ok);
    assert!(iters > 0);

    let mut modes = 0usize;
    assert_eq!(cry_result_mode_count(handle, &mut modes), CryStatus::Ok);
    assert_eq!(modes, 4);

    let mut mode = 0usize;
    let mut coeff = 0.0;
    assert_eq!(cry_result_coefficient(handle, 0, &mut mode, &mut coeff), CryStatus::Ok);
    assert_eq!(mode, 1);
    assert_eq!(coeff, reference.profile.coeffs[0]);
    assert_eq!(
        cry_result_coefficient(handle, 99, &mut mode, &mut coeff),
        CryStatus::Domain
    );

    // The profile is odd about 1/2.
    let mut at_half = 1.0;
    assert_eq!(cry_result_eval(handle, 0.5, &mut at_half), CryStatus::Ok);
    assert!(at_half.abs() < 1e-12);
    let mut lo = 0.0;
    let mut hi = 0.0;
    assert_eq!(cry_result_eval(handle, 0.25, &mut lo), CryStatus::Ok);
    assert_eq!(cry_result_eval(handle, 0.75, &mut hi), CryStatus::Ok);
    assert!((lo + hi).abs() < 1e-12);
    assert_eq!(cry_result_eval(handle, 1.5, &mut lo), CryStatus::Domain);

    let mut u = 0.0;
    assert_eq!(cry_result_pullback(handle, 0.3, -0.1, 0.4, &mut u), CryStatus::Ok);
    assert!(u.is_finite() && u != 0.0);

    cry_result_free(handle);
    cry_result_free(ptr::null_mut());
}

#[test]
fn solve_rejects_bad_input_without_touching_out() {
    let sentinel = 0xDEAD_BEEF as *mut CrySolveResult;
    let mut handle = sentinel;
    assert_eq!(cry_solve_nodal(1.5, 4, 42, &mut handle), CryStatus::Domain);
    assert_eq!(handle, sentinel);
    assert_eq!(cry_solve_nodal(1.2, 0, 42, &mut handle), CryStatus::Domain);
    assert_eq!(
        cry_solve_nodal(1.2, 4, 42, ptr::null_mut()),
        CryStatus::NullPointer
    );

    let mut out = 0.0;
    assert_eq!(cry_result_energy(ptr::null(), &mut out), CryStatus::NullPointer);
}
