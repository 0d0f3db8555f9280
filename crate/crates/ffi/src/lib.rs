//! C ABI surface over the cryamabe core library.
//!
//! Every fallible entry point returns a [`CryStatus`] and writes results
//! through out pointers; no Rust panic crosses the boundary. Solver state
//! lives behind the opaque [`CrySolveResult`] handle, created by
//! [`cry_solve_nodal`] and released by [`cry_result_free`].

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use cryamabe::admissible::{admissibility, admissibility_f64, embedding_margin, Rational};
use cryamabe::heisenberg::HeisenbergPoint;
use cryamabe::solver::{pullback_solution, solve_nodal, SolveConfig, SolveResult};
use cryamabe::special::{fundamental_constant, lambda, sharp_sobolev_constant};
use cryamabe::{critical_exponent, homogeneous_dim, Error};
use num_complex::Complex64;

/// Result codes for every fallible call. `CRY_STATUS_OK` is zero so the enum
/// can be used directly in C truthiness checks (`if (cry_lambda(...)) fail;`).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CryStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Input outside the mathematical domain (bad n, gamma, index, ...).
    Domain = 2,
    /// Mismatched dimensions between arguments.
    Dimension = 3,
    /// A non-finite value was produced or supplied.
    NonFinite = 4,
    /// Evaluation too close to a pole of the underlying function.
    Pole = 5,
    /// Iteration budget exhausted before reaching tolerance.
    NoConvergence = 6,
    /// Intermediate value overflowed.
    Overflow = 7,
    /// An internal invariant failed; the library state is still consistent.
    Panic = 8,
}

fn status_of(err: &Error) -> CryStatus {
    match err {
        Error::Domain(_) => CryStatus::Domain,
        Error::Dimension(_) => CryStatus::Dimension,
        Error::NonFinite(_) => CryStatus::NonFinite,
        Error::Pole(_) => CryStatus::Pole,
        Error::NoConvergence { .. } => CryStatus::NoConvergence,
        Error::Overflow(_) => CryStatus::Overflow,
        Error::Io(_) | Error::Json(_) => CryStatus::Domain,
    }
}

/// Runs `body` with panics converted to `CRY_STATUS_PANIC`, storing its
/// output through `out` only on success.
fn guarded<T>(out: *mut T, body: impl FnOnce() -> Result<T, CryStatus>) -> CryStatus {
    if out.is_null() {
        return CryStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            unsafe { out.write(value) };
            CryStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => CryStatus::Panic,
    }
}

/// Library version as a static NUL-terminated string; never freed by the
/// caller.
#[no_mangle]
pub extern "C" fn cry_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Homogeneous dimension Q = 2n + 2 of the n-th Heisenberg group.
#[no_mangle]
pub extern "C" fn cry_homogeneous_dim(n: usize) -> usize {
    homogeneous_dim(n)
}

/// Intertwining eigenvalue lambda_j(gamma) on the j-th diagonal block.
#[no_mangle]
pub extern "C" fn cry_lambda(n: usize, gamma: f64, j: usize, out: *mut f64) -> CryStatus {
    guarded(out, || lambda(n, gamma, j).map_err(|e| status_of(&e)))
}

/// Critical exponent p = 2Q / (Q - 2 gamma).
#[no_mangle]
pub extern "C" fn cry_critical_exponent(n: usize, gamma: f64, out: *mut f64) -> CryStatus {
    guarded(out, || {
        let q = homogeneous_dim(n) as f64;
        if n == 0 || !gamma.is_finite() || gamma <= 0.0 || 2.0 * gamma >= q {
            return Err(CryStatus::Domain);
        }
        Ok(critical_exponent(n, gamma))
    })
}

/// Sharp constant of the fractional Sobolev inequality on the CR sphere.
#[no_mangle]
pub extern "C" fn cry_sharp_sobolev_constant(n: usize, gamma: f64, out: *mut f64) -> CryStatus {
    guarded(out, || sharp_sobolev_constant(n, gamma).map_err(|e| status_of(&e)))
}

/// Normalization constant c_gamma of the convolution kernel.
#[no_mangle]
pub extern "C" fn cry_fundamental_constant(n: usize, gamma: f64, out: *mut f64) -> CryStatus {
    guarded(out, || fundamental_constant(n, gamma).map_err(|e| status_of(&e)))
}

/// Exact admissibility decision for gamma = num/den. Writes the branch index
/// k >= 1 of the containing interval [k, kQ/(Q-1)), or -1 when gamma is not
/// admissible.
#[no_mangle]
pub extern "C" fn cry_admissible_branch(
    n: usize,
    gamma_num: i64,
    gamma_den: i64,
    out_branch: *mut i64,
) -> CryStatus {
    guarded(out_branch, || {
        if gamma_den == 0 {
            return Err(CryStatus::Domain);
        }
        let report =
            admissibility(n, Rational::new(gamma_num, gamma_den)).map_err(|e| status_of(&e))?;
        Ok(report.branch.map_or(-1, |k| k as i64))
    })
}

/// Float admissibility decision; values within the guard band of an interval
/// endpoint are rejected as `CRY_STATUS_DOMAIN` rather than classified by
/// rounding.
#[no_mangle]
pub extern "C" fn cry_admissible_branch_f64(
    n: usize,
    gamma: f64,
    out_branch: *mut i64,
) -> CryStatus {
    guarded(out_branch, || {
        let report = admissibility_f64(n, gamma).map_err(|e| status_of(&e))?;
        Ok(report.branch.map_or(-1, |k| k as i64))
    })
}

/// Embedding margin q_l* - p for gamma = num/den, returned as a float.
/// Positive iff the Sobolev embedding chain behind admissibility holds.
#[no_mangle]
pub extern "C" fn cry_embedding_margin(
    n: usize,
    gamma_num: i64,
    gamma_den: i64,
    out: *mut f64,
) -> CryStatus {
    guarded(out, || {
        if gamma_den == 0 {
            return Err(CryStatus::Domain);
        }
        let margin =
            embedding_margin(n, Rational::new(gamma_num, gamma_den)).map_err(|e| status_of(&e))?;
        Ok(*margin.numer() as f64 / *margin.denom() as f64)
    })
}

/// Opaque handle to a converged nodal solution. Create with
/// [`cry_solve_nodal`], release with [`cry_result_free`].
pub struct CrySolveResult(SolveResult);

/// Runs the sign-changing solver on the CR 3-sphere at the given exponent.
/// `basis_size` odd Legendre modes are used; `seed` fixes the random
/// initialization, making the run reproducible bit for bit. On success the
/// caller owns the handle written to `out`.
#[no_mangle]
pub extern "C" fn cry_solve_nodal(
    gamma: f64,
    basis_size: usize,
    seed: u64,
    out: *mut *mut CrySolveResult,
) -> CryStatus {
    guarded(out, || {
        let cfg = SolveConfig::new(gamma, basis_size, seed);
        let res = solve_nodal(&cfg).map_err(|e| status_of(&e))?;
        Ok(Box::into_raw(Box::new(CrySolveResult(res))))
    })
}

fn with_result<T>(
    res: *const CrySolveResult,
    out: *mut T,
    f: impl FnOnce(&SolveResult) -> Result<T, CryStatus>,
) -> CryStatus {
    if res.is_null() {
        return CryStatus::NullPointer;
    }
    guarded(out, || f(unsafe { &(*res).0 }))
}

/// Energy of the solution on the Nehari manifold.
#[no_mangle]
pub extern "C" fn cry_result_energy(res: *const CrySolveResult, out: *mut f64) -> CryStatus {
    with_result(res, out, |r| Ok(r.energy))
}

/// Euclidean norm of the Euler-Lagrange gradient at termination.
#[no_mangle]
pub extern "C" fn cry_result_grad_norm(res: *const CrySolveResult, out: *mut f64) -> CryStatus {
    with_result(res, out, |r| Ok(r.grad_norm))
}

/// Value of the Nehari constraint functional at the solution.
#[no_mangle]
pub extern "C" fn cry_result_nehari_value(res: *const CrySolveResult, out: *mut f64) -> CryStatus {
    with_result(res, out, |r| Ok(r.nehari_value))
}

/// Number of sign changes of the profile on (0, 1).
#[no_mangle]
pub extern "C" fn cry_result_sign_changes(
    res: *const CrySolveResult,
    out: *mut usize,
) -> CryStatus {
    with_result(res, out, |r| Ok(r.sign_changes))
}

/// Gradient iterations consumed.
#[no_mangle]
pub extern "C" fn cry_result_iterations(res: *const CrySolveResult, out: *mut usize) -> CryStatus {
    with_result(res, out, |r| Ok(r.iterations))
}

/// Number of Legendre modes carried by the profile.
#[no_mangle]
pub extern "C" fn cry_result_mode_count(res: *const CrySolveResult, out: *mut usize) -> CryStatus {
    with_result(res, out, |r| Ok(r.profile.coeffs.len()))
}

/// Reads coefficient `slot` (0-based) of the profile: the odd Legendre degree
/// into `out_mode` and the coefficient value into `out_coeff`.
#[no_mangle]
pub extern "C" fn cry_result_coefficient(
    res: *const CrySolveResult,
    slot: usize,
    out_mode: *mut usize,
    out_coeff: *mut f64,
) -> CryStatus {
    if res.is_null() || out_mode.is_null() {
        return CryStatus::NullPointer;
    }
    with_result(res, out_coeff, |r| {
        let pairs = r.profile.coefficient_pairs();
        let (mode, coeff) = *pairs.get(slot).ok_or(CryStatus::Domain)?;
        unsafe { out_mode.write(mode) };
        Ok(coeff)
    })
}

/// Evaluates the solution profile at x in [0, 1].
#[no_mangle]
pub extern "C" fn cry_result_eval(
    res: *const CrySolveResult,
    x: f64,
    out: *mut f64,
) -> CryStatus {
    with_result(res, out, |r| {
        if !(0.0..=1.0).contains(&x) {
            return Err(CryStatus::Domain);
        }
        Ok(r.profile.eval(x))
    })
}

/// Evaluates the conformal pullback of the solution at the Heisenberg point
/// (z_re + i z_im, t) on H^1.
#[no_mangle]
pub extern "C" fn cry_result_pullback(
    res: *const CrySolveResult,
    z_re: f64,
    z_im: f64,
    t: f64,
    out: *mut f64,
) -> CryStatus {
    with_result(res, out, |r| {
        let w = HeisenbergPoint::new(vec![Complex64::new(z_re, z_im)], t);
        let values = pullback_solution(r, std::slice::from_ref(&w)).map_err(|e| status_of(&e))?;
        Ok(values[0])
    })
}

/// Releases a handle returned by [`cry_solve_nodal`]. Null is accepted and
/// ignored. Passing the same handle twice is undefined behavior, as with
/// `free`.
#[no_mangle]
pub extern "C" fn cry_result_free(res: *mut CrySolveResult) {
    if !res.is_null() {
        drop(unsafe { Box::from_raw(res) });
    }
}
