/* C interface to the cryamabe library. Link against libcryamabe_ffi. */

#pragma once

/* Generated with cbindgen:0.27.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes for every fallible call. `CRY_STATUS_OK` is zero so the enum
// can be used directly in C truthiness checks (`if (cry_lambda(...)) fail;`).
typedef enum {
  CRY_STATUS_OK = 0,
  // A required pointer argument was null.
  CRY_STATUS_NULL_POINTER = 1,
  // Input outside the mathematical domain (bad n, gamma, index, ...).
  CRY_STATUS_DOMAIN = 2,
  // Mismatched dimensions between arguments.
  CRY_STATUS_DIMENSION = 3,
  // A non-finite value was produced or supplied.
  CRY_STATUS_NON_FINITE = 4,
  // Evaluation too close to a pole of the underlying function.
  CRY_STATUS_POLE = 5,
  // Iteration budget exhausted before reaching tolerance.
  CRY_STATUS_NO_CONVERGENCE = 6,
  // Intermediate value overflowed.
  CRY_STATUS_OVERFLOW = 7,
  // An internal invariant failed; the library state is still consistent.
  CRY_STATUS_PANIC = 8,
} CryStatus;

// Opaque handle to a converged nodal solution. Create with
// [`cry_solve_nodal`], release with [`cry_result_free`].
typedef struct CrySolveResult CrySolveResult;

// Library version as a static NUL-terminated string; never freed by the
// caller.
const char *cry_version(void);

// Homogeneous dimension Q = 2n + 2 of the n-th Heisenberg group.
size_t cry_homogeneous_dim(size_t n);

// Intertwining eigenvalue lambda_j(gamma) on the j-th diagonal block.
CryStatus cry_lambda(size_t n, double gamma, size_t j, double *out);

// Critical exponent p = 2Q / (Q - 2 gamma).
CryStatus cry_critical_exponent(size_t n, double gamma, double *out);

// Sharp constant of the fractional Sobolev inequality on the CR sphere.
CryStatus cry_sharp_sobolev_constant(size_t n, double gamma, double *out);

// Normalization constant c_gamma of the convolution kernel.
CryStatus cry_fundamental_constant(size_t n, double gamma, double *out);

// Exact admissibility decision for gamma = num/den. Writes the branch index
// k >= 1 of the containing interval [k, kQ/(Q-1)), or -1 when gamma is not
// admissible.
CryStatus cry_admissible_branch(size_t n,
                                int64_t gamma_num,
                                int64_t gamma_den,
                                int64_t *out_branch);

// Float admissibility decision; values within the guard band of an interval
// endpoint are rejected as `CRY_STATUS_DOMAIN` rather than classified by
// rounding.
CryStatus cry_admissible_branch_f64(size_t n, double gamma, int64_t *out_branch);

// Embedding margin q_l* - p for gamma = num/den, returned as a float.
// Positive iff the Sobolev embedding chain behind admissibility holds.
CryStatus cry_embedding_margin(size_t n, int64_t gamma_num, int64_t gamma_den, double *out);

// Runs the sign-changing solver on the CR 3-sphere at the given exponent.
// `basis_size` odd Legendre modes are used; `seed` fixes the random
// initialization, making the run reproducible bit for bit. On success the
// caller owns the handle written to `out`.
CryStatus cry_solve_nodal(double gamma, size_t basis_size, uint64_t seed, CrySolveResult **out);

// Energy of the solution on the Nehari manifold.
CryStatus cry_result_energy(const CrySolveResult *res, double *out);

// Euclidean norm of the Euler-Lagrange gradient at termination.
CryStatus cry_result_grad_norm(const CrySolveResult *res, double *out);

// Value of the Nehari constraint functional at the solution.
CryStatus cry_result_nehari_value(const CrySolveResult *res, double *out);

// Number of sign changes of the profile on (0, 1).
CryStatus cry_result_sign_changes(const CrySolveResult *res, size_t *out);

// Gradient iterations consumed.
CryStatus cry_result_iterations(const CrySolveResult *res, size_t *out);

// Number of Legendre modes carried by the profile.
CryStatus cry_result_mode_count(const CrySolveResult *res, size_t *out);

// Reads coefficient `slot` (0-based) of the profile: the odd Legendre degree
// into `out_mode` and the coefficient value into `out_coeff`.
CryStatus cry_result_coefficient(const CrySolveResult *res,
                                 size_t slot,
                                 size_t *out_mode,
                                 double *out_coeff);

// Evaluates the solution profile at x in [0, 1].
CryStatus cry_result_eval(const CrySolveResult *res, double x, double *out);

// Evaluates the conformal pullback of the solution at the Heisenberg point
// (z_re + i z_im, t) on H^1.
CryStatus cry_result_pullback(const CrySolveResult *res,
                              double z_re,
                              double z_im,
                              double t,
                              double *out);

// Releases a handle returned by [`cry_solve_nodal`]. Null is accepted and
// ignored. Passing the same handle twice is undefined behavior, as with
// `free`.
void cry_result_free(CrySolveResult *res);
