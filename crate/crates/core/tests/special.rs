//! Fixture-based checks of the special-function kernel against values frozen
//! from an independent arbitrary-precision evaluation (30 significant digits).

use cryamabe::special::{
    self, fundamental_constant, gauss_legendre_01, jacobi_eval, lambda, legendre_eval, log_gamma,
    sharp_sobolev_constant, JacobiParams,
};
use cryamabe::sphere::surface_measure;
use proptest::prelude::*;

/// (x, ln Γ(x)) pairs spanning the reflection branch, the Lanczos core, and
/// the large-argument regime.
const LGAMMA_FIXTURES: &[(f64, f64)] = &[
    (0.5, 0.57236494292470008707),
    (1.0, 0.0),
    (1.5, -0.12078223763524522235),
    (2.0, 0.0),
    (3.75, 1.4868155785934170555),
    (5.25, 3.5613759103866969369),
    (8.5, 9.5492672573009977117),
    (10.0, 12.801827480081469611),
    (25.0, 54.78472939811231919),
    (100.0, 359.13420536957539878),
    (1234.5, 7550.5509010778948957),
    (100000.0, 1051287.7089736568949),
    (1000000.0, 12815504.56914761166),
];

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

#[test]
fn log_gamma_matches_frozen_table() {
    for &(x, want) in LGAMMA_FIXTURES {
        let got = log_gamma(x).unwrap();
        if want == 0.0 {
            assert!(got.abs() < 1e-13, "x={x}: {got}");
        } else {
            assert!(rel_err(got, want) < 1e-13, "x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn log_gamma_rejects_nonpositive_and_nonfinite() {
    for bad in [0.0, -1.0, -0.5, f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
        assert!(log_gamma(bad).is_err(), "accepted {bad}");
    }
}

proptest! {
    /// ln Γ(x+1) = ln Γ(x) + ln x across nine orders of magnitude.
    #[test]
    fn log_gamma_functional_equation(x in 1e-3f64..1e4) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        let scale = lhs.abs().max(1.0);
        prop_assert!((lhs - rhs).abs() < 1e-11 * scale, "x={x}: {lhs} vs {rhs}");
    }
}

#[test]
fn gamma_ratio_through_log_difference() {
    // Γ(5.25)/Γ(3.75), frozen independently.
    let ratio = (log_gamma(5.25).unwrap() - log_gamma(3.75).unwrap()).exp();
    assert!(rel_err(ratio, 7.9610454708687807857) < 1e-13, "{ratio}");
}

#[test]
fn lambda_matches_frozen_values() {
    // (n, gamma, j, value) with Q = 2n+2.
    let cases: &[(usize, f64, usize, f64)] = &[
        (1, 0.8, 0, 0.59580206532125138),
        (1, 0.8, 1, 1.3902048190829199),
        (1, 0.8, 2, 2.0853072286243798),
        (1, 0.8, 3, 2.7269402220472659),
        (2, 1.3, 0, 0.9645058486129667),
        (2, 1.3, 1, 2.4396324406092687),
        (2, 1.3, 2, 4.1539687502265927),
        (3, 2.6, 5, 127.97042930110454),
    ];
    for &(n, gamma, j, want) in cases {
        let got = lambda(n, gamma, j).unwrap();
        assert!(rel_err(got, want) < 1e-12, "n={n} γ={gamma} j={j}: {got} vs {want}");
    }
}

#[test]
fn lambda_rejects_gamma_outside_spectral_window() {
    // Valid window is (0, Q/2) = (0, n+1).
    assert!(lambda(1, 0.0, 0).is_err());
    assert!(lambda(1, 2.0, 0).is_err());
    assert!(lambda(1, -0.3, 0).is_err());
    assert!(lambda(2, 3.0, 1).is_err());
    assert!(lambda(2, 2.999, 1).is_ok());
}

proptest! {
    /// λ_{j+1}/λ_j = ((Q+2γ)/4 + j)/((Q−2γ)/4 + j): the ratio form is exact,
    /// so consecutive values must track it to rounding.
    #[test]
    fn lambda_neighbor_ratio(n in 1usize..5, gamma in 0.05f64..0.95, j in 0usize..40) {
        let q = (2 * n + 2) as f64;
        // gamma as fraction of the window keeps it valid for every n.
        let g = gamma * q / 2.0;
        let cur = lambda(n, g, j).unwrap();
        let next = lambda(n, g, j + 1).unwrap();
        let want = ((q + 2.0 * g) / 4.0 + j as f64) / ((q - 2.0 * g) / 4.0 + j as f64);
        prop_assert!(rel_err(next / cur, want) < 1e-11, "ratio {} vs {want}", next / cur);
    }

    /// λ_j(γ) is positive and strictly increasing in j (the step ratio
    /// (a+j)/(b+j) exceeds 1 because a − b = γ > 0).
    #[test]
    fn lambda_monotone_in_j(n in 1usize..4, j in 0usize..20) {
        let a = lambda(n, 0.7, j).unwrap();
        let b = lambda(n, 0.7, j + 1).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!(b > a);
    }
}

#[test]
fn fundamental_constant_matches_frozen_values() {
    let cases: &[(usize, f64, f64)] = &[
        (1, 1.0, 0.31830988618379067), // = 1/π
        (2, 1.0, 0.064503068866398978),
        (1, 1.3, 0.59448091732285979),
        (1, 0.8, 0.22170174356909831),
        (3, 2.5, 0.016400115184558551),
    ];
    for &(n, gamma, want) in cases {
        let got = fundamental_constant(n, gamma).unwrap();
        assert!(rel_err(got, want) < 1e-12, "n={n} γ={gamma}: {got} vs {want}");
    }
    assert!(
        rel_err(fundamental_constant(1, 1.0).unwrap(), std::f64::consts::FRAC_1_PI) < 1e-13
    );
}

#[test]
fn sharp_sobolev_constant_matches_frozen_values() {
    let cases: &[(usize, f64, f64)] = &[
        (1, 1.0, 0.90031631615710607),
        (2, 1.0, 0.31830988618379067),
        (1, 0.8, 0.85440561714816327),
        (1, 1.3, 1.151343350682686),
    ];
    for &(n, gamma, want) in cases {
        let got = sharp_sobolev_constant(n, gamma).unwrap();
        assert!(rel_err(got, want) < 1e-12, "n={n} γ={gamma}: {got} vs {want}");
    }
}

#[test]
fn sharp_constant_lambda_zero_relation() {
    // C(γ,n) λ_0(γ)² ω^{γ/(n+1)} = 1 exactly; ties the three constants together.
    for (n, gamma) in [(1usize, 1.0f64), (1, 0.8), (2, 1.3), (3, 0.5)] {
        let c = sharp_sobolev_constant(n, gamma).unwrap();
        let l0 = lambda(n, gamma, 0).unwrap();
        let omega = surface_measure(n);
        let prod = c * l0 * l0 * omega.powf(gamma / (n as f64 + 1.0));
        assert!((prod - 1.0).abs() < 1e-12, "n={n} γ={gamma}: {prod}");
    }
}

#[test]
fn jacobi_special_values_at_one() {
    // P_k^{(α,β)}(1) = C(k+α, k).
    for (k, alpha, want) in [
        (0usize, 0.0f64, 1.0f64),
        (1, 0.0, 1.0),
        (3, 0.0, 1.0),
        (1, 2.0, 3.0),
        (2, 2.0, 6.0),
        (3, 1.0, 4.0),
        (4, 3.0, 35.0),
    ] {
        for beta in [0.0, 1.0, 2.5] {
            let got = jacobi_eval(JacobiParams { k, alpha, beta }, 1.0);
            assert!(rel_err(got, want) < 1e-13, "k={k} α={alpha} β={beta}: {got}");
        }
    }
}

#[test]
fn jacobi_degree_one_closed_form() {
    // P_1^{(α,β)}(x) = (α+1) + (α+β+2)(x−1)/2.
    for (alpha, beta) in [(0.0f64, 0.0f64), (1.0, 0.0), (2.0, 3.0), (0.5, 1.5)] {
        for i in 0..9 {
            let x = -1.0 + 0.25 * i as f64;
            let want = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0;
            let got = jacobi_eval(JacobiParams { k: 1, alpha, beta }, x);
            assert!((got - want).abs() < 1e-13);
        }
    }
}

#[test]
fn jacobi_orthogonality_under_weight() {
    // ∫_{-1}^{1} P_j^{(α,0)} P_k^{(α,0)} (1−x)^α dx = 0 for j ≠ k; quadrature
    // order 40 is exact for the integrand degrees involved.
    let (xs, ws) = gauss_legendre_01(40);
    for alpha in [0.0f64, 1.0, 2.0] {
        for j in 0..6usize {
            for k in 0..6usize {
                if j == k {
                    continue;
                }
                let mut s = 0.0;
                for (x01, w) in xs.iter().zip(&ws) {
                    let x = 2.0 * x01 - 1.0;
                    let pj = jacobi_eval(JacobiParams { k: j, alpha, beta: 0.0 }, x);
                    let pk = jacobi_eval(JacobiParams { k, alpha, beta: 0.0 }, x);
                    s += 2.0 * w * pj * pk * (1.0 - x).powf(alpha);
                }
                assert!(s.abs() < 1e-12, "α={alpha} ({j},{k}): {s}");
            }
        }
    }
}

#[test]
fn legendre_endpoint_values() {
    for j in 0..30usize {
        assert_eq!(legendre_eval(j, 1.0), 1.0, "P_{j}(1)");
        let at_minus = legendre_eval(j, -1.0);
        let want = if j % 2 == 0 { 1.0 } else { -1.0 };
        assert!((at_minus - want).abs() < 1e-12, "P_{j}(−1) = {at_minus}");
    }
}

#[test]
fn legendre_orthogonality_normalization() {
    // ∫_{-1}^{1} P_j P_k dx = 2/(2j+1) δ_{jk}.
    let (xs, ws) = gauss_legendre_01(32);
    for j in 0..10usize {
        for k in 0..10usize {
            let mut s = 0.0;
            for (x01, w) in xs.iter().zip(&ws) {
                let x = 2.0 * x01 - 1.0;
                s += 2.0 * w * legendre_eval(j, x) * legendre_eval(k, x);
            }
            let want = if j == k { 2.0 / (2.0 * j as f64 + 1.0) } else { 0.0 };
            assert!((s - want).abs() < 1e-13, "({j},{k}): {s} vs {want}");
        }
    }
}

proptest! {
    /// Jacobi at (α,β) = (0,0) coincides with Legendre everywhere.
    #[test]
    fn jacobi_legendre_agreement(k in 0usize..15, x in -1.0f64..1.0) {
        let j = jacobi_eval(JacobiParams { k, alpha: 0.0, beta: 0.0 }, x);
        let l = legendre_eval(k, x);
        prop_assert!((j - l).abs() < 1e-11, "k={k} x={x}: {j} vs {l}");
    }
}

#[test]
fn gauss_legendre_high_order_exactness() {
    // m = 32 integrates monomials up to degree 63 on [0,1] exactly.
    let (xs, ws) = gauss_legendre_01(32);
    for d in [0u32, 1, 5, 20, 40, 63] {
        let s: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(d as i32)).sum();
        let want = 1.0 / (d as f64 + 1.0);
        assert!(rel_err(s, want) < 1e-13, "degree {d}: {s}");
    }
}

#[test]
fn gauss_legendre_structure() {
    for m in [1usize, 2, 7, 16, 33] {
        let (xs, ws) = gauss_legendre_01(m);
        assert_eq!(xs.len(), m);
        let total: f64 = ws.iter().sum();
        assert!((total - 1.0).abs() < 1e-14, "m={m}: Σw = {total}");
        assert!(ws.iter().all(|&w| w > 0.0));
        assert!(xs.windows(2).all(|p| p[0] < p[1]), "nodes sorted, m={m}");
        // Symmetry about 1/2.
        for i in 0..m {
            assert!((xs[i] + xs[m - 1 - i] - 1.0).abs() < 1e-14);
            assert!((ws[i] - ws[m - 1 - i]).abs() < 1e-14);
        }
    }
}

#[test]
fn lambda_large_j_stays_finite() {
    // Log-space evaluation must not overflow where naive Gamma ratios would.
    let v = special::lambda(1, 1.0, 5000).unwrap();
    assert!(v.is_finite());
    assert!(rel_err(v, 5000.5) < 1e-11);
}
