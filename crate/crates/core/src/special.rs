//! Special-function kernel: log-Gamma, the Gamma-ratio eigenvalues λ_j(γ),
//! Jacobi and Legendre polynomials, Gauss–Legendre quadrature, and the
//! closed-form constants of the sharp Sobolev inequality and of the singular
//! integral kernel.

use crate::{homogeneous_dim, sphere, Error, Result};

/// Lanczos coefficients, g = 7, 9 terms. Relative error below 1e-14 on the
/// half-line after reflection.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_74;

/// Natural log of the Gamma function for x > 0.
///
/// Relative accuracy is 1e-13 or better on [0.5, 1e6]; arguments in (0, 0.5)
/// go through the reflection formula.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        // ln Γ(x) = ln(π / sin πx) − ln Γ(1−x)
        let reflected = log_gamma(1.0 - x)?;
        return Ok((std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln() - reflected);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(LN_SQRT_TWO_PI + (z + 0.5) * t.ln() - t + acc.ln())
}

/// Parameters of the spectral eigenvalue ratio λ_j(γ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatioParams {
    pub n: usize,
    pub gamma: f64,
    pub j: usize,
}

impl GammaRatioParams {
    pub fn new(n: usize, gamma: f64, j: usize) -> Result<Self> {
        let q = homogeneous_dim(n) as f64;
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        if !(gamma > 0.0 && gamma < q / 2.0) {
            return Err(Error::Domain(format!(
                "gamma must lie in (0, {}), got {gamma}",
                q / 2.0
            )));
        }
        Ok(Self { n, gamma, j })
    }
}

/// λ_j(γ) = Γ((Q+2γ)/4 + j) / Γ((Q−2γ)/4 + j), the spectral multiplier of the
/// intertwining operator on bidegree blocks.
///
/// Computed as exp of a log-Gamma difference so large j never overflows.
pub fn lambda_gamma(p: GammaRatioParams) -> Result<f64> {
    let q = homogeneous_dim(p.n) as f64;
    let a = (q + 2.0 * p.gamma) / 4.0 + p.j as f64;
    let b = (q - 2.0 * p.gamma) / 4.0 + p.j as f64;
    Ok((log_gamma(a)? - log_gamma(b)?).exp())
}

/// Convenience wrapper: λ_j(γ) for valid (n, γ).
pub fn lambda(n: usize, gamma: f64, j: usize) -> Result<f64> {
    lambda_gamma(GammaRatioParams::new(n, gamma, j)?)
}

/// Jacobi polynomial parameters: degree k with exponents (α, β), both > −1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
}

/// Value of the Jacobi polynomial P_k^{(α,β)}(x) by forward three-term
/// recurrence. Stable on [−1, 1] for the parameter ranges used here
/// (α ≤ 7, small β); arguments outside [−1, 1] are accepted.
pub fn jacobi_eval(p: JacobiParams, x: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if p.k == 0 {
        return 1.0;
    }
    let mut pm = 1.0;
    let mut pc = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for m in 2..=p.k {
        let mf = m as f64;
        let c = 2.0 * mf + a + b;
        // 2m(m+a+b)(c−2) P_m = (c−1)[c(c−2)x + a²−b²] P_{m−1} − 2(m+a−1)(m+b−1)c P_{m−2}
        let num1 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
        let num2 = 2.0 * (mf + a - 1.0) * (mf + b - 1.0) * c;
        let den = 2.0 * mf * (mf + a + b) * (c - 2.0);
        let next = (num1 * pc - num2 * pm) / den;
        pm = pc;
        pc = next;
    }
    pc
}

/// Legendre polynomial P_j(x) by the Bonnet recurrence.
pub fn legendre_eval(j: usize, x: f64) -> f64 {
    match j {
        0 => 1.0,
        1 => x,
        _ => {
            let mut pm = 1.0;
            let mut pc = x;
            for m in 1..j {
                let mf = m as f64;
                let next = ((2.0 * mf + 1.0) * x * pc - mf * pm) / (mf + 1.0);
                pm = pc;
                pc = next;
            }
            pc
        }
    }
}

/// Sharp Sobolev constant C(γ, n) = Γ((n+1−γ)/2)² / Γ((n+1+γ)/2)² · ω_{2n+1}^{−γ/(n+1)}.
pub fn sharp_sobolev_constant(n: usize, gamma: f64) -> Result<f64> {
    let np1 = (n + 1) as f64;
    if !(gamma > 0.0 && gamma < np1) {
        return Err(Error::Domain(format!(
            "sharp Sobolev constant needs gamma in (0, {np1}), got {gamma}"
        )));
    }
    let num = log_gamma((np1 - gamma) / 2.0)?;
    let den = log_gamma((np1 + gamma) / 2.0)?;
    let omega = sphere::surface_measure(n);
    Ok((2.0 * (num - den) - gamma / np1 * omega.ln()).exp())
}

/// Kernel constant c_γ = 2^{n−γ} Γ((Q−2γ)/4)² / (π^{n+1} Γ(γ)) of the
/// singular integral operator.
pub fn fundamental_constant(n: usize, gamma: f64) -> Result<f64> {
    let q = homogeneous_dim(n) as f64;
    if !(gamma > 0.0 && gamma < q / 2.0) {
        return Err(Error::Domain(format!(
            "fundamental constant needs gamma in (0, {}), got {gamma}",
            q / 2.0
        )));
    }
    let ln = (n as f64 - gamma) * std::f64::consts::LN_2
        + 2.0 * log_gamma((q - 2.0 * gamma) / 4.0)?
        - (n as f64 + 1.0) * std::f64::consts::PI.ln()
        - log_gamma(gamma)?;
    Ok(ln.exp())
}

/// Gauss–Legendre nodes and weights on [0, 1].
///
/// Nodes by Newton iteration on P_m with the Chebyshev initial guess;
/// converges to machine precision in a handful of steps.
pub fn gauss_legendre_01(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    // Symmetric rule: compute the upper half on [-1,1] and mirror.
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let p = legendre_eval(m, x);
            let pm1 = legendre_eval(m - 1, x);
            dp = m as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    // Map [-1,1] -> [0,1].
    for i in 0..m {
        nodes[i] = 0.5 * (nodes[i] + 1.0);
        weights[i] *= 0.5;
    }
    (nodes, weights)
}
