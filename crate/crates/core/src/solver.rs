//! Variational engine on the invariant subspace at n = 1.
//!
//! The Ĝ₁-invariant functions on S³ that are odd under the coordinate swap
//! reduce exactly to odd Legendre series in x = |η₁|²: U(η) = Σ a_j P_j(2x−1)
//! over odd j. The law of x under the uniform sphere measure is uniform on
//! [0,1], so every sphere integral of U collapses to a 1-D integral. The
//! solver minimizes the Nehari quotient R(v) = q(v)/‖v‖_p² in this basis and
//! rescales onto the Nehari manifold, producing a sign-changing critical
//! point of the energy q/2 − ‖·‖_p^p/p.
//!
//! The descent uses a diagonal preconditioner 1/w_j (the quadratic form is
//! exactly diagonal) and Armijo backtracking with a roundoff allowance of
//! 16·eps·|R|: near the minimizer the achievable decrease drops below the
//! ulp of R itself and a strict Armijo test would stall the line search at
//! vanishing steps. Descent iterates stay normalized; the quotient is scale
//! invariant, so the radial direction is pure null space.

use serde::{Deserialize, Serialize};

use crate::heisenberg::HeisenbergPoint;
use crate::operators::{self, DiagonalExpansion};
use crate::sphere::surface_measure;
use crate::{admissible, critical_exponent, special, Error, Result};
use std::fmt::Write as _;

pub const DEFAULT_GRAD_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 100_000;
/// Grid values below this magnitude are treated as zeros in nodal counting;
/// they sit below the quadrature noise floor.
pub const NODAL_ZERO_THRESHOLD: f64 = 1e-10;
/// Perturbation scale on the higher modes of the initial iterate.
pub const INIT_NOISE: f64 = 1e-2;

const ARMIJO_SLOPE: f64 = 1e-4;
const ARMIJO_FACTOR: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;
/// RNG stream carrying the initializer noise.
const INIT_STREAM: u64 = 7001;

/// Odd Legendre profile at n = 1: coeffs[k] multiplies P_{2k+1}(2x−1), with
/// x = |η₁|². The basis makes the represented sphere function torus-invariant
/// and odd under x ↦ 1−x, hence Ĝ₁-invariant for the signed action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedProfile {
    pub gamma: f64,
    pub coeffs: Vec<f64>,
}

impl ReducedProfile {
    pub fn new(gamma: f64, coeffs: Vec<f64>) -> Self {
        Self { gamma, coeffs }
    }

    /// The odd mode indices 1, 3, …, 2M−1.
    pub fn modes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.coeffs.len()).map(|k| 2 * k + 1)
    }

    /// (j, a_j) pairs.
    pub fn coefficient_pairs(&self) -> Vec<(usize, f64)> {
        self.modes().zip(self.coeffs.iter().copied()).collect()
    }

    /// U(x) = Σ a_j P_j(2x−1) for x ∈ [0, 1].
    pub fn eval(&self, x: f64) -> f64 {
        let s = 2.0 * x - 1.0;
        self.coefficient_pairs()
            .iter()
            .map(|&(j, a)| a * special::legendre_eval(j, s))
            .sum()
    }

    /// The sphere representation as an exact diagonal zonal expansion.
    pub fn lift(&self) -> DiagonalExpansion {
        DiagonalExpansion::new(self.coefficient_pairs())
    }
}

/// Configuration for [`solve_nodal`]. `quad_nodes` must be at least 4(M+1);
/// the constructor picks exactly that.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub gamma: f64,
    pub basis_size: usize,
    pub quad_nodes: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub seed: u64,
}

impl SolveConfig {
    pub fn new(gamma: f64, basis_size: usize, seed: u64) -> Self {
        Self {
            gamma,
            basis_size,
            quad_nodes: 4 * (basis_size + 1),
            max_iters: DEFAULT_MAX_ITERS,
            grad_tol: DEFAULT_GRAD_TOL,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.basis_size == 0 {
            return Err(Error::Domain("basis_size must be positive".into()));
        }
        if self.quad_nodes < 4 * (self.basis_size + 1) {
            return Err(Error::Domain(format!(
                "quad_nodes = {} too small for basis_size = {}; need at least {}",
                self.quad_nodes,
                self.basis_size,
                4 * (self.basis_size + 1)
            )));
        }
        let report = admissible::admissibility_f64(1, self.gamma)?;
        if !report.admissible {
            return Err(Error::Domain(format!(
                "gamma = {} is not admissible at n = 1; need gamma in [1, 4/3)",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Converged output of [`solve_nodal`]. `nehari_value` is the common value of
/// q(U) and ‖U‖_p^p on the Nehari manifold; they agree within a tolerance
/// consistent with `grad_norm`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveResult {
    pub config: SolveConfig,
    pub profile: ReducedProfile,
    pub energy: f64,
    pub grad_norm: f64,
    pub sign_changes: usize,
    pub nehari_value: f64,
    pub iterations: usize,
}

/// Numerical context for the reduction: mode weights and the fixed
/// Gauss–Legendre rule on [0,1].
struct ReducedQuadrature {
    p: f64,
    omega: f64,
    wj: Vec<f64>,
    weights: Vec<f64>,
    /// basis[m][node] = P_{2m+1}(2 x_node − 1).
    basis: Vec<Vec<f64>>,
}

impl ReducedQuadrature {
    fn build(gamma: f64, modes: usize, quad_nodes: usize) -> Result<Self> {
        let omega = surface_measure(1);
        let p = critical_exponent(1, gamma);
        let (nodes, weights) = special::gauss_legendre_01(quad_nodes);
        let mut wj = Vec::with_capacity(modes);
        let mut basis = Vec::with_capacity(modes);
        for k in 0..modes {
            let j = 2 * k + 1;
            let lam = special::lambda(1, gamma, j)?;
            wj.push(omega * lam * lam / (2.0 * j as f64 + 1.0));
            basis.push(
                nodes
                    .iter()
                    .map(|&x| special::legendre_eval(j, 2.0 * x - 1.0))
                    .collect(),
            );
        }
        Ok(Self {
            p,
            omega,
            wj,
            weights,
            basis,
        })
    }

    fn modes(&self) -> usize {
        self.wj.len()
    }

    /// q(a) = Σ w_j a_j².
    fn quadratic(&self, a: &[f64]) -> f64 {
        self.wj.iter().zip(a).map(|(w, c)| w * c * c).sum()
    }

    /// U at every quadrature node.
    fn values(&self, a: &[f64]) -> Vec<f64> {
        let nn = self.weights.len();
        let mut u = vec![0.0; nn];
        for (row, &c) in self.basis.iter().zip(a) {
            for (ui, &bi) in u.iter_mut().zip(row) {
                *ui += c * bi;
            }
        }
        u
    }

    /// ‖U‖_p^p = ω₃ ∫₀¹ |U|^p dx.
    fn pnorm_p(&self, a: &[f64]) -> f64 {
        let u = self.values(a);
        self.omega
            * self
                .weights
                .iter()
                .zip(&u)
                .map(|(w, ui)| w * ui.abs().powf(self.p))
                .sum::<f64>()
    }

    /// b_j(a) = ω₃ ∫₀¹ |U|^{p−2} U P_j dx, the nonlinear pairing.
    fn pairing(&self, a: &[f64]) -> Vec<f64> {
        let u = self.values(a);
        let f: Vec<f64> = u
            .iter()
            .zip(&self.weights)
            .map(|(ui, w)| w * ui.abs().powf(self.p - 2.0) * ui)
            .collect();
        self.basis
            .iter()
            .map(|row| self.omega * row.iter().zip(&f).map(|(b, fi)| b * fi).sum::<f64>())
            .collect()
    }

    /// Scale-invariant quotient R(a) = q(a)/‖U‖_p².
    fn quotient(&self, a: &[f64]) -> f64 {
        self.quadratic(a) / self.pnorm_p(a).powf(2.0 / self.p)
    }

    /// ∇R(a) = 2(w_j a_j − (q/P) b_j)/P^{2/p}.
    fn quotient_grad(&self, a: &[f64]) -> Vec<f64> {
        let q = self.quadratic(a);
        let pn = self.pnorm_p(a);
        let b = self.pairing(a);
        let scale = 2.0 / pn.powf(2.0 / self.p);
        (0..self.modes())
            .map(|m| scale * (self.wj[m] * a[m] - (q / pn) * b[m]))
            .collect()
    }

    /// Euler–Lagrange components w_j a_j − b_j, the exact gradient of the
    /// energy q/2 − ‖·‖_p^p/p.
    fn euler_lagrange(&self, a: &[f64]) -> Vec<f64> {
        let b = self.pairing(a);
        (0..self.modes()).map(|m| self.wj[m] * a[m] - b[m]).collect()
    }

    fn energy(&self, a: &[f64]) -> f64 {
        self.quadratic(a) / 2.0 - self.pnorm_p(a) / self.p
    }
}

fn quadrature_for(profile: &ReducedProfile, quad_nodes: usize) -> Result<ReducedQuadrature> {
    ReducedQuadrature::build(profile.gamma, profile.coeffs.len(), quad_nodes)
}

fn default_nodes(profile: &ReducedProfile) -> usize {
    4 * (profile.coeffs.len() + 1)
}

/// q(U) = ω₃ Σ_{j odd} λ_j(γ)² a_j²/(2j+1), exactly diagonal in the mode
/// basis.
pub fn reduced_quadratic_form(profile: &ReducedProfile) -> Result<f64> {
    let omega = surface_measure(1);
    let mut acc = 0.0;
    for (j, a) in profile.coefficient_pairs() {
        let lam = special::lambda(1, profile.gamma, j)?;
        acc += lam * lam * a * a / (2.0 * j as f64 + 1.0);
    }
    Ok(omega * acc)
}

/// ‖U‖_p^p by Gauss–Legendre on [0,1].
pub fn reduced_pnorm(profile: &ReducedProfile, quad_nodes: usize) -> Result<f64> {
    Ok(quadrature_for(profile, quad_nodes)?.pnorm_p(&profile.coeffs))
}

/// E(U) = q(U)/2 − ‖U‖_p^p/p with the default quadrature 4(M+1).
pub fn energy(profile: &ReducedProfile) -> Result<f64> {
    energy_quad(profile, default_nodes(profile))
}

pub fn energy_quad(profile: &ReducedProfile, quad_nodes: usize) -> Result<f64> {
    Ok(quadrature_for(profile, quad_nodes)?.energy(&profile.coeffs))
}

/// The energy gradient components w_j a_j − b_j(a).
pub fn euler_lagrange(profile: &ReducedProfile, quad_nodes: usize) -> Result<Vec<f64>> {
    Ok(quadrature_for(profile, quad_nodes)?.euler_lagrange(&profile.coeffs))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Minimizes the Nehari quotient by preconditioned projected descent and
/// returns the Nehari-rescaled critical point. Deterministic for a fixed
/// seed. Fails with diagnostics if the Euler–Lagrange residual does not
/// reach `grad_tol` within `max_iters`.
pub fn solve_nodal(cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let quad = ReducedQuadrature::build(cfg.gamma, cfg.basis_size, cfg.quad_nodes)?;
    let m = cfg.basis_size;

    // a₁ carries the seed mode; higher modes get a small seeded kick so the
    // iterate is not stuck on the one-mode ray (a critical point itself).
    let mut a = vec![0.0; m];
    a[0] = 1.0;
    let mut rng = crate::sphere::chunk_rng(cfg.seed, INIT_STREAM, 0);
    for slot in a.iter_mut().skip(1) {
        let (g, _) = crate::sphere::normal_pair(&mut rng);
        *slot += INIT_NOISE * g;
    }

    let mut step = 1.0f64;
    let mut el_norm = f64::INFINITY;
    let mut rescaled = a.clone();
    for it in 0..cfg.max_iters {
        let gr = quad.quotient_grad(&a);
        let dir: Vec<f64> = gr.iter().zip(&quad.wj).map(|(g, w)| -g / w).collect();
        let rv = quad.quotient(&a);
        let slope: f64 = gr.iter().zip(&dir).map(|(g, d)| g * d).sum();
        let floor = 16.0 * f64::EPSILON * rv.abs();
        let mut s = step;
        let mut candidate: Vec<f64> = a.iter().zip(&dir).map(|(ai, di)| ai + s * di).collect();
        for _ in 0..MAX_BACKTRACKS {
            if quad.quotient(&candidate) <= rv + ARMIJO_SLOPE * s * slope + floor {
                break;
            }
            s *= ARMIJO_FACTOR;
            candidate = a.iter().zip(&dir).map(|(ai, di)| ai + s * di).collect();
        }
        let nrm = norm(&candidate);
        for (ai, ci) in a.iter_mut().zip(&candidate) {
            *ai = ci / nrm;
        }
        step = (2.0 * s).min(1.0);

        let q = quad.quadratic(&a);
        let pn = quad.pnorm_p(&a);
        let t = (q / pn).powf(1.0 / (quad.p - 2.0));
        rescaled = a.iter().map(|ai| t * ai).collect();
        el_norm = norm(&quad.euler_lagrange(&rescaled));
        if el_norm <= cfg.grad_tol {
            let profile = ReducedProfile::new(cfg.gamma, rescaled);
            let sign_changes = nodal_count(&profile, 256);
            let energy = quad.energy(&profile.coeffs);
            let nehari_value = quad.quadratic(&profile.coeffs);
            return Ok(SolveResult {
                config: cfg.clone(),
                profile,
                energy,
                grad_norm: el_norm,
                sign_changes,
                nehari_value,
                iterations: it + 1,
            });
        }
    }
    let _ = rescaled;
    Err(Error::NoConvergence {
        iters: cfg.max_iters,
        residual: el_norm,
        target: cfg.grad_tol,
    })
}

/// Sign changes of U on a uniform grid over [0,1]; values below
/// [`NODAL_ZERO_THRESHOLD`] are skipped, so the structural zero at x = 1/2
/// never double-counts.
pub fn nodal_count(profile: &ReducedProfile, grid: usize) -> usize {
    assert!(grid >= 64, "nodal grid must have at least 64 points");
    let mut changes = 0;
    let mut last_sign = 0i8;
    for i in 0..grid {
        let x = i as f64 / (grid - 1) as f64;
        let u = profile.eval(x);
        if u.abs() < NODAL_ZERO_THRESHOLD {
            continue;
        }
        let sign = if u > 0.0 { 1 } else { -1 };
        if last_sign != 0 && sign != last_sign {
            changes += 1;
        }
        last_sign = sign;
    }
    changes
}

/// Values of the Heisenberg-side solution u = (2 Jac_C)^{(Q−2γ)/(2Q)}·(U ∘ C)
/// at the sample points.
pub fn pullback_solution(res: &SolveResult, samples: &[HeisenbergPoint]) -> Result<Vec<f64>> {
    let lift = res.profile.lift();
    let gamma = res.profile.gamma;
    samples
        .iter()
        .map(|w| {
            if w.n() != 1 {
                return Err(Error::Dimension(format!(
                    "profile lives on S³; sample point is in H^{}",
                    w.n()
                )));
            }
            Ok(operators::pullback_to_heisenberg(
                |eta| lift.eval(eta),
                gamma,
                w,
            ))
        })
        .collect()
}

/// CSV rendering "x,u" of the profile on a uniform grid.
pub fn profile_csv(profile: &ReducedProfile, grid: usize) -> String {
    assert!(grid >= 2, "need at least the two endpoints");
    let mut out = String::from("x,u\n");
    for i in 0..grid {
        let x = i as f64 / (grid - 1) as f64;
        let _ = writeln!(out, "{x},{}", profile.eval(x));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quadratic_form_single_mode() {
        let p = ReducedProfile::new(1.0, vec![1.0]);
        let q = reduced_quadratic_form(&p).unwrap();
        // λ₁(1) = 3/2 and ‖P₁‖² = 1/3 give 2π²·(9/4)/3.
        assert_relative_eq!(
            q,
            1.5 * std::f64::consts::PI.powi(2),
            max_relative = 1e-13
        );
    }

    #[test]
    fn pnorm_single_mode_quartic() {
        let p = ReducedProfile::new(1.0, vec![1.0]);
        let v = reduced_pnorm(&p, 16).unwrap();
        assert_relative_eq!(
            v,
            2.0 * std::f64::consts::PI.powi(2) / 5.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn nodal_counts_match_legendre_roots() {
        assert_eq!(nodal_count(&ReducedProfile::new(1.0, vec![1.0]), 257), 1);
        assert_eq!(
            nodal_count(&ReducedProfile::new(1.0, vec![0.0, 1.0]), 257),
            3
        );
    }

    #[test]
    fn solve_reaches_tolerance_and_changes_sign() {
        let res = solve_nodal(&SolveConfig::new(1.2, 6, 7)).unwrap();
        assert!(res.grad_norm <= 1e-8);
        assert!(res.sign_changes >= 1);
        let q = reduced_quadratic_form(&res.profile).unwrap();
        let pn = reduced_pnorm(&res.profile, res.config.quad_nodes).unwrap();
        assert!((q - pn).abs() / q < 1e-7, "nehari defect {}", (q - pn).abs() / q);
        assert!((res.nehari_value - q).abs() / q < 1e-12);
    }

    #[test]
    fn solve_is_deterministic() {
        let a = solve_nodal(&SolveConfig::new(1.0, 5, 3)).unwrap();
        let b = solve_nodal(&SolveConfig::new(1.0, 5, 3)).unwrap();
        assert_eq!(a.profile.coeffs, b.profile.coeffs);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn invalid_gamma_rejected() {
        assert!(solve_nodal(&SolveConfig::new(0.9, 4, 1)).is_err());
        assert!(solve_nodal(&SolveConfig::new(4.0 / 3.0 + 1e-3, 4, 1)).is_err());
    }
}
