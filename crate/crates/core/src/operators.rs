//! Spectral operators on the CR sphere: the intertwining operator A_γ, the
//! H^γ inner product, the Funk–Hecke operator K_γ, the sharp Sobolev
//! inequality check, the constant solution, pullback to the Heisenberg side,
//! and the convolution fixed-point residual.
//!
//! Two independent numerical routes exist for the γ-form: a kernel route
//! (projections via zonal kernels, L² pairings by paired Monte Carlo) and a
//! spectral route (exact eigenvalue action on explicitly known expansions,
//! integrated per the defining formula). Test suites hold them against each
//! other; production code may use either.

use num_complex::Complex64;

use crate::harmonics::{Bidegree, ProjectedComponent, ZonalKernel};
use crate::heisenberg::{self, HeisenbergPoint};
use crate::special::{self, fundamental_constant, legendre_eval};
use crate::sphere::{
    self, hermitian_pair, surface_measure, McEstimate, MomEstimate, QuadratureSpec, SpherePoint,
};
use crate::{critical_exponent, homogeneous_dim, Error, Result};

/// Shard count for singular-kernel median-of-means estimates.
pub const MOM_SHARDS: usize = 32;

/// Spectral multiplier λ_j(γ)λ_k(γ) of A_γ on H_{j,k}.
pub fn a_gamma_eigenvalue(n: usize, gamma: f64, d: Bidegree) -> Result<f64> {
    Ok(special::lambda(n, gamma, d.j)? * special::lambda(n, gamma, d.k)?)
}

/// Funk–Hecke eigenvalue 2^{Q/2−γ}/(λ_j(γ)λ_k(γ)) of K_γ on H_{j,k}.
pub fn funk_hecke_eigenvalue(n: usize, gamma: f64, d: Bidegree) -> Result<f64> {
    let q = homogeneous_dim(n) as f64;
    Ok(2f64.powf(q / 2.0 - gamma) / a_gamma_eigenvalue(n, gamma, d)?)
}

/// A quadratic-form value with Monte Carlo error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFormValue {
    pub value: f64,
    pub std_error: f64,
}

/// A function on S^{2n+1} represented through its Monte Carlo projections onto
/// a fixed set of bidegree blocks, all sharing one drawn sample set.
pub struct SpectralExpansion {
    n: usize,
    gamma: f64,
    spec: QuadratureSpec,
    samples: std::sync::Arc<Vec<SpherePoint>>,
    values: std::sync::Arc<Vec<f64>>,
    /// (bidegree, kernel, λ_j λ_k), in construction order.
    blocks: Vec<(Bidegree, ZonalKernel, f64)>,
}

impl SpectralExpansion {
    /// Projects `u` onto the given bidegree blocks; samples are drawn once and
    /// shared by every block.
    pub fn project<F>(
        u: F,
        n: usize,
        gamma: f64,
        bidegrees: &[Bidegree],
        spec: QuadratureSpec,
    ) -> Result<Self>
    where
        F: Fn(&SpherePoint) -> f64 + Sync,
    {
        let samples = sphere::sample_uniform(n, spec);
        let values: Vec<f64> = samples.iter().map(|p| u(p)).collect();
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "expansion source returned {} at sample {bad}",
                values[bad]
            )));
        }
        let mut blocks = Vec::with_capacity(bidegrees.len());
        for &d in bidegrees {
            blocks.push((d, ZonalKernel::new(n, d), a_gamma_eigenvalue(n, gamma, d)?));
        }
        Ok(Self {
            n,
            gamma,
            spec,
            samples: std::sync::Arc::new(samples),
            values: std::sync::Arc::new(values),
            blocks,
        })
    }

    /// Diagonal truncation (j, j) for j = 0..=cap.
    pub fn project_diagonal<F>(
        u: F,
        n: usize,
        gamma: f64,
        cap: usize,
        spec: QuadratureSpec,
    ) -> Result<Self>
    where
        F: Fn(&SpherePoint) -> f64 + Sync,
    {
        let ds: Vec<Bidegree> = (0..=cap).map(|j| Bidegree::new(j, j)).collect();
        Self::project(u, n, gamma, &ds, spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn spec(&self) -> QuadratureSpec {
        self.spec
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.blocks.iter().map(|(d, _, _)| *d)
    }

    /// The stored projection onto one block, as a shared-sample evaluator.
    pub fn component(&self, d: Bidegree) -> Option<ProjectedComponent> {
        self.blocks
            .iter()
            .find(|(b, _, _)| *b == d)
            .map(|_| crate::harmonics::component_from_parts(
                ZonalKernel::new(self.n, d),
                self.samples.clone(),
                self.values.clone(),
            ))
    }

    /// (A_γ U)(ζ) = Σ_d λ_j λ_k (P_d U)(ζ), estimated in a single pass so the
    /// standard error accounts for the shared sample set.
    pub fn apply_a_gamma_at(&self, zeta: &SpherePoint) -> Result<McEstimate> {
        let mut mean = 0.0;
        let mut m2 = 0.0;
        let mut count = 0u64;
        for (eta, &uval) in self.samples.iter().zip(self.values.iter()) {
            let w = hermitian_pair(zeta, eta)?;
            let mut kernel_sum = 0.0;
            for (_, kern, lam) in &self.blocks {
                kernel_sum += lam * kern.eval_from_pair(w).re;
            }
            let x = kernel_sum * uval;
            count += 1;
            let dlt = x - mean;
            mean += dlt / count as f64;
            m2 += dlt * (x - mean);
        }
        let omega = surface_measure(self.n);
        let var = if count > 1 {
            m2 / (count - 1) as f64
        } else {
            0.0
        };
        Ok(McEstimate {
            mean: omega * mean,
            std_error: omega * (var / count as f64).sqrt(),
            sample_count: count as usize,
        })
    }
}

/// (U, V)_γ = Σ_d λ_j λ_k ⟨P_d U, P_d V⟩_{L²} by paired Monte Carlo:
/// ⟨P_d U, P_d V⟩ = ∬ U(a) V(b) Φ_d(a, b) da db through the reproducing
/// property, estimated over paired samples (a from U's set, b from V's set).
///
/// The two expansions must be built on distinct sample streams; identical
/// streams would put the kernel's diagonal bias into the estimate.
pub fn gamma_inner_product(u: &SpectralExpansion, v: &SpectralExpansion) -> Result<QuadraticFormValue> {
    if u.n != v.n {
        return Err(Error::Dimension("expansions on different spheres".into()));
    }
    if u.gamma != v.gamma {
        return Err(Error::Domain("expansions at different gamma".into()));
    }
    if u.spec.seed == v.spec.seed && u.spec.stream_id == v.spec.stream_id {
        return Err(Error::Domain(
            "gamma_inner_product needs independent sample streams for its two arguments".into(),
        ));
    }
    if u.blocks.len() != v.blocks.len()
        || u.blocks
            .iter()
            .zip(&v.blocks)
            .any(|((da, _, _), (db, _, _))| da != db)
    {
        return Err(Error::Domain("expansions truncate different blocks".into()));
    }
    let len = u.samples.len().min(v.samples.len());
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut count = 0u64;
    for i in 0..len {
        let a = &u.samples[i];
        let b = &v.samples[i];
        let w = hermitian_pair(a, b)?;
        let mut kernel_sum = 0.0;
        for (_, kern, lam) in &u.blocks {
            kernel_sum += lam * kern.eval_from_pair(w).re;
        }
        let x = u.values[i] * v.values[i] * kernel_sum;
        count += 1;
        let dlt = x - mean;
        mean += dlt / count as f64;
        m2 += dlt * (x - mean);
    }
    let om_sq = surface_measure(u.n).powi(2);
    let var = if count > 1 {
        m2 / (count - 1) as f64
    } else {
        0.0
    };
    Ok(QuadraticFormValue {
        value: om_sq * mean,
        std_error: om_sq * (var / count as f64).sqrt(),
    })
}

/// An exactly-known diagonal expansion at n = 1: U(η) = Σ c_j P_j(2|η₁|²−1).
/// Each term lies in H_{j,j}, so the action of A_γ and all L² pairings are
/// closed-form; this is the independent route the Monte Carlo machinery is
/// tested against.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalExpansion {
    /// (Legendre index j, coefficient c_j).
    pub terms: Vec<(usize, f64)>,
}

impl DiagonalExpansion {
    pub fn new(terms: Vec<(usize, f64)>) -> Self {
        Self { terms }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            terms: vec![(0, c)],
        }
    }

    pub fn eval(&self, eta: &SpherePoint) -> f64 {
        let x = 2.0 * eta.coords()[0].norm_sqr() - 1.0;
        self.terms
            .iter()
            .map(|&(j, c)| c * legendre_eval(j, x))
            .sum()
    }

    /// A_γ applied exactly: scales each term by λ_j(γ)².
    pub fn apply_a_gamma(&self, gamma: f64) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(j, c) in &self.terms {
            let lam = special::lambda(1, gamma, j)?;
            terms.push((j, lam * lam * c));
        }
        Ok(Self { terms })
    }

    /// Exact (U, U)_γ = ω₃ Σ λ_j(γ)² c_j² / (2j+1), from the uniform law of
    /// |η₁|² on S³ and the Legendre normalization ∫₀¹ P_j(2x−1)² dx = 1/(2j+1).
    pub fn gamma_norm_sq(&self, gamma: f64) -> Result<f64> {
        let omega = surface_measure(1);
        let mut acc = 0.0;
        for &(j, c) in &self.terms {
            let lam = special::lambda(1, gamma, j)?;
            acc += lam * lam * c * c / (2.0 * j as f64 + 1.0);
        }
        Ok(omega * acc)
    }

    /// Exact L² norm squared ω₃ Σ c_j²/(2j+1).
    pub fn l2_norm_sq(&self) -> f64 {
        surface_measure(1)
            * self
                .terms
                .iter()
                .map(|&(j, c)| c * c / (2.0 * j as f64 + 1.0))
                .sum::<f64>()
    }

    /// ∫ V̄ · (A_γ U) dη by Monte Carlo with the exact spectral action: the
    /// defining-formula route to the γ-form.
    pub fn gamma_inner_integral(
        &self,
        v: &DiagonalExpansion,
        gamma: f64,
        spec: QuadratureSpec,
    ) -> Result<McEstimate> {
        let au = self.apply_a_gamma(gamma)?;
        sphere::mc_integrate(|eta| v.eval(eta) * au.eval(eta), 1, spec)
    }
}

/// [K_γ ψ](ζ) = c_γ ∫ ψ(η) |1 − ⟨ζ, η̄⟩|^{(2γ−Q)/2} dη, by median-of-means
/// Monte Carlo over 32 shards. Samples coinciding with ζ produce a non-finite
/// kernel and are redrawn.
pub fn funk_hecke_apply<F>(
    psi: F,
    gamma: f64,
    zeta: &SpherePoint,
    spec: QuadratureSpec,
) -> Result<MomEstimate>
where
    F: Fn(&SpherePoint) -> f64 + Sync,
{
    let n = zeta.n();
    let q = homogeneous_dim(n) as f64;
    if !(gamma > 0.0 && gamma < q / 2.0) {
        return Err(Error::Domain(format!(
            "Funk–Hecke operator needs gamma in (0, {}), got {gamma}",
            q / 2.0
        )));
    }
    let c_gamma = fundamental_constant(n, gamma)?;
    let expo = (2.0 * gamma - q) / 2.0;
    let mut est = sphere::mc_median_of_means(
        |eta| {
            let w = hermitian_pair(zeta, eta).expect("dimension fixed");
            let s = (Complex64::new(1.0, 0.0) - w).norm();
            let kern = s.powf(expo);
            kern.is_finite().then(|| psi(eta) * kern)
        },
        n,
        spec,
        MOM_SHARDS,
    )?;
    est.median *= c_gamma;
    est.sigma *= c_gamma;
    for m in est.shard_means.iter_mut() {
        *m *= c_gamma;
    }
    Ok(est)
}

/// Result of a sharp Sobolev inequality evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SobolevCheck {
    /// (∫ |U|^p)^{2/p} with its delta-method standard error.
    pub lhs: f64,
    pub lhs_sigma: f64,
    /// C(γ, n) · (U, U)_γ, exact for diagonal expansions.
    pub rhs: f64,
    /// lhs / rhs and the propagated standard error of the ratio.
    pub ratio: f64,
    pub ratio_sigma: f64,
}

/// Sharp Sobolev inequality for an exact diagonal expansion at n = 1:
/// (∫|U|^p)^{2/p} ≤ C(γ,1)·(U,U)_γ, the left side by Monte Carlo, the right
/// side closed-form. Equality is attained exactly by constants.
pub fn sobolev_check_diagonal(
    u: &DiagonalExpansion,
    gamma: f64,
    spec: QuadratureSpec,
) -> Result<SobolevCheck> {
    let n = 1;
    let p = critical_exponent(n, gamma);
    let integral = sphere::mc_integrate(|eta| u.eval(eta).abs().powf(p), n, spec)?;
    let lhs = integral.mean.powf(2.0 / p);
    // Delta method: d/dI I^{2/p} = (2/p) I^{2/p−1}.
    let lhs_sigma = (2.0 / p) * integral.mean.powf(2.0 / p - 1.0) * integral.std_error;
    let rhs = special::sharp_sobolev_constant(n, gamma)? * u.gamma_norm_sq(gamma)?;
    Ok(SobolevCheck {
        lhs,
        lhs_sigma,
        rhs,
        ratio: lhs / rhs,
        ratio_sigma: lhs_sigma / rhs,
    })
}

/// The constant solution U* = λ_0(γ)^{(Q−2γ)/(2γ)} of the sphere problem.
#[derive(Debug, Clone, Copy)]
pub struct ConstantSolution {
    pub n: usize,
    pub gamma: f64,
    pub value: f64,
}

impl ConstantSolution {
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        let q = homogeneous_dim(n) as f64;
        let lam0 = special::lambda(n, gamma, 0)?;
        Ok(Self {
            n,
            gamma,
            value: lam0.powf((q - 2.0 * gamma) / (2.0 * gamma)),
        })
    }

    /// |λ_0(γ)² U* − U*^{(Q+2γ)/(Q−2γ)}|: the defect in the algebraic
    /// equation the constant solves.
    pub fn algebraic_residual(&self) -> Result<f64> {
        let q = homogeneous_dim(self.n) as f64;
        let lam0 = special::lambda(self.n, self.gamma, 0)?;
        let lhs = lam0 * lam0 * self.value;
        let rhs = self.value.powf((q + 2.0 * self.gamma) / (q - 2.0 * self.gamma));
        Ok((lhs - rhs).abs())
    }

    /// Closed form of the pullback: c_0 · ((1+|z|²)² + t²)^{(2γ−Q)/4} with
    /// c_0 = 2^{(Q−2γ)/2} λ_0(γ)^{(Q−2γ)/(2γ)}.
    pub fn pullback_closed_form(&self, w: &HeisenbergPoint) -> Result<f64> {
        let q = homogeneous_dim(self.n) as f64;
        let lam0 = special::lambda(self.n, self.gamma, 0)?;
        let c0 = 2f64.powf((q - 2.0 * self.gamma) / 2.0)
            * lam0.powf((q - 2.0 * self.gamma) / (2.0 * self.gamma));
        Ok(c0 * heisenberg::conformal_factor(w).powf((2.0 * self.gamma - q) / 4.0))
    }
}

/// Pullback u(w) = (2 Jac_C(w))^{(Q−2γ)/(2Q)} · U(C(w)) of a sphere function
/// to the Heisenberg side.
pub fn pullback_to_heisenberg<F>(u_sphere: F, gamma: f64, w: &HeisenbergPoint) -> f64
where
    F: Fn(&SpherePoint) -> f64,
{
    let n = w.n();
    let q = homogeneous_dim(n) as f64;
    let jac = heisenberg::cayley_jacobian(w);
    (2.0 * jac).powf((q - 2.0 * gamma) / (2.0 * q)) * u_sphere(&heisenberg::cayley(w))
}

/// u(w) and the median-of-means estimate of
/// (c_γ/2) ∫ d_KC(w, v)^{2γ−Q} |u(v)|^{q_exp} u(v) dv over H^n,
/// with the nonlinearity exponent passed in so variant exponents can be
/// compared. The fixed-point residual is `value − (c_γ/2)·integral`.
pub struct ConvolutionCheck {
    pub value: f64,
    pub integral: MomEstimate,
    pub residual: f64,
    pub residual_sigma: f64,
}

pub fn convolution_residual<F>(
    u: F,
    gamma: f64,
    w: &HeisenbergPoint,
    spec: QuadratureSpec,
    nonlinearity_exponent: f64,
) -> Result<ConvolutionCheck>
where
    F: Fn(&HeisenbergPoint) -> f64 + Sync,
{
    let n = w.n();
    let q = homogeneous_dim(n) as f64;
    let c_gamma = fundamental_constant(n, gamma)?;
    let kern_expo = 2.0 * gamma - q;
    let value = u(w);
    // Heisenberg-side integral via sphere change of variables; the kernel is
    // singular at v = w, so shard medians tame the heavy tail.
    let integral = sphere::mc_median_of_means(
        |eta| {
            let v = heisenberg::cayley_inverse(eta).ok()?;
            let d = heisenberg::kc_distance(w, &v).expect("dimension fixed");
            let kern = d.powf(kern_expo);
            if !kern.is_finite() {
                return None;
            }
            let uv = u(&v);
            Some(kern * uv.abs().powf(nonlinearity_exponent) * uv
                / heisenberg::cayley_jacobian(&v))
        },
        n,
        spec,
        MOM_SHARDS,
    )?;
    let residual = value - 0.5 * c_gamma * integral.median;
    let residual_sigma = 0.5 * c_gamma * integral.sigma;
    Ok(ConvolutionCheck {
        value,
        integral,
        residual,
        residual_sigma,
    })
}
