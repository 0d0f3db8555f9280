//! Bidegree harmonic spaces H_{j,k} on S^{2n+1}: exact dimensions, zonal
//! reproducing kernels, and Monte Carlo projections.
//!
//! Orthonormal bases are never constructed; every spectral operation factors
//! through the zonal kernel. The kernel's Jacobi factor uses degree min{j,k},
//! which makes the trace identity ω·Φ_{j,k}(ζ,ζ) = m_{j,k} exact for all
//! bidegrees; the polynomial argument is 2|⟨ζ,η̄⟩|²−1 and the prefactor
//! ⟨ζ,η̄⟩^{|j−k|} is complex for j ≠ k.

use std::sync::Arc;

use num_complex::Complex64;

use crate::special::{jacobi_eval, JacobiParams};
use crate::sphere::{
    self, hermitian_pair, surface_measure, McEstimate, QuadratureSpec, SpherePoint,
};
use crate::{Error, Result};

/// A bidegree (j, k): homogeneity degrees in z and z̄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bidegree {
    pub j: usize,
    pub k: usize,
}

impl Bidegree {
    pub fn new(j: usize, k: usize) -> Self {
        Self { j, k }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Binomial coefficient C(n, k) in u128, with overflow detection.
fn binomial(n: usize, k: usize) -> Result<u128> {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        // Multiply then divide; the running value is always an integer.
        acc = acc
            .checked_mul(num)
            .ok_or_else(|| Error::Overflow(format!("binomial({n},{k})")))?
            / den;
    }
    Ok(acc)
}

/// Exact dimension m_{j,k} of H_{j,k}:
/// (j+n−1)!(k+n−1)!(j+k+n) / (n!(n−1)!j!k!), evaluated in integer arithmetic
/// as C(j+n−1, j)·C(k+n−1, k)·(j+k+n)/n.
pub fn space_dimension(n: usize, d: Bidegree) -> Result<u64> {
    assert!(n >= 1, "CR dimension must be positive");
    let (j, k) = (d.j, d.k);
    let a = binomial(j + n - 1, j)?;
    let b = binomial(k + n - 1, k)?;
    let s = (j + k + n) as u128;
    let nn = n as u128;
    // Cancel n into the factors before multiplying out.
    let g1 = gcd(s, nn);
    let (s, nn) = (s / g1, nn / g1);
    let g2 = gcd(a, nn);
    let (a, nn) = (a / g2, nn / g2);
    let g3 = gcd(b, nn);
    let (b, nn) = (b / g3, nn / g3);
    debug_assert_eq!(nn, 1, "dimension formula is integral");
    let m = a
        .checked_mul(b)
        .and_then(|x| x.checked_mul(s))
        .ok_or_else(|| Error::Overflow(format!("m_({j},{k}) at n={n}")))?
        / nn;
    u64::try_from(m).map_err(|_| Error::Overflow(format!("m_({j},{k}) at n={n} exceeds u64")))
}

/// Zonal reproducing kernel Φ_{j,k} of H_{j,k} on S^{2n+1}.
#[derive(Debug, Clone)]
pub struct ZonalKernel {
    n: usize,
    bidegree: Bidegree,
    /// (max{j,k}+n−1)!(j+k+n) / (ω_{2n+1} n! max{j,k}!)
    lead: f64,
}

impl ZonalKernel {
    pub fn new(n: usize, bidegree: Bidegree) -> Self {
        assert!(n >= 1, "CR dimension must be positive");
        let (j, k) = (bidegree.j, bidegree.k);
        let mx = j.max(k);
        // (mx+n−1)!/mx! = ∏_{i=mx+1}^{mx+n−1} i, a product of n−1 integers.
        let mut ratio = 1.0;
        for i in (mx + 1)..(mx + n) {
            ratio *= i as f64;
        }
        let mut n_fact = 1.0;
        for i in 2..=n {
            n_fact *= i as f64;
        }
        let lead = ratio * (j + k + n) as f64 / (surface_measure(n) * n_fact);
        Self { n, bidegree, lead }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> Bidegree {
        self.bidegree
    }

    pub fn leading_constant(&self) -> f64 {
        self.lead
    }

    /// Φ_{j,k}(ζ, η) = lead · ⟨ζ,η̄⟩^{|j−k|} · P_{min{j,k}}^{(n−1, |j−k|)}(2|⟨ζ,η̄⟩|²−1).
    ///
    /// Complex for j ≠ k; real for j = k.
    pub fn eval(&self, zeta: &SpherePoint, eta: &SpherePoint) -> Result<Complex64> {
        let w = hermitian_pair(zeta, eta)?;
        Ok(self.eval_from_pair(w))
    }

    /// Kernel value from a precomputed pairing ⟨ζ,η̄⟩.
    pub fn eval_from_pair(&self, pair: Complex64) -> Complex64 {
        let (j, k) = (self.bidegree.j, self.bidegree.k);
        let diff = j.abs_diff(k);
        let jac = jacobi_eval(
            JacobiParams {
                k: j.min(k),
                alpha: (self.n - 1) as f64,
                beta: diff as f64,
            },
            2.0 * pair.norm_sqr() - 1.0,
        );
        self.lead * pair.powu(diff as u32) * jac
    }

    /// Real part of the kernel; exact for j = k where the kernel is real.
    pub fn eval_real(&self, zeta: &SpherePoint, eta: &SpherePoint) -> Result<f64> {
        Ok(self.eval(zeta, eta)?.re)
    }
}

/// Monte Carlo estimate of (P_{j,k}U)(ζ) = ∫ Φ_{j,k}(ζ,η) U(η) dη over a fixed
/// sample set, exposed as an evaluator with per-point error bars.
#[derive(Clone)]
pub struct ProjectedComponent {
    kernel: Arc<ZonalKernel>,
    samples: Arc<Vec<SpherePoint>>,
    values: Arc<Vec<f64>>,
}

impl ProjectedComponent {
    pub fn kernel(&self) -> &ZonalKernel {
        &self.kernel
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    /// Projection value at ζ with Monte Carlo standard error (real part; the
    /// imaginary part vanishes in expectation for real U and j = k).
    pub fn evaluate(&self, zeta: &SpherePoint) -> Result<McEstimate> {
        let mut mean = 0.0;
        let mut m2 = 0.0;
        let mut count = 0u64;
        for (eta, &u) in self.samples.iter().zip(self.values.iter()) {
            let phi = self.kernel.eval(zeta, eta)?.re;
            let x = phi * u;
            count += 1;
            let d = x - mean;
            mean += d / count as f64;
            m2 += d * (x - mean);
        }
        let omega = surface_measure(self.kernel.n);
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

/// Builds a component evaluator from an existing sample set; lets expansions
/// share one draw across many bidegrees.
pub(crate) fn component_from_parts(
    kernel: ZonalKernel,
    samples: Arc<Vec<SpherePoint>>,
    values: Arc<Vec<f64>>,
) -> ProjectedComponent {
    ProjectedComponent {
        kernel: Arc::new(kernel),
        samples,
        values,
    }
}

/// Projects a sampled function onto H_{j,k} by Monte Carlo against the zonal
/// kernel. The returned evaluator reuses the drawn sample set.
pub fn project_component<F>(
    u: F,
    n: usize,
    d: Bidegree,
    spec: QuadratureSpec,
) -> Result<ProjectedComponent>
where
    F: Fn(&SpherePoint) -> f64 + Sync,
{
    let samples = sphere::sample_uniform(n, spec);
    let values: Vec<f64> = samples.iter().map(|p| u(p)).collect();
    for (p, v) in samples.iter().zip(&values) {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!(
                "projected function returned {v} at {:?}",
                p.coords()
            )));
        }
    }
    Ok(ProjectedComponent {
        kernel: Arc::new(ZonalKernel::new(n, d)),
        samples: Arc::new(samples),
        values: Arc::new(values),
    })
}

/// Monte Carlo check of the reproducing semigroup identity
/// ∫ Φ(ζ,η) Φ(η,ξ) dη = Φ(ζ,ξ): returns (estimate, reference).
pub fn semigroup_check(
    kern: &ZonalKernel,
    zeta: &SpherePoint,
    xi: &SpherePoint,
    spec: QuadratureSpec,
) -> Result<(McEstimate, f64)> {
    let reference = kern.eval(zeta, xi)?.re;
    let estimate = sphere::mc_integrate(
        |eta| {
            let a = kern.eval(zeta, eta).expect("dimension fixed");
            let b = kern.eval(eta, xi).expect("dimension fixed");
            (a * b).re
        },
        kern.n,
        spec,
    )?;
    Ok((estimate, reference))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_small_cases() {
        assert_eq!(space_dimension(1, Bidegree::new(0, 0)).unwrap(), 1);
        // n=1 diagonal: m_{j,j} = 2j+1.
        for j in 0..30 {
            assert_eq!(
                space_dimension(1, Bidegree::new(j, j)).unwrap(),
                2 * j as u64 + 1
            );
        }
        assert_eq!(space_dimension(2, Bidegree::new(1, 0)).unwrap(), 3);
        // Symmetry in (j, k).
        for (j, k) in [(3, 5), (7, 2), (10, 0)] {
            assert_eq!(
                space_dimension(3, Bidegree::new(j, k)).unwrap(),
                space_dimension(3, Bidegree::new(k, j)).unwrap()
            );
        }
    }

    #[test]
    fn constant_kernel_reproduces_constants() {
        for n in 1..=3 {
            let kern = ZonalKernel::new(n, Bidegree::new(0, 0));
            let zeta = SpherePoint::basis(n, 0);
            let eta = SpherePoint::basis(n, n);
            let phi = kern.eval(&zeta, &eta).unwrap();
            assert!((phi.re - 1.0 / surface_measure(n)).abs() < 1e-14);
            assert!(phi.im.abs() < 1e-14);
        }
    }

    #[test]
    fn trace_identity_all_bidegrees() {
        // ω·Φ_{j,k}(ζ,ζ) = m_{j,k}, diagonal and mixed, several n.
        let spec = QuadratureSpec::new(4, 5, 0);
        for n in 1..=3 {
            let zetas = sphere::sample_uniform(n, spec);
            for (j, k) in [(0, 0), (1, 1), (4, 4), (2, 5), (6, 1), (3, 0)] {
                let kern = ZonalKernel::new(n, Bidegree::new(j, k));
                let m = space_dimension(n, Bidegree::new(j, k)).unwrap() as f64;
                for z in &zetas {
                    let tr = surface_measure(n) * kern.eval(z, z).unwrap().re;
                    assert!(
                        (tr - m).abs() < 1e-9 * m,
                        "n={n} (j,k)=({j},{k}): {tr} vs {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn kernel_diagonal_matches_legendre_reduction() {
        // n=1, j=k: Φ_{j,j}(ζ,η) = (2j+1)/ω₃ · P_j(2|⟨ζ,η̄⟩|²−1).
        let spec = QuadratureSpec::new(16, 9, 3);
        let pts = sphere::sample_uniform(1, spec);
        for j in [0usize, 1, 2, 5, 9] {
            let kern = ZonalKernel::new(1, Bidegree::new(j, j));
            for pair in pts.chunks(2) {
                let w = hermitian_pair(&pair[0], &pair[1]).unwrap();
                let expect = (2.0 * j as f64 + 1.0) / surface_measure(1)
                    * crate::special::legendre_eval(j, 2.0 * w.norm_sqr() - 1.0);
                let got = kern.eval(&pair[0], &pair[1]).unwrap();
                assert!((got.re - expect).abs() < 1e-12 && got.im.abs() < 1e-12);
            }
        }
    }
}
