//! Heisenberg group calculus and the Cayley bridge to S^{2n+1}: group law,
//! gauge norm, Korányi–Cygan metric, the Cayley transform with its Jacobian
//! and inverse, and the induced measure and distance identities.
//!
//! Integrals over the unbounded group are always computed by change of
//! variables to the sphere: sample uniformly on S^{2n+1}, map through
//! `cayley_inverse`, and weight by the reciprocal Jacobian. Points inside the
//! pole guard are rejected and redrawn.

use num_complex::Complex64;

use crate::sphere::{self, McEstimate, QuadratureSpec, SpherePoint};
use crate::{Error, Result};

/// Rejection radius around the pole (0, …, 0, −1) removed by the transform.
pub const POLE_GUARD: f64 = 1e-9;

/// A point (z, t) ∈ H^n = C^n × R.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergPoint {
    pub z: Vec<Complex64>,
    pub t: f64,
}

impl HeisenbergPoint {
    pub fn new(z: Vec<Complex64>, t: f64) -> Self {
        Self { z, t }
    }

    /// The neutral element (0, 0).
    pub fn origin(n: usize) -> Self {
        Self {
            z: vec![Complex64::new(0.0, 0.0); n],
            t: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// Group inverse (−z, −t).
    pub fn inverse(&self) -> Self {
        Self {
            z: self.z.iter().map(|c| -c).collect(),
            t: -self.t,
        }
    }

    /// |z|² = Σ |z_k|².
    pub fn z_norm_sqr(&self) -> f64 {
        self.z.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Anisotropic dilation δ_λ(z, t) = (λz, λ²t).
    pub fn dilate(&self, lambda: f64) -> Self {
        Self {
            z: self.z.iter().map(|c| c * lambda).collect(),
            t: lambda * lambda * self.t,
        }
    }
}

/// Group product (z, t) ⋆ (z', t') = (z + z', t + t' + 2 Im Σ z_k conj(z'_k)).
pub fn group_mul(w: &HeisenbergPoint, v: &HeisenbergPoint) -> Result<HeisenbergPoint> {
    if w.n() != v.n() {
        return Err(Error::Dimension(format!(
            "group product of points in H^{} and H^{}",
            w.n(),
            v.n()
        )));
    }
    let twist: f64 = w
        .z
        .iter()
        .zip(&v.z)
        .map(|(a, b)| (a * b.conj()).im)
        .sum();
    Ok(HeisenbergPoint {
        z: w.z.iter().zip(&v.z).map(|(a, b)| a + b).collect(),
        t: w.t + v.t + 2.0 * twist,
    })
}

/// Homogeneous gauge norm N(z, t) = (|z|⁴ + t²)^{1/4}.
pub fn gauge_norm(w: &HeisenbergPoint) -> f64 {
    let zn = w.z_norm_sqr();
    (zn * zn + w.t * w.t).powf(0.25)
}

/// Korányi–Cygan distance d_KC(w, v) = N(w ⋆ v^{-1})
/// = (|z − z'|⁴ + (t − t' − 2 Im Σ z_k conj(z'_k))²)^{1/4}.
///
/// With the group-law twist convention of [group_mul], this composition order
/// (not N(v⁻¹ ⋆ w)) is the one conformally matched to the chordal sphere
/// distance; see [distance_conformal_check].
pub fn kc_distance(w: &HeisenbergPoint, v: &HeisenbergPoint) -> Result<f64> {
    Ok(gauge_norm(&group_mul(w, &v.inverse())?))
}

/// D(z, t) = (1 + |z|²)² + t², the conformal factor of the Cayley transform.
pub fn conformal_factor(w: &HeisenbergPoint) -> f64 {
    let zn = w.z_norm_sqr();
    (1.0 + zn) * (1.0 + zn) + w.t * w.t
}

/// Cayley transform C(z, t) = (2z/(1+|z|²+it), (1−|z|²−it)/(1+|z|²+it)).
///
/// Maps H^n onto S^{2n+1} minus the pole (0, …, 0, −1).
pub fn cayley(w: &HeisenbergPoint) -> SpherePoint {
    let denom = Complex64::new(1.0 + w.z_norm_sqr(), w.t);
    let mut coords: Vec<Complex64> = w.z.iter().map(|zk| 2.0 * zk / denom).collect();
    coords.push((2.0 - denom) / denom);
    // The image is exactly unit-norm; construction renormalizes roundoff.
    SpherePoint::new(coords).expect("Cayley image is never the zero vector")
}

/// Inverse Cayley transform: z = η'/(1+η_{n+1}), t = Im(2/(1+η_{n+1})).
///
/// Errors inside the pole guard |1 + η_{n+1}| ≤ 1e-9.
pub fn cayley_inverse(eta: &SpherePoint) -> Result<HeisenbergPoint> {
    let n = eta.n();
    let last = eta.coords()[n];
    let denom = Complex64::new(1.0, 0.0) + last;
    if denom.norm() <= POLE_GUARD {
        return Err(Error::Pole(format!(
            "point within {POLE_GUARD} of the removed pole (|1+last| = {:.3e})",
            denom.norm()
        )));
    }
    let z = eta.coords()[..n].iter().map(|c| c / denom).collect();
    let t = (2.0 / denom).im;
    Ok(HeisenbergPoint { z, t })
}

/// Jacobian determinant of the Cayley transform: 2^{2n+1} / D(z,t)^{n+1}.
pub fn cayley_jacobian(w: &HeisenbergPoint) -> f64 {
    let n = w.n();
    2f64.powi(2 * n as i32 + 1) / conformal_factor(w).powi(n as i32 + 1)
}

/// Relative discrepancy of the conformal distance identity
/// d_S(C(w), C(v)) = d_KC(w, v) · (4/D(w))^{1/4} · (4/D(v))^{1/4}.
pub fn distance_conformal_check(w: &HeisenbergPoint, v: &HeisenbergPoint) -> Result<f64> {
    let lhs = sphere::sphere_distance(&cayley(w), &cayley(v))?;
    let rhs = kc_distance(w, v)?
        * (4.0 / conformal_factor(w)).powf(0.25)
        * (4.0 / conformal_factor(v)).powf(0.25);
    Ok((lhs - rhs).abs() / lhs.max(1e-300))
}

/// Monte Carlo integral of f over H^n against the Haar (Lebesgue) measure,
/// by change of variables to the sphere with reciprocal-Jacobian weight.
pub fn integrate_heisenberg<F>(f: F, n: usize, spec: QuadratureSpec) -> Result<McEstimate>
where
    F: Fn(&HeisenbergPoint) -> f64 + Sync,
{
    sphere::mc_integrate_filtered(
        |eta| {
            let w = cayley_inverse(eta).ok()?;
            Some(f(&w) / cayley_jacobian(&w))
        },
        n,
        spec,
        true,
    )
}

/// Both sides of the measure identity ∫_{S^{2n+1}} f dη = ∫_{H^n} (f∘C)·Jac_C dw
/// estimated with independent sample streams.
pub fn measure_identity_check<F>(
    f: F,
    n: usize,
    spec: QuadratureSpec,
) -> Result<(McEstimate, McEstimate)>
where
    F: Fn(&SpherePoint) -> f64 + Sync,
{
    let sphere_side = sphere::mc_integrate(&f, n, spec)?;
    let heis_side = integrate_heisenberg(
        |w| f(&cayley(w)) * cayley_jacobian(w),
        n,
        spec.with_stream(spec.stream_id + 1),
    )?;
    Ok((sphere_side, heis_side))
}
