//! Points, pairing, distance, uniform sampling, and Monte Carlo integration on
//! the CR sphere S^{2n+1} ⊂ C^{n+1}.
//!
//! Sampling is counter-based and splittable: the stream for a sample is keyed
//! by (seed, stream_id, chunk index), chunks have a fixed size, and chunk
//! statistics are merged in index order. Results are therefore bit-identical
//! for a given spec regardless of thread count or scheduling.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::{Error, Result};

/// Samples per RNG chunk. Each chunk owns an independent ChaCha8 stream, so
/// rejection redraws stay inside the chunk and never shift later samples.
const CHUNK: usize = 4096;

/// Consecutive rejected redraws tolerated before giving up on a sample.
const MAX_REDRAWS: usize = 1000;

/// A point on S^{2n+1}, stored as n+1 complex coordinates of unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<Complex64>,
}

impl SpherePoint {
    /// Builds a point from coordinates, renormalizing to unit norm.
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Domain(format!(
                "cannot normalize coordinate vector with norm {norm}"
            )));
        }
        let coords = coords.into_iter().map(|c| c / norm).collect();
        Ok(Self { coords })
    }

    /// The basis point e_k (1 in slot k, 0-indexed).
    pub fn basis(n: usize, k: usize) -> Self {
        assert!(k < n + 1, "basis index out of range");
        let mut coords = vec![Complex64::new(0.0, 0.0); n + 1];
        coords[k] = Complex64::new(1.0, 0.0);
        Self { coords }
    }

    /// CR dimension n (the point lives in C^{n+1}).
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// Antipodal point.
    pub fn negate(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// Σ ζ_j · conj(η_j), the Hermitian pairing written ⟨ζ, η̄⟩.
pub fn hermitian_pair(zeta: &SpherePoint, eta: &SpherePoint) -> Result<Complex64> {
    if zeta.coords.len() != eta.coords.len() {
        return Err(Error::Dimension(format!(
            "pairing points of dimension {} and {}",
            zeta.coords.len(),
            eta.coords.len()
        )));
    }
    Ok(zeta
        .coords
        .iter()
        .zip(&eta.coords)
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// CR-sphere distance d_S(ζ, η) = √(2 |1 − ⟨ζ, η̄⟩|).
pub fn sphere_distance(zeta: &SpherePoint, eta: &SpherePoint) -> Result<f64> {
    let pair = hermitian_pair(zeta, eta)?;
    Ok((2.0 * (Complex64::new(1.0, 0.0) - pair).norm()).sqrt())
}

/// Ambient coordinate distance ‖ζ − η‖ in C^{n+1}. Phase-sensitive, and the
/// right yardstick for "these are the same computed point": the CR distance
/// between floating-point-coincident points bottoms out near √ulp by its
/// square-root scaling, while this metric reaches machine precision.
pub fn coordinate_distance(zeta: &SpherePoint, eta: &SpherePoint) -> Result<f64> {
    if zeta.coords.len() != eta.coords.len() {
        return Err(Error::Dimension("coordinate distance dimension mismatch".into()));
    }
    Ok(zeta
        .coords
        .iter()
        .zip(&eta.coords)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Surface measure ω_{2n+1} = 2π^{n+1}/n! of S^{2n+1}.
pub fn surface_measure(n: usize) -> f64 {
    let mut fact = 1.0;
    for k in 2..=n {
        fact *= k as f64;
    }
    2.0 * std::f64::consts::PI.powi(n as i32 + 1) / fact
}

/// Deterministic sampling specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub sample_count: usize,
    pub seed: u64,
    pub stream_id: u64,
}

impl QuadratureSpec {
    pub fn new(sample_count: usize, seed: u64, stream_id: u64) -> Self {
        assert!(sample_count >= 1, "sample_count must be positive");
        Self {
            sample_count,
            seed,
            stream_id,
        }
    }

    /// Same seed, different stream: statistically independent draws.
    pub fn with_stream(&self, stream_id: u64) -> Self {
        Self { stream_id, ..*self }
    }

    pub fn with_samples(&self, sample_count: usize) -> Self {
        Self {
            sample_count,
            ..*self
        }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub sample_count: usize,
}

impl McEstimate {
    /// |mean − reference| in units of the standard error.
    pub fn sigma_distance(&self, reference: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - reference).abs() / self.std_error
        }
    }
}

/// RNG for one chunk. The 24 low stream bits index the chunk; callers keep
/// stream_id below 2^40.
pub(crate) fn chunk_rng(seed: u64, stream_id: u64, chunk: usize) -> ChaCha8Rng {
    debug_assert!(chunk < (1 << 24), "chunk index exceeds stream layout");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream_id << 24) | chunk as u64);
    rng
}

/// One standard-normal pair by Box–Muller. Consumes exactly two u64 draws.
#[inline]
pub(crate) fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // u1 in (0,1] keeps the log finite; u2 in [0,1).
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 / 9_007_199_254_740_992.0;
    let u2 = (rng.next_u64() >> 11) as f64 / 9_007_199_254_740_992.0;
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Fills `point` with a fresh uniform draw from S^{2n+1}.
fn fill_uniform(rng: &mut ChaCha8Rng, point: &mut SpherePoint) {
    loop {
        let mut norm_sqr = 0.0;
        for c in point.coords.iter_mut() {
            let (re, im) = normal_pair(rng);
            *c = Complex64::new(re, im);
            norm_sqr += c.norm_sqr();
        }
        // Zero-norm draws are essentially impossible but must not divide.
        if norm_sqr > 0.0 {
            let inv = norm_sqr.sqrt().recip();
            for c in point.coords.iter_mut() {
                *c *= inv;
            }
            return;
        }
    }
}

/// i.i.d. uniform points on S^{2n+1}; deterministic given (seed, stream_id).
pub fn sample_uniform(n: usize, spec: QuadratureSpec) -> Vec<SpherePoint> {
    let chunks = spec.sample_count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(spec.seed, spec.stream_id, c);
            let len = CHUNK.min(spec.sample_count - c * CHUNK);
            let mut out = Vec::with_capacity(len);
            let mut scratch = SpherePoint::basis(n, 0);
            for _ in 0..len {
                fill_uniform(&mut rng, &mut scratch);
                out.push(scratch.clone());
            }
            out
        })
        .flatten_iter()
        .collect()
}

/// Running (count, mean, M2) statistics with order-fixed merging.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    #[inline]
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Welford {
            count,
            mean: self.mean + d * other.count as f64 / count as f64,
            m2: self.m2 + other.m2 + d * d * self.count as f64 * other.count as f64 / count as f64,
        }
    }
}

/// ω_{2n+1} · (sample mean of f) with std_error = ω · sample std / √N.
///
/// Errors out on the first non-finite integrand value, reporting the point.
pub fn mc_integrate<F>(f: F, n: usize, spec: QuadratureSpec) -> Result<McEstimate>
where
    F: Fn(&SpherePoint) -> f64 + Sync,
{
    mc_integrate_filtered(|p| Some(f(p)), n, spec, false)
}

/// Monte Carlo with a rejection policy: the integrand may return None to
/// reject a sample, which is then redrawn from the same chunk stream. With
/// `redraw_nonfinite` non-finite values are treated as rejections too
/// (coincident singular points); otherwise they are hard errors.
pub fn mc_integrate_filtered<F>(
    f: F,
    n: usize,
    spec: QuadratureSpec,
    redraw_nonfinite: bool,
) -> Result<McEstimate>
where
    F: Fn(&SpherePoint) -> Option<f64> + Sync,
{
    let chunks = spec.sample_count.div_ceil(CHUNK);
    let stats: Result<Vec<Welford>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(spec.seed, spec.stream_id, c);
            let len = CHUNK.min(spec.sample_count - c * CHUNK);
            let mut w = Welford::default();
            let mut point = SpherePoint::basis(n, 0);
            for _ in 0..len {
                let mut redraws = 0;
                let value = loop {
                    fill_uniform(&mut rng, &mut point);
                    match f(&point) {
                        Some(v) if v.is_finite() => break v,
                        Some(v) if !redraw_nonfinite => {
                            return Err(Error::NonFinite(format!(
                                "integrand returned {v} at {:?}",
                                point.coords()
                            )))
                        }
                        _ => {
                            redraws += 1;
                            if redraws > MAX_REDRAWS {
                                return Err(Error::NonFinite(
                                    "integrand rejected too many consecutive samples".into(),
                                ));
                            }
                        }
                    }
                };
                w.push(value);
            }
            Ok(w)
        })
        .collect();
    let merged = stats?
        .into_iter()
        .fold(Welford::default(), |acc, w| acc.merge(w));
    let omega = surface_measure(n);
    let var = if merged.count > 1 {
        merged.m2 / (merged.count - 1) as f64
    } else {
        0.0
    };
    Ok(McEstimate {
        mean: omega * merged.mean,
        std_error: omega * (var / merged.count as f64).sqrt(),
        sample_count: merged.count as usize,
    })
}

/// Median-of-means estimate for heavy-tailed integrands.
#[derive(Debug, Clone)]
pub struct MomEstimate {
    /// ω_{2n+1} · median of the shard means.
    pub median: f64,
    /// Large-sample std error of the median: 1.2533 · std(shard means)/√K.
    pub sigma: f64,
    pub shard_means: Vec<f64>,
    pub sample_count: usize,
}

impl MomEstimate {
    pub fn sigma_distance(&self, reference: f64) -> f64 {
        if self.sigma == 0.0 {
            if self.median == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.median - reference).abs() / self.sigma
        }
    }
}

/// Median of means over `n_shards` shards assigned by sample index striding.
/// Rejected (None) and non-finite values are redrawn inside their chunk.
pub fn mc_median_of_means<F>(
    f: F,
    n: usize,
    spec: QuadratureSpec,
    n_shards: usize,
) -> Result<MomEstimate>
where
    F: Fn(&SpherePoint) -> Option<f64> + Sync,
{
    assert!(n_shards >= 2, "median of means needs at least two shards");
    let chunks = spec.sample_count.div_ceil(CHUNK);
    // Per-chunk: per-shard (count, sum). Samples go to shard (global index mod K).
    let partials: Result<Vec<(Vec<u64>, Vec<f64>)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(spec.seed, spec.stream_id, c);
            let len = CHUNK.min(spec.sample_count - c * CHUNK);
            let mut counts = vec![0u64; n_shards];
            let mut sums = vec![0.0f64; n_shards];
            let mut point = SpherePoint::basis(n, 0);
            for i in 0..len {
                let mut redraws = 0;
                let value = loop {
                    fill_uniform(&mut rng, &mut point);
                    match f(&point) {
                        Some(v) if v.is_finite() => break v,
                        _ => {
                            redraws += 1;
                            if redraws > MAX_REDRAWS {
                                return Err(Error::NonFinite(
                                    "integrand rejected too many consecutive samples".into(),
                                ));
                            }
                        }
                    }
                };
                let shard = (c * CHUNK + i) % n_shards;
                counts[shard] += 1;
                sums[shard] += value;
            }
            Ok((counts, sums))
        })
        .collect();
    let mut counts = vec![0u64; n_shards];
    let mut sums = vec![0.0f64; n_shards];
    for (pc, ps) in partials? {
        for s in 0..n_shards {
            counts[s] += pc[s];
            sums[s] += ps[s];
        }
    }
    let omega = surface_measure(n);
    let shard_means: Vec<f64> = counts
        .iter()
        .zip(&sums)
        .map(|(&c, &s)| omega * s / c.max(1) as f64)
        .collect();
    let mut sorted = shard_means.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let k = sorted.len();
    let median = if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    };
    let mean = shard_means.iter().sum::<f64>() / k as f64;
    let var = shard_means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    // sqrt(pi/2) corrects the efficiency of the median vs the mean.
    let sigma = 1.2533141373155003 * (var / k as f64).sqrt();
    Ok(MomEstimate {
        median,
        sigma,
        shard_means,
        sample_count: spec.sample_count,
    })
}
