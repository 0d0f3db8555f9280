//! Block-unitary symmetry machinery: the subgroups G_i ⊂ U(n+1), the swap
//! matrices A_i, the augmented groups Ĝ_i = G_i ∪ A_i G_i, the ⊛-action on
//! functions (sign flip on the swapped coset), Haar sampling, invariance
//! testing, and the constructive transitivity canonicalizer.
//!
//! Index conventions for the canonicalizer (0-indexed): g_j ∈ G_j sends the
//! first j coordinates to (0_{j−1}, r₁) and the last j to (r₃, 0_{j−1}), so
//! the support lands in {j−1, …, n+1−j}, inside the middle window [i, n−i] of
//! G_i whenever i < j; the U(n+1−2i) middle block of g_i then moves the
//! interior vector to the window's first slot. The canonical point is e_{i+1}
//! (1-indexed), i.e. all mass in 0-indexed coordinate i.

use num_complex::Complex64;

use crate::sphere::{self, QuadratureSpec, SpherePoint};
use crate::{Error, Result};

/// Dense complex square matrix, row-major. Sizes here are at most n+1 ≤ 9, so
/// simple loops beat any library dispatch.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for r in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..self.dim {
                acc += self.at(r, c) * v[c];
            }
            out[r] = acc;
        }
        out
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = CMat {
            dim: d,
            data: vec![Complex64::new(0.0, 0.0); d * d],
        };
        for r in 0..d {
            for k in 0..d {
                let a = self.at(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * other.at(k, c);
                }
            }
        }
        out
    }

    /// Conjugate transpose; the inverse for unitary matrices.
    pub fn adjoint(&self) -> CMat {
        let d = self.dim;
        let mut out = CMat {
            dim: d,
            data: vec![Complex64::new(0.0, 0.0); d * d],
        };
        for r in 0..d {
            for c in 0..d {
                out.set(c, r, self.at(r, c).conj());
            }
        }
        out
    }

    /// ‖B·B* − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.matmul(&self.adjoint());
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let expect = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((prod.at(r, c) - Complex64::new(expect, 0.0)).norm());
            }
        }
        worst
    }
}

/// An ordered partition (n_1, …, n_k) of n+1 into block sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    pub parts: Vec<usize>,
}

impl BlockPartition {
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "block sizes must be positive");
        Self { parts }
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
}

/// Element of U(n_1) × … × U(n_k) acting block-diagonally on C^{n+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockUnitary {
    pub partition: BlockPartition,
    pub blocks: Vec<CMat>,
}

impl BlockUnitary {
    pub fn identity(partition: BlockPartition) -> Self {
        let blocks = partition.parts.iter().map(|&p| CMat::identity(p)).collect();
        Self { partition, blocks }
    }

    pub fn new(partition: BlockPartition, blocks: Vec<CMat>) -> Result<Self> {
        if partition.parts.len() != blocks.len()
            || partition
                .parts
                .iter()
                .zip(&blocks)
                .any(|(&p, b)| b.dim != p)
        {
            return Err(Error::Dimension("blocks do not match partition".into()));
        }
        Ok(Self { partition, blocks })
    }

    pub fn dim(&self) -> usize {
        self.partition.total()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim());
        let mut out = Vec::with_capacity(v.len());
        let mut offset = 0;
        for (b, &p) in self.blocks.iter().zip(&self.partition.parts) {
            out.extend(b.matvec(&v[offset..offset + p]));
            offset += p;
        }
        out
    }

    /// Blockwise product: (g·h) has blocks B_g·B_h.
    pub fn mul(&self, other: &BlockUnitary) -> Result<BlockUnitary> {
        if self.partition != other.partition {
            return Err(Error::Dimension("partition mismatch in product".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.matmul(b))
            .collect();
        Ok(BlockUnitary {
            partition: self.partition.clone(),
            blocks,
        })
    }

    pub fn inverse(&self) -> BlockUnitary {
        BlockUnitary {
            partition: self.partition.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.unitarity_defect())
            .fold(0.0, f64::max)
    }
}

/// Descriptor of G_i ⊂ U(n+1): U(i) × U(n+1−2i) × U(i), degenerating to
/// U((n+1)/2) × U((n+1)/2) when n+1 = 2i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GiDescriptor {
    pub n: usize,
    pub i: usize,
}

impl GiDescriptor {
    pub fn new(n: usize, i: usize) -> Result<Self> {
        if i < 1 || 2 * i > n + 1 {
            return Err(Error::Domain(format!(
                "G_i needs 1 <= i <= floor((n+1)/2), got i={i} at n={n}"
            )));
        }
        Ok(Self { n, i })
    }

    pub fn partition(&self) -> BlockPartition {
        let (n, i) = (self.n, self.i);
        if n + 1 == 2 * i {
            BlockPartition::new(vec![i, i])
        } else {
            BlockPartition::new(vec![i, n + 1 - 2 * i, i])
        }
    }

    /// Applies the swap matrix A_i: exchanges the first i and last i
    /// coordinates, fixing the middle.
    pub fn swap_point(&self, v: &[Complex64]) -> Vec<Complex64> {
        let (n, i) = (self.n, self.i);
        assert_eq!(v.len(), n + 1);
        let mut out = Vec::with_capacity(n + 1);
        out.extend_from_slice(&v[n + 1 - i..]);
        out.extend_from_slice(&v[i..n + 1 - i]);
        out.extend_from_slice(&v[..i]);
        out
    }

    /// Conjugation g ↦ A_i g A_i: swaps the two outer blocks.
    pub fn conjugate_by_swap(&self, g: &BlockUnitary) -> BlockUnitary {
        let mut blocks = g.blocks.clone();
        match blocks.len() {
            2 => blocks.swap(0, 1),
            3 => blocks.swap(0, 2),
            _ => unreachable!("G_i partitions have 2 or 3 blocks"),
        }
        BlockUnitary {
            partition: g.partition.clone(),
            blocks,
        }
    }
}

/// Element of Ĝ_i = G_i ∪ A_i G_i: the matrix A_i^s · g with s ∈ {0, 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedElement {
    pub descriptor: GiDescriptor,
    pub swapped: bool,
    pub g: BlockUnitary,
}

impl AugmentedElement {
    pub fn identity(descriptor: GiDescriptor) -> Self {
        Self {
            descriptor,
            swapped: false,
            g: BlockUnitary::identity(descriptor.partition()),
        }
    }

    pub fn pure_swap(descriptor: GiDescriptor) -> Self {
        Self {
            descriptor,
            swapped: true,
            g: BlockUnitary::identity(descriptor.partition()),
        }
    }

    pub fn from_block(descriptor: GiDescriptor, g: BlockUnitary, swapped: bool) -> Result<Self> {
        if g.partition != descriptor.partition() {
            return Err(Error::Dimension("element partition mismatch".into()));
        }
        Ok(Self {
            descriptor,
            swapped,
            g,
        })
    }

    /// The represented matrix applied to a coordinate vector: A_i^s (g v).
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let gv = self.g.apply(v);
        if self.swapped {
            self.descriptor.swap_point(&gv)
        } else {
            gv
        }
    }

    /// Inverse matrix applied: g^{-1} (A_i^s v).
    pub fn apply_inverse(&self, v: &[Complex64]) -> Vec<Complex64> {
        let av = if self.swapped {
            self.descriptor.swap_point(v)
        } else {
            v.to_vec()
        };
        self.g.inverse().apply(&av)
    }

    /// Group product: (s₁, g₁)(s₂, g₂) = (s₁⊕s₂, (A^{s₂} g₁ A^{s₂}) g₂).
    pub fn mul(&self, other: &AugmentedElement) -> Result<AugmentedElement> {
        if self.descriptor != other.descriptor {
            return Err(Error::Dimension("elements of different Ĝ_i".into()));
        }
        let g1 = if other.swapped {
            self.descriptor.conjugate_by_swap(&self.g)
        } else {
            self.g.clone()
        };
        Ok(AugmentedElement {
            descriptor: self.descriptor,
            swapped: self.swapped ^ other.swapped,
            g: g1.mul(&other.g)?,
        })
    }
}

/// Point-level action η ↦ M η with renormalization of unitary drift.
pub fn act_on_point_block(g: &BlockUnitary, eta: &SpherePoint) -> Result<SpherePoint> {
    if g.dim() != eta.coords().len() {
        return Err(Error::Dimension(format!(
            "acting with U({}) element on S^{}",
            g.dim(),
            2 * eta.n() + 1
        )));
    }
    SpherePoint::new(g.apply(eta.coords()))
}

pub fn act_on_point(ghat: &AugmentedElement, eta: &SpherePoint) -> Result<SpherePoint> {
    if ghat.g.dim() != eta.coords().len() {
        return Err(Error::Dimension("augmented element dimension mismatch".into()));
    }
    SpherePoint::new(ghat.apply(eta.coords()))
}

/// The ⊛-action on functions: (ĝ ⊛ U)(η) = (−1)^s · U(M(ĝ)^{-1} η), with the
/// sign flip exactly on the swapped coset.
pub fn act_on_function<'a, F>(
    ghat: &'a AugmentedElement,
    u: F,
) -> impl Fn(&SpherePoint) -> Result<f64> + 'a
where
    F: Fn(&SpherePoint) -> f64 + 'a,
{
    move |eta: &SpherePoint| {
        let pre = SpherePoint::new(ghat.apply_inverse(eta.coords()))?;
        let sign = if ghat.swapped { -1.0 } else { 1.0 };
        Ok(sign * u(&pre))
    }
}

/// Haar-uniform element of a block-unitary group: each block is the Q factor
/// of a Ginibre matrix under modified Gram–Schmidt, whose R has positive real
/// diagonal, giving exact Haar measure. Deterministic per spec; element index
/// = chunk index of the stream.
pub fn haar_sample_block_unitary(
    p: &BlockPartition,
    spec: QuadratureSpec,
    index: usize,
) -> BlockUnitary {
    let mut rng = sphere::chunk_rng(spec.seed, spec.stream_id, index);
    let blocks = p
        .parts
        .iter()
        .map(|&m| {
            // Ginibre draw.
            let mut a = CMat {
                dim: m,
                data: Vec::with_capacity(m * m),
            };
            for _ in 0..m * m {
                let (re, im) = sphere::normal_pair(&mut rng);
                a.data.push(Complex64::new(re, im));
            }
            // Modified Gram–Schmidt on columns, two passes per column.
            let mut q = a.clone();
            for c in 0..m {
                for _pass in 0..2 {
                    for prev in 0..c {
                        let mut proj = Complex64::new(0.0, 0.0);
                        for r in 0..m {
                            proj += q.at(r, prev).conj() * q.at(r, c);
                        }
                        for r in 0..m {
                            let v = q.at(r, c) - proj * q.at(r, prev);
                            q.set(r, c, v);
                        }
                    }
                }
                let norm = (0..m).map(|r| q.at(r, c).norm_sqr()).sum::<f64>().sqrt();
                for r in 0..m {
                    let v = q.at(r, c) / norm;
                    q.set(r, c, v);
                }
            }
            q
        })
        .collect();
    BlockUnitary {
        partition: p.clone(),
        blocks,
    }
}

/// Haar element of Ĝ_i: uniform coset bit, Haar block part.
pub fn haar_sample_augmented(
    d: GiDescriptor,
    spec: QuadratureSpec,
    index: usize,
) -> AugmentedElement {
    let g = haar_sample_block_unitary(&d.partition(), spec, 2 * index);
    let mut rng = sphere::chunk_rng(spec.seed, spec.stream_id, 2 * index + 1);
    use rand_core::RngCore;
    AugmentedElement {
        descriptor: d,
        swapped: rng.next_u64() & 1 == 1,
        g,
    }
}

/// Default sampling breadth for invariance testing.
pub const INVARIANCE_GROUP_SAMPLES: usize = 64;
pub const INVARIANCE_PROBE_POINTS: usize = 256;

/// sup over sampled (ĝ, η) of |(ĝ⊛U)(η) − U(η)|; zero defect characterizes
/// invariance on the sample. With `augmented` both cosets are exercised,
/// otherwise only G_i itself (no sign flip).
pub fn invariance_defect<F>(
    u: F,
    d: GiDescriptor,
    augmented: bool,
    spec: QuadratureSpec,
) -> Result<f64>
where
    F: Fn(&SpherePoint) -> f64,
{
    let probes = sphere::sample_uniform(d.n, spec.with_stream(spec.stream_id + 1));
    let probes = &probes[..INVARIANCE_PROBE_POINTS.min(probes.len())];
    let mut worst = 0.0f64;
    for gi in 0..INVARIANCE_GROUP_SAMPLES {
        let g = haar_sample_block_unitary(&d.partition(), spec, gi);
        let elems: Vec<AugmentedElement> = if augmented {
            vec![
                AugmentedElement::from_block(d, g.clone(), false)?,
                AugmentedElement::from_block(d, g, true)?,
            ]
        } else {
            vec![AugmentedElement::from_block(d, g, false)?]
        };
        for ghat in &elems {
            let action = act_on_function(ghat, &u);
            for eta in probes {
                let defect = (action(eta)? - u(eta)).abs();
                worst = worst.max(defect);
            }
        }
    }
    Ok(worst)
}

/// Unitary sending v to ‖v‖ e_slot (positive real): a complex Householder
/// reflection with a diagonal phase correction.
fn householder_to_slot(v: &[Complex64], slot: usize) -> CMat {
    let m = v.len();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-300 {
        return CMat::identity(m);
    }
    let phase = if v[slot].norm() < 1e-300 {
        Complex64::new(1.0, 0.0)
    } else {
        v[slot] / v[slot].norm()
    };
    // w = v − phase·‖v‖·e_slot; H = I − 2 w w*/‖w‖² maps v to phase·‖v‖·e_slot.
    let mut w: Vec<Complex64> = v.to_vec();
    w[slot] -= phase * norm;
    let wn = w.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let mut h = CMat::identity(m);
    if wn > 1e-28 * norm * norm {
        for r in 0..m {
            for c in 0..m {
                let v2 = h.at(r, c) - 2.0 * w[r] * w[c].conj() / wn;
                h.set(r, c, v2);
            }
        }
    }
    // Kill the leftover phase on the target slot.
    let mut p = CMat::identity(m);
    p.set(slot, slot, phase.conj());
    p.matmul(&h)
}

/// Constructive transitivity: a word [g_j, g_i] with g_j ∈ G_j, g_i ∈ G_i
/// mapping η to the canonical point e_{i+1} (all mass in 0-indexed slot i).
/// Requires 1 ≤ i < j ≤ floor((n+1)/2); the interlacing of the two block
/// structures is what makes the composite transitive.
pub fn canonicalize(
    eta: &SpherePoint,
    i: usize,
    j: usize,
) -> Result<(Vec<BlockUnitary>, SpherePoint)> {
    let n = eta.n();
    if i < 1 || i >= j || 2 * j > n + 1 {
        return Err(Error::Domain(format!(
            "canonicalize needs 1 <= i < j <= floor((n+1)/2), got i={i}, j={j}, n={n}"
        )));
    }
    let dj = GiDescriptor::new(n, j)?;
    let di = GiDescriptor::new(n, i)?;
    let v = eta.coords();

    // g_j: outer blocks collapse to single slots adjacent to the middle.
    let b1 = householder_to_slot(&v[..j], j - 1);
    let b3 = householder_to_slot(&v[n + 1 - j..], 0);
    let pj = dj.partition();
    let g_j = if pj.parts.len() == 2 {
        BlockUnitary::new(pj, vec![b1, b3])?
    } else {
        BlockUnitary::new(pj, vec![b1, CMat::identity(n + 1 - 2 * j), b3])?
    };
    let xi = act_on_point_block(&g_j, eta)?;

    // g_i: the middle U(n+1−2i) block maps the interior vector (which now
    // carries all the mass) to the window's first slot, global index i.
    let interior = &xi.coords()[i..n + 1 - i];
    let b2 = householder_to_slot(interior, 0);
    let g_i = BlockUnitary::new(
        di.partition(),
        vec![CMat::identity(i), b2, CMat::identity(i)],
    )?;
    let canonical = act_on_point_block(&g_i, &xi)?;
    Ok((vec![g_j, g_i], canonical))
}

/// Applies a canonicalizer word left to right.
pub fn apply_word(word: &[BlockUnitary], eta: &SpherePoint) -> Result<SpherePoint> {
    let mut p = eta.clone();
    for g in word {
        p = act_on_point_block(g, &p)?;
    }
    Ok(p)
}

/// Transport: a word mapping `from` to `to` through the canonical point,
/// word(to)^{-1} ∘ word(from), returned flattened.
pub fn transport_word(
    from: &SpherePoint,
    to: &SpherePoint,
    i: usize,
    j: usize,
) -> Result<Vec<BlockUnitary>> {
    let (wf, _) = canonicalize(from, i, j)?;
    let (wt, _) = canonicalize(to, i, j)?;
    let mut word = wf;
    word.extend(wt.iter().rev().map(|g| g.inverse()));
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probe(n: usize, seed: u64) -> SpherePoint {
        sphere::sample_uniform(n, QuadratureSpec::new(1, seed, 900)).pop().unwrap()
    }

    #[test]
    fn swap_matrix_is_involutive() {
        for (n, i) in [(3usize, 1usize), (3, 2), (5, 2), (4, 1)] {
            let d = GiDescriptor::new(n, i).unwrap();
            let eta = probe(n, 17);
            let twice = d.swap_point(&d.swap_point(eta.coords()));
            for (a, b) in twice.iter().zip(eta.coords()) {
                assert!((a - b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn haar_blocks_are_unitary() {
        let spec = QuadratureSpec::new(1, 5, 21);
        for parts in [vec![1, 2, 1], vec![2, 2], vec![3, 1, 3]] {
            let p = BlockPartition::new(parts);
            for idx in 0..8 {
                let g = haar_sample_block_unitary(&p, spec, idx);
                assert!(g.unitarity_defect() < 1e-12, "defect {}", g.unitarity_defect());
            }
        }
    }

    #[test]
    fn pairing_invariant_under_action() {
        let spec = QuadratureSpec::new(1, 9, 33);
        let d = GiDescriptor::new(3, 1).unwrap();
        let g = haar_sample_block_unitary(&d.partition(), spec, 0);
        let (zeta, eta) = (probe(3, 1), probe(3, 2));
        let a = sphere::hermitian_pair(&zeta, &eta).unwrap();
        let b = sphere::hermitian_pair(
            &act_on_point_block(&g, &zeta).unwrap(),
            &act_on_point_block(&g, &eta).unwrap(),
        )
        .unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn augmented_composition_law() {
        let spec = QuadratureSpec::new(1, 3, 40);
        let d = GiDescriptor::new(3, 1).unwrap();
        let u = |p: &SpherePoint| p.coords()[0].re + 0.5 * p.coords()[2].norm_sqr();
        for (ia, sa, ib, sb) in [(0, false, 1, true), (2, true, 3, true), (4, false, 5, false)] {
            let g1 = AugmentedElement::from_block(
                d,
                haar_sample_block_unitary(&d.partition(), spec, ia),
                sa,
            )
            .unwrap();
            let g2 = AugmentedElement::from_block(
                d,
                haar_sample_block_unitary(&d.partition(), spec, ib),
                sb,
            )
            .unwrap();
            let composed = g1.mul(&g2).unwrap();
            for s in 10..14 {
                let eta = probe(3, s);
                let inner = act_on_function(&g2, u);
                let nested = act_on_function(&g1, |p: &SpherePoint| inner(p).unwrap());
                let lhs = nested(&eta).unwrap();
                let rhs = act_on_function(&composed, u)(&eta).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "composition broke: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn constants_have_swap_defect() {
        let spec = QuadratureSpec::new(1, 8, 50);
        let d = GiDescriptor::new(3, 1).unwrap();
        let defect0 = invariance_defect(|_| 2.5, d, false, spec).unwrap();
        assert_eq!(defect0, 0.0);
        let defect1 = invariance_defect(|_| 2.5, d, true, spec).unwrap();
        assert!((defect1 - 5.0).abs() < 1e-12);
    }

    #[test]
    fn canonicalize_hits_basis_point() {
        for (n, i, j) in [(3usize, 1usize, 2usize), (5, 1, 2), (5, 2, 3), (7, 1, 3)] {
            for s in 0..20 {
                let eta = probe(n, 100 + s);
                let (word, canonical) = canonicalize(&eta, i, j).unwrap();
                let target = SpherePoint::basis(n, i);
                let dist = sphere::coordinate_distance(&canonical, &target).unwrap();
                assert!(dist < 1e-10, "n={n} i={i} j={j} s={s}: dist {dist}");
                let replay = apply_word(&word, &eta).unwrap();
                let drift = sphere::coordinate_distance(&replay, &canonical).unwrap();
                assert!(drift < 1e-12);
            }
        }
    }

    #[test]
    fn transport_moves_points() {
        let (from, to) = (probe(3, 7), probe(3, 8));
        let word = transport_word(&from, &to, 1, 2).unwrap();
        let moved = apply_word(&word, &from).unwrap();
        // Both canonicalizations land on e_{i+1} with a positive real
        // coefficient, so the transport matches coordinates, not just rays.
        let dist = sphere::coordinate_distance(&moved, &to).unwrap();
        assert!(dist < 1e-10, "transport distance {dist}");
    }
}
