use crate::error::{Error, Result};
use crate::linalg::{logm_principal, ComplexMatrix, SkewHermitianMatrix, UnitaryMatrix};
use crate::spectral::{center_generator, center_generator_with, GeneratorSpectrum};

/// Default number of integrator steps on a sampled segment.
pub const DEFAULT_STEPS: usize = 256;

/// Newton–Schulz iterations applied after every integrator step.
const REPROJECT_ITERATIONS: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub enum SegmentKind {
    Constant(SkewHermitianMatrix),
    /// Generators at uniform times over the segment, interpolated
    /// piecewise-linearly.
    Sampled(Vec<SkewHermitianMatrix>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn constant(duration: f64, x: SkewHermitianMatrix) -> Self {
        Self {
            duration,
            kind: SegmentKind::Constant(x),
        }
    }

    pub fn sampled(duration: f64, samples: Vec<SkewHermitianMatrix>) -> Self {
        Self {
            duration,
            kind: SegmentKind::Sampled(samples),
        }
    }

    fn generators(&self) -> &[SkewHermitianMatrix] {
        match &self.kind {
            SegmentKind::Constant(x) => std::slice::from_ref(x),
            SegmentKind::Sampled(s) => s,
        }
    }

    /// Generator at local time `s ∈ [0, duration]`.
    pub fn generator_at(&self, s: f64) -> SkewHermitianMatrix {
        match &self.kind {
            SegmentKind::Constant(x) => x.clone(),
            SegmentKind::Sampled(samples) => {
                let intervals = samples.len() - 1;
                let pos = (s / self.duration).clamp(0.0, 1.0) * intervals as f64;
                let idx = (pos.floor() as usize).min(intervals - 1);
                let frac = pos - idx as f64;
                samples[idx]
                    .scale(1.0 - frac)
                    .add(&samples[idx + 1].scale(frac))
            }
        }
    }

    fn map_generators(&self, f: impl Fn(&SkewHermitianMatrix) -> SkewHermitianMatrix) -> Self {
        let kind = match &self.kind {
            SegmentKind::Constant(x) => SegmentKind::Constant(f(x)),
            SegmentKind::Sampled(s) => SegmentKind::Sampled(s.iter().map(f).collect()),
        };
        Self {
            duration: self.duration,
            kind,
        }
    }
}

/// A curve `γ` in `U(n)` given by its right logarithmic derivative
/// `x(t) = γ̇_t γ_t⁻¹`, starting at the identity.
///
/// Later segments act on the left: for constant segments `(h_j, x_j)` the
/// endpoint is `e^{h_m x_m} ··· e^{h_1 x_1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorCurve {
    dim: usize,
    segments: Vec<Segment>,
}

impl GeneratorCurve {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let first = segments
            .first()
            .ok_or_else(|| Error::InvalidCurve("curve has no segments".into()))?;
        let dim = first.generators()[0].dim();
        for (k, seg) in segments.iter().enumerate() {
            if !(seg.duration.is_finite() && seg.duration > 0.0) {
                return Err(Error::InvalidCurve(format!(
                    "segment {k} has non-positive duration {}",
                    seg.duration
                )));
            }
            if let SegmentKind::Sampled(s) = &seg.kind {
                if s.len() < 2 {
                    return Err(Error::InvalidCurve(format!(
                        "sampled segment {k} has {} samples, need at least 2",
                        s.len()
                    )));
                }
            }
            for x in seg.generators() {
                if x.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: x.dim(),
                    });
                }
            }
        }
        Ok(Self { dim, segments })
    }

    /// Single constant segment.
    pub fn constant(duration: f64, x: SkewHermitianMatrix) -> Result<Self> {
        Self::new(vec![Segment::constant(duration, x)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.segments
            .iter()
            .all(|s| matches!(s.kind, SegmentKind::Constant(_)))
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        Self::new(segments)
    }

    /// Quadrature nodes `(weight, x(t_mid))`: one per constant segment and
    /// `steps_per_segment` midpoints per sampled segment.
    pub fn nodes(&self, steps_per_segment: usize) -> Result<Vec<(f64, SkewHermitianMatrix)>> {
        if steps_per_segment == 0 {
            return Err(Error::InvalidArgument(
                "steps_per_segment must be at least 1".into(),
            ));
        }
        let mut out = Vec::new();
        for seg in &self.segments {
            match &seg.kind {
                SegmentKind::Constant(x) => out.push((seg.duration, x.clone())),
                SegmentKind::Sampled(_) => {
                    let h = seg.duration / steps_per_segment as f64;
                    for k in 0..steps_per_segment {
                        out.push((h, seg.generator_at((k as f64 + 0.5) * h)));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Endpoint and path integrals of an evolved curve.
#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub endpoint: UnitaryMatrix,
    /// `∫ φ₊(x(t)) dt`
    pub int_phi_plus: f64,
    /// `∫ φ₋(x(t)) dt`
    pub int_phi_minus: f64,
    /// Finsler length `∫ ‖x(t)‖ dt`.
    pub length: f64,
    /// `∫ (φ₊ + φ₋) dt`
    pub s_total: f64,
    pub steps_used: usize,
}

/// Integrates `γ̇ = x(t)γ`, `γ_0 = I` with the exponential midpoint rule.
/// Constant segments are exact in one step.
pub fn evolve(curve: &GeneratorCurve, steps_per_segment: usize) -> Result<EvolutionResult> {
    evolve_nodes(curve.dim(), &curve.nodes(steps_per_segment)?, false)
}

/// Like [`evolve`] but with every node generator centered, which realizes
/// `α_t = γ_t e^{−(i/2) S_t}`.
pub fn evolve_centered(curve: &GeneratorCurve, steps_per_segment: usize) -> Result<EvolutionResult> {
    evolve_nodes(curve.dim(), &curve.nodes(steps_per_segment)?, true)
}

fn evolve_nodes(
    dim: usize,
    nodes: &[(f64, SkewHermitianMatrix)],
    centered: bool,
) -> Result<EvolutionResult> {
    let mut gamma = ComplexMatrix::identity(dim);
    let mut result = EvolutionResult {
        endpoint: UnitaryMatrix::identity(dim),
        int_phi_plus: 0.0,
        int_phi_minus: 0.0,
        length: 0.0,
        s_total: 0.0,
        steps_used: nodes.len(),
    };
    for (h, x) in nodes {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
        let mut spec = GeneratorSpectrum::new(x)?;
        if centered {
            spec = GeneratorSpectrum::new(&center_generator_with(x, &spec))?;
        }
        let step = spec.exp_scaled(*h);
        gamma = UnitaryMatrix::reproject(step.as_matrix() * &gamma, REPROJECT_ITERATIONS)
            .into_matrix();
        let (p, m) = (spec.phi_plus().0, spec.phi_minus().0);
        result.int_phi_plus += h * p;
        result.int_phi_minus += h * m;
        result.s_total += h * (p + m);
        result.length += h * spec.norm();
    }
    result.endpoint = UnitaryMatrix::new_unchecked(gamma);
    Ok(result)
}

/// Replaces every generator sample by its centered version.
pub fn center_curve(curve: &GeneratorCurve) -> GeneratorCurve {
    GeneratorCurve {
        dim: curve.dim,
        segments: curve
            .segments
            .iter()
            .map(|s| s.map_generators(center_generator))
            .collect(),
    }
}

/// Finsler length `∫ ‖x(t)‖ dt` with [`DEFAULT_STEPS`] on sampled segments.
pub fn curve_length(curve: &GeneratorCurve) -> f64 {
    curve_length_with_steps(curve, DEFAULT_STEPS).expect("default step count is positive")
}

pub fn curve_length_with_steps(curve: &GeneratorCurve, steps_per_segment: usize) -> Result<f64> {
    let mut total = 0.0;
    for (h, x) in curve.nodes(steps_per_segment)? {
        total += h * GeneratorSpectrum::new(&x)?.norm();
    }
    Ok(total)
}

/// The one-parameter curve `μ_t = base · e^{t·generator}`, `t ∈ [0, 1]`.
#[derive(Clone, Debug)]
pub struct Geodesic {
    pub base: UnitaryMatrix,
    pub generator: SkewHermitianMatrix,
}

impl Geodesic {
    pub fn point_at(&self, t: f64) -> Result<UnitaryMatrix> {
        Ok(self
            .base
            .mul(&GeneratorSpectrum::new(&self.generator)?.exp_scaled(t)))
    }

    pub fn length(&self) -> f64 {
        GeneratorSpectrum::new(&self.generator)
            .map(|s| s.norm())
            .unwrap_or(f64::NAN)
    }

    /// Right logarithmic derivative form: the constant generator
    /// `base·x·base*`, so that evolving from the identity and then
    /// right-multiplying by `base` traces `μ`.
    pub fn right_curve(&self) -> GeneratorCurve {
        GeneratorCurve::constant(1.0, self.generator.conjugate_by(&self.base))
            .expect("single constant segment is valid")
    }

    pub fn endpoint(&self) -> Result<UnitaryMatrix> {
        Ok(evolve(&self.right_curve(), 1)?.endpoint.mul(&self.base))
    }
}

/// Minimal geodesic from `u` to `v` with generator `log(u*v)`.
pub fn geodesic_between(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<Geodesic> {
    u.as_matrix().check_same_dim(v.as_matrix())?;
    let generator = logm_principal(&u.adjoint().mul(v))?;
    Ok(Geodesic {
        base: u.clone(),
        generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_skew, op_norm};
    use crate::random::{haar_unitary_with, random_skew, unitary_with_args_in};
    use crate::spectral::{dist, phi_plus};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn constant_diagonal_segment() {
        let x = SkewHermitianMatrix::from_imag_diag(&[0.7, -0.2]);
        let r = evolve(&GeneratorCurve::constant(1.0, x).unwrap(), 1).unwrap();
        let expected = UnitaryMatrix::from_phases(&[0.7, -0.2]);
        assert!(r.endpoint.as_matrix().max_diff(expected.as_matrix()) < 1e-14);
        assert!((r.int_phi_plus - 0.7).abs() < 1e-15);
        assert!((r.int_phi_minus + 0.2).abs() < 1e-15);
        assert!((r.length - 0.7).abs() < 1e-15);
        assert_eq!(r.steps_used, 1);
    }

    #[test]
    fn zero_generator() {
        let curve = GeneratorCurve::new(vec![
            Segment::constant(0.5, SkewHermitianMatrix::zeros(3)),
            Segment::sampled(1.0, vec![SkewHermitianMatrix::zeros(3); 4]),
        ])
        .unwrap();
        let r = evolve(&curve, 16).unwrap();
        assert!(r.endpoint.as_matrix().max_diff(&ComplexMatrix::identity(3)) < 1e-15);
        assert_eq!(r.int_phi_plus, 0.0);
        assert_eq!(r.int_phi_minus, 0.0);
        assert_eq!(r.length, 0.0);
        assert_eq!(curve_length(&curve), 0.0);
    }

    #[test]
    fn noncommuting_constant_segments_multiply_on_the_left() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let x1 = random_skew(3, &mut rng);
            let x2 = random_skew(3, &mut rng);
            let (h1, h2) = (0.4, 0.9);
            let curve = GeneratorCurve::new(vec![
                Segment::constant(h1, x1.clone()),
                Segment::constant(h2, x2.clone()),
            ])
            .unwrap();
            let r = evolve(&curve, 7).unwrap();
            let oracle = expm_skew(&x2.scale(h2))
                .unwrap()
                .mul(&expm_skew(&x1.scale(h1)).unwrap());
            assert!(r.endpoint.as_matrix().max_diff(oracle.as_matrix()) <= 1e-12);
            assert_eq!(r.steps_used, 2);
        }
    }

    #[test]
    fn invalid_curves_are_rejected() {
        assert!(GeneratorCurve::new(vec![]).is_err());
        assert!(GeneratorCurve::constant(0.0, SkewHermitianMatrix::zeros(2)).is_err());
        assert!(GeneratorCurve::new(vec![Segment::sampled(
            1.0,
            vec![SkewHermitianMatrix::zeros(2)]
        )])
        .is_err());
        assert!(matches!(
            GeneratorCurve::new(vec![
                Segment::constant(1.0, SkewHermitianMatrix::zeros(2)),
                Segment::constant(1.0, SkewHermitianMatrix::zeros(3)),
            ]),
            Err(Error::DimensionMismatch { .. })
        ));
        let c = GeneratorCurve::constant(1.0, SkewHermitianMatrix::zeros(2)).unwrap();
        assert!(evolve(&c, 0).is_err());
    }

    #[test]
    fn centering_examples() {
        let x = SkewHermitianMatrix::from_imag_diag(&[3.0, 1.0]);
        let c = center_curve(&GeneratorCurve::constant(1.0, x).unwrap());
        let expected = GeneratorCurve::constant(
            1.0,
            SkewHermitianMatrix::from_imag_diag(&[1.0, -1.0]),
        )
        .unwrap();
        assert!(matches!(&c.segments()[0].kind, SegmentKind::Constant(g)
            if g.as_matrix().max_diff(match &expected.segments()[0].kind {
                SegmentKind::Constant(e) => e.as_matrix(),
                _ => unreachable!(),
            }) < 1e-15));
        assert_eq!(center_curve(&expected), expected);
    }

    #[test]
    fn centered_endpoint_is_phase_shifted() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let segs = (0..3)
                .map(|_| Segment::constant(rng.random_range(0.1..1.0), random_skew(4, &mut rng)))
                .collect();
            let curve = GeneratorCurve::new(segs).unwrap();
            let r = evolve(&curve, 1).unwrap();
            let c = evolve(&center_curve(&curve), 1).unwrap();
            let expected = r.endpoint.phase_shift(-0.5 * r.s_total);
            assert!(c.endpoint.as_matrix().max_diff(expected.as_matrix()) <= 1e-8);
            assert!(c.s_total.abs() < 1e-12);
        }
    }

    #[test]
    fn length_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_skew(3, &mut rng);
        let c = GeneratorCurve::constant(0.3, x.clone()).unwrap();
        assert!((curve_length(&c) - 0.3 * op_norm(x.as_matrix())).abs() < 1e-12);

        for _ in 0..5 {
            let a = GeneratorCurve::new(vec![
                Segment::constant(0.5, random_skew(3, &mut rng)),
                Segment::sampled(1.0, (0..3).map(|_| random_skew(3, &mut rng)).collect()),
            ])
            .unwrap();
            let b = GeneratorCurve::constant(0.7, random_skew(3, &mut rng)).unwrap();
            let joined = a.concat(&b).unwrap();
            assert!((curve_length(&joined) - curve_length(&a) - curve_length(&b)).abs() < 1e-12);
        }
    }

    #[test]
    fn geodesic_examples() {
        let id = UnitaryMatrix::identity(2);
        let g = geodesic_between(&id, &id).unwrap();
        assert!(g.generator.as_matrix().max_abs() < 1e-15);

        let v = UnitaryMatrix::from_phases(&[PI / 2.0, 0.0]);
        let g = geodesic_between(&id, &v).unwrap();
        let expected = SkewHermitianMatrix::from_imag_diag(&[PI / 2.0, 0.0]);
        assert!(g.generator.as_matrix().max_diff(expected.as_matrix()) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let u = haar_unitary_with(4, &mut rng);
            let v = u.mul(&unitary_with_args_in(4, -3.0, 3.0, &mut rng));
            let g = geodesic_between(&u, &v).unwrap();
            assert!(g.endpoint().unwrap().as_matrix().max_diff(v.as_matrix()) <= 1e-9);
            assert!(g.point_at(1.0).unwrap().as_matrix().max_diff(v.as_matrix()) <= 1e-9);
            assert!((g.length() - dist(&u, &v).unwrap()).abs() <= 1e-10);
            assert!((curve_length(&g.right_curve()) - g.length()).abs() <= 1e-10);
        }
    }

    #[test]
    fn length_is_left_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let u = haar_unitary_with(3, &mut rng);
            let v = u.mul(&unitary_with_args_in(3, -2.0, 2.0, &mut rng));
            let w = haar_unitary_with(3, &mut rng);
            let g = geodesic_between(&u, &v).unwrap();
            let moved = Geodesic {
                base: w.mul(&g.base),
                generator: g.generator.clone(),
            };
            assert!((curve_length(&g.right_curve()) - curve_length(&moved.right_curve())).abs() < 1e-10);
        }
    }

    #[test]
    fn concatenation_endpoint_is_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let a = GeneratorCurve::new(vec![Segment::sampled(
                1.0,
                (0..3).map(|_| random_skew(3, &mut rng)).collect(),
            )])
            .unwrap();
            let b = GeneratorCurve::constant(0.6, random_skew(3, &mut rng)).unwrap();
            let ab = evolve(&a.concat(&b).unwrap(), 64).unwrap().endpoint;
            let prod = evolve(&b, 64)
                .unwrap()
                .endpoint
                .mul(&evolve(&a, 64).unwrap().endpoint);
            assert!(ab.as_matrix().max_diff(prod.as_matrix()) <= 1e-9);
        }
    }

    #[test]
    fn midpoint_rule_is_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples = (0..5).map(|_| random_skew(4, &mut rng)).collect();
        let curve = GeneratorCurve::new(vec![Segment::sampled(1.0, samples)]).unwrap();
        let reference = evolve(&curve, 4096).unwrap().endpoint;
        let err = |steps| {
            op_norm(&(evolve(&curve, steps).unwrap().endpoint.as_matrix() - reference.as_matrix()))
        };
        let ratio = err(128) / err(256);
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn sampled_interpolation_hits_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let samples: Vec<_> = (0..4).map(|_| random_skew(2, &mut rng)).collect();
        let seg = Segment::sampled(3.0, samples.clone());
        for (k, s) in samples.iter().enumerate() {
            assert!(seg.generator_at(k as f64).as_matrix().max_diff(s.as_matrix()) < 1e-15);
        }
        let mid = seg.generator_at(0.5);
        let avg = samples[0].scale(0.5).add(&samples[1].scale(0.5));
        assert!(mid.as_matrix().max_diff(avg.as_matrix()) < 1e-15);
        assert!(phi_plus(&mid).0.is_finite());
    }
}
