//! Executable forms of the spectral bounds: for a pair of unitaries, for a
//! finite product, and for a piecewise-smooth curve. Each checker returns a
//! [`BoundReport`]; inapplicable input is a report state, not an error.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{evolve, evolve_centered, GeneratorCurve, SegmentKind, UnitVector, DEFAULT_STEPS};
use crate::linalg::{inner, vec_norm, UnitaryMatrix};
use crate::spectral::{
    subspace_distance, subspace_intersect_all, Angle, GeneratorSpectrum, Subspace,
    UnitarySpectrum,
};
use crate::tol;

/// Why a bound does not apply to an instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Inapplicable {
    /// A factor has −1 in its spectrum (within `tol_pi_gap`).
    MinusOneInSpectrum { factor: usize },
    /// The angle sums violate the strict hypotheses.
    HypothesisFailed { detail: String },
}

/// Comparison of `⋂ H±(factors)` with `H±(product)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenspaceCheck {
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub subspace_distance: f64,
}

impl EigenspaceCheck {
    pub fn holds(&self) -> bool {
        self.lhs_dim == self.rhs_dim && self.subspace_distance <= tol::EIGENSPACE
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Passed,
    Failed,
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub applicable: bool,
    pub reason: Option<Inapplicable>,
    pub theta_plus_product: Option<Angle>,
    pub theta_minus_product: Option<Angle>,
    pub bound_plus: f64,
    pub bound_minus: f64,
    /// `bound_plus − θ₊(product)`.
    pub slack_plus: Option<f64>,
    /// `θ₋(product) − bound_minus`.
    pub slack_minus: Option<f64>,
    pub equality_plus: bool,
    pub equality_minus: bool,
    pub eigenspace_plus: Option<EigenspaceCheck>,
    pub eigenspace_minus: Option<EigenspaceCheck>,
    /// Curves only: `|θ±(α_b) − (θ±(γ_b) − S_b/2)|` for the centered curve.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centered_residual: Option<f64>,
    pub violations: Vec<String>,
    pub tolerance_used: f64,
}

impl BoundReport {
    fn inapplicable(reason: Inapplicable, bound_plus: f64, bound_minus: f64) -> Self {
        Self {
            applicable: false,
            reason: Some(reason),
            theta_plus_product: None,
            theta_minus_product: None,
            bound_plus,
            bound_minus,
            slack_plus: None,
            slack_minus: None,
            equality_plus: false,
            equality_minus: false,
            eigenspace_plus: None,
            eigenspace_minus: None,
            centered_residual: None,
            violations: Vec::new(),
            tolerance_used: tol::VERDICT,
        }
    }

    pub fn verdict(&self) -> Verdict {
        if !self.applicable {
            Verdict::Inapplicable
        } else if self.violations.is_empty() {
            Verdict::Passed
        } else {
            Verdict::Failed
        }
    }

    /// The smaller of the two slacks.
    pub fn worst_slack(&self) -> Option<f64> {
        match (self.slack_plus, self.slack_minus) {
            (Some(p), Some(m)) => Some(p.min(m)),
            (p, m) => p.or(m),
        }
    }
}

fn hypotheses(bound_plus: f64, bound_minus: f64) -> Option<Inapplicable> {
    if bound_plus >= PI || bound_minus <= -PI {
        return Some(Inapplicable::HypothesisFailed {
            detail: format!(
                "need sum of theta_plus < pi and sum of theta_minus > -pi, got {bound_plus:.12} and {bound_minus:.12}"
            ),
        });
    }
    None
}

/// Shared tail of every checker: spectrum of the product, slacks, equality
/// detection and the eigenspace comparison.
fn evaluate<P, M>(
    bound_plus: f64,
    bound_minus: f64,
    product: &UnitaryMatrix,
    lhs_plus: P,
    lhs_minus: M,
) -> Result<BoundReport>
where
    P: FnOnce() -> Result<Subspace>,
    M: FnOnce() -> Result<Subspace>,
{
    let mut report = BoundReport::inapplicable(
        Inapplicable::HypothesisFailed {
            detail: String::new(),
        },
        bound_plus,
        bound_minus,
    );
    report.applicable = true;
    report.reason = None;

    let spec = match UnitarySpectrum::new(product) {
        Ok(s) => s,
        Err(Error::SpectrumAtMinusOne { arg }) => {
            report
                .violations
                .push(format!("product has -1 in its spectrum (argument {arg:.12})"));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let (tp, tm) = (spec.theta_plus().0, spec.theta_minus().0);
    let slack_plus = bound_plus - tp;
    let slack_minus = tm - bound_minus;
    report.theta_plus_product = Some(Angle(tp));
    report.theta_minus_product = Some(Angle(tm));
    report.slack_plus = Some(slack_plus);
    report.slack_minus = Some(slack_minus);
    if slack_plus < -tol::VERDICT {
        report
            .violations
            .push(format!("theta_plus bound violated by {:.3e}", -slack_plus));
    }
    if slack_minus < -tol::VERDICT {
        report
            .violations
            .push(format!("theta_minus bound violated by {:.3e}", -slack_minus));
    }

    report.equality_plus = slack_plus.abs() <= tol::EQ;
    report.equality_minus = slack_minus.abs() <= tol::EQ;
    if report.equality_plus {
        let check = compare(&lhs_plus()?, &spec.eigenspace_plus())?;
        if !check.holds() {
            report.violations.push(format!(
                "top eigenspace mismatch: dims {} vs {}, distance {:.3e}",
                check.lhs_dim, check.rhs_dim, check.subspace_distance
            ));
        }
        report.eigenspace_plus = Some(check);
    }
    if report.equality_minus {
        let check = compare(&lhs_minus()?, &spec.eigenspace_minus())?;
        if !check.holds() {
            report.violations.push(format!(
                "bottom eigenspace mismatch: dims {} vs {}, distance {:.3e}",
                check.lhs_dim, check.rhs_dim, check.subspace_distance
            ));
        }
        report.eigenspace_minus = Some(check);
    }
    Ok(report)
}

fn compare(lhs: &Subspace, rhs: &Subspace) -> Result<EigenspaceCheck> {
    Ok(EigenspaceCheck {
        lhs_dim: lhs.dim(),
        rhs_dim: rhs.dim(),
        subspace_distance: subspace_distance(lhs, rhs)?,
    })
}

/// `θ₊(u) + θ₊(v) ≥ θ₊(uv)` and `θ₋(u) + θ₋(v) ≤ θ₋(uv)`, with the
/// eigenspace identity `H±(u) ∩ H±(v) = H±(uv)` in the equality case.
pub fn check_product_bound(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<BoundReport> {
    u.as_matrix().check_same_dim(v.as_matrix())?;
    check_nfold_bound(&[u.clone(), v.clone()])
}

/// `Σ θ₊(u_j) ≥ θ₊(u_1···u_m)` and the analogous bound for `θ₋`.
pub fn check_nfold_bound(us: &[UnitaryMatrix]) -> Result<BoundReport> {
    let first = us
        .first()
        .ok_or_else(|| Error::InvalidArgument("need at least one factor".into()))?;
    let mut spectra = Vec::with_capacity(us.len());
    let mut product = UnitaryMatrix::identity(first.dim());
    for (j, u) in us.iter().enumerate() {
        first.as_matrix().check_same_dim(u.as_matrix())?;
        match UnitarySpectrum::new(u) {
            Ok(s) => spectra.push(s),
            Err(Error::SpectrumAtMinusOne { .. }) => {
                return Ok(BoundReport::inapplicable(
                    Inapplicable::MinusOneInSpectrum { factor: j },
                    f64::NAN,
                    f64::NAN,
                ))
            }
            Err(e) => return Err(e),
        }
        product = product.mul(u);
    }
    let bound_plus: f64 = spectra.iter().map(|s| s.theta_plus().0).sum();
    let bound_minus: f64 = spectra.iter().map(|s| s.theta_minus().0).sum();
    if let Some(reason) = hypotheses(bound_plus, bound_minus) {
        return Ok(BoundReport::inapplicable(reason, bound_plus, bound_minus));
    }
    let product = UnitaryMatrix::reproject(product.into_matrix(), 1);
    evaluate(
        bound_plus,
        bound_minus,
        &product,
        || subspace_intersect_all(spectra.iter().map(|s| s.eigenspace_plus()).collect::<Vec<_>>().iter()),
        || subspace_intersect_all(spectra.iter().map(|s| s.eigenspace_minus()).collect::<Vec<_>>().iter()),
    )
}

/// `θ₊(γ_b) ≤ ∫ φ₊(γ̇γ⁻¹) dt` and `θ₋(γ_b) ≥ ∫ φ₋(γ̇γ⁻¹) dt` for a curve
/// from the identity, with the node-wise eigenspace identity in the equality
/// case and the centered-curve cross-check.
pub fn check_curve_bound(curve: &GeneratorCurve, steps_per_segment: usize) -> Result<BoundReport> {
    let evo = evolve(curve, steps_per_segment)?;
    let (bound_plus, bound_minus) = (evo.int_phi_plus, evo.int_phi_minus);
    if let Some(reason) = hypotheses(bound_plus, bound_minus) {
        return Ok(BoundReport::inapplicable(reason, bound_plus, bound_minus));
    }
    let nodes = curve.nodes(steps_per_segment)?;
    let node_spaces = |plus: bool| -> Result<Subspace> {
        let spaces = nodes
            .iter()
            .map(|(_, x)| {
                let s = GeneratorSpectrum::new(x)?;
                Ok(if plus { s.eigenspace_plus() } else { s.eigenspace_minus() })
            })
            .collect::<Result<Vec<_>>>()?;
        subspace_intersect_all(spaces.iter())
    };
    let mut report = evaluate(
        bound_plus,
        bound_minus,
        &evo.endpoint,
        || node_spaces(true),
        || node_spaces(false),
    )?;

    if let (Some(tp), Some(tm)) = (report.theta_plus_product, report.theta_minus_product) {
        let alpha = evolve_centered(curve, steps_per_segment)?;
        match UnitarySpectrum::new(&alpha.endpoint) {
            Ok(s) => {
                let half = 0.5 * evo.s_total;
                let r = (s.theta_plus().0 - (tp.0 - half))
                    .abs()
                    .max((s.theta_minus().0 - (tm.0 - half)).abs());
                if r > tol::VERDICT {
                    report
                        .violations
                        .push(format!("centered curve identity off by {r:.3e}"));
                }
                report.centered_residual = Some(r);
            }
            Err(Error::SpectrumAtMinusOne { .. }) => report
                .violations
                .push("centered endpoint has -1 in its spectrum".into()),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// The factor list whose left-to-right product equals the endpoint of a
/// piecewise-constant curve: `[e^{h_m x_m}, …, e^{h_1 x_1}]`.
pub fn piecewise_factors(curve: &GeneratorCurve) -> Result<Vec<UnitaryMatrix>> {
    curve
        .segments()
        .iter()
        .rev()
        .map(|seg| match &seg.kind {
            SegmentKind::Constant(x) => Ok(GeneratorSpectrum::new(x)?.exp_scaled(seg.duration)),
            SegmentKind::Sampled(_) => Err(Error::InvalidCurve(
                "factor list requires a piecewise-constant curve".into(),
            )),
        })
        .collect()
}

/// For `ξ` a common eigenvector of every generator, `γ_b ξ = e^{i∫f} ξ` where
/// `x(t)ξ = i f(t) ξ`. Returns `‖γ_b ξ − e^{i∫f} ξ‖`.
pub fn check_lrlog(curve: &GeneratorCurve, xi: &UnitVector) -> Result<f64> {
    check_lrlog_with_steps(curve, xi, DEFAULT_STEPS)
}

pub fn check_lrlog_with_steps(
    curve: &GeneratorCurve,
    xi: &UnitVector,
    steps_per_segment: usize,
) -> Result<f64> {
    if xi.dim() != curve.dim() {
        return Err(Error::DimensionMismatch {
            expected: curve.dim(),
            found: xi.dim(),
        });
    }
    let v = xi.as_slice();
    let eigenvalue = |x: &crate::linalg::SkewHermitianMatrix| -> Result<f64> {
        let xv = x.as_matrix().mul_vec(v);
        let rayleigh = inner(&xv, v);
        let residual = vec_norm(
            &xv.iter()
                .zip(v)
                .map(|(a, b)| a - rayleigh * b)
                .collect::<Vec<Complex64>>(),
        );
        if residual > 1e-8 {
            return Err(Error::NotCommonEigenvector { residual });
        }
        Ok(rayleigh.im)
    };
    for seg in curve.segments() {
        match &seg.kind {
            SegmentKind::Constant(x) => {
                eigenvalue(x)?;
            }
            SegmentKind::Sampled(samples) => {
                for x in samples {
                    eigenvalue(x)?;
                }
            }
        }
    }
    let mut integral = 0.0;
    for (h, x) in curve.nodes(steps_per_segment)? {
        integral += h * eigenvalue(&x)?;
    }
    let end = evolve(curve, steps_per_segment)?.endpoint;
    let moved = end.apply(v);
    let phase = Complex64::from_polar(1.0, integral);
    Ok(vec_norm(
        &moved
            .iter()
            .zip(v)
            .map(|(a, b)| a - phase * b)
            .collect::<Vec<_>>(),
    ))
}
