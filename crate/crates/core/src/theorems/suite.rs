//! Seeded property suites over generated instances.
//!
//! Every trial draws from its own generator, seeded from
//! `(suite seed, check, trial index)`, so reports do not depend on thread
//! count or execution order.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    check_curve_bound, check_lrlog_with_steps, check_nfold_bound, check_product_bound,
    piecewise_factors, BoundReport, Verdict,
};
use super::generators::{
    block_generator, make_equality_pair_with, optional_block, random_bounded_unitary_with,
};
use crate::error::{Error, Result};
use crate::geometry::{
    curve_length, evolve, gauss_lemma_check, geodesic_between, orbit_map, sphere_distance,
    GeneratorCurve, Segment, UnitVector,
};
use crate::linalg::{check_roundtrip, SkewHermitianMatrix, UnitaryMatrix};
use crate::random::{haar_unitary_with, random_skew, random_unit_vector, unitary_with_args_in};
use crate::spectral::{basis_vector, dist, log_norm, Angle, UnitarySpectrum};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Product,
    Equality,
    Distance,
    Nfold,
    Curve,
    CurveEquality,
    Contraction,
    Minimality,
    Gauss,
    Lrlog,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Product,
        CheckKind::Equality,
        CheckKind::Distance,
        CheckKind::Nfold,
        CheckKind::Curve,
        CheckKind::CurveEquality,
        CheckKind::Contraction,
        CheckKind::Minimality,
        CheckKind::Gauss,
        CheckKind::Lrlog,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Product => "product",
            CheckKind::Equality => "equality",
            CheckKind::Distance => "distance",
            CheckKind::Nfold => "nfold",
            CheckKind::Curve => "curve",
            CheckKind::CurveEquality => "curve_equality",
            CheckKind::Contraction => "contraction",
            CheckKind::Minimality => "minimality",
            CheckKind::Gauss => "gauss",
            CheckKind::Lrlog => "lrlog",
        }
    }

    fn code(self) -> u64 {
        Self::ALL.iter().position(|&k| k == self).expect("listed") as u64 + 1
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown check '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub checks: Vec<CheckKind>,
    /// Worker threads; does not affect results.
    #[serde(default, skip_serializing)]
    pub jobs: Option<usize>,
}

impl SuiteConfig {
    pub fn empty() -> Self {
        Self {
            seed: 0,
            trials: 0,
            dims: Vec::new(),
            checks: Vec::new(),
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub check: CheckKind,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub inapplicable: usize,
    /// Smallest slack seen (bound minus attained value, or the analogous
    /// margin for geometric checks).
    pub worst_slack: Option<f64>,
    /// Largest residual seen.
    pub worst_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureRecord {
    pub check: CheckKind,
    pub trial: usize,
    pub n: usize,
    pub instance_seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub checks: Vec<CheckSummary>,
    pub total_failed: usize,
    pub failures: Vec<FailureRecord>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.total_failed == 0
    }
}

/// Result of one generated instance.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub verdict: Verdict,
    pub slack: Option<f64>,
    pub residual: Option<f64>,
    pub detail: String,
}

impl TrialOutcome {
    fn from_report(r: &BoundReport) -> Self {
        Self {
            verdict: r.verdict(),
            slack: r.worst_slack(),
            residual: None,
            detail: r.violations.join("; "),
        }
    }

    fn judged(ok: bool, slack: Option<f64>, residual: Option<f64>, detail: String) -> Self {
        Self {
            verdict: if ok { Verdict::Passed } else { Verdict::Failed },
            slack,
            residual,
            detail: if ok { String::new() } else { detail },
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` of `check` within a suite seeded by `seed`.
pub fn instance_seed(seed: u64, check: CheckKind, trial: usize) -> u64 {
    splitmix64(seed ^ splitmix64((check.code() << 40) ^ trial as u64))
}

/// Replays a single instance.
pub fn run_trial(check: CheckKind, n: usize, instance_seed: u64) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
    let result = match check {
        CheckKind::Product => trial_product(n, &mut rng),
        CheckKind::Equality => trial_equality(n, &mut rng),
        CheckKind::Distance => trial_distance(n, &mut rng),
        CheckKind::Nfold => trial_nfold(n, &mut rng),
        CheckKind::Curve => trial_curve(n, &mut rng),
        CheckKind::CurveEquality => trial_curve_equality(n, &mut rng),
        CheckKind::Contraction => trial_contraction(n, &mut rng),
        CheckKind::Minimality => trial_minimality(n, &mut rng),
        CheckKind::Gauss => trial_gauss(n, &mut rng),
        CheckKind::Lrlog => trial_lrlog(n, &mut rng),
    };
    result.unwrap_or_else(|e| TrialOutcome {
        verdict: Verdict::Failed,
        slack: None,
        residual: None,
        detail: format!("error: {e}"),
    })
}

/// Runs every requested check `trials` times, cycling through `dims`.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let work: Vec<(CheckKind, usize)> = if config.dims.is_empty() {
        Vec::new()
    } else {
        config
            .checks
            .iter()
            .flat_map(|&c| (0..config.trials).map(move |t| (c, t)))
            .collect()
    };
    let run = |&(check, trial): &(CheckKind, usize)| {
        let n = config.dims[trial % config.dims.len()];
        let seed = instance_seed(config.seed, check, trial);
        (check, trial, n, seed, run_trial(check, n, seed))
    };
    let outcomes: Vec<_> = match config.jobs {
        Some(j) if j > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map(|pool| pool.install(|| work.par_iter().map(run).collect()))
            .unwrap_or_else(|_| work.iter().map(run).collect()),
        _ => work.iter().map(run).collect(),
    };

    let mut checks: Vec<CheckSummary> = config
        .checks
        .iter()
        .map(|&check| CheckSummary {
            check,
            trials: 0,
            passed: 0,
            failed: 0,
            inapplicable: 0,
            worst_slack: None,
            worst_residual: None,
        })
        .collect();
    let mut failures = Vec::new();
    for (check, trial, n, seed, out) in outcomes {
        let summary = checks
            .iter_mut()
            .find(|s| s.check == check)
            .expect("summary for every configured check");
        summary.trials += 1;
        match out.verdict {
            Verdict::Passed => summary.passed += 1,
            Verdict::Inapplicable => summary.inapplicable += 1,
            Verdict::Failed => {
                summary.failed += 1;
                failures.push(FailureRecord {
                    check,
                    trial,
                    n,
                    instance_seed: seed,
                    detail: out.detail.clone(),
                });
            }
        }
        if let Some(s) = out.slack {
            summary.worst_slack = Some(summary.worst_slack.map_or(s, |w| w.min(s)));
        }
        if let Some(r) = out.residual {
            summary.worst_residual = Some(summary.worst_residual.map_or(r, |w| w.max(r)));
        }
    }
    SuiteReport {
        seed: config.seed,
        trials: config.trials,
        dims: config.dims.clone(),
        total_failed: failures.len(),
        checks,
        failures,
    }
}

// Instance generators and judges, one per check.

fn trial_product<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let cap_u = rng.random_range(0.05..PI - 0.15);
    let cap_v = rng.random_range(0.05..PI - 0.05 - cap_u);
    let u = random_bounded_unitary_with(n, Angle(cap_u), rng)?;
    let v = random_bounded_unitary_with(n, Angle(cap_v), rng)?;
    Ok(TrialOutcome::from_report(&check_product_bound(&u, &v)?))
}

/// Planted equality pair; passes only when equality is detected and the
/// intersection has exactly the planted dimension.
pub(crate) fn planted_pair_instance<R: Rng>(
    n: usize,
    rng: &mut R,
) -> Result<(usize, UnitaryMatrix, UnitaryMatrix)> {
    let k = if n >= 2 { rng.random_range(1..=2) } else { 1 };
    let a = rng.random_range(0.1..1.4);
    let b = rng.random_range(0.1..PI - 0.1 - a);
    let (u, v) = make_equality_pair_with(n, k, Angle(a), Angle(b), rng)?;
    Ok((k, u, v))
}

fn trial_equality<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let (k, u, v) = planted_pair_instance(n, rng)?;
    let r = check_product_bound(&u, &v)?;
    Ok(judge_equality(&r, k))
}

fn judge_equality(r: &BoundReport, k: usize) -> TrialOutcome {
    let check = r.eigenspace_plus.as_ref();
    let ok = r.verdict() == Verdict::Passed
        && r.equality_plus
        && check.is_some_and(|c| c.lhs_dim == k && c.holds());
    TrialOutcome::judged(
        ok,
        r.slack_plus,
        check.map(|c| c.subspace_distance),
        format!(
            "equality_plus {}, eigenspace {:?}, violations [{}]",
            r.equality_plus,
            check,
            r.violations.join("; ")
        ),
    )
}

fn trial_distance<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let u = unitary_with_args_in(n, -PI + 1e-3, PI - 1e-3, rng);
    let spec = UnitarySpectrum::new(&u)?;
    let gap = (spec.dist_identity() - log_norm(&u)?).abs();
    let roundtrip = check_roundtrip(&u, &spec.log())?;
    let ok = gap <= 1e-10 && roundtrip <= tol::ROUNDTRIP;
    Ok(TrialOutcome::judged(
        ok,
        None,
        Some(gap.max(roundtrip)),
        format!("distance gap {gap:.3e}, round trip {roundtrip:.3e}"),
    ))
}

fn trial_nfold<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let m = rng.random_range(2..=6);
    let weights: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let factors = weights
        .iter()
        .map(|w| random_bounded_unitary_with(n, Angle(w / total * (PI - 0.05)), rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialOutcome::from_report(&check_nfold_bound(&factors)?))
}

/// Random piecewise-constant curve with `‖h_j x_j‖ < π` and angle integrals
/// inside `(−π, π)`.
pub(crate) fn random_piecewise_curve<R: Rng>(n: usize, rng: &mut R) -> Result<GeneratorCurve> {
    let m = rng.random_range(1..=5);
    let durations: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..1.0)).collect();
    let cap = (PI - 0.05) / durations.iter().sum::<f64>();
    let segments = durations
        .into_iter()
        .map(|h| {
            let lo = rng.random_range(-cap..0.0);
            let hi = rng.random_range(0.0..cap);
            Segment::constant(h, crate::random::skew_with_spectrum_in(n, lo, hi, rng))
        })
        .collect();
    GeneratorCurve::new(segments)
}

fn trial_curve<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let curve = random_piecewise_curve(n, rng)?;
    let c = check_curve_bound(&curve, 1)?;
    let f = check_nfold_bound(&piecewise_factors(&curve)?)?;
    let diff = |a: Option<Angle>, b: Option<Angle>| match (a, b) {
        (Some(a), Some(b)) => (a.0 - b.0).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    let gap = (c.bound_plus - f.bound_plus)
        .abs()
        .max((c.bound_minus - f.bound_minus).abs())
        .max(diff(c.theta_plus_product, f.theta_plus_product))
        .max(diff(c.theta_minus_product, f.theta_minus_product));
    let consistent = gap <= 1e-9 && c.verdict() == f.verdict();
    let mut out = TrialOutcome::from_report(&c);
    out.residual = Some(gap);
    if out.verdict == Verdict::Passed && !consistent {
        out.verdict = Verdict::Failed;
        out.detail = format!(
            "curve and factor-list reports disagree: gap {gap:.3e}, verdicts {:?} vs {:?}",
            c.verdict(),
            f.verdict()
        );
    }
    Ok(out)
}

/// Curve whose generators share the top eigenspace `w·span(e_1..e_k)` at
/// every time, mixing constant and sampled segments. Returns `(k, curve)`.
pub(crate) fn planted_equality_curve<R: Rng>(
    n: usize,
    rng: &mut R,
) -> Result<(usize, GeneratorCurve)> {
    let k = if n >= 4 { rng.random_range(1..=2) } else { 1 };
    let w = haar_unitary_with(n, rng);
    let m = rng.random_range(1..=4);
    let durations: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..1.0)).collect();
    let a_max = (PI - 0.1) / durations.iter().sum::<f64>();
    let sample = |rng: &mut R| {
        let a = rng.random_range(0.1..a_max);
        let rest = optional_block(n - k, -a_max, a - 0.05, rng);
        block_generator(&w, k, a, rest.as_ref())
    };
    let segments = durations
        .into_iter()
        .map(|h| {
            if rng.random_bool(0.5) {
                Segment::constant(h, sample(rng))
            } else {
                let count = rng.random_range(2..=4);
                Segment::sampled(h, (0..count).map(|_| sample(rng)).collect())
            }
        })
        .collect();
    Ok((k, GeneratorCurve::new(segments)?))
}

/// Steps per sampled segment used by the curve suites.
pub const SUITE_STEPS: usize = 64;

fn trial_curve_equality<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let (k, curve) = planted_equality_curve(n, rng)?;
    let r = check_curve_bound(&curve, SUITE_STEPS)?;
    Ok(judge_equality(&r, k))
}

fn trial_contraction<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let u = haar_unitary_with(n, rng);
    let cap = rng.random_range(0.01..PI - 0.01);
    let v = u.mul(&random_bounded_unitary_with(n, Angle(cap), rng)?);
    let xi = UnitVector::new(random_unit_vector(n, rng))?;
    let lhs = sphere_distance(&orbit_map(&u, &xi)?, &orbit_map(&v, &xi)?)?;
    let rhs = dist(&u, &v)?;
    let slack = rhs - lhs;
    Ok(TrialOutcome::judged(
        slack >= -tol::VERDICT,
        Some(slack),
        None,
        format!("sphere distance {lhs:.12} exceeds group distance {rhs:.12}"),
    ))
}

pub const DETOURS_PER_PAIR: usize = 10;

fn trial_minimality<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let u = haar_unitary_with(n, rng);
    let cap = rng.random_range(0.05..PI - 0.1);
    let v = u.mul(&random_bounded_unitary_with(n, Angle(cap), rng)?);
    let d = dist(&u, &v)?;
    let direct = geodesic_between(&u, &v)?;
    let mut residual = (curve_length(&direct.right_curve()) - d).abs();
    let mut worst = f64::INFINITY;
    let mut made = 0;
    let mut attempts = 0;
    while made < DETOURS_PER_PAIR {
        attempts += 1;
        if attempts > 20 * DETOURS_PER_PAIR {
            return Err(Error::Inconsistent(
                "could not draw detour midpoints away from -1".into(),
            ));
        }
        let mid_cap = rng.random_range(0.05..PI - 0.1);
        let w = u.mul(&random_bounded_unitary_with(n, Angle(mid_cap), rng)?);
        let second = match geodesic_between(&w, &v) {
            Ok(g) => g,
            Err(Error::SpectrumAtMinusOne { .. }) => continue,
            Err(e) => return Err(e),
        };
        let first = geodesic_between(&u, &w)?;
        let detour = first.right_curve().concat(&second.right_curve())?;
        let reached = evolve(&detour, 1)?.endpoint.mul(&u);
        residual = residual.max(reached.as_matrix().max_diff(v.as_matrix()));
        worst = worst.min(curve_length(&detour) - d);
        made += 1;
    }
    let ok = worst >= -tol::VERDICT && residual <= 1e-9;
    Ok(TrialOutcome::judged(
        ok,
        Some(worst),
        Some(residual),
        format!("detour slack {worst:.3e}, endpoint residual {residual:.3e}"),
    ))
}

/// Generator `y` whose top eigenvalue of `−iy` is simple and dominant, with
/// its norming eigenvector.
pub(crate) fn norming_pair<R: Rng>(n: usize, rng: &mut R) -> Result<(SkewHermitianMatrix, UnitVector)> {
    let w = haar_unitary_with(n, rng);
    let top = rng.random_range(0.5..1.5);
    let mut vals = vec![top];
    vals.extend((1..n).map(|_| rng.random_range(-top + 0.1..top - 0.1)));
    let y = SkewHermitianMatrix::from_imag_diag(&vals).conjugate_by(&w);
    let xi = UnitVector::new(w.apply(&basis_vector(n, 0)))?;
    Ok((y, xi))
}

/// Accepted band for `residual(1e-3) / residual(1e-4)`: second order within
/// a factor of 3.
pub const GAUSS_RATIO_BAND: (f64, f64) = (100.0 / 3.0, 300.0);

fn trial_gauss<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let (y, xi) = norming_pair(n, rng)?;
    let x = random_skew(n, rng);
    let fine = gauss_lemma_check(&y, &x, &xi, 1e-4)?;
    let coarse = gauss_lemma_check(&y, &x, &xi, 1e-3)?;
    let ratio = coarse / fine;
    let ok = fine <= 1e-6 && (GAUSS_RATIO_BAND.0..=GAUSS_RATIO_BAND.1).contains(&ratio);
    Ok(TrialOutcome::judged(
        ok,
        None,
        Some(fine),
        format!("residual {fine:.3e} at 1e-4, ratio {ratio:.3}"),
    ))
}

fn trial_lrlog<R: Rng>(n: usize, rng: &mut R) -> Result<TrialOutcome> {
    let w = haar_unitary_with(n, rng);
    let xi = UnitVector::new(w.apply(&basis_vector(n, 0)))?;
    let m = rng.random_range(1..=4);
    let sample = |rng: &mut R| {
        let f = rng.random_range(-2.0..2.0);
        let rest = optional_block(n - 1, -2.0, 2.0, rng);
        block_generator(&w, 1, f, rest.as_ref())
    };
    let segments = (0..m)
        .map(|_| {
            let h = rng.random_range(0.2..1.0);
            if rng.random_bool(0.5) {
                Segment::constant(h, sample(rng))
            } else {
                Segment::sampled(h, (0..3).map(|_| sample(rng)).collect())
            }
        })
        .collect();
    let curve = GeneratorCurve::new(segments)?;
    let r = check_lrlog_with_steps(&curve, &xi, SUITE_STEPS)?;
    Ok(TrialOutcome::judged(
        r <= 1e-8,
        None,
        Some(r),
        format!("lrlog residual {r:.3e}"),
    ))
}
