//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every line is printed; exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unispec::geometry::{
    curve_length, evolve, gauss_lemma_check, geodesic_between, orbit_map, sphere_distance,
    GeneratorCurve, Segment, UnitVector,
};
use unispec::linalg::{expm_skew, logm_principal, op_norm, ComplexMatrix, SkewHermitianMatrix, UnitaryMatrix};
use unispec::random::{haar_unitary_with, random_skew, random_unit_vector, skew_with_spectrum_in};
use unispec::spectral::{
    basis_vector, dist, phi_minus, phi_plus, subspace_distance, subspace_intersect_all, theta_minus,
    theta_plus, Angle, GeneratorSpectrum, Subspace, UnitarySpectrum,
};
use unispec::theorems::{
    check_curve_bound, check_nfold_bound, check_product_bound, make_equality_pair,
    piecewise_factors, random_bounded_unitary, RngSeed, Verdict,
};

const VERDICT: f64 = 1e-9;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: String) -> Outcome {
    Outcome { pass, summary }
}

fn rng(tag: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(tag.wrapping_mul(1_000_003).wrapping_add(i as u64))
}

fn product_bound() -> Outcome {
    let (mut violations, mut inapplicable, mut worst) = (0, 0, f64::INFINITY);
    let dims = [2, 4, 8];
    for i in 0..10_000 {
        let mut r = rng(1, i);
        let n = dims[i % 3];
        let cu = r.random_range(0.05..PI - 0.15);
        let cv = r.random_range(0.05..PI - 0.05 - cu);
        let u = random_bounded_unitary(n, Angle(cu), RngSeed(r.random())).unwrap();
        let v = random_bounded_unitary(n, Angle(cv), RngSeed(r.random())).unwrap();
        let report = check_product_bound(&u, &v).unwrap();
        if report.verdict() == Verdict::Inapplicable {
            inapplicable += 1;
            continue;
        }
        // Independent slack: eigendecomposition of the explicit product.
        let uv = u.mul(&v);
        let sp = theta_plus(&u).unwrap().0 + theta_plus(&v).unwrap().0 - theta_plus(&uv).unwrap().0;
        let sm = theta_minus(&uv).unwrap().0 - theta_minus(&u).unwrap().0 - theta_minus(&v).unwrap().0;
        worst = worst.min(sp).min(sm);
        if sp < -VERDICT || sm < -VERDICT || report.verdict() != Verdict::Passed {
            violations += 1;
        }
    }
    outcome(
        violations == 0 && inapplicable == 0,
        format!("10000 pairs, n in {{2,4,8}}: {violations} violations, {inapplicable} inapplicable, worst slack {worst:.3e}"),
    )
}

fn equality_identity() -> Outcome {
    let (mut bad, mut worst) = (0, 0.0f64);
    for i in 0..1_000 {
        let mut r = rng(2, i);
        let k = 1 + i % 2;
        let a = r.random_range(0.1..1.4);
        let b = r.random_range(0.1..PI - 0.1 - a);
        let (u, v) = make_equality_pair(4, k, Angle(a), Angle(b), RngSeed(r.random())).unwrap();
        let report = check_product_bound(&u, &v).unwrap();
        let hu = UnitarySpectrum::new(&u).unwrap().eigenspace_plus();
        let hv = UnitarySpectrum::new(&v).unwrap().eigenspace_plus();
        let inter = subspace_intersect_all([&hu, &hv]).unwrap();
        let huv = UnitarySpectrum::new(&u.mul(&v)).unwrap().eigenspace_plus();
        let d = subspace_distance(&inter, &huv).unwrap();
        worst = worst.max(d);
        let slack_ok = report.slack_plus.is_some_and(|s| s.abs() <= 1e-7);
        if !(report.equality_plus && slack_ok && d <= 1e-8 && inter.dim() == k && huv.dim() == k) {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("1000 planted pairs, n = 4, k in {{1,2}}: {bad} failures, worst subspace distance {worst:.3e}"),
    )
}

fn distance_population() -> Vec<UnitaryMatrix> {
    (0..1_000)
        .map(|i| haar_unitary_with(1 + i % 8, &mut rng(3, i)))
        .collect()
}

fn distance_formula(us: &[UnitaryMatrix]) -> Outcome {
    let (mut bad, mut worst) = (0, 0.0f64);
    for u in us {
        let spec = UnitarySpectrum::new(u).unwrap();
        let gap = (spec.dist_identity() - op_norm(logm_principal(u).unwrap().as_matrix())).abs();
        worst = worst.max(gap);
        if gap > 1e-10 {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("1000 Haar unitaries, n <= 8: {bad} failures, worst gap {worst:.3e}"))
}

fn sphere_contraction() -> Outcome {
    let (mut bad, mut worst) = (0, f64::INFINITY);
    for i in 0..10_000 {
        let mut r = rng(4, i);
        let n = 1 + i % 6;
        let u = haar_unitary_with(n, &mut r);
        let v = haar_unitary_with(n, &mut r);
        let xi = UnitVector::new(random_unit_vector(n, &mut r)).unwrap();
        let lhs = sphere_distance(&orbit_map(&u, &xi).unwrap(), &orbit_map(&v, &xi).unwrap()).unwrap();
        let rhs = dist(&u, &v).unwrap();
        worst = worst.min(rhs - lhs);
        if lhs > rhs + VERDICT {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("10000 triples, n <= 6: {bad} violations, worst margin {worst:.3e}"))
}

fn geodesic_minimality() -> Outcome {
    let (mut bad, mut worst, mut residual) = (0, f64::INFINITY, 0.0f64);
    for i in 0..1_000 {
        let mut r = rng(5, i);
        let n = 2 + i % 4;
        let u = haar_unitary_with(n, &mut r);
        let cap = r.random_range(0.05..PI - 0.1);
        let v = u.mul(&random_bounded_unitary(n, Angle(cap), RngSeed(r.random())).unwrap());
        let d = dist(&u, &v).unwrap();
        assert!(d < PI - 0.1);
        let mut made = 0;
        while made < 10 {
            let w = haar_unitary_with(n, &mut r);
            let (Ok(first), Ok(second)) = (geodesic_between(&u, &w), geodesic_between(&w, &v)) else {
                continue;
            };
            let detour = first.right_curve().concat(&second.right_curve()).unwrap();
            let reached = evolve(&detour, 1).unwrap().endpoint.mul(&u);
            residual = residual.max(reached.as_matrix().max_diff(v.as_matrix()));
            let slack = curve_length(&detour) - d;
            worst = worst.min(slack);
            if slack < -VERDICT {
                bad += 1;
            }
            made += 1;
        }
    }
    outcome(
        bad == 0 && residual <= 1e-9,
        format!("1000 pairs x 10 detours: {bad} violations, worst slack {worst:.3e}, endpoint residual {residual:.3e}"),
    )
}

fn random_curve(r: &mut ChaCha8Rng, n: usize) -> (Vec<(f64, SkewHermitianMatrix)>, GeneratorCurve) {
    let m = r.random_range(1..=5);
    let hs: Vec<f64> = (0..m).map(|_| r.random_range(0.2..1.0)).collect();
    let cap = (PI - 0.05) / hs.iter().sum::<f64>();
    let segs: Vec<(f64, SkewHermitianMatrix)> = hs
        .into_iter()
        .map(|h| {
            let lo = r.random_range(-cap..0.0);
            let hi = r.random_range(0.0..cap);
            (h, skew_with_spectrum_in(n, lo, hi, r))
        })
        .collect();
    let curve = GeneratorCurve::new(segs.iter().map(|(h, x)| Segment::constant(*h, x.clone())).collect()).unwrap();
    (segs, curve)
}

fn curve_bound() -> Outcome {
    let (mut violations, mut disagreements, mut gap) = (0, 0, 0.0f64);
    for i in 0..2_000 {
        let mut r = rng(6, i);
        let (segs, curve) = random_curve(&mut r, 4);
        let report = check_curve_bound(&curve, 1).unwrap();
        if report.verdict() != Verdict::Passed {
            violations += 1;
        }
        // Factor list built independently: later segments act on the left.
        let factors: Vec<UnitaryMatrix> = segs
            .iter()
            .rev()
            .map(|(h, x)| expm_skew(&x.scale(*h)).unwrap())
            .collect();
        let int_plus: f64 = segs.iter().map(|(h, x)| h * phi_plus(x).0).sum();
        let int_minus: f64 = segs.iter().map(|(h, x)| h * phi_minus(x).0).sum();
        let nfold = check_nfold_bound(&factors).unwrap();
        let via_lib = piecewise_factors(&curve).unwrap();
        let factor_gap = factors
            .iter()
            .zip(&via_lib)
            .map(|(a, b)| a.as_matrix().max_diff(b.as_matrix()))
            .fold(0.0, f64::max);
        let g = [
            (report.bound_plus - int_plus).abs(),
            (report.bound_minus - int_minus).abs(),
            (report.bound_plus - nfold.bound_plus).abs(),
            (report.bound_minus - nfold.bound_minus).abs(),
            (report.theta_plus_product.unwrap().0 - nfold.theta_plus_product.unwrap().0).abs(),
            (report.theta_minus_product.unwrap().0 - nfold.theta_minus_product.unwrap().0).abs(),
            factor_gap,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        gap = gap.max(g);
        if g > 1e-9 || report.verdict() != nfold.verdict() {
            disagreements += 1;
        }
    }
    outcome(
        violations == 0 && disagreements == 0,
        format!("2000 curves, n = 4: {violations} violations, {disagreements} disagreements with factor lists, worst gap {gap:.3e}"),
    )
}

/// `w·diag(i·a·I_k, rest)·w*`.
fn block(w: &UnitaryMatrix, k: usize, a: f64, rest: &SkewHermitianMatrix) -> SkewHermitianMatrix {
    let d = ComplexMatrix::from_fn(k + rest.dim(), |i, j| match (i < k, j < k) {
        (true, true) if i == j => Complex64::new(0.0, a),
        (false, false) => rest.as_matrix()[(i - k, j - k)],
        _ => Complex64::new(0.0, 0.0),
    });
    SkewHermitianMatrix::new(d).unwrap().conjugate_by(w)
}

fn curve_equality() -> Outcome {
    let (mut bad, mut worst) = (0, 0.0f64);
    let n = 4;
    for i in 0..500 {
        let mut r = rng(7, i);
        let k = 1 + i % 2;
        let w = haar_unitary_with(n, &mut r);
        let m = r.random_range(1..=4);
        let hs: Vec<f64> = (0..m).map(|_| r.random_range(0.2..1.0)).collect();
        let a_max = (PI - 0.1) / hs.iter().sum::<f64>();
        let gen = |r: &mut ChaCha8Rng| {
            let a = r.random_range(0.1..a_max);
            block(&w, k, a, &skew_with_spectrum_in(n - k, -a_max, a - 0.05, r))
        };
        let segments = hs
            .iter()
            .map(|&h| {
                if r.random_bool(0.5) {
                    Segment::constant(h, gen(&mut r))
                } else {
                    Segment::sampled(h, (0..3).map(|_| gen(&mut r)).collect())
                }
            })
            .collect();
        let curve = GeneratorCurve::new(segments).unwrap();
        let steps = 64;
        let report = check_curve_bound(&curve, steps).unwrap();
        let evo = evolve(&curve, steps).unwrap();
        let top = UnitarySpectrum::new(&evo.endpoint).unwrap().eigenspace_plus();
        let planted = Subspace::from_orthonormal(n, (0..k).map(|j| w.apply(&basis_vector(n, j))).collect()).unwrap();
        let node_spaces: Vec<Subspace> = curve
            .nodes(steps)
            .unwrap()
            .iter()
            .map(|(_, x)| GeneratorSpectrum::new(x).unwrap().eigenspace_plus())
            .collect();
        let inter = subspace_intersect_all(node_spaces.iter()).unwrap();
        let d = subspace_distance(&inter, &top).unwrap().max(subspace_distance(&planted, &top).unwrap());
        worst = worst.max(d);
        let slack_ok = report.slack_plus.is_some_and(|s| s.abs() <= 1e-7);
        let check_ok = report.eigenspace_plus.as_ref().is_some_and(|c| c.holds());
        if !(report.equality_plus && slack_ok && check_ok && d <= 1e-8 && inter.dim() == k) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("500 planted curves, n = 4: {bad} failures, worst subspace distance {worst:.3e}"))
}

fn integrator_order() -> Outcome {
    let mut r = rng(8, 0);
    let (x0, x1) = (random_skew(4, &mut r), random_skew(4, &mut r));
    // Affine in t, hence smooth.
    let curve = GeneratorCurve::new(vec![Segment::sampled(1.0, vec![x0, x1])]).unwrap();
    let reference = evolve(&curve, 4096).unwrap().endpoint;
    let err = |steps| op_norm(&(evolve(&curve, steps).unwrap().endpoint.as_matrix() - reference.as_matrix()));
    let (e128, e256) = (err(128), err(256));
    let ratio = e128 / e256;
    outcome(
        (3.5..=4.5).contains(&ratio),
        format!("error {e128:.3e} at 128 steps, {e256:.3e} at 256, ratio {ratio:.3}"),
    )
}

fn nfold_bound() -> Outcome {
    let (mut bad, mut worst) = (0, f64::INFINITY);
    for i in 0..2_000 {
        let mut r = rng(9, i);
        let n = r.random_range(1..=8);
        let m = r.random_range(2..=6);
        let weights: Vec<f64> = (0..m).map(|_| r.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let us: Vec<UnitaryMatrix> = weights
            .iter()
            .map(|w| random_bounded_unitary(n, Angle(w / total * (PI - 0.05)), RngSeed(r.random())).unwrap())
            .collect();
        let report = check_nfold_bound(&us).unwrap();
        let product = us.iter().skip(1).fold(us[0].clone(), |acc, u| acc.mul(u));
        let sp: f64 = us.iter().map(|u| theta_plus(u).unwrap().0).sum::<f64>() - theta_plus(&product).unwrap().0;
        let sm: f64 = theta_minus(&product).unwrap().0 - us.iter().map(|u| theta_minus(u).unwrap().0).sum::<f64>();
        worst = worst.min(sp).min(sm);
        if report.verdict() != Verdict::Passed || sp < -VERDICT || sm < -VERDICT {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("2000 tuples of 2..6 factors, n <= 8: {bad} violations, worst slack {worst:.3e}"))
}

fn gauss_lemma() -> Outcome {
    let (mut bad, mut worst, mut lo, mut hi) = (0, 0.0f64, f64::INFINITY, 0.0f64);
    let n = 4;
    for i in 0..200 {
        let mut r = rng(10, i);
        let w = haar_unitary_with(n, &mut r);
        let top = r.random_range(0.5..1.5);
        let mut vals = vec![top];
        vals.extend((1..n).map(|_| r.random_range(-top + 0.1..top - 0.1)));
        let y = SkewHermitianMatrix::from_imag_diag(&vals).conjugate_by(&w);
        let xi = UnitVector::new(w.apply(&basis_vector(n, 0))).unwrap();
        let x = random_skew(n, &mut r);
        let fine = gauss_lemma_check(&y, &x, &xi, 1e-4).unwrap();
        let coarse = gauss_lemma_check(&y, &x, &xi, 1e-3).unwrap();
        let ratio = coarse / fine;
        worst = worst.max(fine);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        if fine > 1e-6 || !(100.0 / 3.0..=300.0).contains(&ratio) {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("200 pairs, n = 4: {bad} failures, worst residual {worst:.3e}, ratios in [{lo:.1}, {hi:.1}]"),
    )
}

fn round_trips(us: &[UnitaryMatrix]) -> Outcome {
    let (mut bad, mut worst) = (0, 0.0f64);
    for u in us {
        let back = expm_skew(&logm_principal(u).unwrap()).unwrap();
        let e = back.as_matrix().max_diff(u.as_matrix());
        worst = worst.max(e);
        if e > 1e-8 {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("1000 Haar unitaries: {bad} failures, worst max-entry error {worst:.3e}"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_unispec");
    let args = ["suite", "--trials", "20", "--n", "2,4", "--seed", "7"];
    let run = || Command::new(bin).args(args).output().expect("binary runs");
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = same && a.status.success() && b.status.success();
    outcome(
        ok,
        format!("two suite runs, {} bytes each, identical: {same}, exit {:?}", a.stdout.len(), a.status.code()),
    )
}

fn main() -> ExitCode {
    let population = distance_population();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("product bound", Box::new(product_bound)),
        ("equality eigenspace identity", Box::new(equality_identity)),
        ("distance formula", Box::new(|| distance_formula(&population))),
        ("sphere contraction", Box::new(sphere_contraction)),
        ("geodesic minimality", Box::new(geodesic_minimality)),
        ("curve bound", Box::new(curve_bound)),
        ("curve equality case", Box::new(curve_equality)),
        ("integrator order", Box::new(integrator_order)),
        ("n-fold bound", Box::new(nfold_bound)),
        ("gauss lemma", Box::new(gauss_lemma)),
        ("round trips", Box::new(|| round_trips(&population))),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<30} {} {} ({:.1}s)",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.summary,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
