//! Checkers for the spectral bounds, instance generators and seeded suites.

mod checks;
mod generators;
mod suite;

pub use checks::{
    check_curve_bound, check_lrlog, check_lrlog_with_steps, check_nfold_bound,
    check_product_bound, piecewise_factors, BoundReport, EigenspaceCheck, Inapplicable, Verdict,
};
pub use generators::{
    haar_unitary, make_equality_pair, make_equality_pair_with, random_bounded_unitary,
    random_bounded_unitary_with, RngSeed, EQUALITY_MARGIN,
};
pub use suite::{
    instance_seed, run_suite, run_trial, CheckKind, CheckSummary, FailureRecord, SuiteConfig,
    SuiteReport, TrialOutcome, DETOURS_PER_PAIR, GAUSS_RATIO_BAND, SUITE_STEPS,
};
