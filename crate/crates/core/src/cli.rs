//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a bound was violated, 2 the input does not meet
//! the hypotheses, 3 parse or validation error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::geometry::{evolve, geodesic_between, DEFAULT_STEPS};
use crate::io::{parse_curve, parse_unitary, MatrixJson};
use crate::spectral::{dist, UnitarySpectrum};
use crate::theorems::{
    check_curve_bound, check_nfold_bound, check_product_bound, run_suite, BoundReport, CheckKind,
    SuiteConfig, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INAPPLICABLE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "unispec", version, about = "Spectral bounds for products and curves of unitary matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Arguments, θ± and eigenspace dimensions of a unitary.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Distance to the identity, or between two unitaries.
    Distance {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Minimal geodesic from u to v.
    Geodesic {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    VerifyProduct {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Bound for the left-to-right product of the given factors.
    VerifyNfold {
        #[arg(long = "factor", required = true)]
        factors: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    VerifyCurve {
        #[arg(long)]
        curve: PathBuf,
        /// Integrator steps per sampled segment.
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded property suite. Flags override values from --config.
    Suite {
        #[arg(long)]
        trials: Option<usize>,
        /// Dimensions, cycled through by trial index.
        #[arg(long = "n", value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, env = "UNISPEC_SEED")]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Worker threads; results do not depend on it.
        #[arg(long)]
        jobs: Option<usize>,
        /// SuiteConfig JSON file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_DIM: usize = 4;

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let (output, result) = dispatch(&cli.command);
    match result.and_then(|(report, code)| emit(output, &report, stdout).map(|()| code)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::SpectrumAtMinusOne { .. } => EXIT_INAPPLICABLE,
                _ => EXIT_INVALID,
            }
        }
    }
}

type Outcome = crate::Result<(Value, i32)>;

fn dispatch(command: &Command) -> (&Output, Outcome) {
    match command {
        Command::Spectrum { input, output } => (output, spectrum(input)),
        Command::Distance { u, v, output } => (output, distance(u, v.as_ref())),
        Command::Geodesic { u, v, output } => (output, geodesic(u, v)),
        Command::VerifyProduct { u, v, output } => (
            output,
            parse_unitary(u)
                .and_then(|u| Ok((u, parse_unitary(v)?)))
                .and_then(|(u, v)| check_product_bound(&u, &v))
                .map(bound),
        ),
        Command::VerifyNfold { factors, output } => (
            output,
            factors
                .iter()
                .map(parse_unitary)
                .collect::<crate::Result<Vec<_>>>()
                .and_then(|us| check_nfold_bound(&us))
                .map(bound),
        ),
        Command::VerifyCurve {
            curve,
            steps,
            output,
        } => (
            output,
            parse_curve(curve)
                .and_then(|c| check_curve_bound(&c, *steps))
                .map(bound),
        ),
        Command::Suite {
            trials,
            dims,
            seed,
            checks,
            jobs,
            config,
            output,
        } => (
            output,
            suite_config(*trials, dims, *seed, checks, *jobs, config).map(|c| {
                let report = run_suite(&c);
                let code = if report.all_passed() {
                    EXIT_OK
                } else {
                    EXIT_VIOLATION
                };
                (to_value(&report), code)
            }),
        ),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn spectrum(path: &PathBuf) -> Outcome {
    let u = parse_unitary(path)?;
    let s = UnitarySpectrum::new(&u)?;
    Ok((
        json!({
            "n": u.dim(),
            "theta_plus": s.theta_plus().0,
            "theta_minus": s.theta_minus().0,
            "dist_identity": s.dist_identity(),
            "args": s.args(),
            "eigenspace_plus_dim": s.eigenspace_plus().dim(),
            "eigenspace_minus_dim": s.eigenspace_minus().dim(),
        }),
        EXIT_OK,
    ))
}

fn distance(u: &PathBuf, v: Option<&PathBuf>) -> Outcome {
    let u = parse_unitary(u)?;
    let d = match v {
        Some(v) => dist(&u, &parse_unitary(v)?)?,
        None => UnitarySpectrum::new(&u)?.dist_identity(),
    };
    Ok((json!({ "distance": d }), EXIT_OK))
}

fn geodesic(u: &PathBuf, v: &PathBuf) -> Outcome {
    let u = parse_unitary(u)?;
    let v = parse_unitary(v)?;
    let g = geodesic_between(&u, &v)?;
    let reached = evolve(&g.right_curve(), 1)?.endpoint.mul(&u);
    Ok((
        json!({
            "length": g.length(),
            "distance": dist(&u, &v)?,
            "endpoint_residual": reached.as_matrix().max_diff(v.as_matrix()),
            "generator": MatrixJson::from_matrix(g.generator.as_matrix()),
        }),
        EXIT_OK,
    ))
}

fn bound(report: BoundReport) -> (Value, i32) {
    let code = match report.verdict() {
        Verdict::Passed => EXIT_OK,
        Verdict::Failed => EXIT_VIOLATION,
        Verdict::Inapplicable => EXIT_INAPPLICABLE,
    };
    let mut value = to_value(&report);
    if let Value::Object(map) = &mut value {
        map.insert("verdict".into(), to_value(&report.verdict()));
    }
    (value, code)
}

fn suite_config(
    trials: Option<usize>,
    dims: &Option<Vec<usize>>,
    seed: Option<u64>,
    checks: &Option<Vec<String>>,
    jobs: Option<usize>,
    path: &Option<PathBuf>,
) -> crate::Result<SuiteConfig> {
    let mut config = match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?
        }
        None => SuiteConfig {
            seed: 0,
            trials: DEFAULT_TRIALS,
            dims: vec![DEFAULT_DIM],
            checks: CheckKind::ALL.to_vec(),
            jobs: None,
        },
    };
    if let Some(t) = trials {
        config.trials = t;
    }
    if let Some(d) = dims {
        config.dims = d.clone();
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(c) = checks {
        config.checks = c.iter().map(|s| s.parse()).collect::<crate::Result<_>>()?;
    }
    if jobs.is_some() {
        config.jobs = jobs;
    }
    if let Some(&bad) = config
        .dims
        .iter()
        .find(|&&n| n == 0 || n > crate::tol::MAX_DIM)
    {
        return Err(Error::InvalidDimension(bad));
    }
    Ok(config)
}

/// Keys whose numbers are matrix payloads and keep full precision.
const MATRIX_KEYS: [&str; 4] = ["re", "im", "basis_re", "basis_im"];

/// Rounds every float outside matrix payloads to 12 significant digits.
fn round_report(value: &mut Value) {
    match value {
        Value::Number(num) if num.is_f64() => {
            let x = num.as_f64().expect("f64 number");
            if let Some(r) = serde_json::Number::from_f64(round_sig(x, 12)) {
                *num = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_report),
        Value::Object(map) => {
            for (key, v) in map.iter_mut() {
                if !MATRIX_KEYS.contains(&key.as_str()) {
                    round_report(v);
                }
            }
        }
        _ => {}
    }
}

pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn emit(output: &Output, report: &Value, stdout: &mut dyn Write) -> crate::Result<()> {
    let mut report = report.clone();
    round_report(&mut report);
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("value serializes") + "\n",
        Format::Text => text_report(&report),
    };
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(format!("cannot write to stdout: {e}"))),
    }
}

fn text_report(report: &Value) -> String {
    let mut out = String::new();
    match report {
        Value::Object(map) => write_fields(&mut out, map),
        other => out.push_str(&format!("{other}\n")),
    }
    out
}

fn write_fields(out: &mut String, map: &Map<String, Value>) {
    for (key, value) in map {
        match value {
            Value::String(s) => out.push_str(&format!("{key}: {s}\n")),
            other => out.push_str(&format!("{key}: {other}\n")),
        }
    }
}
