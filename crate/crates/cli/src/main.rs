//! Command-line front end: sample ensembles, compute spectra, run the
//! verification suites, emit exact symbolic moments, and write histogram
//! data for external plotting.
//!
//! Exit codes: 0 success, 1 verification-check failure, 2 parameter error,
//! 3 resource cap exceeded.

use betatrix::closedform;
use betatrix::ensembles::{
    laguerre_from_factor, sample_hermite, sample_laguerre_factor, HermiteParams, LaguerreParams,
};
use betatrix::error::Error as LibError;
use betatrix::rng::RandomStream;
use betatrix::spectral::eigenvalues;
use betatrix::symbolic::{
    det_moment, expected_charpoly, expected_elementary_symmetric, MomentEnsemble, MomentQuery,
    MomentTarget, DEFAULT_MONOMIAL_CAP,
};
use betatrix::verify::{self, Report};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "betatrix", version, about = "General-beta Hermite and Laguerre random matrix models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw ensemble samples as matrix records or eigenvalue rows
    Sample(SampleArgs),
    /// Run a verification suite and report named checks
    Verify(VerifyArgs),
    /// Exact symbolic moments as polynomials in s = beta/2 (and a)
    Moments(MomentsArgs),
    /// Pooled-eigenvalue histogram for external plotting
    Density(DensityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EnsembleArg {
    Hermite,
    Laguerre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    #[arg(long)]
    beta: f64,
    /// Matrix order (Hermite)
    #[arg(long)]
    n: Option<usize>,
    /// Matrix order (Laguerre)
    #[arg(long)]
    m: Option<usize>,
    /// Laguerre parameter, must exceed (beta/2)(m-1)
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Emit eigenvalues instead of matrix entries
    #[arg(long)]
    eigenvalues: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// jacobians | vandermonde | reconstruct | qdist | equivalence |
    /// density | selberg | discriminant | charpoly | semicircle | all
    #[arg(long)]
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Scale sample counts down 10x and relax thresholds 2x
    #[arg(long)]
    quick: bool,
    /// Worker threads for Monte Carlo partitions (output independent of it)
    #[arg(long)]
    workers: Option<usize>,
    /// Restrict the qdist suite to one beta
    #[arg(long)]
    beta: Option<f64>,
    /// Restrict the qdist suite to one order
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// E[det^k]
    #[arg(long, value_name = "K")]
    det_power: Option<u32>,
    /// E[e_i] of the eigenvalues
    #[arg(long, value_name = "I")]
    elementary: Option<usize>,
    /// Expected characteristic polynomial, monic in y
    #[arg(long)]
    charpoly: bool,
    /// Evaluate numerically at this beta instead of printing the polynomial
    #[arg(long)]
    eval_beta: Option<f64>,
    /// Laguerre parameter value for numeric evaluation
    #[arg(long)]
    eval_a: Option<f64>,
    /// Monomial cap for symbolic expansion
    #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
    cap: u64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

struct CliError {
    code: u8,
    msg: String,
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        let code = match e {
            LibError::ResourceCap { .. } => 3,
            _ => 2,
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: 2,
            msg: format!("io: {e}"),
        }
    }
}

fn param_err(msg: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        msg: msg.into(),
    }
}

/// Reproducibility record embedded in every output.
#[derive(Serialize)]
struct RunRecord {
    command: String,
    args: serde_json::Value,
    seed: u64,
    version: String,
    wall_ms: u64,
    outputs: Vec<String>,
}

fn resolve_seed(cli: Option<u64>) -> u64 {
    cli.or_else(|| {
        std::env::var("BETATRIX_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(verify::DEFAULT_SEED)
}

fn write_output(out: &Option<String>, payload: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(payload.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Sample(args) => cmd_sample(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Moments(args) => cmd_moments(args),
        Cmd::Density(args) => cmd_density(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

enum SampledEnsemble {
    Hermite(HermiteParams),
    Laguerre(LaguerreParams),
}

impl SampledEnsemble {
    fn from_args(
        ensemble: EnsembleArg,
        beta: f64,
        n: Option<usize>,
        m: Option<usize>,
        a: Option<f64>,
    ) -> Result<Self, CliError> {
        match ensemble {
            EnsembleArg::Hermite => {
                let n = n.ok_or_else(|| param_err("--n is required for the Hermite ensemble"))?;
                Ok(Self::Hermite(HermiteParams::new(beta, n)?))
            }
            EnsembleArg::Laguerre => {
                let m = m.ok_or_else(|| param_err("--m is required for the Laguerre ensemble"))?;
                let a = a.ok_or_else(|| param_err("--a is required for the Laguerre ensemble"))?;
                Ok(Self::Laguerre(LaguerreParams::new(beta, m, a)?))
            }
        }
    }

    fn sample_matrix(&self, stream: &mut RandomStream) -> betatrix::MatrixRecord {
        match self {
            Self::Hermite(p) => sample_hermite(p, stream).to_record(),
            Self::Laguerre(p) => sample_laguerre_factor(p, stream).to_record(),
        }
    }

    fn sample_eigenvalues(&self, stream: &mut RandomStream) -> Result<Vec<f64>, CliError> {
        let t = match self {
            Self::Hermite(p) => sample_hermite(p, stream),
            Self::Laguerre(p) => laguerre_from_factor(&sample_laguerre_factor(p, stream)),
        };
        Ok(eigenvalues(&t, 1e-12)?)
    }
}

fn cmd_sample(args: SampleArgs) -> Result<u8, CliError> {
    let t0 = Instant::now();
    if args.count == 0 {
        return Err(param_err("--count must be at least 1"));
    }
    let seed = resolve_seed(args.seed);
    let ens = SampledEnsemble::from_args(args.ensemble, args.beta, args.n, args.m, args.a)?;

    let mut matrices = Vec::new();
    let mut eigen_rows = Vec::new();
    for i in 0..args.count {
        let mut stream = RandomStream::new(seed, i as u64);
        if args.eigenvalues {
            eigen_rows.push(ens.sample_eigenvalues(&mut stream)?);
        } else {
            matrices.push(ens.sample_matrix(&mut stream));
        }
    }

    let record = RunRecord {
        command: "sample".into(),
        args: serde_json::json!({
            "ensemble": format!("{:?}", args.ensemble).to_lowercase(),
            "beta": args.beta,
            "n": args.n,
            "m": args.m,
            "a": args.a,
            "count": args.count,
            "format": format!("{:?}", args.format).to_lowercase(),
            "eigenvalues": args.eigenvalues,
        }),
        seed,
        version: env!("CARGO_PKG_VERSION").into(),
        wall_ms: t0.elapsed().as_millis() as u64,
        outputs: args.out.iter().cloned().collect(),
    };

    let payload = match args.format {
        FormatArg::Json => {
            let doc = if args.eigenvalues {
                serde_json::json!({ "run": record, "eigenvalues": eigen_rows })
            } else {
                serde_json::json!({ "run": record, "matrices": matrices })
            };
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        FormatArg::Csv => {
            if !args.eigenvalues {
                return Err(param_err(
                    "CSV output requires --eigenvalues; matrix records are JSON only",
                ));
            }
            let mut s = format!("# {}\n", serde_json::to_string(&record).unwrap());
            for row in &eigen_rows {
                let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
    };
    write_output(&args.out, &payload)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput {
    run: RunRecord,
    quick: bool,
    passed: bool,
    suites: Vec<Report>,
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, CliError> {
    let t0 = Instant::now();
    let seed = resolve_seed(args.seed);
    if let Some(workers) = args.workers {
        if workers == 0 {
            return Err(param_err("--workers must be at least 1"));
        }
        // ignore the error if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    let suites = if args.suite == "qdist" && (args.beta.is_some() || args.n.is_some()) {
        let beta = args
            .beta
            .ok_or_else(|| param_err("qdist override needs both --beta and --n"))?;
        let n = args
            .n
            .ok_or_else(|| param_err("qdist override needs both --beta and --n"))?;
        vec![verify::suite_qdist(seed, args.quick, Some((beta, n)))?]
    } else {
        verify::run_suite(&args.suite, seed, args.quick)?
    };
    let passed = suites.iter().all(|r| r.passed);
    let out = VerifyOutput {
        run: RunRecord {
            command: "verify".into(),
            args: serde_json::json!({
                "suite": args.suite,
                "quick": args.quick,
                "workers": args.workers,
                "beta": args.beta,
                "n": args.n,
            }),
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            wall_ms: t0.elapsed().as_millis() as u64,
            outputs: args.out.iter().cloned().collect(),
        },
        quick: args.quick,
        passed,
        suites,
    };
    let payload = format!("{}\n", serde_json::to_string_pretty(&out).unwrap());
    write_output(&args.out, &payload)?;
    Ok(if passed { 0 } else { 1 })
}

fn cmd_moments(args: MomentsArgs) -> Result<u8, CliError> {
    let t0 = Instant::now();
    let ensemble = match args.ensemble {
        EnsembleArg::Hermite => {
            let n = args.n.ok_or_else(|| param_err("--n is required"))?;
            MomentEnsemble::Hermite { n }
        }
        EnsembleArg::Laguerre => {
            let m = args.m.ok_or_else(|| param_err("--m is required"))?;
            MomentEnsemble::Laguerre { m }
        }
    };
    let targets_given =
        args.det_power.is_some() as u8 + args.elementary.is_some() as u8 + args.charpoly as u8;
    if targets_given != 1 {
        return Err(param_err(
            "choose exactly one of --det-power, --elementary, --charpoly",
        ));
    }

    enum MomentResult {
        Poly(betatrix::symbolic::BetaPoly),
        CharPoly(betatrix::symbolic::ExpectedCharPoly),
    }

    let result = if let Some(k) = args.det_power {
        MomentResult::Poly(det_moment(
            &MomentQuery::new(ensemble, MomentTarget::DeterminantPower(k)).with_cap(args.cap),
        )?)
    } else if let Some(i) = args.elementary {
        MomentResult::Poly(expected_elementary_symmetric(
            &MomentQuery::new(ensemble, MomentTarget::ElementarySymmetric(i)).with_cap(args.cap),
        )?)
    } else {
        MomentResult::CharPoly(expected_charpoly(ensemble, args.cap)?)
    };

    if let Some(beta) = args.eval_beta {
        if beta <= 0.0 {
            return Err(param_err("--eval-beta must be positive"));
        }
        let s = beta / 2.0;
        let a = args.eval_a.unwrap_or(f64::NAN);
        if matches!(ensemble, MomentEnsemble::Laguerre { .. }) && args.eval_a.is_none() {
            return Err(param_err("--eval-a is required for Laguerre evaluation"));
        }
        let value = match &result {
            MomentResult::Poly(p) => p.eval(s, a),
            MomentResult::CharPoly(_) => {
                return Err(param_err(
                    "numeric evaluation of a characteristic polynomial needs a y value; \
                     evaluate the printed coefficients instead",
                ))
            }
        };
        let payload = format!("{value}\n");
        write_output(&args.out, &payload)?;
        return Ok(0);
    }

    let record = RunRecord {
        command: "moments".into(),
        args: serde_json::json!({
            "ensemble": format!("{:?}", args.ensemble).to_lowercase(),
            "n": args.n,
            "m": args.m,
            "det_power": args.det_power,
            "elementary": args.elementary,
            "charpoly": args.charpoly,
            "cap": args.cap,
        }),
        seed: 0,
        version: env!("CARGO_PKG_VERSION").into(),
        wall_ms: t0.elapsed().as_millis() as u64,
        outputs: args.out.iter().cloned().collect(),
    };
    let payload = match (&args.out, &result) {
        // stdout gets the human-readable polynomial, files the JSON schema
        (None, MomentResult::Poly(p)) => format!("{p}\n"),
        (None, MomentResult::CharPoly(p)) => format!("{p}\n"),
        (Some(_), MomentResult::Poly(p)) => format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::json!({
                "run": record,
                "polynomial": p.to_json(),
            }))
            .unwrap()
        ),
        (Some(_), MomentResult::CharPoly(p)) => format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::json!({
                "run": record,
                "charpoly": p.to_json(),
            }))
            .unwrap()
        ),
    };
    write_output(&args.out, &payload)?;
    Ok(0)
}

fn cmd_density(args: DensityArgs) -> Result<u8, CliError> {
    let t0 = Instant::now();
    if args.count == 0 {
        return Err(param_err("--count must be at least 1"));
    }
    if args.bins == 0 {
        return Err(param_err("--bins must be at least 1"));
    }
    let seed = resolve_seed(args.seed);
    let ens = SampledEnsemble::from_args(args.ensemble, args.beta, args.n, args.m, args.a)?;
    let order = match &ens {
        SampledEnsemble::Hermite(p) => p.n(),
        SampledEnsemble::Laguerre(p) => p.m(),
    };
    let total_values = args.count.saturating_mul(order);
    if total_values > 50_000_000 {
        return Err(CliError {
            code: 3,
            msg: format!("pooled spectrum of {total_values} values exceeds the resource cap"),
        });
    }

    let mut pooled = Vec::with_capacity(total_values);
    for i in 0..args.count {
        let mut stream = RandomStream::new(seed, i as u64);
        pooled.extend(ens.sample_eigenvalues(&mut stream)?);
    }
    let mut lo = pooled.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = pooled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / args.bins as f64;
    let mut counts = vec![0u64; args.bins];
    for &x in &pooled {
        let idx = (((x - lo) / width) as usize).min(args.bins - 1);
        counts[idx] += 1;
    }

    let record = RunRecord {
        command: "density".into(),
        args: serde_json::json!({
            "ensemble": format!("{:?}", args.ensemble).to_lowercase(),
            "beta": args.beta,
            "n": args.n,
            "m": args.m,
            "a": args.a,
            "count": args.count,
            "bins": args.bins,
        }),
        seed,
        version: env!("CARGO_PKG_VERSION").into(),
        wall_ms: t0.elapsed().as_millis() as u64,
        outputs: args.out.iter().cloned().collect(),
    };
    let mut payload = format!("# {}\n", serde_json::to_string(&record).unwrap());
    payload.push_str("bin_left,bin_right,count,density\n");
    let total = pooled.len() as f64;
    for (i, &c) in counts.iter().enumerate() {
        let left = lo + i as f64 * width;
        let right = lo + (i + 1) as f64 * width;
        let density = c as f64 / (total * width);
        payload.push_str(&format!("{left},{right},{c},{density}\n"));
    }
    write_output(&args.out, &payload)?;
    Ok(0)
}
