//! Command-line front end: argument parsing, file I/O and JSON reports.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::channels::{average_fidelity, error_rate, ChannelJson, ChannelRepr, PauliChannel, Superoperator};
use crate::clifford::{decode_element, decompose, encode_element, random_clifford};
use crate::engine::{
    average_error_operator, exact_average_curve, first_order_prediction, gamma, hoeffding_k,
    model_coefficients, pathology_probe, perturbation_bound, run_experiment, ExperimentConfig,
    NoiseMode, RbDataset, PATHOLOGY_THRESHOLD,
};
use crate::error::{RbError, Result};
use crate::fitting::{
    classify_flat_curve, compare_models_with, fit_first_with, fit_zeroth_with, FitOptions,
    DEFAULT_SIGMA_THRESHOLD,
};
use crate::metrics::{delta_f, min_fidelity_bound, one_one_h_norm, pauli_diamond_distance};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONTRACT: u8 = 3;
pub const EXIT_CAPACITY: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "rblab", version, about = "Clifford randomized benchmarking laboratory")]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Uniformly random Cliffords, one `<C hex> <h hex>` line each.
    SampleClifford {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read encoded elements and print generator sequences.
    Decompose {
        #[arg(long)]
        n: usize,
        /// Input file (default: standard input).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate an RB experiment from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Manifest path (default: `<out stem>.manifest.json`).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Fit decay models to a dataset CSV.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = FitModel::Both)]
        model: FitModel,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Qubit count (default: from the dataset manifest, else 1).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SIGMA_THRESHOLD)]
        sigma: f64,
    },
    /// Model coefficients, bounds and diagnostics for a config.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diamond distance between two Pauli channels.
    Diamond {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sequences per length for a Hoeffding guarantee.
    #[command(allow_negative_numbers = true)]
    Plan {
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Lower end of the survival range.
        #[arg(long, default_value_t = 0.8)]
        a: f64,
        /// Upper end of the survival range.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FitModel {
    Zeroth,
    First,
    Both,
}

/// Provenance record written next to simulated data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config_sha256: String,
    pub seed: u64,
    pub n: usize,
    pub noise_mode: NoiseMode,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub data_path: String,
    pub manifest_path: String,
    pub config: ExperimentConfig,
}

/// Exit status for an error.
pub fn exit_code(err: &RbError) -> u8 {
    match err {
        RbError::Parse(_) | RbError::Io(_) | RbError::Domain(_) => EXIT_USAGE,
        RbError::Capacity(_) => EXIT_CAPACITY,
        RbError::Contract(_) | RbError::Shape(_) | RbError::UnsupportedMode(_) => EXIT_CONTRACT,
    }
}

/// Machine-readable error report.
pub fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// SHA-256 of the canonical JSON form of a config.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Default manifest location for a data file.
pub fn manifest_path_for(data: &Path) -> PathBuf {
    data.with_extension("manifest.json")
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| RbError::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| RbError::Io(io::Error::new(e.kind(), format!("{}: {e}", p.display())))),
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

pub fn sample_lines(n: usize, seed: u64, count: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| encode_element(&random_clifford(n, &mut rng)))
        .collect()
}

pub fn decompose_lines(n: usize, input: impl BufRead) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(decompose(&decode_element(n, &line)?).to_string());
    }
    Ok(out)
}

/// Run a config, write the CSV and the manifest.
pub fn simulate(config: &Path, out: &Path, manifest: Option<&Path>) -> Result<RunManifest> {
    let started = now_unix();
    let cfg = ExperimentConfig::parse(&read_text(config)?)?;
    let (noise, spam) = cfg.build()?;
    let data = run_experiment(&cfg.run, &noise, &spam)?;
    let file = fs::File::create(out)?;
    data.write_csv(io::BufWriter::new(file))?;
    let manifest_path = manifest.map_or_else(|| manifest_path_for(out), Path::to_path_buf);
    let record = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: config_hash(&cfg),
        seed: cfg.run.seed,
        n: cfg.run.n,
        noise_mode: noise.mode(),
        started_unix: started,
        finished_unix: now_unix(),
        data_path: out.display().to_string(),
        manifest_path: manifest_path.display().to_string(),
        config: cfg,
    };
    fs::write(&manifest_path, pretty(&record))?;
    Ok(record)
}

/// Fit a CSV dataset; `n` defaults to the manifest's qubit count, else 1.
pub fn fit_report(data: &Path, model: FitModel, n: Option<usize>, sigma: f64) -> Result<Value> {
    let manifest: Option<RunManifest> = fs::read_to_string(manifest_path_for(data))
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok());
    let n = n.or(manifest.as_ref().map(|m| m.n)).unwrap_or(1);
    let opts = FitOptions {
        time_dependent_noise: manifest
            .as_ref()
            .is_some_and(|m| m.noise_mode == NoiseMode::TimeDependent),
        ..FitOptions::default()
    };
    let file = fs::File::open(data)
        .map_err(|e| RbError::Io(io::Error::new(e.kind(), format!("{}: {e}", data.display()))))?;
    let dataset = RbDataset::read_csv(n, io::BufReader::new(file))?;
    Ok(match model {
        FitModel::Zeroth => serde_json::to_value(fit_zeroth_with(&dataset, &opts)?),
        FitModel::First => serde_json::to_value(fit_first_with(&dataset, &opts)?),
        FitModel::Both => serde_json::to_value(compare_models_with(&dataset, &opts, sigma)?),
    }
    .expect("fit serializes"))
}

/// Coefficients, `γ`, perturbation bounds, pathology and flat-curve checks,
/// channel audits and a model comparison on simulated data.
pub fn analyze(cfg: &ExperimentConfig) -> Result<Value> {
    let n = cfg.run.n;
    if n > 2 {
        return Err(RbError::Capacity(format!(
            "analyze needs n <= 2 for exact diagnostics, got {n}"
        )));
    }
    let (noise, spam) = cfg.build()?;
    let mode = noise.mode();
    let coefficients = if noise.is_time_dependent() {
        None
    } else {
        Some(model_coefficients(&noise, &spam)?)
    };
    let gammas = gamma(&noise)?;
    let bounds = cfg
        .run
        .m_list
        .iter()
        .map(|&m| {
            let b = |k| perturbation_bound(k, &gammas, m);
            Ok(json!({ "m": m, "k1": b(1)?, "k2": b(2)?, "k3": b(3)? }))
        })
        .collect::<Result<Vec<_>>>()?;
    let first_order = cfg
        .run
        .m_list
        .iter()
        .map(|&m| first_order_prediction(m, &noise, &spam))
        .collect::<Result<Vec<_>>>()?;
    let exact = match exact_average_curve(&cfg.run.m_list, &noise, &spam) {
        Ok(v) => Some(v),
        Err(RbError::Capacity(_)) => None,
        Err(e) => return Err(e),
    };
    let lambda = average_error_operator(&noise)?;
    let id = Superoperator::identity(noise.dim());
    let diamond = PauliChannel::from_superoperator(&lambda)
        .and_then(|q| pauli_diamond_distance(&q, &PauliChannel::identity(n)))
        .ok()
        .map(|d| d.distance);
    let audit = json!({
        "average_fidelity": average_fidelity(&lambda)?,
        "error_rate": error_rate(&lambda)?,
        "depolarizing_parameter": lambda.depolarizing_parameter(),
        "one_one_h_distance": one_one_h_norm(&lambda.sub(&id)?)?,
        "diamond_distance": diamond,
    });
    let data = run_experiment(&cfg.run, &noise, &spam)?;
    let comparison = if cfg.run.m_list.len() >= 4 {
        let opts = FitOptions {
            time_dependent_noise: noise.is_time_dependent(),
            ..FitOptions::default()
        };
        Some(compare_models_with(&data, &opts, DEFAULT_SIGMA_THRESHOLD)?)
    } else {
        None
    };
    Ok(json!({
        "n": n,
        "noise_mode": mode,
        "coefficients": coefficients,
        "gate_dependence": coefficients.as_ref().map(|c| c.gate_dependence()),
        "gamma": gammas,
        "perturbation_bounds": bounds,
        "predictions": {
            "m": cfg.run.m_list,
            "first_order": first_order,
            "exact": exact,
        },
        "pathology": pathology_probe(&noise, PATHOLOGY_THRESHOLD)?,
        "flat_curve": coefficients.as_ref().map(|c| classify_flat_curve(c, &spam)),
        "audit": audit,
        "model_comparison": comparison,
    }))
}

fn pauli_from_json(c: &ChannelJson) -> Result<PauliChannel> {
    match c.repr {
        ChannelRepr::Pauli => c.to_pauli(),
        _ => PauliChannel::from_superoperator(&c.to_superoperator()?),
    }
}

/// Diamond distance with certificates, plus the fidelity-based quantities.
pub fn diamond_report(a: &ChannelJson, b: &ChannelJson) -> Result<Value> {
    let (qa, qb) = (pauli_from_json(a)?, pauli_from_json(b)?);
    let dist = pauli_diamond_distance(&qa, &qb)?;
    let (sa, sb) = (qa.to_superoperator(), qb.to_superoperator());
    Ok(json!({
        "distance": dist.distance,
        "certificates": dist.certificates,
        "certificate_scale": 0.5,
        "delta_f": delta_f(&sa, &sb)?,
        "one_one_h_norm": one_one_h_norm(&sa.sub(&sb)?)?,
        "min_fidelity_bound": min_fidelity_bound(&qa, &qb)?,
    }))
}

pub fn plan_report(epsilon: f64, delta: f64, a: f64, b: f64) -> Result<Value> {
    let plan = hoeffding_k(epsilon, delta, a, b)?;
    Ok(json!({
        "k": plan.k,
        "epsilon": plan.epsilon,
        "delta": plan.delta,
        "range": plan.range,
        "warning": plan.warning,
        "note": "reference scale: about 7e4 sequences for epsilon=1e-3, delta=0.05, range 0.2",
    }))
}

fn dispatch(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(RbError::Domain("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| RbError::Contract(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::SampleClifford { n, seed, count, out } => {
            if n == 0 {
                return Err(RbError::Domain("n must be at least 1".into()));
            }
            emit(out.as_deref(), &sample_lines(n, seed, count).join("\n"))
        }
        Command::Decompose { n, input, out } => {
            let lines = match input {
                Some(p) => decompose_lines(n, io::BufReader::new(fs::File::open(p)?))?,
                None => decompose_lines(n, io::stdin().lock())?,
            };
            emit(out.as_deref(), &lines.join("\n"))
        }
        Command::Simulate {
            config,
            out,
            manifest,
        } => {
            let record = simulate(&config, &out, manifest.as_deref())?;
            emit(None, &pretty(&record))
        }
        Command::Fit {
            data,
            model,
            out,
            n,
            sigma,
        } => emit(out.as_deref(), &pretty(&fit_report(&data, model, n, sigma)?)),
        Command::Analyze { config, out } => {
            let cfg = ExperimentConfig::parse(&read_text(&config)?)?;
            emit(out.as_deref(), &pretty(&analyze(&cfg)?))
        }
        Command::Diamond { a, b, out } => {
            let a = ChannelJson::parse(&read_text(&a)?)?;
            let b = ChannelJson::parse(&read_text(&b)?)?;
            emit(out.as_deref(), &pretty(&diamond_report(&a, &b)?))
        }
        Command::Plan {
            epsilon,
            delta,
            a,
            b,
        } => {
            let report = plan_report(epsilon, delta, a, b)?;
            if let Some(w) = report["warning"].as_str() {
                eprintln!("{}", json!({ "warning": w }));
            }
            emit(None, &pretty(&report))
        }
    }
}

/// Parse arguments, run, and map failures to exit codes with error JSON on
/// standard error.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn main() -> ExitCode {
    main_with(std::env::args_os())
}
