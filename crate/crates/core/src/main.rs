use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bandpursuit::harness::{
    band_profile, emit_profile_csv, emit_summary_csv, generate_trial, run_experiment,
    write_records, write_signals, EnsembleSpec, EtaChoice, ExperimentConfig, SweepParam,
};
use bandpursuit::numerics::RngStream;
use bandpursuit::recovery::Algorithm;
use bandpursuit::{Error, Result};

#[derive(Parser)]
#[command(name = "bandpursuit", version, about = "Sparse recovery with coherent sensing matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Averaged coherence cross-section `delta, mean_mu`.
    Coherence {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 100)]
        realizations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// One trial; writes true and estimated supports with amplitudes.
    Recover {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, value_enum)]
        alg: AlgArg,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 1.0)]
        dr: f64,
        #[arg(long = "sep-rl", default_value_t = 3.0)]
        sep_rl: f64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep from a config file; writes the summary CSV and a `.meta` sidecar.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Optional per-trial CSV.
        #[arg(long)]
        records: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    #[arg(long)]
    n: usize,
    /// Grid length; implied by `r·f` for the frame.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    f: usize,
    /// Frame length; frame only.
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleArg {
    Paraxial,
    Frame,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Omp,
    Bomp,
    Bloomp,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Omp => Algorithm::Omp,
            AlgArg::Bomp => Algorithm::Bomp,
            AlgArg::Bloomp => Algorithm::Bloomp,
        }
    }
}

impl EnsembleArgs {
    fn spec(&self) -> Result<EnsembleSpec> {
        let spec = match (self.ensemble, self.m, self.r) {
            (EnsembleArg::Paraxial, Some(m), None) => EnsembleSpec::Paraxial { n: self.n, m, f: self.f },
            (EnsembleArg::Paraxial, _, _) => {
                return Err(Error::InvalidParameter("paraxial needs --m and no --r".into()))
            }
            (EnsembleArg::Frame, m, Some(r)) => {
                if m.is_some_and(|m| m != r * self.f) {
                    return Err(Error::InvalidParameter("frame --m must equal r·f".into()));
                }
                EnsembleSpec::Frame { n: self.n, r, f: self.f }
            }
            (EnsembleArg::Frame, _, None) => return Err(Error::InvalidParameter("frame needs --r".into())),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Coherence { ensemble, realizations, seed, out } => {
            let profile = band_profile(&ensemble.spec()?, realizations, RngStream::new(seed, 0))?;
            emit_profile_csv(&profile, &out)
        }
        Command::Recover { ensemble, alg, s, dr, sep_rl, noise, eta, seed, out } => {
            let algorithm = Algorithm::from(alg);
            let mut config = ExperimentConfig::single(ensemble.spec()?, s, vec![algorithm], EtaChoice::Fixed(eta), 1, seed);
            config.dynamic_range = dr;
            config.separation_rl = sep_rl;
            config.relative_noise = noise;
            config.sweep_param = SweepParam::N;
            let instance = generate_trial(&config, eta, 0)?;
            let (_, estimate) = instance.recover(algorithm)?;
            write_signals(&instance.truth, &estimate, File::create(&out)?)
        }
        Command::Experiment { config, out, workers, records } => {
            let config = ExperimentConfig::load(&config)?;
            let result = run_experiment(&config, workers)?;
            emit_summary_csv(&result.summary, &out)?;
            write_meta(&meta_path(&out), &result.resolved_eta)?;
            if let Some(path) = records {
                write_records(&result.records, File::create(path)?)?;
            }
            Ok(())
        }
    }
}

fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

fn write_meta(path: &Path, resolved_eta: &[(f64, f64)]) -> Result<()> {
    let mut f = File::create(path)?;
    writeln!(f, "sweep_value,eta")?;
    for (value, eta) in resolved_eta {
        writeln!(f, "{value},{eta}")?;
    }
    Ok(())
}
