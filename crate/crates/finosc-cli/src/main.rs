//! Command-line front end: element tables, the identity verification suite,
//! squeezing sweeps, the even/odd parity scan and the large-N contraction
//! study, emitted as CSV or JSON for plotting.

use clap::{Args, Parser, Subcommand};
use finosc::elements::{self, TableKind};
use finosc::params::{Dimension, ScalarMode, SqueezeCoherentParams};
use finosc::squeezing;
use finosc::verify::{self, VerifyConfig};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "finosc",
    version,
    about = "Finite oscillator toolkit: squeezed-coherent matrix elements, matrix multi-orthogonal polynomials and spin-squeezing observables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Representation label N (basis size N+1)
    #[arg(long = "N", default_value_t = 10)]
    n: usize,
    /// Displacement amplitude rho >= 0
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    /// Displacement phase delta (radians)
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    /// Squeeze amplitude r >= 0
    #[arg(long, default_value_t = 0.3)]
    r: f64,
    /// Squeeze phase gamma (radians)
    #[arg(long, default_value_t = 0.7)]
    gamma: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<SqueezeCoherentParams, String> {
        if self.rho < 0.0 || !self.rho.is_finite() {
            return Err("--rho must be a finite non-negative number".into());
        }
        if self.r < 0.0 || !self.r.is_finite() {
            return Err("--r must be a finite non-negative number".into());
        }
        Ok(SqueezeCoherentParams::new(
            self.rho, self.delta, self.r, self.gamma,
        ))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write one matrix-element table (lambda | phi | R | Rinv)
    Table {
        #[command(flatten)]
        params: ParamArgs,
        /// Table kind: lambda, phi, R or Rinv
        #[arg(long, default_value = "R")]
        kind: String,
        /// Output format: csv or json
        #[arg(long, default_value = "csv")]
        format: String,
        /// Output path (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the registered identity checks and emit a JSON report
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// Override every upper-bound tolerance
        #[arg(long)]
        tolerance: Option<f64>,
        /// Extra seeded random parameter draws for the table identities
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Seed for the random draws
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sweep the squeezing ratio over the phase theta = 2 delta - gamma
    Squeeze {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of phase grid points (>= 2)
        #[arg(long, default_value_t = 257)]
        grid: usize,
        /// Preset: N=40, rho=0.8, r in {2,4,6}; emits three curves
        #[arg(long, default_value_t = false)]
        figure1: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Minimum squeezing ratio against N: the even/odd dichotomy
    Parity {
        /// N values to scan
        #[arg(long = "N-list", value_delimiter = ',', default_value = "4,5,6,7,8,9")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 0.8)]
        rho: f64,
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long, default_value_t = 129)]
        grid: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Band collapse and ladder contraction under rho/sqrt(N), r/N rescaling
    Contract {
        /// N values, increasing
        #[arg(long = "N-list", value_delimiter = ',', default_value = "8,16,32,64")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 0.8)]
        rho: f64,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Write atomically: temp file in the target directory, then rename.
fn write_output(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp_name = format!(
        ".{}.tmp",
        path.file_name().unwrap_or_default().to_string_lossy()
    );
    let tmp = match dir {
        Some(d) => d.join(&tmp_name),
        None => PathBuf::from(&tmp_name),
    };
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

fn emit(output: Option<&PathBuf>, contents: &str) -> Result<(), String> {
    match output {
        Some(path) => write_output(path, contents)
            .map_err(|e| format!("cannot write {}: {}", path.display(), e)),
        None => {
            print!("{}", contents);
            Ok(())
        }
    }
}

fn run() -> Result<(), (u8, String)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Table {
            params,
            kind,
            format,
            output,
        } => {
            let kind =
                TableKind::parse(&kind).ok_or((2u8, format!("unknown table kind {:?}", kind)))?;
            let p = params.params().map_err(|e| (2, e))?;
            let dim = Dimension(params.n);
            let table = match kind {
                TableKind::Lambda => elements::lambda_table(&p, dim),
                TableKind::Phi => elements::phi_table(&p, dim),
                TableKind::R => elements::r_table(&p, dim),
                TableKind::RInverse => elements::r_inverse_table(&p, dim),
            };
            let contents = match format.as_str() {
                "csv" => table.to_csv(),
                "json" => table.to_json(),
                other => return Err((2, format!("unknown format {:?}", other))),
            };
            emit(output.as_ref(), &contents).map_err(|e| (1, e))
        }
        Command::Verify {
            params,
            tolerance,
            random,
            seed,
            output,
        } => {
            if let Some(t) = tolerance {
                if t <= 0.0 {
                    return Err((2, "--tolerance must be positive".into()));
                }
            }
            let p = params.params().map_err(|e| (2, e))?;
            let mut cfg = VerifyConfig::new(Dimension(params.n), p);
            cfg.tolerance_override = tolerance;
            cfg.random_draws = random;
            cfg.seed = seed;
            cfg.mode = ScalarMode::from_env();
            let reports = verify::run_all(&cfg);
            let json = serde_json::to_string_pretty(&reports).expect("serializable");
            emit(output.as_ref(), &(json + "\n")).map_err(|e| (1, e))?;
            let passed = reports.iter().filter(|r| r.pass).count();
            eprintln!("verify: {}/{} identities pass", passed, reports.len());
            match verify::first_failure(&reports) {
                None => Ok(()),
                Some(f) => Err((
                    1,
                    format!(
                        "identity {} failed: residual {:e} vs tolerance {:e}",
                        f.identity, f.residual, f.tolerance
                    ),
                )),
            }
        }
        Command::Squeeze {
            params,
            grid,
            figure1,
            output,
        } => {
            if grid < 2 {
                return Err((2, "--grid must be at least 2".into()));
            }
            if figure1 {
                let dim = Dimension(40);
                let mut mins = Vec::new();
                for r in [2.0, 4.0, 6.0] {
                    let curve =
                        squeezing::sweep(dim, 0.8, r, grid).map_err(|e| (1, e.to_string()))?;
                    mins.push((r, curve.min_z2()));
                    let contents = curve.to_csv();
                    match &output {
                        Some(path) => {
                            let tagged = tag_path(path, &format!("r{}", r as i64));
                            emit(Some(&tagged), &contents).map_err(|e| (1, e))?;
                        }
                        None => {
                            emit(None, &contents).map_err(|e| (1, e))?;
                        }
                    }
                }
                for (r, min) in &mins {
                    eprintln!("r={}: min Z^2 = {:.6}", r, min);
                }
                Ok(())
            } else {
                let p = params.params().map_err(|e| (2, e))?;
                let curve = squeezing::sweep(Dimension(params.n), p.rho, p.r, grid)
                    .map_err(|e| (1, e.to_string()))?;
                eprintln!("min Z^2 = {:.6}", curve.min_z2());
                emit(output.as_ref(), &curve.to_csv()).map_err(|e| (1, e))
            }
        }
        Command::Parity {
            n_list,
            rho,
            r,
            grid,
            output,
        } => {
            if n_list.is_empty() {
                return Err((2, "--N-list must not be empty".into()));
            }
            let lo = *n_list.iter().min().unwrap();
            let hi = *n_list.iter().max().unwrap();
            let entries =
                squeezing::parity_scan(lo..=hi, rho, r, grid).map_err(|e| (1, e.to_string()))?;
            let selected: Vec<_> = entries
                .into_iter()
                .filter(|e| n_list.contains(&e.n))
                .collect();
            let json = serde_json::to_string_pretty(&selected).expect("serializable");
            emit(output.as_ref(), &(json + "\n")).map_err(|e| (1, e))
        }
        Command::Contract {
            n_list,
            rho,
            r,
            output,
        } => {
            if n_list.is_empty() {
                return Err((2, "--N-list must not be empty".into()));
            }
            if n_list.windows(2).any(|w| w[1] <= w[0]) {
                return Err((2, "--N-list must be strictly increasing".into()));
            }
            let report = squeezing::contraction_study(&n_list, rho, r);
            let json = serde_json::to_string_pretty(&report).expect("serializable");
            emit(output.as_ref(), &(json + "\n")).map_err(|e| (1, e))?;
            if n_list.len() >= 2 && !report.monotone_decreasing {
                return Err((
                    1,
                    "out-of-window band mass does not decrease monotonically".into(),
                ));
            }
            Ok(())
        }
    }
}

fn tag_path(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .unwrap_or_default()
        .to_string_lossy()
        .to_string();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{}_{}{}", stem, tag, ext))
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {}", message);
            ExitCode::from(code)
        }
    }
}
