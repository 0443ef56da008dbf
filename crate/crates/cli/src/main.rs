//! Command-line front end: build states, evaluate phase-space grids, run the
//! faithfulness classification and Gaussian criteria, and drive tomography
//! studies. Exit codes: 0 success, 1 usage/config error, 2 numerical failure.
//!
//! Grid and study parallelism is delegated to the library (rayon); bound the
//! worker count with RAYON_NUM_THREADS.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use faithcheck::faithfulness::{
    ab_coefficients, check_operator_of, chi, classify, gaussian_faithful, DEFAULT_RANK_TOL,
};
use faithcheck::io::{
    parse_state_spec, save_state, write_grid_csv, write_study_csv, StateSpec,
};
use faithcheck::phase_space::{
    analytic_wigner_correlated_fock, analytic_wigner_split_thermal, analytic_wigner_twin_beam,
    characteristic_grid_spec, wigner_grid_spec, GridSpec, PhaseSpaceGrid,
};
use faithcheck::states::{moments_of, split_thermal, twin_beam, DensityOperator};
use faithcheck::tomography::{
    apply_channel_first, noise_amplification_study, reconstruct, Channel,
};
use faithcheck::Error;

#[derive(Parser)]
#[command(name = "faithcheck", version, about = "Faithfulness analysis of two-mode states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StateInput {
    /// Inline JSON state specification, e.g. '{"family":"twinbeam","lambda":0.5,"dim":10}'
    #[arg(long, conflicts_with = "state")]
    spec: Option<String>,
    /// Path to a saved state (matrix container)
    #[arg(long)]
    state: Option<PathBuf>,
}

impl StateInput {
    fn resolve(&self) -> Result<(DensityOperator, Option<StateSpec>), Error> {
        match (&self.spec, &self.state) {
            (Some(json), None) => {
                let spec = parse_state_spec(json)?;
                Ok((spec.build()?, Some(spec)))
            }
            (None, Some(path)) => Ok((faithcheck::io::load_state(path)?, None)),
            _ => Err(Error::InvalidParameter {
                name: "state",
                reason: "provide exactly one of --spec or --state".into(),
            }),
        }
    }
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Half-width of the square grid per real axis
    #[arg(long, default_value_t = 2.0)]
    grid_extent: f64,
    /// Samples per real axis
    #[arg(long, default_value_t = 21)]
    grid_points: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build a state from a JSON spec and save it as a matrix container
    State {
        /// Inline JSON state specification
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the Wigner function on a grid and export CSV
    Wigner {
        #[command(flatten)]
        input: StateInput,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the characteristic function on a grid and export CSV
    Char {
        #[command(flatten)]
        input: StateInput,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify faithfulness from the singular spectrum of the check operator
    Check {
        #[command(flatten)]
        input: StateInput,
        /// Relative rank tolerance
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
        /// Report destination (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the Gaussian correlation functional and A/B coefficients
    Chi {
        #[command(flatten)]
        input: StateInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a channel from (E⊗I)R and run the noise study
    Tomo {
        #[command(flatten)]
        input: StateInput,
        /// Channel: identity | phase:<theta> | dephasing | attenuation:<eta>
        #[arg(long, default_value = "identity")]
        channel: String,
        /// Comma-separated noise magnitudes
        #[arg(long, default_value = "0,1e-6")]
        epsilons: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-trial CSV table
        #[arg(long)]
        out: PathBuf,
        /// JSON summary destination (stdout when omitted)
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Sweep a family parameter and tabulate rank, sigma_min and chi
    Sweep {
        /// Family to sweep: twinbeam | splitthermal
        #[arg(long)]
        family: String,
        /// Comma-separated parameter values (lambda or sigma2)
        #[arg(long)]
        values: String,
        #[arg(long, default_value_t = 5)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
        /// CSV destination (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ChiReport {
    chi: f64,
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    discriminant: f64,
    gaussian_faithful: bool,
}

#[derive(Serialize)]
struct TomoSummary {
    channel: String,
    dim: usize,
    sigma_min: f64,
    recovered: bool,
    residual_norm: f64,
    rank_deficient: bool,
    mean_errors: Vec<(f64, f64)>,
}

fn parse_channel(s: &str, d: usize) -> Result<Channel, Error> {
    let bad = |reason: String| Error::InvalidParameter { name: "channel", reason };
    if s == "identity" {
        return Channel::identity(d);
    }
    if s == "dephasing" {
        return Channel::dephasing(d);
    }
    if let Some(theta) = s.strip_prefix("phase:") {
        let theta: f64 = theta
            .parse()
            .map_err(|_| bad(format!("bad angle in {s:?}")))?;
        return Channel::phase_rotation(theta, d);
    }
    if let Some(eta) = s.strip_prefix("attenuation:") {
        let eta: f64 = eta
            .parse()
            .map_err(|_| bad(format!("bad transmissivity in {s:?}")))?;
        return Channel::attenuation(eta, d);
    }
    Err(bad(format!(
        "unknown channel {s:?}; expected identity, dephasing, phase:<theta> or attenuation:<eta>"
    )))
}

fn parse_f64_list(s: &str, name: &'static str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|p| {
            p.trim().parse::<f64>().map_err(|_| Error::InvalidParameter {
                name,
                reason: format!("{p:?} is not a number"),
            })
        })
        .collect()
}

/// Analytic Wigner column for the families with a closed form.
fn analytic_column(spec: &StateSpec, grid: &PhaseSpaceGrid) -> Result<Option<Vec<f64>>, Error> {
    let mut vals = Vec::with_capacity(grid.alphas.len() * grid.betas.len());
    for &a in &grid.alphas {
        for &b in &grid.betas {
            let v = match spec {
                StateSpec::Twinbeam { lambda, .. } => analytic_wigner_twin_beam(*lambda, a, b)?,
                StateSpec::Splitthermal { sigma2, .. } => {
                    analytic_wigner_split_thermal(*sigma2, a, b)?
                }
                StateSpec::Correlatedfock { lambda, .. } => {
                    analytic_wigner_correlated_fock(*lambda, a, b)?
                }
                _ => return Ok(None),
            };
            vals.push(v);
        }
    }
    Ok(Some(vals))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::State { spec, out } => {
            let spec = parse_state_spec(&spec)?;
            let state = spec.build()?;
            save_state(&out, &state)?;
            eprintln!(
                "wrote dim-{} state, trace {:.12}, min eigenvalue {:.3e}",
                state.dim(),
                state.trace(),
                state.min_eigenvalue()
            );
            Ok(())
        }
        Command::Wigner { input, grid, out } => {
            let (state, spec) = input.resolve()?;
            let gs = GridSpec::new(grid.grid_extent, grid.grid_points)?;
            let g = wigner_grid_spec(&state, &gs, &gs)?;
            let analytic = match &spec {
                Some(s) => analytic_column(s, &g)?,
                None => None,
            };
            write_grid_csv(&out, &g, analytic.as_deref())
        }
        Command::Char { input, grid, out } => {
            let (state, _) = input.resolve()?;
            let gs = GridSpec::new(grid.grid_extent, grid.grid_points)?;
            let g = characteristic_grid_spec(&state, &gs, &gs)?;
            write_grid_csv(&out, &g, None)
        }
        Command::Check { input, tol, out } => {
            let (state, _) = input.resolve()?;
            let check = check_operator_of(&state)?;
            let mut report = classify(&check, tol)?;
            report.chi = moments_of(&state).ok().and_then(|m| chi(&m).ok());
            emit(out.as_deref(), &serde_json::to_string_pretty(&report)?)
        }
        Command::Chi { input, out } => {
            let (state, _) = input.resolve()?;
            let m = moments_of(&state)?;
            let value = chi(&m)?;
            let coeffs = ab_coefficients(&state, 1e-3)?;
            let report = ChiReport {
                chi: value,
                a_re: coeffs.a.re,
                a_im: coeffs.a.im,
                b_re: coeffs.b.re,
                b_im: coeffs.b.im,
                discriminant: coeffs.discriminant(),
                gaussian_faithful: gaussian_faithful(&coeffs, 1e-8),
            };
            emit(out.as_deref(), &serde_json::to_string_pretty(&report)?)
        }
        Command::Tomo { input, channel, epsilons, trials, seed, out, summary } => {
            let (state, spec) = input.resolve()?;
            let d = state.dim();
            let ch = parse_channel(&channel, d)?;
            let eps = parse_f64_list(&epsilons, "epsilons")?;
            let study = noise_amplification_study(&state, &ch, &eps, trials, seed)?;

            let output = apply_channel_first(&state, &ch)?;
            let recon = reconstruct(&state, &output, 1e-8)?;

            let parameter = match &spec {
                Some(StateSpec::Twinbeam { lambda, .. }) => *lambda,
                Some(StateSpec::Splitthermal { sigma2, .. }) => *sigma2,
                Some(StateSpec::Correlatedfock { lambda, .. }) => *lambda,
                _ => f64::NAN,
            };
            let chi_val = moments_of(&state).ok().and_then(|m| chi(&m).ok());
            write_study_csv(&out, parameter, d, &study.rows, study.sigma_min, chi_val)?;

            let s = TomoSummary {
                channel,
                dim: d,
                sigma_min: study.sigma_min,
                recovered: recon.recovered,
                residual_norm: recon.residual_norm,
                rank_deficient: recon.rank_deficient,
                mean_errors: study.mean_errors,
            };
            emit(summary.as_deref(), &serde_json::to_string_pretty(&s)?)
        }
        Command::Sweep { family, values, dim, tol, out } => {
            let values = parse_f64_list(&values, "values")?;
            let mut csv = String::from("parameter,dim,rank,full_rank,sigma_min,chi\n");
            for &v in &values {
                let state = match family.as_str() {
                    "twinbeam" => twin_beam(v, dim)?,
                    "splitthermal" => split_thermal(v, dim, 64.max(2 * dim - 1))?,
                    other => {
                        return Err(Error::InvalidParameter {
                            name: "family",
                            reason: format!(
                                "unknown sweep family {other:?}; expected twinbeam or splitthermal"
                            ),
                        })
                    }
                };
                let report = classify(&check_operator_of(&state)?, tol)?;
                let chi_val = chi(&moments_of(&state)?)?;
                csv.push_str(&format!(
                    "{v},{dim},{},{},{:.17e},{:.17e}\n",
                    report.rank, report.full_rank, report.sigma_min, chi_val
                ));
            }
            emit(out.as_deref(), csv.trim_end())
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter { .. }
        | Error::DimensionMismatch(_)
        | Error::Io(_)
        | Error::Json(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
