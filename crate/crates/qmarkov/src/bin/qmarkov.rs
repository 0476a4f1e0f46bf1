//! Command line front end for the quantum Markov chain analyses.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qmarkov::format::{
    to_json_pretty, BooleanReport, DecompositionReport, ModelFile, ProbabilityReport, StateFile,
    SubspaceFile, SubspaceOnlyReport, SubspaceReport,
};
use qmarkov::{
    absorption_sweep, check_bscc, decompose_state_space, models, persistence_probability,
    reach_probability, reachable_space, repeated_reachability_probability, AnalysisKind,
    AnalysisReport, Channel, DensityOperator, QmcError, Subspace, ToleranceConfig,
};

#[derive(Parser)]
#[command(
    name = "qmarkov",
    version,
    about = "BSCC decomposition and reachability analysis for quantum Markov chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Seed steering which of several equally valid decompositions is picked
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Override the rank and eigenvalue-cluster cutoffs (default 1e-8)
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the state space into BSCCs plus the transient subspace
    Decompose {
        /// Model file (JSON with dimension and Kraus operators)
        model: PathBuf,
    },
    /// Check whether a subspace is a BSCC; exits 0 for yes, 1 for no
    CheckBscc {
        model: PathBuf,
        /// Subspace file (JSON with spanning vectors)
        subspace: PathBuf,
    },
    /// Probability of ever reaching the target subspace
    Reach {
        model: PathBuf,
        /// State file (JSON with a pure vector or a density matrix)
        state: PathBuf,
        target: PathBuf,
        /// Cross-check against a direct absorption iteration
        #[arg(long)]
        oracle_check: bool,
    },
    /// Probability of eventually staying inside the target subspace forever
    Persist {
        model: PathBuf,
        state: PathBuf,
        target: PathBuf,
    },
    /// Probability of visiting the target subspace infinitely often
    Repreach {
        model: PathBuf,
        state: PathBuf,
        target: PathBuf,
    },
    /// The subspace reachable from a state
    Reachable {
        model: PathBuf,
        state: PathBuf,
    },
    /// Generate a Hadamard walk model on a cycle
    GenWalk {
        /// Number of positions on the cycle (the model dimension is twice this)
        #[arg(long)]
        size: usize,
        /// Positions to make absorbing, comma separated; empty keeps the walk unitary
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        boundary: Vec<usize>,
        /// Output path; stdout when omitted
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, QmcError> {
    let mut tol = ToleranceConfig::default();
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t < 1.0) {
            return Err(QmcError::Parse(format!(
                "tolerance must lie strictly between 0 and 1, got {t}"
            )));
        }
        tol = tol.with_rank_cutoff(t);
    }

    match &cli.command {
        Command::Decompose { model } => {
            let channel = load_model(model, &tol)?;
            let d = decompose_state_space(&channel, cli.seed, &tol)?;
            if cli.json {
                let report = DecompositionReport {
                    bscc_dimensions: d.bscc_dimensions(),
                    bsccs: d.bsccs.iter().map(SubspaceReport::new).collect(),
                    transient_dimension: d.transient.dim(),
                    transient: SubspaceReport::new(&d.transient),
                    seed: cli.seed,
                    tolerance: tol.clone(),
                };
                println!("{}", to_json_pretty(&report));
            } else {
                println!("{} BSCC(s), transient dimension {}", d.bsccs.len(), d.transient.dim());
                for (k, b) in d.bsccs.iter().enumerate() {
                    println!("BSCC {}: dimension {}", k + 1, b.dim());
                    print_basis(b);
                }
                if !d.transient.is_zero() {
                    println!("transient subspace: dimension {}", d.transient.dim());
                    print_basis(&d.transient);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckBscc { model, subspace } => {
            let channel = load_model(model, &tol)?;
            let x = load_subspace(subspace, channel.dim(), &tol)?;
            let result = check_bscc(&channel, &x, &tol)?;
            if cli.json {
                let report = BooleanReport {
                    result,
                    tolerance: tol.clone(),
                };
                println!("{}", to_json_pretty(&report));
            } else {
                println!("{}", if result { "BSCC: yes" } else { "BSCC: no" });
            }
            Ok(if result {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Reach {
            model,
            state,
            target,
            oracle_check,
        } => {
            let channel = load_model(model, &tol)?;
            let rho = load_state(state, channel.dim(), &tol)?;
            let g = load_subspace(target, channel.dim(), &tol)?;
            let report = reach_probability(&channel, &rho, &g, &tol)?;
            let oracle = if *oracle_check {
                Some(absorption_sweep(&channel, &rho, &g, 1e-10, 50, &tol)?)
            } else {
                None
            };
            emit_probability(&cli, &tol, &report, oracle.as_ref());
            Ok(ExitCode::SUCCESS)
        }
        Command::Persist {
            model,
            state,
            target,
        } => {
            let channel = load_model(model, &tol)?;
            let rho = load_state(state, channel.dim(), &tol)?;
            let g = load_subspace(target, channel.dim(), &tol)?;
            let report = persistence_probability(&channel, &rho, &g, &tol)?;
            warn_on_adjusted_target(&report, &g);
            emit_probability(&cli, &tol, &report, None);
            Ok(ExitCode::SUCCESS)
        }
        Command::Repreach {
            model,
            state,
            target,
        } => {
            let channel = load_model(model, &tol)?;
            let rho = load_state(state, channel.dim(), &tol)?;
            let g = load_subspace(target, channel.dim(), &tol)?;
            let report = repeated_reachability_probability(&channel, &rho, &g, &tol)?;
            warn_on_adjusted_target(&report, &g);
            emit_probability(&cli, &tol, &report, None);
            Ok(ExitCode::SUCCESS)
        }
        Command::Reachable { model, state } => {
            let channel = load_model(model, &tol)?;
            let rho = load_state(state, channel.dim(), &tol)?;
            let space = reachable_space(&channel, &rho, &tol)?;
            if cli.json {
                let report = SubspaceOnlyReport {
                    subspace: SubspaceReport::new(&space),
                    tolerance: tol.clone(),
                };
                println!("{}", to_json_pretty(&report));
            } else {
                println!("reachable subspace: dimension {}", space.dim());
                print_basis(&space);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GenWalk {
            size,
            boundary,
            output,
        } => {
            let channel = if boundary.is_empty() {
                models::hadamard_walk(*size, &tol)?
            } else {
                models::hadamard_walk_absorbing(*size, boundary, &tol)?
            };
            let text = ModelFile::from_channel(&channel).to_json();
            match output {
                Some(path) => fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_model(path: &Path, tol: &ToleranceConfig) -> Result<Channel, QmcError> {
    ModelFile::from_json(&fs::read_to_string(path)?)?.to_channel(tol)
}

fn load_state(
    path: &Path,
    expected_dim: usize,
    tol: &ToleranceConfig,
) -> Result<DensityOperator, QmcError> {
    let (rho, renormalized) =
        StateFile::from_json(&fs::read_to_string(path)?)?.to_density(expected_dim, tol)?;
    if renormalized {
        eprintln!("warning: state vector was not normalized; renormalized to unit length");
    }
    Ok(rho)
}

fn load_subspace(
    path: &Path,
    ambient_dim: usize,
    tol: &ToleranceConfig,
) -> Result<Subspace, QmcError> {
    SubspaceFile::from_json(&fs::read_to_string(path)?)?.to_subspace(ambient_dim, tol)
}

fn warn_on_adjusted_target(report: &AnalysisReport, g: &Subspace) {
    if let Some(effective) = report.effective_target_dim {
        if effective < g.dim() {
            eprintln!(
                "note: only the recurrent part of the target matters in the long run; \
                 effective target dimension {} of {}",
                effective,
                g.dim()
            );
        }
    }
}

fn emit_probability(
    cli: &Cli,
    tol: &ToleranceConfig,
    report: &AnalysisReport,
    oracle: Option<&qmarkov::IterationTrace>,
) {
    let kind = match report.kind {
        AnalysisKind::Reach => "reach",
        AnalysisKind::RepeatedReach => "repeated-reach",
        AnalysisKind::Persistence => "persistence",
    };
    if cli.json {
        let out = ProbabilityReport {
            kind: kind.into(),
            probability: report.probability,
            witness: report.witness.as_ref().map(SubspaceReport::new),
            effective_target_dimension: report.effective_target_dim,
            oracle_steps: oracle.map(|t| t.steps),
            oracle_value: oracle.map(|t| t.final_value),
            tolerance: tol.clone(),
        };
        println!("{}", to_json_pretty(&out));
    } else {
        println!("{kind} probability: {:.9}", report.probability);
        if let Some(w) = &report.witness {
            println!("satisfaction subspace dimension: {}", w.dim());
        }
        if let Some(trace) = oracle {
            let status = if trace.converged {
                "converged"
            } else {
                "hit the iteration cap"
            };
            println!(
                "oracle check: {:.9} after {} steps ({status})",
                trace.final_value, trace.steps
            );
        }
    }
}

fn print_basis(s: &Subspace) {
    for col in s.basis().column_iter() {
        let parts: Vec<String> = col
            .iter()
            .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
            .collect();
        println!("  [{}]", parts.join(", "));
    }
}
