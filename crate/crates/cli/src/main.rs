use std::path::PathBuf;
use std::process::ExitCode;

use adaptvqe::adapt::{run_adapt_with, strategy_pool, AdaptConfig, GrowthStrategy, StrategyKind};
use adaptvqe::experiment::{run_ordering_comparison_with, run_scan_with, write_report, OrderingOptions, ScanSpec};
use adaptvqe::reference::{fci_ground_energy, hf_energy, reference_sector, uccsd_vqe};
use adaptvqe::{load_hamiltonian, BfgsOptions, Error, SectorInfo, SectorSimulator, HARTREE_TO_KCAL};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "adaptvqe", version, about = "ADAPT-VQE and reference solvers on FCIDUMP Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inner {
    /// Inner BFGS gradient tolerance (infinity norm).
    #[arg(long, default_value_t = 1e-6)]
    gtol: f64,
    /// Inner BFGS iteration cap.
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
}

impl Inner {
    fn options(&self) -> BfgsOptions {
        BfgsOptions { gtol: self.gtol, max_iter: self.max_iter, ..BfgsOptions::default() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact ground energy in a fixed (N_alpha, N_beta) sector.
    Fci {
        #[arg(long)]
        fcidump: PathBuf,
        /// Defaults to the file's NELEC/MS2.
        #[arg(long)]
        nalpha: Option<usize>,
        #[arg(long)]
        nbeta: Option<usize>,
    },
    /// Energy of the aufbau Hartree-Fock determinant.
    Hf {
        #[arg(long)]
        fcidump: PathBuf,
    },
    /// Un-Trotterized UCCSD optimized from zero amplitudes.
    Uccsd {
        #[arg(long)]
        fcidump: PathBuf,
        #[command(flatten)]
        inner: Inner,
    },
    /// Adaptive ansatz growth.
    Adapt {
        #[arg(long)]
        fcidump: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        #[arg(long, default_value = "adapt")]
        strategy: StrategyKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        max_ops: usize,
        /// Write the full run artifact here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        inner: Inner,
    },
    /// Dissociation scan driven by a JSON spec.
    Scan {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the spec's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Energy versus operator count for every growth strategy.
    Orderings {
        #[arg(long)]
        fcidump: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 40)]
        max_ops: usize,
        /// Seeds for the random strategies.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[command(flatten)]
        inner: Inner,
    },
    /// Qubit Hamiltonian, one Pauli term per line.
    PrintHamiltonian {
        #[arg(long)]
        fcidump: PathBuf,
    },
}

fn kcal(e: f64) -> f64 {
    e * HARTREE_TO_KCAL
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Fci { fcidump, nalpha, nbeta } => {
            let ham = load_hamiltonian(&fcidump)?;
            let default = reference_sector(&ham);
            let sector = SectorInfo { n_alpha: nalpha.unwrap_or(default.n_alpha), n_beta: nbeta.unwrap_or(default.n_beta) };
            let e = fci_ground_energy(&ham, sector)?;
            println!("fci_energy {e:.12}");
        }
        Command::Hf { fcidump } => {
            let ham = load_hamiltonian(&fcidump)?;
            println!("hf_energy {:.12}", hf_energy(&ham)?);
        }
        Command::Uccsd { fcidump, inner } => {
            let ham = load_hamiltonian(&fcidump)?;
            let u = uccsd_vqe(&ham, &inner.options())?;
            println!("uccsd_energy {:.12}", u.vqe.energy);
            println!("parameters {} (spin-orbital {})", u.parameter_count, u.spin_orbital_parameter_count);
            println!("status {:?} after {} iterations", u.vqe.status, u.vqe.n_iterations);
        }
        Command::Adapt { fcidump, epsilon, strategy, seed, max_ops, json, inner } => {
            let ham = load_hamiltonian(&fcidump)?;
            let config = AdaptConfig {
                strategy: GrowthStrategy::new(strategy, seed),
                max_ops,
                inner: inner.options(),
                ..AdaptConfig::new(epsilon)
            };
            let pool = strategy_pool(&ham, strategy)?;
            let sim = SectorSimulator::new(&ham, &pool)?;
            let fci = fci_ground_energy(&ham, reference_sector(&ham))?;
            let result = run_adapt_with(&sim, &pool, &config, |h| {
                println!(
                    "{:4} {:<22} |g| {:.3e}  E {:.10}  err {:.4} kcal/mol",
                    h.iteration,
                    h.chosen_op_label,
                    h.pool_gradient_norm,
                    h.optimized_energy,
                    kcal(h.optimized_energy - fci)
                );
            })?;
            println!(
                "termination {:?} with {} operators, |g| {:.3e}",
                result.termination,
                result.parameter_count(),
                result.final_gradient_norm
            );
            println!("energy {:.12}  fci {:.12}  error {:.6} kcal/mol", result.energy, fci, kcal(result.energy - fci));
            if let Some(path) = json {
                let artifact = serde_json::json!({
                    "fcidump": fcidump,
                    "fci_energy": fci,
                    "result": result,
                });
                std::fs::write(path, serde_json::to_string_pretty(&artifact)?)?;
            }
        }
        Command::Scan { spec, out } => {
            let spec_data = ScanSpec::load(&spec)?;
            let dir = out
                .or_else(|| spec_data.output_dir.clone())
                .ok_or_else(|| Error::InvalidInput("no output directory: pass --out or set output_dir".into()))?;
            let report = run_scan_with(&spec_data, |r| {
                println!(
                    "{} r={:.2} {:<16} E {:.10} err {:.4} kcal/mol params {} {}",
                    r.molecule, r.geometry, r.method, r.energy, r.error_vs_fci, r.parameter_count, r.status
                );
            })?;
            write_report(&dir, &report)?;
            for s in &report.summary {
                println!(
                    "summary {:<16} mean |err| {:.4} kcal/mol  max params {}  failed {}",
                    s.method, s.mean_abs_error, s.max_parameter_count, s.n_failed
                );
            }
        }
        Command::Orderings { fcidump, out, max_ops, seeds, epsilon, inner } => {
            let ham = load_hamiltonian(&fcidump)?;
            let opts = OrderingOptions { max_ops, epsilon, inner: inner.options() };
            let cmp = run_ordering_comparison_with(&ham, &StrategyKind::ALL, &seeds, &opts, |t| {
                let last = t.energies.last().copied().unwrap_or(f64::NAN);
                println!("{:<13} seed {} ops {:3} final E {:.10}", t.strategy.name(), t.seed, t.energies.len(), last);
            })?;
            println!("uccsd {} parameters E {:.10}", cmp.uccsd_parameter_count, cmp.uccsd_energy);
            cmp.write(&out)?;
        }
        Command::PrintHamiltonian { fcidump } => {
            let ham = load_hamiltonian(&fcidump)?;
            print!("{}", ham.qubit.to_text());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
