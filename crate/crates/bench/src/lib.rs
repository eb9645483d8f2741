//! Shared setup for the benchmarks.

use std::path::PathBuf;

use adaptvqe::adapt::{strategy_pool, StrategyKind};
use adaptvqe::{load_hamiltonian, MolecularHamiltonian, PoolOperator, SectorSimulator};

pub fn fixture(mol: &str, r: f64) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{mol}/{mol}_{r:.2}.fcidump"))
}

pub struct Setup {
    pub ham: MolecularHamiltonian,
    pub pool: Vec<PoolOperator>,
    pub sim: SectorSimulator,
}

/// Hamiltonian plus the generalized pool compiled on its sector.
pub fn setup(mol: &str, r: f64) -> Setup {
    let ham = load_hamiltonian(fixture(mol, r)).expect("fixture");
    let pool = strategy_pool(&ham, StrategyKind::AdaptMaxGradient).expect("pool");
    let sim = SectorSimulator::new(&ham, &pool).expect("simulator");
    Setup { ham, pool, sim }
}
