//! The adaptive outer loop: measure pool gradients, grow the ansatz by one
//! operator, re-optimize every amplitude, repeat until the gradient norm
//! falls below the threshold.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::pool::{build_pool, PoolOperator, PoolRestriction, PoolSpec};
use crate::hamiltonian::MolecularHamiltonian;
use crate::sector::norm;
use crate::vqe::{BfgsOptions, SectorSimulator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    /// Largest pool-gradient magnitude.
    #[serde(rename = "adapt")]
    AdaptMaxGradient,
    RandomIjab,
    RandomPqrs,
    LexicalIjab,
    LexicalPqrs,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::AdaptMaxGradient,
        StrategyKind::RandomIjab,
        StrategyKind::RandomPqrs,
        StrategyKind::LexicalIjab,
        StrategyKind::LexicalPqrs,
    ];

    /// Pool the strategy draws from.
    pub fn restriction(self) -> PoolRestriction {
        match self {
            StrategyKind::RandomIjab | StrategyKind::LexicalIjab => PoolRestriction::HfRestrictedIjab,
            _ => PoolRestriction::GeneralizedPqrs,
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, StrategyKind::RandomIjab | StrategyKind::RandomPqrs)
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::AdaptMaxGradient => "adapt",
            StrategyKind::RandomIjab => "random-ijab",
            StrategyKind::RandomPqrs => "random-pqrs",
            StrategyKind::LexicalIjab => "lexical-ijab",
            StrategyKind::LexicalPqrs => "lexical-pqrs",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('-', "_") == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown strategy '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthStrategy {
    pub kind: StrategyKind,
    /// Used by the random kinds only.
    #[serde(default)]
    pub seed: u64,
}

impl GrowthStrategy {
    pub fn adapt() -> Self {
        GrowthStrategy { kind: StrategyKind::AdaptMaxGradient, seed: 0 }
    }

    pub fn new(kind: StrategyKind, seed: u64) -> Self {
        GrowthStrategy { kind, seed }
    }
}

/// Index of the largest `|g_i|`, lowest index on ties.
pub fn argmax_abs(gradients: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, g) in gradients.iter().enumerate() {
        let a = g.abs();
        if best.map_or(true, |(_, b)| a > b) {
            best = Some((i, a));
        }
    }
    best.map(|(i, _)| i)
}

/// Stateful operator chooser for one run.
#[derive(Debug, Clone)]
pub struct Selector {
    kind: StrategyKind,
    rng: ChaCha8Rng,
    cursor: usize,
}

impl Selector {
    pub fn new(strategy: GrowthStrategy) -> Self {
        Selector { kind: strategy.kind, rng: ChaCha8Rng::seed_from_u64(strategy.seed), cursor: 0 }
    }

    /// Next pool id given the current pool gradients.
    pub fn select(&mut self, gradients: &[f64]) -> Result<usize> {
        if gradients.is_empty() {
            return Err(Error::EmptyPool);
        }
        Ok(match self.kind {
            StrategyKind::AdaptMaxGradient => argmax_abs(gradients).expect("nonempty"),
            StrategyKind::RandomIjab | StrategyKind::RandomPqrs => self.rng.gen_range(0..gradients.len()),
            StrategyKind::LexicalIjab | StrategyKind::LexicalPqrs => {
                let id = self.cursor % gradients.len();
                self.cursor += 1;
                id
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptConfig {
    /// Exit once the L2 norm of the pool gradient is below this.
    pub epsilon: f64,
    pub strategy: GrowthStrategy,
    pub max_ops: usize,
    pub inner: BfgsOptions,
    /// Declare a stall when the energy fell by less than `stall_tol` over
    /// this many iterations; `None` disables the check.
    pub stall_window: Option<usize>,
    pub stall_tol: f64,
}

impl AdaptConfig {
    pub fn new(epsilon: f64) -> Self {
        AdaptConfig {
            epsilon,
            strategy: GrowthStrategy::adapt(),
            max_ops: 200,
            inner: BfgsOptions::default(),
            stall_window: Some(10),
            stall_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    GradientConverged,
    MaxIter,
    Stalled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub chosen_op_id: usize,
    pub chosen_op_label: String,
    /// Norm of the gradient measured before the operator was added.
    pub pool_gradient_norm: f64,
    pub selected_gradient_value: f64,
    pub optimized_energy: f64,
    pub parameter_count: usize,
    pub inner_iterations: usize,
    pub inner_converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptResult {
    pub config: AdaptConfig,
    pub reference_energy: f64,
    pub history: Vec<IterationRecord>,
    /// Pool ids in application order; the last entry is leftmost in the product.
    pub ops: Vec<usize>,
    pub labels: Vec<String>,
    pub theta: Vec<f64>,
    pub energy: f64,
    pub final_gradient_norm: f64,
    pub termination: Termination,
}

impl AdaptResult {
    pub fn parameter_count(&self) -> usize {
        self.ops.len()
    }

    pub fn energy_trajectory(&self) -> Vec<f64> {
        self.history.iter().map(|h| h.optimized_energy).collect()
    }
}

/// Runs the outer loop over a compiled pool. `pool` supplies labels and must
/// align with the simulator's generators.
pub fn run_adapt(sim: &SectorSimulator, pool: &[PoolOperator], config: &AdaptConfig) -> Result<AdaptResult> {
    run_adapt_with(sim, pool, config, |_| {})
}

/// [`run_adapt`] with a callback after every completed iteration.
pub fn run_adapt_with(
    sim: &SectorSimulator,
    pool: &[PoolOperator],
    config: &AdaptConfig,
    mut observer: impl FnMut(&IterationRecord),
) -> Result<AdaptResult> {
    if !(config.epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    if pool.len() != sim.pool_size() {
        return Err(Error::DimensionMismatch { expected: sim.pool_size(), found: pool.len() });
    }
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let mut selector = Selector::new(config.strategy);
    let mut ops: Vec<usize> = Vec::new();
    let mut theta: Vec<f64> = Vec::new();
    let mut psi = sim.reference().to_vec();
    let reference_energy = sim.expectation(&psi);
    let mut energy = reference_energy;
    let mut energies = vec![energy];
    let mut history = Vec::new();
    let (termination, final_gradient_norm) = loop {
        let g = sim.pool_gradients(&psi);
        let gnorm = norm(&g);
        if !gnorm.is_finite() {
            return Err(Error::NonFinite("pool gradients".into()));
        }
        if gnorm < config.epsilon {
            break (Termination::GradientConverged, gnorm);
        }
        if ops.len() >= config.max_ops {
            break (Termination::MaxIter, gnorm);
        }
        if let Some(w) = config.stall_window {
            if energies.len() > w && energies[energies.len() - 1 - w] - energy < config.stall_tol {
                break (Termination::Stalled, gnorm);
            }
        }
        let id = selector.select(&g)?;
        ops.push(id);
        theta.push(0.0);
        let res = sim.optimize(&ops, &theta, &config.inner)?;
        theta = res.theta;
        energy = res.energy;
        psi = sim.prepare(&ops, &theta)?;
        energies.push(energy);
        let record = IterationRecord {
            iteration: ops.len(),
            chosen_op_id: id,
            chosen_op_label: pool[id].label.clone(),
            pool_gradient_norm: gnorm,
            selected_gradient_value: g[id],
            optimized_energy: energy,
            parameter_count: ops.len(),
            inner_iterations: res.n_iterations,
            inner_converged: res.converged,
        };
        observer(&record);
        history.push(record);
    };
    Ok(AdaptResult {
        config: *config,
        reference_energy,
        history,
        labels: ops.iter().map(|&k| pool[k].label.clone()).collect(),
        ops,
        theta,
        energy,
        final_gradient_norm,
        termination,
    })
}

/// Pool matching a strategy for the Hamiltonian's closed-shell reference.
pub fn strategy_pool(ham: &MolecularHamiltonian, kind: StrategyKind) -> Result<Vec<PoolOperator>> {
    build_pool(&PoolSpec::new(ham.n_spatial(), ham.n_occupied_spatial(), kind.restriction()))
}

/// Builds the pool and simulator and runs the loop from the HF reference.
pub fn adapt_vqe(ham: &MolecularHamiltonian, config: &AdaptConfig) -> Result<AdaptResult> {
    let pool = strategy_pool(ham, config.strategy.kind)?;
    let sim = SectorSimulator::new(ham, &pool)?;
    run_adapt(&sim, &pool, config)
}
