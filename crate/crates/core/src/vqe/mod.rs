//! Ansatz preparation, energies, analytic gradients and the BFGS inner loop.
//!
//! Two routes compute the same quantities. The functions in this module act
//! on full-register [`StateVector`]s with Pauli-sum generators; the
//! [`SectorSimulator`] works on real vectors over the fixed-(N_alpha, N_beta)
//! determinants and is what the drivers use.

pub mod bfgs;
mod engine;

use serde::{Deserialize, Serialize};

pub use bfgs::{bfgs_minimize, BfgsOptions, BfgsOutcome, BfgsStatus};
pub use engine::SectorSimulator;

use crate::error::{Error, Result};
use crate::fermion::pool::PoolOperator;
use crate::hamiltonian::MolecularHamiltonian;
use crate::jordan_wigner::jordan_wigner;
use crate::pauli::PauliOperator;
use crate::statevector::{apply, apply_exp, expectation, hf_state, StateVector, DEFAULT_EXP_TOL};

/// Product of exponentials `e^{t_N A_N} ... e^{t_1 A_1} |ref>`.
///
/// `ops[0]` acts first; pushing an operator places it at the left end.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ansatz {
    pub ops: Vec<usize>,
    /// Occupied qubits of the reference determinant.
    pub reference: Vec<usize>,
}

impl Ansatz {
    pub fn new(reference: Vec<usize>) -> Self {
        Ansatz { ops: Vec::new(), reference }
    }

    pub fn with_ops(reference: Vec<usize>, ops: Vec<usize>) -> Self {
        Ansatz { ops, reference }
    }

    pub fn push(&mut self, op: usize) {
        self.ops.push(op);
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub energy: f64,
    pub theta: Vec<f64>,
    pub n_iterations: usize,
    pub n_energy_evals: usize,
    pub n_gradient_evals: usize,
    pub converged: bool,
    pub status: BfgsStatus,
    pub gradient_inf_norm: f64,
}

impl VqeResult {
    pub(crate) fn from_outcome(out: BfgsOutcome) -> Self {
        let gradient_inf_norm = out.gradient.iter().fold(0.0, |m: f64, g| m.max(g.abs()));
        VqeResult {
            energy: out.f,
            converged: out.converged(),
            status: out.status,
            n_iterations: out.iterations,
            n_energy_evals: out.evaluations,
            n_gradient_evals: out.evaluations,
            gradient_inf_norm,
            theta: out.x,
        }
    }
}

/// Jordan-Wigner images of the pool generators.
pub fn qubit_generators(pool: &[PoolOperator], n_qubits: usize) -> Result<Vec<PauliOperator>> {
    pool.iter().map(|op| jordan_wigner(&op.generator, n_qubits)).collect()
}

fn check_lengths(ansatz: &Ansatz, theta: &[f64], n_generators: usize) -> Result<()> {
    if theta.len() != ansatz.ops.len() {
        return Err(Error::DimensionMismatch { expected: ansatz.ops.len(), found: theta.len() });
    }
    if let Some(&bad) = ansatz.ops.iter().find(|&&k| k >= n_generators) {
        return Err(Error::IndexOutOfRange { index: bad, limit: n_generators });
    }
    Ok(())
}

/// Full-register state of the ansatz at `theta`.
pub fn prepare_state(ansatz: &Ansatz, theta: &[f64], generators: &[PauliOperator]) -> Result<StateVector> {
    check_lengths(ansatz, theta, generators.len())?;
    let n_qubits = generators.first().map_or_else(|| ansatz.reference.iter().max().map_or(0, |m| m + 1), |g| g.n_qubits());
    let mut psi = hf_state(n_qubits, &ansatz.reference)?;
    for (&k, &t) in ansatz.ops.iter().zip(theta) {
        psi = apply_exp(t, &generators[k], &psi, DEFAULT_EXP_TOL)?.0;
    }
    Ok(psi)
}

pub fn energy(ansatz: &Ansatz, theta: &[f64], generators: &[PauliOperator], ham: &MolecularHamiltonian) -> Result<f64> {
    expectation(&ham.qubit, &prepare_state(ansatz, theta, generators)?)
}

/// `dE/dt_k = 2 Re <sigma_k| A_k |phi_k>` by a backward sweep that unwinds
/// both `phi` and `sigma = H psi` one factor at a time.
pub fn analytic_gradient(
    ansatz: &Ansatz,
    theta: &[f64],
    generators: &[PauliOperator],
    ham: &MolecularHamiltonian,
) -> Result<Vec<f64>> {
    let mut phi = prepare_state(ansatz, theta, generators)?;
    let mut sigma = apply(&ham.qubit, &phi)?;
    let mut grad = vec![0.0; theta.len()];
    for k in (0..theta.len()).rev() {
        let gen = &generators[ansatz.ops[k]];
        grad[k] = 2.0 * sigma.inner(&apply(gen, &phi)?).re;
        if k > 0 {
            phi = apply_exp(-theta[k], gen, &phi, DEFAULT_EXP_TOL)?.0;
            sigma = apply_exp(-theta[k], gen, &sigma, DEFAULT_EXP_TOL)?.0;
        }
    }
    Ok(grad)
}

/// Full-register BFGS optimization; the sector route is
/// [`SectorSimulator::optimize`].
pub fn optimize_full(
    ansatz: &Ansatz,
    theta0: &[f64],
    generators: &[PauliOperator],
    ham: &MolecularHamiltonian,
    opts: &BfgsOptions,
) -> Result<VqeResult> {
    check_lengths(ansatz, theta0, generators.len())?;
    let out = bfgs_minimize(
        |t| Ok((energy(ansatz, t, generators, ham)?, analytic_gradient(ansatz, t, generators, ham)?)),
        theta0,
        opts,
    )?;
    Ok(VqeResult::from_outcome(out))
}
