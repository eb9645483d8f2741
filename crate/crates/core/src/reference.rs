//! Exact and baseline energies: sector FCI, Hartree-Fock, un-Trotterized
//! UCCSD and fixed-order (Trotterized) product ansatze.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::pool::{build_pool, spin_orbital_uccsd_count, PoolOperator, PoolRestriction, PoolSpec};
use crate::hamiltonian::MolecularHamiltonian;
use crate::sector::{dot, SectorBasis, SectorInfo, SparseMatrix};
use crate::statevector::{expectation, hf_state};
use crate::vqe::{bfgs_minimize, BfgsOptions, SectorSimulator, VqeResult};

/// Target for the neglected tail of the UCCSD exponential series.
const SERIES_TAIL: f64 = 1e-16;

fn sector_matrix(ham: &MolecularHamiltonian, sector: SectorInfo) -> Result<(SectorBasis, DMatrix<f64>)> {
    if sector.n_alpha + sector.n_beta != ham.integrals.n_elec {
        return Err(Error::InvalidInput(format!(
            "sector ({}, {}) does not hold {} electrons",
            sector.n_alpha, sector.n_beta, ham.integrals.n_elec
        )));
    }
    let basis = SectorBasis::new(ham.n_spatial(), sector.n_alpha, sector.n_beta)?;
    let m = SparseMatrix::compile(&ham.qubit, &basis)?.to_dense();
    Ok((basis, m))
}

/// Lowest eigenvalue of the Hamiltonian within a fixed-(N_alpha, N_beta) sector.
pub fn fci_ground_energy(ham: &MolecularHamiltonian, sector: SectorInfo) -> Result<f64> {
    let (_, m) = sector_matrix(ham, sector)?;
    let evals = m.symmetric_eigenvalues();
    Ok(evals.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Ground energy, the ground vector in sector components, and the basis.
pub fn fci_ground_state(ham: &MolecularHamiltonian, sector: SectorInfo) -> Result<(f64, Vec<f64>, SectorBasis)> {
    let (basis, m) = sector_matrix(ham, sector)?;
    let eig = m.symmetric_eigen();
    let (imin, &e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::InvalidInput("empty sector".into()))?;
    let v: Vec<f64> = eig.eigenvectors.column(imin).iter().copied().collect();
    Ok((e, v, basis))
}

/// Sector of the aufbau reference.
pub fn reference_sector(ham: &MolecularHamiltonian) -> SectorInfo {
    SectorInfo { n_alpha: ham.n_alpha(), n_beta: ham.n_beta() }
}

/// `<HF|H|HF>` on the full register.
pub fn hf_energy(ham: &MolecularHamiltonian) -> Result<f64> {
    expectation(&ham.qubit, &hf_state(ham.n_qubits(), &ham.hf_occupied())?)
}

/// Occupied-to-virtual pool of the closed-shell reference.
pub fn uccsd_pool(ham: &MolecularHamiltonian) -> Result<Vec<PoolOperator>> {
    build_pool(&PoolSpec::new(ham.n_spatial(), ham.n_occupied_spatial(), PoolRestriction::HfRestrictedIjab))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UccsdResult {
    pub vqe: VqeResult,
    /// Spin-complemented amplitudes actually optimized.
    pub parameter_count: usize,
    /// Independent spin-orbital amplitudes before complementing.
    pub spin_orbital_parameter_count: usize,
}

/// `exp(sum_k t_k A_k) |ref>` with one exponential of the summed generator.
#[derive(Debug, Clone)]
pub struct UccsdObjective {
    sim: SectorSimulator,
}

impl UccsdObjective {
    pub fn new(ham: &MolecularHamiltonian) -> Result<Self> {
        Ok(UccsdObjective { sim: SectorSimulator::new(ham, &uccsd_pool(ham)?)? })
    }

    pub fn from_simulator(sim: SectorSimulator) -> Self {
        UccsdObjective { sim }
    }

    pub fn n_parameters(&self) -> usize {
        self.sim.pool_size()
    }

    pub fn simulator(&self) -> &SectorSimulator {
        &self.sim
    }

    fn generator(&self, theta: &[f64]) -> Result<SparseMatrix> {
        if theta.len() != self.sim.pool_size() {
            return Err(Error::DimensionMismatch { expected: self.sim.pool_size(), found: theta.len() });
        }
        let terms: Vec<(f64, &SparseMatrix)> = theta.iter().copied().zip(self.sim.generators()).collect();
        Ok(SparseMatrix::linear_combination(self.sim.basis().dim(), &terms))
    }

    /// Series order whose neglected tail is below `SERIES_TAIL` for a
    /// generator of norm at most `nu`.
    fn series_order(nu: f64) -> usize {
        let scale = nu.exp();
        let mut term = 1.0;
        for k in 1..2000 {
            term *= nu / k as f64;
            if term * scale < SERIES_TAIL {
                return k;
            }
        }
        2000
    }

    pub fn state(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let g = self.generator(theta)?;
        g.exp_apply(1.0, self.sim.reference(), self.sim.exp_tol())
    }

    pub fn energy(&self, theta: &[f64]) -> Result<f64> {
        Ok(self.sim.expectation(&self.state(theta)?))
    }

    /// Energy and exact gradient through the derivative of the exponential:
    /// `dE/dt_k = 2 sum_{j,m} j! m! / (j+m+1)! <(-G)^j H psi / j!| A_k |G^m ref / m!>`.
    pub fn energy_and_gradient(&self, theta: &[f64]) -> Result<(f64, Vec<f64>)> {
        let g = self.generator(theta)?;
        let order = Self::series_order(g.one_norm());
        // a[m] = G^m ref / m!
        let mut a = vec![self.sim.reference().to_vec()];
        for m in 1..order {
            let mut next = vec![0.0; g.dim()];
            g.mul_add(1.0 / m as f64, &a[m - 1], &mut next);
            a.push(next);
        }
        let mut psi = vec![0.0; g.dim()];
        for am in &a {
            psi.iter_mut().zip(am).for_each(|(p, x)| *p += x);
        }
        let sigma = self.sim.hamiltonian().apply(&psi);
        let e = dot(&psi, &sigma);
        // b[j] = (-G)^j sigma / j!
        let mut b = vec![sigma];
        for j in 1..order {
            let mut next = vec![0.0; g.dim()];
            g.mul_add(-1.0 / j as f64, &b[j - 1], &mut next);
            b.push(next);
        }
        // w[m] = sum_j c(j, m) b[j], c(j, m) = j! m! / (j + m + 1)!
        let mut w = Vec::with_capacity(order);
        for m in 0..order {
            let mut wm = vec![0.0; g.dim()];
            let mut c = 1.0 / (m + 1) as f64;
            for (j, bj) in b.iter().enumerate().take(order - m) {
                if j > 0 {
                    c *= j as f64 / (j + m + 1) as f64;
                }
                wm.iter_mut().zip(bj).for_each(|(x, y)| *x += c * y);
            }
            w.push(wm);
        }
        let grad = self
            .sim
            .generators()
            .iter()
            .map(|gk| 2.0 * w.iter().zip(&a).map(|(wm, am)| gk.bilinear(wm, am)).sum::<f64>())
            .collect();
        Ok((e, grad))
    }

    pub fn optimize(&self, theta0: &[f64], opts: &BfgsOptions) -> Result<VqeResult> {
        let out = bfgs_minimize(|t| self.energy_and_gradient(t), theta0, opts)?;
        Ok(VqeResult::from_outcome(out))
    }
}

/// Un-Trotterized UCCSD optimized by BFGS from zero amplitudes.
pub fn uccsd_vqe(ham: &MolecularHamiltonian, opts: &BfgsOptions) -> Result<UccsdResult> {
    let objective = UccsdObjective::new(ham)?;
    let vqe = objective.optimize(&vec![0.0; objective.n_parameters()], opts)?;
    Ok(UccsdResult {
        parameter_count: objective.n_parameters(),
        spin_orbital_parameter_count: spin_orbital_uccsd_count(ham.n_spatial(), ham.n_occupied_spatial()),
        vqe,
    })
}

/// Fixed operator sequence `pool[ops[0]]` first, all amplitudes optimized
/// together from zero.
pub fn trotterized_ansatz_vqe(
    ham: &MolecularHamiltonian,
    pool: &[PoolOperator],
    ops: &[usize],
    opts: &BfgsOptions,
) -> Result<VqeResult> {
    let sim = SectorSimulator::new(ham, pool)?;
    sim.optimize(ops, &vec![0.0; ops.len()], opts)
}
