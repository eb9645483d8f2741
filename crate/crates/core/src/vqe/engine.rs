use crate::error::{Error, Result};
use crate::fermion::pool::PoolOperator;
use crate::hamiltonian::MolecularHamiltonian;
use crate::jordan_wigner::jordan_wigner;
use crate::pauli::PauliOperator;
use crate::sector::{dot, norm, SectorBasis, SparseMatrix};
use crate::statevector::{StateVector, DEFAULT_EXP_TOL};

use super::{bfgs_minimize, BfgsOptions, VqeResult};

/// Hamiltonian and pool generators compiled to real sparse matrices over the
/// reference's particle-number sector.
#[derive(Debug, Clone)]
pub struct SectorSimulator {
    basis: SectorBasis,
    hamiltonian: SparseMatrix,
    generators: Vec<SparseMatrix>,
    reference: Vec<f64>,
    exp_tol: f64,
}

impl SectorSimulator {
    pub fn new(ham: &MolecularHamiltonian, pool: &[PoolOperator]) -> Result<Self> {
        let images = pool
            .iter()
            .map(|op| jordan_wigner(&op.generator, ham.n_qubits()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_qubit_operators(ham, &images)
    }

    pub fn from_qubit_operators(ham: &MolecularHamiltonian, generators: &[PauliOperator]) -> Result<Self> {
        let basis = SectorBasis::new(ham.n_spatial(), ham.n_alpha(), ham.n_beta())?;
        let hamiltonian = SparseMatrix::compile(&ham.qubit, &basis)?;
        let generators = generators
            .iter()
            .map(|g| {
                let m = SparseMatrix::compile(g, &basis)?;
                let defect = m.antisymmetry_defect();
                if defect > 1e-12 {
                    return Err(Error::NotAntiHermitian(defect));
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        let hf: u64 = ham.hf_occupied().iter().map(|&q| 1u64 << q).sum();
        let reference = basis.basis_vector(hf)?;
        Ok(SectorSimulator { basis, hamiltonian, generators, reference, exp_tol: DEFAULT_EXP_TOL })
    }

    /// Replaces the reference state; the vector must be normalized.
    pub fn with_reference(mut self, reference: Vec<f64>) -> Result<Self> {
        if reference.len() != self.basis.dim() {
            return Err(Error::DimensionMismatch { expected: self.basis.dim(), found: reference.len() });
        }
        let n = norm(&reference);
        if (n - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidInput(format!("reference norm is {n}, expected 1")));
        }
        self.reference = reference;
        Ok(self)
    }

    pub fn with_exp_tol(mut self, tol: f64) -> Self {
        self.exp_tol = tol;
        self
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &SparseMatrix {
        &self.hamiltonian
    }

    pub fn generators(&self) -> &[SparseMatrix] {
        &self.generators
    }

    pub fn pool_size(&self) -> usize {
        self.generators.len()
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn exp_tol(&self) -> f64 {
        self.exp_tol
    }

    fn check(&self, ops: &[usize], theta: &[f64]) -> Result<()> {
        if ops.len() != theta.len() {
            return Err(Error::DimensionMismatch { expected: ops.len(), found: theta.len() });
        }
        match ops.iter().find(|&&k| k >= self.generators.len()) {
            Some(&k) => Err(Error::IndexOutOfRange { index: k, limit: self.generators.len() }),
            None => Ok(()),
        }
    }

    pub fn prepare(&self, ops: &[usize], theta: &[f64]) -> Result<Vec<f64>> {
        self.check(ops, theta)?;
        let mut psi = self.reference.clone();
        for (&k, &t) in ops.iter().zip(theta) {
            psi = self.generators[k].exp_apply(t, &psi, self.exp_tol)?;
        }
        Ok(psi)
    }

    pub fn expectation(&self, psi: &[f64]) -> f64 {
        self.hamiltonian.bilinear(psi, psi)
    }

    pub fn energy(&self, ops: &[usize], theta: &[f64]) -> Result<f64> {
        Ok(self.expectation(&self.prepare(ops, theta)?))
    }

    /// Energy and gradient of the product ansatz.
    ///
    /// The forward states are kept, so the backward sweep only propagates
    /// `H psi`: one exponential per factor in each direction.
    pub fn energy_and_gradient(&self, ops: &[usize], theta: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check(ops, theta)?;
        let mut forward = Vec::with_capacity(ops.len() + 1);
        forward.push(self.reference.clone());
        for (&k, &t) in ops.iter().zip(theta) {
            let next = self.generators[k].exp_apply(t, forward.last().expect("nonempty"), self.exp_tol)?;
            forward.push(next);
        }
        let psi = forward.last().expect("nonempty");
        let mut sigma = self.hamiltonian.apply(psi);
        let e = dot(psi, &sigma);
        let mut grad = vec![0.0; ops.len()];
        for k in (0..ops.len()).rev() {
            let gen = &self.generators[ops[k]];
            grad[k] = 2.0 * gen.bilinear(&sigma, &forward[k + 1]);
            if k > 0 {
                sigma = gen.exp_apply(-theta[k], &sigma, self.exp_tol)?;
            }
        }
        Ok((e, grad))
    }

    /// `<psi|[H, A_i]|psi> = 2 <H psi|A_i psi>` for every pool member.
    pub fn pool_gradients(&self, psi: &[f64]) -> Vec<f64> {
        let sigma = self.hamiltonian.apply(psi);
        self.generators.iter().map(|g| 2.0 * g.bilinear(&sigma, psi)).collect()
    }

    pub fn optimize(&self, ops: &[usize], theta0: &[f64], opts: &BfgsOptions) -> Result<VqeResult> {
        self.check(ops, theta0)?;
        let out = bfgs_minimize(|t| self.energy_and_gradient(ops, t), theta0, opts)?;
        Ok(VqeResult::from_outcome(out))
    }

    pub fn embed(&self, psi: &[f64]) -> StateVector {
        self.basis.embed(psi)
    }
}
