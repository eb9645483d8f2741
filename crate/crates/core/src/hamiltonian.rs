//! Molecular Hamiltonians in second quantization and on qubits.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fcidump::{parse_fcidump, MolecularIntegrals};
use crate::fermion::{annihilate, create, FermionOperator, Spin, SpinOrbital};
use crate::jordan_wigner::jordan_wigner_pruned;
use crate::pauli::PauliOperator;

#[derive(Debug, Clone)]
pub struct MolecularHamiltonian {
    pub integrals: MolecularIntegrals,
    pub fermionic: FermionOperator,
    pub qubit: PauliOperator,
}

impl MolecularHamiltonian {
    pub fn n_qubits(&self) -> usize {
        2 * self.integrals.n_orb
    }

    pub fn n_spatial(&self) -> usize {
        self.integrals.n_orb
    }

    pub fn n_alpha(&self) -> usize {
        self.integrals.n_alpha()
    }

    pub fn n_beta(&self) -> usize {
        self.integrals.n_beta()
    }

    /// Qubits occupied in the aufbau reference: lowest alpha and beta spatial orbitals.
    pub fn hf_occupied(&self) -> Vec<usize> {
        let mut occ: Vec<usize> = (0..self.n_alpha())
            .map(|p| SpinOrbital::alpha(p).index())
            .chain((0..self.n_beta()).map(|p| SpinOrbital::beta(p).index()))
            .collect();
        occ.sort_unstable();
        occ
    }

    /// Doubly occupied spatial orbitals of the closed-shell reference.
    pub fn n_occupied_spatial(&self) -> usize {
        self.n_alpha().min(self.n_beta())
    }
}

/// `E_nuc + sum h_pq a+_{p s} a_{q s} + 1/2 sum (pr|qs) a+_{p s} a+_{q t} a_{s t} a_{r s}`.
pub fn fermionic_hamiltonian(ints: &MolecularIntegrals) -> FermionOperator {
    let n = ints.n_orb;
    let spins = [Spin::Alpha, Spin::Beta];
    let mut parts = Vec::new();
    parts.push(FermionOperator::identity(ints.e_nuc));
    let mut one = FermionOperator::zero();
    for p in 0..n {
        for q in 0..n {
            let v = ints.h(p, q);
            if v == 0.0 {
                continue;
            }
            for &s in &spins {
                let a = SpinOrbital { spatial: p, spin: s }.index();
                let b = SpinOrbital { spatial: q, spin: s }.index();
                one.push_product(Complex64::new(v, 0.0), vec![create(a), annihilate(b)]);
            }
        }
    }
    parts.push(one);
    let mut two = FermionOperator::zero();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = ints.eri(p, r, q, s);
                    if v == 0.0 {
                        continue;
                    }
                    for &sig in &spins {
                        for &tau in &spins {
                            let i = SpinOrbital { spatial: p, spin: sig }.index();
                            let j = SpinOrbital { spatial: q, spin: tau }.index();
                            let k = SpinOrbital { spatial: s, spin: tau }.index();
                            let l = SpinOrbital { spatial: r, spin: sig }.index();
                            if i == j || k == l {
                                continue;
                            }
                            two.push_product(
                                Complex64::new(0.5 * v, 0.0),
                                vec![create(i), create(j), annihilate(k), annihilate(l)],
                            );
                        }
                    }
                }
            }
        }
    }
    parts.push(two);
    let mut total = FermionOperator::zero();
    for p in &mut parts {
        p.prune(crate::fermion::PRUNE_TOL);
        total = &total + p;
    }
    total
}

/// Prune tolerance for the qubit Hamiltonian. Dropping a merged Pauli term
/// breaks number conservation by its size, so this sits well below the
/// general 1e-12 used elsewhere.
pub const HAMILTONIAN_PRUNE_TOL: f64 = 1e-14;

pub fn build_hamiltonian(integrals: MolecularIntegrals) -> Result<MolecularHamiltonian> {
    let fermionic = fermionic_hamiltonian(&integrals);
    let n_qubits = 2 * integrals.n_orb;
    let raw = jordan_wigner_pruned(&fermionic, n_qubits, HAMILTONIAN_PRUNE_TOL)?;
    let worst = raw.iter().map(|(_, c)| c.im.abs()).fold(0.0, f64::max);
    if worst > 1e-10 {
        return Err(Error::InvalidInput(format!("qubit Hamiltonian is not Hermitian ({worst:.3e})")));
    }
    // Imaginary parts are summation noise at this point.
    let mut qubit = PauliOperator::zero(n_qubits);
    for (s, c) in raw.iter() {
        qubit.accumulate(Complex64::new(c.re, 0.0), *s);
    }
    qubit.prune(HAMILTONIAN_PRUNE_TOL);
    Ok(MolecularHamiltonian { integrals, fermionic, qubit })
}

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<MolecularHamiltonian> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Fcidump(format!("{}: {e}", path.display())))?;
    build_hamiltonian(parse_fcidump(&text)?)
}
