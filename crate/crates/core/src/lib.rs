//! Classical simulation of adaptive variational quantum eigensolvers for
//! small molecules: fermion and Pauli algebra, Jordan-Wigner mapping,
//! exact statevector kernels, FCIDUMP input, ADAPT-VQE, and FCI/HF/UCCSD
//! reference solvers.

pub mod adapt;
pub mod error;
pub mod experiment;
pub mod fcidump;
pub mod fermion;
pub mod hamiltonian;
pub mod jordan_wigner;
pub mod pauli;
pub mod reference;
pub mod sector;
pub mod statevector;
pub mod units;
pub mod vqe;

pub use error::{Error, Result};
pub use fcidump::{parse_fcidump, MolecularIntegrals};
pub use fermion::pool::{build_pool, Normalization, PoolOperator, PoolRestriction, PoolSpec};
pub use fermion::{make_excitation_generator, spin_complement, FermionOperator, Spin, SpinOrbital};
pub use hamiltonian::{build_hamiltonian, load_hamiltonian, MolecularHamiltonian};
pub use jordan_wigner::jordan_wigner;
pub use pauli::{Letter, PauliOperator, PauliString};
pub use sector::{SectorBasis, SectorInfo, SparseMatrix};
pub use statevector::{apply, apply_exp, expectation, hf_state, StateVector};
pub use units::HARTREE_TO_KCAL;
pub use vqe::{Ansatz, BfgsOptions, SectorSimulator, VqeResult};
