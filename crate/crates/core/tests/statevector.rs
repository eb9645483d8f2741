mod oracle;

use adaptvqe::{
    apply, apply_exp, build_pool, expectation, hf_state, jordan_wigner, load_hamiltonian, FermionOperator,
    PauliOperator, PoolRestriction, PoolSpec, Spin, StateVector,
};
use nalgebra::DVector;
use oracle::{c, expm_anti_hermitian, pauli_matrix};
use rand::Rng;

fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    let amps: Vec<_> = (0..1 << n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn to_dvector(psi: &StateVector) -> DVector<num_complex::Complex64> {
    DVector::from_column_slice(psi.amplitudes())
}

fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

#[test]
fn hf_state_is_basis_state() {
    let psi = hf_state(4, &[0, 1]).unwrap();
    for (i, a) in psi.amplitudes().iter().enumerate() {
        assert_eq!(*a, c(if i == 3 { 1.0 } else { 0.0 }, 0.0));
    }
    assert!(hf_state(4, &[4]).is_err());
}

#[test]
fn lih_reference_fills_lowest_four_qubits() {
    let ham = load_hamiltonian(oracle::fixture("lih", 2.39)).unwrap();
    assert_eq!(ham.hf_occupied(), vec![0, 1, 2, 3]);
    let psi = hf_state(12, &ham.hf_occupied()).unwrap();
    let n = jordan_wigner(&FermionOperator::number(12), 12).unwrap();
    assert!((expectation(&n, &psi).unwrap() - 4.0).abs() < 1e-14);
}

#[test]
fn identity_and_bit_flip() {
    let mut rng = oracle::rng(1);
    let psi = random_state(&mut rng, 3);
    let id = PauliOperator::identity(3, 1.0);
    assert_eq!(apply(&id, &psi).unwrap(), psi);
    assert!((expectation(&id, &psi).unwrap() - 1.0).abs() < 1e-14);
    let x0 = PauliOperator::parse_text(3, "(1.0,0.0) X0").unwrap();
    let flipped = apply(&x0, &StateVector::basis(3, 0).unwrap()).unwrap();
    assert_eq!(flipped, StateVector::basis(3, 1).unwrap());
}

#[test]
fn z_expectation_reads_occupation() {
    let z0 = PauliOperator::parse_text(3, "(1.0,0.0) Z0").unwrap();
    for b in 0..8 {
        let e = expectation(&z0, &StateVector::basis(3, b).unwrap()).unwrap();
        assert_eq!(e, 1.0 - 2.0 * (b & 1) as f64);
    }
}

#[test]
fn apply_matches_dense_matvec() {
    let mut rng = oracle::rng(2);
    for _ in 0..20 {
        let op = oracle::random_pauli_operator(&mut rng, 3, 6);
        let psi = random_state(&mut rng, 3);
        let dense = pauli_matrix(&op) * to_dvector(&psi);
        let got = apply(&op, &psi).unwrap();
        let err = got.amplitudes().iter().zip(dense.iter()).fold(0.0, |m: f64, (x, y)| m.max((x - y).norm()));
        assert!(err < 1e-13);
    }
}

#[test]
fn apply_is_linear() {
    let mut rng = oracle::rng(3);
    let a = oracle::random_pauli_operator(&mut rng, 4, 5);
    let b = oracle::random_pauli_operator(&mut rng, 4, 5);
    let psi = random_state(&mut rng, 4);
    let lhs = apply(&(&a + &b), &psi).unwrap();
    let (x, y) = (apply(&a, &psi).unwrap(), apply(&b, &psi).unwrap());
    let rhs = StateVector::from_amplitudes(x.amplitudes().iter().zip(y.amplitudes()).map(|(p, q)| p + q).collect()).unwrap();
    assert!(max_diff(&lhs, &rhs) < 1e-13);
}

#[test]
fn dimension_mismatch_is_an_error() {
    let op = PauliOperator::identity(3, 1.0);
    assert!(apply(&op, &StateVector::zero(2)).is_err());
    assert!(expectation(&op, &StateVector::zero(4)).is_err());
}

#[test]
fn non_hermitian_expectation_is_rejected() {
    let op = PauliOperator::parse_text(1, "(0.0,1.0) Z0").unwrap();
    assert!(expectation(&op, &StateVector::basis(1, 0).unwrap()).is_err());
}

fn two_orbital_generators() -> Vec<PauliOperator> {
    build_pool(&PoolSpec::new(2, 0, PoolRestriction::GeneralizedPqrs))
        .unwrap()
        .iter()
        .map(|op| jordan_wigner(&op.generator, 4).unwrap())
        .collect()
}

#[test]
fn exponential_at_zero_is_identity() {
    let mut rng = oracle::rng(4);
    let psi = random_state(&mut rng, 4);
    for g in two_orbital_generators() {
        assert_eq!(apply_exp(0.0, &g, &psi, 1e-12).unwrap().0, psi);
    }
}

#[test]
fn exponential_matches_dense_expm() {
    let mut rng = oracle::rng(5);
    for g in two_orbital_generators() {
        let m = pauli_matrix(&g);
        for _ in 0..4 {
            let theta = rng.gen_range(-2.0..2.0);
            let psi = random_state(&mut rng, 4);
            let dense = expm_anti_hermitian(&m, theta) * to_dvector(&psi);
            let (got, _) = apply_exp(theta, &g, &psi, 1e-12).unwrap();
            let err = got.amplitudes().iter().zip(dense.iter()).fold(0.0, |m: f64, (x, y)| m.max((x - y).norm()));
            assert!(err < 1e-10, "theta {theta}: {err:e}");
        }
    }
}

#[test]
fn exponential_inverse_restores_state() {
    let ham = load_hamiltonian(oracle::fixture("lih", 1.6)).unwrap();
    let pool = build_pool(&PoolSpec::new(6, 2, PoolRestriction::GeneralizedPqrs)).unwrap();
    let mut rng = oracle::rng(6);
    let psi = hf_state(12, &ham.hf_occupied()).unwrap();
    for _ in 0..10 {
        let g = jordan_wigner(&pool[rng.gen_range(0..pool.len())].generator, 12).unwrap();
        let theta = rng.gen_range(-1.0..1.0);
        let (fwd, _) = apply_exp(theta, &g, &psi, 1e-12).unwrap();
        let (back, _) = apply_exp(-theta, &g, &fwd, 1e-12).unwrap();
        assert!(max_diff(&back, &psi) < 1e-10);
    }
}

#[test]
fn exponential_conserves_norm_and_spin_populations() {
    let pool = build_pool(&PoolSpec::new(3, 1, PoolRestriction::GeneralizedPqrs)).unwrap();
    let na = jordan_wigner(&FermionOperator::spin_number(3, Spin::Alpha), 6).unwrap();
    let nb = jordan_wigner(&FermionOperator::spin_number(3, Spin::Beta), 6).unwrap();
    let mut psi = hf_state(6, &[0, 1]).unwrap();
    let mut rng = oracle::rng(7);
    for op in &pool {
        let g = jordan_wigner(&op.generator, 6).unwrap();
        psi = apply_exp(rng.gen_range(-1.0..1.0), &g, &psi, 1e-12).unwrap().0;
        assert!((psi.norm() - 1.0).abs() < 1e-9);
        assert!((expectation(&na, &psi).unwrap() - 1.0).abs() < 1e-9);
        assert!((expectation(&nb, &psi).unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn non_anti_hermitian_generator_is_rejected() {
    let h = PauliOperator::parse_text(1, "(1.0,0.0) X0").unwrap();
    assert!(apply_exp(0.3, &h, &StateVector::basis(1, 0).unwrap(), 1e-12).is_err());
}
