mod oracle;

use adaptvqe::reference::{fci_ground_energy, hf_energy, reference_sector};
use adaptvqe::units::to_kcal;
use adaptvqe::{
    build_hamiltonian, expectation, hf_state, jordan_wigner, load_hamiltonian, parse_fcidump, FermionOperator,
    SectorBasis, SectorInfo, Spin,
};
use oracle::{manifest, pauli_matrix};

const MINIMAL: &str = "&FCI NORB=1,NELEC=2,MS2=0,&END\n0.5 1 1 1 1\n-1.0 1 1 0 0\n0.7 0 0 0 0\n";

#[test]
fn minimal_file_reads_back() {
    let ints = parse_fcidump(MINIMAL).unwrap();
    assert_eq!(ints.n_orb, 1);
    assert_eq!(ints.h(0, 0), -1.0);
    assert_eq!(ints.eri(0, 0, 0, 0), 0.5);
    assert_eq!(ints.e_nuc, 0.7);
}

#[test]
fn eri_symmetry_is_reconstructed() {
    let text = "&FCI NORB=3,NELEC=2,MS2=0,&END\n0.25 3 1 2 1\n";
    let ints = parse_fcidump(text).unwrap();
    let (p, q, r, s) = (2, 0, 1, 0);
    for (a, b, c, d) in
        [(p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r), (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p)]
    {
        assert_eq!(ints.eri(a, b, c, d), 0.25);
    }
    assert_eq!(ints.eri(2, 1, 0, 0), 0.0);
}

#[test]
fn malformed_files_are_rejected() {
    for bad in [
        "NORB=1,NELEC=2 &END\n",
        "&FCI NELEC=2,MS2=0,&END\n",
        "&FCI NORB=1,NELEC=2,MS2=0,&END\n0.5 2 1 1 1\n",
        "&FCI NORB=1,NELEC=2,MS2=0,&END\n0.5 1 1 1\n",
        "&FCI NORB=1,NELEC=2,MS2=0,&END\nabc 1 1 1 1\n",
        "&FCI NORB=1,NELEC=2,MS2=0,&END\n0.5 1 1 1 1\n0.6 1 1 1 1\n",
    ] {
        assert!(parse_fcidump(bad).is_err(), "{bad:?}");
    }
}

#[test]
fn fcidump_round_trip() {
    let mut rng = oracle::rng(1);
    let ints = oracle::random_integrals(&mut rng, 3, 2);
    let back = parse_fcidump(&ints.to_fcidump()).unwrap();
    assert_eq!(back.n_orb, 3);
    assert!((back.e_nuc - ints.e_nuc).abs() < 1e-15);
    for p in 0..3 {
        for q in 0..3 {
            assert!((back.h(p, q) - ints.h(p, q)).abs() < 1e-15);
            for r in 0..3 {
                for s in 0..3 {
                    assert!((back.eri(p, q, r, s) - ints.eri(p, q, r, s)).abs() < 1e-15);
                }
            }
        }
    }
    let real = std::fs::read_to_string(oracle::fixture("lih", 2.39)).unwrap();
    let parsed = parse_fcidump(&real).unwrap();
    assert_eq!(parse_fcidump(&parsed.to_fcidump()).unwrap(), parsed);
}

#[test]
fn fixture_headers() {
    for e in manifest() {
        let ints = parse_fcidump(&std::fs::read_to_string(oracle::fixtures_dir().join(&e.path)).unwrap()).unwrap();
        let expected = match e.molecule.as_str() {
            "lih" => (6, 4),
            "beh2" => (7, 6),
            "h6" => (6, 6),
            other => panic!("unexpected molecule {other}"),
        };
        assert_eq!((ints.n_orb, ints.n_elec, ints.ms2), (expected.0, expected.1, 0), "{}", e.path);
        assert_eq!((e.norb, e.nelec), expected);
    }
}

#[test]
fn one_orbital_spectrum() {
    let ham = build_hamiltonian(parse_fcidump(MINIMAL).unwrap()).unwrap();
    let m = pauli_matrix(&ham.qubit);
    let mut evals: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    evals.sort_by(f64::total_cmp);
    let (e, h, u) = (0.7, -1.0, 0.5);
    let mut expected = vec![e, e + h, e + h, e + 2.0 * h + u];
    expected.sort_by(f64::total_cmp);
    for (a, b) in evals.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-14, "{evals:?} vs {expected:?}");
    }
    let fci = fci_ground_energy(&ham, SectorInfo { n_alpha: 1, n_beta: 1 }).unwrap();
    assert!((fci - (e + 2.0 * h + u)).abs() < 1e-14);
}

#[test]
fn hamiltonian_is_hermitian_and_conserves_symmetries() {
    let ham = load_hamiltonian(oracle::fixture("lih", 1.6)).unwrap();
    assert!(ham.qubit.is_hermitian(1e-12));
    for op in [
        FermionOperator::number(12),
        FermionOperator::spin_number(6, Spin::Alpha),
        FermionOperator::sz(6),
    ] {
        let mut comm = ham.qubit.commutator(&jordan_wigner(&op, 12).unwrap()).unwrap();
        comm.prune(1e-12);
        assert!(comm.is_empty());
    }
}

#[test]
fn random_integrals_match_dense_full_space() {
    // chemist-to-physicist index handling checked against a dense spectrum
    let mut rng = oracle::rng(3);
    for (norb, nelec) in [(2, 2), (3, 2), (3, 4)] {
        let ints = oracle::random_integrals(&mut rng, norb, nelec);
        let ham = build_hamiltonian(ints.clone()).unwrap();
        let m = pauli_matrix(&ham.qubit);
        let sector = reference_sector(&ham);
        let exact = oracle::sector_minimum(&m, sector.n_alpha as u32, sector.n_beta as u32);
        assert!((fci_ground_energy(&ham, sector).unwrap() - exact).abs() < 1e-12);
        assert!((hf_energy(&ham).unwrap() - oracle::hf_energy_from_integrals(&ints)).abs() < 1e-12);
    }
}

#[test]
fn register_and_sector_dimensions() {
    let lih = load_hamiltonian(oracle::fixture("lih", 2.39)).unwrap();
    let beh2 = load_hamiltonian(oracle::fixture("beh2", 2.39)).unwrap();
    let h6 = load_hamiltonian(oracle::fixture("h6", 1.0)).unwrap();
    assert_eq!(1usize << lih.n_qubits(), 4096);
    assert_eq!(1usize << beh2.n_qubits(), 16384);
    assert_eq!(SectorBasis::new(6, 2, 2).unwrap().dim(), 225);
    assert_eq!(SectorBasis::new(7, 3, 3).unwrap().dim(), 1225);
    assert_eq!(SectorBasis::new(6, 3, 3).unwrap().dim(), 400);
    for (ham, occ) in [(&lih, 4usize), (&beh2, 6), (&h6, 6)] {
        assert_eq!(ham.hf_occupied(), (0..occ).collect::<Vec<_>>());
    }
}

#[test]
fn hf_energies_match_integral_formula_and_manifest() {
    for e in manifest() {
        let ham = load_hamiltonian(oracle::fixtures_dir().join(&e.path)).unwrap();
        let from_state = expectation(&ham.qubit, &hf_state(ham.n_qubits(), &ham.hf_occupied()).unwrap()).unwrap();
        assert_eq!(hf_energy(&ham).unwrap(), from_state);
        let formula = oracle::hf_energy_from_integrals(&ham.integrals);
        assert!((from_state - formula).abs() < 1e-10, "{}: {from_state} vs {formula}", e.path);
        assert!((from_state - e.e_hf).abs() < 1e-8, "{}: {from_state} vs {}", e.path, e.e_hf);
    }
}

#[test]
fn fci_energies_match_manifest() {
    for e in manifest() {
        let ham = load_hamiltonian(oracle::fixtures_dir().join(&e.path)).unwrap();
        let fci = fci_ground_energy(&ham, reference_sector(&ham)).unwrap();
        assert!((fci - e.e_fci).abs() < 1e-8, "{}: {fci} vs {}", e.path, e.e_fci);
        assert!(hf_energy(&ham).unwrap() > fci, "{}", e.path);
    }
}

#[test]
fn lih_hf_misses_chemical_accuracy_when_stretched() {
    let e = oracle::manifest_entry("lih", 3.4);
    assert!(to_kcal(e.e_hf - e.e_fci) > 1.0);
    let ham = load_hamiltonian(oracle::fixture("lih", 3.4)).unwrap();
    let fci = fci_ground_energy(&ham, reference_sector(&ham)).unwrap();
    assert!(to_kcal(hf_energy(&ham).unwrap() - fci) > 1.0);
}
