//! Independent dense-matrix references shared by the integration tests.
//!
//! Nothing here goes through the library's normal ordering, Jordan-Wigner
//! map or statevector kernels: ladder operators are built by acting on
//! occupation bitstrings directly and Pauli strings by Kronecker products.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use adaptvqe::fermion::{annihilate, create, Ladder, LadderOp};
use adaptvqe::{FermionOperator, PauliOperator};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Acts with `ops` (rightmost first) on the occupation bitstring `b`; bit `p`
/// is the occupation of mode `p` and the sign counts occupied modes below `p`.
fn act(ops: &[LadderOp], mut b: usize) -> Option<(usize, f64)> {
    let mut sign = 1.0;
    for &(p, kind) in ops.iter().rev() {
        let occupied = b >> p & 1 == 1;
        if occupied == (kind == Ladder::Create) {
            return None;
        }
        if (b & ((1 << p) - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        b ^= 1 << p;
    }
    Some((b, sign))
}

fn product_matrix<'a>(terms: impl Iterator<Item = (Complex64, &'a [LadderOp])>, n: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut total = CMatrix::zeros(dim, dim);
    for (coef, ops) in terms {
        for col in 0..dim {
            if let Some((row, sign)) = act(ops, col) {
                total[(row, col)] += coef * sign;
            }
        }
    }
    total
}

pub fn fermion_matrix(op: &FermionOperator, n: usize) -> CMatrix {
    product_matrix(op.iter().map(|(ops, c)| (c, ops)), n)
}

fn single_qubit(letter: char) -> CMatrix {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match letter {
        'I' => CMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        'X' => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        'Y' => CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        _ => unreachable!(),
    }
}

/// Dense matrix of a Pauli sum, `P_{n-1} (x) ... (x) P_0`, read back from
/// the operator's text form.
pub fn pauli_matrix(op: &PauliOperator) -> CMatrix {
    let n = op.n_qubits();
    let dim = 1usize << n;
    let mut total = CMatrix::zeros(dim, dim);
    for (coef, letters) in pauli_terms(op) {
        let mut per_qubit = vec!['I'; n];
        for (q, l) in letters {
            per_qubit[q] = l;
        }
        let mut m = CMatrix::identity(1, 1);
        for q in (0..n).rev() {
            m = m.kronecker(&single_qubit(per_qubit[q]));
        }
        total += m * coef;
    }
    total
}

/// Coefficient and `(qubit, letter)` list of every term, read from the text form.
pub fn pauli_terms(op: &PauliOperator) -> Vec<(Complex64, Vec<(usize, char)>)> {
    op.to_text().lines().map(parse_line).collect()
}

fn parse_line(line: &str) -> (Complex64, Vec<(usize, char)>) {
    let close = line.find(')').unwrap();
    let (re, im) = line[1..close].split_once(',').unwrap();
    let coef = c(re.parse().unwrap(), im.parse().unwrap());
    let letters = line[close + 1..]
        .split_whitespace()
        .map(|t| (t[1..].parse().unwrap(), t.chars().next().unwrap()))
        .collect();
    (coef, letters)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `exp(theta A)` for anti-Hermitian `A` through the eigendecomposition of
/// the Hermitian `iA`.
pub fn expm_anti_hermitian(a: &CMatrix, theta: f64) -> CMatrix {
    let h = a * c(0.0, 1.0);
    let eig = h.clone().symmetric_eigen();
    let u = &eig.eigenvectors;
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| (c(0.0, -theta * l)).exp()),
    );
    u * CMatrix::from_diagonal(&phases) * u.adjoint()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub type RawTerms = Vec<(Complex64, Vec<LadderOp>)>;

/// Dense matrix of a sum of ladder products taken exactly as written.
pub fn raw_matrix(terms: &RawTerms, n: usize) -> CMatrix {
    product_matrix(terms.iter().map(|(c, ops)| (*c, ops.as_slice())), n)
}

pub fn operator_from_raw(terms: &RawTerms) -> FermionOperator {
    terms.iter().fold(FermionOperator::zero(), |acc, (coef, ops)| &acc + &FermionOperator::term(*coef, ops))
}

/// Up to `max_terms` random products of up to `max_len` ladder operators.
pub fn random_raw_terms(rng: &mut impl Rng, n_modes: usize, max_terms: usize, max_len: usize) -> RawTerms {
    (0..rng.gen_range(1..=max_terms))
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            let ops = (0..len)
                .map(|_| {
                    let p = rng.gen_range(0..n_modes);
                    if rng.gen_bool(0.5) {
                        create(p)
                    } else {
                        annihilate(p)
                    }
                })
                .collect();
            (c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), ops)
        })
        .collect()
}

pub fn random_pauli_operator(rng: &mut impl Rng, n_qubits: usize, n_terms: usize) -> PauliOperator {
    let letters = ['X', 'Y', 'Z'];
    let mut text = String::new();
    for _ in 0..n_terms {
        text.push_str(&format!("({:?},{:?})", rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        for q in 0..n_qubits {
            if rng.gen_bool(0.6) {
                text.push_str(&format!(" {}{q}", letters[rng.gen_range(0..3)]));
            }
        }
        text.push('\n');
    }
    PauliOperator::parse_text(n_qubits, &text).unwrap()
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(molecule: &str, r: f64) -> PathBuf {
    fixtures_dir().join(molecule).join(format!("{molecule}_{r:.2}.fcidump"))
}

/// Energies reported by the chemistry package that wrote the fixtures.
#[derive(Debug, Clone, Deserialize)]
pub struct ManifestEntry {
    pub molecule: String,
    pub r: f64,
    pub path: String,
    pub norb: usize,
    pub nelec: usize,
    pub e_hf: f64,
    pub e_fci: f64,
}

pub fn manifest() -> &'static [ManifestEntry] {
    static M: OnceLock<Vec<ManifestEntry>> = OnceLock::new();
    M.get_or_init(|| {
        let text = std::fs::read_to_string(fixtures_dir().join("manifest.json")).unwrap();
        serde_json::from_str(&text).unwrap()
    })
}

pub fn manifest_entry(molecule: &str, r: f64) -> &'static ManifestEntry {
    manifest().iter().find(|e| e.molecule == molecule && (e.r - r).abs() < 1e-9).unwrap()
}

/// Central difference with step `h`.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|k| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += h;
            xm[k] -= h;
            (f(&xp) - f(&xm)) / (2.0 * h)
        })
        .collect()
}

/// Random real integrals with the full eight-fold symmetry.
pub fn random_integrals(rng: &mut impl Rng, n_orb: usize, n_elec: usize) -> adaptvqe::MolecularIntegrals {
    let mut ints = adaptvqe::MolecularIntegrals::new(n_orb, n_elec, 0, rng.gen_range(0.0..1.0));
    for p in 0..n_orb {
        for q in 0..=p {
            ints.set_h(p, q, rng.gen_range(-1.0..1.0));
        }
    }
    for p in 0..n_orb {
        for q in 0..n_orb {
            for r in 0..n_orb {
                for s in 0..n_orb {
                    ints.set_eri(p, q, r, s, rng.gen_range(-0.2..0.2) + if p == q && r == s { 0.5 } else { 0.0 });
                }
            }
        }
    }
    ints
}

/// Hartree-Fock energy straight from the integrals:
/// `E_nuc + sum_i h_ii + 1/2 sum_ij <ij||ij>` over occupied spin-orbitals.
pub fn hf_energy_from_integrals(ints: &adaptvqe::MolecularIntegrals) -> f64 {
    let occ: Vec<(usize, usize)> = (0..ints.n_alpha())
        .map(|p| (p, 0))
        .chain((0..ints.n_beta()).map(|p| (p, 1)))
        .collect();
    let mut e = ints.e_nuc;
    for &(i, _) in &occ {
        e += ints.h(i, i);
    }
    for &(i, si) in &occ {
        for &(j, sj) in &occ {
            e += 0.5 * ints.eri(i, i, j, j);
            if si == sj {
                e -= 0.5 * ints.eri(i, j, j, i);
            }
        }
    }
    e
}

/// Lowest eigenvalue of a dense Hermitian matrix restricted to the basis
/// states with `n_alpha` even and `n_beta` odd bits set.
pub fn sector_minimum(m: &CMatrix, n_alpha: u32, n_beta: u32) -> f64 {
    let even = (0..m.nrows()).fold(0usize, |acc, b| acc | (b & 0x5555_5555_5555_5555));
    let keep: Vec<usize> = (0..m.nrows())
        .filter(|b| (b & even).count_ones() == n_alpha && (b & !even).count_ones() == n_beta)
        .collect();
    let sub = CMatrix::from_fn(keep.len(), keep.len(), |i, j| m[(keep[i], keep[j])]);
    sub.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}
