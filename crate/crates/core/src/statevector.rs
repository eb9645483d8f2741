//! Full-register statevector kernels.
//!
//! Basis index bit `q` is the occupation of qubit `q`. Pauli strings act by
//! bit arithmetic; no dense operator matrix is formed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{phase, PauliOperator, PauliString};

/// Hard cap on Taylor terms in [`apply_exp`].
pub const MAX_TAYLOR_TERMS: usize = 500;
pub const DEFAULT_EXP_TOL: f64 = 1e-12;
/// Norm drift above which the exponential output is renormalized.
pub const RENORMALIZE_DRIFT: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> Self {
        StateVector { n_qubits, amplitudes: vec![Complex64::default(); 1 << n_qubits] }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << n_qubits {
            return Err(Error::IndexOutOfRange { index, limit: 1 << n_qubits });
        }
        let mut s = Self::zero(n_qubits);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidInput(format!("amplitude count {len} is not a power of two")));
        }
        Ok(StateVector { n_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    fn axpy(&mut self, alpha: Complex64, other: &StateVector) {
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += alpha * b;
        }
    }
}

/// Computational basis state with the listed qubits set.
pub fn hf_state(n_qubits: usize, occupied: &[usize]) -> Result<StateVector> {
    let mut index = 0usize;
    for &q in occupied {
        if q >= n_qubits {
            return Err(Error::IndexOutOfRange { index: q, limit: n_qubits });
        }
        if index >> q & 1 == 1 {
            return Err(Error::InvalidInput(format!("qubit {q} listed twice")));
        }
        index |= 1 << q;
    }
    StateVector::basis(n_qubits, index)
}

fn check_dims(op: &PauliOperator, psi: &StateVector) -> Result<()> {
    if op.n_qubits() != psi.n_qubits {
        return Err(Error::DimensionMismatch { expected: op.n_qubits(), found: psi.n_qubits });
    }
    Ok(())
}

#[inline]
fn string_phase(s: &PauliString, b: usize) -> f64 {
    if (s.z & b as u64).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `op |psi>`, term by term.
pub fn apply(op: &PauliOperator, psi: &StateVector) -> Result<StateVector> {
    check_dims(op, psi)?;
    let mut out = StateVector::zero(psi.n_qubits);
    for (s, c) in op.iter() {
        let c = c * phase(s.n_y());
        let flip = s.x as usize;
        for (b, amp) in psi.amplitudes.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            out.amplitudes[b ^ flip] += c * string_phase(s, b) * amp;
        }
    }
    Ok(out)
}

/// `<psi|op|psi>` without the Hermiticity check.
pub fn expectation_complex(op: &PauliOperator, psi: &StateVector) -> Result<Complex64> {
    check_dims(op, psi)?;
    let mut total = Complex64::default();
    for (s, c) in op.iter() {
        let flip = s.x as usize;
        let mut acc = Complex64::default();
        for (b, amp) in psi.amplitudes.iter().enumerate() {
            acc += psi.amplitudes[b ^ flip].conj() * string_phase(s, b) * amp;
        }
        total += c * phase(s.n_y()) * acc;
    }
    Ok(total)
}

/// `Re <psi|op|psi>`; rejects an imaginary part above 1e-9.
pub fn expectation(op: &PauliOperator, psi: &StateVector) -> Result<f64> {
    let v = expectation_complex(op, psi)?;
    if v.im.abs() > 1e-9 {
        return Err(Error::NonRealExpectation(v.im));
    }
    Ok(v.re)
}

/// Diagnostics from one exponential application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpReport {
    pub terms: usize,
    pub norm_drift: f64,
    pub renormalized: bool,
}

/// `exp(theta * generator) |psi>` by truncated Taylor series.
///
/// Stops once the k-th term has norm below `tol * |psi|`.
pub fn apply_exp(theta: f64, generator: &PauliOperator, psi: &StateVector, tol: f64) -> Result<(StateVector, ExpReport)> {
    check_dims(generator, psi)?;
    if tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let herm = generator.max_real_part();
    if herm > 1e-12 {
        return Err(Error::NotAntiHermitian(herm));
    }
    let norm0 = psi.norm();
    let mut sum = psi.clone();
    if theta == 0.0 || generator.is_empty() {
        return Ok((sum, ExpReport { terms: 0, norm_drift: 0.0, renormalized: false }));
    }
    let mut term = psi.clone();
    let mut k = 0;
    loop {
        k += 1;
        if k > MAX_TAYLOR_TERMS {
            return Err(Error::SeriesNotConverged(MAX_TAYLOR_TERMS));
        }
        term = apply(generator, &term)?;
        let f = Complex64::new(theta / k as f64, 0.0);
        for a in term.amplitudes.iter_mut() {
            *a *= f;
        }
        sum.axpy(Complex64::new(1.0, 0.0), &term);
        if term.norm() < tol * norm0 {
            break;
        }
    }
    let drift = (sum.norm() - norm0).abs();
    let renormalized = drift > RENORMALIZE_DRIFT;
    if renormalized {
        let f = norm0 / sum.norm();
        for a in sum.amplitudes.iter_mut() {
            *a *= f;
        }
    }
    Ok((sum, ExpReport { terms: k, norm_drift: drift, renormalized }))
}
