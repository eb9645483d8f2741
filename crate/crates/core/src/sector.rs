//! Fixed-(N_alpha, N_beta) sector basis and real sparse operators on it.
//!
//! Number- and S_z-conserving operators with real matrix elements are
//! compiled once into CSR matrices over the sector determinants; the
//! variational kernels then work on real vectors of sector dimension.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{phase, PauliOperator};
use crate::statevector::{StateVector, MAX_TAYLOR_TERMS, RENORMALIZE_DRIFT};

const ALPHA_MASK: u64 = 0x5555_5555_5555_5555;
const BETA_MASK: u64 = 0xAAAA_AAAA_AAAA_AAAA;
const ABSENT: u32 = u32::MAX;

/// Alpha and beta electron counts of a particle-number sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SectorInfo {
    pub n_alpha: usize,
    pub n_beta: usize,
}

/// Interleaved determinants with fixed alpha and beta occupation counts.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    n_qubits: usize,
    n_alpha: usize,
    n_beta: usize,
    states: Vec<u64>,
    lookup: Vec<u32>,
}

impl SectorBasis {
    pub fn new(n_spatial: usize, n_alpha: usize, n_beta: usize) -> Result<Self> {
        let n_qubits = 2 * n_spatial;
        if n_alpha > n_spatial || n_beta > n_spatial {
            return Err(Error::InvalidInput(format!(
                "sector ({n_alpha}, {n_beta}) does not fit {n_spatial} spatial orbitals"
            )));
        }
        if n_qubits > 26 {
            return Err(Error::InvalidInput(format!("{n_qubits} qubits exceeds the dense lookup table")));
        }
        let mut states = Vec::new();
        let mut lookup = vec![ABSENT; 1 << n_qubits];
        for b in 0..1u64 << n_qubits {
            if (b & ALPHA_MASK).count_ones() as usize == n_alpha && (b & BETA_MASK).count_ones() as usize == n_beta {
                lookup[b as usize] = states.len() as u32;
                states.push(b);
            }
        }
        Ok(SectorBasis { n_qubits, n_alpha, n_beta, states, lookup })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn info(&self) -> SectorInfo {
        SectorInfo { n_alpha: self.n_alpha, n_beta: self.n_beta }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, determinant: u64) -> Option<usize> {
        match self.lookup.get(determinant as usize) {
            Some(&i) if i != ABSENT => Some(i as usize),
            _ => None,
        }
    }

    /// Unit vector on one determinant.
    pub fn basis_vector(&self, determinant: u64) -> Result<Vec<f64>> {
        let i = self
            .index_of(determinant)
            .ok_or_else(|| Error::InvalidInput(format!("determinant {determinant:#b} is outside the sector")))?;
        let mut v = vec![0.0; self.dim()];
        v[i] = 1.0;
        Ok(v)
    }

    /// Full-register statevector holding a sector vector.
    pub fn embed(&self, v: &[f64]) -> StateVector {
        let mut amps = vec![Complex64::default(); 1 << self.n_qubits];
        for (&b, &x) in self.states.iter().zip(v) {
            amps[b as usize] = Complex64::new(x, 0.0);
        }
        StateVector::from_amplitudes(amps).expect("power-of-two length")
    }

    /// Sector components of a statevector; errors when amplitude lies outside
    /// the sector or is not real.
    pub fn project(&self, psi: &StateVector, tol: f64) -> Result<Vec<f64>> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: psi.n_qubits() });
        }
        let mut out = vec![0.0; self.dim()];
        for (b, a) in psi.amplitudes().iter().enumerate() {
            match self.index_of(b as u64) {
                Some(i) => {
                    if a.im.abs() > tol {
                        return Err(Error::ComplexMatrixElement(a.im));
                    }
                    out[i] = a.re;
                }
                None if a.norm() > tol => return Err(Error::SectorLeak),
                None => {}
            }
        }
        Ok(out)
    }
}

/// Real square matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SparseMatrix {
    /// Matrix elements `<b_i|op|b_j>` over the sector determinants.
    ///
    /// Fails if `op` maps any sector state outside the sector or produces a
    /// complex element above `1e-12`.
    pub fn compile(op: &PauliOperator, basis: &SectorBasis) -> Result<Self> {
        if op.n_qubits() != basis.n_qubits {
            return Err(Error::DimensionMismatch { expected: basis.n_qubits, found: op.n_qubits() });
        }
        let dim = basis.dim();
        let terms: Vec<(u64, u64, Complex64)> =
            op.iter().map(|(s, c)| (s.x, s.z, c * phase(s.n_y()))).collect();
        let mut scratch = vec![Complex64::default(); dim];
        let mut touched: Vec<usize> = Vec::new();
        // Single strings may leave the sector even when their sum does not.
        let mut outside: std::collections::HashMap<u64, Complex64> = std::collections::HashMap::new();
        // column-major triplets (col, row, value)
        let mut triplets: Vec<(u32, u32, f64)> = Vec::new();
        for (j, &b) in basis.states.iter().enumerate() {
            for &(x, z, c) in &terms {
                let target = b ^ x;
                let sign = if (z & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                match basis.index_of(target) {
                    Some(i) => {
                        if scratch[i] == Complex64::default() {
                            touched.push(i);
                        }
                        scratch[i] += c * sign;
                    }
                    None => *outside.entry(target).or_default() += c * sign,
                }
            }
            if let Some(v) = outside.values().map(|v| v.norm()).reduce(f64::max) {
                if v > 1e-12 {
                    return Err(Error::SectorLeak);
                }
            }
            outside.clear();
            touched.sort_unstable();
            touched.dedup();
            for &i in &touched {
                let v = scratch[i];
                scratch[i] = Complex64::default();
                if v.norm() <= 1e-14 {
                    continue;
                }
                if v.im.abs() > 1e-12 {
                    return Err(Error::ComplexMatrixElement(v.im));
                }
                triplets.push((j as u32, i as u32, v.re));
            }
            touched.clear();
        }
        Ok(Self::from_triplets(dim, triplets.into_iter().map(|(c, r, v)| (r, c, v))))
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        let mut t: Vec<(u32, u32, f64)> = triplets.into_iter().collect();
        t.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(u32, u32)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *vals.last_mut().expect("nonempty") += v;
                continue;
            }
            last = Some((r, c));
            row_ptr[r as usize + 1] += 1;
            cols.push(c);
            vals.push(v);
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseMatrix { dim, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k] as usize, self.vals[k]))
        })
    }

    /// `sum_k c_k M_k` for matrices of a common dimension.
    pub fn linear_combination(dim: usize, terms: &[(f64, &SparseMatrix)]) -> Self {
        let triplets = terms
            .iter()
            .filter(|(c, _)| *c != 0.0)
            .flat_map(|&(c, m)| m.entries().map(move |(r, col, v)| (r as u32, col as u32, c * v)));
        Self::from_triplets(dim, triplets)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        self.cols[range.clone()]
            .iter()
            .position(|&c| c as usize == col)
            .map_or(0.0, |k| self.vals[range.start + k])
    }

    /// `y += alpha * A x`
    #[inline]
    pub fn mul_add(&self, alpha: f64, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            *yr += alpha * acc;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.mul_add(1.0, x, &mut y);
        y
    }

    /// `u^T A v` without forming `A v`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut total = 0.0;
        for (r, ur) in u.iter().enumerate() {
            if *ur == 0.0 {
                continue;
            }
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * v[self.cols[k] as usize];
            }
            total += ur * acc;
        }
        total
    }

    /// Maximum absolute column sum (equals the row sum for (anti)symmetric matrices).
    pub fn one_norm(&self) -> f64 {
        let mut sums = vec![0.0; self.dim];
        for (c, v) in self.cols.iter().zip(&self.vals) {
            sums[*c as usize] += v.abs();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Largest `|A + A^T|` entry; zero for an antisymmetric matrix.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k] as usize;
                worst = worst.max((self.vals[k] + self.get(c, r)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.cols[k] as usize)] += self.vals[k];
            }
        }
        m
    }

    /// `exp(theta A) x` by truncated Taylor series, same stopping rule as
    /// [`crate::statevector::apply_exp`].
    pub fn exp_apply(&self, theta: f64, x: &[f64], tol: f64) -> Result<Vec<f64>> {
        let mut sum = x.to_vec();
        if theta == 0.0 || self.vals.is_empty() {
            return Ok(sum);
        }
        let norm0 = norm(x);
        let threshold = tol * norm0;
        let mut term = x.to_vec();
        let mut next = vec![0.0; self.dim];
        for k in 1..=MAX_TAYLOR_TERMS {
            next.iter_mut().for_each(|v| *v = 0.0);
            self.mul_add(theta / k as f64, &term, &mut next);
            std::mem::swap(&mut term, &mut next);
            let mut tn = 0.0;
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
                tn += t * t;
            }
            if tn.sqrt() < threshold {
                let n1 = norm(&sum);
                if (n1 - norm0).abs() > RENORMALIZE_DRIFT && n1 > 0.0 {
                    let f = norm0 / n1;
                    sum.iter_mut().for_each(|v| *v *= f);
                }
                return Ok(sum);
            }
        }
        Err(Error::SeriesNotConverged(MAX_TAYLOR_TERMS))
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
