//! Sparse Pauli-string operators.
//!
//! A string is stored as a pair of bitmasks in the symplectic encoding:
//! X on qubit q sets `x`, Z sets `z`, Y sets both. Up to 64 qubits.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::PRUNE_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn rank(self) -> u8 {
        match self {
            Letter::I => 0,
            Letter::X => 1,
            Letter::Y => 2,
            Letter::Z => 3,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Tensor product of single-qubit Paulis; identities are implicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn single(qubit: usize, letter: Letter) -> Self {
        let bit = 1u64 << qubit;
        match letter {
            Letter::I => Self::IDENTITY,
            Letter::X => PauliString { x: bit, z: 0 },
            Letter::Y => PauliString { x: bit, z: bit },
            Letter::Z => PauliString { x: 0, z: bit },
        }
    }

    /// Builds a string from `(qubit, letter)` pairs; later pairs overwrite earlier ones.
    pub fn from_letters(letters: &[(usize, Letter)]) -> Self {
        let mut s = Self::IDENTITY;
        for &(q, l) in letters {
            let bit = 1u64 << q;
            s.x &= !bit;
            s.z &= !bit;
            let t = Self::single(q, l);
            s.x |= t.x;
            s.z |= t.z;
        }
        s
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        let x = self.x >> qubit & 1 == 1;
        let z = self.z >> qubit & 1 == 1;
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// Non-identity positions in ascending qubit order.
    pub fn letters(&self) -> Vec<(usize, Letter)> {
        let mut sup = self.support();
        let mut out = Vec::with_capacity(sup.count_ones() as usize);
        while sup != 0 {
            let q = sup.trailing_zeros() as usize;
            out.push((q, self.letter(q)));
            sup &= sup - 1;
        }
        out
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn n_y(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// `self * other = i^k * result`; returns `(result, k mod 4)`.
    pub fn multiply(&self, other: &PauliString) -> (PauliString, u32) {
        let out = PauliString { x: self.x ^ other.x, z: self.z ^ other.z };
        let k = self.n_y() + other.n_y() + 2 * (self.z & other.x).count_ones() + 4 * 64 - out.n_y();
        (out, k % 4)
    }
}

impl Ord for PauliString {
    /// Lexicographic over the `(qubit, letter)` sequence of non-identity positions.
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.x ^ other.x) | (self.z ^ other.z);
        if diff == 0 {
            return Ordering::Equal;
        }
        let q = diff.trailing_zeros() as usize;
        let (a, b) = (self.letter(q), other.letter(q));
        let above = |s: &PauliString| q + 1 < 64 && s.support() >> (q + 1) != 0;
        match (a, b) {
            (Letter::I, _) => {
                if above(self) {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (_, Letter::I) => {
                if above(other) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            _ => a.rank().cmp(&b.rank()),
        }
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters().iter().map(|(q, l)| format!("{l}{q}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

const PHASES: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

pub(crate) fn phase(k: u32) -> Complex64 {
    PHASES[(k % 4) as usize]
}

/// Sparse map from Pauli strings to complex coefficients on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOperator {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliOperator {
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits <= 64, "at most 64 qubits supported");
        PauliOperator { n_qubits, terms: BTreeMap::new() }
    }

    pub fn identity(n_qubits: usize, coefficient: impl Into<Complex64>) -> Self {
        let mut op = Self::zero(n_qubits);
        op.add_term(coefficient, PauliString::IDENTITY);
        op
    }

    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = (Complex64, PauliString)>) -> Self {
        let mut op = Self::zero(n_qubits);
        for (c, s) in terms {
            op.accumulate(c, s);
        }
        op.prune(PRUNE_TOL);
        op
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, coefficient: impl Into<Complex64>, s: PauliString) {
        self.accumulate(coefficient.into(), s);
        self.prune(PRUNE_TOL);
    }

    pub(crate) fn accumulate(&mut self, c: Complex64, s: PauliString) {
        debug_assert!(self.n_qubits == 64 || s.support() >> self.n_qubits == 0);
        *self.terms.entry(s).or_default() += c;
    }

    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, v| v.norm() > tol);
    }

    pub fn scale(&self, factor: impl Into<Complex64>) -> Self {
        let f = factor.into();
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= f;
        }
        out.prune(PRUNE_TOL);
        out
    }

    pub fn hermitian_conjugate(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.conj();
        }
        out
    }

    /// All coefficients real to within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// All coefficients imaginary to within `tol`.
    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    /// Largest Hermitian-part coefficient magnitude.
    pub(crate) fn max_real_part(&self) -> f64 {
        self.terms.values().map(|c| c.re.abs()).fold(0.0, f64::max)
    }

    /// Sum of absolute coefficients; bounds the spectral norm.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.accumulate(*c, *s);
        }
        out.prune(PRUNE_TOL);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1.0))
    }

    /// Distributive product with phase tracking.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = Self::zero(self.n_qubits);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (s, k) = a.multiply(b);
                out.accumulate(ca * cb * phase(k), s);
            }
        }
        out.prune(PRUNE_TOL);
        Ok(out)
    }

    /// `ab - ba`. Commuting string pairs contribute nothing, so cancellation is exact.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = Self::zero(self.n_qubits);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.commutes_with(b) {
                    continue;
                }
                let (s, k) = a.multiply(b);
                out.accumulate(ca * cb * phase(k) * 2.0, s);
            }
        }
        out.prune(PRUNE_TOL);
        Ok(out)
    }

    /// One term per line: `(<re>,<im>) <letter><qubit> ...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, c) in &self.terms {
            out.push_str(&format!("({:?},{:?})", c.re, c.im));
            for (q, l) in s.letters() {
                out.push_str(&format!(" {l}{q}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_text(n_qubits: usize, text: &str) -> Result<Self> {
        let bad = |line: &str| Error::InvalidInput(format!("bad Pauli term line: {line:?}"));
        let mut op = Self::zero(n_qubits);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let close = line.find(')').ok_or_else(|| bad(line))?;
            let inner = line.get(1..close).filter(|_| line.starts_with('(')).ok_or_else(|| bad(line))?;
            let (re, im) = inner.split_once(',').ok_or_else(|| bad(line))?;
            let re: f64 = re.trim().parse().map_err(|_| bad(line))?;
            let im: f64 = im.trim().parse().map_err(|_| bad(line))?;
            let mut letters = Vec::new();
            for tok in line[close + 1..].split_whitespace() {
                let (l, q) = tok.split_at(1);
                let letter = match l {
                    "X" => Letter::X,
                    "Y" => Letter::Y,
                    "Z" => Letter::Z,
                    _ => return Err(bad(line)),
                };
                let q: usize = q.parse().map_err(|_| bad(line))?;
                if q >= n_qubits {
                    return Err(Error::IndexOutOfRange { index: q, limit: n_qubits });
                }
                letters.push((q, letter));
            }
            op.accumulate(Complex64::new(re, im), PauliString::from_letters(&letters));
        }
        op.prune(PRUNE_TOL);
        Ok(op)
    }
}

impl Add for &PauliOperator {
    type Output = PauliOperator;
    fn add(self, rhs: &PauliOperator) -> PauliOperator {
        self.try_add(rhs).expect("register size mismatch")
    }
}

impl Sub for &PauliOperator {
    type Output = PauliOperator;
    fn sub(self, rhs: &PauliOperator) -> PauliOperator {
        self.try_sub(rhs).expect("register size mismatch")
    }
}

impl Mul for &PauliOperator {
    type Output = PauliOperator;
    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        self.product(rhs).expect("register size mismatch")
    }
}
