//! Second-quantized fermionic operators over spin-orbitals.
//!
//! Terms are kept in normal-ordered canonical form: creation operators first,
//! sorted by descending index, then annihilation operators sorted by ascending
//! index. The reordering sign is folded into the coefficient, and anticommutator
//! contractions generated while reordering are kept as lower-rank terms, so the
//! canonical form is an exact rewrite of the input product.

pub mod pool;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients at or below this magnitude are dropped.
pub const PRUNE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Alpha,
    Beta,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Alpha => Spin::Beta,
            Spin::Beta => Spin::Alpha,
        }
    }
}

/// A spatial orbital paired with a spin label.
///
/// Spin-orbitals are interleaved onto qubits: `2 * spatial` for alpha and
/// `2 * spatial + 1` for beta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinOrbital {
    pub spatial: usize,
    pub spin: Spin,
}

impl SpinOrbital {
    pub fn alpha(spatial: usize) -> Self {
        SpinOrbital { spatial, spin: Spin::Alpha }
    }

    pub fn beta(spatial: usize) -> Self {
        SpinOrbital { spatial, spin: Spin::Beta }
    }

    pub fn index(self) -> usize {
        2 * self.spatial + usize::from(self.spin == Spin::Beta)
    }

    pub fn from_index(index: usize) -> Self {
        let spin = if index % 2 == 0 { Spin::Alpha } else { Spin::Beta };
        SpinOrbital { spatial: index / 2, spin }
    }

    pub fn flipped(self) -> Self {
        SpinOrbital { spatial: self.spatial, spin: self.spin.flipped() }
    }
}

impl fmt::Display for SpinOrbital {
    /// 1-based spatial index, overbar for beta.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.spin {
            Spin::Alpha => write!(f, "{}", self.spatial + 1),
            Spin::Beta => write!(f, "{}\u{0304}", self.spatial + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// One ladder operator acting on spin-orbital `.0`.
pub type LadderOp = (usize, Ladder);

pub fn create(index: usize) -> LadderOp {
    (index, Ladder::Create)
}

pub fn annihilate(index: usize) -> LadderOp {
    (index, Ladder::Annihilate)
}

/// Sparse sum of normal-ordered ladder products with complex coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FermionOperator {
    terms: BTreeMap<Vec<LadderOp>, Complex64>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity(coefficient: impl Into<Complex64>) -> Self {
        Self::term(coefficient, &[])
    }

    /// Builds `coefficient * ops[0] ops[1] ...`, normal ordered.
    pub fn term(coefficient: impl Into<Complex64>, ops: &[LadderOp]) -> Self {
        let mut out = Self::zero();
        out.push_product(coefficient.into(), ops.to_vec());
        out.prune(PRUNE_TOL);
        out
    }

    /// Number operator summed over `n_spin_orbitals` modes.
    pub fn number(n_spin_orbitals: usize) -> Self {
        let mut out = Self::zero();
        for p in 0..n_spin_orbitals {
            out.push_product(Complex64::new(1.0, 0.0), vec![create(p), annihilate(p)]);
        }
        out
    }

    /// Number operator restricted to one spin species.
    pub fn spin_number(n_spatial: usize, spin: Spin) -> Self {
        let mut out = Self::zero();
        for p in 0..n_spatial {
            let i = SpinOrbital { spatial: p, spin }.index();
            out.push_product(Complex64::new(1.0, 0.0), vec![create(i), annihilate(i)]);
        }
        out
    }

    /// `S_z = (N_alpha - N_beta) / 2`.
    pub fn sz(n_spatial: usize) -> Self {
        let mut out = Self::zero();
        for p in 0..n_spatial {
            let a = SpinOrbital::alpha(p).index();
            let b = SpinOrbital::beta(p).index();
            out.push_product(Complex64::new(0.5, 0.0), vec![create(a), annihilate(a)]);
            out.push_product(Complex64::new(-0.5, 0.0), vec![create(b), annihilate(b)]);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[LadderOp], Complex64)> + '_ {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn coefficient(&self, ops: &[LadderOp]) -> Complex64 {
        self.terms.get(ops).copied().unwrap_or_default()
    }

    /// One past the largest spin-orbital index referenced, 0 for scalars.
    pub fn n_modes(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|&(i, _)| i + 1))
            .max()
            .unwrap_or(0)
    }

    /// Largest number of ladder operators in any term.
    pub fn max_rank(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: impl Into<Complex64>) -> Self {
        let factor = factor.into();
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= factor;
        }
        out.prune(PRUNE_TOL);
        out
    }

    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, v| v.norm() > tol);
    }

    /// Adjoint, recanonicalized.
    pub fn hermitian_conjugate(&self) -> Self {
        let mut out = Self::zero();
        for (ops, c) in &self.terms {
            let adj: Vec<LadderOp> = ops
                .iter()
                .rev()
                .map(|&(i, kind)| {
                    let kind = match kind {
                        Ladder::Create => Ladder::Annihilate,
                        Ladder::Annihilate => Ladder::Create,
                    };
                    (i, kind)
                })
                .collect();
            out.push_product(c.conj(), adj);
        }
        out.prune(PRUNE_TOL);
        out
    }

    /// Exchanges alpha and beta labels on every ladder operator.
    pub fn spin_flipped(&self) -> Self {
        let mut out = Self::zero();
        for (ops, c) in &self.terms {
            let flipped = ops.iter().map(|&(i, kind)| (i ^ 1, kind)).collect();
            out.push_product(*c, flipped);
        }
        out.prune(PRUNE_TOL);
        out
    }

    /// True when every coefficient agrees with `other` to within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let diff = self - other;
        diff.terms.values().all(|v| v.norm() <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.hermitian_conjugate(), tol)
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&-&self.hermitian_conjugate(), tol)
    }

    /// Accumulates a product of ladder operators in arbitrary order.
    pub(crate) fn push_product(&mut self, coefficient: Complex64, ops: Vec<LadderOp>) {
        let mut stack = vec![(coefficient, ops)];
        while let Some((c, mut ops)) = stack.pop() {
            if c.norm() == 0.0 {
                continue;
            }
            let mut sign = 1.0;
            let mut dead = false;
            // Bubble toward canonical order; contractions spawn new work items.
            'sort: loop {
                for k in 0..ops.len().saturating_sub(1) {
                    let (a, b) = (ops[k], ops[k + 1]);
                    match (a.1, b.1) {
                        (Ladder::Annihilate, Ladder::Create) => {
                            if a.0 == b.0 {
                                let mut contracted = ops.clone();
                                contracted.drain(k..k + 2);
                                stack.push((c * sign, contracted));
                            }
                            ops.swap(k, k + 1);
                            sign = -sign;
                            continue 'sort;
                        }
                        (Ladder::Create, Ladder::Create) | (Ladder::Annihilate, Ladder::Annihilate)
                            if a.0 == b.0 =>
                        {
                            dead = true;
                            break 'sort;
                        }
                        (Ladder::Create, Ladder::Create) if a.0 < b.0 => {
                            ops.swap(k, k + 1);
                            sign = -sign;
                            continue 'sort;
                        }
                        (Ladder::Annihilate, Ladder::Annihilate) if a.0 > b.0 => {
                            ops.swap(k, k + 1);
                            sign = -sign;
                            continue 'sort;
                        }
                        _ => {}
                    }
                }
                break;
            }
            if !dead {
                *self.terms.entry(ops).or_default() += c * sign;
            }
        }
    }

    fn merged(mut self, other: &Self, factor: f64) -> Self {
        for (ops, c) in &other.terms {
            *self.terms.entry(ops.clone()).or_default() += c * factor;
        }
        self.prune(PRUNE_TOL);
        self
    }
}

impl Add for &FermionOperator {
    type Output = FermionOperator;
    fn add(self, rhs: &FermionOperator) -> FermionOperator {
        self.clone().merged(rhs, 1.0)
    }
}

impl Sub for &FermionOperator {
    type Output = FermionOperator;
    fn sub(self, rhs: &FermionOperator) -> FermionOperator {
        self.clone().merged(rhs, -1.0)
    }
}

impl Neg for &FermionOperator {
    type Output = FermionOperator;
    fn neg(self) -> FermionOperator {
        self.scale(-1.0)
    }
}

impl Mul for &FermionOperator {
    type Output = FermionOperator;
    fn mul(self, rhs: &FermionOperator) -> FermionOperator {
        let mut out = FermionOperator::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let mut ops = a.clone();
                ops.extend_from_slice(b);
                out.push_product(ca * cb, ops);
            }
        }
        out.prune(PRUNE_TOL);
        out
    }
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (ops, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "({},{})", c.re, c.im)?;
            for &(idx, kind) in ops {
                match kind {
                    Ladder::Create => write!(f, " {idx}^")?,
                    Ladder::Annihilate => write!(f, " {idx}")?,
                }
            }
        }
        Ok(())
    }
}

/// `t - t^dagger` for the excitation `from -> to` with unit amplitude.
///
/// `t = a+_{to[0]} a+_{to[1]} a_{from[0]} a_{from[1]}` for doubles and
/// `a+_{to[0]} a_{from[0]}` for singles. Returns the zero operator when `t`
/// is Hermitian.
pub fn make_excitation_generator(from: &[SpinOrbital], to: &[SpinOrbital]) -> Result<FermionOperator> {
    if from.len() != to.len() || from.is_empty() {
        return Err(Error::InvalidInput(format!(
            "excitation needs equally many sources and targets ({} -> {})",
            from.len(),
            to.len()
        )));
    }
    if from.len() > 2 {
        return Err(Error::InvalidInput(format!("excitation rank {} exceeds 2", from.len())));
    }
    if from.len() == 2 && (from[0] == from[1] || to[0] == to[1]) {
        return Err(Error::InvalidInput("repeated spin-orbital in excitation".into()));
    }
    let mut ops: Vec<LadderOp> = to.iter().map(|s| create(s.index())).collect();
    ops.extend(from.iter().map(|s| annihilate(s.index())));
    let t = FermionOperator::term(1.0, &ops);
    Ok(&t - &t.hermitian_conjugate())
}

/// `gen + flip(gen)`; returns `gen` unchanged when it is its own complement.
pub fn spin_complement(gen: &FermionOperator) -> FermionOperator {
    let flipped = gen.spin_flipped();
    if flipped.approx_eq(gen, PRUNE_TOL) {
        gen.clone()
    } else {
        gen + &flipped
    }
}
