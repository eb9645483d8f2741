//! Spin-complemented single and double excitation pools.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{make_excitation_generator, spin_complement, FermionOperator, LadderOp, Spin, SpinOrbital};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcitationKind {
    Single,
    Double,
}

/// Which excitations are admitted into the pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolRestriction {
    /// Generalized `p,q -> r,s` over all orbitals.
    GeneralizedPqrs,
    /// Occupied-to-virtual only, relative to the closed-shell reference.
    HfRestrictedIjab,
}

/// Scaling applied to a generator and its spin-flipped partner.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `A + flip(A)`
    #[default]
    Raw,
    /// `(A + flip(A)) / sqrt(2)`; self-complementary generators are left as is.
    InvSqrt2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolSpec {
    pub n_spatial: usize,
    pub n_occ_spatial: usize,
    pub restriction: PoolRestriction,
    #[serde(default)]
    pub normalization: Normalization,
}

impl PoolSpec {
    pub fn new(n_spatial: usize, n_occ_spatial: usize, restriction: PoolRestriction) -> Self {
        PoolSpec { n_spatial, n_occ_spatial, restriction, normalization: Normalization::Raw }
    }
}

/// One anti-Hermitian, spin-complemented pool generator.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolOperator {
    pub id: usize,
    pub generator: FermionOperator,
    pub label: String,
    pub kind: ExcitationKind,
    /// Source spin-orbitals of the representative excitation.
    pub from: Vec<SpinOrbital>,
    /// Target spin-orbitals of the representative excitation.
    pub to: Vec<SpinOrbital>,
}

fn label(from: &[SpinOrbital], to: &[SpinOrbital]) -> String {
    let join = |s: &[SpinOrbital]| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    format!("τ({} → {})", join(from), join(to))
}

/// Sign-insensitive identity of a generator, used for deduplication.
fn dedupe_key(op: &FermionOperator) -> Vec<(Vec<LadderOp>, i64, i64)> {
    let sign = op
        .iter()
        .next()
        .map(|(_, c)| if c.re < 0.0 || (c.re == 0.0 && c.im < 0.0) { -1.0 } else { 1.0 })
        .unwrap_or(1.0);
    op.iter()
        .map(|(ops, c)| {
            let q = |x: f64| (x * sign * 1e9).round() as i64;
            (ops.to_vec(), q(c.re), q(c.im))
        })
        .collect()
}

fn sz_of(orbs: &[SpinOrbital]) -> i32 {
    orbs.iter().map(|s| if s.spin == Spin::Alpha { 1 } else { -1 }).sum()
}

/// Candidate excitations in lexicographic order: singles, then doubles.
fn candidates(spec: &PoolSpec) -> Vec<(ExcitationKind, Vec<SpinOrbital>, Vec<SpinOrbital>)> {
    let m = spec.n_spatial;
    let n_so = 2 * m;
    let mut out = Vec::new();
    match spec.restriction {
        PoolRestriction::GeneralizedPqrs => {
            for p in 0..m {
                for q in p + 1..m {
                    out.push((ExcitationKind::Single, vec![SpinOrbital::alpha(p)], vec![SpinOrbital::alpha(q)]));
                }
            }
            let pairs: Vec<(usize, usize)> =
                (0..n_so).flat_map(|a| (a + 1..n_so).map(move |b| (a, b))).collect();
            for (k, &(p, q)) in pairs.iter().enumerate() {
                for &(r, s) in &pairs[k + 1..] {
                    let from = [SpinOrbital::from_index(p), SpinOrbital::from_index(q)];
                    let to = [SpinOrbital::from_index(r), SpinOrbital::from_index(s)];
                    if sz_of(&from) == sz_of(&to) {
                        out.push((ExcitationKind::Double, from.to_vec(), to.to_vec()));
                    }
                }
            }
        }
        PoolRestriction::HfRestrictedIjab => {
            let n_occ = spec.n_occ_spatial;
            for i in 0..n_occ {
                for a in n_occ..m {
                    out.push((ExcitationKind::Single, vec![SpinOrbital::alpha(i)], vec![SpinOrbital::alpha(a)]));
                }
            }
            let occ: Vec<usize> = (0..2 * n_occ).collect();
            let vir: Vec<usize> = (2 * n_occ..n_so).collect();
            for (x, &i) in occ.iter().enumerate() {
                for &j in &occ[x + 1..] {
                    for (y, &a) in vir.iter().enumerate() {
                        for &b in &vir[y + 1..] {
                            let from = [SpinOrbital::from_index(i), SpinOrbital::from_index(j)];
                            let to = [SpinOrbital::from_index(a), SpinOrbital::from_index(b)];
                            if sz_of(&from) == sz_of(&to) {
                                out.push((ExcitationKind::Double, from.to_vec(), to.to_vec()));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Builds the deduplicated, spin-complemented, S_z-conserving pool.
///
/// Ids are assigned in build order, which is also the lexical growth order.
pub fn build_pool(spec: &PoolSpec) -> Result<Vec<PoolOperator>> {
    if spec.n_spatial == 0 {
        return Err(Error::InvalidInput("pool needs at least one spatial orbital".into()));
    }
    if spec.restriction == PoolRestriction::HfRestrictedIjab
        && (spec.n_occ_spatial == 0 || spec.n_occ_spatial >= spec.n_spatial)
    {
        return Err(Error::InvalidInput(format!(
            "restricted pool needs 1 <= n_occ < n_spatial (n_occ={}, n_spatial={})",
            spec.n_occ_spatial, spec.n_spatial
        )));
    }
    let mut seen = BTreeSet::new();
    let mut pool = Vec::new();
    for (kind, from, to) in candidates(spec) {
        let base = make_excitation_generator(&from, &to)?;
        if base.is_zero() {
            continue;
        }
        let mut generator = spin_complement(&base);
        if generator.is_zero() {
            continue;
        }
        if spec.normalization == Normalization::InvSqrt2 && generator != base {
            generator = generator.scale(std::f64::consts::FRAC_1_SQRT_2);
        }
        if !seen.insert(dedupe_key(&generator)) {
            continue;
        }
        pool.push(PoolOperator { id: pool.len(), label: label(&from, &to), generator, kind, from, to });
    }
    Ok(pool)
}

/// Spin-orbital UCCSD amplitude count before spin-complement pairing.
pub fn spin_orbital_uccsd_count(n_spatial: usize, n_occ_spatial: usize) -> usize {
    let spec = PoolSpec::new(n_spatial, n_occ_spatial, PoolRestriction::HfRestrictedIjab);
    let singles = 2 * n_occ_spatial * (n_spatial - n_occ_spatial);
    let doubles = candidates(&spec).iter().filter(|c| c.0 == ExcitationKind::Double).count();
    singles + doubles
}
