//! Jordan-Wigner encoding of fermionic operators.
//!
//! `a_p -> (X_p + iY_p)/2 * Z_{p-1} ... Z_0`, with the parity string on the
//! strictly lower qubits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{FermionOperator, Ladder};
use crate::pauli::{phase, PauliOperator, PauliString};

fn ladder_image(index: usize, kind: Ladder) -> [(Complex64, PauliString); 2] {
    let bit = 1u64 << index;
    let parity = bit - 1;
    let x_part = PauliString { x: bit, z: parity };
    let y_part = PauliString { x: bit, z: parity | bit };
    let y_coef = match kind {
        Ladder::Annihilate => Complex64::new(0.0, 0.5),
        Ladder::Create => Complex64::new(0.0, -0.5),
    };
    [(Complex64::new(0.5, 0.0), x_part), (y_coef, y_part)]
}

pub fn jordan_wigner(op: &FermionOperator, n_spin_orbitals: usize) -> Result<PauliOperator> {
    jordan_wigner_pruned(op, n_spin_orbitals, crate::fermion::PRUNE_TOL)
}

/// [`jordan_wigner`] with an explicit prune tolerance for the merged terms.
pub fn jordan_wigner_pruned(op: &FermionOperator, n_spin_orbitals: usize, tol: f64) -> Result<PauliOperator> {
    if n_spin_orbitals > 64 {
        return Err(Error::InvalidInput("at most 64 spin-orbitals supported".into()));
    }
    let mut out = PauliOperator::zero(n_spin_orbitals);
    let mut partial: Vec<(Complex64, PauliString)> = Vec::new();
    let mut next = Vec::new();
    for (ops, coefficient) in op.iter() {
        partial.clear();
        partial.push((coefficient, PauliString::IDENTITY));
        for &(index, kind) in ops {
            if index >= n_spin_orbitals {
                return Err(Error::IndexOutOfRange { index, limit: n_spin_orbitals });
            }
            next.clear();
            for (c, s) in &partial {
                for (c2, s2) in ladder_image(index, kind) {
                    let (prod, k) = s.multiply(&s2);
                    next.push((c * c2 * phase(k), prod));
                }
            }
            std::mem::swap(&mut partial, &mut next);
        }
        for &(c, s) in &partial {
            out.accumulate(c, s);
        }
    }
    out.prune(tol);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::{annihilate, create};
    use crate::pauli::Letter;

    #[test]
    fn lowest_creation_operator() {
        let q = jordan_wigner(&FermionOperator::term(1.0, &[create(0)]), 1).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.coefficient(&PauliString::single(0, Letter::X)), Complex64::new(0.5, 0.0));
        assert_eq!(q.coefficient(&PauliString::single(0, Letter::Y)), Complex64::new(0.0, -0.5));
    }

    #[test]
    fn number_operator_image() {
        let q = jordan_wigner(&FermionOperator::term(1.0, &[create(1), annihilate(1)]), 2).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.coefficient(&PauliString::IDENTITY), Complex64::new(0.5, 0.0));
        assert_eq!(q.coefficient(&PauliString::single(1, Letter::Z)), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn anticommutation_relations() {
        let n = 6;
        let image = |i, k| jordan_wigner(&FermionOperator::term(1.0, &[(i, k)]), n).unwrap();
        for p in 0..n {
            for q in 0..n {
                let ap = image(p, Ladder::Annihilate);
                let aq = image(q, Ladder::Annihilate);
                let adq = image(q, Ladder::Create);
                let anti = &(&ap * &adq) + &(&adq * &ap);
                let expected = if p == q { PauliOperator::identity(n, 1.0) } else { PauliOperator::zero(n) };
                assert_eq!(anti, expected, "{{a_{p}, a+_{q}}}");
                assert!((&(&ap * &aq) + &(&aq * &ap)).is_empty());
            }
        }
    }

    #[test]
    fn out_of_range_index() {
        let op = FermionOperator::term(1.0, &[create(4), annihilate(0)]);
        assert!(matches!(jordan_wigner(&op, 4), Err(Error::IndexOutOfRange { index: 4, limit: 4 })));
    }
}
