/// Conversion factor used for every reported kcal/mol value.
pub const HARTREE_TO_KCAL: f64 = 627.509474;

/// Chemical accuracy, 1 kcal/mol, in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.0 / HARTREE_TO_KCAL;

pub fn to_kcal(hartree: f64) -> f64 {
    hartree * HARTREE_TO_KCAL
}
