//! The six-generator subalgebra at `t = 0` as a (2+1) Poincare algebra.

use crate::error::Result;
use crate::fixtures;
use crate::lie::{self, algebras, LieBasis, StructureConstants};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::weyl::WeylPoly;

/// `{P_AB, K_AB, D, Q_A, Q_B, T}` at `t = 0` with its structure constants.
pub fn build_sixd_t0() -> Result<(LieBasis, StructureConstants)> {
    let basis = algebras::sixd_t0();
    let sc = lie::structure_constants(&basis)?;
    Ok((basis, sc))
}

/// Applies the change of basis to `{J, K1, K2, P0, P1, P2}`.
pub fn to_poincare() -> Result<LieBasis> {
    let (six, _) = build_sixd_t0()?;
    lie::change_of_basis(&six, &algebras::poincare_matrix(), &fixtures::POINCARE_NAMES)
}

/// Outcome of [`verify_poincare`].
#[derive(Clone, Debug)]
pub struct PoincareReport {
    pub constants: StructureConstants,
    /// Pairs whose bracket differs from the reference table.
    pub differences: Vec<(String, String)>,
    /// The forward and inverse matrices multiply to the identity and the
    /// inverse recovers the six-dimensional basis.
    pub round_trip: bool,
    /// The transformed basis equals the explicit representation.
    pub matches_representation: bool,
    pub hermitian: bool,
}

impl PoincareReport {
    pub fn pass(&self) -> bool {
        self.differences.is_empty() && self.round_trip && self.matches_representation && self.hermitian
    }
}

pub fn verify_poincare() -> Result<PoincareReport> {
    let (six, _) = build_sixd_t0()?;
    let basis = to_poincare()?;
    let constants = lie::structure_constants(&basis)?;
    let reference = StructureConstants::from_entries(&fixtures::POINCARE_NAMES, fixtures::POINCARE)?;
    let differences = constants.differences(&reference);
    let forward = algebras::poincare_matrix();
    let inverse = algebras::poincare_inverse_matrix();
    let back = lie::change_of_basis(&basis, &inverse, &fixtures::SIXD_NAMES)?;
    let round_trip =
        (&forward * &inverse).is_identity() && (&inverse * &forward).is_identity() && back.elements() == six.elements();
    let rep = algebras::poincare_rep();
    Ok(PoincareReport {
        constants,
        differences,
        round_trip,
        matches_representation: basis.elements() == rep.elements(),
        hermitian: rep.all_hermitian(),
    })
}

pub const MASS_CASIMIR: &str = "P0^2 - P1^2 - P2^2";
pub const PAULI_LUBANSKI: &str = "-J*P0 + K1*P2 - K2*P1";

/// Both quadratic Casimirs evaluated in a representation.
pub fn casimirs(basis: &LieBasis) -> Result<(WeylPoly, WeylPoly)> {
    Ok((
        lie::casimir_eval(MASS_CASIMIR, basis)?,
        lie::casimir_eval(PAULI_LUBANSKI, basis)?,
    ))
}

/// Casimirs of the explicit representation; both vanish.
pub fn casimirs_vanish() -> Result<(bool, WeylPoly, WeylPoly)> {
    let (c, w) = casimirs(&algebras::poincare_rep())?;
    Ok((c.is_zero() && w.is_zero(), c, w))
}

/// Mass Casimir with `P0` shifted by the identity.
pub fn shifted_mass_casimir() -> Result<WeylPoly> {
    let rep = algebras::poincare_rep();
    let items: Vec<(String, WeylPoly)> = rep
        .iter()
        .map(|(n, e)| {
            let e = if n == "P0" { e + &WeylPoly::one() } else { e.clone() };
            (n.to_string(), e)
        })
        .collect();
    lie::casimir_eval(MASS_CASIMIR, &LieBasis::new(items)?)
}

/// `P_i -> P_i / c`, `K_i -> K_i / c` on the Poincare basis. Provided for
/// inspection only: the six-dimensional generators do not all scale
/// homogeneously under it.
pub fn nonrelativistic_rescaling(basis: &LieBasis, c: &Scalar) -> Result<LieBasis> {
    let inv = c.inv()?;
    let diag: Vec<Scalar> = basis
        .names()
        .iter()
        .map(|n| {
            if matches!(n.as_str(), "P1" | "P2" | "K1" | "K2") {
                inv.clone()
            } else {
                Scalar::one()
            }
        })
        .collect();
    let names: Vec<&str> = basis.names().iter().map(String::as_str).collect();
    lie::change_of_basis(basis, &Matrix::diagonal(diag), &names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixd_brackets() {
        let (_, sc) = build_sixd_t0().unwrap();
        let reference = StructureConstants::from_entries(&fixtures::SIXD_NAMES, fixtures::SIXD).unwrap();
        assert!(sc.differences(&reference).is_empty(), "{}", sc);
    }

    #[test]
    fn poincare_table_and_round_trip() {
        let r = verify_poincare().unwrap();
        assert!(r.pass(), "{:?}\n{}", r.differences, r.constants);
    }

    #[test]
    fn casimirs_and_negative_control() {
        let (pass, c, w) = casimirs_vanish().unwrap();
        assert!(pass, "C = {c}, W = {w}");
        let shifted = shifted_mass_casimir().unwrap();
        let p0 = algebras::poincare_rep().get("P0").unwrap().clone();
        assert_eq!(shifted, &p0.scale(&Scalar::from_int(2)) + &WeylPoly::one());
    }

    #[test]
    fn rescaling_is_invertible() {
        let b = to_poincare().unwrap();
        let c = Scalar::symbol(crate::Symbol::Alpha);
        let r = nonrelativistic_rescaling(&b, &c).unwrap();
        assert_eq!(r.get("P1").unwrap(), &b.get("P1").unwrap().scale(&c.inv().unwrap()));
        assert_eq!(r.get("J"), b.get("J"));
    }
}
