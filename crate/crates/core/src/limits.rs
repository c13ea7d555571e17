//! The `kappa -> 0` limit in which the frame particle becomes classical.
//!
//! In the limit `x_A, p_A` commute with everything and are carried as the
//! coefficient symbols `cx_A, cp_A`; only the `B` pair stays an operator.

use std::fmt;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::lie::{self, algebras, LieBasis, StructureConstants};
use crate::scalar::{Scalar, Symbol};
use crate::weyl::{Exponents, PhaseVariable, WeylPoly};

/// Operator on the `B` pair with coefficients that may depend on the
/// classical values `cx_A, cp_A`. `kappa` does not appear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalWeylPoly(WeylPoly);

impl ClassicalWeylPoly {
    /// Wraps an operator that only involves the `B` pair and no `kappa`.
    pub fn new(p: WeylPoly) -> Result<Self> {
        if p.terms().any(|(e, _)| e[0] != 0 || e[1] != 0) {
            return Err(Error::Invalid(format!("`{p}` still involves the frame pair")));
        }
        if p.depends_on(Symbol::Kappa) {
            return Err(Error::Invalid(format!("`{p}` still depends on kappa")));
        }
        Ok(ClassicalWeylPoly(p))
    }

    /// Parses an expression in `cx_A, cp_A, x_B, p_B`.
    pub fn parse(src: &str) -> Result<Self> {
        ClassicalWeylPoly::new(crate::expr::parse(src)?)
    }

    pub fn as_weyl(&self) -> &WeylPoly {
        &self.0
    }

    pub fn into_weyl(self) -> WeylPoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn multiply(&self, other: &ClassicalWeylPoly) -> Result<ClassicalWeylPoly> {
        Ok(ClassicalWeylPoly(self.0.multiply(&other.0)?))
    }

    /// Multiplies the coefficients by a scalar, which may involve the
    /// classical values.
    pub fn scale(&self, c: &Scalar) -> ClassicalWeylPoly {
        ClassicalWeylPoly(self.0.scale(c))
    }
}

impl fmt::Display for ClassicalWeylPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn classical_symbols() -> [Symbol; 2] {
    [Symbol::ClassicalX, Symbol::ClassicalP]
}

/// `kappa -> 0` on the coefficients, with `x_A, p_A` demoted to `cx_A,
/// cp_A`. Normal-ordered input makes the demotion exact; ordering terms
/// carry a factor `kappa` and drop out.
pub fn classical_limit(p: &WeylPoly) -> Result<ClassicalWeylPoly> {
    let cx = Scalar::symbol(Symbol::ClassicalX);
    let cp = Scalar::symbol(Symbol::ClassicalP);
    let mut terms: Vec<(Exponents, Scalar)> = Vec::new();
    for (e, c) in p.terms() {
        let c = c.kappa_zero_limit()?;
        if c.is_zero() {
            continue;
        }
        let c = &(&c * &cx.pow(e[0] as u32)) * &cp.pow(e[1] as u32);
        terms.push(([0, 0, e[2], e[3]], c));
    }
    ClassicalWeylPoly::new(WeylPoly::from_terms(terms))
}

/// Replaces `cx_A^a cp_A^b` in the coefficients by the operator
/// `x_A^a p_A^b` (normal order) or `p_A^b x_A^a` (anti-normal order).
pub fn quantize(f: &ClassicalWeylPoly, anti_normal: bool) -> Result<WeylPoly> {
    let x = WeylPoly::var(PhaseVariable::XA);
    let p = WeylPoly::var(PhaseVariable::PA);
    let mut out = WeylPoly::zero();
    for (e, c) in f.0.terms() {
        let split = c
            .split_polynomial(&classical_symbols())
            .ok_or_else(|| Error::Invalid(format!("`{c}` is not polynomial in cx_A, cp_A")))?;
        let b_part = WeylPoly::monomial(*e, Scalar::one());
        for (k, coeff) in split {
            let (xa, pa) = (x.pow(k[0] as u32)?, p.pow(k[1] as u32)?);
            let a_part = if anti_normal {
                pa.multiply(&xa)?
            } else {
                xa.multiply(&pa)?
            };
            out = &out + &a_part.multiply(&b_part)?.scale(&coeff);
        }
    }
    Ok(out)
}

/// `lim_{kappa->0} [f, g] / (i kappa)` for classical polynomials of the
/// frame pair. Both quantization orders are computed and must agree.
pub fn poisson_bracket(f: &ClassicalWeylPoly, g: &ClassicalWeylPoly) -> Result<ClassicalWeylPoly> {
    let ikappa = &Scalar::i() * &Scalar::kappa();
    let mut results = Vec::with_capacity(2);
    for anti in [false, true] {
        let br = quantize(f, anti)?.commutator(&quantize(g, anti)?)?;
        let scaled = br.try_map_coeffs(|c| c.checked_div(&ikappa))?;
        results.push(classical_limit(&scaled)?);
    }
    if results[0] != results[1] {
        return Err(Error::Invalid(format!(
            "bracket depends on ordering: {} vs {}",
            results[0], results[1]
        )));
    }
    Ok(results.swap_remove(0))
}

/// Classical counterparts of `P_AB`, `K_AB` (at symbolic `t`) and `Q_B`.
pub fn counterparts() -> Result<Vec<(&'static str, ClassicalWeylPoly)>> {
    Ok(vec![
        ("P_AB", classical_limit(&algebras::p_ab())?),
        ("K_AB", classical_limit(&algebras::k_ab(&Scalar::t()))?),
        ("Q_B", classical_limit(&algebras::q_b())?),
    ])
}

/// Result of rebuilding the Galilei algebra from the classical limit.
#[derive(Clone, Debug)]
pub struct GalileiReport {
    pub basis: LieBasis,
    pub constants: StructureConstants,
    /// Bracket pairs that differ from the reference table.
    pub differences: Vec<(String, String)>,
    /// `2 M P0 - P^2` in the representation.
    pub casimir: WeylPoly,
    /// The rebuilt generators equal the one-particle representation.
    pub matches_representation: bool,
}

impl GalileiReport {
    pub fn pass(&self) -> bool {
        self.differences.is_empty() && self.casimir.is_zero() && self.matches_representation
    }
}

/// `G = (m_A/cp_A) K^c`, `P = -(1/cx_A) P^c`, `P0 = Q_B^c`, `M = m_B`;
/// checks the centrally extended Galilei brackets and the vanishing
/// Casimir.
pub fn galilei_recovery() -> Result<GalileiReport> {
    let c = counterparts()?;
    let find = |n: &str| {
        c.iter()
            .find(|(k, _)| *k == n)
            .map(|(_, v)| v.clone())
            .expect("counterpart")
    };
    let cx = Scalar::symbol(Symbol::ClassicalX);
    let cp = Scalar::symbol(Symbol::ClassicalP);
    let g = find("K_AB").scale(&Scalar::mass(crate::qrf::Particle::A).checked_div(&cp)?);
    let p = find("P_AB").scale(&(-&cx.inv()?));
    let p0 = find("Q_B");
    let m = WeylPoly::constant(Scalar::mass(crate::qrf::Particle::B));
    let basis = LieBasis::new(vec![
        ("G", g.into_weyl()),
        ("P", p.into_weyl()),
        ("P0", p0.into_weyl()),
        ("M", m),
    ])?;
    let constants = lie::structure_constants(&basis)?;
    let reference = StructureConstants::from_entries(&fixtures::GALILEI_NAMES, fixtures::GALILEI)?;
    let differences = constants.differences(&reference);
    let casimir = lie::casimir_eval("2*M*P0 - P^2", &basis)?;
    let rep = algebras::galilei_rep();
    let matches_representation = basis.elements() == rep.elements();
    Ok(GalileiReport {
        basis,
        constants,
        differences,
        casimir,
        matches_representation,
    })
}

/// `kappa -> 0` of the `{P_AB, K_AB, D}` structure constants.
pub fn su11_contraction() -> Result<StructureConstants> {
    lie::structure_constants(&algebras::su11())?.kappa_zero_limit()
}

/// Exactly one nonzero bracket whose value is central.
pub fn is_heisenberg(sc: &StructureConstants) -> bool {
    let n = sc.len();
    let nonzero: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| sc.bracket(i, j).iter().any(|x| !x.is_zero()))
        .collect();
    let [(i, j)] = nonzero.as_slice() else {
        return false;
    };
    // the value z = sum_k c_k b_k must commute with every generator
    let z = sc.bracket(*i, *j);
    (0..n).all(|l| {
        (0..n).all(|m| {
            let mut acc = Scalar::zero();
            for (k, ck) in z.iter().enumerate() {
                acc += &(ck * &sc.bracket(k, l)[m]);
            }
            acc.is_zero()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn counterparts_of_relational_generators() {
        assert_eq!(
            classical_limit(&algebras::p_ab()).unwrap(),
            ClassicalWeylPoly::parse("cx_A*p_B").unwrap()
        );
        assert_eq!(classical_limit(&WeylPoly::one()).unwrap().into_weyl(), WeylPoly::one());
        assert!(matches!(
            classical_limit(&parse("x_A/kappa").unwrap()),
            Err(Error::PoleAtKappaZero(_))
        ));
        // ordering term i kappa/2 of D_A disappears
        assert_eq!(
            classical_limit(&algebras::d_a()).unwrap(),
            ClassicalWeylPoly::parse("cx_A*cp_A").unwrap()
        );
    }

    #[test]
    fn poisson_brackets() {
        let x = ClassicalWeylPoly::parse("cx_A").unwrap();
        let p = ClassicalWeylPoly::parse("cp_A").unwrap();
        let x2 = ClassicalWeylPoly::parse("cx_A^2").unwrap();
        assert_eq!(poisson_bracket(&x, &p).unwrap().into_weyl(), WeylPoly::one());
        assert!(poisson_bracket(&x, &x).unwrap().is_zero());
        assert_eq!(
            poisson_bracket(&x2, &p).unwrap(),
            ClassicalWeylPoly::parse("2*cx_A").unwrap()
        );
    }

    #[test]
    fn galilei_from_the_limit() {
        let r = galilei_recovery().unwrap();
        assert!(r.pass(), "{:?} {}", r.differences, r.casimir);
    }

    #[test]
    fn su11_contracts_to_heisenberg() {
        let sc = su11_contraction().unwrap();
        assert_eq!(sc.nonzero_count(), 1);
        assert!(is_heisenberg(&sc));
        assert!(!is_heisenberg(&lie::structure_constants(&algebras::su11()).unwrap()));
    }
}
