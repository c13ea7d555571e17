//! Affine canonical transformations of the phase space.
//!
//! A [`CanonicalMap`] is a 5x5 matrix acting on the column
//! `(x_A, p_A, x_B, p_B, 1)`. Row `j` holds the image of variable `j` under
//! conjugation `U v U^dagger`, written in the variables of the target
//! chart. Maps compose in application order: conjugating first by `U_1`
//! and then by `U_2` is the matrix product `M_1 * M_2`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Bindings, Scalar, Symbol};
use crate::weyl::{Exponents, PhaseVariable, WeylPoly, DEFAULT_NAMES};

/// Dimension of the affine phase-space column.
pub const DIM: usize = 5;

const UNIT: Exponents = [0; 4];

fn unit_exp(k: usize) -> Exponents {
    let mut e = [0; 4];
    e[k] = 1;
    e
}

/// `blockdiag(kappa J, hbar J)` with `J = [[0, 1], [-1, 0]]`.
pub fn symplectic_form() -> Matrix {
    let mut w = Matrix::zero(4, 4);
    w[(0, 1)] = Scalar::kappa();
    w[(1, 0)] = -&Scalar::kappa();
    w[(2, 3)] = Scalar::hbar();
    w[(3, 2)] = -&Scalar::hbar();
    w
}

/// Generator of a one-parameter conjugation: rows hold the coefficients of
/// `[i lambda X, v]` for each phase-space variable `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointMatrix(pub Matrix);

impl AdjointMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// `N W + W N^T = 0` on the linear block.
    pub fn preserves_form(&self) -> bool {
        let n = linear_block(&self.0);
        let w = symplectic_form();
        (&(&n * &w) + &(&w * &n.transpose())).is_zero()
    }
}

fn linear_block(m: &Matrix) -> Matrix {
    Matrix::from_rows((0..4).map(|r| m.row(r)[..4].to_vec()).collect())
}

/// Coefficients of an operator of degree at most 1 on the affine column.
fn affine_row(p: &WeylPoly) -> Result<Vec<Scalar>> {
    if p.degree() > 1 {
        return Err(Error::NotQuadratic(p.to_string()));
    }
    let mut row: Vec<Scalar> = (0..4).map(|k| p.coeff(&unit_exp(k))).collect();
    row.push(p.coeff(&UNIT));
    Ok(row)
}

/// Adjoint action of `i * prefactor * X` on the phase-space variables.
pub fn adjoint_matrix(x: &WeylPoly, prefactor: &Scalar) -> Result<AdjointMatrix> {
    if x.degree() > 2 {
        return Err(Error::NotQuadratic(x.to_string()));
    }
    let ix = x.scale(&(&Scalar::i() * prefactor));
    let mut rows = Vec::with_capacity(DIM);
    for v in PhaseVariable::ALL {
        rows.push(affine_row(&ix.commutator(&WeylPoly::var(v))?)?);
    }
    rows.push(vec![Scalar::zero(); DIM]);
    Ok(AdjointMatrix(Matrix::from_rows(rows)))
}

/// `exp` of an adjoint matrix that splits into commuting diagonal and
/// nilpotent parts; diagonal entries become formal exponentials.
pub fn exp_matrix(n: &Matrix) -> Result<Matrix> {
    let nilpotent_series = |nn: &Matrix| -> Option<Matrix> {
        if !nn.pow(DIM as u32).is_zero() {
            return None;
        }
        let mut term = Matrix::identity(DIM);
        let mut sum = Matrix::identity(DIM);
        for k in 1..DIM as i64 {
            term = (&term * nn).scale(&Scalar::from_ratio(1, k));
            sum = &sum + &term;
        }
        Some(sum)
    };
    let diag = Matrix::diagonal((0..DIM).map(|k| n[(k, k)].clone()).collect());
    let rest = n - &diag;
    if diag.is_zero() {
        return nilpotent_series(n).ok_or(Error::UnsupportedAdjoint);
    }
    if (&diag * &rest) == (&rest * &diag) {
        if let Some(e_rest) = nilpotent_series(&rest) {
            let e_diag = Matrix::diagonal((0..DIM).map(|k| Scalar::formal_exp(&n[(k, k)])).collect());
            return Ok(&e_diag * &e_rest);
        }
    }
    nilpotent_series(n).ok_or(Error::UnsupportedAdjoint)
}

/// Conjugation by `exp(i * prefactor * X)`.
pub fn exp_adjoint(x: &WeylPoly, prefactor: &Scalar) -> Result<CanonicalMap> {
    let n = adjoint_matrix(x, prefactor)?;
    Ok(CanonicalMap::new(exp_matrix(&n.0)?))
}

/// Affine canonical map on `(x_A, p_A, x_B, p_B, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalMap {
    m: Matrix,
}

/// Outcome of [`CanonicalMap::check_symplectic`].
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticReport {
    pub pass: bool,
    /// `M W M^T - W` on the linear block.
    pub defect: Matrix,
}

impl SymplecticReport {
    /// Whether the defect vanishes after substituting `bindings`.
    pub fn holds_with(&self, bindings: &Bindings) -> Result<bool> {
        Ok(self.defect.substitute(bindings)?.is_zero())
    }
}

impl CanonicalMap {
    pub fn new(m: Matrix) -> Self {
        assert_eq!((m.rows(), m.cols()), (DIM, DIM), "canonical maps are 5x5");
        CanonicalMap { m }
    }

    pub fn identity() -> Self {
        CanonicalMap::new(Matrix::identity(DIM))
    }

    /// Builds a map from the images of `x_A, p_A, x_B, p_B`.
    pub fn from_images(images: &[WeylPoly; 4]) -> Result<Self> {
        let mut rows = images.iter().map(affine_row).collect::<Result<Vec<_>>>()?;
        let mut last = vec![Scalar::zero(); DIM];
        last[4] = Scalar::one();
        rows.push(last);
        Ok(CanonicalMap::new(Matrix::from_rows(rows)))
    }

    /// Parity swap of the first pair: `x_A, p_A -> -x_A, -p_A`.
    pub fn parity_swap() -> Self {
        let mut d = vec![Scalar::one(); DIM];
        d[0] = Scalar::from_int(-1);
        d[1] = Scalar::from_int(-1);
        CanonicalMap::new(Matrix::diagonal(d))
    }

    /// Exchanges the two pairs.
    pub fn pair_exchange() -> Self {
        let mut m = Matrix::zero(DIM, DIM);
        for (r, c) in [(0, 2), (1, 3), (2, 0), (3, 1), (4, 4)] {
            m[(r, c)] = Scalar::one();
        }
        CanonicalMap::new(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn linear_block(&self) -> Matrix {
        linear_block(&self.m)
    }

    /// Image of a phase-space variable as an operator of degree <= 1.
    pub fn image(&self, v: PhaseVariable) -> WeylPoly {
        let row = self.m.row(v.index());
        let mut terms: Vec<(Exponents, Scalar)> = (0..4).map(|k| (unit_exp(k), row[k].clone())).collect();
        terms.push((UNIT, row[4].clone()));
        WeylPoly::from_terms(terms)
    }

    pub fn images(&self) -> [WeylPoly; 4] {
        PhaseVariable::ALL.map(|v| self.image(v))
    }

    /// `self` then `next`.
    pub fn then(&self, next: &CanonicalMap) -> CanonicalMap {
        CanonicalMap::new(&self.m * &next.m)
    }

    pub fn inverse(&self) -> Result<CanonicalMap> {
        Ok(CanonicalMap::new(self.m.inverse().ok_or(Error::DivisionByZero)?))
    }

    /// Conjugates an operator: each variable is replaced by its image and
    /// the result is normal-ordered.
    pub fn apply_to_operator(&self, p: &WeylPoly) -> Result<WeylPoly> {
        let images = self.images();
        let mut powers: Vec<Vec<WeylPoly>> = Vec::with_capacity(4);
        for img in &images {
            let mut pw = vec![WeylPoly::one()];
            for k in 1..=crate::weyl::MAX_DEGREE {
                pw.push(pw[k - 1].multiply(img)?);
            }
            powers.push(pw);
        }
        let mut out = WeylPoly::zero();
        for (e, c) in p.terms() {
            let mut term = WeylPoly::constant(c.clone());
            for (k, &n) in e.iter().enumerate() {
                if n > 0 {
                    term = term.multiply(&powers[k][n as usize])?;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Checks `M W M^T = W` on the linear block.
    pub fn check_symplectic(&self) -> SymplecticReport {
        let l = self.linear_block();
        let w = symplectic_form();
        let defect = &(&(&l * &w) * &l.transpose()) - &w;
        SymplecticReport {
            pass: defect.is_zero(),
            defect,
        }
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<CanonicalMap> {
        Ok(CanonicalMap::new(self.m.substitute(bindings)?))
    }

    pub fn subst1(&self, s: Symbol, v: &Scalar) -> Result<CanonicalMap> {
        Ok(CanonicalMap::new(self.m.try_map(|x| x.subst1(s, v))?))
    }

    /// Entrywise `kappa -> 0`.
    pub fn kappa_zero_limit(&self) -> Result<CanonicalMap> {
        Ok(CanonicalMap::new(self.m.try_map(Scalar::kappa_zero_limit)?))
    }

    /// Entrywise derivative.
    pub fn derivative(&self, s: Symbol) -> CanonicalMap {
        CanonicalMap {
            m: self.m.map(|x| x.derivative(s)),
        }
    }

    /// Rows rendered with the given source and target variable names.
    pub fn action_lines(&self, source: &[&str; 4], target: &[&str; 4]) -> Vec<String> {
        PhaseVariable::ALL
            .iter()
            .map(|&v| format!("{} -> {}", source[v.index()], self.image(v).format_with(target)))
            .collect()
    }

    /// Matrix entries as canonical strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..DIM)
            .map(|r| self.m.row(r).iter().map(ToString::to_string).collect())
            .collect()
    }
}

/// Composition in application order.
pub fn compose(maps: &[CanonicalMap]) -> CanonicalMap {
    maps.iter().fold(CanonicalMap::identity(), |acc, m| acc.then(m))
}

impl fmt::Display for CanonicalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.action_lines(&DEFAULT_NAMES, &DEFAULT_NAMES) {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// A row of the one-parameter subgroup table.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupRow {
    pub name: &'static str,
    pub generator: &'static str,
    pub prefactor: &'static str,
}

/// The seven one-parameter subgroups with their conventional prefactors.
pub const SUBGROUPS: [SubgroupRow; 7] = [
    SubgroupRow {
        name: "P_AB",
        generator: "x_A*p_B",
        prefactor: "1/hbar",
    },
    SubgroupRow {
        name: "K_AB",
        generator: "(p_A/m_A)*(p_B*t - m_B*x_B)",
        prefactor: "1/hbar",
    },
    SubgroupRow {
        name: "D_A",
        generator: "(x_A*p_A + p_A*x_A)/2",
        prefactor: "alpha/kappa",
    },
    SubgroupRow {
        name: "D_B",
        generator: "(x_B*p_B + p_B*x_B)/2",
        prefactor: "beta/hbar",
    },
    SubgroupRow {
        name: "Q_A",
        generator: "p_A^2/(2*m_A)",
        prefactor: "alpha/kappa",
    },
    SubgroupRow {
        name: "Q_B",
        generator: "p_B^2/(2*m_B)",
        prefactor: "alpha/hbar",
    },
    SubgroupRow {
        name: "T",
        generator: "p_A*p_B",
        prefactor: "alpha/hbar",
    },
];

/// Compiles every subgroup row.
pub fn subgroup_table() -> Result<Vec<(&'static SubgroupRow, CanonicalMap)>> {
    SUBGROUPS
        .iter()
        .map(|row| {
            let g = crate::expr::parse(row.generator)?;
            let lambda = crate::expr::parse_scalar(row.prefactor)?;
            Ok((row, exp_adjoint(&g, &lambda)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, parse_scalar};
    use PhaseVariable::*;

    fn map_of(gen: &str, pre: &str) -> CanonicalMap {
        exp_adjoint(&parse(gen).unwrap(), &parse_scalar(pre).unwrap()).unwrap()
    }

    #[test]
    fn translation_images() {
        let up = map_of("x_A*p_B", "1/hbar");
        assert_eq!(up.image(PA), parse("p_A - kappa/hbar*p_B").unwrap());
        assert_eq!(up.image(XB), parse("x_B + x_A").unwrap());
        assert!(up.check_symplectic().pass);
        let n = adjoint_matrix(&parse("x_A*p_B").unwrap(), &parse_scalar("1/hbar").unwrap()).unwrap();
        assert_eq!(n.0[(1, 3)], parse_scalar("-kappa/hbar").unwrap());
        assert!(n.preserves_form());
    }

    #[test]
    fn central_element_has_zero_adjoint() {
        let n = adjoint_matrix(&WeylPoly::one(), &Scalar::one()).unwrap();
        assert!(n.0.is_zero());
        assert!(matches!(
            adjoint_matrix(&parse("x_A^3").unwrap(), &Scalar::one()),
            Err(Error::NotQuadratic(_))
        ));
    }

    #[test]
    fn dilation_uses_formal_exponentials() {
        let d = map_of("(x_A*p_A + p_A*x_A)/2", "alpha/kappa");
        assert_eq!(d.image(XA), parse("exp(alpha)*x_A").unwrap());
        assert_eq!(d.image(PA), parse("exp(-alpha)*p_A").unwrap());
        assert!(d.check_symplectic().pass);
    }

    #[test]
    fn group_law_for_nilpotent_adjoint() {
        let g = parse("p_A*p_B").unwrap();
        let a = exp_adjoint(&g, &parse_scalar("alpha/hbar").unwrap()).unwrap();
        let b = exp_adjoint(&g, &parse_scalar("beta/hbar").unwrap()).unwrap();
        let ab = exp_adjoint(&g, &parse_scalar("(alpha + beta)/hbar").unwrap()).unwrap();
        assert_eq!(a.then(&b), ab);
    }

    #[test]
    fn inverse_and_non_symplectic() {
        let m = map_of("(p_A/m_A)*(p_B*t - m_B*x_B)", "1/hbar");
        assert!(m.then(&m.inverse().unwrap()).matrix().is_identity());
        let mut s = Matrix::identity(DIM);
        s[(0, 0)] = Scalar::from_int(2);
        assert!(!CanonicalMap::new(s).check_symplectic().pass);
    }

    #[test]
    fn conjugating_operators() {
        let up = map_of("x_A*p_B", "1/hbar");
        assert_eq!(
            up.apply_to_operator(&parse("x_B").unwrap()).unwrap(),
            parse("x_B + x_A").unwrap()
        );
        let q = parse("p_B^2/(2*m_B)").unwrap();
        assert_eq!(CanonicalMap::identity().apply_to_operator(&q).unwrap(), q);
        // boost: p_B -> p_B + (m_B/m_A) p_A
        let ug = map_of("(p_A/m_A)*(p_B*t - m_B*x_B)", "1/hbar");
        let expect = parse("(p_B + m_B/m_A*p_A)^2/(2*m_B)").unwrap();
        assert_eq!(ug.apply_to_operator(&q).unwrap(), expect);
    }
}
