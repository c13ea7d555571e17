//! Lie algebras spanned by named operators: decomposition, structure
//! constants, change of basis and Casimir evaluation.

pub mod algebras;
pub mod bch;

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Env, Parser};
use crate::linalg::Matrix;
use crate::scalar::{Bindings, Scalar};
use crate::weyl::{Exponents, WeylPoly};

/// Ordered named operators, linearly independent over the scalars.
#[derive(Clone, Debug)]
pub struct LieBasis {
    names: Vec<String>,
    elements: Vec<WeylPoly>,
    /// Fully reduced rows: `reduced[k]` has coefficient 1 on `pivots[k]`
    /// and 0 on every other pivot.
    reduced: Vec<WeylPoly>,
    pivots: Vec<Exponents>,
    /// `reduced[k] = sum_j transform[(k, j)] * elements[j]`
    transform: Matrix,
}

impl LieBasis {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = (S, WeylPoly)>) -> Result<Self> {
        let (names, elements): (Vec<String>, Vec<WeylPoly>) = elements.into_iter().map(|(n, e)| (n.into(), e)).unzip();
        let n = elements.len();
        let mut reduced = elements.clone();
        let mut transform = Matrix::identity(n);
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            for j in 0..k {
                let c = reduced[k].coeff(&pivots[j]);
                if c.is_zero() {
                    continue;
                }
                reduced[k] = &reduced[k] - &reduced[j].scale(&c);
                for col in 0..n {
                    let v = &transform[(j, col)] * &c;
                    transform[(k, col)] -= &v;
                }
            }
            let Some((&pivot, lead)) = reduced[k].terms().next() else {
                return Err(Error::LinearlyDependent(names[k].clone()));
            };
            let inv = lead.inv()?;
            reduced[k] = reduced[k].scale(&inv);
            for col in 0..n {
                transform[(k, col)] = &transform[(k, col)] * &inv;
            }
            for j in 0..k {
                let c = reduced[j].coeff(&pivot);
                if c.is_zero() {
                    continue;
                }
                reduced[j] = &reduced[j] - &reduced[k].scale(&c);
                for col in 0..n {
                    let v = &transform[(k, col)] * &c;
                    transform[(j, col)] -= &v;
                }
            }
            pivots.push(pivot);
        }
        Ok(LieBasis {
            names,
            elements,
            reduced,
            pivots,
            transform,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> &[WeylPoly] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, name: &str) -> Option<&WeylPoly> {
        self.index_of(name).map(|k| &self.elements[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &WeylPoly)> {
        self.names.iter().map(String::as_str).zip(&self.elements)
    }

    /// Names bound to their operators, for use in expressions.
    pub fn env(&self) -> Env {
        self.iter().map(|(n, e)| (n.to_string(), e.clone())).collect()
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<LieBasis> {
        LieBasis::new(
            self.iter()
                .map(|(n, e)| Ok((n.to_string(), e.substitute(bindings)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Coefficients of `p` on the basis, or the residual outside the span.
    pub fn decompose(&self, p: &WeylPoly) -> Result<Vec<Scalar>> {
        let n = self.len();
        let mut residual = p.clone();
        let mut d = Vec::with_capacity(n);
        for k in 0..n {
            let c = residual.coeff(&self.pivots[k]);
            if !c.is_zero() {
                residual = &residual - &self.reduced[k].scale(&c);
            }
            d.push(c);
        }
        if !residual.is_zero() {
            return Err(Error::NotInSpan {
                residual: residual.to_string(),
            });
        }
        Ok((0..n)
            .map(|j| {
                let mut s = Scalar::zero();
                for (k, dk) in d.iter().enumerate() {
                    if !dk.is_zero() {
                        s += &(dk * &self.transform[(k, j)]);
                    }
                }
                s
            })
            .collect())
    }

    /// Linear combination of the basis elements.
    pub fn combine(&self, coeffs: &[Scalar]) -> WeylPoly {
        let mut out = WeylPoly::zero();
        for (c, e) in coeffs.iter().zip(&self.elements) {
            if !c.is_zero() {
                out = &out + &e.scale(c);
            }
        }
        out
    }

    /// Evaluates a polynomial expression in the basis names.
    pub fn evaluate(&self, expr: &str) -> Result<WeylPoly> {
        let env = self.env();
        Parser::new().with_env(&env).parse(expr)
    }

    /// Pairs whose brackets fail the Jacobi identity, evaluated directly on
    /// the operators.
    pub fn jacobi_violations(&self) -> Result<Vec<(String, String, String)>> {
        let n = self.len();
        let e = &self.elements;
        let mut bad = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let ab = e[a].commutator(&e[b])?;
                for c in b + 1..n {
                    let bc = e[b].commutator(&e[c])?;
                    let ca = e[c].commutator(&e[a])?;
                    let sum = &(&ab.commutator(&e[c])? + &bc.commutator(&e[a])?) + &ca.commutator(&e[b])?;
                    if !sum.is_zero() {
                        bad.push((self.names[a].clone(), self.names[b].clone(), self.names[c].clone()));
                    }
                }
            }
        }
        Ok(bad)
    }

    pub fn all_hermitian(&self) -> bool {
        self.elements.iter().all(WeylPoly::is_hermitian)
    }
}

/// Brackets `[b_i, b_j] = sum_k c[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    names: Vec<String>,
    c: Vec<Vec<Vec<Scalar>>>,
}

impl StructureConstants {
    /// Builds a table from `(left, right, combination)` entries; unlisted
    /// pairs are zero and the table is antisymmetrized.
    pub fn from_entries(names: &[&str], entries: &[(&str, &str, &str)]) -> Result<Self> {
        let n = names.len();
        let mut c = vec![vec![vec![Scalar::zero(); n]; n]; n];
        let find = |s: &str| {
            names
                .iter()
                .position(|x| *x == s)
                .ok_or_else(|| Error::Invalid(format!("unknown generator `{s}`")))
        };
        for (l, r, expr) in entries {
            let (i, j) = (find(l)?, find(r)?);
            let v = parse_combination(expr, names)?;
            c[j][i] = v.iter().map(|x| -x).collect();
            c[i][j] = v;
        }
        Ok(StructureConstants {
            names: names.iter().map(|s| s.to_string()).collect(),
            c,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[Scalar] {
        &self.c[i][j]
    }

    pub fn bracket_by_name(&self, a: &str, b: &str) -> Option<&[Scalar]> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.bracket(i, j))
    }

    /// Number of unordered pairs with a nonzero bracket.
    pub fn nonzero_count(&self) -> usize {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.c[i][j].iter().any(|x| !x.is_zero()))
            .count()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| (&self.c[i][j][k] + &self.c[j][i][k]).is_zero())))
    }

    /// Jacobi identity as an identity of scalars.
    pub fn jacobi_holds(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for out in 0..n {
                        let mut s = Scalar::zero();
                        for m in 0..n {
                            for (a, b, cc) in [(i, j, k), (j, k, i), (k, i, j)] {
                                let x = &self.c[a][b][m];
                                let y = &self.c[m][cc][out];
                                if !x.is_zero() && !y.is_zero() {
                                    s += &(x * y);
                                }
                            }
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn try_map(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Self> {
        let c = self
            .c
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(&f).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StructureConstants {
            names: self.names.clone(),
            c,
        })
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<Self> {
        self.try_map(|x| x.substitute(bindings))
    }

    pub fn kappa_zero_limit(&self) -> Result<Self> {
        self.try_map(Scalar::kappa_zero_limit)
    }

    /// Entries that differ from `other` (matched by name), as
    /// `(left, right)` pairs.
    pub fn differences(&self, other: &StructureConstants) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.c[i][j] != other.c[i][j] {
                    out.push((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        out
    }

    /// Text of the combination `sum_k c[i][j][k] b_k`.
    pub fn format_bracket(&self, i: usize, j: usize) -> String {
        format_combination(&self.c[i][j], &self.names)
    }

    /// One line per nonzero bracket, `[a, b] = ...`.
    pub fn lines(&self) -> Vec<String> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.c[i][j].iter().any(|x| !x.is_zero()) {
                    out.push(format!(
                        "[{}, {}] = {}",
                        self.names[i],
                        self.names[j],
                        self.format_bracket(i, j)
                    ));
                }
            }
        }
        out
    }
}

impl fmt::Display for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Renders `sum c_k name_k` with the canonical scalar printer.
pub fn format_combination(coeffs: &[Scalar], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let (neg, body) = match c.as_signed_atom() {
            Some((neg, b)) if b == "1" => (neg, name.clone()),
            Some((neg, b)) => (neg, format!("{b}*{name}")),
            None => (false, format!("({c})*{name}")),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses a linear combination of abstract generator names.
pub fn parse_combination(expr: &str, names: &[&str]) -> Result<Vec<Scalar>> {
    // each name stands for a distinct monomial of degree 2 or 3, so any
    // product of names lands outside the placeholders
    let placeholders: Vec<Exponents> = (2u8..=3)
        .flat_map(|d| {
            let mut v = Vec::new();
            for a in 0..=d {
                for b in 0..=d - a {
                    for c in 0..=d - a - b {
                        v.push([a, b, c, d - a - b - c]);
                    }
                }
            }
            v
        })
        .collect();
    if names.len() > placeholders.len() {
        return Err(Error::Invalid("too many abstract generators".into()));
    }
    let env: Env = names
        .iter()
        .zip(&placeholders)
        .map(|(n, e)| (n.to_string(), WeylPoly::monomial(*e, Scalar::one())))
        .collect();
    let p = Parser::new().with_env(&env).parse(expr)?;
    let coeffs: Vec<Scalar> = placeholders[..names.len()].iter().map(|e| p.coeff(e)).collect();
    let rebuilt = WeylPoly::from_terms(placeholders.iter().zip(&coeffs).map(|(e, c)| (*e, c.clone())));
    if rebuilt != p {
        return Err(Error::Invalid(format!(
            "`{expr}` is not a linear combination of generators"
        )));
    }
    Ok(coeffs)
}

/// Computes all brackets and decomposes them on the basis.
pub fn structure_constants(basis: &LieBasis) -> Result<StructureConstants> {
    let n = basis.len();
    let e = basis.elements();
    let mut c = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let br = e[i].commutator(&e[j])?;
            let v = basis.decompose(&br).map_err(|err| match err {
                Error::NotInSpan { residual } => Error::ClosureFailure {
                    left: basis.names()[i].clone(),
                    right: basis.names()[j].clone(),
                    residual,
                },
                other => other,
            })?;
            c[j][i] = v.iter().map(|x| -x).collect();
            c[i][j] = v;
        }
    }
    Ok(StructureConstants {
        names: basis.names().to_vec(),
        c,
    })
}

/// New basis `b'_i = sum_j m[(i, j)] b_j`; the matrix must be invertible.
pub fn change_of_basis(basis: &LieBasis, m: &Matrix, names: &[&str]) -> Result<LieBasis> {
    if m.rows() != basis.len() || m.cols() != basis.len() || names.len() != basis.len() {
        return Err(Error::Invalid("change-of-basis dimensions do not match".into()));
    }
    m.inverse().ok_or(Error::SingularChangeOfBasis)?;
    LieBasis::new(
        names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.to_string(), basis.combine(m.row(i))))
            .collect::<Vec<_>>(),
    )
}

/// Substitutes the representation into a polynomial in basis names and
/// normal-orders the result.
pub fn casimir_eval(expr: &str, basis: &LieBasis) -> Result<WeylPoly> {
    basis.evaluate(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn heisenberg_table() {
        let b = LieBasis::new([
            ("x", parse("x_A").unwrap()),
            ("p", parse("p_A").unwrap()),
            ("one", WeylPoly::one()),
        ])
        .unwrap();
        let sc = structure_constants(&b).unwrap();
        assert_eq!(
            sc.bracket(0, 1),
            &[Scalar::zero(), Scalar::zero(), &Scalar::i() * &Scalar::kappa()]
        );
        assert_eq!(sc.nonzero_count(), 1);
        assert!(sc.jacobi_holds());
    }

    #[test]
    fn decompose_cases() {
        let b = algebras::d7();
        assert_eq!(b.decompose(&WeylPoly::zero()).unwrap(), vec![Scalar::zero(); 7]);
        let x3 = parse("x_A^3").unwrap();
        assert!(matches!(b.decompose(&x3), Err(Error::NotInSpan { .. })));
        let combo = parse("2*x_A*p_B - m_B*t*p_A*p_B").unwrap();
        let c = b.decompose(&combo).unwrap();
        assert_eq!(b.combine(&c), combo);
    }

    #[test]
    fn dependent_basis_rejected() {
        let x = parse("x_A").unwrap();
        let r = LieBasis::new([("a", x.clone()), ("b", x.scale(&Scalar::kappa()))]);
        assert!(matches!(r, Err(Error::LinearlyDependent(n)) if n == "b"));
    }

    #[test]
    fn combination_parsing() {
        let v = parse_combination("i*hbar*M - 2*G", &["G", "P", "M"]).unwrap();
        assert_eq!(v[0], Scalar::from_int(-2));
        assert!(v[1].is_zero());
        assert!(parse_combination("G*P", &["G", "P"]).is_err());
    }

    #[test]
    fn singular_change_rejected() {
        let b = algebras::r4();
        let m = Matrix::zero(4, 4);
        assert!(matches!(
            change_of_basis(&b, &m, &["a", "b", "c", "d"]),
            Err(Error::SingularChangeOfBasis)
        ));
        let same = change_of_basis(&b, &Matrix::identity(4), &["P_AB", "K_AB", "D_A", "D_B"]).unwrap();
        assert_eq!(same.elements(), b.elements());
    }
}
