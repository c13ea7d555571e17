//! Named operator algebras on the two-pair phase space.
//!
//! Generators are written in the slot variables `x_A, p_A, x_B, p_B` with
//! masses `m_A, m_B`:
//!
//! | name   | operator                                   |
//! |--------|--------------------------------------------|
//! | `P_AB` | `x_A p_B`                                  |
//! | `K_AB` | `(p_A/m_A)(p_B t - m_B x_B)`               |
//! | `D_A`  | `(x_A p_A + p_A x_A)/2`                    |
//! | `D_B`  | `(x_B p_B + p_B x_B)/2`                    |
//! | `Q_A`  | `p_A^2/(2 m_A)`                            |
//! | `Q_B`  | `p_B^2/(2 m_B)`                            |
//! | `T`    | `p_A p_B`                                  |
//! | `D`    | `kappa (m_B/m_A) D_B - hbar (m_B/m_A) D_A` |
//! | `Dstar`| `kappa (m_B/m_A) D_B + hbar (m_B/m_A) D_A` |

use crate::error::{Error, Result};
use crate::expr::{parse, Parser};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::weyl::WeylPoly;

use super::LieBasis;

fn op(src: &str) -> WeylPoly {
    parse(src).expect("built-in operator expression")
}

pub fn p_ab() -> WeylPoly {
    op("x_A*p_B")
}

/// `K_AB` with the boost generator `p_B t - m_B x_B` at the given time.
pub fn k_ab(t: &Scalar) -> WeylPoly {
    let g = &op("p_B").scale(t) - &op("m_B*x_B");
    op("p_A/m_A").multiply(&g).expect("quadratic")
}

pub fn d_a() -> WeylPoly {
    op("(x_A*p_A + p_A*x_A)/2")
}

pub fn d_b() -> WeylPoly {
    op("(x_B*p_B + p_B*x_B)/2")
}

pub fn q_a() -> WeylPoly {
    op("p_A^2/(2*m_A)")
}

pub fn q_b() -> WeylPoly {
    op("p_B^2/(2*m_B)")
}

pub fn t_gen() -> WeylPoly {
    op("p_A*p_B")
}

/// Merged dilation `D`.
pub fn d_merged() -> WeylPoly {
    &d_b().scale(&parse_s("kappa*m_B/m_A")) - &d_a().scale(&parse_s("hbar*m_B/m_A"))
}

/// Central element `D*` of the relational algebra.
pub fn d_star() -> WeylPoly {
    &d_b().scale(&parse_s("kappa*m_B/m_A")) + &d_a().scale(&parse_s("hbar*m_B/m_A"))
}

fn parse_s(src: &str) -> Scalar {
    crate::expr::parse_scalar(src).expect("built-in scalar expression")
}

fn basis(items: Vec<(&str, WeylPoly)>) -> LieBasis {
    LieBasis::new(items).expect("independent built-in generators")
}

/// Relational algebra (boost generator at `t = 0`).
pub fn r4() -> LieBasis {
    basis(vec![
        ("P_AB", p_ab()),
        ("K_AB", k_ab(&Scalar::zero())),
        ("D_A", d_a()),
        ("D_B", d_b()),
    ])
}

/// `{P_AB, K_AB, D}` at `t = 0`.
pub fn su11() -> LieBasis {
    basis(vec![
        ("P_AB", p_ab()),
        ("K_AB", k_ab(&Scalar::zero())),
        ("D", d_merged()),
    ])
}

/// The seven-generator dynamical algebra with symbolic `t`.
pub fn d7() -> LieBasis {
    d7_at(&Scalar::t())
}

pub fn d7_at(t: &Scalar) -> LieBasis {
    basis(vec![
        ("P_AB", p_ab()),
        ("K_AB", k_ab(t)),
        ("D_A", d_a()),
        ("D_B", d_b()),
        ("Q_A", q_a()),
        ("Q_B", q_b()),
        ("T", t_gen()),
    ])
}

/// Six-dimensional subalgebra at `t = 0`.
pub fn sixd_t0() -> LieBasis {
    basis(vec![
        ("P_AB", p_ab()),
        ("K_AB", k_ab(&Scalar::zero())),
        ("D", d_merged()),
        ("Q_A", q_a()),
        ("Q_B", q_b()),
        ("T", t_gen()),
    ])
}

/// One-particle representation of the centrally extended Galilei algebra
/// on particle B.
pub fn galilei_rep() -> LieBasis {
    basis(vec![
        ("G", op("p_B*t - m_B*x_B")),
        ("P", op("-p_B")),
        ("P0", op("p_B^2/(2*m_B)")),
        ("M", op("m_B")),
    ])
}

pub const POINCARE_NAMES: [&str; 6] = ["J", "K1", "K2", "P0", "P1", "P2"];

/// Representation of the (2+1) Poincare generators on the two pairs.
pub fn poincare_rep() -> LieBasis {
    basis(vec![
        ("J", op("(x_A*p_B - p_A*x_B)/(2*rt)")),
        ("K1", op("(x_A*p_B + p_A*x_B)/(2*rt)")),
        (
            "K2",
            op("-(x_A*p_A + p_A*x_A)/(4*kappa) + (x_B*p_B + p_B*x_B)/(4*hbar)"),
        ),
        ("P0", op("hbar/2*p_A^2 + kappa/2*p_B^2")),
        ("P1", op("rt*p_A*p_B")),
        ("P2", op("-hbar/2*p_A^2 + kappa/2*p_B^2")),
    ])
}

fn matrix(rows: &[&[&str]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_s(s)).collect()).collect())
}

/// Change of basis from `{P_AB, K_AB, D, Q_A, Q_B, T}` to
/// `{J, K1, K2, P0, P1, P2}`.
pub fn poincare_matrix() -> Matrix {
    matrix(&[
        &["1/(2*rt)", "m_A/(2*rt*m_B)", "0", "0", "0", "0"],
        &["1/(2*rt)", "-m_A/(2*rt*m_B)", "0", "0", "0", "0"],
        &["0", "0", "m_A/(2*kappa*hbar*m_B)", "0", "0", "0"],
        &["0", "0", "0", "hbar*m_A", "kappa*m_B", "0"],
        &["0", "0", "0", "0", "0", "rt"],
        &["0", "0", "0", "-hbar*m_A", "kappa*m_B", "0"],
    ])
}

/// Inverse change of basis, rows `D, K_AB, P_AB, T, Q_A, Q_B` reordered to
/// the six-dimensional basis order.
pub fn poincare_inverse_matrix() -> Matrix {
    // columns: J, K1, K2, P0, P1, P2
    matrix(&[
        &["rt", "rt", "0", "0", "0", "0"],
        &["rt*m_B/m_A", "-rt*m_B/m_A", "0", "0", "0", "0"],
        &["0", "0", "2*kappa*hbar*m_B/m_A", "0", "0", "0"],
        &["0", "0", "0", "1/(2*hbar*m_A)", "0", "-1/(2*hbar*m_A)"],
        &["0", "0", "0", "1/(2*kappa*m_B)", "0", "1/(2*kappa*m_B)"],
        &["0", "0", "0", "0", "1/rt", "0"],
    ])
}

pub const ALGEBRA_NAMES: [&str; 6] = ["r4", "su11", "d7", "sixd", "galilei", "poincare"];

/// Constructs a named algebra.
pub fn by_name(name: &str) -> Result<LieBasis> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "r4" => r4(),
        "su11" => su11(),
        "d7" => d7(),
        "sixd" | "sixd_t0" => sixd_t0(),
        "galilei" => galilei_rep(),
        "poincare" => poincare_rep(),
        _ => return Err(Error::UnknownAlgebra(name.to_string())),
    })
}

/// Parses `name := expr` definitions into a basis.
pub fn from_definitions(src: &str) -> Result<LieBasis> {
    LieBasis::new(Parser::new().parse_definitions(src)?)
}
