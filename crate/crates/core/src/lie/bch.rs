//! Baker-Campbell-Hausdorff products truncated by degree.
//!
//! Elements are graded by a formal scaling parameter `e`: component `d-1`
//! of a [`Graded`] holds the coefficient of `e^d`. Products of exponentials
//! `exp(e X_1) ... exp(e X_n)` are combined into a single `exp(Z(e))` with
//! `Z` correct through the requested order.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weyl::WeylPoly;

use super::LieBasis;

/// Highest supported order.
pub const MAX_ORDER: usize = 4;

/// Components of degree `1..=order`.
pub type Graded = Vec<WeylPoly>;

fn check_order(order: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "BCH order must lie in 1..={MAX_ORDER}, got {order}"
        )))
    }
}

fn degree_one(x: &WeylPoly, order: usize) -> Graded {
    let mut g = vec![WeylPoly::zero(); order];
    g[0] = x.clone();
    g
}

fn add(a: &Graded, b: &Graded) -> Graded {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(a: &Graded, c: Scalar) -> Graded {
    a.iter().map(|x| x.scale(&c)).collect()
}

/// Truncated commutator of graded elements.
pub fn graded_commutator(a: &Graded, b: &Graded) -> Result<Graded> {
    let order = a.len();
    let mut out = vec![WeylPoly::zero(); order];
    for i in 0..order {
        for j in 0..order - i - 1 {
            if a[i].is_zero() || b[j].is_zero() {
                continue;
            }
            // degrees i+1 and j+1 land on degree i+j+2, index i+j+1
            out[i + j + 1] = &out[i + j + 1] + &a[i].commutator(&b[j])?;
        }
    }
    Ok(out)
}

/// `log(exp(X) exp(Y))` through fourth order.
pub fn bch_pair(x: &Graded, y: &Graded) -> Result<Graded> {
    let xy = graded_commutator(x, y)?;
    let x_xy = graded_commutator(x, &xy)?;
    let y_xy = graded_commutator(y, &xy)?;
    let y_x_xy = graded_commutator(y, &x_xy)?;
    let mut z = add(x, y);
    z = add(&z, &scale(&xy, Scalar::from_ratio(1, 2)));
    z = add(&z, &scale(&x_xy, Scalar::from_ratio(1, 12)));
    z = add(&z, &scale(&y_xy, Scalar::from_ratio(-1, 12)));
    z = add(&z, &scale(&y_x_xy, Scalar::from_ratio(-1, 24)));
    Ok(z)
}

/// `log(exp(e X_1) ... exp(e X_n))` through `order`, factors in printed
/// order.
pub fn bch_product(factors: &[WeylPoly], order: usize) -> Result<Graded> {
    check_order(order)?;
    let mut z = vec![WeylPoly::zero(); order];
    for x in factors {
        z = bch_pair(&z, &degree_one(x, order))?;
    }
    Ok(z)
}

/// Decomposes every component on the basis; fails with `NotInSpan` if a
/// nested commutator leaves the algebra.
pub fn closure_coordinates(z: &Graded, basis: &LieBasis) -> Result<Vec<Vec<Scalar>>> {
    z.iter().map(|c| basis.decompose(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn commuting_factors_add() {
        let a = parse("i*x_A").unwrap();
        let b = parse("i*x_B").unwrap();
        let z = bch_product(&[a.clone(), b.clone()], 4).unwrap();
        assert_eq!(z[0], &a + &b);
        assert!(z[1..].iter().all(WeylPoly::is_zero));
    }

    #[test]
    fn heisenberg_pair_terminates_at_second_order() {
        let x = parse("i*x_A").unwrap();
        let p = parse("i*p_A").unwrap();
        let z = bch_product(&[x.clone(), p.clone()], 4).unwrap();
        // [i x, i p] = -(i kappa)
        assert_eq!(z[1], parse("-i*kappa/2").unwrap());
        assert!(z[2].is_zero() && z[3].is_zero());
    }

    #[test]
    fn third_order_term_matches_hand_expansion() {
        let x = parse("i*x_A").unwrap();
        let y = parse("i*p_A^2").unwrap();
        let z = bch_product(&[x.clone(), y.clone()], 3).unwrap();
        let xy = x.commutator(&y).unwrap();
        assert_eq!(z[1], xy.scale(&Scalar::from_ratio(1, 2)));
        let expect = &x.commutator(&xy).unwrap().scale(&Scalar::from_ratio(1, 12))
            - &y.commutator(&xy).unwrap().scale(&Scalar::from_ratio(1, 12));
        assert_eq!(z[2], expect);
        assert!(bch_product(&[x], 5).is_err());
    }
}
