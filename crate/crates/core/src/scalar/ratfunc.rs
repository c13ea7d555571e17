use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{gcd, Poly};
use crate::error::{Error, Result};

/// Rational function `num / den` over the rationals in canonical form:
/// `gcd(num, den) = 1` and `den` monic in lex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_poly(num: Poly) -> Self {
        RatFunc { num, den: Poly::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn var(index: u16) -> Self {
        RatFunc::from_poly(Poly::var(index))
    }

    /// Builds and canonicalizes `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(RatFunc::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::new(num, self.den.clone()).expect("nonzero denominator");
        }
        let g = gcd(&self.den, &other.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        let den = d1.mul(&other.den);
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&other.num));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RatFunc::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    /// Partial derivative with respect to a variable index (symbols only,
    /// no chain rule through formal exponentials).
    pub fn partial(&self, var: u16) -> RatFunc {
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return RatFunc::new(dn, self.den.clone()).expect("nonzero denominator");
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        RatFunc::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    pub fn contains_var(&self, var: u16) -> bool {
        self.num.contains_var(var) || self.den.contains_var(var)
    }

    pub fn vars(&self) -> Vec<u16> {
        let mut v = self.num.vars();
        for x in self.den.vars() {
            if !v.contains(&x) {
                v.push(x);
            }
        }
        v.sort_unstable();
        v
    }

    /// Value at `var = 0`, or `None` when the denominator vanishes there.
    pub fn at_zero(&self, var: u16) -> Option<RatFunc> {
        let den = self.den.at_zero(var);
        if den.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.num.at_zero(var), den).expect("nonzero denominator"))
    }

    pub fn sqrt(&self) -> Option<RatFunc> {
        let n = self.num.sqrt()?;
        let d = self.den.sqrt()?;
        Some(RatFunc::normalized(n, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u16) -> RatFunc {
        RatFunc::var(i)
    }

    #[test]
    fn cancels_common_factors() {
        // (x0^2 + x0 x1) / x0 = x0 + x1
        let num = Poly::var(0).mul(&Poly::var(0)).add(&Poly::var(0).mul(&Poly::var(1)));
        let r = RatFunc::new(num, Poly::var(0)).unwrap();
        assert_eq!(r, x(0).add(&x(1)));
    }

    #[test]
    fn field_inverse() {
        let a = x(0).add(&x(1).scale(&BigRational::from_integer(3.into())));
        let one = a.mul(&a.inv().unwrap());
        assert!(one.is_one());
        assert_eq!(RatFunc::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn derivative_of_quotient() {
        // d/dx0 (1/x0) = -1/x0^2
        let r = RatFunc::one().div(&x(0)).unwrap();
        let d = r.partial(0);
        let expect = RatFunc::one().div(&x(0).mul(&x(0))).unwrap().neg();
        assert_eq!(d, expect);
    }
}
