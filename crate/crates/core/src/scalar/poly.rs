//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are identified by a dense `u16` index; the monomial order is
//! lexicographic with index 0 the most significant variable. Exact division,
//! pseudo-remainders and a recursive primitive-PRS gcd are provided, which is
//! all the rational-function layer needs for canonical forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector with trailing zeros trimmed, so that the derived `Ord`
/// is the lexicographic monomial order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: u16, exp: u16) -> Self {
        if exp == 0 {
            return Self::one();
        }
        let mut v = vec![0; index as usize + 1];
        v[index as usize] = exp;
        Monomial(v)
    }

    fn trim(mut v: Vec<u16>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, index: u16) -> u16 {
        self.0.get(index as usize).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Iterator over `(variable, exponent)` pairs with nonzero exponent.
    pub fn factors(&self) -> impl Iterator<Item = (u16, u16)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i as u16, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        Monomial(v)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &e)| e <= other.0.get(i).copied().unwrap_or(0))
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        let v = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &e)| e - other.0.get(i).copied().unwrap_or(0))
            .collect();
        Monomial::trim(v)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        Monomial::trim((0..n).map(|i| self.0[i].min(other.0[i])).collect())
    }

    pub fn without(&self, index: u16) -> Monomial {
        let mut v = self.0.clone();
        if let Some(e) = v.get_mut(index as usize) {
            *e = 0;
        }
        Monomial::trim(v)
    }

    pub fn max_index(&self) -> Option<u16> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() as u16 - 1)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(index: u16) -> Self {
        Poly::term(Monomial::var(index, 1), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }

    pub fn degree_in(&self, var: u16) -> u16 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, var: u16) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Indices of variables that occur.
    pub fn vars(&self) -> Vec<u16> {
        let mut out: Vec<u16> = Vec::new();
        for m in self.terms.keys() {
            for (v, _) in m.factors() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Coefficients with respect to `var`, keyed by degree.
    pub fn coeffs_in(&self, var: u16) -> BTreeMap<u16, Poly> {
        let mut out: BTreeMap<u16, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(var)).or_default().add_term(m.without(var), c.clone());
        }
        out
    }

    pub fn coeff_in(&self, var: u16, deg: u16) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(var) == deg {
                out.add_term(m.without(var), c.clone());
            }
        }
        out
    }

    /// Set `var` to zero.
    pub fn at_zero(&self, var: u16) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(var) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, var: u16) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                let reduced = m.div(&Monomial::var(var, 1));
                out.add_term(reduced, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if d.is_one() {
            return Some(self.clone());
        }
        let (ld, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some((lr, cr)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !ld.divides(&lr) {
                return None;
            }
            let tm = lr.div(&ld);
            let tc = cr / &lc;
            let t = Poly::term(tm, tc);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `b` with respect to `var`.
    fn prem(&self, b: &Poly, var: u16) -> Poly {
        let db = b.degree_in(var);
        let lcb = b.coeff_in(var, db);
        let mut r = self.clone();
        while !r.is_zero() {
            let dr = r.degree_in(var);
            if dr < db {
                break;
            }
            let lcr = r.coeff_in(var, dr);
            let shift = Monomial::var(var, dr - db);
            r = lcb.mul(&r).sub(&lcr.mul_monomial(&shift).mul(b));
        }
        r
    }

    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    /// Content with respect to `var`: the gcd of the coefficients.
    fn content_in(&self, var: u16) -> Poly {
        self.coeffs_in(var).values().fold(Poly::zero(), |g, c| gcd(&g, c))
    }

    /// Square root, if `self` is the square of a polynomial with positive
    /// leading coefficient.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.leading()?;
        if lm.0.iter().any(|e| e % 2 != 0) || lc.is_negative() {
            return None;
        }
        let root_m = Monomial(lm.0.iter().map(|e| e / 2).collect());
        let root_c = rational_sqrt(lc)?;
        let lead = (root_m, root_c);
        let mut r = Poly::term(lead.0.clone(), lead.1.clone());
        let two_lead = Poly::term(lead.0.clone(), lead.1.clone() * BigRational::from_integer(2.into()));
        for _ in 0..256 {
            let rem = self.sub(&r.mul(&r));
            let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) else {
                return Some(r);
            };
            let (tm, tc) = two_lead.leading().map(|(m, c)| (m.clone(), c.clone()))?;
            if !tm.divides(&m) {
                return None;
            }
            let next = Poly::term(m.div(&tm), c / tc);
            if let Some((nm, _)) = next.leading() {
                // terms of the root strictly decrease in lex order
                if r.terms.keys().next().is_some_and(|low| nm >= low) {
                    return None;
                }
            }
            r = r.add(&next);
        }
        None
    }
}

fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    let n = c.numer();
    let d = c.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Greatest common divisor, normalized to be monic (zero if both are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let g = a.monomial_content().gcd(&b.monomial_content());
        return Poly::term(g, BigRational::one());
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let gm = ma.gcd(&mb);
    let a1 = a
        .div_exact(&Poly::term(ma, BigRational::one()))
        .expect("monomial content divides");
    let b1 = b
        .div_exact(&Poly::term(mb, BigRational::one()))
        .expect("monomial content divides");
    if a1 == b1 || a1.monic() == b1.monic() {
        return a1.mul_monomial(&gm).monic();
    }
    let g = gcd_no_monomial(&a1, &b1);
    g.mul_monomial(&gm).monic()
}

fn gcd_no_monomial(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    // quick divisibility checks
    if b.len() <= a.len() && a.div_exact(b).is_some() {
        return b.monic();
    }
    if a.len() <= b.len() && b.div_exact(a).is_some() {
        return a.monic();
    }
    let va = a.vars();
    let vb = b.vars();
    let x = *va.iter().chain(vb.iter()).min().expect("non-constant");
    let in_a = a.contains_var(x);
    let in_b = b.contains_var(x);
    if !in_b {
        return gcd(&a.content_in(x), b);
    }
    if !in_a {
        return gcd(a, &b.content_in(x));
    }
    let ca = a.content_in(x);
    let cb = b.content_in(x);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, x);
    g.mul(&c).monic()
}

fn primitive_part(p: &Poly, x: u16) -> Poly {
    let c = p.content_in(x);
    p.div_exact(&c).expect("content divides").monic()
}

fn primitive_prs(a: Poly, b: Poly, x: u16) -> Poly {
    let (mut a, mut b) = if a.degree_in(x) >= b.degree_in(x) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = a.prem(&b, x);
        if r.is_zero() {
            return primitive_part(&b, x);
        }
        if r.degree_in(x) == 0 {
            return Poly::one();
        }
        a = b;
        b = primitive_part(&r, x);
    }
}

impl fmt::Display for Poly {
    /// Debug-oriented rendering with `v<index>` variable names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, e) in m.factors() {
                write!(f, "*v{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn x(i: u16) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn lex_order_puts_index_zero_first() {
        let a = Monomial::var(0, 1);
        let b = Monomial::var(1, 5);
        assert!(a > b);
        let c = Monomial::var(0, 1).mul(&Monomial::var(2, 2));
        assert!(c > a);
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = x(0).add(&x(1)).mul(&x(2).sub(&Poly::one()));
        let d = x(0).add(&x(1));
        assert_eq!(a.div_exact(&d).unwrap(), x(2).sub(&Poly::one()));
        assert!(a.div_exact(&x(3)).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let f = x(0).add(&x(1));
        let g = x(1).sub(&x(2).scale(&q(3)));
        let h = x(0).mul(&x(2)).add(&Poly::one());
        let a = f.mul(&g).mul(&f);
        let b = f.mul(&h).mul(&x(1));
        assert_eq!(gcd(&a, &b), f.monic());
        assert_eq!(gcd(&g, &h), Poly::one());
    }

    #[test]
    fn gcd_with_monomial_factor() {
        let a = x(0).mul(&x(0)).mul(&x(1));
        let b = x(0).mul(&x(1).add(&x(2)));
        assert_eq!(gcd(&a, &b), x(0));
    }

    #[test]
    fn sqrt_of_square() {
        let p = x(0).add(&x(1).scale(&q(2))).sub(&Poly::one());
        let sq = p.mul(&p);
        let r = sq.sqrt().unwrap();
        assert_eq!(r.mul(&r), sq);
        assert!(x(0).mul(&x(1)).scale(&q(2)).sqrt().is_none());
        assert!(x(0).mul(&x(0)).add(&Poly::one()).sqrt().is_none());
    }
}
