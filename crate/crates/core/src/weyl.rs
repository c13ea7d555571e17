//! Normal-ordered polynomials in two canonical pairs with
//! `[x_A, p_A] = i*kappa` and `[x_B, p_B] = i*hbar`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Bindings, Scalar, Symbol};

/// Maximum total degree of a [`WeylPoly`].
pub const MAX_DEGREE: usize = 4;

/// One of the four phase-space variables, in normal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PhaseVariable {
    XA,
    PA,
    XB,
    PB,
}

/// Which particle slot of the pair a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    A,
    B,
}

impl PhaseVariable {
    pub const ALL: [PhaseVariable; 4] = [Self::XA, Self::PA, Self::XB, Self::PB];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> PhaseVariable {
        Self::ALL[i]
    }

    pub fn slot(self) -> Slot {
        match self {
            Self::XA | Self::PA => Slot::A,
            Self::XB | Self::PB => Slot::B,
        }
    }

    pub fn is_position(self) -> bool {
        matches!(self, Self::XA | Self::XB)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::XA => "x_A",
            Self::PA => "p_A",
            Self::XB => "x_B",
            Self::PB => "p_B",
        }
    }

    pub fn from_name(name: &str) -> Option<PhaseVariable> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }
}

impl Slot {
    /// The commutator constant of the slot: kappa for A, hbar for B.
    pub fn constant(self) -> Scalar {
        match self {
            Slot::A => Scalar::kappa(),
            Slot::B => Scalar::hbar(),
        }
    }
}

/// Exponents of `x_A^a p_A^b x_B^c p_B^d`.
pub type Exponents = [u8; 4];

fn degree_of(e: &Exponents) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

/// Normal-ordered polynomial `sum c * x_A^a p_A^b x_B^c p_B^d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeylPoly {
    terms: BTreeMap<Exponents, Scalar>,
}

impl WeylPoly {
    pub fn zero() -> Self {
        WeylPoly::default()
    }

    pub fn one() -> Self {
        WeylPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        WeylPoly::monomial([0; 4], c)
    }

    pub fn var(v: PhaseVariable) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        WeylPoly::monomial(e, Scalar::one())
    }

    pub fn monomial(e: Exponents, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        WeylPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, Scalar)>) -> Self {
        let mut out = WeylPoly::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    fn add_term(&mut self, e: Exponents, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponents) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Coefficient of the identity.
    pub fn constant_part(&self) -> Scalar {
        self.coeff(&[0; 4])
    }

    /// The polynomial is a multiple of the identity.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(degree_of).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> WeylPoly {
        if c.is_zero() {
            return WeylPoly::zero();
        }
        WeylPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (*e, x * c))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    /// Applies a coefficient map, dropping terms that become zero.
    pub fn try_map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<WeylPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.insert(*e, v);
            }
        }
        Ok(WeylPoly { terms })
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> WeylPoly {
        self.try_map_coeffs(|c| Ok(f(c))).expect("infallible map")
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<WeylPoly> {
        self.try_map_coeffs(|c| c.substitute(bindings))
    }

    pub fn subst1(&self, s: Symbol, value: &Scalar) -> Result<WeylPoly> {
        self.try_map_coeffs(|c| c.subst1(s, value))
    }

    /// Coefficientwise derivative with respect to a symbol.
    pub fn derivative(&self, s: Symbol) -> WeylPoly {
        self.map_coeffs(|c| c.derivative(s))
    }

    pub fn depends_on(&self, s: Symbol) -> bool {
        self.terms.values().any(|c| c.depends_on(s))
    }

    /// Normal-ordered product without the degree cap.
    pub fn mul_uncapped(&self, other: &WeylPoly) -> WeylPoly {
        let mut out = WeylPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let c = c1 * c2;
                for (e, k) in monomial_product(e1, e2) {
                    out.add_term(e, &(&c * &k));
                }
            }
        }
        out
    }

    /// Normal-ordered product; the result must have degree at most 4.
    pub fn multiply(&self, other: &WeylPoly) -> Result<WeylPoly> {
        check_degree(self.mul_uncapped(other))
    }

    /// `[self, other]`; the result must have degree at most 4.
    pub fn commutator(&self, other: &WeylPoly) -> Result<WeylPoly> {
        check_degree(&self.mul_uncapped(other) - &other.mul_uncapped(self))
    }

    pub fn pow(&self, n: u32) -> Result<WeylPoly> {
        let mut out = WeylPoly::one();
        for _ in 0..n {
            out = out.multiply(self)?;
        }
        Ok(out)
    }

    /// Hermitian conjugate: reverse factor order and conjugate coefficients.
    pub fn dagger(&self) -> WeylPoly {
        let mut out = WeylPoly::zero();
        for (e, c) in &self.terms {
            // (x_A^a p_A^b x_B^c p_B^d)^† = p_A^b x_A^a p_B^d x_B^c
            let pa = [0, e[1], 0, 0];
            let xa = [e[0], 0, 0, 0];
            let pb = [0, 0, 0, e[3]];
            let xb = [0, 0, e[2], 0];
            let a = sector_product(&pa, &xa);
            let b = sector_product(&pb, &xb);
            let cc = c.conj();
            for (ea, ka) in &a {
                for (eb, kb) in &b {
                    let mut m = *ea;
                    m[2] = eb[2];
                    m[3] = eb[3];
                    out.add_term(m, &(&cc * &(ka * kb)));
                }
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self == &self.dagger()
    }

    /// The operator restricted to monomials whose exponents satisfy `keep`.
    pub fn filter(&self, keep: impl Fn(&Exponents) -> bool) -> WeylPoly {
        WeylPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }
}

fn check_degree(p: WeylPoly) -> Result<WeylPoly> {
    let d = p.degree();
    if d > MAX_DEGREE {
        Err(Error::DegreeOverflow(d))
    } else {
        Ok(p)
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

/// Normal-orders `p^b x^e` in one slot:
/// `sum_k C(b,k) C(e,k) k! (-i c)^k x^(e-k) p^(b-k)` with `c` the slot constant.
fn reorder(b: u8, e: u8, slot: Slot) -> Vec<(u8, u8, Scalar)> {
    let minus_ic = -&(&Scalar::i() * &slot.constant());
    (0..=b.min(e))
        .map(|k| {
            let n = binomial(b as u32, k as u32) * binomial(e as u32, k as u32) * factorial(k as u32);
            (e - k, b - k, &Scalar::from_int(n) * &minus_ic.pow(k as u32))
        })
        .collect()
}

/// Product of two normal-ordered monomials, as normal-ordered terms.
fn monomial_product(e1: &Exponents, e2: &Exponents) -> Vec<(Exponents, Scalar)> {
    let a = sector_product(&[e1[0], e1[1], 0, 0], &[e2[0], e2[1], 0, 0]);
    let b = sector_product(&[0, 0, e1[2], e1[3]], &[0, 0, e2[2], e2[3]]);
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (ea, ka) in &a {
        for (eb, kb) in &b {
            out.push(([ea[0], ea[1], eb[2], eb[3]], ka * kb));
        }
    }
    out
}

/// Product within a single slot; the arguments have zero exponents in the
/// other slot.
fn sector_product(e1: &Exponents, e2: &Exponents) -> Vec<(Exponents, Scalar)> {
    let (slot, ix, ip) = if e1[2] + e1[3] + e2[2] + e2[3] > 0 {
        (Slot::B, 2, 3)
    } else {
        (Slot::A, 0, 1)
    };
    reorder(e1[ip], e2[ix], slot)
        .into_iter()
        .map(|(x, p, k)| {
            let mut e = [0; 4];
            e[ix] = e1[ix] + x;
            e[ip] = p + e2[ip];
            (e, k)
        })
        .collect()
}

impl Add<&WeylPoly> for &WeylPoly {
    type Output = WeylPoly;
    fn add(self, o: &WeylPoly) -> WeylPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub<&WeylPoly> for &WeylPoly {
    type Output = WeylPoly;
    fn sub(self, o: &WeylPoly) -> WeylPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl Neg for &WeylPoly {
    type Output = WeylPoly;
    fn neg(self) -> WeylPoly {
        self.map_coeffs(|c| -c)
    }
}

impl Add for WeylPoly {
    type Output = WeylPoly;
    fn add(self, o: WeylPoly) -> WeylPoly {
        &self + &o
    }
}

impl Sub for WeylPoly {
    type Output = WeylPoly;
    fn sub(self, o: WeylPoly) -> WeylPoly {
        &self - &o
    }
}

impl From<PhaseVariable> for WeylPoly {
    fn from(v: PhaseVariable) -> Self {
        WeylPoly::var(v)
    }
}

impl From<Scalar> for WeylPoly {
    fn from(c: Scalar) -> Self {
        WeylPoly::constant(c)
    }
}

/// Renders a monomial with caller-chosen variable names.
pub(crate) fn format_monomial(e: &Exponents, names: &[&str; 4]) -> String {
    let mut parts = Vec::new();
    for (k, &n) in e.iter().enumerate() {
        match n {
            0 => {}
            1 => parts.push(names[k].to_string()),
            n => parts.push(format!("{}^{}", names[k], n)),
        }
    }
    parts.join("*")
}

impl WeylPoly {
    /// Canonical text with the given names for `x_A, p_A, x_B, p_B`.
    pub fn format_with(&self, names: &[&str; 4]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        // highest degree first, then normal order
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| degree_of(b).cmp(&degree_of(a)).then(b.cmp(a)));
        let single = keys.len() == 1;
        let mut out = String::new();
        for (k, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono = format_monomial(e, names);
            let (neg, body) = match c.as_signed_atom() {
                Some((neg, body)) => {
                    let body = match (body.as_str(), mono.is_empty()) {
                        ("1", false) => mono,
                        (_, true) => body,
                        _ => format!("{body}*{mono}"),
                    };
                    (neg, body)
                }
                None if mono.is_empty() && single => (false, c.to_string()),
                None if mono.is_empty() => (false, format!("({c})")),
                None => (false, format!("({c})*{mono}")),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

pub(crate) const DEFAULT_NAMES: [&str; 4] = ["x_A", "p_A", "x_B", "p_B"];

impl fmt::Display for WeylPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&DEFAULT_NAMES))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PhaseVariable::*;

    fn v(x: PhaseVariable) -> WeylPoly {
        WeylPoly::var(x)
    }

    fn ik() -> Scalar {
        &Scalar::i() * &Scalar::kappa()
    }

    fn ih() -> Scalar {
        &Scalar::i() * &Scalar::hbar()
    }

    #[test]
    fn base_relations() {
        let xp = v(XA).multiply(&v(PA)).unwrap();
        let px = v(PA).multiply(&v(XA)).unwrap();
        assert_eq!(px, &xp - &WeylPoly::constant(ik()));
        assert_eq!(v(XA).commutator(&v(PA)).unwrap(), WeylPoly::constant(ik()));
        assert_eq!(v(XB).commutator(&v(PB)).unwrap(), WeylPoly::constant(ih()));
        assert!(v(XA).commutator(&v(XB)).unwrap().is_zero());
        assert!(v(PA).commutator(&v(PB)).unwrap().is_zero());
        assert_eq!(
            v(XA).multiply(&v(PB)).unwrap(),
            WeylPoly::monomial([1, 0, 0, 1], Scalar::one())
        );
    }

    #[test]
    fn square_of_xp_by_hand() {
        // x p x p = x (x p - i h) p = x^2 p^2 - i h x p
        let xp = v(XB).multiply(&v(PB)).unwrap();
        let sq = xp.multiply(&xp).unwrap();
        let expect = &WeylPoly::monomial([0, 0, 2, 2], Scalar::one()) - &WeylPoly::monomial([0, 0, 1, 1], ih());
        assert_eq!(sq, expect);
    }

    #[test]
    fn higher_reorder_matches_iteration() {
        // p^2 x^2 computed step by step: p^2 x^2 = x^2 p^2 - 4 i k x p - 2 k^2
        let p2 = v(PA).pow(2).unwrap();
        let x2 = v(XA).pow(2).unwrap();
        let got = p2.multiply(&x2).unwrap();
        let k = Scalar::kappa();
        let expect = WeylPoly::from_terms([
            ([2, 2, 0, 0], Scalar::one()),
            ([1, 1, 0, 0], -&(&Scalar::from_int(4) * &ik())),
            ([0, 0, 0, 0], -&(&Scalar::from_int(2) * &(&k * &k))),
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn dagger_examples() {
        let xp = WeylPoly::monomial([1, 1, 0, 0], Scalar::one());
        assert_eq!(xp.dagger(), &xp - &WeylPoly::constant(ik()));
        let half = Scalar::from_ratio(1, 2);
        let da = (&v(XA).multiply(&v(PA)).unwrap() + &v(PA).multiply(&v(XA)).unwrap()).scale(&half);
        assert!(da.is_hermitian());
        assert_eq!(WeylPoly::constant(ik()).dagger(), WeylPoly::constant(-&ik()));
    }

    #[test]
    fn degree_cap() {
        let x3 = v(XA).pow(3).unwrap();
        assert_eq!(x3.multiply(&v(PA).pow(2).unwrap()), Err(Error::DegreeOverflow(5)));
        // [x^3, p^2] has degree 3
        let c = x3.commutator(&v(PA).pow(2).unwrap()).unwrap();
        assert_eq!(c.degree(), 3);
    }

    #[test]
    fn display() {
        let p = &WeylPoly::monomial([1, 0, 0, 1], -&ik()) + &WeylPoly::constant(Scalar::from_ratio(1, 2));
        assert_eq!(p.to_string(), "-i*kappa*x_A*p_B + 1/2");
        assert_eq!(WeylPoly::zero().to_string(), "0");
    }
}
