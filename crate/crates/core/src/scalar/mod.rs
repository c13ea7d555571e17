//! Exact coefficient field.
//!
//! A [`Scalar`] is an element of `F(rt)(i)` where `F` is the field of rational
//! functions over Q in the commuting [`Symbol`]s, `rt` is the adjoined root
//! with `rt^2 = hbar*kappa`, and `i^2 = -1`. Each element is stored as four
//! canonical rational functions (the coordinates on `1, rt, i, i*rt`), which
//! makes structural equality coincide with mathematical equality.

mod poly;
mod ratfunc;
mod symbol;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

pub use poly::{Monomial, Poly};
pub use ratfunc::RatFunc;
pub use symbol::{exponent_of, Symbol};

use crate::error::{Error, Result};

/// Symbol substitutions.
pub type Bindings = BTreeMap<Symbol, Scalar>;
/// Numeric values for symbols.
pub type NumBindings = BTreeMap<Symbol, f64>;

/// `rational + rt * radical` with both parts in `F`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct Surd {
    rational: RatFunc,
    radical: RatFunc,
}

fn hbar_kappa() -> RatFunc {
    RatFunc::var(Symbol::Hbar.index()).mul(&RatFunc::var(Symbol::Kappa.index()))
}

impl Surd {
    fn from_rf(r: RatFunc) -> Surd {
        Surd {
            rational: r,
            radical: RatFunc::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }

    fn add(&self, o: &Surd) -> Surd {
        Surd {
            rational: self.rational.add(&o.rational),
            radical: self.radical.add(&o.radical),
        }
    }

    fn neg(&self) -> Surd {
        Surd {
            rational: self.rational.neg(),
            radical: self.radical.neg(),
        }
    }

    fn sub(&self, o: &Surd) -> Surd {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Surd) -> Surd {
        if self.is_zero() || o.is_zero() {
            return Surd::default();
        }
        if self.radical.is_zero() && o.radical.is_zero() {
            return Surd::from_rf(self.rational.mul(&o.rational));
        }
        let (a, b, c, d) = (&self.rational, &self.radical, &o.rational, &o.radical);
        let bd = b.mul(d);
        Surd {
            rational: a.mul(c).add(&bd.mul(&hbar_kappa())),
            radical: a.mul(d).add(&b.mul(c)),
        }
    }

    fn inv(&self) -> Result<Surd> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.radical.is_zero() {
            return Ok(Surd::from_rf(self.rational.inv()?));
        }
        let (a, b) = (&self.rational, &self.radical);
        let norm = a.mul(a).sub(&b.mul(b).mul(&hbar_kappa()));
        let inv = norm.inv()?;
        Ok(Surd {
            rational: a.mul(&inv),
            radical: b.neg().mul(&inv),
        })
    }
}

/// Exact Gaussian-rational function in the commuting symbols, extended by
/// `rt = sqrt(hbar*kappa)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: Surd,
    im: Surd,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rf(RatFunc::one())
    }

    pub fn i() -> Self {
        Scalar {
            re: Surd::default(),
            im: Surd::from_rf(RatFunc::one()),
        }
    }

    /// `rt = sqrt(hbar*kappa)`.
    pub fn rt() -> Self {
        Scalar::from_surd(Surd {
            rational: RatFunc::zero(),
            radical: RatFunc::one(),
        })
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::from_rf(RatFunc::constant(q))
    }

    pub fn from_rf(r: RatFunc) -> Self {
        Scalar::from_surd(Surd::from_rf(r))
    }

    fn from_surd(s: Surd) -> Self {
        Scalar {
            re: s,
            im: Surd::default(),
        }
    }

    pub fn symbol(s: Symbol) -> Self {
        Scalar::from_rf(RatFunc::var(s.index()))
    }

    pub fn hbar() -> Self {
        Scalar::symbol(Symbol::Hbar)
    }

    pub fn kappa() -> Self {
        Scalar::symbol(Symbol::Kappa)
    }

    pub fn t() -> Self {
        Scalar::symbol(Symbol::Time)
    }

    pub fn mass(p: crate::qrf::Particle) -> Self {
        Scalar::symbol(Symbol::mass(p))
    }

    /// Formal exponential `exp(c)`. Registered pairs satisfy
    /// `exp(c) * exp(-c) = 1`.
    pub fn formal_exp(c: &Scalar) -> Scalar {
        if c.is_zero() {
            return Scalar::one();
        }
        let (j, inverted) = symbol::intern_exp(c);
        let e = Scalar::symbol(Symbol::Exp(j));
        if inverted {
            e.inv().expect("formal exponential is nonzero")
        } else {
            e
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &Scalar::one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Rational constant value, if the scalar has no symbols, `i` or `rt`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.im.is_zero() || !self.re.radical.is_zero() {
            return None;
        }
        self.re.rational.as_constant()
    }

    /// The scalar as an element of `F`, if it has no `i` or `rt` parts.
    pub fn as_rf(&self) -> Option<&RatFunc> {
        if self.im.is_zero() && self.re.radical.is_zero() {
            Some(&self.re.rational)
        } else {
            None
        }
    }

    fn components(&self) -> [(&'static str, &RatFunc); 4] {
        [
            ("", &self.re.rational),
            ("rt", &self.re.radical),
            ("i", &self.im.rational),
            ("i*rt", &self.im.radical),
        ]
    }

    fn components_mut(&mut self) -> [&mut RatFunc; 4] {
        [
            &mut self.re.rational,
            &mut self.re.radical,
            &mut self.im.rational,
            &mut self.im.radical,
        ]
    }

    /// Complex conjugate (`i -> -i`); all symbols are real.
    pub fn conj(&self) -> Scalar {
        Scalar {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(Scalar::from_surd(self.re.inv()?));
        }
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let inv = norm.inv()?;
        Ok(Scalar {
            re: self.re.mul(&inv),
            im: self.im.neg().mul(&inv),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        let mut out = self.clone();
        for c in out.components_mut() {
            *c = c.scale(q);
        }
        out
    }

    /// Variable indices occurring anywhere (excluding `rt`).
    fn var_indices(&self) -> BTreeSet<u16> {
        self.components().iter().flat_map(|(_, r)| r.vars()).collect()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.var_indices().into_iter().map(Symbol::from_index).collect()
    }

    pub fn has_radical(&self) -> bool {
        !self.re.radical.is_zero() || !self.im.radical.is_zero()
    }

    /// Does the value depend on `s`, directly or through a formal exponential
    /// or through `rt`?
    pub fn depends_on(&self, s: Symbol) -> bool {
        if matches!(s, Symbol::Hbar | Symbol::Kappa) && self.has_radical() {
            return true;
        }
        self.symbols().into_iter().any(|x| {
            x == s
                || match x {
                    Symbol::Exp(j) => exponent_of(j).depends_on(s),
                    _ => false,
                }
        })
    }

    /// Simultaneous substitution of symbols, followed by canonicalization.
    ///
    /// `rt` follows `hbar*kappa`: it is kept when that product is unchanged,
    /// and otherwise replaced by the exact root of the substituted product.
    /// Formal exponentials whose exponent depends on a bound symbol are
    /// re-interned with the substituted exponent.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Scalar> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut ctx = SubstContext::new(bindings);
        if !self.symbols().iter().any(|s| ctx.touches(*s))
            && !(self.has_radical() && (bindings.contains_key(&Symbol::Hbar) || bindings.contains_key(&Symbol::Kappa)))
        {
            return Ok(self.clone());
        }
        let mut out = Scalar::zero();
        for (k, (_, r)) in self.components().into_iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let unit = match k {
                0 => Scalar::one(),
                1 => ctx.rt()?,
                2 => Scalar::i(),
                _ => &Scalar::i() * &ctx.rt()?,
            };
            let v = ctx.eval_rf(r)?;
            out += &(&v * &unit);
        }
        Ok(out)
    }

    pub fn subst1(&self, s: Symbol, value: &Scalar) -> Result<Scalar> {
        let mut b = Bindings::new();
        b.insert(s, value.clone());
        self.substitute(&b)
    }

    /// Value at `kappa = 0`. Fails when any part has a pole there.
    pub fn kappa_zero_limit(&self) -> Result<Scalar> {
        let k = Symbol::Kappa.index();
        let pole = || Error::PoleAtKappaZero(self.to_string());
        let re = self.re.rational.at_zero(k).ok_or_else(pole)?;
        let im = self.im.rational.at_zero(k).ok_or_else(pole)?;
        // rt * b -> 0 provided b is regular at kappa = 0
        self.re.radical.at_zero(k).ok_or_else(pole)?;
        self.im.radical.at_zero(k).ok_or_else(pole)?;
        Ok(Scalar {
            re: Surd::from_rf(re),
            im: Surd::from_rf(im),
        })
    }

    /// Total derivative with respect to `s`, including the chain rule through
    /// formal exponentials and `rt`.
    pub fn derivative(&self, s: Symbol) -> Scalar {
        let units = [Scalar::one(), Scalar::rt(), Scalar::i(), &Scalar::i() * &Scalar::rt()];
        let mut out = Scalar::zero();
        for ((name, r), unit) in self.components().into_iter().zip(units) {
            if r.is_zero() {
                continue;
            }
            let mut d = rf_derivative(r, s);
            if name.contains("rt") {
                // d rt / d hbar = rt / (2 hbar), likewise for kappa
                let half = Scalar::from_ratio(1, 2);
                match s {
                    Symbol::Hbar => {
                        d += &(&(&half * &Scalar::from_rf(r.clone())) * &Scalar::hbar().inv().expect("nonzero"))
                    }
                    Symbol::Kappa => {
                        d += &(&(&half * &Scalar::from_rf(r.clone())) * &Scalar::kappa().inv().expect("nonzero"))
                    }
                    _ => {}
                }
            }
            out += &(&d * &unit);
        }
        out
    }

    /// Numeric value. `rt` evaluates to `sqrt(hbar*kappa)`, formal
    /// exponentials to the exponential of their exponent.
    pub fn eval(&self, values: &NumBindings) -> Result<Complex64> {
        let mut cache: BTreeMap<u16, Complex64> = BTreeMap::new();
        let mut total = Complex64::new(0.0, 0.0);
        let rt = || -> Result<Complex64> {
            let h = values
                .get(&Symbol::Hbar)
                .ok_or_else(|| Error::UnboundSymbol("hbar".into()))?;
            let k = values
                .get(&Symbol::Kappa)
                .ok_or_else(|| Error::UnboundSymbol("kappa".into()))?;
            Ok(Complex64::new(h * k, 0.0).sqrt())
        };
        let units = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ];
        for (k, (_, r)) in self.components().into_iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let unit = match k {
                1 => rt()?,
                3 => Complex64::new(0.0, 1.0) * rt()?,
                _ => units[k],
            };
            let n = eval_poly(r.num(), values, &mut cache)?;
            let d = eval_poly(r.den(), values, &mut cache)?;
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::PoleAtSubstitution(self.to_string()));
            }
            total += unit * n / d;
        }
        Ok(total)
    }

    /// Real numeric value; fails when the imaginary part is not negligible.
    pub fn eval_real(&self, values: &NumBindings) -> Result<f64> {
        let z = self.eval(values)?;
        if z.im.abs() > 1e-9 * (1.0 + z.re.abs()) {
            return Err(Error::NotReal(format!("{z}")));
        }
        Ok(z.re)
    }

    /// Splits a scalar that is polynomial in the given symbols into
    /// coefficients keyed by their exponents. Fails if a denominator
    /// involves them.
    pub fn split_polynomial(&self, vars: &[Symbol]) -> Option<BTreeMap<Vec<u16>, Scalar>> {
        let idx: Vec<u16> = vars.iter().map(|s| s.index()).collect();
        let units = [Scalar::one(), Scalar::rt(), Scalar::i(), &Scalar::i() * &Scalar::rt()];
        let mut out: BTreeMap<Vec<u16>, Scalar> = BTreeMap::new();
        for ((_, r), unit) in self.components().into_iter().zip(units) {
            if r.is_zero() {
                continue;
            }
            if idx.iter().any(|&v| r.den().contains_var(v)) {
                return None;
            }
            let den_inv = RatFunc::new(Poly::one(), r.den().clone()).ok()?;
            for (m, c) in r.num().terms() {
                let key: Vec<u16> = idx.iter().map(|&v| m.exp(v)).collect();
                let rest = idx.iter().fold(m.clone(), |acc, &v| acc.without(v));
                let coeff = Scalar::from_rf(RatFunc::from_poly(Poly::term(rest, c.clone())).mul(&den_inv));
                let entry = out.entry(key).or_default();
                *entry += &(&coeff * &unit);
            }
        }
        out.retain(|_, v| !v.is_zero());
        Some(out)
    }

    /// Exact square root of a scalar in `F` with a square numerator and
    /// denominator; the root with positive leading coefficient is chosen.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        let r = self.as_rf()?;
        Some(Scalar::from_rf(r.sqrt()?))
    }

    /// Renders as `(negative, body)` when the scalar is a single signed
    /// product, for juxtaposition in front of an operator monomial.
    pub fn as_signed_atom(&self) -> Option<(bool, String)> {
        let mut nonzero = self.components().into_iter().filter(|(_, r)| !r.is_zero());
        let (unit, r) = nonzero.next()?;
        if nonzero.next().is_some() || !r.num().is_monomial() {
            return None;
        }
        let (m, c) = r.num().leading().expect("monomial");
        let mut parts: Vec<String> = Vec::new();
        if !c.abs().is_one() {
            parts.push(format_rational(&c.abs()));
        }
        if !unit.is_empty() {
            parts.push(unit.to_string());
        }
        parts.extend(monomial_factors(m));
        let mut body = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        };
        if !r.den().is_one() {
            body.push('/');
            body.push_str(&format_den(r.den()));
        }
        Some((c.is_negative(), body))
    }
}

fn rf_derivative(r: &RatFunc, s: Symbol) -> Scalar {
    let mut d = Scalar::from_rf(r.partial(s.index()));
    for v in r.vars() {
        if let Symbol::Exp(j) = Symbol::from_index(v) {
            let dc = exponent_of(j).derivative(s);
            if dc.is_zero() {
                continue;
            }
            // d/ds f(E) = f_E * E * dc/ds
            let e = Scalar::symbol(Symbol::Exp(j));
            let fe = Scalar::from_rf(r.partial(v));
            d += &(&(&fe * &e) * &dc);
        }
    }
    d
}

fn eval_poly(p: &Poly, values: &NumBindings, cache: &mut BTreeMap<u16, Complex64>) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (m, c) in p.terms() {
        let mut term = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        for (v, e) in m.factors() {
            let x = match cache.get(&v) {
                Some(x) => *x,
                None => {
                    let s = Symbol::from_index(v);
                    let x = match s {
                        Symbol::Exp(j) => match values.get(&s) {
                            Some(x) => Complex64::new(*x, 0.0),
                            None => exponent_of(j).eval(values)?.exp(),
                        },
                        _ => Complex64::new(*values.get(&s).ok_or_else(|| Error::UnboundSymbol(s.to_string()))?, 0.0),
                    };
                    cache.insert(v, x);
                    x
                }
            };
            term *= x.powu(e as u32);
        }
        total += term;
    }
    Ok(total)
}

struct SubstContext<'a> {
    bindings: &'a Bindings,
    values: BTreeMap<u16, Scalar>,
    rt: Option<Scalar>,
}

impl<'a> SubstContext<'a> {
    fn new(bindings: &'a Bindings) -> Self {
        SubstContext {
            bindings,
            values: BTreeMap::new(),
            rt: None,
        }
    }

    fn touches(&self, s: Symbol) -> bool {
        if self.bindings.contains_key(&s) {
            return true;
        }
        match s {
            Symbol::Exp(j) => {
                let e = exponent_of(j);
                e.symbols().into_iter().any(|x| self.touches(x))
                    || (e.has_radical()
                        && (self.bindings.contains_key(&Symbol::Hbar) || self.bindings.contains_key(&Symbol::Kappa)))
            }
            _ => false,
        }
    }

    fn rt(&mut self) -> Result<Scalar> {
        if let Some(rt) = &self.rt {
            return Ok(rt.clone());
        }
        let h = self.value(Symbol::Hbar.index())?;
        let k = self.value(Symbol::Kappa.index())?;
        let prod = &h * &k;
        let rt = if prod == &Scalar::hbar() * &Scalar::kappa() {
            Scalar::rt()
        } else {
            prod.sqrt_exact()
                .ok_or_else(|| Error::UnrepresentableRoot(prod.to_string()))?
        };
        self.rt = Some(rt.clone());
        Ok(rt)
    }

    fn value(&mut self, v: u16) -> Result<Scalar> {
        if let Some(x) = self.values.get(&v) {
            return Ok(x.clone());
        }
        let s = Symbol::from_index(v);
        let x = match self.bindings.get(&s) {
            Some(x) => x.clone(),
            None => match s {
                Symbol::Exp(j) if self.touches(s) => {
                    let c = exponent_of(j).substitute(self.bindings)?;
                    Scalar::formal_exp(&c)
                }
                _ => Scalar::symbol(s),
            },
        };
        self.values.insert(v, x.clone());
        Ok(x)
    }

    fn eval_poly(&mut self, p: &Poly) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (m, c) in p.terms() {
            let mut term = Scalar::from_rational(c.clone());
            for (v, e) in m.factors() {
                term = &term * &self.value(v)?.pow(e as u32);
            }
            total += &term;
        }
        Ok(total)
    }

    fn eval_rf(&mut self, r: &RatFunc) -> Result<Scalar> {
        let n = self.eval_poly(r.num())?;
        let d = self.eval_poly(r.den())?;
        if d.is_zero() {
            return Err(Error::PoleAtSubstitution(
                Scalar::from_rf(r.den().clone().into_rf()).to_string(),
            ));
        }
        n.checked_div(&d)
    }
}

trait IntoRf {
    fn into_rf(self) -> RatFunc;
}

impl IntoRf for Poly {
    fn into_rf(self) -> RatFunc {
        RatFunc::from_poly(self)
    }
}

// ---------------------------------------------------------------- operators

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::from_surd(self.re.mul(&o.re));
        }
        Scalar {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Symbol> for Scalar {
    fn from(s: Symbol) -> Self {
        Scalar::symbol(s)
    }
}

// ---------------------------------------------------------------- printing

fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn monomial_factors(m: &Monomial) -> Vec<String> {
    m.factors()
        .map(|(v, e)| {
            let s = Symbol::from_index(v).to_string();
            if e == 1 {
                s
            } else {
                format!("{s}^{e}")
            }
        })
        .collect()
}

fn format_poly(p: &Poly) -> String {
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut parts = Vec::new();
        if !c.abs().is_one() || m.is_one() {
            parts.push(format_rational(&c.abs()));
        }
        parts.extend(monomial_factors(m));
        out.push_str(&parts.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn format_den(d: &Poly) -> String {
    let simple = d.is_monomial() && d.leading().is_some_and(|(m, c)| c.is_one() && m.factors().count() == 1);
    if simple {
        format_poly(d)
    } else {
        format!("({})", format_poly(d))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (unit, r) in self.components() {
            if r.is_zero() {
                continue;
            }
            let (neg, body) = if r.num().is_monomial() {
                let single = Scalar::from_rf(r.clone());
                let (neg, body) = single.as_signed_atom().expect("monomial numerator");
                let body = if unit.is_empty() {
                    body
                } else if body == "1" {
                    unit.to_string()
                } else if body.starts_with(|c: char| c.is_ascii_digit()) {
                    // keep the rational coefficient in front: 3/2*i*...
                    match body.split_once('*') {
                        Some((coef, rest)) if !coef.contains('/') || !rest.is_empty() => {
                            format!("{coef}*{unit}*{rest}")
                        }
                        _ => format!("{body}*{unit}"),
                    }
                } else {
                    format!("{unit}*{body}")
                };
                (neg, body)
            } else {
                let mut body = String::new();
                if !unit.is_empty() {
                    body.push_str(unit);
                    body.push('*');
                }
                body.push('(');
                body.push_str(&format_poly(r.num()));
                body.push(')');
                if !r.den().is_one() {
                    body.push('/');
                    body.push_str(&format_den(r.den()));
                }
                (false, body)
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            f.write_str(&body)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: Symbol) -> Scalar {
        Scalar::symbol(x)
    }

    fn div(a: &Scalar, b: &Scalar) -> Scalar {
        a.checked_div(b).unwrap()
    }

    #[test]
    fn inverse_pair_cancels() {
        let k = s(Symbol::Kappa);
        let h = s(Symbol::Hbar);
        assert!((&div(&k, &h) * &div(&h, &k)).is_one());
    }

    #[test]
    fn root_squares_to_product() {
        let rt = Scalar::rt();
        assert_eq!(&rt * &rt, &Scalar::hbar() * &Scalar::kappa());
        let inv = rt.inv().unwrap();
        assert!((&inv * &rt).is_one());
    }

    #[test]
    fn mass_ratio_at_numbers() {
        let e = div(&(&s(Symbol::MassA) + &s(Symbol::MassC)), &s(Symbol::MassB));
        let mut b = Bindings::new();
        b.insert(Symbol::MassA, 1.into());
        b.insert(Symbol::MassC, 3.into());
        b.insert(Symbol::MassB, 2.into());
        assert_eq!(e.substitute(&b).unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn substitution_examples() {
        let k_over_h = div(&s(Symbol::Kappa), &s(Symbol::Hbar));
        assert!(k_over_h.subst1(Symbol::Kappa, &Scalar::hbar()).unwrap().is_one());

        let r = div(&s(Symbol::MassC).pow(2), &s(Symbol::MassB).pow(2));
        let e = &Scalar::one() - &r;
        let mut b = Bindings::new();
        b.insert(Symbol::MassC, 3.into());
        b.insert(Symbol::MassB, 2.into());
        assert_eq!(e.substitute(&b).unwrap(), Scalar::from_ratio(-5, 4));

        let inv_k = Scalar::kappa().inv().unwrap();
        assert!(matches!(
            inv_k.subst1(Symbol::Kappa, &Scalar::zero()),
            Err(Error::PoleAtSubstitution(_))
        ));
    }

    #[test]
    fn root_follows_equal_parameters() {
        let rt = Scalar::rt();
        assert_eq!(rt.subst1(Symbol::Kappa, &Scalar::hbar()).unwrap(), Scalar::hbar());
        let mut b = Bindings::new();
        b.insert(Symbol::Hbar, 2.into());
        b.insert(Symbol::Kappa, 8.into());
        assert_eq!(rt.substitute(&b).unwrap(), Scalar::from_int(4));
        assert!(matches!(
            rt.subst1(Symbol::Kappa, &Scalar::from_int(2)),
            Err(Error::UnrepresentableRoot(_))
        ));
    }

    #[test]
    fn kappa_limit_examples() {
        let two = Scalar::from_int(2);
        let e = &(&two * &Scalar::kappa()) * &div(&s(Symbol::MassB), &s(Symbol::MassA));
        assert!(e.kappa_zero_limit().unwrap().is_zero());

        let f = div(&(&Scalar::hbar() * &s(Symbol::MassB)), &s(Symbol::MassA));
        assert_eq!(f.kappa_zero_limit().unwrap(), f);

        let k = Scalar::kappa();
        let g = div(&(&(&k * &k) + &(&k * &Scalar::hbar())), &k);
        assert_eq!(g.kappa_zero_limit().unwrap(), Scalar::hbar());

        assert!(matches!(
            k.inv().unwrap().kappa_zero_limit(),
            Err(Error::PoleAtKappaZero(_))
        ));
        assert!(Scalar::rt().kappa_zero_limit().unwrap().is_zero());
        assert!(div(&Scalar::rt(), &k).kappa_zero_limit().is_err());
    }

    #[test]
    fn formal_exponentials() {
        let a = s(Symbol::Alpha);
        let e = Scalar::formal_exp(&a);
        let einv = Scalar::formal_exp(&-&a);
        assert!((&e * &einv).is_one());
        assert!(Scalar::formal_exp(&Scalar::zero()).is_one());
        // substituting the exponent re-interns; alpha = 0 gives 1
        assert!(e.subst1(Symbol::Alpha, &Scalar::zero()).unwrap().is_one());
        // derivative follows the chain rule
        assert_eq!(e.derivative(Symbol::Alpha), e);
        let mut v = NumBindings::new();
        v.insert(Symbol::Alpha, 0.5);
        assert!((e.eval(&v).unwrap().re - 0.5f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn gaussian_rational_division() {
        let z = &Scalar::from_int(1) + &Scalar::i();
        let w = z.inv().unwrap();
        assert_eq!(
            w,
            &Scalar::from_ratio(1, 2) - &Scalar::i().scale(&BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(z.conj(), &Scalar::one() - &Scalar::i());
    }

    #[test]
    fn display_forms() {
        let e = &(&Scalar::i() * &Scalar::kappa()) * &div(&s(Symbol::MassB), &s(Symbol::MassA));
        assert_eq!(e.to_string(), "i*kappa*m_B/m_A");
        let f = -&div(&(&s(Symbol::MassA) + &s(Symbol::MassC)), &s(Symbol::MassB));
        assert_eq!(f.to_string(), "(-m_A - m_C)/m_B");
        assert_eq!(Scalar::from_ratio(-3, 2).to_string(), "-3/2");
        let g = div(&Scalar::one(), &(&s(Symbol::MassA) * &s(Symbol::MassB)));
        assert_eq!(g.to_string(), "1/(m_A*m_B)");
    }
}
