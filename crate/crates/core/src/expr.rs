//! Operator-expression parser.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*      divisors must be scalars
//! factor  := '-' factor | primary ('^' integer)?
//! primary := integer | identifier | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers are the phase variables, the scalar symbols
//! (`i hbar kappa t m_A m_B m_C rt alpha beta a b cx_A cp_A`) and any names
//! supplied in an [`Env`]. Products keep their source order and are
//! normal-ordered as they are formed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Symbol};
use crate::weyl::{PhaseVariable, WeylPoly, DEFAULT_NAMES};

/// Largest accepted input.
pub const MAX_INPUT: usize = 64 * 1024;

/// Named operators available to expressions.
pub type Env = BTreeMap<String, WeylPoly>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn run(src: &str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { toks: Vec::new() };
        let bytes = src.as_bytes();
        let mut k = 0;
        while k < bytes.len() {
            let c = bytes[k] as char;
            if c.is_ascii_whitespace() {
                k += 1;
            } else if c.is_ascii_digit() {
                let start = k;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                let n: BigInt = src[start..k].parse().expect("digits");
                lx.toks.push((Tok::Int(n), start));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = k;
                while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                    k += 1;
                }
                lx.toks.push((Tok::Ident(src[start..k].to_string()), start));
            } else if "+-*/^()".contains(c) {
                lx.toks.push((Tok::Op(c), k));
                k += 1;
            } else {
                let ch = src[k..].chars().next().expect("char");
                return Err(syntax(src, k, &format!("unexpected character `{ch}`")));
            }
        }
        lx.toks.push((Tok::End, src.len()));
        Ok(lx.toks)
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn syntax(src: &str, offset: usize, message: &str) -> Error {
    let (line, column) = line_col(src, offset);
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

/// Parser configuration: names of the four phase variables and named
/// operators.
pub struct Parser<'e> {
    names: [String; 4],
    env: Option<&'e Env>,
}

impl Default for Parser<'_> {
    fn default() -> Self {
        Parser {
            names: DEFAULT_NAMES.map(String::from),
            env: None,
        }
    }
}

impl<'e> Parser<'e> {
    pub fn new() -> Self {
        Parser::default()
    }

    pub fn with_env(mut self, env: &'e Env) -> Self {
        self.env = Some(env);
        self
    }

    /// Uses custom names for `x_A, p_A, x_B, p_B` (e.g. a relational chart).
    pub fn with_variable_names(mut self, names: [&str; 4]) -> Self {
        self.names = names.map(String::from);
        self
    }

    pub fn parse(&self, src: &str) -> Result<WeylPoly> {
        if src.len() > MAX_INPUT {
            return Err(Error::InputTooLarge);
        }
        let toks = Lexer::run(src)?;
        let mut st = State {
            src,
            toks,
            pos: 0,
            cfg: self,
        };
        let v = st.expr()?;
        match st.peek() {
            Tok::End => Ok(v),
            t => Err(st.error(&format!("unexpected {}", describe(t)))),
        }
    }

    pub fn parse_scalar(&self, src: &str) -> Result<Scalar> {
        let p = self.parse(src)?;
        p.as_constant()
            .ok_or_else(|| syntax(src, 0, "expected a scalar expression"))
    }

    /// Parses `name := expr` lines; `#` starts a comment. Each definition
    /// may use the names defined before it.
    pub fn parse_definitions(&self, src: &str) -> Result<Vec<(String, WeylPoly)>> {
        if src.len() > MAX_INPUT {
            return Err(Error::InputTooLarge);
        }
        let mut env: Env = self.env.cloned().unwrap_or_default();
        let mut out = Vec::new();
        for (n, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let relocate = |e: Error, shift: usize| match e {
                Error::Syntax { column, message, .. } => Error::Syntax {
                    line: n + 1,
                    column: column + shift,
                    message,
                },
                e => e,
            };
            let Some((name, body)) = line.split_once(":=") else {
                return Err(Error::Syntax {
                    line: n + 1,
                    column: 1,
                    message: "expected `name := expression`".into(),
                });
            };
            let name = name.trim();
            let valid = !name.is_empty()
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && !name.starts_with(|c: char| c.is_ascii_digit());
            if !valid {
                return Err(Error::Syntax {
                    line: n + 1,
                    column: 1,
                    message: format!("invalid generator name `{name}`"),
                });
            }
            let shift = line.find(":=").expect("separator") + 2;
            let parser = Parser {
                names: self.names.clone(),
                env: Some(&env),
            };
            let value = parser.parse(body).map_err(|e| relocate(e, shift))?;
            env.insert(name.to_string(), value.clone());
            out.push((name.to_string(), value));
        }
        Ok(out)
    }
}

/// Parses with the default variable names and no named operators.
pub fn parse(src: &str) -> Result<WeylPoly> {
    Parser::new().parse(src)
}

/// Parses an expression that must reduce to a scalar.
pub fn parse_scalar(src: &str) -> Result<Scalar> {
    Parser::new().parse_scalar(src)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

struct State<'s, 'p, 'e> {
    src: &'s str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    cfg: &'p Parser<'e>,
}

impl State<'_, '_, '_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn error(&self, msg: &str) -> Error {
        syntax(self.src, self.offset(), msg)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == &Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<WeylPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.multiply(&rhs)?;
                }
                Tok::Op('/') => {
                    let at = self.offset();
                    self.bump();
                    let rhs = self.factor()?;
                    let d = rhs
                        .as_constant()
                        .ok_or_else(|| syntax(self.src, at, "divisor must be a scalar"))?;
                    if d.is_zero() {
                        return Err(syntax(self.src, at, "division by zero"));
                    }
                    acc = acc.scale(&d.inv()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<WeylPoly> {
        if self.peek() == &Tok::Op('-') {
            self.bump();
            return Ok(-&self.factor()?);
        }
        let base = self.primary()?;
        if self.peek() == &Tok::Op('^') {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Tok::Int(n) => {
                    let n: u32 = n
                        .try_into()
                        .ok()
                        .filter(|&n: &u32| n <= 64)
                        .ok_or_else(|| syntax(self.src, at, "exponent too large"))?;
                    return base.pow(n);
                }
                t => {
                    return Err(syntax(
                        self.src,
                        at,
                        &format!("expected integer exponent, found {}", describe(&t)),
                    ))
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<WeylPoly> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => Ok(WeylPoly::constant(Scalar::from_rational(BigRational::from_integer(n)))),
            Tok::Op('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(name) if name == "exp" && self.peek() == &Tok::Op('(') => {
                self.bump();
                let arg_at = self.offset();
                let v = self.expr()?;
                self.expect(')')?;
                let c = v
                    .as_constant()
                    .ok_or_else(|| syntax(self.src, arg_at, "exp() takes a scalar argument"))?;
                Ok(WeylPoly::constant(Scalar::formal_exp(&c)))
            }
            Tok::Ident(name) => self
                .identifier(&name)
                .ok_or_else(|| syntax(self.src, at, &format!("unknown identifier `{name}`"))),
            t => Err(syntax(self.src, at, &format!("unexpected {}", describe(&t)))),
        }
    }

    fn identifier(&self, name: &str) -> Option<WeylPoly> {
        if let Some(k) = self.cfg.names.iter().position(|n| n == name) {
            return Some(WeylPoly::var(PhaseVariable::from_index(k)));
        }
        if let Some(v) = self.cfg.env.and_then(|e| e.get(name)) {
            return Some(v.clone());
        }
        let s = match name {
            "i" => Scalar::i(),
            "rt" => Scalar::rt(),
            _ => Scalar::symbol(Symbol::from_name(name)?),
        };
        Some(WeylPoly::constant(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::PhaseVariable::*;

    #[test]
    fn basic_examples() {
        let p = parse("x_A*p_B").unwrap();
        assert_eq!(p, WeylPoly::monomial([1, 0, 0, 1], Scalar::one()));
        let c = parse("p_A*x_A - x_A*p_A").unwrap();
        assert_eq!(c, WeylPoly::constant(-&(&Scalar::i() * &Scalar::kappa())));
        let d = parse("(1/2)*(x_B*p_B + p_B*x_B)").unwrap();
        assert!(d.is_hermitian());
        assert_eq!(
            d,
            WeylPoly::from_terms([
                ([0, 0, 1, 1], Scalar::one()),
                (
                    [0, 0, 0, 0],
                    -&(&Scalar::i() * &Scalar::hbar()).scale(&BigRational::new(1.into(), 2.into()))
                ),
            ])
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse("x_A +\n  * p_A") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x_A / p_A"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("foo"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x_A^5"), Err(Error::DegreeOverflow(5))));
        assert_eq!(parse(&"1+".repeat(40000)), Err(Error::InputTooLarge));
    }

    #[test]
    fn chart_names_and_env() {
        let p = Parser::new()
            .with_variable_names(["x_B", "p_B", "x_C", "p_C"])
            .parse("x_C - p_B")
            .unwrap();
        assert_eq!(p, &WeylPoly::var(XB) - &WeylPoly::var(PA));
        let defs = Parser::new()
            .parse_definitions("# two generators\nP := x_A*p_B\nQ := P*2 # twice\n")
            .unwrap();
        assert_eq!(defs[1].1, defs[0].1.scale(&Scalar::from_int(2)));
    }

    #[test]
    fn print_round_trip() {
        for src in [
            "x_A*p_B",
            "(1/2)*(x_A*p_A + p_A*x_A)",
            "p_A^2/(2*m_A) + p_B^2/(2*m_B)",
            "(kappa/hbar)*(p_B*t - m_B*x_B)/m_A + i*rt*x_A",
            "exp(alpha*t)*x_A - exp(-alpha*t)*p_A",
            "(m_A + m_C)/m_B*p_B - 3/4",
        ] {
            let p = parse(src).unwrap();
            let q = parse(&p.to_string()).unwrap();
            assert_eq!(p, q, "{src} printed as {p}");
        }
    }
}
