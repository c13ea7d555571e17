//! Changes of quantum reference frame between three particles on a line.
//!
//! A frame `F` sees the other two particles through relational coordinates.
//! In a [`Chart`] the first listed particle occupies the `A` pair of the
//! phase space (commutator constant `kappa`) and the second the `B` pair
//! (constant `hbar`). An elementary word from `F` to `G` acts on the chart
//! `(F; G, S)` and lands in `(G; F, S)`, where `S` is the spectator.
//!
//! Words are stored in printed order: the leftmost factor is applied last.
//! The built-in words are written for `C -> A` with masses `m_A` (new frame),
//! `m_B` (spectator) and `m_C` (old frame); other frame pairs relabel them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canon::{exp_adjoint, CanonicalMap};
use crate::error::{Error, Result};
use crate::expr::{parse, parse_scalar, Parser};
use crate::lie::algebras;
use crate::scalar::{Bindings, Scalar, Symbol};
use crate::weyl::{PhaseVariable, Slot, WeylPoly};

/// The three particles of the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Particle {
    A,
    B,
    C,
}

impl Particle {
    pub const ALL: [Particle; 3] = [Particle::A, Particle::B, Particle::C];

    pub fn label(self) -> &'static str {
        match self {
            Particle::A => "A",
            Particle::B => "B",
            Particle::C => "C",
        }
    }

    pub fn from_label(s: &str) -> Option<Particle> {
        Particle::ALL.into_iter().find(|p| p.label().eq_ignore_ascii_case(s))
    }

    pub fn mass(self) -> Scalar {
        Scalar::mass(self)
    }

    /// The particle that is neither `a` nor `b`.
    pub fn third(a: Particle, b: Particle) -> Particle {
        assert_ne!(a, b, "third particle of a coincident pair");
        Particle::ALL
            .into_iter()
            .find(|&p| p != a && p != b)
            .expect("three particles")
    }
}

impl fmt::Display for Particle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Relational coordinates of two particles as seen from `frame`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    pub frame: Particle,
    /// Particles on the `A` and `B` pairs.
    pub slots: [Particle; 2],
}

impl Chart {
    pub fn new(frame: Particle, first: Particle, second: Particle) -> Self {
        assert!(
            frame != first && frame != second && first != second,
            "chart needs three distinct particles"
        );
        Chart {
            frame,
            slots: [first, second],
        }
    }

    /// Chart with the observed particles in alphabetical order.
    pub fn alphabetical(frame: Particle) -> Self {
        let mut others = Particle::ALL.into_iter().filter(|&p| p != frame);
        let first = others.next().expect("two others");
        let second = others.next().expect("two others");
        Chart::new(frame, first, second)
    }

    /// Physical variable names in slot order `x_A, p_A, x_B, p_B`.
    pub fn names(&self) -> [String; 4] {
        let [a, b] = self.slots;
        [format!("x_{a}"), format!("p_{a}"), format!("x_{b}"), format!("p_{b}")]
    }

    fn name_refs(names: &[String; 4]) -> [&str; 4] {
        [&names[0], &names[1], &names[2], &names[3]]
    }

    /// Parses an operator written with the physical names of this chart.
    pub fn parse(&self, src: &str) -> Result<WeylPoly> {
        let names = self.names();
        Parser::new().with_variable_names(Self::name_refs(&names)).parse(src)
    }

    pub fn format(&self, p: &WeylPoly) -> String {
        let names = self.names();
        p.format_with(&Self::name_refs(&names))
    }

    /// Slot variable carrying the given physical name.
    pub fn variable(&self, name: &str) -> Option<PhaseVariable> {
        self.names()
            .iter()
            .position(|n| n == name)
            .map(PhaseVariable::from_index)
    }

    /// Slot variables in alphabetical order of their physical names.
    pub fn variables_alphabetical(&self) -> Vec<PhaseVariable> {
        let names = self.names();
        let mut vars = PhaseVariable::ALL.to_vec();
        vars.sort_by_key(|v| {
            let n = &names[v.index()];
            (n[2..].to_string(), !v.is_position())
        });
        vars
    }

    /// Relabeling map from this chart to another chart of the same frame.
    pub fn reorder_to(&self, other: &Chart) -> Result<CanonicalMap> {
        if self.frame != other.frame {
            return Err(Error::InvalidWord(format!(
                "cannot reorder chart of frame {} into frame {}",
                self.frame, other.frame
            )));
        }
        Ok(if self.slots == other.slots {
            CanonicalMap::identity()
        } else {
            CanonicalMap::pair_exchange()
        })
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {})", self.frame, self.slots[0], self.slots[1])
    }
}

/// Elementary factor of a frame-change word.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// `exp(i * prefactor * generator)`.
    Exp { prefactor: Scalar, generator: WeylPoly },
    /// Exchange of the old and new frame particles on the `A` pair, with
    /// the sign flip of the relational coordinates.
    ParitySwap { old: Particle, new: Particle },
    /// Dilation of one pair by `ratio`: `x -> ratio x`, `p -> p / ratio`.
    Dilation { ratio: Scalar, slot: Slot },
}

impl Factor {
    fn exp(prefactor: &str, generator: &str) -> Factor {
        Factor::Exp {
            prefactor: parse_scalar(prefactor).expect("built-in prefactor"),
            generator: parse(generator).expect("built-in generator"),
        }
    }

    fn dilation(ratio: &str, slot: Slot) -> Factor {
        Factor::Dilation {
            ratio: parse_scalar(ratio).expect("built-in ratio"),
            slot,
        }
    }

    fn substitute(&self, b: &Bindings) -> Result<Factor> {
        Ok(match self {
            Factor::Exp { prefactor, generator } => Factor::Exp {
                prefactor: prefactor.substitute(b)?,
                generator: generator.substitute(b)?,
            },
            Factor::ParitySwap { old, new } => Factor::ParitySwap { old: *old, new: *new },
            Factor::Dilation { ratio, slot } => Factor::Dilation {
                ratio: ratio.substitute(b)?,
                slot: *slot,
            },
        })
    }

    /// Canonical map of the factor together with `i hbar (dU/dt) U^dagger`.
    fn compile(&self) -> Result<(CanonicalMap, WeylPoly)> {
        match self {
            Factor::Exp { prefactor, generator } => {
                let map = exp_adjoint(generator, prefactor)?;
                let x = generator.scale(&(&Scalar::i() * prefactor));
                let dx = x.derivative(Symbol::Time);
                let d = duhamel(&x, &dx)?;
                Ok((map, d.scale(&(&Scalar::i() * &Scalar::hbar()))))
            }
            Factor::ParitySwap { .. } => Ok((CanonicalMap::parity_swap(), WeylPoly::zero())),
            Factor::Dilation { ratio, slot } => {
                let (gen, constant) = match slot {
                    Slot::A => (algebras::d_a(), Scalar::kappa()),
                    Slot::B => (algebras::d_b(), Scalar::hbar()),
                };
                let alpha = Scalar::symbol(Symbol::Alpha);
                let map = exp_adjoint(&gen, &alpha.checked_div(&constant)?)?;
                let e = Scalar::formal_exp(&alpha);
                let sym = *e.symbols().iter().next().expect("formal exponential symbol");
                let value = if e == Scalar::symbol(sym) {
                    ratio.clone()
                } else {
                    ratio.inv()?
                };
                let mut b = Bindings::new();
                b.insert(sym, value);
                Ok((map.substitute(&b)?, WeylPoly::zero()))
            }
        }
    }

    /// Factor kind, prefactor and generator as strings.
    pub fn describe(&self) -> (String, String, String) {
        match self {
            Factor::Exp { prefactor, generator } => ("exp".into(), prefactor.to_string(), generator.to_string()),
            Factor::ParitySwap { old, new } => ("parity_swap".into(), String::new(), format!("{old}{new}")),
            Factor::Dilation { ratio, slot } => (
                "dilation".into(),
                ratio.to_string(),
                match slot {
                    Slot::A => "D_A".into(),
                    Slot::B => "D_B".into(),
                },
            ),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Exp { prefactor, generator } => write!(f, "exp(i*({prefactor})*({generator}))"),
            Factor::ParitySwap { old, new } => write!(f, "swap({old}{new})"),
            Factor::Dilation { ratio, slot } => {
                let g = if *slot == Slot::A { "D_A" } else { "D_B" };
                write!(f, "dilate[{g}]({ratio})")
            }
        }
    }
}

/// Longest nested commutator tried before the derivative series is declared
/// non-terminating.
const DUHAMEL_CAP: usize = 8;

/// `(d/dt e^X) e^{-X} = sum_n ad_X^n(dX) / (n+1)!`, summed while it
/// terminates.
pub fn duhamel(x: &WeylPoly, dx: &WeylPoly) -> Result<WeylPoly> {
    let mut term = dx.clone();
    let mut sum = WeylPoly::zero();
    let mut fact: i64 = 1;
    for n in 0..DUHAMEL_CAP {
        if term.is_zero() {
            return Ok(sum);
        }
        fact *= n as i64 + 1;
        sum = &sum + &term.scale(&Scalar::from_ratio(1, fact));
        term = x.commutator(&term)?;
    }
    if term.is_zero() {
        Ok(sum)
    } else {
        Err(Error::NonTerminatingDuhamel(x.to_string()))
    }
}

/// Named frame-change words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WordKind {
    /// Quantum translation.
    Sx,
    /// Superposition of Galilean translations with time evolution.
    ST,
    /// Superposition of Galilean boosts with time evolution.
    Sb,
    /// Single-swap form of the composite `Sb(B->A) ST(C->B)`.
    SD,
}

impl WordKind {
    pub const ALL: [WordKind; 4] = [WordKind::Sx, WordKind::ST, WordKind::Sb, WordKind::SD];

    pub fn name(self) -> &'static str {
        match self {
            WordKind::Sx => "Sx",
            WordKind::ST => "ST",
            WordKind::Sb => "Sb",
            WordKind::SD => "SD",
        }
    }

    pub fn from_name(s: &str) -> Option<WordKind> {
        WordKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

/// A frame change written as a product of elementary factors.
#[derive(Clone, Debug, PartialEq)]
pub struct QrfWord {
    pub kind: WordKind,
    pub from: Particle,
    pub to: Particle,
    /// Printed order; the last factor acts first.
    pub factors: Vec<Factor>,
}

fn relabel(from: Particle, to: Particle) -> Bindings {
    let spectator = Particle::third(from, to);
    let mut b = Bindings::new();
    b.insert(Symbol::MassA, to.mass());
    b.insert(Symbol::MassB, spectator.mass());
    b.insert(Symbol::MassC, from.mass());
    b
}

fn check_frames(from: Particle, to: Particle) -> Result<()> {
    if from == to {
        Err(Error::InvalidWord(format!("source and target frame coincide ({from})")))
    } else {
        Ok(())
    }
}

impl QrfWord {
    fn template(kind: WordKind, from: Particle, to: Particle, factors: Vec<Factor>) -> Result<QrfWord> {
        check_frames(from, to)?;
        let b = relabel(from, to);
        let factors = factors
            .into_iter()
            .map(|f| match f {
                Factor::ParitySwap { .. } => Ok(Factor::ParitySwap { old: from, new: to }),
                f => f.substitute(&b),
            })
            .collect::<Result<_>>()?;
        Ok(QrfWord {
            kind,
            from,
            to,
            factors,
        })
    }

    fn swap() -> Factor {
        Factor::ParitySwap {
            old: Particle::C,
            new: Particle::A,
        }
    }

    pub fn make(kind: WordKind, from: Particle, to: Particle) -> Result<QrfWord> {
        match kind {
            WordKind::Sx => QrfWord::sx(from, to),
            WordKind::ST => QrfWord::st(from, to),
            WordKind::Sb => QrfWord::sb(from, to),
            WordKind::SD => QrfWord::sd(from, to),
        }
    }

    /// `swap * exp((i/hbar) x_A p_B)`.
    pub fn sx(from: Particle, to: Particle) -> Result<QrfWord> {
        QrfWord::template(
            WordKind::Sx,
            from,
            to,
            vec![QrfWord::swap(), Factor::exp("1/hbar", "x_A*p_B")],
        )
    }

    /// Translation word dressed with the free evolution of the old and new
    /// frame particles. The leftmost factor acts in the target chart.
    pub fn st(from: Particle, to: Particle) -> Result<QrfWord> {
        QrfWord::template(
            WordKind::ST,
            from,
            to,
            vec![
                Factor::exp("-t/kappa", "p_A^2/(2*m_C)"),
                QrfWord::swap(),
                Factor::exp("1/hbar", "x_A*p_B"),
                Factor::exp("t/kappa", "p_A^2/(2*m_A)"),
            ],
        )
    }

    /// Boost word with the velocity-matching dilation of the frame pair.
    pub fn sb(from: Particle, to: Particle) -> Result<QrfWord> {
        QrfWord::template(
            WordKind::Sb,
            from,
            to,
            vec![
                Factor::exp("-t/kappa", "p_A^2/(2*m_C)"),
                QrfWord::swap(),
                Factor::dilation("m_C/m_A", Slot::A),
                Factor::exp("1/hbar", "(p_A/m_A)*(p_B*t - m_B*x_B)"),
                Factor::exp("t/kappa", "p_A^2/(2*m_A)"),
            ],
        )
    }

    /// Eight-factor single-swap form of `Sb(S->G) ST(F->S)`, valid for
    /// `hbar = kappa`.
    pub fn sd(from: Particle, to: Particle) -> Result<QrfWord> {
        QrfWord::template(
            WordKind::SD,
            from,
            to,
            vec![
                QrfWord::swap(),
                Factor::exp("-(m_A/m_C)*t/hbar", "p_A^2/(2*m_A)"),
                Factor::exp("-(1 - m_C^2/m_B^2)*t/hbar", "p_B^2/(2*m_B)"),
                Factor::dilation("m_C/m_A", Slot::A),
                Factor::dilation("m_B/m_C", Slot::B),
                Factor::exp("-(m_A/m_C)^2/hbar", "x_A*p_B"),
                Factor::exp("(m_C/m_B)/hbar", "(p_A/m_A)*(p_B*t - m_B*x_B)"),
                Factor::exp("(m_A/m_C)/hbar", "x_A*p_B"),
                Factor::exp("t/hbar", "p_A^2/(2*m_A)"),
            ],
        )
    }

    pub fn spectator(&self) -> Particle {
        Particle::third(self.from, self.to)
    }

    pub fn source_chart(&self) -> Chart {
        Chart::new(self.from, self.to, self.spectator())
    }

    pub fn target_chart(&self) -> Chart {
        Chart::new(self.to, self.from, self.spectator())
    }

    /// Compiles the word into a canonical map between its charts, with the
    /// derivative term `i hbar (dS/dt) S^dagger` in target variables.
    pub fn compile(&self) -> Result<CompiledMap> {
        let swaps = self
            .factors
            .iter()
            .filter(|f| matches!(f, Factor::ParitySwap { .. }))
            .count();
        if swaps != 1 {
            return Err(Error::InvalidWord(format!(
                "an elementary word needs exactly one parity swap, found {swaps}"
            )));
        }
        let mut out = CompiledMap::identity(self.source_chart());
        for factor in self.factors.iter().rev() {
            let (map, derivative) = factor.compile()?;
            let chart = match factor {
                Factor::ParitySwap { old, new } => {
                    if (*old, *new) != (self.from, self.to) {
                        return Err(Error::InvalidWord(format!(
                            "swap {old}{new} in a word {}->{}",
                            self.from, self.to
                        )));
                    }
                    self.target_chart()
                }
                _ => out.target,
            };
            out = out.then(&CompiledMap {
                map,
                derivative,
                source: out.target,
                target: chart,
            })?;
        }
        Ok(out)
    }

    /// Factor list as `(kind, prefactor, generator)` strings.
    pub fn describe(&self) -> Vec<(String, String, String)> {
        self.factors.iter().map(Factor::describe).collect()
    }
}

impl fmt::Display for QrfWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(
            f,
            "{}({}->{}) = {}",
            self.kind.name(),
            self.from,
            self.to,
            parts.join(" ")
        )
    }
}

/// A canonical map between two charts together with the accumulated
/// derivative term `i hbar (dS/dt) S^dagger` (target variables).
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledMap {
    pub map: CanonicalMap,
    pub derivative: WeylPoly,
    pub source: Chart,
    pub target: Chart,
}

impl CompiledMap {
    pub fn identity(chart: Chart) -> Self {
        CompiledMap {
            map: CanonicalMap::identity(),
            derivative: WeylPoly::zero(),
            source: chart,
            target: chart,
        }
    }

    /// `self` followed by `next`, reordering charts of the intermediate
    /// frame when needed.
    pub fn then(&self, next: &CompiledMap) -> Result<CompiledMap> {
        let bridge = self.target.reorder_to(&next.source)?.then(&next.map);
        Ok(CompiledMap {
            map: self.map.then(&bridge),
            derivative: &bridge.apply_to_operator(&self.derivative)? + &next.derivative,
            source: self.source,
            target: next.target,
        })
    }

    /// Relabels the target into another chart of the same frame.
    pub fn aligned_to(&self, target: &Chart) -> Result<CompiledMap> {
        self.then(&CompiledMap::identity(*target))
    }

    /// Relabels the source from another chart of the same frame.
    pub fn with_source(&self, source: &Chart) -> Result<CompiledMap> {
        CompiledMap::identity(*source).then(self)
    }

    /// Image of a source variable given by physical name.
    pub fn image_of(&self, name: &str) -> Option<WeylPoly> {
        self.source.variable(name).map(|v| self.map.image(v))
    }

    /// `S H S^dagger + i hbar (dS/dt) S^dagger`.
    pub fn extended_symmetry(&self, h: &WeylPoly) -> Result<WeylPoly> {
        Ok(&self.map.apply_to_operator(h)? + &self.derivative)
    }

    pub fn substitute(&self, b: &Bindings) -> Result<CompiledMap> {
        Ok(CompiledMap {
            map: self.map.substitute(b)?,
            derivative: self.derivative.substitute(b)?,
            source: self.source,
            target: self.target,
        })
    }

    /// Sets `kappa = hbar`.
    pub fn equal_constants(&self) -> Result<CompiledMap> {
        let mut b = Bindings::new();
        b.insert(Symbol::Kappa, Scalar::hbar());
        self.substitute(&b)
    }

    /// Action rows `var -> image` with physical names, in alphabetical
    /// order of the source variables.
    pub fn action_lines(&self) -> Vec<String> {
        let names = self.source.names();
        self.source
            .variables_alphabetical()
            .into_iter()
            .map(|v| format!("{} -> {}", names[v.index()], self.target.format(&self.map.image(v))))
            .collect()
    }
}

/// Composite `Sb(S->G) ST(F->S)` through the spectator's frame, expressed
/// between the charts of the single-swap word.
pub fn sd_composed(from: Particle, to: Particle) -> Result<CompiledMap> {
    check_frames(from, to)?;
    let mid = Particle::third(from, to);
    let word = QrfWord::sx(from, to)?;
    QrfWord::st(from, mid)?
        .compile()?
        .then(&QrfWord::sb(mid, to)?.compile()?)?
        .with_source(&word.source_chart())?
        .aligned_to(&word.target_chart())
}

/// Free two-particle Hamiltonian in the given chart.
pub fn free_hamiltonian(chart: &Chart) -> WeylPoly {
    let [a, b] = chart.slots;
    let h = parse("p_A^2/(2*m_A) + p_B^2/(2*m_B)").expect("built-in");
    let mut bind = Bindings::new();
    bind.insert(Symbol::MassA, a.mass());
    bind.insert(Symbol::MassB, b.mass());
    h.substitute(&bind).expect("mass relabel")
}

/// Outcome of comparing a direct frame change with a two-step chain.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitivityReport {
    pub pass: bool,
    /// Nonzero entries of `chain - direct` as `(row, column, value)`.
    pub residual: Vec<(usize, usize, Scalar)>,
    /// Every residual entry vanishes at `kappa = hbar`.
    pub vanishes_at_equal_constants: bool,
}

/// Compares `S(C->A)` with `S(B->A) S(C->B)` for the translation or boost
/// words. With `equal_constants` the comparison is made at `kappa = hbar`.
pub fn transitivity_check(kind: WordKind, equal_constants: bool) -> Result<TransitivityReport> {
    transitivity_between(kind, Particle::C, Particle::A, equal_constants)
}

/// [`transitivity_check`] for `from -> to`, chained through the third
/// particle.
pub fn transitivity_between(
    kind: WordKind,
    from: Particle,
    to: Particle,
    equal_constants: bool,
) -> Result<TransitivityReport> {
    if !matches!(kind, WordKind::ST | WordKind::Sb) {
        return Err(Error::InvalidWord(format!(
            "transitivity is defined for ST and Sb, not {}",
            kind.name()
        )));
    }
    if from == to {
        return Err(Error::InvalidWord(format!("frame change {from}->{to} is trivial")));
    }
    let via = Particle::third(from, to);
    let mut direct = QrfWord::make(kind, from, to)?.compile()?;
    let mut chain = QrfWord::make(kind, from, via)?
        .compile()?
        .then(&QrfWord::make(kind, via, to)?.compile()?)?
        .with_source(&direct.source)?
        .aligned_to(&direct.target)?;
    if equal_constants {
        direct = direct.equal_constants()?;
        chain = chain.equal_constants()?;
    }
    let diff = chain.map.matrix() - direct.map.matrix();
    let mut residual = Vec::new();
    let mut vanishes = true;
    for r in 0..diff.rows() {
        for col in 0..diff.cols() {
            let v = &diff[(r, col)];
            if !v.is_zero() {
                vanishes &= v.subst1(Symbol::Kappa, &Scalar::hbar())?.is_zero();
                residual.push((r, col, v.clone()));
            }
        }
    }
    Ok(TransitivityReport {
        pass: residual.is_empty(),
        residual,
        vanishes_at_equal_constants: vanishes,
    })
}

/// Outcome of [`sd_bch_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BchReport {
    pub order: usize,
    /// Every graded component decomposes on the seven generators.
    pub closure: bool,
    /// `(e, max |exp(Z(e)) - prod exp(e X_k)|)` on the conjugation matrices.
    pub errors: Vec<(f64, f64)>,
    /// `error(e_0) / error(e_0 / 2)`; about `2^(order+1)` when the
    /// truncation is right.
    pub ratio: f64,
    /// Distance between the swap times the product of exponentials and the
    /// compiled word at `t = 0`.
    pub word_mismatch: f64,
}

/// Logarithms `X_k` of the exponential factors of the single-swap composite
/// at `t = 0`, in printed order. Dilations use the free symbols `alpha`,
/// `beta` for the logarithms of their ratios.
pub fn sd_log_factors(from: Particle, to: Particle) -> Result<Vec<WeylPoly>> {
    let word = QrfWord::sd(from, to)?;
    let mut b = Bindings::new();
    b.insert(Symbol::Time, Scalar::zero());
    let mut logs = Vec::new();
    for f in &word.factors {
        let x = match f {
            Factor::Exp { prefactor, generator } => generator.scale(&(&Scalar::i() * prefactor)),
            Factor::Dilation { slot, .. } => {
                let (gen, sym) = match slot {
                    Slot::A => (algebras::d_a(), Symbol::Alpha),
                    Slot::B => (algebras::d_b(), Symbol::Beta),
                };
                let lambda = Scalar::symbol(sym).checked_div(&slot.constant())?;
                gen.scale(&(&Scalar::i() * &lambda))
            }
            Factor::ParitySwap { .. } => continue,
        };
        let x = x.substitute(&b)?;
        if !x.is_zero() {
            logs.push(x);
        }
    }
    Ok(logs)
}

/// Recombines the log-factors of the composite word with the truncated BCH
/// series, checks that every nested commutator stays in the seven-generator
/// algebra, and measures the truncation error numerically at masses
/// `(m_A, m_B, m_C)` with `hbar = kappa = 1`.
pub fn sd_bch_check(masses: [f64; 3], order: usize) -> Result<BchReport> {
    use crate::canon::adjoint_matrix;
    use crate::gaussian::numeric_matrix;
    use crate::scalar::NumBindings;
    use nalgebra::Matrix5;

    let (c, a) = (Particle::C, Particle::A);
    let logs = sd_log_factors(c, a)?;
    let z = crate::lie::bch::bch_product(&logs, order)?;
    let basis = algebras::d7_at(&Scalar::zero());
    let closure = crate::lie::bch::closure_coordinates(&z, &basis).is_ok();

    let mut v = NumBindings::new();
    for (s, m) in [Symbol::MassA, Symbol::MassB, Symbol::MassC].into_iter().zip(masses) {
        v.insert(s, m);
    }
    v.insert(Symbol::Hbar, 1.0);
    v.insert(Symbol::Kappa, 1.0);
    v.insert(Symbol::Time, 0.0);
    v.insert(Symbol::Alpha, (masses[2] / masses[0]).ln());
    v.insert(Symbol::Beta, (masses[1] / masses[2]).ln());
    let minus_i = -&Scalar::i();
    let adj = |x: &WeylPoly| -> Result<Matrix5<f64>> { numeric_matrix(adjoint_matrix(x, &minus_i)?.matrix(), &v) };
    let n_logs = logs.iter().map(adj).collect::<Result<Vec<_>>>()?;
    let n_z = z.iter().map(adj).collect::<Result<Vec<_>>>()?;
    // the rightmost factor acts first, so its matrix comes first
    let product = |e: f64| {
        n_logs
            .iter()
            .rev()
            .fold(Matrix5::identity(), |acc, n| acc * (n * e).exp())
    };
    let combined = |e: f64| {
        let mut sum = Matrix5::zeros();
        for (d, n) in n_z.iter().enumerate() {
            sum += n * e.powi(d as i32 + 1);
        }
        sum.exp()
    };
    let errors: Vec<(f64, f64)> = [0.1, 0.05]
        .into_iter()
        .map(|e| (e, (combined(e) - product(e)).amax()))
        .collect();
    let ratio = errors[0].1 / errors[1].1;

    let swap: Matrix5<f64> = numeric_matrix(CanonicalMap::parity_swap().matrix(), &v)?;
    let word = QrfWord::sd(c, a)?.compile()?.equal_constants()?;
    let compiled: Matrix5<f64> = numeric_matrix(word.map.matrix(), &v)?;
    let word_mismatch = (product(1.0) * swap - compiled).amax();
    Ok(BchReport {
        order,
        closure,
        errors,
        ratio,
        word_mismatch,
    })
}

/// Result of the relational measurement comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementReport {
    /// Image of `x_B` (frame C) in frame A.
    pub position_image: WeylPoly,
    /// `<x_B>` in frame C and `<image>` in frame A.
    pub position_values: (Scalar, Scalar),
    /// Image of `x_B - x_A` (frame C) in frame A.
    pub relative_image: WeylPoly,
    pub relative_values: (Scalar, Scalar),
}

impl MeasurementReport {
    pub fn pass(&self, a: &Scalar, b: &Scalar) -> bool {
        let ba = b - a;
        self.position_values.0 == *b
            && self.position_values.1 == *b
            && self.relative_values.0 == ba
            && self.relative_values.1 == ba
    }
}

fn linear_value(p: &WeylPoly, mean: &[Scalar]) -> Result<Scalar> {
    if p.degree() > 1 {
        return Err(Error::NotQuadratic(p.to_string()));
    }
    let mut v = p.constant_part();
    for var in PhaseVariable::ALL {
        let mut e = [0; 4];
        e[var.index()] = 1;
        v += &(&p.coeff(&e) * &mean[var.index()]);
    }
    Ok(v)
}

/// Particles `A` and `B` localized at `a` and `b` relative to `C` (zero
/// momenta). Compares relational observables before and after the
/// translation to frame `A`, using the exact transformation of the means.
pub fn measurement_scenario(a: &Scalar, b: &Scalar) -> Result<MeasurementReport> {
    let compiled = QrfWord::sx(Particle::C, Particle::A)?.compile()?;
    let src = vec![a.clone(), Scalar::zero(), b.clone(), Scalar::zero(), Scalar::one()];
    // v_src = M v_tgt, so target means are M^{-1} applied to source means
    let inv = compiled.map.inverse()?;
    let tgt: Vec<Scalar> = (0..5)
        .map(|r| {
            let mut acc = Scalar::zero();
            for (k, s) in src.iter().enumerate() {
                acc += &(&inv.matrix()[(r, k)] * s);
            }
            acc
        })
        .collect();
    let xb = compiled.source.parse("x_B")?;
    let rel = compiled.source.parse("x_B - x_A")?;
    let position_image = compiled.map.apply_to_operator(&xb)?;
    let relative_image = compiled.map.apply_to_operator(&rel)?;
    Ok(MeasurementReport {
        position_values: (linear_value(&xb, &src)?, linear_value(&position_image, &tgt)?),
        position_image,
        relative_values: (linear_value(&rel, &src)?, linear_value(&relative_image, &tgt)?),
        relative_image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_name_variables() {
        let w = QrfWord::sx(Particle::C, Particle::A).unwrap();
        assert_eq!(w.source_chart(), Chart::alphabetical(Particle::C));
        assert_eq!(w.target_chart().names()[0], "x_C");
        let p = w.target_chart().parse("x_B - x_C").unwrap();
        assert_eq!(p, parse("x_B - x_A").unwrap());
        assert_eq!(w.target_chart().variables_alphabetical()[0], PhaseVariable::XB);
    }

    #[test]
    fn translation_word_action() {
        let m = QrfWord::sx(Particle::C, Particle::A).unwrap().compile().unwrap();
        let t = m.target;
        assert_eq!(m.image_of("x_B").unwrap(), t.parse("x_B - x_C").unwrap());
        assert_eq!(m.image_of("p_A").unwrap(), t.parse("-p_C - kappa/hbar*p_B").unwrap());
        assert!(m.derivative.is_zero());
        assert!(m.map.check_symplectic().pass);
    }

    #[test]
    fn relabeled_words_use_particle_masses() {
        let w = QrfWord::st(Particle::C, Particle::B).unwrap();
        let m = w.compile().unwrap();
        assert_eq!(m.source, Chart::new(Particle::C, Particle::B, Particle::A));
        let img = m.image_of("x_A").unwrap();
        assert_eq!(img, m.target.parse("x_A - x_C + p_C*t/m_C").unwrap());
    }

    #[test]
    fn frames_must_differ() {
        assert!(QrfWord::sx(Particle::A, Particle::A).is_err());
        let mut w = QrfWord::sx(Particle::C, Particle::A).unwrap();
        w.factors.remove(0);
        assert!(matches!(w.compile(), Err(Error::InvalidWord(_))));
    }

    #[test]
    fn duhamel_terminates_or_reports() {
        let x = parse("i*t*x_A*p_A").unwrap();
        let dx = x.derivative(Symbol::Time);
        assert_eq!(duhamel(&x, &dx).unwrap(), dx);
        let k = parse("i*p_A*x_A^2").unwrap();
        assert!(duhamel(&k, &parse("x_A").unwrap()).is_err());
    }

    #[test]
    fn bch_recombination_of_the_composite() {
        let logs = sd_log_factors(Particle::C, Particle::A).unwrap();
        assert_eq!(logs.len(), 5);
        let r = sd_bch_check([1.0, 2.0, 3.0], 4).unwrap();
        assert!(r.closure);
        assert!(r.word_mismatch < 1e-12, "{r:?}");
        assert!(r.ratio > 16.0, "{r:?}");
    }

    #[test]
    fn measurement_values() {
        let a = Scalar::symbol(Symbol::PosA);
        let b = Scalar::symbol(Symbol::PosB);
        let r = measurement_scenario(&a, &b).unwrap();
        assert!(r.pass(&a, &b));
        assert_eq!(r.relative_image, parse("x_B").unwrap());
    }
}
