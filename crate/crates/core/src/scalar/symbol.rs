use std::fmt;
use std::sync::{OnceLock, RwLock};

use super::Scalar;

/// Commuting symbols of the coefficient field.
///
/// The discriminant order is the lexicographic variable order of the
/// canonical form. `rt = sqrt(hbar*kappa)` is not a symbol: it is carried
/// structurally by [`Scalar`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Hbar,
    Kappa,
    Time,
    MassA,
    MassB,
    MassC,
    /// Free parameters of one-parameter subgroups.
    Alpha,
    Beta,
    /// Positions of the delta states in the measurement scenario.
    PosA,
    PosB,
    /// Classical (commuting) phase-space values of the frame particle.
    ClassicalX,
    ClassicalP,
    /// Formal exponential `exp(c)` registered under index `j`.
    Exp(u32),
}

const FIXED: [Symbol; 12] = [
    Symbol::Hbar,
    Symbol::Kappa,
    Symbol::Time,
    Symbol::MassA,
    Symbol::MassB,
    Symbol::MassC,
    Symbol::Alpha,
    Symbol::Beta,
    Symbol::PosA,
    Symbol::PosB,
    Symbol::ClassicalX,
    Symbol::ClassicalP,
];

impl Symbol {
    pub fn index(self) -> u16 {
        match self {
            Symbol::Exp(j) => FIXED.len() as u16 + j as u16,
            s => FIXED.iter().position(|&f| f == s).expect("fixed symbol") as u16,
        }
    }

    pub fn from_index(index: u16) -> Symbol {
        FIXED
            .get(index as usize)
            .copied()
            .unwrap_or_else(|| Symbol::Exp(index as u32 - FIXED.len() as u32))
    }

    /// Surface name; `None` for formal exponentials, which print as `exp(..)`.
    pub fn name(self) -> Option<&'static str> {
        Some(match self {
            Symbol::Hbar => "hbar",
            Symbol::Kappa => "kappa",
            Symbol::Time => "t",
            Symbol::MassA => "m_A",
            Symbol::MassB => "m_B",
            Symbol::MassC => "m_C",
            Symbol::Alpha => "alpha",
            Symbol::Beta => "beta",
            Symbol::PosA => "a",
            Symbol::PosB => "b",
            Symbol::ClassicalX => "cx_A",
            Symbol::ClassicalP => "cp_A",
            Symbol::Exp(_) => return None,
        })
    }

    pub fn from_name(name: &str) -> Option<Symbol> {
        FIXED.iter().copied().find(|s| s.name() == Some(name))
    }

    pub fn mass(particle: crate::qrf::Particle) -> Symbol {
        use crate::qrf::Particle;
        match particle {
            Particle::A => Symbol::MassA,
            Particle::B => Symbol::MassB,
            Particle::C => Symbol::MassC,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Exp(j) => write!(f, "exp({})", exponent_of(*j)),
            s => f.write_str(s.name().expect("named symbol")),
        }
    }
}

fn registry() -> &'static RwLock<Vec<Scalar>> {
    static REGISTRY: OnceLock<RwLock<Vec<Scalar>>> = OnceLock::new();
    REGISTRY.get_or_init(|| RwLock::new(Vec::new()))
}

/// Exponent registered for the formal symbol `Exp(j)`.
pub fn exponent_of(j: u32) -> Scalar {
    registry().read().expect("registry lock")[j as usize].clone()
}

/// Interns `exp(c)`: returns the formal symbol for `c`, or its inverse when
/// `-c` is already registered.
pub(crate) fn intern_exp(c: &Scalar) -> (u32, bool) {
    let neg = -c;
    {
        let reg = registry().read().expect("registry lock");
        for (j, e) in reg.iter().enumerate() {
            if e == c {
                return (j as u32, false);
            }
            if *e == neg {
                return (j as u32, true);
            }
        }
    }
    let mut reg = registry().write().expect("registry lock");
    for (j, e) in reg.iter().enumerate() {
        if e == c {
            return (j as u32, false);
        }
        if *e == neg {
            return (j as u32, true);
        }
    }
    reg.push(c.clone());
    (reg.len() as u32 - 1, false)
}
