//! Published reference data, transcribed as expressions in the surface
//! syntax. Checks compare engine output against these tables.

/// Bracket entries `(left, right, combination)`; pairs not listed vanish.
pub type BracketTable = &'static [(&'static str, &'static str, &'static str)];

/// Relational algebra at `t = 0`.
pub const R4_NAMES: [&str; 4] = ["P_AB", "K_AB", "D_A", "D_B"];
pub const R4: BracketTable = &[
    ("K_AB", "P_AB", "i*kappa*m_B/m_A*D_B - i*hbar*m_B/m_A*D_A"),
    ("D_A", "P_AB", "-i*kappa*P_AB"),
    ("D_B", "P_AB", "i*hbar*P_AB"),
    ("D_A", "K_AB", "i*kappa*K_AB"),
    ("D_B", "K_AB", "-i*hbar*K_AB"),
    ("D_A", "D_B", "0"),
];

/// Dynamical algebra with symbolic `t`.
pub const D7_NAMES: [&str; 7] = ["P_AB", "K_AB", "D_A", "D_B", "Q_A", "Q_B", "T"];
pub const D7: BracketTable = &[
    (
        "P_AB",
        "K_AB",
        "i*hbar*m_B/m_A*D_A - i*kappa*m_B/m_A*D_B + 2*i*kappa*m_B/m_A*t*Q_B",
    ),
    ("P_AB", "D_A", "i*kappa*P_AB"),
    ("P_AB", "D_B", "-i*hbar*P_AB"),
    ("P_AB", "Q_A", "i*kappa/m_A*T"),
    ("P_AB", "Q_B", "0"),
    ("P_AB", "T", "2*i*kappa*m_B*Q_B"),
    ("K_AB", "D_A", "-i*kappa*K_AB"),
    ("K_AB", "D_B", "i*hbar*K_AB - 2*i*hbar/m_A*t*T"),
    ("K_AB", "Q_A", "0"),
    ("K_AB", "Q_B", "-i*hbar/m_A*T"),
    ("K_AB", "T", "-2*i*hbar*m_B*Q_A"),
    ("D_A", "Q_A", "2*i*kappa*Q_A"),
    ("D_A", "D_B", "0"),
    ("D_A", "Q_B", "0"),
    ("D_A", "T", "i*kappa*T"),
    ("D_B", "Q_B", "2*i*hbar*Q_B"),
    ("D_B", "Q_A", "0"),
    ("D_B", "T", "i*hbar*T"),
];

/// `{P_AB, K_AB, D}` at `t = 0`.
pub const SU11_NAMES: [&str; 3] = ["P_AB", "K_AB", "D"];
pub const SU11: BracketTable = &[
    ("P_AB", "K_AB", "-i*D"),
    ("P_AB", "D", "-2*i*kappa*hbar*m_B/m_A*P_AB"),
    ("K_AB", "D", "2*i*kappa*hbar*m_B/m_A*K_AB"),
];

/// Six-dimensional subalgebra at `t = 0`.
pub const SIXD_NAMES: [&str; 6] = ["P_AB", "K_AB", "D", "Q_A", "Q_B", "T"];
pub const SIXD: BracketTable = &[
    ("P_AB", "K_AB", "-i*D"),
    ("P_AB", "D", "-2*i*kappa*hbar*m_B/m_A*P_AB"),
    ("K_AB", "D", "2*i*kappa*hbar*m_B/m_A*K_AB"),
    ("P_AB", "Q_A", "i*kappa/m_A*T"),
    ("P_AB", "T", "2*i*kappa*m_B*Q_B"),
    ("P_AB", "Q_B", "0"),
    ("K_AB", "Q_A", "0"),
    ("K_AB", "Q_B", "-i*hbar/m_A*T"),
    ("K_AB", "T", "-2*i*hbar*m_B*Q_A"),
    ("D", "Q_A", "-2*i*kappa*hbar*m_B/m_A*Q_A"),
    ("D", "Q_B", "2*i*kappa*hbar*m_B/m_A*Q_B"),
    ("D", "T", "0"),
    ("Q_A", "Q_B", "0"),
    ("Q_A", "T", "0"),
    ("Q_B", "T", "0"),
];

/// (2+1) Poincare algebra with `eps_12 = 1`.
pub const POINCARE_NAMES: [&str; 6] = ["J", "K1", "K2", "P0", "P1", "P2"];
pub const POINCARE: BracketTable = &[
    ("J", "P1", "i*P2"),
    ("J", "P2", "-i*P1"),
    ("J", "K1", "i*K2"),
    ("J", "K2", "-i*K1"),
    ("J", "P0", "0"),
    ("P1", "K1", "-i*P0"),
    ("P2", "K2", "-i*P0"),
    ("P1", "K2", "0"),
    ("P2", "K1", "0"),
    ("P0", "K1", "-i*P1"),
    ("P0", "K2", "-i*P2"),
    ("K1", "K2", "-i*J"),
    ("P0", "P1", "0"),
    ("P0", "P2", "0"),
    ("P1", "P2", "0"),
];

/// Centrally extended Galilei algebra in one dimension.
pub const GALILEI_NAMES: [&str; 4] = ["G", "P", "P0", "M"];
pub const GALILEI: BracketTable = &[
    ("G", "P0", "i*hbar*P"),
    ("G", "P", "i*hbar*M"),
    ("P0", "P", "0"),
    ("M", "G", "0"),
    ("M", "P", "0"),
    ("M", "P0", "0"),
];

/// One-parameter subgroups: name and the images of `x_A, p_A, x_B, p_B`.
pub const SUBGROUP_IMAGES: &[(&str, [&str; 4])] = &[
    ("P_AB", ["x_A", "p_A - kappa/hbar*p_B", "x_B + x_A", "p_B"]),
    (
        "K_AB",
        [
            "x_A + kappa/hbar*(p_B*t - m_B*x_B)/m_A",
            "p_A",
            "x_B + t*p_A/m_A",
            "p_B + m_B/m_A*p_A",
        ],
    ),
    ("D_A", ["exp(alpha)*x_A", "exp(-alpha)*p_A", "x_B", "p_B"]),
    ("D_B", ["x_A", "p_A", "exp(beta)*x_B", "exp(-beta)*p_B"]),
    ("Q_A", ["x_A + alpha/m_A*p_A", "p_A", "x_B", "p_B"]),
    ("Q_B", ["x_A", "p_A", "x_B + alpha/m_B*p_B", "p_B"]),
    ("T", ["x_A + alpha*kappa/hbar*p_B", "p_A", "x_B + alpha*p_A", "p_B"]),
];

/// Frame change `C -> A`: rows `(source variable, image in frame A)` with
/// physical names.
pub type ActionTable = &'static [(&'static str, &'static str)];

pub const SX_ACTION: ActionTable = &[
    ("x_A", "-x_C"),
    ("p_A", "-p_C - kappa/hbar*p_B"),
    ("x_B", "x_B - x_C"),
    ("p_B", "p_B"),
];

pub const ST_ACTION: ActionTable = &[
    ("x_A", "-x_C + p_C*t*(1/m_C - 1/m_A) - kappa/hbar*p_B/m_A*t"),
    ("p_A", "-p_C - kappa/hbar*p_B"),
    ("x_B", "x_B - x_C + p_C/m_C*t"),
    ("p_B", "p_B"),
];

pub const SB_ACTION: ActionTable = &[
    (
        "x_A",
        "-m_C/m_A*x_C + p_C*t*(1/m_A - 1/m_C) + kappa/hbar*(p_B*t - m_B*x_B)/m_A",
    ),
    ("p_A", "-m_A/m_C*p_C"),
    ("x_B", "x_B - p_C/m_C*t"),
    ("p_B", "p_B - m_B/m_C*p_C"),
];

/// Composite `Sb(B->A) ST(C->B)` at `hbar = kappa`.
pub const SD_ACTION: ActionTable = &[
    (
        "x_A",
        "-m_B/m_A*x_B - (m_A + m_C)/m_A*x_C + p_B*t*(1/m_A - 1/m_B) + p_C*t*(1/m_A + 1/m_C)",
    ),
    ("p_A", "-m_A/m_B*p_B"),
    ("x_B", "-x_C + p_C*t*(1/m_C - 1/m_B) + (m_C + m_A)/m_B*p_B/m_B*t"),
    ("p_B", "-p_C + (m_A + m_C)/m_B*p_B"),
];

/// Free Hamiltonian of the two particles seen from `A`.
pub const FREE_HAMILTONIAN_A: &str = "p_B^2/(2*m_B) + p_C^2/(2*m_C)";

/// Classical counterparts of the relational generators at `kappa = 0`,
/// with `cx_A, cp_A` the commuting values of the frame particle.
pub const CLASSICAL_COUNTERPARTS: &[(&str, &str)] = &[
    ("P_AB", "cx_A*p_B"),
    ("K_AB", "(cp_A/m_A)*(p_B*t - m_B*x_B)"),
    ("Q_B", "p_B^2/(2*m_B)"),
];

/// Galilei representation on particle B.
pub const GALILEI_REP: &[(&str, &str)] = &[
    ("G", "p_B*t - m_B*x_B"),
    ("P", "-p_B"),
    ("P0", "p_B^2/(2*m_B)"),
    ("M", "m_B"),
];
