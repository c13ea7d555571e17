//! `qrf`: command-line front end to the exact QRF engine.
//!
//! Exit status is 0 when every requested check passes, 1 when a check
//! fails and 2 on input or engine errors. Failures also print a JSON error
//! object on standard error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::json;

use qrf_core::canon::{exp_adjoint, SUBGROUPS};
use qrf_core::expr::Parser as ExprParser;
use qrf_core::fixtures::{self, BracketTable};
use qrf_core::lie::{self, algebras, StructureConstants};
use qrf_core::qrf::{self as frames, Particle, QrfWord, WordKind};
use qrf_core::verify::{self, Config, Status};
use qrf_core::weyl::PhaseVariable;
use qrf_core::{limits, poincare, Error, Scalar, Symbol};

/// Setting this variable (to anything but `0`) restricts output to ASCII.
const ASCII_ENV: &str = "QRF_ASCII";

#[derive(Parser)]
#[command(
    name = "qrf",
    version,
    about = "Exact algebra of quantum reference frame transformations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal-ordered commutator [e1, e2].
    Commutator { e1: String, e2: String },
    /// Structure constants of a named algebra or a `name := expr` file.
    Closure {
        /// r4, su11, d7, sixd, galilei, poincare, or a path
        algebra: String,
    },
    /// Canonical map exp(i*lambda*X) (.) exp(-i*lambda*X) of a generator.
    Adjoint {
        /// Generator name (P_AB, K_AB, D_A, D_B, Q_A, Q_B, T) or an expression
        generator: String,
        /// lambda; defaults to the conventional prefactor of a named generator
        #[arg(long, allow_hyphen_values = true)]
        prefactor: Option<String>,
    },
    /// Phase-space images of the seven one-parameter subgroups.
    Table1,
    /// Compile a frame change and inspect it.
    #[command(group(ArgGroup::new("mode").args(["action", "factorize", "symmetry", "transitivity"])))]
    Qrf {
        /// Sx, ST, Sb or SD
        kind: String,
        #[arg(long, default_value = "C")]
        from: String,
        #[arg(long, default_value = "A")]
        to: String,
        /// Images of the source variables (default)
        #[arg(long)]
        action: bool,
        /// Factor list; for SD also the comparison with the two-step chain
        #[arg(long)]
        factorize: bool,
        /// Transformed free Hamiltonian at kappa = hbar
        #[arg(long)]
        symmetry: bool,
        /// Direct against chained frame change
        #[arg(long)]
        transitivity: bool,
    },
    /// kappa -> 0 limit of an operator with the frame pair made classical.
    Limit {
        #[arg(long = "kappa0", allow_hyphen_values = true)]
        expr: String,
    },
    /// Six-generator algebra at t = 0 as the (2+1) Poincare algebra.
    Poincare {
        #[arg(long)]
        casimirs: bool,
    },
    /// Moment invariance of Gaussian states under the compiled maps.
    Gaussian {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = Config::default().invariance_seed)]
        seed: u64,
    },
    /// Run the verification suite.
    Verify {
        /// Run every check (default when no --only is given)
        #[arg(long)]
        all: bool,
        /// Run only checks whose id starts with this prefix
        #[arg(long)]
        only: Vec<String>,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Print per-check details
        #[arg(long, short)]
        verbose: bool,
    },
}

enum Failure {
    Engine(Error),
    Io(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome = Result<(), Failure>;

struct Style {
    ascii: bool,
}

impl Style {
    fn from_env() -> Self {
        let ascii = std::env::var(ASCII_ENV).is_ok_and(|v| !v.is_empty() && v != "0");
        Style { ascii }
    }

    fn arrow(&self) -> &'static str {
        if self.ascii {
            "->"
        } else {
            "→"
        }
    }

    fn status(&self, pass: bool) -> &'static str {
        match (pass, self.ascii) {
            (true, true) => "PASS",
            (false, true) => "FAIL",
            (true, false) => "✓ PASS",
            (false, false) => "✗ FAIL",
        }
    }

    fn verdict(&self, pass: bool, what: &str) -> Outcome {
        println!("{} {what}", self.status(pass));
        if pass {
            Ok(())
        } else {
            Err(Failure::Check(what.to_string()))
        }
    }
}

fn generator_parser(env: &qrf_core::expr::Env) -> ExprParser<'_> {
    ExprParser::new().with_env(env)
}

fn particle(label: &str) -> Result<Particle, Error> {
    Particle::from_label(label).ok_or_else(|| Error::Invalid(format!("unknown frame `{label}`; expected A, B or C")))
}

fn word_kind(name: &str) -> Result<WordKind, Error> {
    WordKind::from_name(name)
        .ok_or_else(|| Error::InvalidWord(format!("unknown word `{name}`; expected Sx, ST, Sb or SD")))
}

fn reference_table(name: &str) -> Option<(&'static [&'static str], BracketTable)> {
    Some(match name.to_ascii_lowercase().as_str() {
        "r4" => (&fixtures::R4_NAMES, fixtures::R4),
        "su11" => (&fixtures::SU11_NAMES, fixtures::SU11),
        "d7" => (&fixtures::D7_NAMES, fixtures::D7),
        "sixd" | "sixd_t0" => (&fixtures::SIXD_NAMES, fixtures::SIXD),
        "galilei" => (&fixtures::GALILEI_NAMES, fixtures::GALILEI),
        "poincare" => (&fixtures::POINCARE_NAMES, fixtures::POINCARE),
        _ => return None,
    })
}

fn commutator(e1: &str, e2: &str) -> Outcome {
    let env = algebras::d7().env();
    let p = generator_parser(&env);
    println!("{}", p.parse(e1)?.commutator(&p.parse(e2)?)?);
    Ok(())
}

fn closure(style: &Style, algebra: &str) -> Outcome {
    let basis = match algebras::by_name(algebra) {
        Ok(b) => b,
        Err(Error::UnknownAlgebra(_)) if std::path::Path::new(algebra).exists() => {
            let src = std::fs::read_to_string(algebra).map_err(|e| Failure::Io(format!("{algebra}: {e}")))?;
            algebras::from_definitions(&src)?
        }
        Err(e) => return Err(e.into()),
    };
    let sc = lie::structure_constants(&basis)?;
    for line in sc.lines() {
        println!("{line}");
    }
    println!("{} generators, {} nonzero brackets", sc.len(), sc.nonzero_count());
    let mut pass = sc.is_antisymmetric() && sc.jacobi_holds();
    if let Some((names, table)) = reference_table(algebra) {
        let diff = sc.differences(&StructureConstants::from_entries(names, table)?);
        for (a, b) in &diff {
            println!("differs from reference: [{a}, {b}]");
        }
        pass &= diff.is_empty();
    }
    style.verdict(pass, &format!("closure of {algebra}"))
}

fn adjoint(style: &Style, generator: &str, prefactor: Option<&str>) -> Outcome {
    let row = SUBGROUPS.iter().find(|r| r.name == generator);
    let env = algebras::d7().env();
    let p = generator_parser(&env);
    let x = p.parse(row.map_or(generator, |r| r.generator))?;
    let lambda = match (prefactor, row) {
        (Some(s), _) => p.parse_scalar(s)?,
        (None, Some(r)) => p.parse_scalar(r.prefactor)?,
        (None, None) => Scalar::one(),
    };
    let map = exp_adjoint(&x, &lambda)?;
    let names = PhaseVariable::ALL.map(|v| v.name());
    for line in map.action_lines(&names, &names) {
        println!("{line}");
    }
    style.verdict(map.check_symplectic().pass, "M Omega M^T = Omega")
}

fn table1(style: &Style) -> Outcome {
    let table = qrf_core::canon::subgroup_table()?;
    let names = PhaseVariable::ALL.map(|v| v.name());
    let mut pass = true;
    for ((row, map), (_, expected)) in table.iter().zip(fixtures::SUBGROUP_IMAGES) {
        println!("{}: exp(i*({})*({}))", row.name, row.prefactor, row.generator);
        for (line, (v, e)) in map
            .action_lines(&names, &names)
            .iter()
            .zip(PhaseVariable::ALL.iter().zip(expected))
        {
            println!("  {line}");
            pass &= map.image(*v) == qrf_core::expr::parse(e)?;
        }
    }
    style.verdict(pass, "all 28 images match the reference")
}

struct QrfArgs<'a> {
    kind: &'a str,
    from: &'a str,
    to: &'a str,
    factorize: bool,
    symmetry: bool,
    transitivity: bool,
}

fn qrf(style: &Style, a: QrfArgs<'_>) -> Outcome {
    let kind = word_kind(a.kind)?;
    let (from, to) = (particle(a.from)?, particle(a.to)?);
    if from == to {
        return Err(Error::InvalidWord(format!("frame change {from}{}{to} is trivial", style.arrow())).into());
    }
    let word = QrfWord::make(kind, from, to)?;
    let header = format!("{}({from}{}{to})", kind.name(), style.arrow());
    if a.transitivity {
        let via = Particle::third(from, to);
        println!(
            "{header} against {}({via}{}{to}) {}({from}{}{via})",
            kind.name(),
            style.arrow(),
            kind.name(),
            style.arrow()
        );
        let equal = frames::transitivity_between(kind, from, to, true)?;
        let general = frames::transitivity_between(kind, from, to, false)?;
        println!("kappa != hbar: {} residual entries", general.residual.len());
        for (r, c, v) in &general.residual {
            println!("  ({r},{c}) {v}");
        }
        return style.verdict(
            equal.pass && general.vanishes_at_equal_constants,
            "transitive at kappa = hbar; residual vanishes there",
        );
    }
    if a.factorize {
        println!("{header}, factors in printed order:");
        for f in &word.factors {
            println!("  {f}");
        }
        if kind != WordKind::SD {
            return Ok(());
        }
        let fact = word.compile()?.equal_constants()?;
        let chain = frames::sd_composed(from, to)?
            .equal_constants()?
            .aligned_to(&fact.target)?;
        let bch = frames::sd_bch_check([1.0, 2.0, 3.0], lie::bch::MAX_ORDER)?;
        println!(
            "BCH order {}: closure {}, error ratio {:.2}, word mismatch {:.3e}",
            bch.order, bch.closure, bch.ratio, bch.word_mismatch
        );
        return style.verdict(
            fact.map == chain.map && bch.closure,
            "factorized word equals the two-step chain",
        );
    }
    let mut m = word.compile()?;
    if a.symmetry {
        let h = frames::free_hamiltonian(&m.source);
        let out = m.extended_symmetry(&h)?.subst1(Symbol::Kappa, &Scalar::hbar())?;
        let want = frames::free_hamiltonian(&m.target);
        println!("H = {}", m.source.format(&h));
        println!("H' = {}", m.target.format(&out));
        return style.verdict(
            out == want,
            &format!("{header} is an extended symmetry at kappa = hbar"),
        );
    }
    if kind == WordKind::SD {
        // the single-swap composite is canonical only for equal constants
        m = m.equal_constants()?;
        println!("{header} at kappa = hbar");
    } else {
        println!("{header}");
    }
    for line in m.action_lines() {
        println!("{line}");
    }
    println!("i*hbar*dS/dt*S^dagger = {}", m.target.format(&m.derivative));
    Ok(())
}

fn limit(expr: &str) -> Outcome {
    let env = algebras::d7().env();
    let p = generator_parser(&env).parse(expr)?;
    println!("{}", limits::classical_limit(&p)?);
    Ok(())
}

fn poincare_cmd(style: &Style, casimirs: bool) -> Outcome {
    let r = poincare::verify_poincare()?;
    for line in r.constants.lines() {
        println!("{line}");
    }
    println!("round trip: {}", r.round_trip);
    let mut pass = r.pass();
    if casimirs {
        let (ok, c, w) = poincare::casimirs_vanish()?;
        println!("C = {} = {c}", poincare::MASS_CASIMIR);
        println!("W = {} = {w}", poincare::PAULI_LUBANSKI);
        pass &= ok;
    }
    style.verdict(pass, "Poincare algebra")
}

fn gaussian(style: &Style, trials: usize, seed: u64) -> Outcome {
    let r = qrf_core::gaussian::invariance_check(trials, seed)?;
    println!("trials {}, seed {}", r.trials, r.seed);
    println!("max deviation {:.3e}", r.max_deviation);
    println!("max symplectic defect {:.3e}", r.max_defect);
    style.verdict(
        r.max_deviation <= verify::ALGEBRAIC_TOLERANCE && r.max_defect <= verify::MAP_TOLERANCE,
        "expectation values invariant",
    )
}

struct VerifyArgs {
    only: Vec<String>,
    out: Option<PathBuf>,
    trials: Option<usize>,
    seed: Option<u64>,
    verbose: bool,
}

fn verify_cmd(style: &Style, a: VerifyArgs) -> Outcome {
    let mut cfg = Config::default();
    if let Some(n) = a.trials {
        cfg.invariance_trials = n;
    }
    if let Some(s) = a.seed {
        cfg.invariance_seed = s;
    }
    let report = verify::run_selected(&cfg, &a.only);
    if report.checks.is_empty() {
        return Err(Error::Invalid(format!("no check matches {:?}", a.only)).into());
    }
    for c in &report.checks {
        let mark = match c.status {
            Status::Pass => style.status(true),
            Status::Fail => style.status(false),
            Status::Error => "ERROR",
        };
        println!("{mark} {} ({:.0} ms)", c.id, c.elapsed_ms);
        if a.verbose || c.status != Status::Pass {
            for d in &c.details {
                println!("    {d}");
            }
        }
    }
    if let Some(path) = &a.out {
        std::fs::write(path, report.to_json() + "\n").map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| c.id.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed checks: {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> Outcome {
    let style = Style::from_env();
    match cli.command {
        Command::Commutator { e1, e2 } => commutator(&e1, &e2),
        Command::Closure { algebra } => closure(&style, &algebra),
        Command::Adjoint { generator, prefactor } => adjoint(&style, &generator, prefactor.as_deref()),
        Command::Table1 => table1(&style),
        Command::Qrf {
            kind,
            from,
            to,
            action: _,
            factorize,
            symmetry,
            transitivity,
        } => qrf(
            &style,
            QrfArgs {
                kind: &kind,
                from: &from,
                to: &to,
                factorize,
                symmetry,
                transitivity,
            },
        ),
        Command::Limit { expr } => limit(&expr),
        Command::Poincare { casimirs } => poincare_cmd(&style, casimirs),
        Command::Gaussian { trials, seed } => gaussian(&style, trials, seed),
        Command::Verify {
            all,
            only,
            out,
            trials,
            seed,
            verbose,
        } => verify_cmd(
            &style,
            VerifyArgs {
                only: if all { Vec::new() } else { only },
                out,
                trials,
                seed,
                verbose,
            },
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, error) = match f {
                Failure::Check(message) => (1, json!({ "kind": "check_failed", "message": message })),
                Failure::Io(message) => (2, json!({ "kind": "io", "message": message })),
                Failure::Engine(e) => {
                    let mut obj = json!({ "kind": e.kind(), "message": e.to_string() });
                    if let Error::Syntax { line, column, .. } = &e {
                        obj["line"] = json!(line);
                        obj["column"] = json!(column);
                    }
                    (2, obj)
                }
            };
            eprintln!("{}", json!({ "error": error }));
            ExitCode::from(code)
        }
    }
}
