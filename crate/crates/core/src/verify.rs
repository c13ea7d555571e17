//! The full verification suite and its JSON report.
//!
//! Each check is a pure function of a [`Config`]; [`run_all`] runs them in
//! id order and collects the outcomes into a [`Report`].

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::Matrix5;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::subgroup_table;
use crate::error::Result;
use crate::fixtures::{self, ActionTable, BracketTable};
use crate::gaussian::{self, numeric_matrix};
use crate::lie::{self, algebras, LieBasis, StructureConstants};
use crate::limits;
use crate::poincare;
use crate::qrf::{self, CompiledMap, Particle, QrfWord, WordKind};
use crate::scalar::{Bindings, NumBindings};
use crate::weyl::PhaseVariable;
use crate::{Scalar, Symbol};

pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance for numeric algebraic identities.
pub const ALGEBRAIC_TOLERANCE: f64 = 1e-10;
/// Tolerance for numeric map comparisons and symplectic defects.
pub const MAP_TOLERANCE: f64 = 1e-12;
/// Tolerance for the finite-difference check.
pub const FINITE_DIFFERENCE_TOLERANCE: f64 = 1e-6;
pub const FINITE_DIFFERENCE_STEP: f64 = 1e-5;

#[derive(Clone, Debug)]
pub struct Config {
    pub invariance_trials: usize,
    pub invariance_seed: u64,
    pub factorization_seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            invariance_trials: 1000,
            invariance_seed: 20_240_917,
            factorization_seed: 7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// What the check compares against.
    pub source: String,
    pub status: Status,
    pub details: Vec<String>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub checks: Vec<CheckResult>,
    pub seeds: BTreeMap<String, u64>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Collected findings of one check.
#[derive(Default)]
struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            details: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, line: impl Into<String>) {
        let line = line.into();
        self.details
            .push(format!("{} {line}", if ok { "ok" } else { "FAILED" }));
        self.pass &= ok;
    }
}

pub struct Check {
    pub id: &'static str,
    pub source: &'static str,
    run: fn(&Config) -> Result<Outcome>,
}

pub const CHECKS: [Check; 12] = [
    Check {
        id: "01-r4-closure",
        source: "relational algebra brackets",
        run: r4_closure,
    },
    Check {
        id: "02-d7-closure",
        source: "dynamical algebra brackets with symbolic time",
        run: d7_closure,
    },
    Check {
        id: "03-subgroup-images",
        source: "phase-space images of the seven one-parameter subgroups",
        run: subgroup_images,
    },
    Check {
        id: "04-qrf-actions",
        source: "frame-change actions of the translation, boost and composite words",
        run: qrf_actions,
    },
    Check {
        id: "05-extended-symmetry",
        source: "free Hamiltonian under the time-dependent frame changes",
        run: extended_symmetry,
    },
    Check {
        id: "06-transitivity",
        source: "direct versus chained frame changes",
        run: transitivity,
    },
    Check {
        id: "07-sd-factorization",
        source: "single-swap composite word versus boost after translation",
        run: sd_factorization,
    },
    Check {
        id: "08-su11-central",
        source: "su(1,1) brackets and the central element",
        run: su11_central,
    },
    Check {
        id: "09-classical-limit",
        source: "kappa -> 0 counterparts, Galilei algebra and Poisson bracket",
        run: classical_limit,
    },
    Check {
        id: "10-poincare",
        source: "six-generator algebra at t = 0 as the (2+1) Poincare algebra",
        run: poincare_check,
    },
    Check {
        id: "11-properties",
        source: "Jacobi identity, symplectic invariance, Gaussian moments, time derivative",
        run: properties,
    },
    Check {
        id: "12-measurement",
        source: "relational position measurement before and after the frame change",
        run: measurement,
    },
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Runs one check; an engine error is reported as [`Status::Error`].
pub fn run_check(check: &Check, cfg: &Config) -> CheckResult {
    let start = Instant::now();
    let (status, details) = match (check.run)(cfg) {
        Ok(o) => (if o.pass { Status::Pass } else { Status::Fail }, o.details),
        Err(e) => (Status::Error, vec![e.to_string()]),
    };
    CheckResult {
        id: check.id.to_string(),
        source: check.source.to_string(),
        status,
        details,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Runs the checks whose id starts with one of `filter` (all when empty).
pub fn run_selected(cfg: &Config, filter: &[String]) -> Report {
    let mut checks: Vec<CheckResult> = CHECKS
        .iter()
        .filter(|c| filter.is_empty() || filter.iter().any(|f| c.id.starts_with(f.as_str())))
        .map(|c| run_check(c, cfg))
        .collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let seeds = BTreeMap::from([
        ("invariance".to_string(), cfg.invariance_seed),
        ("factorization".to_string(), cfg.factorization_seed),
    ]);
    Report {
        schema_version: SCHEMA_VERSION,
        checks,
        seeds,
    }
}

pub fn run_all(cfg: &Config) -> Report {
    run_selected(cfg, &[])
}

fn compare_table(
    out: &mut Outcome,
    label: &str,
    basis: &LieBasis,
    names: &[&str],
    table: BracketTable,
) -> Result<StructureConstants> {
    let sc = lie::structure_constants(basis)?;
    let reference = StructureConstants::from_entries(names, table)?;
    let diff = sc.differences(&reference);
    out.require(
        diff.is_empty(),
        format!(
            "{label}: {} nonzero brackets, {} differences {:?}",
            sc.nonzero_count(),
            diff.len(),
            diff
        ),
    );
    Ok(sc)
}

fn r4_closure(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    let sc = compare_table(&mut out, "R4", &algebras::r4(), &fixtures::R4_NAMES, fixtures::R4)?;
    out.details.extend(sc.lines());
    Ok(out)
}

fn d7_closure(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    let sc = compare_table(&mut out, "D7", &algebras::d7(), &fixtures::D7_NAMES, fixtures::D7)?;
    let pk = sc.bracket_by_name("P_AB", "K_AB").map(|b| b[5].to_string());
    out.require(
        pk.as_deref() == Some("2*i*kappa*t*m_B/m_A"),
        format!("[P_AB, K_AB] Q_B coefficient {pk:?}"),
    );
    let kd = sc.bracket_by_name("K_AB", "D_B").map(|b| b[6].to_string());
    out.require(
        kd.as_deref() == Some("-2*i*hbar*t/m_A"),
        format!("[K_AB, D_B] T coefficient {kd:?}"),
    );
    // at t = 0 the relational table must reappear, read antisymmetrically
    let at_zero = lie::structure_constants(&algebras::d7_at(&Scalar::zero()))?;
    let r4 = lie::structure_constants(&algebras::r4())?;
    let consistent = fixtures::R4_NAMES.iter().all(|a| {
        fixtures::R4_NAMES.iter().all(|b| {
            let (full, rel) = (at_zero.bracket_by_name(a, b), r4.bracket_by_name(a, b));
            matches!((full, rel), (Some(f), Some(r)) if f[..4] == *r && f[4..].iter().all(Scalar::is_zero))
        })
    });
    out.require(consistent, "D7 at t = 0 restricts to the relational table");
    out.details.extend(sc.lines());
    Ok(out)
}

fn subgroup_images(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut matched = 0;
    for ((row, map), (name, images)) in subgroup_table()?.iter().zip(fixtures::SUBGROUP_IMAGES) {
        for (v, expected) in PhaseVariable::ALL.iter().zip(images) {
            let got = map.image(*v);
            if row.name == *name && got == crate::expr::parse(expected)? {
                matched += 1;
            } else {
                out.require(false, format!("{name}: {} -> {got}, expected {expected}", v.name()));
            }
        }
    }
    out.require(matched == 28, format!("{matched}/28 images reproduced"));
    Ok(out)
}

fn compare_action(out: &mut Outcome, label: &str, m: &CompiledMap, table: ActionTable) -> Result<()> {
    let mut ok = true;
    for (var, expected) in table {
        let got = m.image_of(var).unwrap_or_default();
        if got != m.target.parse(expected)? {
            ok = false;
            out.details.push(format!(
                "{label}: {var} -> {}, expected {expected}",
                m.target.format(&got)
            ));
        }
    }
    out.require(ok, format!("{label}: {} images", table.len()));
    Ok(())
}

fn compiled(kind: WordKind) -> Result<CompiledMap> {
    QrfWord::make(kind, Particle::C, Particle::A)?.compile()
}

fn qrf_actions(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    compare_action(&mut out, "Sx", &compiled(WordKind::Sx)?, fixtures::SX_ACTION)?;
    compare_action(&mut out, "ST", &compiled(WordKind::ST)?, fixtures::ST_ACTION)?;
    compare_action(&mut out, "Sb", &compiled(WordKind::Sb)?, fixtures::SB_ACTION)?;
    let target = compiled(WordKind::Sx)?.target;
    let sd = qrf::sd_composed(Particle::C, Particle::A)?
        .equal_constants()?
        .aligned_to(&target)?;
    compare_action(&mut out, "SD", &sd, fixtures::SD_ACTION)?;
    Ok(out)
}

fn extended_symmetry(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut maps: Vec<(String, CompiledMap)> = [WordKind::ST, WordKind::Sb, WordKind::SD]
        .into_iter()
        .map(|k| Ok((k.name().to_string(), compiled(k)?)))
        .collect::<Result<_>>()?;
    maps.push(("SD (composed)".into(), qrf::sd_composed(Particle::C, Particle::A)?));
    for (label, m) in maps {
        let h = qrf::free_hamiltonian(&m.source);
        let got = m.extended_symmetry(&h)?.subst1(Symbol::Kappa, &Scalar::hbar())?;
        let want = m.target.parse(fixtures::FREE_HAMILTONIAN_A)?;
        out.require(got == want, format!("{label}: H' = {}", m.target.format(&got)));
    }
    Ok(out)
}

fn transitivity(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    for kind in [WordKind::ST, WordKind::Sb] {
        let equal = qrf::transitivity_check(kind, true)?;
        out.require(
            equal.pass,
            format!("{}: chain equals direct at kappa = hbar", kind.name()),
        );
        let general = qrf::transitivity_check(kind, false)?;
        out.require(
            !general.pass && general.vanishes_at_equal_constants,
            format!(
                "{}: {} residual entries for kappa != hbar, all vanishing at kappa = hbar",
                kind.name(),
                general.residual.len()
            ),
        );
        for (r, c, v) in general.residual.iter().take(4) {
            out.details.push(format!("  residual ({r},{c}) = {v}"));
        }
    }
    Ok(out)
}

fn sd_factorization(cfg: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    let fact = compiled(WordKind::SD)?.equal_constants()?;
    let direct = qrf::sd_composed(Particle::C, Particle::A)?
        .equal_constants()?
        .aligned_to(&fact.target)?;
    out.require(fact.map == direct.map, "symbolic maps agree");
    out.require(fact.derivative == direct.derivative, "derivative terms agree");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.factorization_seed);
    for _ in 0..3 {
        let mut v = NumBindings::new();
        for s in [Symbol::MassA, Symbol::MassB, Symbol::MassC] {
            v.insert(s, rng.gen_range(0.5..5.0));
        }
        v.insert(Symbol::Time, rng.gen_range(-3.0..3.0));
        v.insert(Symbol::Hbar, rng.gen_range(0.5..2.0));
        let a: Matrix5<f64> = numeric_matrix(fact.map.matrix(), &v)?;
        let b: Matrix5<f64> = numeric_matrix(direct.map.matrix(), &v)?;
        let d = (a - b).amax();
        out.require(d <= MAP_TOLERANCE, format!("numeric agreement {d:.3e} at {v:?}"));
    }
    let bch = qrf::sd_bch_check([1.0, 2.0, 3.0], lie::bch::MAX_ORDER)?;
    out.require(
        bch.closure && bch.word_mismatch <= MAP_TOLERANCE,
        format!(
            "BCH order {}: closure {}, error ratio {:.2}, word mismatch {:.3e}",
            bch.order, bch.closure, bch.ratio, bch.word_mismatch
        ),
    );
    Ok(out)
}

fn su11_central(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    compare_table(
        &mut out,
        "su(1,1)",
        &algebras::su11(),
        &fixtures::SU11_NAMES,
        fixtures::SU11,
    )?;
    let star = algebras::d_star();
    for (name, g) in algebras::su11().iter() {
        out.require(star.commutator(g)?.is_zero(), format!("[D*, {name}] = 0"));
    }
    Ok(out)
}

fn classical_limit(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    for ((name, got), (ref_name, expected)) in limits::counterparts()?.iter().zip(fixtures::CLASSICAL_COUNTERPARTS) {
        let want = limits::ClassicalWeylPoly::parse(expected)?;
        out.require(name == ref_name && *got == want, format!("{name} -> {got}"));
    }
    let g = limits::galilei_recovery()?;
    out.require(
        g.differences.is_empty(),
        format!("Galilei brackets, differences {:?}", g.differences),
    );
    out.require(g.casimir.is_zero(), format!("2 M P0 - P^2 = {}", g.casimir));
    out.require(
        g.matches_representation,
        "generators equal the one-particle representation",
    );
    let x = limits::ClassicalWeylPoly::parse("cx_A")?;
    let p = limits::ClassicalWeylPoly::parse("cp_A")?;
    let pb = limits::poisson_bracket(&x, &p)?;
    out.require(
        pb.as_weyl() == &crate::weyl::WeylPoly::one(),
        format!("{{x_A, p_A}} = {pb}"),
    );
    Ok(out)
}

fn poincare_check(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    compare_table(
        &mut out,
        "6D",
        &algebras::sixd_t0(),
        &fixtures::SIXD_NAMES,
        fixtures::SIXD,
    )?;
    let r = poincare::verify_poincare()?;
    out.require(
        r.differences.is_empty(),
        format!("Poincare brackets, differences {:?}", r.differences),
    );
    out.require(r.round_trip, "change of basis round-trips");
    out.require(
        r.matches_representation && r.hermitian,
        "transformed basis equals the Hermitian representation",
    );
    let (ok, c, w) = poincare::casimirs_vanish()?;
    out.require(ok, format!("C = {c}, W = {w}"));
    Ok(out)
}

fn properties(cfg: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    let violations = algebras::d7().jacobi_violations()?;
    out.require(
        violations.is_empty(),
        format!("Jacobi over all D7 triples, violations {violations:?}"),
    );

    let mut equal = Bindings::new();
    equal.insert(Symbol::Kappa, Scalar::hbar());
    for kind in WordKind::ALL {
        let m = compiled(kind)?;
        let report = m.map.check_symplectic();
        // the composite word is only canonical at kappa = hbar
        let ok = if kind == WordKind::SD {
            report.holds_with(&equal)?
        } else {
            report.pass
        };
        out.require(ok, format!("{}: M Omega M^T = Omega", kind.name()));
    }

    let inv = gaussian::invariance_check(cfg.invariance_trials, cfg.invariance_seed)?;
    out.require(
        inv.max_defect <= MAP_TOLERANCE,
        format!("numeric symplectic defect {:.3e}", inv.max_defect),
    );
    out.require(
        inv.max_deviation <= ALGEBRAIC_TOLERANCE,
        format!(
            "Gaussian invariance over {} trials (seed {}): max deviation {:.3e}",
            inv.trials, inv.seed, inv.max_deviation
        ),
    );
    let fd = gaussian::finite_difference_check(FINITE_DIFFERENCE_STEP)?;
    out.require(
        fd <= FINITE_DIFFERENCE_TOLERANCE,
        format!("finite difference of the time derivative term {fd:.3e}"),
    );
    Ok(out)
}

fn measurement(_: &Config) -> Result<Outcome> {
    let mut out = Outcome::new();
    let (a, b) = (Scalar::symbol(Symbol::PosA), Scalar::symbol(Symbol::PosB));
    let r = qrf::measurement_scenario(&a, &b)?;
    out.require(
        r.pass(&a, &b),
        format!(
            "<x_B> = {} -> {}, <x_B - x_A> = {} -> {}",
            r.position_values.0, r.position_values.1, r.relative_values.0, r.relative_values.1
        ),
    );
    let (rel, pos) = gaussian::measurement_numeric(1.0, 3.0, gaussian::DELTA_WIDTH)?;
    out.require(
        (rel - 3.0).abs() <= ALGEBRAIC_TOLERANCE && (pos - 2.0).abs() <= ALGEBRAIC_TOLERANCE,
        format!("numeric at (a, b) = (1, 3): <x_B - x_C> = {rel}, <x_B> = {pos}"),
    );
    let (rel_n, pos_n) = gaussian::measurement_numeric(1.0, 3.0, gaussian::DELTA_WIDTH / 10.0)?;
    let shift = (rel_n - rel).abs().max((pos_n - pos).abs());
    out.require(
        shift < MAP_TOLERANCE,
        format!("narrowing the width tenfold shifts means by {shift:.3e}"),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_sorted_and_unique() {
        let ids = check_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn filtered_report_serializes() {
        let r = run_selected(&Config::default(), &["01".into(), "08".into()]);
        assert_eq!(r.checks.len(), 2);
        assert!(r.all_pass(), "{}", r.to_json());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["checks"][0]["status"], "pass");
    }
}
