use qrf_core::fixtures::{self, ActionTable};
use qrf_core::qrf::{sd_composed, transitivity_check, CompiledMap, Particle, QrfWord, WordKind};
use qrf_core::weyl::WeylPoly;

fn assert_action(m: &CompiledMap, table: ActionTable) {
    for (var, expected) in table {
        let got = m.image_of(var).unwrap();
        let want = m.target.parse(expected).unwrap();
        assert_eq!(
            got,
            want,
            "{var}: got {} want {}",
            m.target.format(&got),
            m.target.format(&want)
        );
    }
}

fn compiled(kind: WordKind) -> CompiledMap {
    QrfWord::make(kind, Particle::C, Particle::A)
        .unwrap()
        .compile()
        .unwrap()
}

#[test]
fn translation_action_table() {
    assert_action(&compiled(WordKind::Sx), fixtures::SX_ACTION);
}

#[test]
fn translation_with_evolution_action_table() {
    assert_action(&compiled(WordKind::ST), fixtures::ST_ACTION);
}

#[test]
fn boost_action_table() {
    assert_action(&compiled(WordKind::Sb), fixtures::SB_ACTION);
}

#[test]
fn composite_action_table() {
    let m = sd_composed(Particle::C, Particle::A)
        .unwrap()
        .equal_constants()
        .unwrap();
    let m = m.aligned_to(&compiled(WordKind::Sx).target).unwrap();
    assert_action(&m, fixtures::SD_ACTION);
}

#[test]
fn factorized_composite_matches() {
    let direct = sd_composed(Particle::C, Particle::A)
        .unwrap()
        .equal_constants()
        .unwrap();
    let fact = compiled(WordKind::SD).equal_constants().unwrap();
    let direct = direct.aligned_to(&fact.target).unwrap();
    assert_eq!(direct.map, fact.map);
}

fn free_a(m: &CompiledMap) -> WeylPoly {
    m.target.parse(fixtures::FREE_HAMILTONIAN_A).unwrap()
}

#[test]
fn extended_symmetries() {
    for kind in [WordKind::ST, WordKind::Sb, WordKind::SD] {
        let m = compiled(kind);
        let h = qrf_core::qrf::free_hamiltonian(&m.source);
        let out = m.extended_symmetry(&h).unwrap();
        let out = out.subst1(qrf_core::Symbol::Kappa, &qrf_core::Scalar::hbar()).unwrap();
        assert_eq!(out, free_a(&m), "{kind:?}: {}", m.target.format(&out));
    }
    let m = sd_composed(Particle::C, Particle::A).unwrap();
    let h = qrf_core::qrf::free_hamiltonian(&m.source);
    let out = m
        .extended_symmetry(&h)
        .unwrap()
        .subst1(qrf_core::Symbol::Kappa, &qrf_core::Scalar::hbar())
        .unwrap();
    assert_eq!(out, free_a(&m));
}

#[test]
fn transitivity() {
    for kind in [WordKind::ST, WordKind::Sb] {
        let r = transitivity_check(kind, true).unwrap();
        assert!(
            r.pass,
            "{kind:?} {:?}",
            r.residual
                .iter()
                .map(|(a, b, v)| format!("{a},{b}: {v}"))
                .collect::<Vec<_>>()
        );
        let r = transitivity_check(kind, false).unwrap();
        assert!(!r.pass);
        assert!(r.vanishes_at_equal_constants);
    }
}
