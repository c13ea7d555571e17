use qrf_core::fixtures;
use qrf_core::lie::{algebras, structure_constants, LieBasis, StructureConstants};
use qrf_core::{Error, Scalar};

fn check(basis: &LieBasis, names: &[&str], table: fixtures::BracketTable) -> StructureConstants {
    let sc = structure_constants(basis).unwrap();
    let reference = StructureConstants::from_entries(names, table).unwrap();
    assert!(
        sc.differences(&reference).is_empty(),
        "engine:\n{sc}\nreference:\n{reference}"
    );
    sc
}

#[test]
fn relational_algebra() {
    let sc = check(&algebras::r4(), &fixtures::R4_NAMES, fixtures::R4);
    assert_eq!(sc.nonzero_count(), 5);
}

#[test]
fn dynamical_algebra_with_symbolic_time() {
    let sc = check(&algebras::d7(), &fixtures::D7_NAMES, fixtures::D7);
    assert!(sc.is_antisymmetric());
    assert!(sc.jacobi_holds());
    assert!(algebras::d7().jacobi_violations().unwrap().is_empty());
    // time-dependent terms
    let pk = sc.bracket_by_name("P_AB", "K_AB").unwrap();
    assert_eq!(pk[5].to_string(), "2*i*kappa*t*m_B/m_A");
    let kd = sc.bracket_by_name("K_AB", "D_B").unwrap();
    assert_eq!(kd[6].to_string(), "-2*i*hbar*t/m_A");
}

#[test]
fn dynamical_algebra_at_zero_time_matches_relational_table() {
    let sc = structure_constants(&algebras::d7_at(&Scalar::zero())).unwrap();
    let r4 = structure_constants(&algebras::r4()).unwrap();
    for a in fixtures::R4_NAMES {
        for b in fixtures::R4_NAMES {
            assert_eq!(
                sc.bracket_by_name(a, b).unwrap()[..4],
                *r4.bracket_by_name(a, b).unwrap()
            );
        }
    }
}

#[test]
fn su11_and_central_element() {
    check(&algebras::su11(), &fixtures::SU11_NAMES, fixtures::SU11);
    let star = algebras::d_star();
    for (_, g) in algebras::su11().iter() {
        assert!(star.commutator(g).unwrap().is_zero());
    }
}

#[test]
fn galilei_representation() {
    check(&algebras::galilei_rep(), &fixtures::GALILEI_NAMES, fixtures::GALILEI);
}

#[test]
fn all_generators_hermitian() {
    for name in algebras::ALGEBRA_NAMES {
        assert!(algebras::by_name(name).unwrap().all_hermitian(), "{name}");
    }
    assert!(matches!(algebras::by_name("so3"), Err(Error::UnknownAlgebra(_))));
}

#[test]
fn definitions_file_round_trip() {
    let src = "# relational generators\nP := x_A*p_B\nD_A := (x_A*p_A + p_A*x_A)/2\n";
    let b = algebras::from_definitions(src).unwrap();
    assert_eq!(b.names(), ["P", "D_A"]);
    let sc = structure_constants(&b).unwrap();
    assert_eq!(sc.format_bracket(0, 1), "i*kappa*P");
}
