use qrf_core::canon::{adjoint_matrix, compose, exp_adjoint, subgroup_table, CanonicalMap, SUBGROUPS};
use qrf_core::expr::{parse, parse_scalar};
use qrf_core::fixtures;
use qrf_core::gaussian::numeric_compile;
use qrf_core::qrf::{Particle, QrfWord};
use qrf_core::scalar::{Bindings, NumBindings};
use qrf_core::weyl::PhaseVariable;
use qrf_core::{Scalar, Symbol};

#[test]
fn all_subgroup_images() {
    let table = subgroup_table().unwrap();
    let mut checked = 0;
    for ((row, map), (name, images)) in table.iter().zip(fixtures::SUBGROUP_IMAGES) {
        assert_eq!(row.name, *name);
        for (v, expected) in PhaseVariable::ALL.iter().zip(images) {
            assert_eq!(map.image(*v), parse(expected).unwrap(), "{name}: {}", v.name());
            checked += 1;
        }
        assert!(map.check_symplectic().pass, "{name}");
    }
    assert_eq!(checked, 28);
}

#[test]
fn first_order_term_is_the_adjoint() {
    for row in SUBGROUPS {
        let g = parse(row.generator).unwrap();
        let lambda = parse_scalar(row.prefactor).unwrap();
        let param = if row.prefactor.contains("beta") {
            Symbol::Beta
        } else {
            Symbol::Alpha
        };
        // rescale so the group parameter multiplies the prefactor
        let lam = if lambda.depends_on(param) {
            lambda.clone()
        } else {
            &lambda * &Scalar::symbol(param)
        };
        let map = exp_adjoint(&g, &lam).unwrap();
        let d = map.derivative(param).subst1(param, &Scalar::zero()).unwrap();
        let unit = lam.derivative(param);
        let n = adjoint_matrix(&g, &unit).unwrap();
        assert_eq!(d.matrix(), n.matrix(), "{}", row.name);
        assert!(n.preserves_form());
    }
}

#[test]
fn translation_then_boost_at_numeric_masses() {
    let p = exp_adjoint(&parse("x_A*p_B").unwrap(), &parse_scalar("1/hbar").unwrap()).unwrap();
    let k = exp_adjoint(
        &parse("(p_A/m_A)*(p_B*t - m_B*x_B)").unwrap(),
        &parse_scalar("1/hbar").unwrap(),
    )
    .unwrap();
    let mut b = Bindings::new();
    b.insert(Symbol::Time, Scalar::zero());
    b.insert(Symbol::Kappa, Scalar::hbar());
    b.insert(Symbol::MassA, Scalar::one());
    b.insert(Symbol::MassB, Scalar::from_int(2));
    let m = compose(&[p, k]).substitute(&b).unwrap();
    let expect = ["x_A - 2*x_B", "-p_B - p_A", "x_A - x_B", "p_B + 2*p_A"];
    for (v, e) in PhaseVariable::ALL.iter().zip(expect) {
        assert_eq!(m.image(*v), parse(e).unwrap(), "{}", v.name());
    }
    assert!(m.check_symplectic().holds_with(&b).unwrap());
    assert!(compose(&[m.clone(), m.inverse().unwrap()]).matrix().is_identity());
}

#[test]
fn evolution_commutes_through_the_swap() {
    // exp(-(i/kappa) Q_C t) swap = swap exp(-(i/kappa) (m_A/m_C) Q_A t)
    let q_c = exp_adjoint(&parse("p_A^2/(2*m_C)").unwrap(), &parse_scalar("-t/kappa").unwrap()).unwrap();
    let q_a = exp_adjoint(
        &parse("p_A^2/(2*m_A)").unwrap(),
        &parse_scalar("-(m_A/m_C)*t/kappa").unwrap(),
    )
    .unwrap();
    let swap = CanonicalMap::parity_swap();
    assert_eq!(compose(&[swap.clone(), q_c]), compose(&[q_a, swap]));
}

#[test]
fn compiled_words_are_symplectic() {
    for kind in qrf_core::qrf::WordKind::ALL {
        let m = QrfWord::make(kind, Particle::C, Particle::A)
            .unwrap()
            .compile()
            .unwrap();
        let report = m.map.check_symplectic();
        if kind == qrf_core::qrf::WordKind::SD {
            let mut b = Bindings::new();
            b.insert(Symbol::Kappa, Scalar::hbar());
            assert!(report.holds_with(&b).unwrap(), "{kind:?}");
        } else {
            assert!(report.pass, "{kind:?}");
        }
        let mut v = NumBindings::new();
        for (s, x) in [
            (Symbol::MassA, 1.0),
            (Symbol::MassB, 2.0),
            (Symbol::MassC, 3.0),
            (Symbol::Time, 1.0),
            (Symbol::Hbar, 1.0),
            (Symbol::Kappa, 1.0),
        ] {
            v.insert(s, x);
        }
        assert!(numeric_compile(&m.map, &v).unwrap().defect <= 1e-12);
    }
}
