use proptest::prelude::*;

use qrf_core::canon::{compose, exp_adjoint, SUBGROUPS};
use qrf_core::expr::{parse, parse_scalar};
use qrf_core::limits::{classical_limit, poisson_bracket, ClassicalWeylPoly};
use qrf_core::qrf::Particle;
use qrf_core::weyl::WeylPoly;
use qrf_core::{Scalar, Symbol};

fn atom(k: usize) -> Scalar {
    match k {
        0 => Scalar::one(),
        1 => Scalar::i(),
        2 => Scalar::hbar(),
        3 => Scalar::kappa(),
        4 => Scalar::t(),
        5 => Scalar::mass(Particle::A),
        _ => Scalar::mass(Particle::B),
    }
}

prop_compose! {
    fn small_rational()(n in -6i64..=6, d in 1i64..=4) -> Scalar {
        Scalar::from_ratio(n, d)
    }
}

prop_compose! {
    /// Sums of rational multiples of products of two atoms, optionally
    /// divided by a shifted mass.
    fn scalar()(
        terms in prop::collection::vec((small_rational(), 0usize..7, 0usize..7), 1..4),
        shift in prop::option::of(1i64..4),
    ) -> Scalar {
        let mut s = Scalar::zero();
        for (c, a, b) in terms {
            s += &(&c * &(&atom(a) * &atom(b)));
        }
        match shift {
            Some(k) => s.checked_div(&(&Scalar::mass(Particle::C) + &Scalar::from_int(k))).unwrap(),
            None => s,
        }
    }
}

prop_compose! {
    /// Polynomials of degree at most 2 with symbolic coefficients.
    fn weyl()(terms in prop::collection::vec(([0u8..=2, 0u8..=2, 0u8..=2, 0u8..=2], scalar()), 1..4)) -> WeylPoly {
        WeylPoly::from_terms(terms.into_iter().map(|(e, c)| (cap_degree(e), c)))
    }
}

fn cap_degree(mut e: [u8; 4]) -> [u8; 4] {
    while e.iter().map(|&x| x as u32).sum::<u32>() > 2 {
        let k = e.iter().position(|&x| x > 0).unwrap();
        e[k] -= 1;
    }
    e
}

prop_compose! {
    /// Degree at most 2 with coefficients that are rational multiples of a
    /// single atom; keeps nested commutators cheap.
    fn simple_weyl()(terms in prop::collection::vec(([0u8..=2, 0u8..=2, 0u8..=2, 0u8..=2], small_rational(), 0usize..7), 1..4)) -> WeylPoly {
        WeylPoly::from_terms(terms.into_iter().map(|(e, c, a)| (cap_degree(e), &c * &atom(a))))
    }
}

prop_compose! {
    /// Polynomials in `cx_A, cp_A, x_B, p_B` of total degree at most 2,
    /// with kappa-free coefficients.
    fn classical()(terms in prop::collection::vec(([0u8..=1, 0u8..=1, 0u8..=1, 0u8..=1], small_rational(), 0usize..3), 1..4)) -> ClassicalWeylPoly {
        let mut p = WeylPoly::zero();
        for (e, c, a) in terms {
            let e = cap_degree(e);
            let c = &c * &[Scalar::one(), Scalar::hbar(), Scalar::mass(Particle::B)][a];
            let c = &(&c * &Scalar::symbol(Symbol::ClassicalX).pow(e[0] as u32)) * &Scalar::symbol(Symbol::ClassicalP).pow(e[1] as u32);
            p = &p + &WeylPoly::from_terms(vec![([0, 0, e[2], e[3]], c)]);
        }
        ClassicalWeylPoly::new(p).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }
    }

    #[test]
    fn scalar_round_trip(a in scalar()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn weyl_round_trip(p in weyl()) {
        prop_assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn commutator_is_antisymmetric_and_bilinear(a in weyl(), b in weyl(), c in weyl(), l in scalar()) {
        let ab = a.commutator(&b).unwrap();
        prop_assert_eq!(&ab + &b.commutator(&a).unwrap(), WeylPoly::zero());
        prop_assert_eq!(
            (&a + &b).commutator(&c).unwrap(),
            &a.commutator(&c).unwrap() + &b.commutator(&c).unwrap()
        );
        prop_assert_eq!(a.scale(&l).commutator(&b).unwrap(), ab.scale(&l));
    }

    #[test]
    fn jacobi_identity(a in simple_weyl(), b in simple_weyl(), c in simple_weyl()) {
        let j = &(&a.commutator(&b.commutator(&c).unwrap()).unwrap()
            + &b.commutator(&c.commutator(&a).unwrap()).unwrap())
            + &c.commutator(&a.commutator(&b).unwrap()).unwrap();
        prop_assert!(j.is_zero(), "{}", j);
    }

    #[test]
    fn dagger_reverses_products(a in weyl(), b in weyl()) {
        prop_assert_eq!(a.dagger().dagger(), a.clone());
        prop_assert_eq!(a.multiply(&b).unwrap().dagger(), b.dagger().multiply(&a.dagger()).unwrap());
        let h = &a + &a.dagger();
        prop_assert!(h.is_hermitian());
    }

    #[test]
    fn classical_limit_is_a_morphism(f in classical(), g in classical()) {
        let (qf, qg) = (
            qrf_core::limits::quantize(&f, false).unwrap(),
            qrf_core::limits::quantize(&g, false).unwrap(),
        );
        prop_assert_eq!(classical_limit(&(&qf + &qg)).unwrap().into_weyl(), f.as_weyl() + g.as_weyl());
        prop_assert_eq!(classical_limit(&qf.multiply(&qg).unwrap()).unwrap(), f.multiply(&g).unwrap());
        prop_assert_eq!(classical_limit(&qf).unwrap(), f);
    }

    #[test]
    fn poisson_bracket_is_antisymmetric(f in classical(), g in classical()) {
        // only the frame pair contributes; drop the B dependence first
        let frame_only = |p: &ClassicalWeylPoly| {
            ClassicalWeylPoly::new(WeylPoly::from_terms(
                p.as_weyl().terms().filter(|(e, _)| e[2] == 0 && e[3] == 0).map(|(e, c)| (*e, c.clone())),
            ))
            .unwrap()
        };
        let (f, g) = (frame_only(&f), frame_only(&g));
        let fg = poisson_bracket(&f, &g).unwrap();
        let gf = poisson_bracket(&g, &f).unwrap();
        prop_assert_eq!(fg.as_weyl() + gf.as_weyl(), WeylPoly::zero());
    }

    #[test]
    fn products_of_subgroup_maps_are_symplectic(
        picks in prop::collection::vec((0usize..7, -4i64..=4), 1..5),
    ) {
        let maps: Vec<_> = picks
            .iter()
            .map(|&(k, n)| {
                let row = &SUBGROUPS[k];
                let lam = parse_scalar(row.prefactor).unwrap();
                let param = if row.prefactor.contains("beta") { Symbol::Beta } else { Symbol::Alpha };
                let lam = if lam.depends_on(param) { lam } else { &lam * &Scalar::symbol(param) };
                let lam = lam.subst1(param, &Scalar::from_ratio(n, 3)).unwrap();
                exp_adjoint(&parse(row.generator).unwrap(), &lam).unwrap()
            })
            .collect();
        let m = compose(&maps);
        prop_assert!(m.check_symplectic().pass);
        prop_assert!(compose(&[m.clone(), m.inverse().unwrap()]).matrix().is_identity());
    }
}
