use std::sync::OnceLock;

use proptest::prelude::*;

use e510::algebra::jacobi_residual;
use e510::catalog::{family_morphism, CatalogFamily, MorphismEvaluator, Tag};
use e510::omega::{omega_direct, omega_recursive, omega_symmetrized};
use e510::rational::Rational;
use e510::selftest::spanning_set;
use e510::sl5::{gelfand_tsetlin_count, weyl_dim};
use e510::uminus::{Monomial, UElem};
use e510::verma::VermaModule;
use e510::{Error, Weight};

fn morphisms() -> &'static Vec<(MorphismEvaluator, VermaModule)> {
    static CELL: OnceLock<Vec<(MorphismEvaluator, VermaModule)>> = OnceLock::new();
    CELL.get_or_init(|| {
        [(Tag::A1, 0, 0), (Tag::B1, 0, 0), (Tag::C1, 0, 0), (Tag::BA2, 0, 0), (Tag::D4, 0, 0)]
            .into_iter()
            .map(|(t, m, n)| {
                let phi = family_morphism(&CatalogFamily::new(t, m, n).unwrap()).unwrap();
                let source = VermaModule::from_irrep(phi.source.clone());
                (phi, source)
            })
            .collect()
    })
}

fn monomial(partials: [u8; 5], mask: u16) -> Monomial {
    let forms: Vec<usize> = (0..10).filter(|p| mask >> p & 1 == 1).collect();
    Monomial::new(partials, &forms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_identity(a in 0usize..67, b in 0usize..67, c in 0usize..67) {
        let all = spanning_set();
        match jacobi_residual(&all[a], &all[b], &all[c]) {
            Ok(r) => prop_assert!(r.is_zero()),
            Err(Error::UnsupportedDegree(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn uminus_is_associative(
        p in proptest::array::uniform5(0u8..2), q in proptest::array::uniform5(0u8..2), r in proptest::array::uniform5(0u8..2),
        x in 0u16..1024, y in 0u16..1024, z in 0u16..1024,
    ) {
        let (a, b, c) = [(p, x), (q, y), (r, z)].map(|(p, m)| UElem::monomial(monomial(p, m), Rational::one())).into();
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn weyl_dimension_counts_patterns(a in 0i32..5, b in 0i32..5, c in 0i32..5, d in 0i32..5) {
        let l = Weight::new(a, b, c, d);
        prop_assert_eq!(gelfand_tsetlin_count(&l), weyl_dim(&l));
        prop_assert_eq!(weyl_dim(&l), weyl_dim(&l.dual()));
        prop_assert_eq!(l.dual().dual(), l);
    }

    #[test]
    fn omega_definitions_agree(pairs in proptest::sample::subsequence((0usize..10).collect::<Vec<_>>(), 0..=6), flips in 0u16..64) {
        let t: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let (a, b) = e510::uminus::PAIRS[k];
                if flips >> i & 1 == 1 { (b as usize, a as usize) } else { (a as usize, b as usize) }
            })
            .collect();
        let a = omega_direct(&t);
        prop_assert_eq!(&a, &omega_recursive(&t));
        prop_assert_eq!(&a, &omega_symmetrized(&t));
    }

    // φ(X·x) = X·φ(x) for g₀ generators and all of g₁, on random elements of M(λ)
    #[test]
    fn morphisms_commute_with_the_action(which in 0usize..5, p in proptest::array::uniform5(0u8..2), mask in 0u16..1024,
                                         k in 0usize..1000, a in 0usize..5, b in 0usize..5, g in 0usize..40) {
        let (phi, source) = &morphisms()[which];
        prop_assume!(a != b && mask.count_ones() <= 4);
        let x = source.basis_element(monomial(p, mask), k % source.irrep.dim());
        let lhs = phi.apply(&source.act_e(a, b, &x)).unwrap();
        let rhs = phi.target.act_e(a, b, &phi.apply(&x).unwrap());
        prop_assert_eq!(lhs, rhs);
        let y = &e510::algebra::g1_basis()[g];
        let lhs = phi.apply(&source.act_g1(y, &x)).unwrap();
        let rhs = phi.target.act_g1(y, &phi.apply(&x).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
