use std::collections::BTreeSet;

use e510::catalog::{self, compose, family_morphism, known_vector, named_composition, CatalogFamily, Tag};
use e510::search::{dual_pair_check, find_singular_vectors, SearchOptions};
use e510::Weight;

fn fam(tag: Tag, m: u32, n: u32) -> CatalogFamily {
    CatalogFamily::new(tag, m, n).unwrap()
}

/// φ[second] ∘ φ[first] on all images, compared with the named member.
fn check_named(second: CatalogFamily, first: CatalogFamily, expected: CatalogFamily) {
    assert_eq!(named_composition(&second, &first), Some(expected));
    let phi = compose(&family_morphism(&second).unwrap(), &family_morphism(&first).unwrap()).unwrap();
    assert_eq!((phi.lambda, phi.mu, phi.degree), (expected.weight, expected.mu, expected.degree));
    let w = known_vector(&expected).unwrap();
    assert!(!phi.hw_image().is_zero());
    assert!(phi.hw_image().proportional_to(&w), "{} ∘ {}", second.label(), first.label());
    assert_eq!(phi.g1_defects(), 0);
}

#[test]
fn named_compositions_on_all_images() {
    let mut seen = BTreeSet::new();
    for (first, second) in catalog::composable_pairs(1) {
        if let Some(expected) = named_composition(&second, &first) {
            check_named(second, first, expected);
            seen.insert(expected.tag);
        }
    }
    assert_eq!(seen, BTreeSet::from([Tag::BA2, Tag::CB2, Tag::CA2, Tag::CBA3, Tag::CD5, Tag::EA5]));
}

#[test]
fn square_of_degree_one_vanishes_on_all_images() {
    for m in 0..2 {
        for n in 0..2 {
            let first = fam(Tag::A1, m, n + 1);
            let second = fam(Tag::A1, m, n);
            let phi = compose(&family_morphism(&second).unwrap(), &family_morphism(&first).unwrap()).unwrap();
            assert_eq!(phi.degree, 2);
            assert!(phi.is_zero(), "1A({m},{n})");
        }
    }
}

#[test]
fn composition_report_is_clean() {
    let (records, report) = catalog::complexes_report(1).unwrap();
    assert!(records.iter().all(|r| r.ok()));
    assert_eq!(report["origin_sequence"]["status"], "unresolved");
}

#[test]
fn searches_reproduce_the_long_vectors() {
    for (tag, mu, lambda) in [(Tag::W7, Weight::new(0, 0, 0, 2), Weight::new(2, 0, 0, 0)), (Tag::W11, Weight::new(0, 0, 0, 1), Weight::new(1, 0, 0, 0))] {
        let f = fam(tag, 0, 0);
        let module = catalog::module(&mu).unwrap();
        let certs = find_singular_vectors(&module, f.degree, None, &SearchOptions::default()).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!((certs[0].weight, certs[0].kernel_dim), (lambda, 1));
        let found = &certs[0].elements().unwrap()[0];
        assert!(found.proportional_to(&known_vector(&f).unwrap()), "{tag}");
    }
}

#[test]
fn catalog_members_have_dual_partners() {
    for f in CatalogFamily::all_with_mu(|_| true, 1) {
        let module = catalog::module(&f.mu).unwrap();
        let certs = find_singular_vectors(&module, f.degree, Some(f.weight), &SearchOptions::default()).unwrap();
        assert_eq!(certs.len(), 1, "{}", f.label());
        assert!(dual_pair_check(&certs[0], &SearchOptions::default()).unwrap(), "{}", f.label());
    }
}

#[test]
fn four_e_is_dual_to_four_d() {
    for k in 0..3 {
        let d = fam(Tag::D4, k, 0);
        let e = fam(Tag::E4, 0, k);
        assert_eq!((d.mu.dual(), d.weight.dual()), (e.weight, e.mu));
    }
}
