mod common;

use common::*;
use predres::optable::{random_monotone_between, random_operator};
use predres::resolve::{
    basis_from_resolution, factorize_monotone, fixpoints, is_basis, minimal_basis, resolve_closure, resolve_interior,
    verify_resolution,
};
use predres::{BasisChoice, BasisKind, ClosureForm, FactorVariant, OperatorKind, OperatorTable, RandomKind};
use proptest::prelude::*;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fixpoint_formulas(n in 1usize..=8, seed in any::<u64>(), k in 0usize..8) {
        let u = universe("X", n);
        let full = u.full_word();
        let f = random_operator(&u, RandomKind::Interior, seed, k).unwrap();
        let l = fixpoints(&f).unwrap();
        prop_assert_eq!(l.kind(), OperatorKind::Interior);
        for w in 0..=full {
            prop_assert_eq!(f.apply_word(w), join_below(l.fixpoints().members(), w));
        }
        let c = random_operator(&u, RandomKind::Closure, seed, k).unwrap();
        let l = fixpoints(&c).unwrap();
        for w in 0..=full {
            prop_assert_eq!(c.apply_word(w), meet_above(l.fixpoints().members(), w, full));
        }
    }

    #[test]
    fn interior_resolutions_verify(n in 1usize..=8, seed in any::<u64>(), k in 0usize..8) {
        let u = universe("X", n);
        let f = random_operator(&u, RandomKind::Interior, seed, k).unwrap();
        let l = fixpoints(&f).unwrap();
        for choice in [BasisChoice::Fixpoints, BasisChoice::Minimal] {
            let r = resolve_interior(&f, choice).unwrap();
            prop_assert!(verify_resolution(&f, &r).unwrap().holds());
            prop_assert!(r.composite().equal(&f).unwrap());
        }
        let min = resolve_interior(&f, BasisChoice::Minimal).unwrap();
        let irreducible = join_irreducible_oracle(l.fixpoints().members()).iter().filter(|&&b| b).count();
        prop_assert_eq!(min.interpolant().len(), irreducible);
    }

    #[test]
    fn closure_resolutions_verify(n in 1usize..=8, seed in any::<u64>(), k in 0usize..8) {
        let u = universe("X", n);
        let f = random_operator(&u, RandomKind::Closure, seed, k).unwrap();
        for form in [ClosureForm::Demonic, ClosureForm::Biorthogonal] {
            for choice in [BasisChoice::Fixpoints, BasisChoice::Minimal] {
                let r = resolve_closure(&f, form, choice).unwrap();
                prop_assert!(verify_resolution(&f, &r).unwrap().holds());
            }
        }
    }

    #[test]
    fn minimal_basis_round_trip_and_tightness(n in 1usize..=6, seed in any::<u64>(), k in 0usize..8) {
        let u = universe("X", n);
        let f = random_operator(&u, RandomKind::Interior, seed, k).unwrap();
        let l = fixpoints(&f).unwrap();
        let min = minimal_basis(&l, BasisKind::Join).unwrap();
        prop_assert!(is_basis(&min, &l, BasisKind::Join).unwrap().holds());
        for choice in [BasisChoice::Fixpoints, BasisChoice::Minimal] {
            let r = resolve_interior(&f, choice).unwrap();
            let b = basis_from_resolution(&r).unwrap();
            prop_assert!(is_basis(&b, &l, BasisKind::Join).unwrap().holds());
            if choice == BasisChoice::Minimal {
                prop_assert_eq!(&b, &min);
            }
        }
        for &m in min.members() {
            prop_assert!(!is_basis(&min.without(m), &l, BasisKind::Join).unwrap().holds());
        }
    }

    #[test]
    fn eilenberg_moore_and_kleisli(n in 1usize..=6, seed in any::<u64>(), k in 0usize..6) {
        let u = universe("X", n);
        let full = u.full_word();
        for (kind, bottom_or_top) in [(RandomKind::Interior, 0), (RandomKind::Closure, full)] {
            let f = random_operator(&u, kind, seed, k).unwrap();
            let l = fixpoints(&f).unwrap();
            let members = l.fixpoints().members();
            prop_assert!(l.fixpoints().contains(bottom_or_top));
            for &a in members {
                for &b in members {
                    let le = f.kleisli_le(&u.mask_from_word(a), &u.mask_from_word(b)).unwrap();
                    prop_assert_eq!(le, a & !b == 0);
                }
            }
        }
    }

    #[test]
    fn monotone_factorizations(seed in any::<u64>(), pairs in 0usize..10, nx in 1usize..=4, ny in 1usize..=4) {
        let x = universe("X", nx);
        let y = universe("Y", ny);
        let f = random_monotone_between(&x, &y, seed, pairs).unwrap();
        for v in [FactorVariant::AngelDemon, FactorVariant::DemonAngel, FactorVariant::OrthoOrtho] {
            let fz = factorize_monotone(&f, v).unwrap();
            prop_assert!(fz.verify().unwrap().holds());
            prop_assert_eq!(fz.interpolant().len(), 1 << nx);
        }
    }
}

#[test]
fn threshold_basis_is_binomial() {
    for n in 1..=7 {
        for k in 1..=n {
            let u = universe("X", n);
            let f = OperatorTable::threshold(u, k).unwrap();
            let l = fixpoints(&f).unwrap();
            let b = minimal_basis(&l, BasisKind::Join).unwrap();
            assert_eq!(b.len() as u64, binomial(n as u64, k as u64), "n={n} k={k}");
            assert!(b.members().iter().all(|m| m.count_ones() as usize == k));
        }
    }
}

#[test]
fn corrupted_resolution_is_caught() {
    let u = universe("X", 4);
    for seed in 0..30 {
        let f = random_operator(&u, RandomKind::Interior, seed, 4).unwrap();
        let r = resolve_interior(&f, BasisChoice::Minimal).unwrap();
        if r.interpolant().is_empty() {
            continue;
        }
        // dropping or adding one membership pair always changes some fixpoint generator
        for x in 0..4 {
            let bad = r.with_membership_toggled(x, 0);
            assert!(!verify_resolution(&f, &bad).unwrap().holds(), "seed {seed} x {x}");
        }
    }
}
