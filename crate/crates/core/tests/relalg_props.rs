mod common;

use std::sync::Arc;

use common::*;
use predres::relalg::{check_galois, check_negation_laws, extract_relation};
use predres::{Bits, MorphismKind, OperatorTable, Relation, TransformKind};
use proptest::prelude::*;

/// Transformers straight from their definitions, one row at a time.
fn oracle(kind: TransformKind, r: &Relation, v: u64) -> u64 {
    let ny = r.target().len();
    let mut out = 0;
    for x in 0..r.source().len() {
        let row: Vec<usize> = (0..ny).filter(|&y| r.contains(x, y)).collect();
        let hit = match kind {
            TransformKind::Angel => row.iter().any(|&y| v >> y & 1 == 1),
            TransformKind::Demon => row.iter().all(|&y| v >> y & 1 == 1),
            TransformKind::Ortho => (0..ny).filter(|&y| v >> y & 1 == 1).all(|y| row.contains(&y)),
        };
        out |= (hit as u64) << x;
    }
    out
}

proptest! {
    #[test]
    fn transforms_match_definitions(r in arb_relation(8, 8), v in any::<u64>()) {
        let v = v & r.target().full_word();
        for k in TransformKind::ALL {
            prop_assert_eq!(r.transform_word(k, v), oracle(k, &r, v));
            let bits = r.transform_bits(k, &Bits::from_word(r.target().len(), v));
            prop_assert_eq!(bits.as_word(), Some(oracle(k, &r, v)));
        }
    }

    #[test]
    fn tonality(r in arb_relation(6, 10)) {
        let ny = r.target().len();
        for v in 0..1u64 << ny {
            for y in 0..ny {
                let w = v | 1 << y;
                let sub = |a: u64, b: u64| a & !b == 0;
                prop_assert!(sub(r.transform_word(TransformKind::Angel, v), r.transform_word(TransformKind::Angel, w)));
                prop_assert!(sub(r.transform_word(TransformKind::Demon, v), r.transform_word(TransformKind::Demon, w)));
                prop_assert!(sub(r.transform_word(TransformKind::Ortho, w), r.transform_word(TransformKind::Ortho, v)));
            }
        }
    }

    #[test]
    fn preservation_of_unions_and_intersections(r in arb_relation(6, 6)) {
        let full_y = r.target().full_word();
        let full_x = r.source().full_word();
        // empty family: unions give ∅, intersections give the full set
        prop_assert_eq!(r.transform_word(TransformKind::Angel, 0), 0);
        prop_assert_eq!(r.transform_word(TransformKind::Demon, full_y), full_x);
        prop_assert_eq!(r.transform_word(TransformKind::Ortho, 0), full_x);
        for a in 0..=full_y {
            for b in 0..=full_y {
                let t = |k, v| r.transform_word(k, v);
                prop_assert_eq!(t(TransformKind::Angel, a | b), t(TransformKind::Angel, a) | t(TransformKind::Angel, b));
                prop_assert_eq!(t(TransformKind::Demon, a & b), t(TransformKind::Demon, a) & t(TransformKind::Demon, b));
                prop_assert_eq!(t(TransformKind::Ortho, a | b), t(TransformKind::Ortho, a) & t(TransformKind::Ortho, b));
            }
        }
    }

    #[test]
    fn converse_and_complement_are_involutions(r in arb_relation(8, 8)) {
        prop_assert_eq!(r.converse().converse(), r.clone());
        prop_assert_eq!(r.complement().complement(), r.clone());
        prop_assert_eq!(r.converse().complement(), r.complement().converse());
        prop_assert_eq!(r.len() + r.complement().len(), r.source().len() * r.target().len());
    }

    #[test]
    fn laws_hold_on_random_relations(r in arb_relation(5, 5)) {
        prop_assert!(check_negation_laws(&r).unwrap().holds());
        prop_assert!(check_galois(&r).unwrap().holds());
    }
}

#[test]
fn extraction_round_trips_exhaustively() {
    for nx in 1..=4 {
        for ny in 1..=4 {
            for bits in 0..1u64 << (nx * ny) {
                let r = relation_from_bits(nx, ny, bits);
                for (k, m) in [
                    (TransformKind::Angel, MorphismKind::Sup),
                    (TransformKind::Demon, MorphismKind::Inf),
                    (TransformKind::Ortho, MorphismKind::Antitone),
                ] {
                    let t = OperatorTable::from_relation(k, &r).unwrap();
                    assert_eq!(extract_relation(&t, m), r, "{k} on {r}");
                }
            }
        }
    }
}

#[test]
fn extraction_recovers_an_equivalent_transformer() {
    let x = universe("X", 3);
    let y = universe("Y", 2);
    // F(V) = X when V is nonempty: sup-preserving, represented by the full relation
    let f = OperatorTable::from_fn(Arc::clone(&y), Arc::clone(&x), |v| if v == 0 { 0 } else { 7 }).unwrap();
    let r = extract_relation(&f, MorphismKind::Sup);
    assert_eq!(r, Relation::full(x, y));
    assert!(OperatorTable::from_relation(TransformKind::Angel, &r).unwrap().equal(&f).unwrap());
}
