mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use predres::{SaturateMode, SubsetFamily};
use proptest::prelude::*;

proptest! {
    #[test]
    fn mask_of_round_trips(n in 1usize..=20, pick in any::<u32>()) {
        let u = universe("X", n);
        let names: Vec<String> = (0..n).filter(|i| pick >> i & 1 == 1).map(|i| u.label(i).to_string()).collect();
        let m = u.mask_of(&names).unwrap();
        let back: BTreeSet<&str> = m.labels().into_iter().collect();
        let want: BTreeSet<&str> = names.iter().map(String::as_str).collect();
        prop_assert_eq!(back, want);
        prop_assert_eq!(m.len(), names.len());
        prop_assert_eq!(m.complement().complement(), m);
    }

    #[test]
    fn saturation_is_idempotent_and_closed((n, members) in arb_family(6, 8)) {
        let u = universe("X", n);
        let full = u.full_word();
        let f = SubsetFamily::new(Arc::clone(&u), members.clone()).unwrap();
        for mode in [SaturateMode::Unions, SaturateMode::Intersections] {
            let s = f.saturate(mode).unwrap();
            prop_assert_eq!(s.saturate(mode).unwrap(), s.clone());
            for &m in &members {
                prop_assert!(s.contains(m));
            }
            let unit = if mode == SaturateMode::Unions { 0 } else { full };
            prop_assert!(s.contains(unit));
            for &a in s.members() {
                for &b in s.members() {
                    let c = if mode == SaturateMode::Unions { a | b } else { a & b };
                    prop_assert!(s.contains(c));
                }
            }
        }
    }

    #[test]
    fn members_are_sorted_and_unique((n, members) in arb_family(8, 20)) {
        let f = SubsetFamily::new(universe("X", n), members.clone()).unwrap();
        let want: Vec<u64> = members.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        prop_assert_eq!(f.members(), &want[..]);
    }

    #[test]
    fn irreducible_flags_match_definition((n, members) in arb_family(7, 10)) {
        let u = universe("X", n);
        let full = u.full_word();
        let f = SubsetFamily::new(Arc::clone(&u), members).unwrap();
        let joins = f.saturate(SaturateMode::Unions).unwrap();
        prop_assert_eq!(joins.join_irreducible_flags().unwrap(), join_irreducible_oracle(joins.members()));
        let meets = f.saturate(SaturateMode::Intersections).unwrap();
        prop_assert_eq!(meets.meet_irreducible_flags().unwrap(), meet_irreducible_oracle(meets.members(), full));
        // the tables themselves on arbitrary (unsaturated) families
        let below = f.union_below_table().unwrap();
        let above = f.intersection_above_table().unwrap();
        for w in 0..=full {
            prop_assert_eq!(below[w as usize], join_below(f.members(), w));
            prop_assert_eq!(above[w as usize], meet_above(f.members(), w, full));
        }
    }
}
