#![allow(dead_code)]

use std::sync::Arc;

use predres::{OperatorTable, Relation, Universe};
use proptest::prelude::*;

pub fn universe(name: &str, n: usize) -> Arc<Universe> {
    let labels: Vec<String> = (0..n).map(|i| format!("{}{i}", name.to_lowercase())).collect();
    Universe::with_cap(name, &labels, 64).unwrap()
}

/// Relation whose pair `(x, y)` is present iff bit `x * |Y| + y` of `bits` is set.
pub fn relation_from_bits(nx: usize, ny: usize, bits: u64) -> Relation {
    Relation::from_fn(universe("X", nx), universe("Y", ny), |x, y| bits >> (x * ny + y) & 1 == 1)
}

pub fn arb_relation(max_x: usize, max_y: usize) -> impl Strategy<Value = Relation> {
    (1..=max_x, 1..=max_y).prop_flat_map(|(nx, ny)| {
        let mask = if nx * ny == 64 { u64::MAX } else { (1u64 << (nx * ny)) - 1 };
        (Just(nx), Just(ny), any::<u64>().prop_map(move |b| b & mask))
    })
    .prop_map(|(nx, ny, bits)| relation_from_bits(nx, ny, bits))
}

pub fn arb_family(max_n: usize, max_members: usize) -> impl Strategy<Value = (usize, Vec<u64>)> {
    (1..=max_n).prop_flat_map(move |n| {
        let full = (1u64 << n) - 1;
        (Just(n), prop::collection::vec(any::<u64>().prop_map(move |m| m & full), 0..=max_members))
    })
}

/// Any endo-operator on an `n`-element universe, monotone or not.
pub fn arb_table(max_n: usize) -> impl Strategy<Value = OperatorTable> {
    (1..=max_n).prop_flat_map(|n| {
        let full = (1u64 << n) - 1;
        prop::collection::vec(any::<u64>().prop_map(move |m| m & full), 1 << n).prop_map(move |entries| {
            let u = universe("X", n);
            OperatorTable::new(Arc::clone(&u), u, entries).unwrap()
        })
    })
}

/// Union of the members of `family` contained in `u`.
pub fn join_below(family: &[u64], u: u64) -> u64 {
    family.iter().filter(|&&v| v & !u == 0).fold(0, |a, &v| a | v)
}

/// Intersection of the members of `family` containing `u`; `full` when none do.
pub fn meet_above(family: &[u64], u: u64, full: u64) -> u64 {
    family.iter().filter(|&&v| u & !v == 0).fold(full, |a, &v| a & v)
}

/// Join-irreducible by definition: not the union of the members strictly below it.
pub fn join_irreducible_oracle(family: &[u64]) -> Vec<bool> {
    family
        .iter()
        .map(|&u| {
            let below = family.iter().filter(|&&v| v != u && v & !u == 0).fold(0, |a, &v| a | v);
            below != u
        })
        .collect()
}

pub fn meet_irreducible_oracle(family: &[u64], full: u64) -> Vec<bool> {
    family
        .iter()
        .map(|&u| {
            let above = family.iter().filter(|&&v| v != u && u & !v == 0).fold(full, |a, &v| a & v);
            above != u
        })
        .collect()
}
