//! Covering relation of a family under inclusion, and its dot rendering.

use std::fmt::Write;

use crate::resolve::FixLattice;

/// Index pairs `(lower, upper)` such that `upper` covers `lower`: strict
/// inclusion with no member strictly in between.
pub fn covering_pairs(members: &[u64]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (hi, &upper) in members.iter().enumerate() {
        let mut below: Vec<usize> = (0..members.len())
            .filter(|&lo| members[lo] != upper && members[lo] & !upper == 0)
            .collect();
        // largest first: a member is covered iff no larger chosen member contains it
        below.sort_by_key(|&lo| std::cmp::Reverse(members[lo].count_ones()));
        let mut maximal: Vec<usize> = Vec::new();
        for lo in below {
            let m = members[lo];
            if !maximal.iter().any(|&c| m & !members[c] == 0) {
                maximal.push(lo);
            }
        }
        maximal.sort_unstable();
        edges.extend(maximal.into_iter().map(|lo| (lo, hi)));
    }
    edges.sort_unstable();
    edges
}

/// Hasse diagram of the fixpoints in dot format, bottom to top. Irreducible
/// members (join-irreducible for interiors, meet-irreducible for closures)
/// are drawn as boxes.
pub fn emit_hasse(l: &FixLattice) -> String {
    let u = l.universe();
    let members = l.fixpoints().members();
    let mut out = String::from("digraph fix {\n  rankdir=BT;\n  node [shape=ellipse];\n");
    for (i, (&m, &irr)) in members.iter().zip(l.irreducible()).enumerate() {
        let shape = if irr { ", shape=box, style=bold" } else { "" };
        let _ = writeln!(out, "  n{i} [label=\"{}\"{shape}];", u.render_word(m));
    }
    for (lo, hi) in covering_pairs(members) {
        let _ = writeln!(out, "  n{lo} -> n{hi};");
    }
    out.push_str("}\n");
    out
}
