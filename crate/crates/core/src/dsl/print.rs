//! Pretty-printing programs back to source, and rendering computed objects
//! as declarations that can be fed back to the parser.

use std::fmt::{self, Write};

use super::ast::{Decl, DeclKind, OpAst, Program, RelAst, SetLit};
use crate::optable::OperatorTable;
use crate::relalg::Relation;
use crate::resolve::{FactorVariant, Factorization, Resolution, ResolutionForm};
use crate::setcore::{all_masks, Universe};

fn set(s: &SetLit) -> String {
    format!("{{{}}}", s.join(","))
}

fn rel(r: &RelAst) -> String {
    match r {
        RelAst::Named(n) => n.clone(),
        RelAst::Converse(i) => format!("conv({})", rel(i)),
        RelAst::Complement(i) => format!("not({})", rel(i)),
    }
}

pub fn op_expr(e: &OpAst) -> String {
    match e {
        OpAst::Transform(k, r) => format!("{k}({})", rel(r)),
        OpAst::Compose(outer, inner) => {
            let rhs = match **inner {
                OpAst::Compose(..) => format!("({})", op_expr(inner)),
                _ => op_expr(inner),
            };
            format!("{} . {}", op_expr(outer), rhs)
        }
        OpAst::Dual(i) => format!("dual({})", op_expr(i)),
        OpAst::Identity => "id".into(),
        OpAst::InteriorFrom(f) => format!("interior_from {{{}}}", f.iter().map(set).collect::<Vec<_>>().join(",")),
        OpAst::ClosureFrom(f) => format!("closure_from {{{}}}", f.iter().map(set).collect::<Vec<_>>().join(",")),
        OpAst::Table(entries) => {
            let rows: Vec<String> = entries
                .iter()
                .map(|(i, o)| format!("  {} -> {}", set(i), set(o)))
                .collect();
            format!("table {{\n{}\n}}", rows.join(",\n"))
        }
        OpAst::Ref(n) => n.clone(),
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DeclKind::Universe { name, labels } => write!(f, "universe {name} = {{{}}}", labels.join(",")),
            DeclKind::Relation {
                name,
                source,
                target,
                pairs,
            } => {
                let ps: Vec<String> = pairs.iter().map(|(x, y)| format!("({x},{y})")).collect();
                write!(f, "relation {name} : {source} -> {target} = {{{}}}", ps.join(","))
            }
            DeclKind::Operator {
                name,
                domain,
                codomain,
                expr,
            } => {
                match codomain {
                    None => write!(f, "operator {name} on {domain} = ")?,
                    Some(c) => write!(f, "operator {name} : {domain} -> {c} = ")?,
                }
                f.write_str(&op_expr(expr))
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

pub fn universe_decl(name: &str, u: &Universe) -> String {
    format!("universe {name} = {{{}}}", u.labels().join(","))
}

pub fn relation_decl(name: &str, source: &str, target: &str, r: &Relation, target_labels: &[String]) -> String {
    let ps: Vec<String> = r
        .pairs()
        .map(|(x, y)| format!("({},{})", r.source().label(x), target_labels[y]))
        .collect();
    format!("relation {name} : {source} -> {target} = {{{}}}", ps.join(","))
}

/// A table declaration `operator NAME on U = table {...}` (or `: A -> B` when not endo).
pub fn table_decl(name: &str, t: &OperatorTable) -> String {
    let header = if t.is_endo() {
        format!("operator {name} on {}", t.domain().name())
    } else {
        format!("operator {name} : {} -> {}", t.domain().name(), t.codomain().name())
    };
    let mut out = format!("{header} = table {{\n");
    let rows: Vec<String> = all_masks(t.domain().len())
        .map(|m| {
            format!(
                "  {} -> {}",
                t.domain().render_word(m),
                t.codomain().render_word(t.apply_word(m))
            )
        })
        .collect();
    out.push_str(&rows.join(",\n"));
    out.push_str("\n}");
    out
}

/// Declarations reproducing a resolution of operator `name`: the interpolant
/// as a universe `<name>_Y` (points renamed `y1..yk`), the membership relation
/// `<name>_m`, and the composite as operator `<name>_res`.
pub fn resolution_source(name: &str, r: &Resolution) -> String {
    let x = r.membership().source();
    let points: Vec<String> = (1..=r.interpolant().len()).map(|i| format!("y{i}")).collect();
    let mut out = String::new();
    for (p, label) in points.iter().zip(r.interpolant().labels()) {
        let _ = writeln!(out, "# {p} = {}", label.trim_start_matches('y'));
    }
    let uname = format!("{name}_Y");
    let mname = format!("{name}_m");
    if points.is_empty() {
        let _ = writeln!(out, "# empty interpolant: the operator is constant");
    } else {
        let _ = writeln!(out, "{}", universe_decl(&uname, &Universe::fresh(&uname, points.clone())));
        let _ = writeln!(out, "{}", relation_decl(&mname, x.name(), &uname, r.membership(), &points));
        let expr = match r.form() {
            ResolutionForm::InteriorAngelic => format!("angel({mname}) . demon(conv({mname}))"),
            ResolutionForm::ClosureDemonic => format!("demon({mname}) . angel(conv({mname}))"),
            ResolutionForm::ClosureBiorthogonal => format!("ortho({mname}) . ortho(conv({mname}))"),
        };
        let _ = writeln!(out, "operator {name}_res on {} = {expr}", x.name());
    }
    out
}

/// Declarations reproducing a factorization of operator `name` through
/// `<name>_Xp` (points `v<i>` stand for the subset with mask value `i`).
pub fn factorization_source(name: &str, f: &Factorization) -> String {
    let x = f.s().target();
    let y = f.r().source();
    let points: Vec<String> = (0..f.interpolant().len()).map(|i| format!("v{i}")).collect();
    let xp = format!("{name}_Xp");
    let (s, r) = (format!("{name}_s"), format!("{name}_r"));
    let mut out = String::new();
    let _ = writeln!(out, "# v<i> is the subset of {} with mask value i", x.name());
    let _ = writeln!(out, "{}", universe_decl(&xp, &Universe::fresh(&xp, points.clone())));
    let s_pairs: Vec<String> = f
        .s()
        .pairs()
        .map(|(u, xi)| format!("({},{})", points[u], x.label(xi)))
        .collect();
    let _ = writeln!(out, "relation {s} : {xp} -> {} = {{{}}}", x.name(), s_pairs.join(","));
    let _ = writeln!(out, "{}", relation_decl(&r, y.name(), &xp, f.r(), &points));
    let expr = match f.variant() {
        FactorVariant::AngelDemon => format!("angel({r}) . demon({s})"),
        FactorVariant::DemonAngel => format!("demon({r}) . angel({s})"),
        FactorVariant::OrthoOrtho => format!("ortho({r}) . ortho({s})"),
    };
    let header = if x == y {
        format!("on {}", x.name())
    } else {
        format!(": {} -> {}", x.name(), y.name())
    };
    let _ = writeln!(out, "operator {name}_fact {header} = {expr}");
    out
}
