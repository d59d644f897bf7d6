//! Browser bindings: each entry point takes `.rl` source text and returns a
//! JSON string. The `*_json` functions are plain Rust so they run natively too.

use predres::dsl::hasse::covering_pairs;
use predres::dsl::{self, emit, print, Environment, ToRecord};
use predres::resolve::{fixpoints, minimal_basis, resolve_closure, resolve_interior};
use predres::{BasisChoice, BasisKind, ClosureForm, OperatorTable, Universe};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Universes above this size are refused: every table has 2^n rows.
pub const WEB_CAP: usize = 12;

fn load(source: &str) -> Result<Environment, String> {
    let p = dsl::parse(source).map_err(|e| e.to_string())?;
    dsl::eval_with_cap(&p, WEB_CAP).map_err(|e| e.to_string())
}

fn operator<'e>(env: &'e Environment, name: &str) -> Result<(&'e str, &'e OperatorTable), String> {
    if name.is_empty() {
        return env
            .operators
            .last()
            .map(|(n, t)| (n.as_str(), t))
            .ok_or_else(|| "no operator declared".to_string());
    }
    env.operators
        .get_key_value(name)
        .map(|(n, t)| (n.as_str(), t))
        .ok_or_else(|| format!("unknown operator `{name}`"))
}

fn hasse(f: &OperatorTable) -> Result<Value, String> {
    let l = fixpoints(f).map_err(|e| e.to_string())?;
    let u = l.universe();
    let nodes: Vec<Value> = l
        .fixpoints()
        .members()
        .iter()
        .zip(l.irreducible())
        .map(|(&m, &irr)| json!({ "label": u.render_word(m), "rank": m.count_ones(), "irreducible": irr }))
        .collect();
    let edges: Vec<Value> = covering_pairs(l.fixpoints().members())
        .into_iter()
        .map(|(a, b)| json!([a, b]))
        .collect();
    Ok(json!({
        "kind": l.kind().name(),
        "size": u.len(),
        "nodes": nodes,
        "edges": edges,
        "dot": dsl::emit_hasse(&l),
    }))
}

/// Classification and, when the operator is an interior or closure, its
/// fixpoint lattice. `operator` may be empty to pick the last declaration.
pub fn analyze_json(source: &str, operator_name: &str) -> Result<String, String> {
    let env = load(source)?;
    let (name, f) = operator(&env, operator_name)?;
    let report = f.classify().map_err(|e| e.to_string())?;
    let lattice = if report.is_interior() || report.is_closure() {
        hasse(f)?
    } else {
        Value::Null
    };
    let rows: Vec<Value> = f.render_rows().into_iter().map(Value::String).collect();
    Ok(json!({
        "operator": name,
        "operators": env.operators.keys().collect::<Vec<_>>(),
        "classify": report.to_record(json!({})).to_value(),
        "lattice": lattice,
        "table": rows,
    })
    .to_string())
}

/// Resolution in the given `form` (`interior`, `closure-demonic`,
/// `closure-ortho`) over the `minimal` or `fixpoints` basis.
pub fn resolve_json(source: &str, operator_name: &str, form: &str, basis: &str) -> Result<String, String> {
    let env = load(source)?;
    let (name, f) = operator(&env, operator_name)?;
    let choice = match basis {
        "minimal" => BasisChoice::Minimal,
        "fixpoints" => BasisChoice::Fixpoints,
        other => return Err(format!("unknown basis choice `{other}`")),
    };
    let r = match form {
        "interior" => resolve_interior(f, choice),
        "closure-demonic" => resolve_closure(f, ClosureForm::Demonic, choice),
        "closure-ortho" => resolve_closure(f, ClosureForm::Biorthogonal, choice),
        other => return Err(format!("unknown form `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    Ok(json!({
        "record": r.to_record(json!({ "operator": name })).to_value(),
        "source": print::resolution_source(name, &r),
        "membership": emit::relation(r.membership()),
    })
    .to_string())
}

/// The threshold interior `U ↦ U if |U| ≥ k else ∅` on `n` points: its
/// minimal basis size next to `n`, plus the program text declaring it.
pub fn threshold_json(n: usize, k: usize) -> Result<String, String> {
    if n == 0 || n > WEB_CAP {
        return Err(format!("n must be between 1 and {WEB_CAP}"));
    }
    let labels: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let u = Universe::new("X", &labels).map_err(|e| e.to_string())?;
    let f = OperatorTable::threshold(u.clone(), k).map_err(|e| e.to_string())?;
    let l = fixpoints(&f).map_err(|e| e.to_string())?;
    let b = minimal_basis(&l, BasisKind::Join).map_err(|e| e.to_string())?;
    let family: Vec<String> = b.members().iter().map(|&m| u.render_word(m)).collect();
    let source = format!(
        "# threshold operator: U if |U| >= {k}, else {{}}\n{}\noperator T on X = interior_from {{{}}}\n",
        print::universe_decl("X", &u),
        family.join(",")
    );
    Ok(json!({
        "n": n,
        "k": k,
        "fixpoints": l.fixpoints().len(),
        "basis_size": b.len(),
        "source": source,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn analyze(source: &str, operator: &str) -> Result<String, JsValue> {
    analyze_json(source, operator).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn resolve(source: &str, operator: &str, form: &str, basis: &str) -> Result<String, JsValue> {
    resolve_json(source, operator, form, basis).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn threshold(n: usize, k: usize) -> Result<String, JsValue> {
    threshold_json(n, k).map_err(|e| JsValue::from_str(&e))
}
