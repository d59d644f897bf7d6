//! Canonical JSON records.
//!
//! Every record is one object `{kind, input, result, witnesses}`. Object keys
//! come out sorted, subsets are sorted arrays of labels and relations are
//! sorted arrays of `[x, y]` label pairs, so output is byte-stable.

use serde_json::{json, Value};

use crate::optable::ClassReport;
use crate::relalg::{Counterexample, GaloisReport, Relation, Side};
use crate::resolve::{BasisKind, Factorization, FixLattice, Resolution};
use crate::setcore::{Check, SubsetFamily, SubsetMask, Universe};

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub kind: String,
    pub input: Value,
    pub result: Value,
    pub witnesses: Vec<Value>,
}

impl Record {
    pub fn new(kind: &str, input: Value, result: Value, witnesses: Vec<Value>) -> Record {
        Record {
            kind: kind.to_string(),
            input,
            result,
            witnesses,
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "kind": self.kind,
            "input": self.input,
            "result": self.result,
            "witnesses": self.witnesses,
        })
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("records serialize")
    }
}

pub trait ToRecord {
    fn to_record(&self, input: Value) -> Record;
}

pub fn subset(m: &SubsetMask) -> Value {
    let mut labels: Vec<&str> = m.labels();
    labels.sort_unstable();
    json!(labels)
}

pub fn word(u: &Universe, w: u64) -> Value {
    let mut labels = u.word_labels(w);
    labels.sort_unstable();
    json!(labels)
}

pub fn family(f: &SubsetFamily) -> Value {
    let mut sets: Vec<Vec<&str>> = f
        .members()
        .iter()
        .map(|&m| {
            let mut l = f.universe().word_labels(m);
            l.sort_unstable();
            l
        })
        .collect();
    sets.sort();
    json!(sets)
}

pub fn relation(r: &Relation) -> Value {
    let mut pairs = r.label_pairs();
    pairs.sort_unstable();
    Value::Array(pairs.into_iter().map(|(x, y)| json!([x, y])).collect())
}

fn labels(u: &Universe) -> Value {
    let mut l: Vec<&str> = u.labels().iter().map(String::as_str).collect();
    l.sort_unstable();
    json!(l)
}

fn set_witness<W>(axiom: &str, c: &Check<W>, render: impl Fn(&W) -> Value) -> Option<Value> {
    c.witness().map(|w| {
        let mut v = render(w);
        v["axiom"] = json!(axiom);
        v
    })
}

impl ToRecord for ClassReport {
    fn to_record(&self, input: Value) -> Record {
        let single = |w: &SubsetMask| json!({ "input": subset(w) });
        let witnesses = [
            set_witness("monotone", &self.monotone, |(a, b)| json!({ "lower": subset(a), "upper": subset(b) })),
            set_witness("contractive", &self.contractive, single),
            set_witness("expansive", &self.expansive, single),
            set_witness("deflation", &self.deflation_ok, single),
            set_witness("inflation", &self.inflation_ok, single),
        ]
        .into_iter()
        .flatten()
        .collect();
        Record::new(
            "classify",
            input,
            json!({
                "universe": self.universe.name(),
                "monotone": self.monotone.holds(),
                "contractive": self.contractive.holds(),
                "expansive": self.expansive.holds(),
                "deflation_ok": self.deflation_ok.holds(),
                "inflation_ok": self.inflation_ok.holds(),
                "is_interior": self.is_interior(),
                "is_closure": self.is_closure(),
            }),
            witnesses,
        )
    }
}

impl ToRecord for FixLattice {
    fn to_record(&self, input: Value) -> Record {
        let u = self.universe();
        let points: Vec<Value> = self
            .fixpoints()
            .members()
            .iter()
            .zip(self.join_irreducible().iter().zip(self.meet_irreducible()))
            .map(|(&m, (&j, &mt))| {
                json!({
                    "set": word(u, m),
                    "join_irreducible": j,
                    "meet_irreducible": mt,
                })
            })
            .collect();
        Record::new(
            "fix",
            input,
            json!({
                "operator_kind": self.kind().name(),
                "count": points.len(),
                "fixpoints": points,
            }),
            vec![],
        )
    }
}

/// A computed basis of a fixpoint lattice.
pub struct BasisReport<'a> {
    pub lattice: &'a FixLattice,
    pub kind: BasisKind,
    pub basis: &'a SubsetFamily,
}

impl ToRecord for BasisReport<'_> {
    fn to_record(&self, input: Value) -> Record {
        Record::new(
            "basis",
            input,
            json!({
                "basis_kind": self.kind.name(),
                "basis": family(self.basis),
                "size": self.basis.len(),
                "fixpoint_count": self.lattice.fixpoints().len(),
                "universe_size": self.lattice.universe().len(),
            }),
            vec![],
        )
    }
}

impl ToRecord for Resolution {
    fn to_record(&self, input: Value) -> Record {
        Record::new(
            "resolve",
            input,
            json!({
                "form": self.form().name(),
                "basis_choice": self.basis_choice().map(|b| b.name()),
                "interpolant": labels(self.interpolant()),
                "interpolant_size": self.interpolant().len(),
                "membership": relation(self.membership()),
                "verified": true,
            }),
            vec![],
        )
    }
}

impl ToRecord for Factorization {
    fn to_record(&self, input: Value) -> Record {
        Record::new(
            "factorize",
            input,
            json!({
                "variant": self.variant().name(),
                "interpolant": labels(self.interpolant()),
                "interpolant_size": self.interpolant().len(),
                "s": relation(self.s()),
                "r": relation(self.r()),
                "verified": true,
            }),
            vec![],
        )
    }
}

pub fn counterexample(c: &Counterexample) -> Value {
    let side = |s: &Side| match s {
        Side::Truth(b) => json!(b),
        Side::Set(m) => subset(m),
    };
    json!({
        "law": c.law.name(),
        "u": c.u.as_ref().map(subset),
        "v": subset(&c.v),
        "lhs": side(&c.lhs),
        "rhs": side(&c.rhs),
    })
}

impl ToRecord for GaloisReport {
    fn to_record(&self, input: Value) -> Record {
        Record::new(
            "laws",
            input,
            json!({ "holds": self.holds() }),
            self.counterexample.iter().map(counterexample).collect(),
        )
    }
}

/// Renders any record-producing value with the given input echo.
pub fn emit_record<T: ToRecord + ?Sized>(value: &T, input: Value) -> String {
    value.to_record(input).render()
}
