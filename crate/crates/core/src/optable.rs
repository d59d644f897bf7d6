//! Materialized predicate transformers and their classification.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::relalg::{Relation, TransformKind};
use crate::setcore::{all_masks, Check, SubsetFamily, SubsetMask, Universe};

/// A total map `P(domain) → P(codomain)`, one entry per input mask value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorTable {
    domain: Arc<Universe>,
    codomain: Arc<Universe>,
    entries: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Interior,
    Closure,
}

impl OperatorKind {
    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Interior => "interior",
            OperatorKind::Closure => "closure",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl OperatorTable {
    pub fn new(domain: Arc<Universe>, codomain: Arc<Universe>, entries: Vec<u64>) -> Result<OperatorTable> {
        domain.ensure_table_sized()?;
        codomain.ensure_word_sized()?;
        if entries.len() != domain.powerset_len() {
            return Err(Error::TableSize {
                expected: domain.powerset_len(),
                found: entries.len(),
            });
        }
        let full = codomain.full_word();
        if let Some(bad) = entries.iter().find(|&&e| e & !full != 0) {
            return Err(Error::UniverseMismatch {
                expected: codomain.name().to_string(),
                found: format!("entry {bad:#x}"),
            });
        }
        Ok(OperatorTable {
            domain,
            codomain,
            entries,
        })
    }

    pub fn from_fn(domain: Arc<Universe>, codomain: Arc<Universe>, f: impl FnMut(u64) -> u64) -> Result<OperatorTable> {
        domain.ensure_table_sized()?;
        let entries = all_masks(domain.len()).map(f).collect();
        Self::new(domain, codomain, entries)
    }

    pub fn identity(u: Arc<Universe>) -> Result<OperatorTable> {
        Self::from_fn(Arc::clone(&u), u, |m| m)
    }

    pub fn constant(domain: Arc<Universe>, codomain: Arc<Universe>, value: u64) -> Result<OperatorTable> {
        Self::from_fn(domain, codomain, |_| value)
    }

    /// Table of `⟨r⟩`, `[r]` or `⊥r`, mapping `P(target)` to `P(source)`.
    pub fn from_relation(kind: TransformKind, r: &Relation) -> Result<OperatorTable> {
        r.source().ensure_word_sized()?;
        r.target().ensure_table_sized()?;
        Self::from_fn(Arc::clone(r.target()), Arc::clone(r.source()), |v| r.transform_word(kind, v))
    }

    /// `F(U) = U` when `|U| ≥ k`, otherwise `∅`.
    pub fn threshold(u: Arc<Universe>, k: usize) -> Result<OperatorTable> {
        Self::from_fn(Arc::clone(&u), u, |m| if m.count_ones() as usize >= k { m } else { 0 })
    }

    pub fn domain(&self) -> &Arc<Universe> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Universe> {
        &self.codomain
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_endo(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn apply_word(&self, m: u64) -> u64 {
        self.entries[m as usize]
    }

    pub fn apply(&self, u: &SubsetMask) -> Result<SubsetMask> {
        self.domain.ensure_same(u.universe())?;
        let m = u.value().expect("table domains fit a word");
        Ok(self.codomain.mask_from_word(self.apply_word(m)))
    }

    /// Same universes, entries rewritten by `f`.
    pub fn map_entries(&self, f: impl Fn(u64) -> u64) -> OperatorTable {
        let full = self.codomain.full_word();
        OperatorTable {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&self.codomain),
            entries: self.entries.iter().map(|&e| f(e) & full).collect(),
        }
    }

    /// `outer ∘ inner`: apply `inner` first.
    pub fn compose(outer: &OperatorTable, inner: &OperatorTable) -> Result<OperatorTable> {
        outer.domain.ensure_same(&inner.codomain)?;
        Ok(OperatorTable {
            domain: Arc::clone(&inner.domain),
            codomain: Arc::clone(&outer.codomain),
            entries: inner.entries.iter().map(|&m| outer.entries[m as usize]).collect(),
        })
    }

    /// `¬·F·¬` for an endo-operator.
    pub fn dual(&self) -> Result<OperatorTable> {
        if !self.is_endo() {
            return Err(Error::NotEndo {
                domain: self.domain.name().to_string(),
                codomain: self.codomain.name().to_string(),
            });
        }
        Ok(self.conjugate())
    }

    /// `U ↦ ¬F(¬U)`, complements taken in the respective universes.
    pub(crate) fn conjugate(&self) -> OperatorTable {
        let (din, dout) = (self.domain.full_word(), self.codomain.full_word());
        OperatorTable {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&self.codomain),
            entries: all_masks(self.domain.len())
                .map(|m| !self.entries[(!m & din) as usize] & dout)
                .collect(),
        }
    }

    /// Pointwise comparison; the witness is the first input (by mask value) where the tables differ.
    pub fn first_difference(&self, other: &OperatorTable) -> Result<Check<SubsetMask>> {
        self.domain.ensure_same(&other.domain)?;
        self.codomain.ensure_same(&other.codomain)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|i| self.domain.mask_from_word(i as u64))
            .into())
    }

    pub fn equal(&self, other: &OperatorTable) -> Result<bool> {
        Ok(self.first_difference(other)?.holds())
    }

    /// Monotonicity by single-element additions: `F(U) ⊆ F(U ∪ {x})` for all
    /// `U` and `x ∉ U`. Every pair `U ⊆ V` is linked by such a chain, so this
    /// is equivalent to full monotonicity.
    pub fn monotone_witness(&self) -> Option<(u64, u64)> {
        let n = self.domain.len();
        for u in all_masks(n) {
            let fu = self.entries[u as usize];
            for x in 0..n {
                let v = u | 1 << x;
                if v != u && fu & !self.entries[v as usize] != 0 {
                    return Some((u, v));
                }
            }
        }
        None
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone_witness().is_none()
    }

    /// Checks every interior/closure axiom and reports all failures.
    pub fn classify(&self) -> Result<ClassReport> {
        if !self.is_endo() {
            return Err(Error::NotEndo {
                domain: self.domain.name().to_string(),
                codomain: self.codomain.name().to_string(),
            });
        }
        let u = &self.domain;
        let first = |bad: &dyn Fn(u64, u64) -> bool| -> Check<SubsetMask> {
            all_masks(u.len())
                .find(|&m| bad(m, self.entries[m as usize]))
                .map(|m| u.mask_from_word(m))
                .into()
        };
        let ff = |fm: u64| self.entries[fm as usize];
        Ok(ClassReport {
            universe: Arc::clone(u),
            monotone: self
                .monotone_witness()
                .map(|(a, b)| (u.mask_from_word(a), u.mask_from_word(b)))
                .into(),
            contractive: first(&|m, fm| fm & !m != 0),
            expansive: first(&|m, fm| m & !fm != 0),
            deflation_ok: first(&|_, fm| fm & !ff(fm) != 0),
            inflation_ok: first(&|_, fm| ff(fm) & !fm != 0),
        })
    }

    /// The Kleisli preorder: `U ⊑ V` iff `F(U) ⊆ F(V)`.
    pub fn kleisli_le(&self, u: &SubsetMask, v: &SubsetMask) -> Result<bool> {
        let fu = self.apply(u)?;
        let fv = self.apply(v)?;
        fu.is_subset(&fv)
    }

    /// Renders the table as `{in} -> {out}` lines.
    pub fn render_rows(&self) -> Vec<String> {
        all_masks(self.domain.len())
            .map(|m| {
                format!(
                    "{} -> {}",
                    self.domain.render_word(m),
                    self.codomain.render_word(self.entries[m as usize])
                )
            })
            .collect()
    }
}

/// Which axioms an endo-operator satisfies, with a witness for each failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub universe: Arc<Universe>,
    /// Witness: a pair `U ⊆ U ∪ {x}` with `F(U) ⊄ F(U ∪ {x})`.
    pub monotone: Check<(SubsetMask, SubsetMask)>,
    /// `F(U) ⊆ U`
    pub contractive: Check<SubsetMask>,
    /// `U ⊆ F(U)`
    pub expansive: Check<SubsetMask>,
    /// `F(U) ⊆ F(F(U))`
    pub deflation_ok: Check<SubsetMask>,
    /// `F(F(U)) ⊆ F(U)`
    pub inflation_ok: Check<SubsetMask>,
}

impl ClassReport {
    pub fn is_interior(&self) -> bool {
        self.monotone.holds() && self.contractive.holds() && self.deflation_ok.holds()
    }

    pub fn is_closure(&self) -> bool {
        self.monotone.holds() && self.expansive.holds() && self.inflation_ok.holds()
    }

    /// Short description of the first failed axiom for the requested kind.
    pub fn failure_for(&self, kind: OperatorKind) -> Option<String> {
        if let Check::Fails((a, b)) = &self.monotone {
            return Some(format!("not monotone between {a} and {b}"));
        }
        let (axiom, idem) = match kind {
            OperatorKind::Interior => (("contractive", &self.contractive), ("F <= FF", &self.deflation_ok)),
            OperatorKind::Closure => (("expansive", &self.expansive), ("FF <= F", &self.inflation_ok)),
        };
        for (name, check) in [axiom, idem] {
            if let Check::Fails(w) = check {
                return Some(format!("{name} fails at {w}"));
            }
        }
        None
    }
}

/// A relation expression: a named relation under converse and complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelExpr {
    Named(Relation),
    Converse(Box<RelExpr>),
    Complement(Box<RelExpr>),
}

impl RelExpr {
    pub fn eval(&self) -> Relation {
        match self {
            RelExpr::Named(r) => r.clone(),
            RelExpr::Converse(e) => e.eval().converse(),
            RelExpr::Complement(e) => e.eval().complement(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorExpr {
    FromRelation(TransformKind, RelExpr),
    /// `Compose(outer, inner)`: `inner` is applied first.
    Compose(Box<OperatorExpr>, Box<OperatorExpr>),
    Dual(Box<OperatorExpr>),
    TableLiteral(OperatorTable),
    InteriorFromFamily(SubsetFamily),
    ClosureFromFamily(SubsetFamily),
    Identity(Arc<Universe>),
}

impl OperatorExpr {
    pub fn compose(outer: OperatorExpr, inner: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn materialize(&self) -> Result<OperatorTable> {
        match self {
            OperatorExpr::FromRelation(kind, r) => OperatorTable::from_relation(*kind, &r.eval()),
            OperatorExpr::Compose(outer, inner) => {
                OperatorTable::compose(&outer.materialize()?, &inner.materialize()?)
            }
            OperatorExpr::Dual(e) => e.materialize()?.dual(),
            OperatorExpr::TableLiteral(t) => Ok(t.clone()),
            OperatorExpr::InteriorFromFamily(b) => operator_from_family(b, OperatorKind::Interior),
            OperatorExpr::ClosureFromFamily(b) => operator_from_family(b, OperatorKind::Closure),
            OperatorExpr::Identity(u) => OperatorTable::identity(Arc::clone(u)),
        }
    }
}

/// Interior `U ↦ ⋃{b ∈ B | b ⊆ U}` or closure `U ↦ ⋂{b ∈ B | U ⊆ b}` (empty meet is the full set).
pub fn operator_from_family(b: &SubsetFamily, kind: OperatorKind) -> Result<OperatorTable> {
    let u = Arc::clone(b.universe());
    let entries = match kind {
        OperatorKind::Interior => b.union_below_table()?,
        OperatorKind::Closure => b.intersection_above_table()?,
    };
    OperatorTable::new(Arc::clone(&u), u, entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    Interior,
    Closure,
    Monotone,
}

impl RandomKind {
    pub fn name(self) -> &'static str {
        match self {
            RandomKind::Interior => "interior",
            RandomKind::Closure => "closure",
            RandomKind::Monotone => "monotone",
        }
    }
}

/// Seeded random endo-operator, deterministic in its arguments.
///
/// Interior and closure operators are generated from `family_size` random
/// subsets; monotone operators as `U ↦ ⋃{out_i | in_i ⊆ U}` over
/// `family_size` random pairs.
pub fn random_operator(u: &Arc<Universe>, kind: RandomKind, seed: u64, family_size: usize) -> Result<OperatorTable> {
    u.ensure_table_sized()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = u.full_word();
    match kind {
        RandomKind::Interior | RandomKind::Closure => {
            let members: Vec<u64> = (0..family_size).map(|_| rng.gen::<u64>() & full).collect();
            let family = SubsetFamily::new(Arc::clone(u), members)?;
            let kind = if kind == RandomKind::Interior {
                OperatorKind::Interior
            } else {
                OperatorKind::Closure
            };
            operator_from_family(&family, kind)
        }
        RandomKind::Monotone => {
            let pairs: Vec<(u64, u64)> = (0..family_size)
                .map(|_| (rng.gen::<u64>() & full, rng.gen::<u64>() & full))
                .collect();
            OperatorTable::from_fn(Arc::clone(u), Arc::clone(u), |m| {
                pairs
                    .iter()
                    .filter(|(input, _)| input & !m == 0)
                    .fold(0, |acc, (_, out)| acc | out)
            })
        }
    }
}

/// Seeded random monotone transformer between two universes, built like the
/// monotone case of [`random_operator`].
pub fn random_monotone_between(
    domain: &Arc<Universe>,
    codomain: &Arc<Universe>,
    seed: u64,
    pairs: usize,
) -> Result<OperatorTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (din, dout) = (domain.full_word(), codomain.full_word());
    let pairs: Vec<(u64, u64)> = (0..pairs)
        .map(|_| (rng.gen::<u64>() & din, rng.gen::<u64>() & dout))
        .collect();
    OperatorTable::from_fn(Arc::clone(domain), Arc::clone(codomain), |m| {
        pairs
            .iter()
            .filter(|(input, _)| input & !m == 0)
            .fold(0, |acc, (_, out)| acc | out)
    })
}

/// One composite of a relation with its converse, checked as an operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeCheck {
    /// `(outer, inner)`: the composite is `outer(r) . inner(conv(r))`.
    pub transforms: (TransformKind, TransformKind),
    pub expected: OperatorKind,
    pub report: ClassReport,
    /// `outer(r) . inner(conv(r)) . outer(r) = outer(r)`, first differing input.
    pub triple: Check<SubsetMask>,
}

impl CompositeCheck {
    pub fn holds(&self) -> bool {
        let kind_ok = match self.expected {
            OperatorKind::Interior => self.report.is_interior(),
            OperatorKind::Closure => self.report.is_closure(),
        };
        kind_ok && self.triple.holds()
    }

    pub fn describe(&self) -> String {
        let (o, i) = self.transforms;
        format!("{o}(r) . {i}(conv(r))")
    }
}

/// The three composites `angel.demon`, `demon.angel`, `ortho.ortho` of `r`
/// with its converse: classification plus the triple identity for each.
pub fn composite_laws(r: &Relation) -> Result<Vec<CompositeCheck>> {
    use TransformKind::*;
    let conv = r.converse();
    [(Angel, Demon, OperatorKind::Interior), (Demon, Angel, OperatorKind::Closure), (Ortho, Ortho, OperatorKind::Closure)]
        .into_iter()
        .map(|(outer, inner, expected)| {
            let o = OperatorTable::from_relation(outer, r)?;
            let i = OperatorTable::from_relation(inner, &conv)?;
            let comp = OperatorTable::compose(&o, &i)?;
            let triple = OperatorTable::compose(&comp, &o)?.first_difference(&o)?;
            Ok(CompositeCheck {
                transforms: (outer, inner),
                expected,
                report: comp.classify()?,
                triple,
            })
        })
        .collect()
}
