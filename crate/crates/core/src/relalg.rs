//! Binary relations and the predicate transformers they induce.
//!
//! For `r ⊆ X×Y` all three transformers map `P(Y)` to `P(X)`:
//!
//! * angelic `⟨r⟩V = {x | ∃y. (x,y)∈r ∧ y∈V}`
//! * demonic `[r]V = {x | ∀y. (x,y)∈r ⇒ y∈V}`
//! * orthogonal `⊥r V = {x | ∀y∈V. (x,y)∈r}` (antitone)
//!
//! Row `x` of a relation is the successor set of `x`, so angel keeps the rows
//! meeting `V`, demon the rows inside `V` and ortho the rows containing `V`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::optable::OperatorTable;
use crate::setcore::{all_masks, Bits, SubsetMask, Universe, WORD_BITS};

/// Largest number of input bits an exhaustive law check will enumerate.
pub const EXHAUSTIVE_BUDGET_BITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformKind {
    Angel,
    Demon,
    Ortho,
}

impl TransformKind {
    pub const ALL: [TransformKind; 3] = [TransformKind::Angel, TransformKind::Demon, TransformKind::Ortho];

    pub fn keyword(self) -> &'static str {
        match self {
            TransformKind::Angel => "angel",
            TransformKind::Demon => "demon",
            TransformKind::Ortho => "ortho",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Which lattice-morphism property an operator is assumed to have when a
/// relation is read back from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    /// Preserves arbitrary unions; represented by an angelic transformer.
    Sup,
    /// Preserves arbitrary intersections; represented by a demonic transformer.
    Inf,
    /// Sends unions to intersections; represented by an orthogonal transformer.
    Antitone,
}

impl MorphismKind {
    pub fn transform(self) -> TransformKind {
        match self {
            MorphismKind::Sup => TransformKind::Angel,
            MorphismKind::Inf => TransformKind::Demon,
            MorphismKind::Antitone => TransformKind::Ortho,
        }
    }
}

/// A relation `r ⊆ source × target`, stored as one row of target bits per source element.
#[derive(Debug, Clone)]
pub struct Relation {
    source: Arc<Universe>,
    target: Arc<Universe>,
    rows: Vec<Bits>,
    // rows as single words, present when the target fits in one
    words: Option<Vec<u64>>,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.rows == other.rows
    }
}

impl Eq for Relation {}

impl Relation {
    pub fn from_rows(source: Arc<Universe>, target: Arc<Universe>, rows: Vec<Bits>) -> Result<Relation> {
        if rows.len() != source.len() {
            return Err(Error::UniverseMismatch {
                expected: format!("{} rows for {}", source.len(), source.name()),
                found: format!("{} rows", rows.len()),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != target.len()) {
            return Err(Error::UniverseMismatch {
                expected: format!("{}-bit rows for {}", target.len(), target.name()),
                found: format!("a {}-bit row", bad.len()),
            });
        }
        let words = (target.len() <= WORD_BITS)
            .then(|| rows.iter().map(|r| r.as_word().unwrap_or(0)).collect());
        Ok(Relation {
            source,
            target,
            rows,
            words,
        })
    }

    pub fn empty(source: Arc<Universe>, target: Arc<Universe>) -> Relation {
        let rows = vec![Bits::new(target.len()); source.len()];
        Self::from_rows(source, target, rows).expect("well-formed rows")
    }

    pub fn full(source: Arc<Universe>, target: Arc<Universe>) -> Relation {
        let rows = vec![Bits::full(target.len()); source.len()];
        Self::from_rows(source, target, rows).expect("well-formed rows")
    }

    pub fn from_fn(
        source: Arc<Universe>,
        target: Arc<Universe>,
        mut related: impl FnMut(usize, usize) -> bool,
    ) -> Relation {
        let (n, m) = (source.len(), target.len());
        let rows = (0..n)
            .map(|x| Bits::from_indices(m, (0..m).filter(|&y| related(x, y))))
            .collect();
        Self::from_rows(source, target, rows).expect("well-formed rows")
    }

    /// Relation from labelled pairs `(x, y)`.
    pub fn from_pairs<S: AsRef<str>>(
        source: Arc<Universe>,
        target: Arc<Universe>,
        pairs: &[(S, S)],
    ) -> Result<Relation> {
        let mut rows = vec![Bits::new(target.len()); source.len()];
        for (x, y) in pairs {
            let xi = source.index_of(x.as_ref()).ok_or_else(|| Error::UnknownElement {
                universe: source.name().to_string(),
                element: x.as_ref().to_string(),
            })?;
            let yi = target.index_of(y.as_ref()).ok_or_else(|| Error::UnknownElement {
                universe: target.name().to_string(),
                element: y.as_ref().to_string(),
            })?;
            rows[xi].insert(yi);
        }
        Self::from_rows(source, target, rows)
    }

    /// Each pair is included independently with probability `density`.
    pub fn random<R: Rng + ?Sized>(
        source: Arc<Universe>,
        target: Arc<Universe>,
        density: f64,
        rng: &mut R,
    ) -> Relation {
        Self::from_fn(source, target, |_, _| rng.gen_bool(density))
    }

    pub fn source(&self) -> &Arc<Universe> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Universe> {
        &self.target
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &Bits {
        &self.rows[x]
    }

    /// Predecessors of `y`: `{x | (x,y) ∈ r}`.
    pub fn column(&self, y: usize) -> Bits {
        Bits::from_indices(
            self.source.len(),
            (0..self.source.len()).filter(|&x| self.rows[x].contains(y)),
        )
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Bits::count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(Bits::is_empty)
    }

    /// All pairs as index tuples, in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter_ones().map(move |y| (x, y)))
    }

    /// All pairs as label tuples, in row-major order.
    pub fn label_pairs(&self) -> Vec<(&str, &str)> {
        self.pairs()
            .map(|(x, y)| (self.source.label(x), self.target.label(y)))
            .collect()
    }

    /// Copy of the relation with membership of `(x, y)` flipped.
    pub fn toggled(&self, x: usize, y: usize) -> Relation {
        let mut rows = self.rows.clone();
        rows[x].toggle(y);
        Self::from_rows(Arc::clone(&self.source), Arc::clone(&self.target), rows).expect("same shape")
    }

    /// `r˘ ⊆ target × source`.
    pub fn converse(&self) -> Relation {
        let mut rows = vec![Bits::new(self.source.len()); self.target.len()];
        for (x, y) in self.pairs() {
            rows[y].insert(x);
        }
        Self::from_rows(Arc::clone(&self.target), Arc::clone(&self.source), rows).expect("transposed shape")
    }

    /// `¬r`, the complement within `source × target`.
    pub fn complement(&self) -> Relation {
        let rows = self.rows.iter().map(Bits::complement).collect();
        Self::from_rows(Arc::clone(&self.source), Arc::clone(&self.target), rows).expect("same shape")
    }

    /// Applies a transformer to a subset of the target, producing a subset of the source.
    pub fn transform(&self, kind: TransformKind, v: &SubsetMask) -> Result<SubsetMask> {
        self.target.ensure_same(v.universe())?;
        SubsetMask::new(Arc::clone(&self.source), self.transform_bits(kind, v.bits()))
    }

    pub fn transform_bits(&self, kind: TransformKind, v: &Bits) -> Bits {
        debug_assert_eq!(v.len(), self.target.len());
        if let (Some(words), Some(vw)) = (&self.words, v.as_word()) {
            if self.source.len() <= WORD_BITS {
                return Bits::from_word(self.source.len(), apply_rows(kind, words, vw));
            }
            let hit = |row: u64| match kind {
                TransformKind::Angel => row & vw != 0,
                TransformKind::Demon => row & !vw == 0,
                TransformKind::Ortho => vw & !row == 0,
            };
            return Bits::from_indices(
                self.source.len(),
                words.iter().enumerate().filter(|(_, &r)| hit(r)).map(|(x, _)| x),
            );
        }
        let hit = |row: &Bits| match kind {
            TransformKind::Angel => row.intersects(v),
            TransformKind::Demon => row.is_subset(v),
            TransformKind::Ortho => v.is_subset(row),
        };
        Bits::from_indices(
            self.source.len(),
            self.rows.iter().enumerate().filter(|(_, r)| hit(r)).map(|(x, _)| x),
        )
    }

    /// Word-level transform for relations whose universes both fit in a word.
    pub fn transform_word(&self, kind: TransformKind, v: u64) -> u64 {
        let words = self
            .words
            .as_ref()
            .expect("transform_word needs a target of at most 64 elements");
        debug_assert!(self.source.len() <= WORD_BITS);
        apply_rows(kind, words, v)
    }
}

fn apply_rows(kind: TransformKind, rows: &[u64], v: u64) -> u64 {
    let mut out = 0u64;
    for (x, &row) in rows.iter().enumerate() {
        let hit = match kind {
            TransformKind::Angel => row & v != 0,
            TransformKind::Demon => row & !v == 0,
            TransformKind::Ortho => v & !row == 0,
        };
        out |= (hit as u64) << x;
    }
    out
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .label_pairs()
            .into_iter()
            .map(|(x, y)| format!("({x},{y})"))
            .collect();
        write!(f, "{{{}}}", pairs.join(","))
    }
}

/// The identity a law check is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    /// `⟨r⟩(¬V) = ¬[r](V)`
    AngelNegation,
    /// `⟨¬r⟩(V) = ¬⊥r(V)`
    OrthoNegation,
    /// `⟨r⟩(V) ⊆ U ⟺ V ⊆ [r˘](U)`
    AngelDemonGalois,
    /// `U ⊆ ⊥r(V) ⟺ V ⊆ ⊥r˘(U)`
    OrthoGalois,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::AngelNegation => "angel-negation",
            Law::OrthoNegation => "ortho-negation",
            Law::AngelDemonGalois => "angel-demon-galois",
            Law::OrthoGalois => "ortho-galois",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Side {
    Truth(bool),
    Set(SubsetMask),
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Truth(b) => write!(f, "{b}"),
            Side::Set(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub law: Law,
    /// Subset of the source; absent for laws quantified over `V` alone.
    pub u: Option<SubsetMask>,
    pub v: SubsetMask,
    pub lhs: Side,
    pub rhs: Side,
}

/// Result of an exhaustive law check. The counterexample, if any, is the
/// first one in lexicographic mask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisReport {
    pub counterexample: Option<Counterexample>,
}

impl GaloisReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn ensure_budget(bits: usize) -> Result<()> {
    if bits > EXHAUSTIVE_BUDGET_BITS {
        Err(Error::BudgetExceeded {
            bits,
            budget: EXHAUSTIVE_BUDGET_BITS,
        })
    } else {
        Ok(())
    }
}

/// Transformer evaluator used by the law checkers; swappable for fault injection.
pub type Evaluator<'a> = &'a dyn Fn(TransformKind, &Relation, &Bits) -> Bits;

fn default_eval(kind: TransformKind, r: &Relation, v: &Bits) -> Bits {
    r.transform_bits(kind, v)
}

/// Checks `⟨r⟩·¬ = ¬·[r]` and `⟨¬r⟩ = ¬·⊥r` over every `V ⊆ Y`.
pub fn check_negation_laws(r: &Relation) -> Result<GaloisReport> {
    check_negation_laws_with(r, &default_eval)
}

pub fn check_negation_laws_with(r: &Relation, eval: Evaluator<'_>) -> Result<GaloisReport> {
    ensure_budget(r.target.len())?;
    let not_r = r.complement();
    let (x, y) = (&r.source, &r.target);
    for v in all_masks(y.len()) {
        let vb = Bits::from_word(y.len(), v);
        let lhs = eval(TransformKind::Angel, r, &vb.complement());
        let rhs = eval(TransformKind::Demon, r, &vb).complement();
        if lhs != rhs {
            return Ok(violation(Law::AngelNegation, None, y, vb, x, lhs, rhs));
        }
        let lhs = eval(TransformKind::Angel, &not_r, &vb);
        let rhs = eval(TransformKind::Ortho, r, &vb).complement();
        if lhs != rhs {
            return Ok(violation(Law::OrthoNegation, None, y, vb, x, lhs, rhs));
        }
    }
    Ok(GaloisReport { counterexample: None })
}

fn violation(
    law: Law,
    u: Option<SubsetMask>,
    y: &Arc<Universe>,
    v: Bits,
    x: &Arc<Universe>,
    lhs: Bits,
    rhs: Bits,
) -> GaloisReport {
    let set = |b: Bits| Side::Set(SubsetMask::new(Arc::clone(x), b).expect("source-sized"));
    GaloisReport {
        counterexample: Some(Counterexample {
            law,
            u,
            v: SubsetMask::new(Arc::clone(y), v).expect("target-sized"),
            lhs: set(lhs),
            rhs: set(rhs),
        }),
    }
}

/// Checks both Galois equivalences for every pair `U ⊆ X`, `V ⊆ Y`.
pub fn check_galois(r: &Relation) -> Result<GaloisReport> {
    check_galois_with(r, &default_eval)
}

pub fn check_galois_with(r: &Relation, eval: Evaluator<'_>) -> Result<GaloisReport> {
    let (x, y) = (&r.source, &r.target);
    ensure_budget(x.len() + y.len())?;
    let conv = r.converse();
    let word = |b: Bits| b.as_word().expect("budgeted universes fit a word");
    let angel: Vec<u64> = all_masks(y.len())
        .map(|v| word(eval(TransformKind::Angel, r, &Bits::from_word(y.len(), v))))
        .collect();
    let ortho: Vec<u64> = all_masks(y.len())
        .map(|v| word(eval(TransformKind::Ortho, r, &Bits::from_word(y.len(), v))))
        .collect();
    for u in all_masks(x.len()) {
        let ub = Bits::from_word(x.len(), u);
        let demon_conv = word(eval(TransformKind::Demon, &conv, &ub));
        let ortho_conv = word(eval(TransformKind::Ortho, &conv, &ub));
        for v in all_masks(y.len()) {
            let lhs = angel[v as usize] & !u == 0;
            let rhs = v & !demon_conv == 0;
            if lhs != rhs {
                return Ok(truth_violation(Law::AngelDemonGalois, x, u, y, v, lhs, rhs));
            }
            let lhs = u & !ortho[v as usize] == 0;
            let rhs = v & !ortho_conv == 0;
            if lhs != rhs {
                return Ok(truth_violation(Law::OrthoGalois, x, u, y, v, lhs, rhs));
            }
        }
    }
    Ok(GaloisReport { counterexample: None })
}

fn truth_violation(
    law: Law,
    x: &Arc<Universe>,
    u: u64,
    y: &Arc<Universe>,
    v: u64,
    lhs: bool,
    rhs: bool,
) -> GaloisReport {
    GaloisReport {
        counterexample: Some(Counterexample {
            law,
            u: Some(x.mask_from_word(u)),
            v: y.mask_from_word(v),
            lhs: Side::Truth(lhs),
            rhs: Side::Truth(rhs),
        }),
    }
}

/// Reads back the relation representing an operator `F: P(Y) → P(X)` that is
/// assumed to have the given morphism property. The property itself is not
/// verified; if it holds, `transform(kind.transform(), result, ·)` equals `F`.
pub fn extract_relation(f: &OperatorTable, kind: MorphismKind) -> Relation {
    let y = f.domain();
    let x = f.codomain();
    match kind {
        MorphismKind::Sup => {
            Relation::from_fn(Arc::clone(x), Arc::clone(y), |xi, yi| f.apply_word(1 << yi) >> xi & 1 == 1)
        }
        MorphismKind::Inf => {
            // (x,y) ∈ r iff every U with x ∈ F(U) contains y, i.e. y ∈ ⋂{U | x ∈ F(U)}
            let mut meets = vec![y.full_word(); x.len()];
            for u in all_masks(y.len()) {
                let out = f.apply_word(u);
                for (xi, m) in meets.iter_mut().enumerate() {
                    if out >> xi & 1 == 1 {
                        *m &= u;
                    }
                }
            }
            let rows = meets.into_iter().map(|m| Bits::from_word(y.len(), m)).collect();
            Relation::from_rows(Arc::clone(x), Arc::clone(y), rows).expect("shape")
        }
        MorphismKind::Antitone => {
            let negated = f.map_entries(|w| !w & x.full_word());
            extract_relation(&negated, MorphismKind::Sup).complement()
        }
    }
}
