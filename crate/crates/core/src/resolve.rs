//! Fixpoint lattices, minimal bases and resolutions.
//!
//! An interior operator `F` on `P(X)` is resolved through an interpolant `Y`
//! (a family of fixpoints that forms a basis of `Fix(F)`) and the membership
//! relation `m ⊆ X×Y`, `(x, U) ∈ m` iff `x ∈ U`:
//!
//! ```text
//! F = ⟨m⟩ ∘ [m˘]        [m˘](W) = {U ∈ Y | U ⊆ W},   ⟨m⟩(S) = ⋃S
//! ```
//!
//! Closure operators are resolved either biorthogonally over a meet basis,
//! `F = ⊥m ∘ ⊥m˘`, or demonically, `F = [m] ∘ ⟨m˘⟩`, where `m` is the
//! membership relation of a basis of `Fix(¬F¬)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::optable::{OperatorKind, OperatorTable};
use crate::relalg::{Relation, TransformKind};
use crate::setcore::{all_masks, Bits, Check, SubsetFamily, SubsetMask, Universe, DEFAULT_CAP};

/// The fixpoints of an interior or closure operator, with irreducibility flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixLattice {
    kind: OperatorKind,
    fixpoints: SubsetFamily,
    join_irreducible: Vec<bool>,
    meet_irreducible: Vec<bool>,
}

impl FixLattice {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn fixpoints(&self) -> &SubsetFamily {
        &self.fixpoints
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.fixpoints.universe()
    }

    /// Parallel to `fixpoints().members()`.
    pub fn join_irreducible(&self) -> &[bool] {
        &self.join_irreducible
    }

    pub fn meet_irreducible(&self) -> &[bool] {
        &self.meet_irreducible
    }

    /// Irreducibility flags matching the lattice kind (join for interiors, meet for closures).
    pub fn irreducible(&self) -> &[bool] {
        match self.kind {
            OperatorKind::Interior => &self.join_irreducible,
            OperatorKind::Closure => &self.meet_irreducible,
        }
    }

    fn members_flagged(&self, flags: &[bool]) -> SubsetFamily {
        let members = self
            .fixpoints
            .members()
            .iter()
            .zip(flags)
            .filter(|(_, &f)| f)
            .map(|(&m, _)| m);
        SubsetFamily::new(Arc::clone(self.universe()), members).expect("subfamily of a valid family")
    }
}

/// Fixpoint lattice of `F`, read as an interior when `F` is one, otherwise as a closure.
pub fn fixpoints(f: &OperatorTable) -> Result<FixLattice> {
    let report = f.classify()?;
    if report.is_interior() {
        fixpoints_as(f, OperatorKind::Interior)
    } else if report.is_closure() {
        fixpoints_as(f, OperatorKind::Closure)
    } else {
        let why = report
            .failure_for(OperatorKind::Interior)
            .into_iter()
            .chain(report.failure_for(OperatorKind::Closure))
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::NotInteriorOrClosure(why))
    }
}

pub fn fixpoints_as(f: &OperatorTable, kind: OperatorKind) -> Result<FixLattice> {
    let report = f.classify()?;
    if let Some(why) = report.failure_for(kind) {
        return Err(match kind {
            OperatorKind::Interior => Error::NotInterior(why),
            OperatorKind::Closure => Error::NotClosure(why),
        });
    }
    let u = f.domain();
    let fixed = all_masks(u.len()).filter(|&m| f.apply_word(m) == m);
    let fixpoints = SubsetFamily::new(Arc::clone(u), fixed)?;
    debug_assert!(match kind {
        OperatorKind::Interior => fixpoints.contains(0),
        OperatorKind::Closure => fixpoints.contains(u.full_word()),
    });
    Ok(FixLattice {
        kind,
        join_irreducible: fixpoints.join_irreducible_flags()?,
        meet_irreducible: fixpoints.meet_irreducible_flags()?,
        fixpoints,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Join,
    Meet,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Join => "join",
            BasisKind::Meet => "meet",
        }
    }

    pub fn for_kind(kind: OperatorKind) -> BasisKind {
        match kind {
            OperatorKind::Interior => BasisKind::Join,
            OperatorKind::Closure => BasisKind::Meet,
        }
    }
}

/// The irreducible fixpoints: the unique smallest basis of a finite lattice.
pub fn minimal_basis(l: &FixLattice, kind: BasisKind) -> Result<SubsetFamily> {
    match (kind, l.kind) {
        (BasisKind::Join, OperatorKind::Interior) => Ok(l.members_flagged(&l.join_irreducible)),
        (BasisKind::Meet, OperatorKind::Closure) => Ok(l.members_flagged(&l.meet_irreducible)),
        _ => Err(Error::KindMismatch {
            basis: kind.name(),
            lattice: l.kind.name(),
        }),
    }
}

/// Whether every fixpoint is the join (resp. meet) of the members of `b`
/// below (resp. above) it. The witness is the first fixpoint that is not.
pub fn is_basis(b: &SubsetFamily, l: &FixLattice, kind: BasisKind) -> Result<Check<SubsetMask>> {
    let u = l.universe();
    u.ensure_same(b.universe())?;
    if let Some(&stray) = b.members().iter().find(|&&m| !l.fixpoints.contains(m)) {
        return Err(Error::NotAFixpointMember(u.render_word(stray)));
    }
    let full = u.full_word();
    let generated = |y: u64| match kind {
        BasisKind::Join => b.members().iter().filter(|&&m| m & !y == 0).fold(0, |acc, &m| acc | m),
        BasisKind::Meet => b.members().iter().filter(|&&m| y & !m == 0).fold(full, |acc, &m| acc & m),
    };
    Ok(l.fixpoints
        .members()
        .iter()
        .find(|&&y| generated(y) != y)
        .map(|&y| u.mask_from_word(y))
        .into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisChoice {
    /// Every fixpoint is an interpolant point.
    Fixpoints,
    /// Only the irreducible fixpoints.
    Minimal,
}

impl BasisChoice {
    pub fn name(self) -> &'static str {
        match self {
            BasisChoice::Fixpoints => "fixpoints",
            BasisChoice::Minimal => "minimal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureForm {
    Demonic,
    Biorthogonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionForm {
    /// `F = ⟨m⟩ ∘ [m˘]`
    InteriorAngelic,
    /// `F = [m] ∘ ⟨m˘⟩`
    ClosureDemonic,
    /// `F = ⊥m ∘ ⊥m˘`
    ClosureBiorthogonal,
}

impl ResolutionForm {
    pub fn name(self) -> &'static str {
        match self {
            ResolutionForm::InteriorAngelic => "interior-angelic",
            ResolutionForm::ClosureDemonic => "closure-demonic",
            ResolutionForm::ClosureBiorthogonal => "closure-biorthogonal",
        }
    }

    /// Transformers applied to `m˘` (first) and `m` (second).
    pub fn transforms(self) -> (TransformKind, TransformKind) {
        match self {
            ResolutionForm::InteriorAngelic => (TransformKind::Demon, TransformKind::Angel),
            ResolutionForm::ClosureDemonic => (TransformKind::Angel, TransformKind::Demon),
            ResolutionForm::ClosureBiorthogonal => (TransformKind::Ortho, TransformKind::Ortho),
        }
    }
}

impl fmt::Display for ResolutionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A factorization of an interior or closure operator through an interpolant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    original: OperatorTable,
    form: ResolutionForm,
    interpolant: Arc<Universe>,
    membership: Relation,
    basis_choice: Option<BasisChoice>,
}

impl Resolution {
    /// Assembles a resolution without verifying it; see [`verify_resolution`].
    pub fn from_parts(original: OperatorTable, form: ResolutionForm, membership: Relation) -> Result<Resolution> {
        original.domain().ensure_same(membership.source())?;
        Ok(Resolution {
            original,
            form,
            interpolant: Arc::clone(membership.target()),
            membership,
            basis_choice: None,
        })
    }

    pub fn original(&self) -> &OperatorTable {
        &self.original
    }

    pub fn form(&self) -> ResolutionForm {
        self.form
    }

    pub fn interpolant(&self) -> &Arc<Universe> {
        &self.interpolant
    }

    pub fn membership(&self) -> &Relation {
        &self.membership
    }

    pub fn basis_choice(&self) -> Option<BasisChoice> {
        self.basis_choice
    }

    /// Copy with one membership pair flipped. The result is not re-verified.
    pub fn with_membership_toggled(&self, x: usize, y: usize) -> Resolution {
        Resolution {
            membership: self.membership.toggled(x, y),
            ..self.clone()
        }
    }

    /// The operator rebuilt from the form and the membership relation.
    pub fn composite(&self) -> OperatorTable {
        let (first, second) = self.form.transforms();
        let conv = self.membership.converse();
        let x = self.membership.source();
        OperatorTable::from_fn(Arc::clone(x), Arc::clone(x), |w| {
            let s = conv.transform_bits(first, &Bits::from_word(x.len(), w));
            self.membership
                .transform_bits(second, &s)
                .as_word()
                .expect("word-sized base universe")
        })
        .expect("base universe is table-sized")
    }
}

fn membership(family: &SubsetFamily) -> Relation {
    let x = family.universe();
    let labels = family
        .members()
        .iter()
        .map(|&m| format!("y{}", x.render_word(m)))
        .collect();
    let y = Universe::fresh("Y", labels);
    let members = family.members();
    Relation::from_fn(Arc::clone(x), y, |xi, yi| members[yi] >> xi & 1 == 1)
}

fn finish(original: &OperatorTable, form: ResolutionForm, family: &SubsetFamily, choice: BasisChoice) -> Result<Resolution> {
    let m = membership(family);
    let res = Resolution {
        original: original.clone(),
        form,
        interpolant: Arc::clone(m.target()),
        membership: m,
        basis_choice: Some(choice),
    };
    match verify_resolution(original, &res)? {
        Check::Holds => Ok(res),
        Check::Fails(w) => Err(Error::VerificationFailed(w.to_string())),
    }
}

fn choose(l: &FixLattice, kind: BasisKind, choice: BasisChoice) -> Result<SubsetFamily> {
    match choice {
        BasisChoice::Fixpoints => Ok(l.fixpoints.clone()),
        BasisChoice::Minimal => minimal_basis(l, kind),
    }
}

/// Resolves an interior operator as `⟨m⟩ ∘ [m˘]`.
pub fn resolve_interior(f: &OperatorTable, choice: BasisChoice) -> Result<Resolution> {
    let l = fixpoints_as(f, OperatorKind::Interior)?;
    let family = choose(&l, BasisKind::Join, choice)?;
    finish(f, ResolutionForm::InteriorAngelic, &family, choice)
}

/// Resolves a closure operator. The demonic form goes through the interior
/// `¬F¬`: if `¬F¬ = ⟨m⟩ ∘ [m˘]` then `F = [m] ∘ ⟨m˘⟩` for the same `m`.
pub fn resolve_closure(f: &OperatorTable, form: ClosureForm, choice: BasisChoice) -> Result<Resolution> {
    match form {
        ClosureForm::Biorthogonal => {
            let l = fixpoints_as(f, OperatorKind::Closure)?;
            let family = choose(&l, BasisKind::Meet, choice)?;
            finish(f, ResolutionForm::ClosureBiorthogonal, &family, choice)
        }
        ClosureForm::Demonic => {
            if let Some(why) = f.classify()?.failure_for(OperatorKind::Closure) {
                return Err(Error::NotClosure(why));
            }
            let l = fixpoints_as(&f.dual()?, OperatorKind::Interior)?;
            let family = choose(&l, BasisKind::Join, choice)?;
            finish(f, ResolutionForm::ClosureDemonic, &family, choice)
        }
    }
}

/// Compares `F` with the composite dictated by the resolution, over all inputs.
pub fn verify_resolution(f: &OperatorTable, r: &Resolution) -> Result<Check<SubsetMask>> {
    f.domain().ensure_same(r.original.domain())?;
    f.first_difference(&r.composite())
}

/// `U_y = ⟨m⟩{y}`, the column of each interpolant point, for an angelic resolution.
pub fn basis_from_resolution(r: &Resolution) -> Result<SubsetFamily> {
    if r.form != ResolutionForm::InteriorAngelic {
        return Err(Error::WrongForm {
            expected: ResolutionForm::InteriorAngelic.name(),
            found: r.form.name(),
        });
    }
    let x = r.membership.source();
    let columns = (0..r.interpolant.len()).map(|y| {
        r.membership
            .column(y)
            .as_word()
            .expect("word-sized base universe")
    });
    SubsetFamily::new(Arc::clone(x), columns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorVariant {
    /// `F = ⟨r⟩ ∘ [s]`
    AngelDemon,
    /// `F = [r] ∘ ⟨s⟩`
    DemonAngel,
    /// `F = ⊥r ∘ ⊥s`
    OrthoOrtho,
}

impl FactorVariant {
    pub fn name(self) -> &'static str {
        match self {
            FactorVariant::AngelDemon => "angel-demon",
            FactorVariant::DemonAngel => "demon-angel",
            FactorVariant::OrthoOrtho => "ortho-ortho",
        }
    }

    /// Transformers applied to `s` (first) and `r` (second).
    pub fn transforms(self) -> (TransformKind, TransformKind) {
        match self {
            FactorVariant::AngelDemon => (TransformKind::Demon, TransformKind::Angel),
            FactorVariant::DemonAngel => (TransformKind::Angel, TransformKind::Demon),
            FactorVariant::OrthoOrtho => (TransformKind::Ortho, TransformKind::Ortho),
        }
    }
}

/// A monotone `F: P(X) → P(Y)` factored through `X′ = P(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    original: OperatorTable,
    variant: FactorVariant,
    interpolant: Arc<Universe>,
    s: Relation,
    r: Relation,
}

impl Factorization {
    pub fn original(&self) -> &OperatorTable {
        &self.original
    }

    pub fn variant(&self) -> FactorVariant {
        self.variant
    }

    pub fn interpolant(&self) -> &Arc<Universe> {
        &self.interpolant
    }

    /// `s ⊆ X′ × X`
    pub fn s(&self) -> &Relation {
        &self.s
    }

    /// `r ⊆ Y × X′`
    pub fn r(&self) -> &Relation {
        &self.r
    }

    pub fn composite(&self) -> OperatorTable {
        let (first, second) = self.variant.transforms();
        let x = self.s.target();
        OperatorTable::from_fn(Arc::clone(x), Arc::clone(self.r.source()), |w| {
            let mid = self.s.transform_bits(first, &Bits::from_word(x.len(), w));
            self.r.transform_bits(second, &mid).as_word().expect("word-sized codomain")
        })
        .expect("table-sized domain")
    }

    pub fn verify(&self) -> Result<Check<SubsetMask>> {
        self.original.first_difference(&self.composite())
    }
}

pub fn factorize_monotone(f: &OperatorTable, variant: FactorVariant) -> Result<Factorization> {
    factorize_monotone_with_cap(f, variant, DEFAULT_CAP)
}

/// Factorization with the interpolant `X′ = P(X)`; `|X|` may be at most half the cap.
pub fn factorize_monotone_with_cap(f: &OperatorTable, variant: FactorVariant, cap: usize) -> Result<Factorization> {
    let x = f.domain();
    let y = f.codomain();
    if x.len() > cap / 2 {
        return Err(Error::UniverseTooLarge {
            name: x.name().to_string(),
            size: x.len(),
            cap: cap / 2,
        });
    }
    if let Some((lo, hi)) = f.monotone_witness() {
        return Err(Error::NotMonotone {
            lower: x.render_word(lo),
            upper: x.render_word(hi),
        });
    }
    let labels = all_masks(x.len()).map(|m| format!("V{}", x.render_word(m))).collect();
    let xp = Universe::fresh("Xp", labels);
    // (U, x) ∈ s iff x ∈ U; subsets of X are indexed by mask value
    let s = Relation::from_fn(Arc::clone(&xp), Arc::clone(x), |u, xi| u >> xi & 1 == 1);
    let image = match variant {
        FactorVariant::AngelDemon => f.clone(),
        FactorVariant::DemonAngel | FactorVariant::OrthoOrtho => f.conjugate(),
    };
    // (y, U) ∈ r iff y ∈ G(U), with G = F or its conjugate ¬F¬
    let r = Relation::from_fn(Arc::clone(y), Arc::clone(&xp), |yi, u| image.apply_word(u as u64) >> yi & 1 == 1);
    let (s, r) = match variant {
        FactorVariant::OrthoOrtho => (s.complement(), r.complement()),
        _ => (s, r),
    };
    let fact = Factorization {
        original: f.clone(),
        variant,
        interpolant: xp,
        s,
        r,
    };
    match fact.verify()? {
        Check::Holds => Ok(fact),
        Check::Fails(w) => Err(Error::VerificationFailed(w.to_string())),
    }
}
