//! Finite universes, subset masks and families of subsets.
//!
//! Subsets of a universe are word-packed bit vectors. Universes that carry
//! operator tables are small (at most [`WORD_BITS`] elements, and in practice
//! well under [`TABLE_LIMIT`]), so most of the crate works on single `u64`
//! words internally; [`Bits`] covers the wide universes that appear as
//! interpolants.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the size of a user-declared universe.
pub const DEFAULT_CAP: usize = 20;

/// Hard limit on universes that index an operator table (2^n entries).
pub const TABLE_LIMIT: usize = 26;

pub const WORD_BITS: usize = 64;

/// Outcome of a checked property: either it holds, or a witness is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check<W> {
    Holds,
    Fails(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Check<V> {
        match self {
            Check::Holds => Check::Holds,
            Check::Fails(w) => Check::Fails(f(w)),
        }
    }
}

impl<W> From<Option<W>> for Check<W> {
    fn from(o: Option<W>) -> Self {
        match o {
            None => Check::Holds,
            Some(w) => Check::Fails(w),
        }
    }
}

/// A named finite set with a fixed label-to-bit assignment (declaration order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    name: String,
    labels: Vec<String>,
}

impl Universe {
    /// Builds a universe under the default cap.
    pub fn new<S: AsRef<str>>(name: &str, labels: &[S]) -> Result<Arc<Universe>> {
        Self::with_cap(name, labels, DEFAULT_CAP)
    }

    pub fn with_cap<S: AsRef<str>>(name: &str, labels: &[S], cap: usize) -> Result<Arc<Universe>> {
        if labels.is_empty() {
            return Err(Error::EmptyUniverse(name.to_string()));
        }
        if labels.len() > cap {
            return Err(Error::UniverseTooLarge {
                name: name.to_string(),
                size: labels.len(),
                cap,
            });
        }
        let mut seen = HashSet::new();
        for l in labels {
            if !seen.insert(l.as_ref()) {
                return Err(Error::DuplicateLabel(l.as_ref().to_string()));
            }
        }
        Ok(Arc::new(Universe {
            name: name.to_string(),
            labels: labels.iter().map(|l| l.as_ref().to_string()).collect(),
        }))
    }

    /// Builds an uncapped, possibly empty universe. Used for interpolants,
    /// whose size is dictated by a computed family rather than by the user.
    /// Labels must still be distinct.
    pub fn fresh(name: &str, labels: Vec<String>) -> Arc<Universe> {
        debug_assert_eq!(
            labels.iter().collect::<HashSet<_>>().len(),
            labels.len(),
            "fresh universe labels must be distinct"
        );
        Arc::new(Universe {
            name: name.to_string(),
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Mask of the whole universe; only meaningful when `len() <= 64`.
    pub fn full_word(&self) -> u64 {
        full_word(self.len())
    }

    /// Number of subsets, `2^len()`, for table-sized universes.
    pub fn powerset_len(&self) -> usize {
        1usize << self.len()
    }

    /// Mask with exactly the named elements set.
    pub fn mask_of<S: AsRef<str>>(self: &Arc<Self>, names: &[S]) -> Result<SubsetMask> {
        let mut bits = Bits::new(self.len());
        for n in names {
            let i = self.index_of(n.as_ref()).ok_or_else(|| Error::UnknownElement {
                universe: self.name.clone(),
                element: n.as_ref().to_string(),
            })?;
            bits.insert(i);
        }
        Ok(SubsetMask {
            universe: Arc::clone(self),
            bits,
        })
    }

    pub fn empty_mask(self: &Arc<Self>) -> SubsetMask {
        SubsetMask {
            universe: Arc::clone(self),
            bits: Bits::new(self.len()),
        }
    }

    pub fn full_mask(self: &Arc<Self>) -> SubsetMask {
        SubsetMask {
            universe: Arc::clone(self),
            bits: Bits::full(self.len()),
        }
    }

    pub fn mask_from_word(self: &Arc<Self>, w: u64) -> SubsetMask {
        SubsetMask {
            universe: Arc::clone(self),
            bits: Bits::from_word(self.len(), w),
        }
    }

    /// Labels of the set bits of `w`, in universe order.
    pub fn word_labels(&self, w: u64) -> Vec<&str> {
        (0..self.len())
            .filter(|&i| w >> i & 1 == 1)
            .map(|i| self.labels[i].as_str())
            .collect()
    }

    /// Renders `w` as a subset literal such as `{a,c}`.
    pub fn render_word(&self, w: u64) -> String {
        format!("{{{}}}", self.word_labels(w).join(","))
    }

    pub(crate) fn ensure_same(&self, other: &Universe) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                expected: self.name.clone(),
                found: other.name.clone(),
            })
        }
    }

    pub(crate) fn ensure_table_sized(&self) -> Result<()> {
        if self.len() > TABLE_LIMIT {
            Err(Error::UniverseTooLarge {
                name: self.name.clone(),
                size: self.len(),
                cap: TABLE_LIMIT,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn ensure_word_sized(&self) -> Result<()> {
        if self.len() > WORD_BITS {
            Err(Error::UniverseTooLarge {
                name: self.name.clone(),
                size: self.len(),
                cap: WORD_BITS,
            })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn full_word(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Fixed-length, word-packed bit vector. Bits at positions `>= len` are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Bits {
        Bits {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn full(len: usize) -> Bits {
        let mut b = Bits {
            len,
            words: vec![u64::MAX; len.div_ceil(WORD_BITS)],
        };
        b.trim();
        b
    }

    pub fn from_word(len: usize, w: u64) -> Bits {
        let mut b = Bits::new(len);
        if let Some(first) = b.words.first_mut() {
            *first = w;
        }
        b.trim();
        b
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Bits {
        let mut b = Bits::new(len);
        for i in indices {
            b.insert(i);
        }
        b
    }

    fn trim(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The single backing word, when the vector fits in one.
    pub fn as_word(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD_BITS + t)
                }
            })
        })
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn complement(&self) -> Bits {
        let mut b = Bits {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        b.trim();
        b
    }
}

/// A subset of a particular universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    universe: Arc<Universe>,
    bits: Bits,
}

impl SubsetMask {
    pub fn new(universe: Arc<Universe>, bits: Bits) -> Result<SubsetMask> {
        if bits.len() != universe.len() {
            return Err(Error::UniverseMismatch {
                expected: format!("{} ({} elements)", universe.name(), universe.len()),
                found: format!("a {}-bit mask", bits.len()),
            });
        }
        Ok(SubsetMask { universe, bits })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    /// Numeric value of the mask (bit i = element i), for universes of at most 64 elements.
    pub fn value(&self) -> Option<u64> {
        self.bits.as_word()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.universe
            .index_of(label)
            .is_some_and(|i| self.bits.contains(i))
    }

    /// Labels of the members, in universe order.
    pub fn labels(&self) -> Vec<&str> {
        self.bits
            .iter_ones()
            .map(|i| self.universe.label(i))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_subset(&self, other: &SubsetMask) -> Result<bool> {
        self.universe.ensure_same(&other.universe)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub fn complement(&self) -> SubsetMask {
        SubsetMask {
            universe: Arc::clone(&self.universe),
            bits: self.bits.complement(),
        }
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturateMode {
    Unions,
    Intersections,
}

/// A duplicate-free family of subsets of one universe, sorted by mask value.
///
/// Families live over table-sized universes, so members are stored as words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetFamily {
    universe: Arc<Universe>,
    members: Vec<u64>,
}

impl SubsetFamily {
    pub fn new(universe: Arc<Universe>, members: impl IntoIterator<Item = u64>) -> Result<SubsetFamily> {
        universe.ensure_word_sized()?;
        let full = universe.full_word();
        let mut members: Vec<u64> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m & !full != 0) {
            return Err(Error::UniverseMismatch {
                expected: universe.name().to_string(),
                found: format!("mask {bad:#x}"),
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(SubsetFamily { universe, members })
    }

    pub fn empty(universe: Arc<Universe>) -> Result<SubsetFamily> {
        Self::new(universe, [])
    }

    pub fn from_masks(universe: Arc<Universe>, masks: &[SubsetMask]) -> Result<SubsetFamily> {
        let mut words = Vec::with_capacity(masks.len());
        for m in masks {
            universe.ensure_same(m.universe())?;
            words.push(m.value().expect("word-sized universe"));
        }
        Self::new(universe, words)
    }

    /// Family from label lists, e.g. `[["a"], ["a", "b"]]`.
    pub fn from_labels(universe: &Arc<Universe>, sets: &[&[&str]]) -> Result<SubsetFamily> {
        let masks = sets
            .iter()
            .map(|s| universe.mask_of(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(Arc::clone(universe), &masks)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: u64) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    pub fn position(&self, m: u64) -> Option<usize> {
        self.members.binary_search(&m).ok()
    }

    pub fn masks(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.members.iter().map(|&m| self.universe.mask_from_word(m))
    }

    /// Copy of the family without `m`.
    pub fn without(&self, m: u64) -> SubsetFamily {
        SubsetFamily {
            universe: Arc::clone(&self.universe),
            members: self.members.iter().copied().filter(|&x| x != m).collect(),
        }
    }

    /// Smallest superfamily closed under binary unions (resp. intersections),
    /// including the empty union `{}` (resp. the empty intersection, the full set).
    pub fn saturate(&self, mode: SaturateMode) -> Result<SubsetFamily> {
        let full = self.universe.full_word();
        let limit = 1usize.checked_shl(self.universe.len() as u32).unwrap_or(usize::MAX);
        let unit = match mode {
            SaturateMode::Unions => 0,
            SaturateMode::Intersections => full,
        };
        let mut seen: HashSet<u64> = HashSet::from([unit]);
        let mut out = vec![unit];
        for &g in &self.members {
            let mut added = Vec::new();
            for &x in &out {
                let y = match mode {
                    SaturateMode::Unions => x | g,
                    SaturateMode::Intersections => x & g,
                };
                if seen.insert(y) {
                    added.push(y);
                }
            }
            out.extend(added);
            if out.len() > limit {
                return Err(Error::FamilyBudgetExceeded { limit });
            }
        }
        Self::new(Arc::clone(&self.universe), out)
    }

    /// For every mask `W` (indexed by value), the union of the members contained in `W`.
    pub fn union_below_table(&self) -> Result<Vec<u64>> {
        self.universe.ensure_table_sized()?;
        let n = self.universe.len();
        let mut h = vec![0u64; 1 << n];
        for &m in &self.members {
            h[m as usize] = m;
        }
        for w in 1..h.len() {
            let mut rest = w;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                h[w] |= h[w ^ bit];
                rest ^= bit;
            }
        }
        Ok(h)
    }

    /// For every mask `W`, the intersection of the members containing `W`
    /// (the full set when none does).
    pub fn intersection_above_table(&self) -> Result<Vec<u64>> {
        self.universe.ensure_table_sized()?;
        let n = self.universe.len();
        let full = self.universe.full_word();
        let mut g = vec![full; 1 << n];
        for &m in &self.members {
            g[m as usize] = m;
        }
        for w in (0..g.len()).rev() {
            let mut missing = full & !(w as u64);
            while missing != 0 {
                let bit = missing & missing.wrapping_neg();
                g[w] &= g[w | bit as usize];
                missing ^= bit;
            }
        }
        Ok(g)
    }

    /// Per-member flag: `U` is not the union of the members strictly below it.
    pub fn join_irreducible_flags(&self) -> Result<Vec<bool>> {
        let h = self.union_below_table()?;
        Ok(self
            .members
            .iter()
            .map(|&u| {
                let mut below = 0u64;
                let mut rest = u;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    below |= h[(u ^ bit) as usize];
                    rest ^= bit;
                }
                below != u
            })
            .collect())
    }

    /// Per-member flag: `U` is not the intersection of the members strictly above it.
    pub fn meet_irreducible_flags(&self) -> Result<Vec<bool>> {
        let g = self.intersection_above_table()?;
        let full = self.universe.full_word();
        Ok(self
            .members
            .iter()
            .map(|&u| {
                let mut above = full;
                let mut missing = full & !u;
                while missing != 0 {
                    let bit = missing & missing.wrapping_neg();
                    above &= g[(u | bit) as usize];
                    missing ^= bit;
                }
                above != u
            })
            .collect())
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|&m| self.universe.render_word(m)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for SubsetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Iterator over the numeric values of all subsets of an `n`-element universe.
pub fn all_masks(n: usize) -> std::ops::Range<u64> {
    0..(1u64 << n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Arc<Universe> {
        Universe::new("X", &["a", "b", "c"]).unwrap()
    }

    #[test]
    fn universe_assigns_bits_in_declaration_order() {
        let x = abc();
        assert_eq!(x.len(), 3);
        assert_eq!(x.index_of("a"), Some(0));
        assert_eq!(x.index_of("c"), Some(2));
    }

    #[test]
    fn universe_rejects_duplicates_and_oversize() {
        assert_eq!(
            Universe::new("X", &["a", "a"]).unwrap_err(),
            Error::DuplicateLabel("a".into())
        );
        let labels: Vec<String> = (0..25).map(|i| format!("e{i}")).collect();
        match Universe::new("X", &labels).unwrap_err() {
            Error::UniverseTooLarge { size: 25, cap: 20, .. } => {}
            e => panic!("unexpected {e:?}"),
        }
        assert!(Universe::with_cap("X", &labels, 25).is_ok());
        assert!(matches!(
            Universe::new::<&str>("X", &[]).unwrap_err(),
            Error::EmptyUniverse(_)
        ));
    }

    #[test]
    fn mask_of_sets_named_bits() {
        let x = abc();
        assert_eq!(x.mask_of(&["a", "c"]).unwrap().value(), Some(5));
        assert_eq!(x.mask_of::<&str>(&[]).unwrap().value(), Some(0));
        assert_eq!(
            x.mask_of(&["d"]).unwrap_err(),
            Error::UnknownElement {
                universe: "X".into(),
                element: "d".into()
            }
        );
        assert_eq!(x.mask_of(&["c", "a"]).unwrap().to_string(), "{a,c}");
    }

    #[test]
    fn saturate_examples() {
        let x = abc();
        let f = SubsetFamily::from_labels(&x, &[&["a"], &["b"]]).unwrap();
        assert_eq!(f.saturate(SaturateMode::Unions).unwrap().members(), &[0, 1, 2, 3]);

        let empty = SubsetFamily::empty(Arc::clone(&x)).unwrap();
        assert_eq!(empty.saturate(SaturateMode::Unions).unwrap().members(), &[0]);

        let f = SubsetFamily::from_labels(&x, &[&["a"], &["a", "b"]]).unwrap();
        assert_eq!(
            f.saturate(SaturateMode::Intersections).unwrap().members(),
            &[1, 3, 7]
        );
    }

    #[test]
    fn bits_wide_operations() {
        let mut a = Bits::new(130);
        a.insert(0);
        a.insert(129);
        let b = Bits::full(130);
        assert!(a.is_subset(&b));
        assert_eq!(b.count(), 130);
        assert_eq!(a.complement().count(), 128);
        assert_eq!(a.iter_ones().collect::<Vec<_>>(), vec![0, 129]);
        assert!(a.intersects(&b));
        assert!(!a.intersects(&a.complement()));
    }

    #[test]
    fn irreducible_flags_match_definition() {
        // chain {} < {a} < {a,b}: both nonempty members are join-irreducible
        let x = abc();
        let f = SubsetFamily::new(Arc::clone(&x), [0, 1, 3]).unwrap();
        assert_eq!(f.join_irreducible_flags().unwrap(), vec![false, true, true]);
        // diamond over {a,b}: only the singletons are join-irreducible
        let f = SubsetFamily::new(Arc::clone(&x), [0, 1, 2, 3]).unwrap();
        assert_eq!(
            f.join_irreducible_flags().unwrap(),
            vec![false, true, true, false]
        );
    }
}
