//! Multisets of subsets of `[n]`: covers, elementary compressions and the
//! compression order.
//!
//! Elements of the ground set are 1-based throughout the public API. A
//! [`SubsetMask`] stores element `i` in bit `i - 1`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND_SET: usize = 30;

/// Largest total element count accepted by [`compresses_to`].
pub const MAX_SEARCH_WEIGHT: usize = 36;

const MAX_SEARCH_STATES: usize = 500_000;

/// A subset of `[n]` packed into a machine word.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Builds a mask from 1-based element indices, checking them against `n`.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I, n: usize) -> Result<Self> {
        check_ground_set(n)?;
        let mut bits = 0u32;
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            bits |= 1 << (e - 1);
        }
        Ok(SubsetMask(bits))
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        Self::prefix(n)
    }

    /// `{1, ..., len}`; empty when `len == 0`.
    pub fn prefix(len: usize) -> Self {
        if len == 0 {
            SubsetMask(0)
        } else {
            SubsetMask(u32::MAX >> (32 - len))
        }
    }

    pub fn singleton(element: usize) -> Self {
        debug_assert!(element >= 1 && element <= MAX_GROUND_SET);
        SubsetMask(1 << (element - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= 32 && self.0 & (1 << (element - 1)) != 0
    }

    pub fn is_subset(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn with(self, element: usize) -> Self {
        self.union(Self::singleton(element))
    }

    pub fn without(self, element: usize) -> Self {
        self.difference(Self::singleton(element))
    }

    /// Smallest element, if any.
    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest element, if any.
    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let e = rest.trailing_zeros() as usize + 1;
            rest &= rest - 1;
            Some(e)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.elements().collect()
    }

    /// Every subset of `[n]`, including the empty set, in increasing bit order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = SubsetMask> {
        (0..(1u64 << n)).map(|b| SubsetMask(b as u32))
    }

    /// Position of this mask in the canonical member order.
    pub(crate) fn canonical_key(self) -> (u32, u32) {
        (self.0.count_ones(), self.0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, e) in self.elements().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

fn check_ground_set(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GROUND_SET {
        Err(Error::GroundSetSize(n))
    } else {
        Ok(())
    }
}

/// A multiset of non-empty subsets of `[n]`.
///
/// Members keep the order they were given in, so member indices are stable for
/// [`elementary_compression`]. Equality and hashing ignore member order.
#[derive(Clone, Debug)]
pub struct SetFamily {
    n: usize,
    members: Vec<SubsetMask>,
}

impl SetFamily {
    pub fn new(n: usize, members: Vec<SubsetMask>) -> Result<Self> {
        check_ground_set(n)?;
        let full = SubsetMask::full(n);
        for (index, m) in members.iter().enumerate() {
            if m.is_empty() {
                return Err(Error::EmptyMember { index: index + 1 });
            }
            if !m.is_subset(full) {
                let element = m.difference(full).min_element().unwrap_or(0);
                return Err(Error::ElementOutOfRange { element, n });
            }
        }
        Ok(SetFamily { n, members })
    }

    /// Builds a family from 1-based index lists.
    pub fn from_sets<S, I>(n: usize, sets: S) -> Result<Self>
    where
        S: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let members = sets
            .into_iter()
            .map(|s| SubsetMask::from_elements(s, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, members)
    }

    /// `copies` copies of `mask`.
    pub fn repeated(n: usize, mask: SubsetMask, copies: usize) -> Result<Self> {
        Self::new(n, vec![mask; copies])
    }

    /// All `size`-subsets of `[n]` in increasing bit order.
    pub fn all_subsets_of_size(n: usize, size: usize) -> Result<Self> {
        check_ground_set(n)?;
        let members = SubsetMask::all_subsets(n)
            .filter(|m| m.len() == size)
            .collect();
        Self::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Total element count, counted with multiplicity.
    pub fn weight(&self) -> usize {
        self.members.iter().map(|m| m.len()).sum()
    }

    /// Members sorted by cardinality, then by mask value.
    pub fn canonical(&self) -> Vec<SubsetMask> {
        let mut sorted = self.members.clone();
        sorted.sort_by_key(|m| m.canonical_key());
        sorted
    }

    pub fn to_canonical(&self) -> SetFamily {
        SetFamily {
            n: self.n,
            members: self.canonical(),
        }
    }

    pub fn to_sets(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.to_vec()).collect()
    }

    /// True when the members are totally ordered by inclusion.
    pub fn is_chain(&self) -> bool {
        let sorted = self.canonical();
        sorted.windows(2).all(|w| w[0].is_subset(w[1]))
    }
}

impl PartialEq for SetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical() == other.canonical()
    }
}

impl Eq for SetFamily {}

impl std::hash::Hash for SetFamily {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.canonical().hash(state);
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, m) in self.members.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// Multiplicity of each element of `[n]` across a family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverProfile {
    /// `counts[i - 1]` is the number of members containing `i`.
    pub counts: Vec<usize>,
}

impl CoverProfile {
    pub fn count(&self, element: usize) -> usize {
        self.counts[element - 1]
    }

    pub fn min(&self) -> usize {
        self.counts.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> usize {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

pub fn cover_profile(fam: &SetFamily) -> CoverProfile {
    profile_of(fam.n, &fam.members)
}

fn profile_of(n: usize, members: &[SubsetMask]) -> CoverProfile {
    let counts = (1..=n)
        .map(|i| members.iter().filter(|m| m.contains(i)).count())
        .collect();
    CoverProfile { counts }
}

pub fn is_k_cover(fam: &SetFamily, k: usize) -> bool {
    cover_profile(fam).min() >= k
}

pub fn is_uniform_k_cover(fam: &SetFamily, k: usize) -> bool {
    cover_profile(fam).counts.iter().all(|&c| c == k)
}

/// Like [`is_k_cover`], but names the first under-covered element.
pub fn require_k_cover(fam: &SetFamily, k: usize) -> Result<()> {
    let profile = cover_profile(fam);
    match profile.counts.iter().position(|&c| c < k) {
        Some(idx) => Err(Error::NotACover {
            element: idx + 1,
            count: profile.counts[idx],
            k,
        }),
        None => Ok(()),
    }
}

/// Like [`is_uniform_k_cover`], but names the first offending element.
pub fn require_uniform_k_cover(fam: &SetFamily, k: usize) -> Result<()> {
    let profile = cover_profile(fam);
    match profile.counts.iter().position(|&c| c != k) {
        Some(idx) => Err(Error::NotUniformCover {
            element: idx + 1,
            count: profile.counts[idx],
            k,
        }),
        None => Ok(()),
    }
}

fn nested(a: SubsetMask, b: SubsetMask) -> bool {
    a.is_subset(b) || b.is_subset(a)
}

/// Replaces members `i` and `j` (1-based) by their intersection and union.
///
/// The intersection takes the place of member `i` and the union the place of
/// member `j`; an empty intersection is dropped.
pub fn elementary_compression(fam: &SetFamily, i: usize, j: usize) -> Result<SetFamily> {
    let len = fam.members.len();
    for index in [i, j] {
        if index == 0 || index > len {
            return Err(Error::MemberIndex { index, len });
        }
    }
    let (a, b) = (fam.members[i - 1], fam.members[j - 1]);
    if i == j || nested(a, b) {
        return Err(Error::NestedPair { i, j });
    }
    let mut members = fam.members.clone();
    members[i - 1] = a.intersection(b);
    members[j - 1] = a.union(b);
    if members[i - 1].is_empty() {
        members.remove(i - 1);
    }
    Ok(SetFamily { n: fam.n, members })
}

/// `Σ |A|²` over the members.
pub fn potential(fam: &SetFamily) -> u64 {
    potential_of(&fam.members)
}

fn potential_of(members: &[SubsetMask]) -> u64 {
    members.iter().map(|m| (m.len() * m.len()) as u64).sum()
}

/// The inclusion chain `A♯_j = { i : i lies in at least j members }`.
pub fn minimal_compression(fam: &SetFamily) -> SetFamily {
    let profile = cover_profile(fam);
    let members = (1..=profile.max())
        .map(|row| {
            let bits = profile
                .counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c >= row)
                .fold(0u32, |acc, (idx, _)| acc | (1 << idx));
            SubsetMask(bits)
        })
        .collect::<Vec<_>>();
    // rows shrink as j grows; store the chain smallest first
    let mut members = members;
    members.reverse();
    SetFamily { n: fam.n, members }
}

/// How two families relate under the compression order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Same multiset.
    Equal,
    /// The second family is reachable by at least one elementary compression.
    Compresses,
    /// Not reachable.
    Incomparable,
}

/// Whether `fam_b` is reachable from `fam_a` by a possibly empty sequence of
/// elementary compressions.
pub fn compresses_to(fam_a: &SetFamily, fam_b: &SetFamily) -> Result<bool> {
    Ok(compare(fam_a, fam_b)? != Comparison::Incomparable)
}

/// Breadth-first search over canonical forms reachable from `fam_a`.
///
/// Every elementary compression strictly raises the potential, preserves the
/// cover profile and never adds members, so states that overshoot `fam_b` in
/// potential or undershoot it in member count are pruned.
pub fn compare(fam_a: &SetFamily, fam_b: &SetFamily) -> Result<Comparison> {
    if fam_a.n != fam_b.n {
        return Err(Error::GroundSetMismatch {
            left: fam_a.n,
            right: fam_b.n,
        });
    }
    for fam in [fam_a, fam_b] {
        if fam.weight() > MAX_SEARCH_WEIGHT {
            return Err(Error::InstanceTooLarge(format!(
                "family weight {} exceeds the search bound {MAX_SEARCH_WEIGHT}",
                fam.weight()
            )));
        }
    }
    let start = fam_a.canonical();
    let target = fam_b.canonical();
    if start == target {
        return Ok(Comparison::Equal);
    }
    if cover_profile(fam_a) != cover_profile(fam_b) {
        return Ok(Comparison::Incomparable);
    }
    let target_potential = potential_of(&target);
    let target_len = target.len();

    let mut seen: HashSet<Vec<SubsetMask>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(state) = queue.pop_front() {
        let here = potential_of(&state);
        for i in 0..state.len() {
            for j in (i + 1)..state.len() {
                let (a, b) = (state[i], state[j]);
                if nested(a, b) {
                    continue;
                }
                let mut next = state.clone();
                next[i] = a.intersection(b);
                next[j] = a.union(b);
                if next[i].is_empty() {
                    next.remove(i);
                }
                next.sort_by_key(|m| m.canonical_key());
                let p = potential_of(&next);
                assert!(p > here, "elementary compression must raise the potential");
                if next == target {
                    return Ok(Comparison::Compresses);
                }
                if p >= target_potential || next.len() < target_len {
                    continue;
                }
                if seen.insert(next.clone()) {
                    if seen.len() > MAX_SEARCH_STATES {
                        return Err(Error::InstanceTooLarge(format!(
                            "compression search exceeded {MAX_SEARCH_STATES} states"
                        )));
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(Comparison::Incomparable)
}

/// Removes surplus elements from a `k`-cover so that every element is covered
/// exactly `k` times. Elements are scanned in increasing order and surplus
/// copies are removed from the earliest members containing them. Members that
/// become empty are dropped.
pub fn trim_to_uniform(fam: &SetFamily, k: usize) -> Result<SetFamily> {
    require_k_cover(fam, k)?;
    let mut members = fam.members.clone();
    for element in 1..=fam.n {
        let mut surplus = members.iter().filter(|m| m.contains(element)).count() - k;
        for m in members.iter_mut() {
            if surplus == 0 {
                break;
            }
            if m.contains(element) {
                *m = m.without(element);
                surplus -= 1;
            }
        }
    }
    members.retain(|m| !m.is_empty());
    Ok(SetFamily { n: fam.n, members })
}
