//! Sumsets `S_A = Σ_{i∈A} S_i` (ordered products in non-abelian groups),
//! the lexicographic embedding into `∏ S_i`, and the sumset inequalities
//! that follow from it.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::certificates::{additive_feasibility, box_feasibility, AdditiveFeasibility, BoxFeasibility};
use crate::error::{Error, Result};
use crate::groups::{smallest_prime_divisor, Element, GroupContext};
use crate::lattice::{verify_uniform_cover, CoverReport, LatticeSet};
use crate::report::ExactReport;
use crate::set_families::{require_uniform_k_cover, SetFamily, SubsetMask};

/// Cap on the number of tuples enumerated by the brute-force routines.
pub const MAX_ENUMERATION: usize = 2_000_000;

/// Cap on the replacement choices explored by [`extreme_products`].
pub const MAX_REPLACEMENTS: usize = 100_000;

/// Sets `S_1, ..., S_n` in a common group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumsetInstance {
    ctx: GroupContext,
    sets: Vec<Vec<Element>>,
}

impl SumsetInstance {
    /// Validates every element; each set is sorted and deduplicated.
    pub fn new(ctx: GroupContext, sets: Vec<Vec<Element>>) -> Result<Self> {
        if sets.is_empty() || sets.len() > crate::set_families::MAX_GROUND_SET {
            return Err(Error::InvalidElement {
                element: vec![],
                reason: format!("need between 1 and 30 sets, got {}", sets.len()),
            });
        }
        let mut sorted = Vec::with_capacity(sets.len());
        for set in sets {
            if set.is_empty() {
                return Err(Error::EmptySet);
            }
            for e in &set {
                ctx.validate(e)?;
            }
            let unique: BTreeSet<Element> = set.into_iter().collect();
            sorted.push(unique.into_iter().collect());
        }
        Ok(SumsetInstance { ctx, sets: sorted })
    }

    /// Sets of integers in `Z`.
    pub fn integers(sets: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            GroupContext::FreeAbelian { d: 1 },
            sets.iter()
                .map(|s| s.iter().map(|&v| vec![v]).collect())
                .collect(),
        )
    }

    /// Sets of residues in `Z_m`.
    pub fn residues(m: u64, sets: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            GroupContext::cyclic(m)?,
            sets.iter()
                .map(|s| s.iter().map(|&v| vec![v]).collect())
                .collect(),
        )
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn sets(&self) -> &[Vec<Element>] {
        &self.sets
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    fn check_mask(&self, a: SubsetMask) -> Result<()> {
        match a.max_element() {
            Some(e) if e > self.n() => Err(Error::ElementOutOfRange { element: e, n: self.n() }),
            _ => Ok(()),
        }
    }

    fn product_of(&self, sets: &[&[Element]]) -> BTreeSet<Element> {
        let mut acc: BTreeSet<Element> = BTreeSet::from([self.ctx.identity()]);
        for set in sets {
            acc = acc
                .iter()
                .flat_map(|x| set.iter().map(move |y| (x, y)))
                .map(|(x, y)| self.ctx.op(x, y))
                .collect();
        }
        acc
    }
}

/// `S_A`, the ordered product `S_{i_1} ⋆ ... ⋆ S_{i_r}` for `i_1 < ... < i_r`.
pub fn sumset(inst: &SumsetInstance, a: SubsetMask) -> Result<BTreeSet<Element>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    inst.check_mask(a)?;
    let sets: Vec<&[Element]> = a.elements().map(|i| inst.sets[i - 1].as_slice()).collect();
    Ok(inst.product_of(&sets))
}

fn require_commutative(inst: &SumsetInstance) -> Result<()> {
    if inst.ctx.is_commutative() {
        Ok(())
    } else {
        Err(Error::NonCommutative)
    }
}

/// `φ_A(s)`: the lexicographically least `(s_{i_1}, ..., s_{i_r})` in
/// `∏_{i∈A} S_i` with coordinates summing to `s`, as indices into the sorted
/// sets.
pub fn phi_embed_indices(inst: &SumsetInstance, a: SubsetMask, s: &[i64]) -> Result<Vec<usize>> {
    require_commutative(inst)?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    inst.check_mask(a)?;
    let coords: Vec<usize> = a.elements().collect();
    // reachable[t] = sum of the sets at positions t.. of `coords`
    let mut reachable: Vec<BTreeSet<Element>> = vec![BTreeSet::new(); coords.len() + 1];
    reachable[coords.len()] = BTreeSet::from([inst.ctx.identity()]);
    for t in (0..coords.len()).rev() {
        let set = &inst.sets[coords[t] - 1];
        reachable[t] = reachable[t + 1]
            .iter()
            .flat_map(|x| set.iter().map(move |y| (x, y)))
            .map(|(x, y)| inst.ctx.op(x, y))
            .collect();
    }
    if !reachable[0].contains(s) {
        return Err(Error::NotInSumset(s.to_vec()));
    }
    let mut rest = s.to_vec();
    let mut picks = Vec::with_capacity(coords.len());
    for (t, &coord) in coords.iter().enumerate() {
        let (idx, remaining) = inst.sets[coord - 1]
            .iter()
            .enumerate()
            .map(|(idx, x)| (idx, inst.ctx.op(&rest, &inst.ctx.inverse(x))))
            .find(|(_, remaining)| reachable[t + 1].contains(remaining))
            .expect("membership checked above");
        picks.push(idx);
        rest = remaining;
    }
    Ok(picks)
}

/// `φ_A(s)` as group elements.
pub fn phi_embed(inst: &SumsetInstance, a: SubsetMask, s: &[i64]) -> Result<Vec<Element>> {
    let picks = phi_embed_indices(inst, a, s)?;
    Ok(a.elements()
        .zip(picks)
        .map(|(i, idx)| inst.sets[i - 1][idx].clone())
        .collect())
}

/// Runs `visit` on every index tuple of `∏ S_i` in lexicographic order.
fn for_each_tuple(sizes: &[usize], mut visit: impl FnMut(&[usize])) -> Result<()> {
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&t| t <= MAX_ENUMERATION)
        .ok_or_else(|| {
            Error::InstanceTooLarge(format!(
                "product of set sizes {sizes:?} exceeds {MAX_ENUMERATION}"
            ))
        })?;
    if total == 0 {
        return Ok(());
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        visit(&idx);
        let mut pos = sizes.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `S' = φ_{[n]}(S)` as index tuples into the sorted sets.
///
/// Tuples are enumerated in lexicographic order and the first tuple reaching
/// each sum is kept, which is exactly the lexicographically least
/// decomposition.
pub fn embed_image(inst: &SumsetInstance) -> Result<LatticeSet> {
    require_commutative(inst)?;
    let sizes: Vec<usize> = inst.sets.iter().map(|s| s.len()).collect();
    let mut first: BTreeMap<Element, Vec<i64>> = BTreeMap::new();
    for_each_tuple(&sizes, |idx| {
        let sum = idx
            .iter()
            .enumerate()
            .fold(inst.ctx.identity(), |acc, (i, &k)| inst.ctx.op(&acc, &inst.sets[i][k]));
        first
            .entry(sum)
            .or_insert_with(|| idx.iter().map(|&k| k as i64).collect());
    })?;
    LatticeSet::new(inst.n(), first.into_values())
}

/// `|S_A|` for every non-empty `A ⊆ [n]`.
pub fn all_sumset_sizes(inst: &SumsetInstance) -> Result<BTreeMap<SubsetMask, u64>> {
    SubsetMask::all_subsets(inst.n())
        .skip(1)
        .map(|a| Ok((a, sumset(inst, a)?.len() as u64)))
        .collect()
}

fn product(values: impl IntoIterator<Item = usize>) -> BigUint {
    values
        .into_iter()
        .fold(BigUint::one(), |acc, v| acc * BigUint::from(v))
}

/// `|S|^k` against `∏ |S_A|`, together with the embedded lattice check and
/// the multiplicative box certificate.
#[derive(Clone, Debug)]
pub struct SumsetCoverReport {
    pub report: ExactReport,
    /// The uniform cover inequality on `S' = φ_{[n]}(S)`.
    pub embedded: CoverReport,
    /// `|S'_A| <= |S_A|` for every non-empty `A`.
    pub containment: bool,
    /// Constants `λ_i` with `|S| = ∏ λ_i` and `|S_A| >= ∏_{i∈A} λ_i`.
    pub lambdas: BoxFeasibility,
}

impl SumsetCoverReport {
    pub fn holds(&self) -> bool {
        self.report.holds() && self.embedded.holds() && self.containment && self.lambdas.is_feasible()
    }
}

pub fn verify_sumset_cover(
    inst: &SumsetInstance,
    fam: &SetFamily,
    k: usize,
) -> Result<SumsetCoverReport> {
    require_commutative(inst)?;
    if fam.n() != inst.n() {
        return Err(Error::GroundSetMismatch {
            left: inst.n(),
            right: fam.n(),
        });
    }
    require_uniform_k_cover(fam, k)?;
    let sizes = all_sumset_sizes(inst)?;
    let full = sizes[&SubsetMask::full(inst.n())];
    let lhs = BigUint::from(full).pow(k as u32);
    let rhs = product(fam.members().iter().map(|a| sizes[a] as usize));
    let image = embed_image(inst)?;
    let embedded = verify_uniform_cover(&image, fam, k)?;
    let containment = sizes.iter().try_fold(true, |ok, (&a, &size)| {
        Ok::<_, Error>(ok && crate::lattice::projection_size(&image, a)? as u64 <= size)
    })?;
    let lambdas = box_feasibility(inst.n(), &sizes)?;
    Ok(SumsetCoverReport {
        report: ExactReport::new(lhs, rhs),
        embedded,
        containment,
        lambdas,
    })
}

/// `|A+C|^k <= |C|^{k-1} ∏ |A+B_i|` for integer sets with `C ⊆ B_1+...+B_k`.
#[derive(Clone, Debug)]
pub struct GymrReport {
    pub k: usize,
    pub report: ExactReport,
    /// The `(2k-1)`-member uniform `k`-cover of `[k+1]`: the pairs `{i, k+1}`
    /// and `[k]` repeated `k - 1` times.
    pub cover: SetFamily,
    /// The uniform cover inequality on `φ_{[k+1]}(C + A)`.
    pub embedded: CoverReport,
    /// `|S'_{[k]}|` against `|C|`.
    pub head_projection: (usize, usize),
    /// `|S'_{{i,k+1}}|` against `|A + B_i|`, for each `i`.
    pub pair_projections: Vec<(usize, usize)>,
}

impl GymrReport {
    pub fn holds(&self) -> bool {
        self.report.holds()
    }

    /// Whether each projection of the embedded set is bounded by the sumset
    /// it stands for. This can fail even though the inequality holds.
    pub fn projection_bounds_hold(&self) -> bool {
        self.head_projection.0 <= self.head_projection.1
            && self.pair_projections.iter().all(|(p, s)| p <= s)
    }
}

fn int_sumset(x: &[i64], y: &[i64]) -> BTreeSet<i64> {
    x.iter().flat_map(|a| y.iter().map(move |b| a + b)).collect()
}

pub fn verify_gymr(a: &[i64], bs: &[Vec<i64>], c: &[i64]) -> Result<GymrReport> {
    let k = bs.len();
    if k == 0 || a.is_empty() || c.is_empty() || bs.iter().any(|b| b.is_empty()) {
        return Err(Error::EmptySet);
    }
    let n = k + 1;
    let mut sets: Vec<Vec<i64>> = bs.to_vec();
    sets.push(a.to_vec());
    let inst = SumsetInstance::integers(&sets)?;
    let b_sum = sumset(&inst, SubsetMask::prefix(k))?;
    if let Some(&missing) = c.iter().find(|&&x| !b_sum.contains(&vec![x])) {
        return Err(Error::CNotContained(missing));
    }
    let c_set: BTreeSet<i64> = c.iter().copied().collect();
    let a_plus_c = int_sumset(a, &c_set.iter().copied().collect::<Vec<_>>());
    let a_plus_b: Vec<usize> = bs.iter().map(|b| int_sumset(a, b).len()).collect();

    let lhs = BigUint::from(a_plus_c.len()).pow(k as u32);
    let rhs = BigUint::from(c_set.len()).pow(k as u32 - 1) * product(a_plus_b.iter().copied());

    let mut cover_sets: Vec<Vec<usize>> = (1..=k).map(|i| vec![i, n]).collect();
    cover_sets.extend(std::iter::repeat((1..=k).collect()).take(k - 1));
    let cover = SetFamily::from_sets(n, cover_sets)?;

    let full = SubsetMask::full(n);
    let points = a_plus_c
        .iter()
        .map(|&s| {
            phi_embed_indices(&inst, full, &[s])
                .map(|idx| idx.into_iter().map(|v| v as i64).collect::<Vec<i64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let image = LatticeSet::new(n, points)?;
    let embedded = verify_uniform_cover(&image, &cover, k)?;
    let head_projection = (
        crate::lattice::projection_size(&image, SubsetMask::prefix(k))?,
        c_set.len(),
    );
    let pair_projections = (1..=k)
        .map(|i| {
            let pair = SubsetMask::singleton(i).with(n);
            Ok((crate::lattice::projection_size(&image, pair)?, a_plus_b[i - 1]))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(GymrReport {
        k,
        report: ExactReport::new(lhs, rhs),
        cover,
        embedded,
        head_projection,
        pair_projections,
    })
}

fn require_ordered(inst: &SumsetInstance) -> Result<usize> {
    match inst.ctx {
        GroupContext::FreeAbelian { d } => Ok(d),
        _ => Err(Error::UnorderedContext),
    }
}

fn add(x: &[i64], y: &[i64]) -> Element {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

/// One marked element: copy `row` (0-based), column `column` (1-based),
/// produced by member `member` (0-based index into the family).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mark {
    pub row: usize,
    pub column: usize,
    pub member: usize,
    pub element: Element,
}

/// Everything the marking construction produces, kept for auditing.
#[derive(Clone, Debug)]
pub struct MarkingWitness {
    pub k: usize,
    pub family: SetFamily,
    /// Each `S_i` shifted so its minimum is zero.
    pub normalized: Vec<Vec<Element>>,
    /// `a_i = max S_i` after normalization.
    pub maxima: Vec<Element>,
    /// `S'_i = {0, a_i}`.
    pub restricted_sets: Vec<Vec<Element>>,
    /// `grid[row][column - 1]` is the member occupying that cell.
    pub grid: Vec<Vec<usize>>,
    /// Marks, grouped by copy.
    pub marks: Vec<Vec<Mark>>,
    /// Sums `s_1 + ... + s_n` with `{i : s_i ∉ S'_i} ⊆ A` for some member `A`.
    pub restricted_sumset: BTreeSet<Element>,
    pub sumset_size: usize,
    /// `|S_A|` for each member, in family order.
    pub member_sumset_sizes: Vec<usize>,
}

/// Outcome of re-checking a [`MarkingWitness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkingAudit {
    /// Cells of the `k × n` grid are partitioned by the members.
    pub grid_partition: bool,
    /// Within each copy no element is marked twice.
    pub distinct_per_copy: bool,
    /// Every mark is a non-zero element of `S'`.
    pub marks_in_restricted: bool,
    /// Total marks equal `Σ_A (|S_A| - 1)`.
    pub marks_cover_members: bool,
    /// `k(|S| - 1)`, `k(|S'| - 1)` and `Σ_A (|S_A| - 1)`.
    pub chain: (u64, u64, u64),
}

impl MarkingAudit {
    pub fn chain_holds(&self) -> bool {
        self.chain.0 >= self.chain.1 && self.chain.1 >= self.chain.2
    }

    pub fn passed(&self) -> bool {
        self.grid_partition
            && self.distinct_per_copy
            && self.marks_in_restricted
            && self.marks_cover_members
            && self.chain_holds()
    }
}

impl MarkingWitness {
    pub fn total_marks(&self) -> usize {
        self.marks.iter().map(|m| m.len()).sum()
    }

    /// `Σ_A (|S_A| - 1)`.
    pub fn member_deficit(&self) -> u64 {
        self.member_sumset_sizes.iter().map(|&s| s as u64 - 1).sum()
    }

    pub fn audit(&self) -> MarkingAudit {
        let n = self.family.n();
        let members = self.family.members();

        let mut cells_per_member = vec![SubsetMask::EMPTY; members.len()];
        let mut grid_partition = self.grid.len() == self.k;
        for row in &self.grid {
            grid_partition &= row.len() == n;
            for (col, &m) in row.iter().enumerate() {
                let column = col + 1;
                if m >= members.len() || cells_per_member[m].contains(column) {
                    grid_partition = false;
                    continue;
                }
                cells_per_member[m] = cells_per_member[m].with(column);
            }
        }
        grid_partition &= cells_per_member.iter().zip(members).all(|(c, a)| c == a);

        let zero = vec![0; self.maxima.first().map_or(1, |a| a.len())];
        let mut distinct_per_copy = true;
        let mut marks_in_restricted = true;
        for copy in &self.marks {
            let unique: BTreeSet<&Element> = copy.iter().map(|m| &m.element).collect();
            distinct_per_copy &= unique.len() == copy.len();
            marks_in_restricted &= copy
                .iter()
                .all(|m| m.element != zero && self.restricted_sumset.contains(&m.element));
        }

        let deficit = self.member_deficit();
        MarkingAudit {
            grid_partition,
            distinct_per_copy,
            marks_in_restricted,
            marks_cover_members: self.total_marks() as u64 == deficit,
            chain: (
                self.k as u64 * (self.sumset_size as u64 - 1),
                self.k as u64 * (self.restricted_sumset.len() as u64 - 1),
                deficit,
            ),
        }
    }
}

/// Packs the members into a `k × n` grid: in each column the members
/// containing it take rows `1..k` in canonical family order.
fn pack_grid(fam: &SetFamily, k: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..fam.len()).collect();
    order.sort_by_key(|&m| (fam.members()[m].len(), fam.members()[m].bits(), m));
    let mut grid = vec![vec![0; fam.n()]; k];
    for column in 1..=fam.n() {
        let holders = order.iter().filter(|&&m| fam.members()[m].contains(column));
        for (row, &m) in holders.enumerate() {
            grid[row][column - 1] = m;
        }
    }
    grid
}

/// The marking construction for a uniform `k`-cover of `[n]` and sets in an
/// ordered torsion-free group.
pub fn marking_algorithm(
    inst: &SumsetInstance,
    fam: &SetFamily,
    k: usize,
) -> Result<MarkingWitness> {
    let d = require_ordered(inst)?;
    let n = inst.n();
    if fam.n() != n {
        return Err(Error::GroundSetMismatch {
            left: n,
            right: fam.n(),
        });
    }
    require_uniform_k_cover(fam, k)?;

    let zero = vec![0i64; d];
    let normalized: Vec<Vec<Element>> = inst
        .sets
        .iter()
        .map(|s| {
            let shift: Element = s[0].iter().map(|v| -v).collect();
            s.iter().map(|x| add(x, &shift)).collect()
        })
        .collect();
    let norm_inst = SumsetInstance::new(inst.ctx.clone(), normalized.clone())?;
    let maxima: Vec<Element> = normalized
        .iter()
        .map(|s| s.last().expect("non-empty").clone())
        .collect();
    let restricted_sets: Vec<Vec<Element>> = maxima
        .iter()
        .map(|a| {
            let mut s = vec![zero.clone(), a.clone()];
            s.dedup();
            s
        })
        .collect();

    // a_T for T ⊆ [n]
    let shift_of = |t: SubsetMask| {
        t.elements()
            .fold(zero.clone(), |acc, i| add(&acc, &maxima[i - 1]))
    };

    let mut restricted_sumset = BTreeSet::new();
    for &a in fam.members() {
        let choices: Vec<&[Element]> = (1..=n)
            .map(|i| {
                if a.contains(i) {
                    normalized[i - 1].as_slice()
                } else {
                    restricted_sets[i - 1].as_slice()
                }
            })
            .collect();
        restricted_sumset.extend(norm_inst.product_of(&choices));
    }

    let member_sums: Vec<BTreeSet<Element>> = fam
        .members()
        .iter()
        .map(|&a| sumset(&norm_inst, a))
        .collect::<Result<_>>()?;
    let sumset_size = sumset(&norm_inst, SubsetMask::full(n))?.len();

    let grid = pack_grid(fam, k);
    let mut marks = vec![Vec::new(); k];
    for (row, copy) in marks.iter_mut().enumerate() {
        for column in 1..=n {
            let member = grid[row][column - 1];
            let a = fam.members()[member];
            let shift = shift_of(SubsetMask::prefix(column).difference(a));
            let lo = shift_of(SubsetMask::prefix(column - 1));
            let hi = shift_of(SubsetMask::prefix(column));
            for x in &member_sums[member] {
                let element = add(&shift, x);
                if element > lo && element <= hi {
                    copy.push(Mark {
                        row,
                        column,
                        member,
                        element,
                    });
                }
            }
        }
    }

    Ok(MarkingWitness {
        k,
        family: fam.clone(),
        normalized,
        maxima,
        restricted_sets,
        grid,
        marks,
        restricted_sumset,
        sumset_size,
        member_sumset_sizes: member_sums.iter().map(|s| s.len()).collect(),
    })
}

/// `|S| >= p` or `|S| - 1 >= Σ (|S_i| - 1)`, where `p` is the smallest prime
/// dividing the group order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyDavenportReport {
    pub sumset_size: usize,
    pub deficit_sum: usize,
    pub prime: Option<u64>,
}

impl CauchyDavenportReport {
    pub fn holds(&self) -> bool {
        self.prime.is_some_and(|p| self.sumset_size as u64 >= p)
            || self.sumset_size - 1 >= self.deficit_sum
    }
}

pub fn verify_cauchy_davenport(inst: &SumsetInstance) -> Result<CauchyDavenportReport> {
    let order = inst.ctx.order().ok_or_else(|| {
        Error::InvalidGroup("Cauchy–Davenport needs a finite group".into())
    })?;
    let size = sumset(inst, SubsetMask::full(inst.n()))?.len();
    Ok(CauchyDavenportReport {
        sumset_size: size,
        deficit_sum: inst.sets.iter().map(|s| s.len() - 1).sum(),
        prime: smallest_prime_divisor(order),
    })
}

/// `Σ_{A∈fam} (|S_A| - 1)` against `k (|S| - 1)`: the additive cover bound,
/// which holds in ordered torsion-free groups but can fail with torsion.
pub fn verify_cover_deficit(inst: &SumsetInstance, fam: &SetFamily, k: usize) -> Result<ExactReport> {
    if fam.n() != inst.n() {
        return Err(Error::GroundSetMismatch {
            left: inst.n(),
            right: fam.n(),
        });
    }
    require_uniform_k_cover(fam, k)?;
    let lhs: i64 = fam
        .members()
        .iter()
        .map(|&a| Ok(sumset(inst, a)?.len() as i64 - 1))
        .sum::<Result<i64>>()?;
    let rhs = k as i64 * (sumset(inst, SubsetMask::full(inst.n()))?.len() as i64 - 1);
    Ok(ExactReport::new(BigInt::from(lhs), BigInt::from(rhs)))
}

/// `(N_A, n_A)`: the largest and smallest size of the product obtained by
/// replacing each `S_i`, `i ∉ A`, with one of its elements.
pub fn extreme_products(inst: &SumsetInstance, a: SubsetMask) -> Result<(usize, usize)> {
    inst.check_mask(a)?;
    let n = inst.n();
    let frozen: Vec<usize> = (1..=n).filter(|&i| !a.contains(i)).collect();
    let sizes: Vec<usize> = frozen.iter().map(|&i| inst.sets[i - 1].len()).collect();
    let combos = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
    if combos.map_or(true, |c| c > MAX_REPLACEMENTS) {
        return Err(Error::InstanceTooLarge(format!(
            "{sizes:?} replacement choices exceed {MAX_REPLACEMENTS}"
        )));
    }
    let mut largest = 0;
    let mut smallest = usize::MAX;
    let mut singles: Vec<Vec<Element>> = vec![Vec::new(); n];
    for_each_tuple(&sizes, |choice| {
        let mut sets: Vec<&[Element]> = Vec::with_capacity(n);
        for (slot, (&i, &pick)) in frozen.iter().zip(choice).enumerate() {
            let _ = slot;
            singles[i - 1] = vec![inst.sets[i - 1][pick].clone()];
        }
        for i in 1..=n {
            if a.contains(i) {
                sets.push(&inst.sets[i - 1]);
            } else {
                sets.push(&singles[i - 1]);
            }
        }
        let size = inst.product_of(&sets).len();
        largest = largest.max(size);
        smallest = smallest.min(size);
    })?;
    Ok((largest, smallest))
}

/// The two open conjectures about constants attached to `N_A` and `n_A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Conjecture {
    /// `|S| = ∏ λ_i` and `N_A >= ∏_{i∈A} λ_i`.
    Product,
    /// `|S| - 1 = Σ σ_i` and `n_A - 1 <= Σ_{i∈A} σ_i`.
    Additive,
}

impl Conjecture {
    pub fn label(self) -> &'static str {
        match self {
            Conjecture::Product => "6.1",
            Conjecture::Additive => "6.2",
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        match label {
            "6.1" => Some(Conjecture::Product),
            "6.2" => Some(Conjecture::Additive),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ConjectureOutcome {
    Product(BoxFeasibility),
    Additive(AdditiveFeasibility),
}

#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub conjecture: Conjecture,
    /// `N_A` (for the product form) or `n_A` (additive form) per non-empty `A`.
    pub sizes: BTreeMap<SubsetMask, u64>,
    pub outcome: ConjectureOutcome,
}

impl ConjectureReport {
    pub fn is_feasible(&self) -> bool {
        match &self.outcome {
            ConjectureOutcome::Product(b) => b.is_feasible(),
            ConjectureOutcome::Additive(a) => a.is_feasible(),
        }
    }

    /// The witness or certificate re-checked independently of elimination.
    pub fn reverified(&self) -> bool {
        match &self.outcome {
            ConjectureOutcome::Product(b) => b.reverified,
            ConjectureOutcome::Additive(a) => a.reverified,
        }
    }
}

pub fn conjecture_feasibility(inst: &SumsetInstance, which: Conjecture) -> Result<ConjectureReport> {
    let n = inst.n();
    let mut sizes = BTreeMap::new();
    for a in SubsetMask::all_subsets(n).skip(1) {
        let (largest, smallest) = extreme_products(inst, a)?;
        let size = match which {
            Conjecture::Product => largest,
            Conjecture::Additive => smallest,
        };
        sizes.insert(a, size as u64);
    }
    let outcome = match which {
        Conjecture::Product => ConjectureOutcome::Product(box_feasibility(n, &sizes)?),
        Conjecture::Additive => ConjectureOutcome::Additive(additive_feasibility(n, &sizes)?),
    };
    Ok(ConjectureReport {
        conjecture: which,
        sizes,
        outcome,
    })
}
