//! Exact finite joint distributions and verifiers for the entropy
//! inequalities built on submodularity.
//!
//! Probabilities are exact rationals. Entropies are reported in bits as
//! floating-point values, compared against an explicit tolerance.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::report::{EntropyReport, DEFAULT_TOL};
use crate::set_families::{
    compresses_to, minimal_compression, require_k_cover, require_uniform_k_cover, SetFamily,
    SubsetMask,
};

/// Largest number of variables for which [`EntropyTable`] tabulates every
/// marginal.
pub const MAX_TABLE_VARIABLES: usize = 20;

/// A finite joint distribution of `n` integer-valued random variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    supports: Vec<Vec<i64>>,
    pmf: BTreeMap<Vec<i64>, BigRational>,
}

impl JointDistribution {
    /// Validates and builds a distribution. Repeated tuples are merged and
    /// zero-probability tuples dropped.
    pub fn new(supports: Vec<Vec<i64>>, entries: Vec<(Vec<i64>, BigRational)>) -> Result<Self> {
        let n = supports.len();
        if n > crate::set_families::MAX_GROUND_SET {
            return Err(Error::InvalidDistribution(format!("{n} variables is too many")));
        }
        let mut pmf: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        let mut total = BigRational::zero();
        for (x, p) in entries {
            if x.len() != n {
                return Err(Error::InvalidDistribution(format!(
                    "tuple {x:?} has {} coordinates, expected {n}",
                    x.len()
                )));
            }
            if p.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative probability {p} at {x:?}"
                )));
            }
            if let Some(i) = (0..n).find(|&i| !supports[i].contains(&x[i])) {
                return Err(Error::InvalidDistribution(format!(
                    "coordinate {} of {x:?} is outside the support of variable {}",
                    i + 1,
                    i + 1
                )));
            }
            total += &p;
            *pmf.entry(x).or_insert_with(BigRational::zero) += p;
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        pmf.retain(|_, p| !p.is_zero());
        Ok(JointDistribution { supports, pmf })
    }

    /// The uniform distribution on a non-empty set of tuples.
    pub fn uniform<I: IntoIterator<Item = Vec<i64>>>(points: I) -> Result<Self> {
        let points: Vec<Vec<i64>> = points.into_iter().collect();
        let first = points.first().ok_or(Error::EmptySet)?;
        let n = first.len();
        let mut supports = vec![Vec::new(); n];
        for x in &points {
            if x.len() != n {
                return Err(Error::InvalidDistribution("ragged tuples".into()));
            }
            for (s, &v) in supports.iter_mut().zip(x) {
                if !s.contains(&v) {
                    s.push(v);
                }
            }
        }
        supports.iter_mut().for_each(|s| s.sort_unstable());
        let mut distinct = points;
        distinct.sort();
        distinct.dedup();
        let p = BigRational::new(BigInt::one(), BigInt::from(distinct.len()));
        let entries = distinct.into_iter().map(|x| (x, p.clone())).collect();
        Self::new(supports, entries)
    }

    /// Product of independent marginals, each given as `(value, probability)`.
    pub fn independent(marginals: &[Vec<(i64, BigRational)>]) -> Result<Self> {
        let supports = marginals
            .iter()
            .map(|m| m.iter().map(|(v, _)| *v).collect())
            .collect();
        let mut entries: Vec<(Vec<i64>, BigRational)> = vec![(Vec::new(), BigRational::one())];
        for m in marginals {
            entries = entries
                .iter()
                .flat_map(|(x, p)| {
                    m.iter().map(move |(v, q)| {
                        let mut y = x.clone();
                        y.push(*v);
                        (y, p * q)
                    })
                })
                .collect();
        }
        Self::new(supports, entries)
    }

    pub fn n(&self) -> usize {
        self.supports.len()
    }

    pub fn supports(&self) -> &[Vec<i64>] {
        &self.supports
    }

    /// Tuples with positive probability.
    pub fn pmf(&self) -> &BTreeMap<Vec<i64>, BigRational> {
        &self.pmf
    }

    pub fn probability(&self, x: &[i64]) -> BigRational {
        self.pmf.get(x).cloned().unwrap_or_else(BigRational::zero)
    }

    fn check_mask(&self, a: SubsetMask) -> Result<()> {
        match a.max_element() {
            Some(e) if e > self.n() => Err(Error::ElementOutOfRange {
                element: e,
                n: self.n(),
            }),
            _ => Ok(()),
        }
    }
}

fn project(x: &[i64], a: SubsetMask) -> Vec<i64> {
    a.elements().map(|i| x[i - 1]).collect()
}

/// The distribution of `X_A`. The empty mask gives the point distribution on
/// the empty tuple.
pub fn marginal(d: &JointDistribution, a: SubsetMask) -> Result<JointDistribution> {
    d.check_mask(a)?;
    let supports = a.elements().map(|i| d.supports[i - 1].clone()).collect();
    let mut pmf: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    for (x, p) in &d.pmf {
        *pmf.entry(project(x, a)).or_insert_with(BigRational::zero) += p;
    }
    Ok(JointDistribution { supports, pmf })
}

fn entropy_of_masses<'a, F: Float>(masses: impl Iterator<Item = &'a BigRational>) -> F {
    let mut h = F::zero();
    for p in masses {
        let q = F::from(p.to_f64().unwrap_or(0.0)).unwrap_or_else(F::zero);
        if q > F::zero() {
            h = h - q * q.log2();
        }
    }
    // rounding can leave a point mass at -0.0 or a hair below zero
    h.max(F::zero())
}

/// Shannon entropy in bits, evaluated in the float type `F`.
pub fn entropy_in<F: Float>(d: &JointDistribution) -> F {
    entropy_of_masses(d.pmf.values())
}

/// Shannon entropy in bits.
pub fn entropy(d: &JointDistribution) -> f64 {
    entropy_in::<f64>(d)
}

fn joint_entropy_of(d: &JointDistribution, a: SubsetMask) -> f64 {
    let mut masses: HashMap<Vec<i64>, BigRational> = HashMap::new();
    for (x, p) in &d.pmf {
        *masses.entry(project(x, a)).or_insert_with(BigRational::zero) += p;
    }
    entropy_of_masses(masses.values())
}

/// Anything that can report `H(X_A)` for subsets `A` of `[n]`.
pub trait EntropySource {
    fn n(&self) -> usize;

    /// `H(X_A)` in bits; `H(X_∅) = 0`.
    fn joint_entropy(&self, a: SubsetMask) -> f64;

    /// `H(X_A | X_B) = H(X_{A∪B}) - H(X_B)`.
    fn conditional(&self, a: SubsetMask, b: SubsetMask) -> f64 {
        self.joint_entropy(a.union(b)) - self.joint_entropy(b)
    }
}

impl EntropySource for JointDistribution {
    fn n(&self) -> usize {
        self.supports.len()
    }

    fn joint_entropy(&self, a: SubsetMask) -> f64 {
        joint_entropy_of(self, a)
    }
}

/// `H(X_A)` precomputed for every `A ⊆ [n]`.
#[derive(Clone, Debug)]
pub struct EntropyTable {
    n: usize,
    values: Vec<f64>,
}

impl EntropyTable {
    pub fn new(d: &JointDistribution) -> Result<Self> {
        let n = d.n();
        if n > MAX_TABLE_VARIABLES {
            return Err(Error::InstanceTooLarge(format!(
                "{n} variables exceeds the table limit {MAX_TABLE_VARIABLES}"
            )));
        }
        let values = SubsetMask::all_subsets(n)
            .map(|a| joint_entropy_of(d, a))
            .collect();
        Ok(EntropyTable { n, values })
    }

    /// Builds a table from explicit values indexed by mask bits.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 1usize << n {
            return Err(Error::InvalidDistribution(format!(
                "expected {} table entries, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(EntropyTable { n, values })
    }
}

impl EntropySource for EntropyTable {
    fn n(&self) -> usize {
        self.n
    }

    fn joint_entropy(&self, a: SubsetMask) -> f64 {
        self.values[a.bits() as usize]
    }
}

fn check_source_mask<E: EntropySource + ?Sized>(src: &E, a: SubsetMask) -> Result<()> {
    match a.max_element() {
        Some(e) if e > src.n() => Err(Error::ElementOutOfRange { element: e, n: src.n() }),
        _ => Ok(()),
    }
}

fn check_family<E: EntropySource + ?Sized>(src: &E, fam: &SetFamily) -> Result<()> {
    if fam.n() != src.n() {
        return Err(Error::GroundSetMismatch {
            left: src.n(),
            right: fam.n(),
        });
    }
    Ok(())
}

fn family_entropy<E: EntropySource + ?Sized>(src: &E, fam: &SetFamily) -> f64 {
    fam.members().iter().map(|&a| src.joint_entropy(a)).sum()
}

/// `H(X_A | X_B)` in bits.
pub fn conditional_entropy(d: &JointDistribution, a: SubsetMask, b: SubsetMask) -> Result<f64> {
    d.check_mask(a)?;
    d.check_mask(b)?;
    Ok(d.conditional(a, b))
}

/// `H(X_{A∪B}) + H(X_{A∩B}) <= H(X_A) + H(X_B)`.
pub fn check_submodularity<E: EntropySource + ?Sized>(
    src: &E,
    a: SubsetMask,
    b: SubsetMask,
) -> Result<EntropyReport> {
    check_source_mask(src, a)?;
    check_source_mask(src, b)?;
    let lhs = src.joint_entropy(a.union(b)) + src.joint_entropy(a.intersection(b));
    let rhs = src.joint_entropy(a) + src.joint_entropy(b);
    Ok(EntropyReport::new(lhs, rhs, DEFAULT_TOL))
}

/// `k H(X) <= Σ_{A∈fam} H(X_A)` for a `k`-cover `fam`.
pub fn verify_shearer<E: EntropySource + ?Sized>(
    src: &E,
    fam: &SetFamily,
    k: usize,
) -> Result<EntropyReport> {
    check_family(src, fam)?;
    require_k_cover(fam, k)?;
    let lhs = k as f64 * src.joint_entropy(SubsetMask::full(src.n()));
    let rhs = family_entropy(src, fam);
    Ok(EntropyReport::new(lhs, rhs, DEFAULT_TOL))
}

/// For non-empty `A` with minimum `a` and maximum `b`, returns
/// `A_* = {1..a-1}` and `A^* = {1..b-1} \ A`.
pub fn star_sets(a: SubsetMask) -> Result<(SubsetMask, SubsetMask)> {
    let (lo, hi) = match (a.min_element(), a.max_element()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Error::EmptySet),
    };
    let lower = SubsetMask::prefix(lo - 1);
    let upper = SubsetMask::prefix(hi - 1).difference(a);
    Ok((lower, upper))
}

/// Both sides of the two-sided bound for a uniform `k`-cover:
/// `Σ H(X_A | X_{A^*}) <= k H(X) <= Σ H(X_A | X_{A_*})`.
///
/// Returns `(lower, upper)` reports; in `lower` the conditional sum is the
/// left-hand side, in `upper` it is the right-hand side.
pub fn verify_madiman_tetali<E: EntropySource + ?Sized>(
    src: &E,
    fam: &SetFamily,
    k: usize,
) -> Result<(EntropyReport, EntropyReport)> {
    check_family(src, fam)?;
    require_uniform_k_cover(fam, k)?;
    let total = k as f64 * src.joint_entropy(SubsetMask::full(src.n()));
    let mut below = 0.0;
    let mut above = 0.0;
    for &a in fam.members() {
        let (lower_star, upper_star) = star_sets(a)?;
        below += src.conditional(a, upper_star);
        above += src.conditional(a, lower_star);
    }
    Ok((
        EntropyReport::new(below, total, DEFAULT_TOL),
        EntropyReport::new(total, above, DEFAULT_TOL),
    ))
}

/// Non-negative constants summing to `H(X)` that are sandwiched between
/// the conditional entropies of every subset.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxCertificate {
    /// `h[i - 1] = H(X_i | X_1, ..., X_{i-1})`.
    pub h: Vec<f64>,
}

impl BoxCertificate {
    pub fn sum_over(&self, a: SubsetMask) -> f64 {
        a.elements().map(|i| self.h[i - 1]).sum()
    }

    pub fn total(&self) -> f64 {
        self.h.iter().sum()
    }
}

pub fn box_certificate<E: EntropySource + ?Sized>(src: &E) -> BoxCertificate {
    let h = (1..=src.n())
        .map(|i| {
            src.conditional(SubsetMask::singleton(i), SubsetMask::prefix(i - 1))
                .max(0.0)
        })
        .collect();
    BoxCertificate { h }
}

/// Result of checking a [`BoxCertificate`] against every subset.
#[derive(Clone, Debug)]
pub struct SandwichAudit {
    /// `Σ h_i` against `H(X)` in both directions.
    pub chain_rule: (EntropyReport, EntropyReport),
    /// Number of individual inequalities checked, including the chain rule.
    pub checks: usize,
    pub violations: usize,
    /// The check with the smallest slack.
    pub worst: EntropyReport,
    /// The subset attaining `worst`, if it came from a subset check.
    pub worst_subset: Option<SubsetMask>,
}

impl SandwichAudit {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `H(X_A | X_{A^*}) <= Σ_{i∈A} h_i <= H(X_A | X_{A_*})` for every
/// non-empty `A`, plus `Σ h_i = H(X)`.
pub fn audit_box_certificate<E: EntropySource + ?Sized>(
    src: &E,
    cert: &BoxCertificate,
    tol: f64,
) -> Result<SandwichAudit> {
    if cert.h.len() != src.n() {
        return Err(Error::GroundSetMismatch {
            left: src.n(),
            right: cert.h.len(),
        });
    }
    let joint = src.joint_entropy(SubsetMask::full(src.n()));
    let chain_rule = (
        EntropyReport::new(cert.total(), joint, tol),
        EntropyReport::new(joint, cert.total(), tol),
    );
    let mut checks = 2;
    let mut violations = [chain_rule.0, chain_rule.1]
        .iter()
        .filter(|r| !r.holds())
        .count();
    let mut worst = if chain_rule.0.slack <= chain_rule.1.slack {
        chain_rule.0
    } else {
        chain_rule.1
    };
    let mut worst_subset = None;
    for a in SubsetMask::all_subsets(src.n()).skip(1) {
        let (lower_star, upper_star) = star_sets(a)?;
        let sum = cert.sum_over(a);
        for report in [
            EntropyReport::new(src.conditional(a, upper_star), sum, tol),
            EntropyReport::new(sum, src.conditional(a, lower_star), tol),
        ] {
            checks += 1;
            if !report.holds() {
                violations += 1;
            }
            if report.slack < worst.slack {
                worst = report;
                worst_subset = Some(a);
            }
        }
    }
    Ok(SandwichAudit {
        chain_rule,
        checks,
        violations,
        worst,
        worst_subset,
    })
}

/// `Σ_{B∈fam_b} H(X_B) <= Σ_{A∈fam_a} H(X_A)` whenever `fam_b` is a
/// compression of `fam_a`.
pub fn verify_gen1<E: EntropySource + ?Sized>(
    src: &E,
    fam_a: &SetFamily,
    fam_b: &SetFamily,
) -> Result<EntropyReport> {
    check_family(src, fam_a)?;
    check_family(src, fam_b)?;
    if !compresses_to(fam_a, fam_b)? {
        return Err(Error::NotComparable);
    }
    Ok(EntropyReport::new(
        family_entropy(src, fam_b),
        family_entropy(src, fam_a),
        DEFAULT_TOL,
    ))
}

/// `Σ_{A∈fam♯} H(X_A) <= Σ_{A∈fam} H(X_A)`. The minimal compression is
/// dominated by construction, so no reachability search is run.
pub fn verify_gen2<E: EntropySource + ?Sized>(src: &E, fam: &SetFamily) -> Result<EntropyReport> {
    check_family(src, fam)?;
    let sharp = minimal_compression(fam);
    Ok(EntropyReport::new(
        family_entropy(src, &sharp),
        family_entropy(src, fam),
        DEFAULT_TOL,
    ))
}

/// A seeded random distribution: each variable takes values `0..s_i` with
/// `s_i <= max_support`, and every probability is a multiple of `1/D` for
/// some `D <= max_denominator`.
pub fn random_distribution<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_support: usize,
    max_denominator: u32,
) -> JointDistribution {
    assert!(max_support >= 1 && max_denominator >= 1);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_support)).collect();
    let supports: Vec<Vec<i64>> = sizes.iter().map(|&s| (0..s as i64).collect()).collect();
    let cells: usize = sizes.iter().product();
    let denominator = rng.gen_range(1..=max_denominator) as usize;
    let atoms = rng.gen_range(1..=cells.min(denominator));

    // composition of the denominator into `atoms` positive parts
    let mut cuts: Vec<usize> = if atoms > 1 {
        sample(rng, denominator - 1, atoms - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect()
    } else {
        Vec::new()
    };
    cuts.sort_unstable();
    cuts.push(denominator);
    let mut parts = Vec::with_capacity(atoms);
    let mut prev = 0;
    for c in cuts {
        parts.push(c - prev);
        prev = c;
    }

    let chosen = sample(rng, cells, atoms);
    let entries = chosen
        .into_iter()
        .zip(parts)
        .map(|(cell, part)| {
            let mut rest = cell;
            let x = sizes
                .iter()
                .map(|&s| {
                    let v = rest % s;
                    rest /= s;
                    v as i64
                })
                .collect();
            (
                x,
                BigRational::new(BigInt::from(part), BigInt::from(denominator)),
            )
        })
        .collect();
    JointDistribution::new(supports, entries).expect("generated pmf is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn m(elements: &[usize], n: usize) -> SubsetMask {
        SubsetMask::from_elements(elements.iter().copied(), n).unwrap()
    }

    fn fair_bits(n: usize) -> JointDistribution {
        JointDistribution::independent(&vec![vec![(0, q(1, 2)), (1, q(1, 2))]; n]).unwrap()
    }

    fn copy_pair() -> JointDistribution {
        JointDistribution::uniform(vec![vec![0, 0], vec![1, 1]]).unwrap()
    }

    fn fam(n: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily::from_sets(n, sets.iter().map(|s| s.iter().copied())).unwrap()
    }

    #[test]
    fn validation() {
        let s = vec![vec![0, 1]];
        assert!(JointDistribution::new(s.clone(), vec![(vec![0], q(1, 2))]).is_err());
        assert!(JointDistribution::new(s.clone(), vec![(vec![2], q(1, 1))]).is_err());
        assert!(JointDistribution::new(
            s.clone(),
            vec![(vec![0], q(3, 2)), (vec![1], q(-1, 2))]
        )
        .is_err());
        let d = JointDistribution::new(s, vec![(vec![0], q(1, 2)), (vec![0], q(1, 2))]).unwrap();
        assert_eq!(d.probability(&[0]), q(1, 1));
    }

    #[test]
    fn marginals() {
        let d = fair_bits(2);
        let x1 = marginal(&d, m(&[1], 2)).unwrap();
        assert_eq!(x1.probability(&[0]), q(1, 2));
        assert_eq!(x1.probability(&[1]), q(1, 2));

        let x2 = marginal(&copy_pair(), m(&[2], 2)).unwrap();
        assert_eq!(x2.probability(&[1]), q(1, 2));

        let d = JointDistribution::uniform(vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        let x1 = marginal(&d, m(&[1], 2)).unwrap();
        assert_eq!(x1.probability(&[0]), q(2, 3));
        assert_eq!(x1.probability(&[1]), q(1, 3));

        let empty = marginal(&d, SubsetMask::EMPTY).unwrap();
        assert_eq!(empty.n(), 0);
        assert_eq!(empty.probability(&[]), q(1, 1));
        assert!(marginal(&d, m(&[3], 3)).is_err());
    }

    #[test]
    fn entropies() {
        assert_eq!(entropy(&fair_bits(1)), 1.0);
        let point = JointDistribution::uniform(vec![vec![7]]).unwrap();
        assert_eq!(entropy(&point), 0.0);
        let skew =
            JointDistribution::new(vec![vec![0, 1]], vec![(vec![0], q(2, 3)), (vec![1], q(1, 3))])
                .unwrap();
        let closed_form = 3f64.log2() - 2.0 / 3.0;
        assert!((entropy(&skew) - closed_form).abs() < 1e-12);
        assert!((entropy(&skew) - 0.918_295_8).abs() < 1e-7);
        let single: f32 = entropy_in(&skew);
        assert!((single as f64 - closed_form).abs() < 1e-5);
    }

    #[test]
    fn conditional_entropies() {
        let d = fair_bits(2);
        let c = conditional_entropy(&d, m(&[1], 2), m(&[2], 2)).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        let c = conditional_entropy(&copy_pair(), m(&[1], 2), m(&[2], 2)).unwrap();
        assert!(c.abs() < 1e-12);
        let skew = JointDistribution::uniform(vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        let c = conditional_entropy(&skew, m(&[1], 2), SubsetMask::EMPTY).unwrap();
        assert_eq!(c, entropy(&marginal(&skew, m(&[1], 2)).unwrap()));
    }

    #[test]
    fn submodularity_degenerate_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = random_distribution(&mut rng, 4, 3, 64);
        let a = m(&[1, 2], 4);
        let r = check_submodularity(&d, a, a).unwrap();
        assert_eq!(r.slack, 0.0);
        let r = check_submodularity(&d, m(&[1], 4), m(&[1, 3], 4)).unwrap();
        assert!(r.slack.abs() < 1e-12);
    }

    #[test]
    fn shearer_examples() {
        let pairs = fam(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        let r = verify_shearer(&fair_bits(3), &pairs, 2).unwrap();
        assert!((r.lhs - 6.0).abs() < 1e-12 && (r.rhs - 6.0).abs() < 1e-12);
        let copies = JointDistribution::uniform(vec![vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        let r = verify_shearer(&copies, &pairs, 2).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12 && (r.rhs - 3.0).abs() < 1e-12);
        assert!(matches!(
            verify_shearer(&copies, &pairs, 3),
            Err(Error::NotACover { .. })
        ));
    }

    #[test]
    fn star_set_examples() {
        assert_eq!(star_sets(m(&[2, 4], 4)).unwrap(), (m(&[1], 4), m(&[1, 3], 4)));
        assert_eq!(
            star_sets(m(&[1], 4)).unwrap(),
            (SubsetMask::EMPTY, SubsetMask::EMPTY)
        );
        assert_eq!(
            star_sets(SubsetMask::full(5)).unwrap(),
            (SubsetMask::EMPTY, SubsetMask::EMPTY)
        );
        assert_eq!(star_sets(SubsetMask::EMPTY), Err(Error::EmptySet));
    }

    #[test]
    fn madiman_tetali_examples() {
        let pairs = fam(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        let (lower, upper) = verify_madiman_tetali(&fair_bits(3), &pairs, 2).unwrap();
        assert!(lower.slack.abs() < 1e-12 && upper.slack.abs() < 1e-12);

        // conditional sums enumerated by hand: lower 1 + 0 + 0, upper 1 + 1 + 0
        let copies = JointDistribution::uniform(vec![vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        let (lower, upper) = verify_madiman_tetali(&copies, &pairs, 2).unwrap();
        assert!((lower.lhs - 1.0).abs() < 1e-12 && (lower.rhs - 2.0).abs() < 1e-12);
        assert!((upper.lhs - 2.0).abs() < 1e-12 && (upper.rhs - 2.0).abs() < 1e-12);

        let whole = SetFamily::repeated(3, SubsetMask::full(3), 2).unwrap();
        let (lower, upper) = verify_madiman_tetali(&copies, &whole, 2).unwrap();
        assert_eq!(lower.slack, 0.0);
        assert_eq!(upper.slack, 0.0);
        assert!(matches!(
            verify_madiman_tetali(&copies, &fam(3, &[&[1, 2], &[3]]), 2),
            Err(Error::NotUniformCover { .. })
        ));
    }

    #[test]
    fn box_certificate_examples() {
        let cert = box_certificate(&fair_bits(4));
        assert!(cert.h.iter().all(|&h| (h - 1.0).abs() < 1e-12));
        let cert = box_certificate(&copy_pair());
        assert!((cert.h[0] - 1.0).abs() < 1e-12 && cert.h[1].abs() < 1e-12);
        let audit = audit_box_certificate(&copy_pair(), &cert, DEFAULT_TOL).unwrap();
        assert!(audit.holds());
        assert_eq!(audit.checks, 2 + 2 * 3);
    }

    #[test]
    fn gen1_and_gen2() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = random_distribution(&mut rng, 4, 3, 64);
        let a = fam(4, &[&[1, 2], &[1, 3], &[4]]);
        let b = fam(4, &[&[1, 2, 3], &[1, 4]]);
        assert!(verify_gen1(&d, &a, &b).unwrap().holds());
        assert_eq!(verify_gen1(&d, &a, &a).unwrap().slack, 0.0);
        assert_eq!(verify_gen1(&d, &b, &a), Err(Error::NotComparable));

        let chain = fam(4, &[&[1], &[1, 2], &[1, 2, 3, 4]]);
        assert_eq!(verify_gen2(&d, &chain).unwrap().slack, 0.0);

        let pairs = SetFamily::all_subsets_of_size(4, 3).unwrap();
        let g = verify_gen2(&d, &pairs).unwrap();
        let s = verify_shearer(&d, &pairs, 3).unwrap();
        assert!((g.lhs - s.lhs).abs() < 1e-12 && (g.rhs - s.rhs).abs() < 1e-12);
    }

    #[test]
    fn random_distributions_are_reproducible() {
        let a = random_distribution(&mut ChaCha8Rng::seed_from_u64(5), 3, 4, 64);
        let b = random_distribution(&mut ChaCha8Rng::seed_from_u64(5), 3, 4, 64);
        assert_eq!(a, b);
        for (_, p) in a.pmf() {
            assert!(p.denom() <= &BigInt::from(64));
        }
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let d = random_distribution(&mut ChaCha8Rng::seed_from_u64(9), 4, 3, 64);
        let t = EntropyTable::new(&d).unwrap();
        for a in SubsetMask::all_subsets(4) {
            assert!((t.joint_entropy(a) - d.joint_entropy(a)).abs() < 1e-12);
            let direct = entropy(&marginal(&d, a).unwrap());
            assert!((t.joint_entropy(a) - direct).abs() < 1e-12);
        }
    }
}
