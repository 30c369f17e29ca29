//! Finite point sets in `Z^n`, coordinate projections and the lattice form
//! of the uniform cover inequality.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::report::ExactReport;
use crate::set_families::{minimal_compression, require_k_cover, SetFamily, SubsetMask};

/// A finite set of distinct points of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSet {
    n: usize,
    points: BTreeSet<Vec<i64>>,
}

impl LatticeSet {
    pub fn new<I: IntoIterator<Item = Vec<i64>>>(n: usize, points: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != n {
                return Err(Error::InvalidLattice(format!(
                    "point {p:?} does not have {n} coordinates"
                )));
            }
            set.insert(p);
        }
        Ok(LatticeSet { n, points: set })
    }

    /// The box `∏ [lo_i, hi_i] ∩ Z^n`.
    pub fn grid(bounds: &[(i64, i64)]) -> Self {
        let mut points = vec![Vec::new()];
        for &(lo, hi) in bounds {
            points = points
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (lo..=hi).map(move |v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        LatticeSet {
            n: bounds.len(),
            points: points.into_iter().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &BTreeSet<Vec<i64>> {
        &self.points
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.contains(p)
    }
}

/// `S_A`: the points of `S` restricted to the coordinates in `A`.
pub fn project(s: &LatticeSet, a: SubsetMask) -> Result<LatticeSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(e) = a.max_element().filter(|&e| e > s.n) {
        return Err(Error::ElementOutOfRange { element: e, n: s.n });
    }
    let points = s
        .points
        .iter()
        .map(|p| a.elements().map(|i| p[i - 1]).collect())
        .collect();
    Ok(LatticeSet { n: a.len(), points })
}

/// `|S_A|`, with `|S_∅| = 1` for non-empty `S`.
pub fn projection_size(s: &LatticeSet, a: SubsetMask) -> Result<usize> {
    if a.is_empty() {
        return Ok(usize::from(!s.is_empty()));
    }
    Ok(project(s, a)?.len())
}

/// Exact comparison of `|S|^k` with `∏_{A∈fam} |S_A|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub k: usize,
    /// `|S_A|` for each member, in family order.
    pub projection_sizes: Vec<usize>,
    pub report: ExactReport,
}

impl CoverReport {
    pub fn holds(&self) -> bool {
        self.report.holds()
    }
}

/// `|S|^k <= ∏_{A∈fam} |S_A|` for any `k`-cover `fam` of `[n]`.
pub fn verify_uniform_cover(s: &LatticeSet, fam: &SetFamily, k: usize) -> Result<CoverReport> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if fam.n() != s.n {
        return Err(Error::GroundSetMismatch {
            left: s.n,
            right: fam.n(),
        });
    }
    require_k_cover(fam, k)?;
    let projection_sizes = fam
        .members()
        .iter()
        .map(|&a| projection_size(s, a))
        .collect::<Result<Vec<_>>>()?;
    let lhs = BigUint::from(s.len()).pow(k as u32);
    let rhs = projection_sizes
        .iter()
        .fold(BigUint::one(), |acc, &c| acc * BigUint::from(c));
    Ok(CoverReport {
        k,
        projection_sizes,
        report: ExactReport::new(lhs, rhs),
    })
}

/// A finite set whose projections violate the projection analogue of the
/// minimal-compression entropy inequality.
#[derive(Clone, Debug)]
pub struct ProjectionCounterexample {
    pub set: LatticeSet,
    pub family: SetFamily,
    pub compressed: SetFamily,
    /// `∏_{A∈compressed} |S_A|`.
    pub compressed_product: u64,
    /// `∏_{A∈family} |S_A|`.
    pub family_product: u64,
}

impl ProjectionCounterexample {
    /// True when the compressed side strictly exceeds the original side.
    pub fn is_violation(&self) -> bool {
        self.compressed_product > self.family_product
    }
}

fn family_product(s: &LatticeSet, fam: &SetFamily) -> Result<u64> {
    fam.members()
        .iter()
        .try_fold(1u64, |acc, &a| Ok(acc * projection_size(s, a)? as u64))
}

/// Five unit cubes in `Z^3` with `|S| = 5`, `|S_{1}| = 2` and
/// `|S_{1,2}| = |S_{1,3}| = 3`, so `|S_{123}| |S_1| = 10 > 9 = |S_12| |S_13|`.
pub fn gen2_projection_counterexample() -> ProjectionCounterexample {
    let set = LatticeSet::new(
        3,
        vec![
            vec![0, 0, 0],
            vec![0, 0, 1],
            vec![0, 1, 0],
            vec![0, 1, 1],
            vec![1, 0, 0],
        ],
    )
    .expect("fixed points are three-dimensional");
    let family = SetFamily::from_sets(3, vec![vec![1, 2], vec![1, 3]]).expect("valid family");
    let compressed = minimal_compression(&family);
    let compressed_product = family_product(&set, &compressed).expect("masks within [3]");
    let family_product = family_product(&set, &family).expect("masks within [3]");
    ProjectionCounterexample {
        set,
        family,
        compressed,
        compressed_product,
        family_product,
    }
}
