//! Ambient groups for sumsets: `Z^d` with the lexicographic order, cyclic
//! groups `Z_m`, and finite groups given by a Cayley table.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

/// A group element. `Z^d` elements have `d` coordinates; elements of `Z_m`
/// and of Cayley groups have a single coordinate (the residue or the table
/// index).
pub type Element = Vec<i64>;

/// Multiplication table of a finite group on `{0, ..., order - 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    identity: usize,
    table: Vec<Vec<usize>>,
}

impl CayleyTable {
    /// Checks closure, the Latin square property, the identity and
    /// associativity.
    pub fn new(order: usize, identity: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        if table.len() != order || table.iter().any(|row| row.len() != order) {
            return Err(Error::InvalidGroup(format!("table is not {order}x{order}")));
        }
        if identity >= order {
            return Err(Error::InvalidGroup(format!("identity {identity} out of range")));
        }
        if table.iter().flatten().any(|&v| v >= order) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        for a in 0..order {
            if table[identity][a] != a || table[a][identity] != a {
                return Err(Error::InvalidGroup(format!(
                    "{identity} does not act as the identity on {a}"
                )));
            }
        }
        for a in 0..order {
            let mut row_seen = vec![false; order];
            let mut col_seen = vec![false; order];
            for b in 0..order {
                row_seen[table[a][b]] = true;
                col_seen[table[b][a]] = true;
            }
            if row_seen.contains(&false) || col_seen.contains(&false) {
                return Err(Error::InvalidGroup(format!(
                    "row or column {a} is not a permutation"
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails for ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(CayleyTable { identity, table })
    }

    /// Table of `op` on `{0, ..., order - 1}`; validated like [`Self::new`].
    pub fn from_fn(order: usize, identity: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..order)
            .map(|a| (0..order).map(|b| op(a, b)).collect())
            .collect();
        Self::new(order, identity, table)
    }

    /// The group generated by permutations of `{0, ..., degree - 1}`, with
    /// elements indexed in breadth-first discovery order from the identity.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators.first().map_or(0, |g| g.len());
        let identity: Vec<usize> = (0..degree).collect();
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut elements = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in generators {
                let next = compose(&elements[e], g);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        Self::from_fn(elements.len(), 0, |a, b| index[&compose(&elements[a], &elements[b])])
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.table[a]
            .iter()
            .position(|&v| v == self.identity)
            .expect("validated tables have inverses")
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupContext {
    /// `Z^d`, ordered lexicographically.
    FreeAbelian { d: usize },
    /// `Z_m` on residues `0..m`.
    Cyclic { m: u64 },
    Cayley(CayleyTable),
}

impl GroupContext {
    pub fn free_abelian(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidGroup("free abelian rank must be positive".into()));
        }
        Ok(GroupContext::FreeAbelian { d })
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        if m == 0 || m > i64::MAX as u64 {
            return Err(Error::InvalidGroup(format!("invalid modulus {m}")));
        }
        Ok(GroupContext::Cyclic { m })
    }

    pub fn validate(&self, e: &[i64]) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::InvalidElement {
                element: e.to_vec(),
                reason: reason.into(),
            })
        };
        match self {
            GroupContext::FreeAbelian { d } if e.len() != *d => bad("wrong number of coordinates"),
            GroupContext::FreeAbelian { .. } => Ok(()),
            GroupContext::Cyclic { m } => match e {
                [v] if *v >= 0 && (*v as u64) < *m => Ok(()),
                _ => bad("not a residue in 0..m"),
            },
            GroupContext::Cayley(t) => match e {
                [v] if *v >= 0 && (*v as usize) < t.order() => Ok(()),
                _ => bad("not an index into the Cayley table"),
            },
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupContext::FreeAbelian { d } => vec![0; *d],
            GroupContext::Cyclic { .. } => vec![0],
            GroupContext::Cayley(t) => vec![t.identity() as i64],
        }
    }

    pub fn op(&self, a: &[i64], b: &[i64]) -> Element {
        match self {
            GroupContext::FreeAbelian { .. } => a.iter().zip(b).map(|(x, y)| x + y).collect(),
            GroupContext::Cyclic { m } => {
                let m = *m as i128;
                vec![((a[0] as i128 + b[0] as i128) % m) as i64]
            }
            GroupContext::Cayley(t) => vec![t.op(a[0] as usize, b[0] as usize) as i64],
        }
    }

    pub fn inverse(&self, a: &[i64]) -> Element {
        match self {
            GroupContext::FreeAbelian { .. } => a.iter().map(|x| -x).collect(),
            GroupContext::Cyclic { m } => vec![((*m as i64) - a[0]) % (*m as i64)],
            GroupContext::Cayley(t) => vec![t.inverse(a[0] as usize) as i64],
        }
    }

    pub fn is_commutative(&self) -> bool {
        match self {
            GroupContext::Cayley(t) => t.is_abelian(),
            _ => true,
        }
    }

    /// Only `Z^d` is torsion-free here (its lexicographic order is
    /// translation-invariant).
    pub fn is_torsion_free(&self) -> bool {
        matches!(self, GroupContext::FreeAbelian { .. })
    }

    /// Order of a finite group, `None` for `Z^d`.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupContext::FreeAbelian { .. } => None,
            GroupContext::Cyclic { m } => Some(*m),
            GroupContext::Cayley(t) => Some(t.order() as u64),
        }
    }

    /// All elements of a finite group in increasing order.
    pub fn elements(&self) -> Option<Vec<Element>> {
        self.order().map(|m| (0..m as i64).map(|v| vec![v]).collect())
    }

    pub fn describe(&self) -> String {
        match self {
            GroupContext::FreeAbelian { d } if *d == 1 => "Z".to_string(),
            GroupContext::FreeAbelian { d } => format!("Z^{d}"),
            GroupContext::Cyclic { m } => format!("Z_{m}"),
            GroupContext::Cayley(t) => format!("cayley({})", t.order()),
        }
    }
}

/// Smallest prime dividing `m`, or `None` for `m <= 1`.
pub fn smallest_prime_divisor(m: u64) -> Option<u64> {
    if m <= 1 {
        return None;
    }
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            return Some(p);
        }
        p += 1;
    }
    Some(m)
}

/// A group together with the element pool used to enumerate subsets of it.
#[derive(Clone, Debug)]
pub struct CatalogGroup {
    pub name: String,
    pub ctx: GroupContext,
    pub pool: Vec<Element>,
}

impl CatalogGroup {
    /// A finite group whose pool is every element.
    pub fn finite(name: impl Into<String>, ctx: GroupContext) -> Self {
        let pool = ctx.elements().expect("finite group");
        CatalogGroup {
            name: name.into(),
            ctx,
            pool,
        }
    }
}

fn quaternion_product(a: usize, b: usize) -> usize {
    // index = 2 * unit + sign, units 1, i, j, k and sign 1 meaning negative
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let (ua, sa) = (a / 2, a % 2 == 1);
    let (ub, sb) = (b / 2, b % 2 == 1);
    let (u, s) = UNIT[ua][ub];
    2 * u + usize::from(s ^ sa ^ sb)
}

fn cyclic_table(m: usize) -> CayleyTable {
    CayleyTable::from_fn(m, 0, |a, b| (a + b) % m).expect("cyclic group")
}

/// Every group of order at most 8, up to isomorphism, as Cayley tables.
pub fn small_groups() -> Vec<CatalogGroup> {
    let cayley = |name: &str, t: CayleyTable| CatalogGroup::finite(name, GroupContext::Cayley(t));
    let mut out = Vec::new();
    for m in 1..=8 {
        out.push(cayley(&format!("C{m}"), cyclic_table(m)));
        match m {
            4 => out.push(cayley(
                "C2xC2",
                CayleyTable::from_fn(4, 0, |a, b| a ^ b).expect("Klein four"),
            )),
            6 => out.push(cayley(
                "S3",
                CayleyTable::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).expect("S3"),
            )),
            8 => {
                out.push(cayley(
                    "C4xC2",
                    CayleyTable::from_fn(8, 0, |a, b| {
                        let x = (a / 2 + b / 2) % 4;
                        let y = (a % 2) ^ (b % 2);
                        2 * x + y
                    })
                    .expect("C4xC2"),
                ));
                out.push(cayley(
                    "C2xC2xC2",
                    CayleyTable::from_fn(8, 0, |a, b| a ^ b).expect("elementary abelian"),
                ));
                out.push(cayley(
                    "D4",
                    CayleyTable::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
                        .expect("D4"),
                ));
                out.push(cayley(
                    "Q8",
                    CayleyTable::from_fn(8, 0, quaternion_product).expect("Q8"),
                ));
            }
            _ => {}
        }
    }
    out
}

/// Torsion-free groups with small element windows: `Z` on `0..=5` and `Z^2`
/// on `{0,1,2}^2`.
pub fn torsion_free_groups() -> Vec<CatalogGroup> {
    let line = CatalogGroup {
        name: "Z".into(),
        ctx: GroupContext::FreeAbelian { d: 1 },
        pool: (0..=5).map(|v| vec![v]).collect(),
    };
    let plane = CatalogGroup {
        name: "Z^2".into(),
        ctx: GroupContext::FreeAbelian { d: 2 },
        pool: (0..3)
            .flat_map(|x| (0..3).map(move |y| vec![x, y]))
            .collect(),
    };
    vec![line, plane]
}

/// The abelian groups of order at most 8 followed by the torsion-free ones.
pub fn abelian_groups() -> Vec<CatalogGroup> {
    small_groups()
        .into_iter()
        .filter(|g| g.ctx.is_commutative())
        .chain(torsion_free_groups())
        .collect()
}
