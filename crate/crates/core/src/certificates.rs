//! Linear feasibility by Fourier–Motzkin elimination, generic over the
//! scalar field.
//!
//! Exact systems run over [`BigRational`] and return either a rational point
//! or a non-negative combination of rows that reads `0 <= negative`.
//! Log-space systems run over `f64` with an explicit slack.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::set_families::SubsetMask;

pub const MAX_VARIABLES: usize = 8;
pub const MAX_ROWS: usize = 300;
const MAX_DERIVED_ROWS: usize = 50_000;

/// Relative tolerance used when re-verifying log-space witnesses
/// multiplicatively.
pub const LOG_RELATIVE_TOL: f64 = 1e-9;

/// Largest integer exponent used when re-checking a log-space certificate.
const MAX_CERTIFICATE_EXPONENT: u32 = 1 << 16;

/// Field operations needed by the eliminator.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + FromPrimitive {
    /// Whether a value counts as zero during elimination and auditing.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for BigRational {}

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-10
    }
}

impl Scalar for f32 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-5
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `a·x <= b`
    Le,
    /// `a·x = b`
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub bound: T,
    pub label: String,
}

/// A conjunction of linear rows over `vars` unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<T> {
    vars: usize,
    rows: Vec<Row<T>>,
    slack: T,
}

impl<T: Scalar> LinearSystem<T> {
    /// An empty system; rows are satisfied when `a·x <= b + slack`.
    pub fn new(vars: usize, slack: T) -> Self {
        LinearSystem {
            vars,
            rows: Vec::new(),
            slack,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn rows(&self) -> &[Row<T>] {
        &self.rows
    }

    pub fn slack(&self) -> &T {
        &self.slack
    }

    pub fn push(&mut self, coeffs: Vec<T>, relation: Relation, bound: T, label: impl Into<String>) -> Result<()> {
        if coeffs.len() != self.vars {
            return Err(Error::InvalidSystem(format!(
                "row has {} coefficients, expected {}",
                coeffs.len(),
                self.vars
            )));
        }
        self.rows.push(Row {
            coeffs,
            relation,
            bound,
            label: label.into(),
        });
        Ok(())
    }

    pub fn le(&mut self, coeffs: Vec<T>, bound: T, label: impl Into<String>) -> Result<()> {
        self.push(coeffs, Relation::Le, bound, label)
    }

    /// `a·x >= b`, stored as `-a·x <= -b`.
    pub fn ge(&mut self, coeffs: Vec<T>, bound: T, label: impl Into<String>) -> Result<()> {
        let negated = coeffs.into_iter().map(|c| -c).collect();
        self.push(negated, Relation::Le, -bound, label)
    }

    pub fn equal(&mut self, coeffs: Vec<T>, bound: T, label: impl Into<String>) -> Result<()> {
        self.push(coeffs, Relation::Eq, bound, label)
    }

    /// Whether `x` satisfies every row up to the system slack.
    pub fn check_witness(&self, x: &[T]) -> bool {
        x.len() == self.vars
            && self.rows.iter().all(|row| {
                let lhs = dot(&row.coeffs, x);
                match row.relation {
                    Relation::Le => lhs <= row.bound.clone() + self.slack.clone(),
                    Relation::Eq => {
                        let gap = (lhs - row.bound.clone()).abs();
                        gap <= self.slack.clone() || gap.is_negligible()
                    }
                }
            })
    }

    /// Whether `cert` combines the rows into `0 <= b` with `b < -slack`.
    pub fn check_certificate(&self, cert: &InfeasibilityCertificate<T>) -> bool {
        if cert.multipliers.len() != self.rows.len() {
            return false;
        }
        let sign_ok = self
            .rows
            .iter()
            .zip(&cert.multipliers)
            .all(|(row, y)| row.relation == Relation::Eq || !y.is_negative() || y.is_negligible());
        let mut combined = vec![T::zero(); self.vars];
        let mut bound = T::zero();
        for (row, y) in self.rows.iter().zip(&cert.multipliers) {
            for (c, a) in combined.iter_mut().zip(&row.coeffs) {
                *c = c.clone() + y.clone() * a.clone();
            }
            bound = bound + y.clone() * row.bound.clone();
        }
        sign_ok
            && combined.iter().all(|c| c.is_negligible())
            && bound < -self.slack.clone()
            && !bound.is_negligible()
    }

    fn check_caps(&self) -> Result<()> {
        if self.vars > MAX_VARIABLES {
            return Err(Error::InstanceTooLarge(format!(
                "{} variables exceeds {MAX_VARIABLES}",
                self.vars
            )));
        }
        if self.rows.len() > MAX_ROWS {
            return Err(Error::InstanceTooLarge(format!(
                "{} rows exceeds {MAX_ROWS}",
                self.rows.len()
            )));
        }
        Ok(())
    }
}

fn dot<T: Scalar>(a: &[T], x: &[T]) -> T {
    a.iter()
        .zip(x)
        .fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
}

/// Non-negative multipliers (free for equality rows) whose combination of
/// the system reads `0 <= combined_bound < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct InfeasibilityCertificate<T> {
    pub multipliers: Vec<T>,
    pub combined_bound: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility<T> {
    Feasible(Vec<T>),
    Infeasible(InfeasibilityCertificate<T>),
}

impl<T> Feasibility<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[T]> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&InfeasibilityCertificate<T>> {
        match self {
            Feasibility::Feasible(_) => None,
            Feasibility::Infeasible(c) => Some(c),
        }
    }
}

/// A `<=` row produced during elimination, tracking how it was derived.
#[derive(Clone, Debug)]
struct Derived<T> {
    coeffs: Vec<T>,
    bound: T,
    /// Multipliers over the original rows.
    origin: Vec<T>,
}

impl<T: Scalar> Derived<T> {
    fn scaled(&self, by: &T) -> Self {
        Derived {
            coeffs: self.coeffs.iter().map(|c| c.clone() * by.clone()).collect(),
            bound: self.bound.clone() * by.clone(),
            origin: self.origin.iter().map(|c| c.clone() * by.clone()).collect(),
        }
    }

    fn add(&self, other: &Self) -> Self {
        let sum = |a: &[T], b: &[T]| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect();
        Derived {
            coeffs: sum(&self.coeffs, &other.coeffs),
            bound: self.bound.clone() + other.bound.clone(),
            origin: sum(&self.origin, &other.origin),
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible())
    }

    /// Scales the row so its largest coefficient has absolute value one.
    fn normalized(&self) -> Self {
        let largest = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .fold(T::zero(), |m, c| if c > m { c } else { m });
        if largest.is_zero() {
            return self.clone();
        }
        self.scaled(&(T::one() / largest))
    }
}

fn same_direction<T: Scalar>(a: &[T], b: &[T]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_negligible())
}

/// Drops rows that are implied by a parallel row with a tighter bound.
fn prune<T: Scalar>(rows: Vec<Derived<T>>) -> Vec<Derived<T>> {
    let mut kept: Vec<Derived<T>> = Vec::with_capacity(rows.len());
    for row in rows.into_iter().map(|r| r.normalized()) {
        match kept.iter_mut().find(|k| same_direction(&k.coeffs, &row.coeffs)) {
            Some(existing) => {
                if row.bound < existing.bound {
                    *existing = row;
                }
            }
            None => kept.push(row),
        }
    }
    kept
}

/// Decides feasibility of `sys`, eliminating variables in index order.
pub fn feasible<T: Scalar>(sys: &LinearSystem<T>) -> Result<Feasibility<T>> {
    sys.check_caps()?;
    let nrows = sys.rows.len();
    let unit = |r: usize, sign: T| {
        let mut origin = vec![T::zero(); nrows];
        origin[r] = sign;
        origin
    };
    let mut rows: Vec<Derived<T>> = Vec::new();
    for (r, row) in sys.rows.iter().enumerate() {
        rows.push(Derived {
            coeffs: row.coeffs.clone(),
            bound: row.bound.clone(),
            origin: unit(r, T::one()),
        });
        if row.relation == Relation::Eq {
            rows.push(Derived {
                coeffs: row.coeffs.iter().map(|c| -c.clone()).collect(),
                bound: -row.bound.clone(),
                origin: unit(r, -T::one()),
            });
        }
    }

    let mut stages: Vec<Vec<Derived<T>>> = Vec::with_capacity(sys.vars);
    for v in 0..sys.vars {
        let (trivial, live): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r.is_trivial());
        if let Some(cert) = contradiction(sys, &trivial) {
            return Ok(Feasibility::Infeasible(cert));
        }
        let live = prune(live);
        let mut next = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for r in &live {
            let c = &r.coeffs[v];
            if c.is_negligible() {
                let mut r = r.clone();
                r.coeffs[v] = T::zero();
                next.push(r);
            } else if c.is_positive() {
                pos.push(r);
            } else {
                neg.push(r);
            }
        }
        if next.len() + pos.len() * neg.len() > MAX_DERIVED_ROWS {
            return Err(Error::InstanceTooLarge(format!(
                "elimination of variable {} would produce more than {MAX_DERIVED_ROWS} rows",
                v + 1
            )));
        }
        for p in &pos {
            for q in &neg {
                let mut combo = p.scaled(&(-q.coeffs[v].clone())).add(&q.scaled(&p.coeffs[v]));
                combo.coeffs[v] = T::zero();
                next.push(combo);
            }
        }
        stages.push(live);
        rows = next;
    }
    if let Some(cert) = contradiction(sys, &rows) {
        return Ok(Feasibility::Infeasible(cert));
    }

    let mut x = vec![T::zero(); sys.vars];
    for v in (0..sys.vars).rev() {
        let mut lower: Option<T> = None;
        let mut upper: Option<T> = None;
        for r in &stages[v] {
            let c = r.coeffs[v].clone();
            if c.is_negligible() {
                continue;
            }
            let rest = (v + 1..sys.vars).fold(r.bound.clone(), |acc, u| {
                acc - r.coeffs[u].clone() * x[u].clone()
            });
            let limit = rest / c.clone();
            if c.is_positive() {
                if upper.as_ref().map_or(true, |u| limit < *u) {
                    upper = Some(limit);
                }
            } else if lower.as_ref().map_or(true, |l| limit > *l) {
                lower = Some(limit);
            }
        }
        x[v] = match (lower, upper) {
            (Some(l), Some(u)) => {
                if l >= u {
                    l
                } else {
                    (l + u) / T::from_u8(2).expect("2 is representable")
                }
            }
            (Some(l), None) => l,
            (None, Some(u)) => u,
            (None, None) => T::zero(),
        };
    }
    Ok(Feasibility::Feasible(x))
}

/// A trivial row `0 <= b` with `b` below the slack, as a certificate.
fn contradiction<T: Scalar>(
    sys: &LinearSystem<T>,
    rows: &[Derived<T>],
) -> Option<InfeasibilityCertificate<T>> {
    rows.iter()
        .find(|r| r.is_trivial() && r.bound < -sys.slack.clone() && !r.bound.is_negligible())
        .map(|r| InfeasibilityCertificate {
            multipliers: r.origin.clone(),
            combined_bound: r.bound.clone(),
        })
}

/// Exact rational systems.
pub type ExactSystem = LinearSystem<BigRational>;

/// Log-space systems with floating-point bounds.
pub type LogSystem = LinearSystem<f64>;

pub fn rational(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

fn indicator<T: Scalar>(n: usize, a: SubsetMask) -> Vec<T> {
    (1..=n)
        .map(|i| if a.contains(i) { T::one() } else { T::zero() })
        .collect()
}

fn check_sizes(n: usize, sizes: &BTreeMap<SubsetMask, u64>) -> Result<()> {
    if n == 0 || n > MAX_VARIABLES {
        return Err(Error::InstanceTooLarge(format!(
            "{n} coordinates is outside 1..={MAX_VARIABLES}"
        )));
    }
    for a in SubsetMask::all_subsets(n).skip(1) {
        match sizes.get(&a) {
            Some(&s) if s >= 1 => {}
            _ => {
                return Err(Error::InvalidSystem(format!(
                    "missing or zero size for subset {a}"
                )))
            }
        }
    }
    Ok(())
}

/// Multiplicative feasibility: constants `λ_i` with `∏ λ_i = sizes[[n]]` and
/// `∏_{i∈A} λ_i <= sizes[A]` for every other non-empty `A`.
#[derive(Clone, Debug)]
pub struct BoxFeasibility {
    pub system: LogSystem,
    pub outcome: Feasibility<f64>,
    /// `λ_i = exp(x_i)` when feasible.
    pub lambdas: Option<Vec<f64>>,
    /// The witness re-checked multiplicatively, or the certificate re-checked
    /// against the rows.
    pub reverified: bool,
}

impl BoxFeasibility {
    pub fn is_feasible(&self) -> bool {
        self.outcome.is_feasible()
    }
}

/// Builds and solves the log-space system for `λ_i`.
pub fn box_feasibility(n: usize, sizes: &BTreeMap<SubsetMask, u64>) -> Result<BoxFeasibility> {
    check_sizes(n, sizes)?;
    let full = SubsetMask::full(n);
    let mut system = LogSystem::new(n, LOG_RELATIVE_TOL);
    for a in SubsetMask::all_subsets(n).skip(1) {
        let bound = (sizes[&a] as f64).ln();
        if a == full {
            system.equal(indicator(n, a), bound, format!("sum over {a} = ln {}", sizes[&a]))?;
        } else {
            system.le(indicator(n, a), bound, format!("sum over {a} <= ln {}", sizes[&a]))?;
        }
    }
    let outcome = feasible(&system)?;
    let (lambdas, reverified) = match &outcome {
        Feasibility::Feasible(x) => {
            let lambdas: Vec<f64> = x.iter().map(|v| v.exp()).collect();
            let ok = SubsetMask::all_subsets(n).skip(1).all(|a| {
                let product: f64 = a.elements().map(|i| lambdas[i - 1]).product();
                let size = sizes[&a] as f64;
                if a == full {
                    ((product - size) / size).abs() <= LOG_RELATIVE_TOL
                } else {
                    product <= size * (1.0 + LOG_RELATIVE_TOL)
                }
            });
            (Some(lambdas), ok)
        }
        Feasibility::Infeasible(cert) => (
            None,
            system.check_certificate(cert) && multiplicative_certificate(n, sizes, cert),
        ),
    };
    Ok(BoxFeasibility {
        system,
        outcome,
        lambdas,
        reverified,
    })
}

/// Re-checks a log-space certificate with integers only: the multipliers are
/// rationalized, their combination must cancel every variable exactly, and
/// `∏ size^w` must be strictly below one.
fn multiplicative_certificate(
    n: usize,
    sizes: &BTreeMap<SubsetMask, u64>,
    cert: &InfeasibilityCertificate<f64>,
) -> bool {
    let full = SubsetMask::full(n);
    let subsets: Vec<SubsetMask> = SubsetMask::all_subsets(n).skip(1).collect();
    if cert.multipliers.len() != subsets.len() {
        return false;
    }
    let mut weights = Vec::with_capacity(subsets.len());
    for (&a, &y) in subsets.iter().zip(&cert.multipliers) {
        let Some(w) = Ratio::<i64>::approximate_float(y) else {
            return false;
        };
        if a != full && w < Ratio::zero() {
            return false;
        }
        weights.push(BigRational::new(BigInt::from(*w.numer()), BigInt::from(*w.denom())));
    }
    let cancels = (1..=n).all(|i| {
        subsets
            .iter()
            .zip(&weights)
            .filter(|(a, _)| a.contains(i))
            .fold(BigRational::zero(), |acc, (_, w)| acc + w)
            .is_zero()
    });
    if !cancels {
        return false;
    }
    let scale = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let mut below = BigUint::one();
    let mut above = BigUint::one();
    for (a, w) in subsets.iter().zip(&weights) {
        let exponent = (w * BigRational::from_integer(scale.clone())).to_integer();
        let Some(e) = exponent.magnitude().to_u32().filter(|&e| e <= MAX_CERTIFICATE_EXPONENT) else {
            return false;
        };
        let power = BigUint::from(sizes[a]).pow(e);
        if exponent.is_positive() {
            below *= power;
        } else {
            above *= power;
        }
    }
    below < above
}

/// Additive feasibility: rationals `σ_i` with `Σ σ_i = sizes[[n]] - 1` and
/// `Σ_{i∈A} σ_i >= sizes[A] - 1` for every other non-empty `A`.
#[derive(Clone, Debug)]
pub struct AdditiveFeasibility {
    pub system: ExactSystem,
    pub outcome: Feasibility<BigRational>,
    /// Witness or certificate re-checked by exact substitution.
    pub reverified: bool,
}

impl AdditiveFeasibility {
    pub fn is_feasible(&self) -> bool {
        self.outcome.is_feasible()
    }
}

pub fn additive_feasibility(
    n: usize,
    sizes: &BTreeMap<SubsetMask, u64>,
) -> Result<AdditiveFeasibility> {
    check_sizes(n, sizes)?;
    let full = SubsetMask::full(n);
    let mut system = ExactSystem::new(n, BigRational::zero());
    for a in SubsetMask::all_subsets(n).skip(1) {
        let bound = rational(sizes[&a] as i64 - 1);
        if a == full {
            system.equal(indicator(n, a), bound, format!("sum over {a} = {}", sizes[&a] - 1))?;
        } else {
            system.ge(indicator(n, a), bound, format!("sum over {a} >= {}", sizes[&a] - 1))?;
        }
    }
    let outcome = feasible(&system)?;
    let reverified = match &outcome {
        Feasibility::Feasible(x) => system.check_witness(x),
        Feasibility::Infeasible(cert) => system.check_certificate(cert),
    };
    Ok(AdditiveFeasibility {
        system,
        outcome,
        reverified,
    })
}
