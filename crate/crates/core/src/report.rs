//! Outcome types shared by the verifiers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

/// Default tolerance for floating-point entropy comparisons, in bits.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `rhs - lhs >= 0`.
    Holds,
    /// `-tol <= rhs - lhs < 0`: floating-point noise around an equality.
    ViolatedWithinTolerance,
    Violated,
}

impl Verdict {
    /// True unless the inequality fails beyond the tolerance.
    pub fn holds(self) -> bool {
        self != Verdict::Violated
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::ViolatedWithinTolerance => "violated-within-tolerance",
            Verdict::Violated => "violated",
        }
    }
}

/// A floating-point check of `lhs <= rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

impl EntropyReport {
    pub fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        let verdict = if slack >= 0.0 {
            Verdict::Holds
        } else if slack >= -tol {
            Verdict::ViolatedWithinTolerance
        } else {
            Verdict::Violated
        };
        EntropyReport {
            lhs,
            rhs,
            slack,
            tol,
            verdict,
        }
    }

    /// Reclassifies the report under a different tolerance.
    pub fn with_tol(self, tol: f64) -> Self {
        Self::new(self.lhs, self.rhs, tol)
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

/// An exact integer check of `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactReport {
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl ExactReport {
    pub fn new(lhs: impl Into<BigInt>, rhs: impl Into<BigInt>) -> Self {
        ExactReport {
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    pub fn is_equality(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn slack(&self) -> BigInt {
        &self.rhs - &self.lhs
    }

    /// `rhs / lhs`, or `None` when `lhs` is zero.
    pub fn ratio(&self) -> Option<BigRational> {
        (!self.lhs.is_zero()).then(|| BigRational::new(self.rhs.clone(), self.lhs.clone()))
    }

    pub fn verdict(&self) -> Verdict {
        if self.holds() {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }
}
