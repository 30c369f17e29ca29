//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;

use projent::certificates::{ExactSystem, LinearSystem, Relation};
use projent::entropy::JointDistribution;

/// Grid resolution for the brute-force feasibility oracle. Every vertex of a
/// system with coefficients in {-1, 0, 1} and at most three variables has
/// coordinates whose denominators divide 1, 2, 3 or 4.
pub const GRID: i64 = 12;

/// Every coordinate is boxed into `[-BOX, BOX]`.
pub const BOX: i64 = 3;

/// A system with integer coefficients in {-1, 0, 1} and integer bounds.
#[derive(Clone, Debug)]
pub struct IntSystem {
    pub vars: usize,
    pub rows: Vec<(Vec<i64>, bool, i64)>,
}

impl IntSystem {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let vars = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=6);
        let mut rows = Vec::new();
        for _ in 0..count {
            let coeffs: Vec<i64> = (0..vars).map(|_| rng.gen_range(-1..=1)).collect();
            let equality = rng.gen_bool(0.2);
            rows.push((coeffs, equality, rng.gen_range(-5..=5)));
        }
        for v in 0..vars {
            for sign in [1, -1] {
                let mut coeffs = vec![0; vars];
                coeffs[v] = sign;
                rows.push((coeffs, false, BOX));
            }
        }
        IntSystem { vars, rows }
    }

    pub fn to_system<T: projent::certificates::Scalar>(&self, slack: T) -> LinearSystem<T> {
        let mut sys = LinearSystem::new(self.vars, slack);
        let conv = |v: i64| T::from_i64(v).unwrap();
        for (i, (coeffs, equality, bound)) in self.rows.iter().enumerate() {
            let relation = if *equality { Relation::Eq } else { Relation::Le };
            sys.push(coeffs.iter().map(|&c| conv(c)).collect(), relation, conv(*bound), format!("row {i}"))
                .unwrap();
        }
        sys
    }

    pub fn exact(&self) -> ExactSystem {
        self.to_system(BigRational::from_integer(BigInt::from(0)))
    }

    /// Searches the grid `(1/GRID) Z^n ∩ [-BOX, BOX]^n` in scaled integers.
    pub fn grid_point(&self) -> Option<Vec<i64>> {
        let side = 2 * BOX * GRID + 1;
        let total = side.pow(self.vars as u32);
        (0..total).find_map(|mut idx| {
            let x: Vec<i64> = (0..self.vars)
                .map(|_| {
                    let v = idx % side - BOX * GRID;
                    idx /= side;
                    v
                })
                .collect();
            self.rows
                .iter()
                .all(|(coeffs, equality, bound)| {
                    let lhs: i64 = coeffs.iter().zip(&x).map(|(c, v)| c * v).sum();
                    if *equality {
                        lhs == bound * GRID
                    } else {
                        lhs <= bound * GRID
                    }
                })
                .then_some(x)
        })
    }
}

/// `H(X_A)` in bits, straight from the probability table.
pub fn oracle_entropy(d: &JointDistribution, coords: &[usize]) -> f64 {
    let mut masses: HashMap<Vec<i64>, f64> = HashMap::new();
    for (x, p) in d.pmf() {
        let key = coords.iter().map(|&i| x[i - 1]).collect();
        *masses.entry(key).or_default() += p.to_f64().unwrap();
    }
    -masses
        .values()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}
