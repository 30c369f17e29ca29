mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::IntSystem;
use projent::certificates::{feasible, Feasibility};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn elimination_agrees_with_grid_search(seed in any::<u64>()) {
        let int = IntSystem::random(&mut ChaCha8Rng::seed_from_u64(seed));
        let sys = int.exact();
        let grid = int.grid_point();
        match feasible(&sys).unwrap() {
            Feasibility::Feasible(x) => {
                prop_assert!(grid.is_some());
                prop_assert!(sys.check_witness(&x));
            }
            Feasibility::Infeasible(cert) => {
                prop_assert!(grid.is_none());
                prop_assert!(sys.check_certificate(&cert));
            }
        }
        let float = int.to_system(1e-9f64);
        let outcome = feasible(&float).unwrap();
        prop_assert_eq!(outcome.is_feasible(), grid.is_some());
        match outcome {
            Feasibility::Feasible(x) => prop_assert!(float.check_witness(&x)),
            Feasibility::Infeasible(cert) => prop_assert!(float.check_certificate(&cert)),
        }
    }
}
