use std::collections::BTreeSet;

use proptest::prelude::*;

use projent::groups::{small_groups, GroupContext};
use projent::lattice::projection_size;
use projent::set_families::{SetFamily, SubsetMask};
use projent::sumsets::{
    conjecture_feasibility, embed_image, extreme_products, marking_algorithm, phi_embed,
    sumset, verify_cauchy_davenport, verify_gymr, Conjecture, SumsetInstance,
};

fn int_sumset(sets: &[&Vec<i64>]) -> BTreeSet<i64> {
    sets.iter().fold(BTreeSet::from([0i64]), |acc, s| {
        acc.iter().flat_map(|a| s.iter().map(move |b| a + b)).collect()
    })
}

/// Every tuple of `∏ sets`, in lexicographic order of the values.
fn tuples(sets: &[Vec<i64>]) -> Vec<Vec<i64>> {
    sets.iter().fold(vec![Vec::new()], |acc, s| {
        let mut sorted = s.clone();
        sorted.sort_unstable();
        sorted.dedup();
        acc.iter()
            .flat_map(|t| {
                sorted.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect()
    })
}

fn int_sets(max_n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=10, 1..=4), 1..=max_n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sumsets_and_embedding_match_brute_force(sets in int_sets(4)) {
        let n = sets.len();
        let inst = SumsetInstance::integers(&sets).unwrap();
        let all = tuples(&sets);
        for a in SubsetMask::all_subsets(n).skip(1) {
            let chosen: Vec<&Vec<i64>> = a.elements().map(|i| &sets[i - 1]).collect();
            let expected = int_sumset(&chosen);
            let got: BTreeSet<i64> = sumset(&inst, a).unwrap().into_iter().map(|e| e[0]).collect();
            prop_assert_eq!(&got, &expected);
        }
        let full = int_sumset(&sets.iter().collect::<Vec<_>>());
        for &s in &full {
            let least = all.iter().find(|t| t.iter().sum::<i64>() == s).unwrap();
            let phi: Vec<i64> = phi_embed(&inst, SubsetMask::full(n), &[s]).unwrap().into_iter().map(|e| e[0]).collect();
            prop_assert_eq!(&phi, least);
        }
        let image = embed_image(&inst).unwrap();
        prop_assert_eq!(image.len(), full.len());
        for a in SubsetMask::all_subsets(n).skip(1) {
            prop_assert!(projection_size(&image, a).unwrap() <= sumset(&inst, a).unwrap().len());
        }
    }

    #[test]
    fn gymr_matches_direct_evaluation(
        a in prop::collection::vec(0i64..=20, 1..=5),
        bs in prop::collection::vec(prop::collection::vec(0i64..=20, 1..=5), 1..=3),
        pick in prop::collection::vec(any::<prop::sample::Index>(), 1..=6),
    ) {
        let k = bs.len();
        let full: Vec<i64> = int_sumset(&bs.iter().collect::<Vec<_>>()).into_iter().collect();
        let c: BTreeSet<i64> = pick.iter().map(|ix| full[ix.index(full.len())]).collect();
        let c: Vec<i64> = c.into_iter().collect();
        let r = verify_gymr(&a, &bs, &c).unwrap();
        let ac = int_sumset(&[&a, &c]).len() as u128;
        let rhs = (c.len() as u128).pow(k as u32 - 1)
            * bs.iter().map(|b| int_sumset(&[&a, b]).len() as u128).product::<u128>();
        prop_assert_eq!(r.report.lhs.clone(), ac.pow(k as u32).into());
        prop_assert_eq!(r.report.rhs.clone(), rhs.into());
        prop_assert!(r.holds());
        prop_assert!(r.embedded.holds());
    }

    #[test]
    fn marking_audit_passes(sets in prop::collection::vec(prop::collection::vec(-5i64..=15, 1..=4), 3..=3)) {
        let inst = SumsetInstance::integers(&sets).unwrap();
        let pairs = SetFamily::all_subsets_of_size(3, 2).unwrap();
        let w = marking_algorithm(&inst, &pairs, 2).unwrap();
        let audit = w.audit();
        prop_assert!(audit.passed(), "{:?}", audit);
        let total = int_sumset(&sets.iter().collect::<Vec<_>>()).len();
        prop_assert_eq!(w.sumset_size, total);
        prop_assert!(w.restricted_sumset.len() <= total);
    }

    #[test]
    fn torsion_free_additive_constants_exist(sets in int_sets(4)) {
        let inst = SumsetInstance::integers(&sets).unwrap();
        let r = conjecture_feasibility(&inst, Conjecture::Additive).unwrap();
        prop_assert!(r.is_feasible() && r.reverified());
    }
}

#[test]
fn abelian_extreme_products_coincide() {
    for g in small_groups().into_iter().filter(|g| g.ctx.is_commutative()) {
        let pool = &g.pool;
        let sets = vec![
            pool.iter().take(2).cloned().collect(),
            pool.iter().rev().take(3).cloned().collect(),
            vec![pool[pool.len() / 2].clone()],
        ];
        let inst = SumsetInstance::new(g.ctx.clone(), sets).unwrap();
        for a in SubsetMask::all_subsets(3) {
            let (big, small) = extreme_products(&inst, a).unwrap();
            assert_eq!(big, small, "{} {a}", g.name);
        }
    }
}

fn nonempty_subsets(pool: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    (1u32..(1 << pool.len()))
        .map(|bits| {
            (0..pool.len())
                .filter(|i| bits >> i & 1 == 1)
                .map(|i| pool[i].clone())
                .collect()
        })
        .collect()
}

#[test]
fn cauchy_davenport_for_small_primes() {
    for p in [2u64, 3, 5, 7] {
        let pool: Vec<Vec<i64>> = (0..p as i64).map(|v| vec![v]).collect();
        let subsets = nonempty_subsets(&pool);
        for s1 in &subsets {
            for s2 in &subsets {
                let inst = SumsetInstance::new(GroupContext::cyclic(p).unwrap(), vec![s1.clone(), s2.clone()]).unwrap();
                let r = verify_cauchy_davenport(&inst).unwrap();
                let direct: BTreeSet<i64> = s1
                    .iter()
                    .flat_map(|x| s2.iter().map(move |y| (x[0] + y[0]) % p as i64))
                    .collect();
                assert_eq!(r.sumset_size, direct.len());
                assert!(r.holds());
            }
        }
    }
}

#[test]
fn cauchy_davenport_for_catalog_groups() {
    for g in small_groups() {
        let subsets = nonempty_subsets(&g.pool);
        for s1 in &subsets {
            for s2 in &subsets {
                let inst = SumsetInstance::new(g.ctx.clone(), vec![s1.clone(), s2.clone()]).unwrap();
                let r = verify_cauchy_davenport(&inst).unwrap();
                assert!(r.holds(), "{} {s1:?} {s2:?}", g.name);
            }
        }
    }
}
