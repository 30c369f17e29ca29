use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use projent::set_families::{
    compare, compresses_to, cover_profile, elementary_compression, is_uniform_k_cover,
    minimal_compression, potential, trim_to_uniform, Comparison, SetFamily, SubsetMask,
};

/// Plain-vector model of a family: sorted members, each a sorted element list.
type Model = Vec<Vec<usize>>;

fn canon(mut m: Model) -> Model {
    for s in m.iter_mut() {
        s.sort_unstable();
    }
    m.retain(|s| !s.is_empty());
    m.sort();
    m
}

fn model_of(f: &SetFamily) -> Model {
    canon(f.to_sets())
}

/// Every family reachable from `start` by elementary compressions, by plain
/// depth-first search over sorted vectors.
fn reachable(start: Model) -> HashSet<Model> {
    let mut seen = HashSet::new();
    let mut stack = vec![canon(start)];
    while let Some(state) = stack.pop() {
        if !seen.insert(state.clone()) {
            continue;
        }
        for i in 0..state.len() {
            for j in (i + 1)..state.len() {
                let a: BTreeSet<usize> = state[i].iter().copied().collect();
                let b: BTreeSet<usize> = state[j].iter().copied().collect();
                if a.is_subset(&b) || b.is_subset(&a) {
                    continue;
                }
                let mut next = state.clone();
                next[i] = a.intersection(&b).copied().collect();
                next[j] = a.union(&b).copied().collect();
                stack.push(canon(next));
            }
        }
    }
    seen
}

fn family_strategy(n: usize, max_members: usize) -> impl Strategy<Value = SetFamily> {
    prop::collection::vec(1u32..(1u32 << n), 1..=max_members).prop_map(move |bits| {
        SetFamily::new(n, bits.into_iter().map(SubsetMask::from_bits).collect()).unwrap()
    })
}

fn sized_family() -> impl Strategy<Value = SetFamily> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(n, m)| family_strategy(n, m))
}

/// All multisets of `m` non-empty subsets of `[n]`.
fn all_families(n: usize, m: usize) -> Vec<SetFamily> {
    let masks: Vec<u32> = (1..(1u32 << n)).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(masks: &[u32], start: usize, m: usize, n: usize, cur: &mut Vec<u32>, out: &mut Vec<SetFamily>) {
        if cur.len() == m {
            out.push(SetFamily::new(n, cur.iter().map(|&b| SubsetMask::from_bits(b)).collect()).unwrap());
            return;
        }
        for i in start..masks.len() {
            cur.push(masks[i]);
            rec(masks, i, m, n, cur, out);
            cur.pop();
        }
    }
    rec(&masks, 0, m, n, &mut current, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn compression_raises_potential_and_keeps_profile(f in sized_family()) {
        let members = f.members();
        for i in 0..members.len() {
            for j in 0..members.len() {
                let (a, b) = (members[i], members[j]);
                if i == j || a.is_subset(b) || b.is_subset(a) {
                    prop_assert!(elementary_compression(&f, i + 1, j + 1).is_err());
                    continue;
                }
                let g = elementary_compression(&f, i + 1, j + 1).unwrap();
                prop_assert!(potential(&g) > potential(&f));
                prop_assert_eq!(cover_profile(&g), cover_profile(&f));
                let expected_len = if a.intersection(b).is_empty() { f.len() - 1 } else { f.len() };
                prop_assert_eq!(g.len(), expected_len);
            }
        }
    }

    #[test]
    fn sharp_is_a_chain_and_idempotent(f in sized_family()) {
        let sharp = minimal_compression(&f);
        prop_assert!(sharp.is_chain());
        prop_assert_eq!(cover_profile(&sharp), cover_profile(&f));
        prop_assert_eq!(minimal_compression(&sharp), sharp.clone());
        prop_assert!(potential(&sharp) >= potential(&f));
    }

    #[test]
    fn search_agrees_with_reachability_oracle(f in family_strategy(4, 4), g in family_strategy(4, 4)) {
        let reach = reachable(model_of(&f));
        let expected = reach.contains(&model_of(&g));
        prop_assert_eq!(compresses_to(&f, &g).unwrap(), expected);
        let via_sharp = minimal_compression(&f);
        prop_assert!(reach.contains(&model_of(&via_sharp)));
    }

    #[test]
    fn compression_order_has_no_cycles(f in family_strategy(4, 5)) {
        for g in reachable(model_of(&f)) {
            let g = SetFamily::from_sets(4, g).unwrap();
            match compare(&f, &g).unwrap() {
                Comparison::Equal => prop_assert_eq!(&g, &f),
                Comparison::Compresses => {
                    prop_assert_eq!(compare(&g, &f).unwrap(), Comparison::Incomparable)
                }
                Comparison::Incomparable => prop_assert!(false, "oracle-reachable state missed"),
            }
        }
    }

    #[test]
    fn trimming_yields_a_uniform_cover(f in sized_family()) {
        let k = cover_profile(&f).min();
        prop_assume!(k >= 1);
        let t = trim_to_uniform(&f, k).unwrap();
        prop_assert!(is_uniform_k_cover(&t, k));
        prop_assert!(t.len() <= f.len());
        for (i, m) in t.members().iter().enumerate() {
            prop_assert!(f.members().iter().any(|orig| m.is_subset(*orig)), "member {} not a subset", i);
        }
    }
}

#[test]
fn every_small_family_compresses_to_its_sharp() {
    let mut checked = 0;
    for (n, max_m) in [(1, 6), (2, 6), (3, 6), (4, 3)] {
        for m in 1..=max_m {
            for f in all_families(n, m) {
                let sharp = minimal_compression(&f);
                assert!(compresses_to(&f, &sharp).unwrap(), "{f} does not reach {sharp}");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn uniform_covers_compress_to_copies_of_the_ground_set() {
    for n in 1..=4 {
        for k in 1..=3 {
            for f in all_families(n, k + 1).into_iter().chain(all_families(n, k)) {
                if is_uniform_k_cover(&f, k) {
                    let full = SetFamily::repeated(n, SubsetMask::full(n), k).unwrap();
                    assert_eq!(minimal_compression(&f), full);
                }
            }
        }
    }
}
