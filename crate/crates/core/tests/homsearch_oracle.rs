use proptest::prelude::*;

use liftshadow::canon::{canonical_key, is_isomorphic};
use liftshadow::homsearch::{all_homs, core_of, hom_equivalent, hom_exists, is_core};
use liftshadow::relcore::build::{clique, cycle, digraph, directed_cycle, path};
use liftshadow::relcore::{HomKind, HomMode, Structure};

/// Every map `a -> b`, tested against the definitions directly.
fn naive(a: &Structure, b: &Structure, kind: HomKind) -> usize {
    let (n, m) = (a.size(), b.size());
    let arcs_a: Vec<(usize, usize)> = a.relation(0).iter().map(|t| (t[0], t[1])).collect();
    let mut count = 0;
    let mut f = vec![0usize; n];
    if n > 0 && m == 0 {
        return 0;
    }
    loop {
        let preserves = arcs_a.iter().all(|&(x, y)| b.contains(0, &[f[x], f[y]]));
        let ok = preserves
            && match kind {
                HomKind::Plain => true,
                HomKind::Injective => (0..n).all(|x| (0..x).all(|y| f[x] != f[y])),
                HomKind::Full => (0..n).all(|x| (0..n).all(|y| !b.contains(0, &[f[x], f[y]]) || a.contains(0, &[x, y]))),
            };
        if ok {
            count += 1;
        }
        let mut i = 0;
        while i < n {
            f[i] += 1;
            if f[i] < m {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == n {
            return count;
        }
    }
}

fn arb_digraph(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let arcs: Vec<(usize, usize)> = (0..n * n).filter(|&i| bits[i]).map(|i| (i / n, i % n)).collect();
            digraph(n, &arcs)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn existence_matches_enumeration(a in arb_digraph(4), b in arb_digraph(4)) {
        for kind in [HomKind::Plain, HomKind::Injective, HomKind::Full] {
            let found = hom_exists(&a, &b, &HomMode::new(kind)).unwrap();
            prop_assert_eq!(found.is_some(), naive(&a, &b, kind) > 0, "{:?}", kind);
        }
    }

    #[test]
    fn enumeration_counts_match(a in arb_digraph(3), b in arb_digraph(3)) {
        for kind in [HomKind::Plain, HomKind::Injective, HomKind::Full] {
            let all = all_homs(&a, &b, &HomMode::new(kind)).unwrap();
            prop_assert_eq!(all.len(), naive(&a, &b, kind));
            let mut maps: Vec<_> = all.iter().map(|h| h.map.clone()).collect();
            let sorted = { let mut s = maps.clone(); s.sort(); s };
            prop_assert_eq!(&maps, &sorted);
            maps.dedup();
            prop_assert_eq!(maps.len(), all.len());
        }
    }

    #[test]
    fn core_is_an_equivalent_core(a in arb_digraph(5)) {
        let c = core_of(&a);
        prop_assert!(c.size() <= a.size());
        prop_assert!(hom_equivalent(&a, &c).unwrap());
        prop_assert!(is_core(&c));
    }

    #[test]
    fn canonical_key_ignores_relabeling(a in arb_digraph(5), seed in any::<u64>()) {
        let n = a.size();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let b = a.image(&perm, n);
        prop_assert_eq!(canonical_key(&a), canonical_key(&b));
        prop_assert!(is_isomorphic(&a, &b));
    }
}

#[test]
fn known_cores() {
    assert_eq!(core_of(&cycle(6)).size(), 2);
    assert_eq!(core_of(&cycle(5)).size(), 5);
    assert_eq!(core_of(&path(4)).size(), 2);
    assert!(is_isomorphic(&core_of(&clique(4)), &clique(4)));
    assert_eq!(core_of(&directed_cycle(6)).size(), 6);
}

#[test]
fn odd_cycles_need_three_colors() {
    assert!(hom_exists(&cycle(7), &clique(2), &HomMode::PLAIN).unwrap().is_none());
    assert!(hom_exists(&cycle(7), &clique(3), &HomMode::PLAIN).unwrap().is_some());
    assert!(hom_exists(&cycle(8), &clique(2), &HomMode::PLAIN).unwrap().is_some());
}
