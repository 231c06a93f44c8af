use chevpoly::heap::{heap_of_word, Heap};
use chevpoly::{CartanType, RootDatum, Weight, WeylWord};
use proptest::prelude::*;

const TYPES: &[&str] = &["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "F4", "E6"];

fn datum(i: usize) -> RootDatum {
    RootDatum::new(TYPES[i % TYPES.len()].parse::<CartanType>().unwrap())
}

fn brute_extensions(h: &Heap) -> u128 {
    let n = h.size();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    permute(&mut perm, 0, &mut |p| {
        // p[0] is placed first and must be maximal among the rest
        let ok = (0..n).all(|a| (a + 1..n).all(|b| !h.gt(p[b], p[a])));
        if ok {
            count += 1;
        }
    });
    count
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

fn brute_morphisms(h: &Heap, m: usize) -> u128 {
    // all labelings in {0..=m}^n, keep the order-preserving ones
    let n = h.size();
    let total = (m + 1).pow(n as u32);
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let vals: Vec<usize> = (0..n)
            .map(|_| {
                let v = c % (m + 1);
                c /= m + 1;
                v
            })
            .collect();
        if (0..n).all(|p| (0..n).all(|q| !h.gt(p, q) || vals[p] >= vals[q])) {
            count += 1;
        }
    }
    count
}

fn random_poset() -> impl Strategy<Value = Heap> {
    (1usize..=8).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut rel = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        rel.push((i, j));
                    }
                    k += 1;
                }
            }
            Heap::from_relations(vec![0; n], &rel).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflections_are_involutions(t in 0usize..TYPES.len(), seed in proptest::collection::vec(-4i64..5, 8), i in 0usize..8) {
        let d = datum(t);
        let w = Weight(seed[..d.rank()].to_vec());
        let i = i % d.rank();
        let once = d.apply_reflection(i, &w).unwrap();
        prop_assert_eq!(d.apply_reflection(i, &once).unwrap(), w.clone());
        let simple: Vec<i64> = (0..d.rank()).map(|k| i64::from(k == i)).collect();
        prop_assert_eq!(d.pairing(&once, &simple), -d.pairing(&w, &simple));
    }

    #[test]
    fn commuting_swaps_keep_the_heap(t in 0usize..TYPES.len(), node in 0usize..8, pick in any::<prop::sample::Index>(), at in any::<prop::sample::Index>()) {
        let d = datum(t);
        let node = node % d.rank();
        let wp = d.minimal_coset_word(&[node].into()).unwrap();
        let words = d.reduced_words(&wp, 200).unwrap();
        let w = pick.get(&words);
        let letters = w.positions().to_vec();
        let h = heap_of_word(&d, w).unwrap();
        if letters.len() >= 2 {
            let p = at.index(letters.len() - 1);
            if d.commute(letters[p], letters[p + 1]) {
                let mut swapped = letters.clone();
                swapped.swap(p, p + 1);
                let h2 = heap_of_word(&d, &WeylWord::from_positions(swapped)).unwrap();
                prop_assert!(h.is_isomorphic(&h2));
                prop_assert_eq!(h.count_linear_extensions(), h2.count_linear_extensions());
            }
        }
    }

    #[test]
    fn linear_extensions_match_brute_force(h in random_poset()) {
        prop_assert_eq!(h.count_linear_extensions(), brute_extensions(&h));
    }

    #[test]
    fn morphism_counts_match_brute_force(h in random_poset(), m in 0usize..4) {
        prop_assert_eq!(h.poset_morphism_count(m), brute_morphisms(&h, m));
    }

    #[test]
    fn filters_are_upward_closed(h in random_poset()) {
        let fs = h.filters();
        prop_assert_eq!(fs.len() as u128, h.poset_morphism_count(1));
        for f in &fs {
            prop_assert!(h.is_filter(f.0));
        }
    }

    #[test]
    fn heap_json_round_trip(h in random_poset()) {
        let back = Heap::from_json(&h.to_json()).unwrap();
        prop_assert!(back.is_isomorphic(&h));
        prop_assert_eq!(back.size(), h.size());
    }
}

#[test]
fn minuscule_words_share_one_heap() {
    for t in ["A3", "A4", "B2", "B3", "C3", "D4", "D5", "E6"] {
        let d = RootDatum::new(t.parse::<CartanType>().unwrap());
        for k in d.minuscule_nodes() {
            let wp = d.minimal_coset_word(&[k].into()).unwrap();
            let words = d.reduced_words(&wp, 5000).unwrap();
            let h0 = heap_of_word(&d, &words[0]).unwrap();
            for w in &words[1..] {
                assert!(
                    heap_of_word(&d, w).unwrap().is_isomorphic(&h0),
                    "{t} node {} word {w}",
                    k + 1
                );
            }
        }
    }
}
