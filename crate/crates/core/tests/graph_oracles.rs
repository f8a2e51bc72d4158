//! Brute-force checks of the graph enumeration and symmetry counts.

use kahan_aromas::graphs::{
    enumerate_aromas, enumerate_multisets, enumerate_trees, parse_multiset, parse_tree, Aroma, AromaMultiset,
};
use proptest::prelude::*;

fn all_maps(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = code % n;
                code /= n;
                d
            })
            .collect()
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn connected(map: &[usize]) -> bool {
    let n = map.len();
    let mut adj = vec![Vec::new(); n];
    for (v, &w) in map.iter().enumerate() {
        adj[v].push(w);
        adj[w].push(v);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn isomorphic(a: &[usize], b: &[usize], perms: &[Vec<usize>]) -> bool {
    perms.iter().any(|p| (0..a.len()).all(|v| p[a[v]] == b[p[v]]))
}

fn automorphisms(map: &[usize], perms: &[Vec<usize>]) -> u64 {
    perms.iter().filter(|p| (0..map.len()).all(|v| p[map[v]] == map[p[v]])).count() as u64
}

/// Isomorphism classes of connected endomaps, deduplicated by explicit
/// permutation search rather than by any canonical form.
fn connected_classes(n: usize) -> Vec<Vec<usize>> {
    let perms = permutations(n);
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for m in all_maps(n).filter(|m| connected(m)) {
        if !reps.iter().any(|r| isomorphic(r, &m, &perms)) {
            reps.push(m);
        }
    }
    reps
}

#[test]
fn aroma_counts_match_brute_force_through_order_five() {
    for n in 1..=5 {
        let classes = connected_classes(n);
        let aromas = enumerate_aromas(n).unwrap();
        assert_eq!(aromas.len(), classes.len(), "order {n}");
        let mut from_classes: Vec<Aroma> = classes.iter().map(|m| Aroma::from_map(m).unwrap()).collect();
        from_classes.sort();
        assert_eq!(from_classes, aromas, "order {n}");
    }
    let expected = [1, 2, 4, 9, 20];
    for (n, &e) in (1..=5).zip(&expected) {
        assert_eq!(enumerate_aromas(n).unwrap().len(), e);
    }
}

#[test]
fn order_six_matches_canonical_dedup_of_all_maps() {
    let mut set = std::collections::BTreeSet::new();
    for m in all_maps(6).filter(|m| connected(m)) {
        set.insert(Aroma::from_map(&m).unwrap());
    }
    assert_eq!(enumerate_aromas(6).unwrap(), set.into_iter().collect::<Vec<_>>());
}

#[test]
fn symmetry_matches_automorphism_count_through_order_five() {
    for n in 1..=5 {
        let perms = permutations(n);
        for a in enumerate_aromas(n).unwrap() {
            assert_eq!(a.symmetry(), automorphisms(&a.to_map(), &perms), "{a}");
        }
    }
    for m in enumerate_multisets(5, None) {
        let perms = permutations(m.order());
        assert_eq!(m.symmetry(), automorphisms(&m.to_map(), &perms), "{m}");
    }
}

#[test]
fn tree_counts_match_brute_force() {
    // rooted trees on n vertices as parent maps with a distinguished root
    for n in 1..=5 {
        let perms = permutations(n);
        let mut reps: Vec<Vec<usize>> = Vec::new();
        for m in all_maps(n) {
            // vertex 0 is the root, marked by a self-loop; all others must reach it
            if m[0] != 0 || (1..n).any(|v| m[v] == v) {
                continue;
            }
            let acyclic = (1..n).all(|v| {
                let mut w = v;
                for _ in 0..n {
                    w = m[w];
                }
                w == 0
            });
            if !acyclic {
                continue;
            }
            let fixes_root: Vec<Vec<usize>> = perms.iter().filter(|p| p[0] == 0).cloned().collect();
            if !reps.iter().any(|r| isomorphic(r, &m, &fixes_root)) {
                reps.push(m);
            }
        }
        assert_eq!(enumerate_trees(n).unwrap().len(), reps.len(), "order {n}");
    }
}

#[test]
fn golden_symmetries() {
    assert_eq!(AromaMultiset::unit().symmetry(), 1);
    assert_eq!(parse_multiset("C3(;;)").unwrap().symmetry(), 3);
    assert_eq!(parse_multiset("C2(;[])").unwrap().symmetry(), 1);
    assert_eq!(parse_multiset("C2(;)*C2(;)").unwrap().symmetry(), 8);
}

#[test]
fn tailed_two_cycle_encoding_is_pinned() {
    assert_eq!(parse_multiset("C2([];)").unwrap().encode(), "C2(;[])");
}

#[test]
fn encodings_are_idempotent_up_to_order_six() {
    for m in enumerate_multisets(6, None) {
        let again = parse_multiset(m.encode()).unwrap();
        assert_eq!(again.encode(), m.encode());
    }
    for n in 1..=6 {
        for t in enumerate_trees(n).unwrap() {
            assert_eq!(parse_tree(t.encode()).unwrap().encode(), t.encode());
        }
    }
}

fn arb_aroma() -> impl Strategy<Value = Aroma> {
    (1usize..6).prop_flat_map(|n| {
        let aromas = enumerate_aromas(n).unwrap();
        (0..aromas.len()).prop_map(move |i| aromas[i].clone())
    })
}

proptest! {
    #[test]
    fn multiset_symmetry_law(a in arb_aroma(), b in arb_aroma(), m in 1usize..4) {
        let sa = AromaMultiset::single(a.clone());
        let sb = AromaMultiset::single(b.clone());
        if a != b {
            prop_assert_eq!(sa.multiply(&sb).symmetry(), a.symmetry() * b.symmetry());
        }
        let power = AromaMultiset::new(vec![a.clone(); m]);
        let fact: u64 = (1..=m as u64).product();
        prop_assert_eq!(power.symmetry(), a.symmetry().pow(m as u32) * fact);
    }

    #[test]
    fn relabelling_preserves_the_canonical_form(a in arb_aroma(), seed in 0u64..1000) {
        use rand::{seq::SliceRandom, SeedableRng};
        let map = a.to_map();
        let mut perm: Vec<usize> = (0..map.len()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let mut relabelled = vec![0; map.len()];
        for v in 0..map.len() {
            relabelled[perm[v]] = perm[map[v]];
        }
        prop_assert_eq!(Aroma::from_map(&relabelled), Some(a));
    }
}
