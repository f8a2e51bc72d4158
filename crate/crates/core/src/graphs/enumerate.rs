use std::collections::BTreeSet;

use super::aroma::Aroma;
use super::multiset::AromaMultiset;
use super::tree::{Forest, RootedTree};
use crate::error::{Error, Result};

/// Trees grouped by vertex count: `out[m]` holds the trees with `m` vertices.
fn trees_by_order(max: usize) -> Vec<Vec<RootedTree>> {
    let mut out: Vec<Vec<RootedTree>> = vec![Vec::new(); max + 1];
    for m in 1..=max {
        let mut trees: Vec<RootedTree> = forests_from(&out, m - 1).into_iter().map(|f| RootedTree::new(f.trees().to_vec())).collect();
        trees.sort();
        out[m] = trees;
    }
    out
}

/// Forests of exactly `size` vertices, built from the trees in `by_order`.
fn forests_from(by_order: &[Vec<RootedTree>], size: usize) -> Vec<Forest> {
    let flat: Vec<&RootedTree> = by_order.iter().take(size + 1).flatten().collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec<'a>(flat: &[&'a RootedTree], start: usize, left: usize, stack: &mut Vec<&'a RootedTree>, out: &mut Vec<Forest>) {
        if left == 0 {
            out.push(Forest::new(stack.iter().map(|t| (*t).clone()).collect()));
            return;
        }
        for i in start..flat.len() {
            if flat[i].size() <= left {
                stack.push(flat[i]);
                rec(flat, i, left - flat[i].size(), stack, out);
                stack.pop();
            }
        }
    }
    rec(&flat, 0, size, &mut stack, &mut out);
    out
}

pub fn enumerate_trees(order: usize) -> Result<Vec<RootedTree>> {
    if order < 1 {
        return Err(Error::InvalidOrder { min: 1, got: order });
    }
    Ok(trees_by_order(order).swap_remove(order))
}

pub fn tall_tree(order: usize) -> Result<RootedTree> {
    if order < 1 {
        return Err(Error::InvalidOrder { min: 1, got: order });
    }
    Ok(RootedTree::tall(order))
}

/// All forests with exactly `size` vertices, sorted by encoding.
pub fn enumerate_forests(size: usize) -> Vec<Forest> {
    let by_order = trees_by_order(size);
    let mut f = forests_from(&by_order, size);
    f.sort_by_key(|f| f.encode_raw());
    f
}

/// One representative per isomorphism class of connected functional graphs
/// with `order` vertices, sorted by encoding.
pub fn enumerate_aromas(order: usize) -> Result<Vec<Aroma>> {
    if order < 1 {
        return Err(Error::InvalidOrder { min: 1, got: order });
    }
    let by_order = trees_by_order(order);
    let forests: Vec<Vec<Forest>> = (0..order).map(|s| forests_from(&by_order, s)).collect();
    let mut set = BTreeSet::new();
    for k in 1..=order {
        let mut choice: Vec<Forest> = Vec::with_capacity(k);
        fn rec(k: usize, left: usize, forests: &[Vec<Forest>], choice: &mut Vec<Forest>, set: &mut BTreeSet<Aroma>) {
            if choice.len() == k - 1 {
                for f in &forests[left] {
                    choice.push(f.clone());
                    set.insert(Aroma::new(choice.clone()));
                    choice.pop();
                }
                return;
            }
            for s in 0..=left {
                for f in &forests[s] {
                    choice.push(f.clone());
                    rec(k, left - s, forests, choice, set);
                    choice.pop();
                }
            }
        }
        rec(k, order - k, &forests, &mut choice, &mut set);
    }
    Ok(set.into_iter().collect())
}

/// All aroma multisets of order at most `max_order`, including the unit,
/// sorted by (order, encoding). With `max_indegree`, multisets with a vertex
/// of larger total indegree are dropped.
pub fn enumerate_multisets(max_order: usize, max_indegree: Option<usize>) -> Vec<AromaMultiset> {
    let mut aromas: Vec<Aroma> = Vec::new();
    for o in 1..=max_order {
        aromas.extend(enumerate_aromas(o).unwrap());
    }
    if let Some(d) = max_indegree {
        aromas.retain(|a| a.max_indegree() <= d);
    }
    let mut out = Vec::new();
    let mut stack: Vec<Aroma> = Vec::new();
    fn rec(aromas: &[Aroma], start: usize, left: usize, stack: &mut Vec<Aroma>, out: &mut Vec<AromaMultiset>) {
        out.push(AromaMultiset::new(stack.clone()));
        for i in start..aromas.len() {
            if aromas[i].order() <= left {
                stack.push(aromas[i].clone());
                rec(aromas, i, left - aromas[i].order(), stack, out);
                stack.pop();
            }
        }
    }
    rec(&aromas, 0, max_order, &mut stack, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_trees(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20]);
        assert!(enumerate_trees(0).is_err());
    }

    #[test]
    fn aroma_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_aromas(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 9]);
        let two: Vec<String> = enumerate_aromas(2).unwrap().iter().map(|a| a.encode().to_string()).collect();
        assert_eq!(two, vec!["C1([])", "C2(;)"]);
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(enumerate_multisets(1, None).len(), 2);
        assert_eq!(enumerate_multisets(2, None).len(), 5);
        assert_eq!(enumerate_multisets(3, None).len(), 12);
        assert_eq!(enumerate_multisets(0, None), vec![AromaMultiset::unit()]);
    }

    #[test]
    fn quadratic_filter_drops_indegree_three() {
        let all = enumerate_multisets(3, None);
        let kept = enumerate_multisets(3, Some(2));
        assert_eq!(all.len() - kept.len(), 1);
        assert!(!kept.iter().any(|m| m.encode() == "C1([][])"));
    }

    #[test]
    fn multisets_are_sorted_by_order_then_encoding() {
        let ms = enumerate_multisets(4, None);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }
}
