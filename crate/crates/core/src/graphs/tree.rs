use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// A rooted tree in canonical form: children sorted by encoding.
#[derive(Clone)]
pub struct RootedTree {
    children: Vec<RootedTree>,
    size: usize,
    enc: String,
}

impl RootedTree {
    pub fn leaf() -> Self {
        RootedTree { children: Vec::new(), size: 1, enc: "[]".to_string() }
    }

    pub fn new(mut children: Vec<RootedTree>) -> Self {
        children.sort();
        let size = 1 + children.iter().map(|c| c.size).sum::<usize>();
        let mut enc = String::with_capacity(2 * size);
        enc.push('[');
        for c in &children {
            enc.push_str(&c.enc);
        }
        enc.push(']');
        RootedTree { children, size, enc }
    }

    /// The chain with `order` vertices.
    pub fn tall(order: usize) -> Self {
        assert!(order >= 1, "a tree has at least one vertex");
        let mut t = Self::leaf();
        for _ in 1..order {
            t = Self::new(vec![t]);
        }
        t
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self) -> &str {
        &self.enc
    }

    pub fn is_tall(&self) -> bool {
        match self.children.as_slice() {
            [] => true,
            [c] => c.is_tall(),
            _ => false,
        }
    }

    /// Largest number of children at any vertex.
    pub fn max_indegree(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.max_indegree())
            .max()
            .unwrap_or(0)
            .max(self.children.len())
    }

    /// Order of the automorphism group.
    pub fn symmetry(&self) -> u64 {
        group_symmetry(&self.children, |t| t.symmetry())
    }
}

/// Product over runs of equal items of `sigma(item)^m * m!`; `items` sorted.
pub(crate) fn group_symmetry<T: PartialEq>(items: &[T], sigma: impl Fn(&T) -> u64) -> u64 {
    let mut acc = 1u64;
    let mut i = 0;
    while i < items.len() {
        let mut j = i + 1;
        while j < items.len() && items[j] == items[i] {
            j += 1;
        }
        let m = (j - i) as u64;
        let s = sigma(&items[i]);
        for k in 1..=m {
            acc *= s * k;
        }
        i = j;
    }
    acc
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.enc == other.enc
    }
}

impl Eq for RootedTree {}

impl Hash for RootedTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.enc.hash(state)
    }
}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.enc.cmp(&other.enc)
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.enc)
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.enc)
    }
}

/// A multiset of rooted trees. The empty forest is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Forest {
    trees: Vec<RootedTree>,
}

impl Forest {
    pub fn empty() -> Self {
        Forest { trees: Vec::new() }
    }

    pub fn new(mut trees: Vec<RootedTree>) -> Self {
        trees.sort();
        Forest { trees }
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.trees
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn size(&self) -> usize {
        self.trees.iter().map(|t| t.size()).sum()
    }

    /// Concatenated tree encodings; empty for the empty forest.
    pub fn encode_raw(&self) -> String {
        self.trees.iter().map(|t| t.encode()).collect()
    }

    /// Standalone encoding, with "1" for the empty forest.
    pub fn encode(&self) -> String {
        if self.trees.is_empty() {
            "1".to_string()
        } else {
            self.encode_raw()
        }
    }

    pub fn symmetry(&self) -> u64 {
        group_symmetry(&self.trees, |t| t.symmetry())
    }

    pub fn max_indegree(&self) -> usize {
        self.trees.iter().map(|t| t.max_indegree()).max().unwrap_or(0)
    }

    pub fn union(&self, other: &Forest) -> Forest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Forest::new(trees)
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tall_tree_of_three() {
        let t = RootedTree::tall(3);
        assert_eq!(t.encode(), "[[[]]]");
        assert_eq!(t.symmetry(), 1);
        assert!(t.is_tall());
    }

    #[test]
    fn cherry_has_symmetry_two() {
        let cherry = RootedTree::new(vec![RootedTree::leaf(), RootedTree::leaf()]);
        assert_eq!(cherry.encode(), "[[][]]");
        assert_eq!(cherry.symmetry(), 2);
        assert!(!cherry.is_tall());
        assert_eq!(cherry.max_indegree(), 2);
    }

    #[test]
    fn children_are_sorted_by_encoding() {
        let a = RootedTree::new(vec![RootedTree::leaf(), RootedTree::tall(2)]);
        let b = RootedTree::new(vec![RootedTree::tall(2), RootedTree::leaf()]);
        assert_eq!(a, b);
        assert_eq!(a.encode(), "[[[]][]]");
    }

    #[test]
    fn forest_symmetry_counts_identical_trees() {
        let f = Forest::new(vec![RootedTree::leaf(), RootedTree::leaf(), RootedTree::tall(2)]);
        assert_eq!(f.symmetry(), 2);
        assert_eq!(Forest::empty().encode(), "1");
    }
}
