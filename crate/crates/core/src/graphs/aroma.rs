use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::tree::{Forest, RootedTree};

/// A connected functional graph: one directed cycle with a forest hanging off
/// each cycle vertex. `decorations[i]` hangs off cycle vertex `i`, whose cycle
/// edge points to vertex `i + 1 (mod k)`. The rotation is chosen to minimize
/// the sequence of forest encodings.
#[derive(Clone)]
pub struct Aroma {
    decorations: Vec<Forest>,
    order: usize,
    enc: String,
}

impl Aroma {
    pub fn new(decorations: Vec<Forest>) -> Self {
        assert!(!decorations.is_empty(), "an aroma has a cycle of length at least 1");
        let k = decorations.len();
        let encs: Vec<String> = decorations.iter().map(|f| f.encode_raw()).collect();
        let best = (0..k)
            .min_by(|&a, &b| {
                (0..k)
                    .map(|i| &encs[(a + i) % k])
                    .cmp((0..k).map(|i| &encs[(b + i) % k]))
            })
            .unwrap();
        let decorations: Vec<Forest> = (0..k).map(|i| decorations[(best + i) % k].clone()).collect();
        let order = k + decorations.iter().map(|f| f.size()).sum::<usize>();
        let enc = format!(
            "C{}({})",
            k,
            (0..k).map(|i| encs[(best + i) % k].as_str()).collect::<Vec<_>>().join(";")
        );
        Aroma { decorations, order, enc }
    }

    /// The bare cycle of length `k`.
    pub fn cycle(k: usize) -> Self {
        Self::new(vec![Forest::empty(); k])
    }

    /// The self-loop.
    pub fn self_loop() -> Self {
        Self::cycle(1)
    }

    pub fn cycle_length(&self) -> usize {
        self.decorations.len()
    }

    pub fn decorations(&self) -> &[Forest] {
        &self.decorations
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn encode(&self) -> &str {
        &self.enc
    }

    pub fn is_bare_cycle(&self) -> bool {
        self.decorations.iter().all(|f| f.is_empty())
    }

    pub fn has_self_loop(&self) -> bool {
        self.decorations.len() == 1
    }

    /// Largest total indegree, counting the incoming cycle edge.
    pub fn max_indegree(&self) -> usize {
        self.decorations
            .iter()
            .map(|f| (f.len() + 1).max(f.max_indegree()))
            .max()
            .unwrap()
    }

    /// Number of rotations of the cycle that fix the decorations.
    pub fn rotation_symmetry(&self) -> u64 {
        let k = self.decorations.len();
        (0..k)
            .filter(|&r| (0..k).all(|i| self.decorations[i] == self.decorations[(i + r) % k]))
            .count() as u64
    }

    pub fn symmetry(&self) -> u64 {
        self.rotation_symmetry() * self.decorations.iter().map(|f| f.symmetry()).product::<u64>()
    }

    /// Builds the canonical aroma of a connected functional graph `map[v] = successor`.
    /// Returns `None` if the graph is not connected.
    pub fn from_map(map: &[usize]) -> Option<Aroma> {
        let n = map.len();
        if n == 0 {
            return None;
        }
        let mut seen = vec![false; n];
        let mut v = 0;
        while !seen[v] {
            seen[v] = true;
            v = map[v];
        }
        let mut cycle = vec![v];
        let mut w = map[v];
        while w != v {
            cycle.push(w);
            w = map[w];
        }
        let mut on_cycle = vec![false; n];
        for &c in &cycle {
            on_cycle[c] = true;
        }
        let mut preimages = vec![Vec::new(); n];
        for (u, &t) in map.iter().enumerate() {
            if !on_cycle[u] {
                preimages[t].push(u);
            }
        }
        fn build(v: usize, pre: &[Vec<usize>], count: &mut usize) -> RootedTree {
            *count += 1;
            RootedTree::new(pre[v].iter().map(|&u| build(u, pre, count)).collect())
        }
        let mut count = cycle.len();
        let decorations = cycle
            .iter()
            .map(|&c| Forest::new(preimages[c].iter().map(|&u| build(u, &preimages, &mut count)).collect()))
            .collect();
        (count == n).then(|| Aroma::new(decorations))
    }

    /// A vertex labelling of this aroma as a functional graph.
    pub fn to_map(&self) -> Vec<usize> {
        let k = self.decorations.len();
        let mut map: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        fn push_tree(t: &RootedTree, parent: usize, map: &mut Vec<usize>) {
            let me = map.len();
            map.push(parent);
            for c in t.children() {
                push_tree(c, me, map);
            }
        }
        for (i, f) in self.decorations.iter().enumerate() {
            for t in f.trees() {
                push_tree(t, i, &mut map);
            }
        }
        map
    }
}

impl PartialEq for Aroma {
    fn eq(&self, other: &Self) -> bool {
        self.enc == other.enc
    }
}

impl Eq for Aroma {}

impl Hash for Aroma {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.enc.hash(state)
    }
}

impl PartialOrd for Aroma {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Aroma {
    fn cmp(&self, other: &Self) -> Ordering {
        self.enc.cmp(&other.enc)
    }
}

impl fmt::Debug for Aroma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.enc)
    }
}

impl fmt::Display for Aroma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.enc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf_forest() -> Forest {
        Forest::new(vec![RootedTree::leaf()])
    }

    #[test]
    fn small_encodings() {
        assert_eq!(Aroma::self_loop().encode(), "C1()");
        assert_eq!(Aroma::cycle(2).encode(), "C2(;)");
        let tailed = Aroma::new(vec![leaf_forest(), Forest::empty()]);
        assert_eq!(tailed.encode(), "C2(;[])");
        assert_eq!(tailed, Aroma::new(vec![Forest::empty(), leaf_forest()]));
    }

    #[test]
    fn rotation_is_idempotent() {
        let a = Aroma::new(vec![leaf_forest(), Forest::empty(), Forest::new(vec![RootedTree::tall(2)])]);
        let b = Aroma::new(a.decorations().to_vec());
        assert_eq!(a.encode(), b.encode());
        assert_eq!(a.decorations(), b.decorations());
    }

    #[test]
    fn golden_symmetries() {
        assert_eq!(Aroma::cycle(3).symmetry(), 3);
        assert_eq!(Aroma::new(vec![leaf_forest(), Forest::empty()]).symmetry(), 1);
        assert_eq!(Aroma::self_loop().symmetry(), 1);
    }

    #[test]
    fn indegree_counts_the_cycle_edge() {
        assert_eq!(Aroma::self_loop().max_indegree(), 1);
        let two_tails = Aroma::new(vec![Forest::new(vec![RootedTree::leaf(), RootedTree::leaf()])]);
        assert_eq!(two_tails.max_indegree(), 3);
    }

    #[test]
    fn map_round_trip() {
        let a = Aroma::new(vec![leaf_forest(), Forest::new(vec![RootedTree::tall(2), RootedTree::leaf()])]);
        assert_eq!(Aroma::from_map(&a.to_map()), Some(a));
        assert_eq!(Aroma::from_map(&[0, 1]), None);
    }
}
