use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::aroma::Aroma;
use super::tree::group_symmetry;

/// A product of aromas. The empty product is the unit and encodes as "1".
#[derive(Clone)]
pub struct AromaMultiset {
    aromas: Vec<Aroma>,
    order: usize,
    enc: String,
}

impl AromaMultiset {
    pub fn unit() -> Self {
        Self::new(Vec::new())
    }

    pub fn new(mut aromas: Vec<Aroma>) -> Self {
        aromas.sort();
        let order = aromas.iter().map(|a| a.order()).sum();
        let enc = if aromas.is_empty() {
            "1".to_string()
        } else {
            aromas.iter().map(|a| a.encode()).collect::<Vec<_>>().join("*")
        };
        AromaMultiset { aromas, order, enc }
    }

    pub fn single(a: Aroma) -> Self {
        Self::new(vec![a])
    }

    pub fn aromas(&self) -> &[Aroma] {
        &self.aromas
    }

    pub fn is_unit(&self) -> bool {
        self.aromas.is_empty()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn encode(&self) -> &str {
        &self.enc
    }

    pub fn symmetry(&self) -> u64 {
        group_symmetry(&self.aromas, |a| a.symmetry())
    }

    /// Distinct aromas with their multiplicities, in canonical order.
    pub fn groups(&self) -> Vec<(Aroma, usize)> {
        let mut out: Vec<(Aroma, usize)> = Vec::new();
        for a in &self.aromas {
            match out.last_mut() {
                Some((b, m)) if b == a => *m += 1,
                _ => out.push((a.clone(), 1)),
            }
        }
        out
    }

    pub fn max_indegree(&self) -> usize {
        self.aromas.iter().map(|a| a.max_indegree()).max().unwrap_or(0)
    }

    pub fn has_self_loop(&self) -> bool {
        self.aromas.iter().any(|a| a.has_self_loop())
    }

    pub fn is_product_of_cycles(&self) -> bool {
        self.aromas.iter().all(|a| a.is_bare_cycle())
    }

    pub fn multiply(&self, other: &AromaMultiset) -> AromaMultiset {
        let mut a = self.aromas.clone();
        a.extend(other.aromas.iter().cloned());
        AromaMultiset::new(a)
    }

    /// Basis order: by graph order, then by encoding.
    pub fn basis_cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&other.order).then_with(|| self.enc.cmp(&other.enc))
    }

    /// Builds the canonical multiset of an arbitrary functional graph.
    pub fn from_map(map: &[usize]) -> AromaMultiset {
        let n = map.len();
        // union-find over the undirected edges
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], v: usize) -> usize {
            let mut r = v;
            while p[r] != r {
                r = p[r];
            }
            let mut v = v;
            while p[v] != r {
                let next = p[v];
                p[v] = r;
                v = next;
            }
            r
        }
        for (v, &w) in map.iter().enumerate() {
            let (a, b) = (find(&mut parent, v), find(&mut parent, w));
            if a != b {
                parent[a] = b;
            }
        }
        let mut components: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..n {
            let r = find(&mut parent, v);
            components.entry(r).or_default().push(v);
        }
        let aromas = components
            .values()
            .map(|vs| {
                let index = |v: usize| vs.binary_search(&v).unwrap();
                let local: Vec<usize> = vs.iter().map(|&v| index(map[v])).collect();
                Aroma::from_map(&local).expect("component is connected")
            })
            .collect();
        AromaMultiset::new(aromas)
    }

    pub fn to_map(&self) -> Vec<usize> {
        let mut map = Vec::with_capacity(self.order);
        for a in &self.aromas {
            let off = map.len();
            map.extend(a.to_map().into_iter().map(|v| v + off));
        }
        map
    }
}

impl PartialEq for AromaMultiset {
    fn eq(&self, other: &Self) -> bool {
        self.enc == other.enc
    }
}

impl Eq for AromaMultiset {}

impl Hash for AromaMultiset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.enc.hash(state)
    }
}

impl PartialOrd for AromaMultiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by graph order, then encoding.
impl Ord for AromaMultiset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.basis_cmp(other)
    }
}

impl fmt::Debug for AromaMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.enc)
    }
}

impl fmt::Display for AromaMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.enc)
    }
}
