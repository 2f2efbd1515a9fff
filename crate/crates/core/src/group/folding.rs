//! Stallings folding of a bouquet of words.

use std::collections::{BTreeSet, HashMap};

use super::word::FreeWord;

/// A folded labelled graph with base vertex 0. Edges are `(from, gen, to)`
/// and are read backwards with inverse letters.
#[derive(Debug, Clone)]
pub struct FoldedGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, u32, usize)>,
    out: HashMap<(usize, u32, bool), usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
}

impl FoldedGraph {
    pub fn fold(words: &[FreeWord]) -> FoldedGraph {
        let mut n = 1usize;
        let mut edges = Vec::new();
        for w in words {
            let letters: Vec<(u32, i8)> = w.letters().collect();
            let mut cur = 0usize;
            for (i, &(g, s)) in letters.iter().enumerate() {
                let next = if i + 1 == letters.len() {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                if s > 0 {
                    edges.push((cur, g, next));
                } else {
                    edges.push((next, g, cur));
                }
                cur = next;
            }
        }
        let mut uf = UnionFind((0..n).collect());
        loop {
            let mut changed = false;
            let mut seen: HashMap<(usize, u32, bool), usize> = HashMap::new();
            for &(u, g, w) in &edges {
                for (from, to, fwd) in [(u, w, true), (w, u, false)] {
                    let (a, b) = (uf.find(from), uf.find(to));
                    match seen.get(&(a, g, fwd)) {
                        Some(&t) => {
                            let t = uf.find(t);
                            if t != b {
                                uf.0[t.max(b)] = t.min(b);
                                changed = true;
                            }
                        }
                        None => {
                            seen.insert((a, g, fwd), b);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut set = BTreeSet::new();
        for &(u, g, w) in &edges {
            set.insert((uf.find(u), g, uf.find(w)));
        }
        let mut roots: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
        roots.sort_unstable();
        roots.dedup();
        let index: HashMap<usize, usize> = roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let edges: Vec<(usize, u32, usize)> = set.into_iter().map(|(u, g, w)| (index[&u], g, index[&w])).collect();
        let mut out = HashMap::new();
        for &(u, g, w) in &edges {
            out.insert((u, g, true), w);
            out.insert((w, g, false), u);
        }
        FoldedGraph {
            vertices: roots.len(),
            edges,
            out,
        }
    }

    /// Rank of the subgroup carried by the graph.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    /// Whether `w` lies in the subgroup (reads as a closed path at the base).
    pub fn accepts(&self, w: &FreeWord) -> bool {
        let mut cur = 0usize;
        for (g, s) in w.letters() {
            match self.out.get(&(cur, g, s > 0)) {
                Some(&next) => cur = next,
                None => return false,
            }
        }
        cur == 0
    }
}

/// Whether the words are a free basis of the subgroup they generate.
pub fn is_free_basis(words: &[FreeWord]) -> bool {
    if words.iter().any(FreeWord::is_identity) {
        return false;
    }
    FoldedGraph::fold(words).rank() == words.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bases_and_dependent_sets() {
        let ab = FreeWord::from_runs([(0, 1), (1, 1)]);
        let baa = FreeWord::from_runs([(1, 1), (0, 2)]);
        assert!(is_free_basis(&[ab.clone(), baa.clone()]));
        let a = FreeWord::gen(0);
        assert!(!is_free_basis(&[a.clone(), FreeWord::gen_pow(0, 2)]));
        assert!(!is_free_basis(&[a.clone(), FreeWord::gen(1), ab.clone()]));
        assert!(!is_free_basis(&[FreeWord::identity()]));
        let g = FoldedGraph::fold(&[ab.clone(), baa.clone()]);
        assert!(g.accepts(&ab.mul(&baa.inverse())));
        assert!(!g.accepts(&a));
    }
}
