//! The spine of a punctured single-vertex complex, the immersion of the
//! subdivided link into it, first homology classes of link cycles and short
//! cycle enumeration.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::complex::PE2Complex;
use crate::link::{Cycle, LinkGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpineError {
    #[error("walk is not closed or not connected at position {0}")]
    NotClosed(usize),
    #[error("link and spine come from different complexes")]
    Provenance,
    #[error("spine leg {0} out of range")]
    BadLeg(usize),
}

/// Identifies the complex a link or spine was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub edges: usize,
    pub faces: usize,
    pub fingerprint: u64,
}

impl Provenance {
    pub fn of(c: &PE2Complex) -> Self {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for e in c.edges() {
            e.id.hash(&mut h);
        }
        for f in c.faces() {
            f.id.hash(&mut h);
            for s in &f.boundary {
                (s.edge, s.forward).hash(&mut h);
            }
        }
        Provenance {
            edges: c.edges().len(),
            faces: c.faces().len(),
            fingerprint: h.finish(),
        }
    }
}

/// A spine edge from the barycentre of `face` to the barycentre of the edge
/// used by boundary step `step`. Legs are oriented face → edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Leg {
    pub face: usize,
    pub step: usize,
    pub edge: usize,
}

/// Nodes `0..n_type1` are edge barycentres, the rest face barycentres.
#[derive(Debug, Clone)]
pub struct SpineGraph {
    pub n_type1: usize,
    pub n_type2: usize,
    pub names: Vec<String>,
    pub legs: Vec<Leg>,
    pub in_tree: Vec<bool>,
    /// Non-tree legs in index order; these index the H1 coordinates.
    pub basis: Vec<usize>,
    basis_pos: Vec<Option<usize>>,
    leg_index: HashMap<(usize, usize), usize>,
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Tree parent of each node: `(leg, parent node)`.
    parent: Vec<Option<(usize, usize)>>,
    pub root_order: Vec<usize>,
    pub provenance: Provenance,
}

impl SpineGraph {
    pub fn node_count(&self) -> usize {
        self.n_type1 + self.n_type2
    }

    pub fn face_node(&self, face: usize) -> usize {
        self.n_type1 + face
    }

    pub fn leg(&self, face: usize, step: usize) -> usize {
        self.leg_index[&(face, step)]
    }

    pub fn h1_rank(&self) -> usize {
        self.basis.len()
    }

    pub fn components(&self) -> usize {
        self.root_order.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// `(tail, head)` of a leg in its face → edge orientation.
    pub fn leg_ends(&self, leg: usize) -> (usize, usize) {
        let l = self.legs[leg];
        (self.face_node(l.face), l.edge)
    }

    pub fn leg_name(&self, leg: usize) -> String {
        let (a, b) = self.leg_ends(leg);
        format!("{}->{}#{}", self.names[a], self.names[b], self.legs[leg].step)
    }

    /// Tree legs, named, in leg order.
    pub fn tree_description(&self) -> Vec<String> {
        (0..self.legs.len())
            .filter(|&l| self.in_tree[l])
            .map(|l| self.leg_name(l))
            .collect()
    }

    pub fn basis_position(&self, leg: usize) -> Option<usize> {
        self.basis_pos[leg]
    }

    /// Tree path from `from` up to the root of its component, as
    /// `(leg, forward)` steps with forward meaning face → edge.
    fn path_to_root(&self, mut from: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        while let Some((leg, p)) = self.parent[from] {
            let (t, _) = self.leg_ends(leg);
            out.push((leg, t == from));
            from = p;
        }
        out
    }

    /// Tree geodesic from `a` to `b` (same component).
    pub fn tree_path(&self, a: usize, b: usize) -> Vec<(usize, bool)> {
        let mut up = self.path_to_root(a);
        let mut down = self.path_to_root(b);
        while let (Some(x), Some(y)) = (up.last(), down.last()) {
            if x.0 == y.0 {
                up.pop();
                down.pop();
            } else {
                break;
            }
        }
        up.extend(down.into_iter().rev().map(|(l, f)| (l, !f)));
        up
    }

    /// Closed walk made of one non-tree leg and its tree geodesic.
    pub fn fundamental_cycle(&self, leg: usize) -> Vec<(usize, bool)> {
        let (t, h) = self.leg_ends(leg);
        let mut w = vec![(leg, true)];
        w.extend(self.tree_path(h, t));
        w
    }
}

pub fn build_spine(c: &PE2Complex) -> SpineGraph {
    let n1 = c.edges().len();
    let n2 = c.faces().len();
    let mut names: Vec<String> = c.edges().iter().map(|e| format!("e:{}", e.id)).collect();
    names.extend(c.faces().iter().map(|f| format!("f:{}", f.id)));
    let mut legs = Vec::new();
    let mut leg_index = HashMap::new();
    let mut adjacency = vec![Vec::new(); n1 + n2];
    for (fi, f) in c.faces().iter().enumerate() {
        for (si, s) in f.boundary.iter().enumerate() {
            let id = legs.len();
            legs.push(Leg {
                face: fi,
                step: si,
                edge: s.edge,
            });
            leg_index.insert((fi, si), id);
            adjacency[n1 + fi].push((id, s.edge));
            adjacency[s.edge].push((id, n1 + fi));
        }
    }
    for a in &mut adjacency {
        a.sort_by(|x, y| names[x.1].cmp(&names[y.1]).then(x.0.cmp(&y.0)));
    }
    let mut order: Vec<usize> = (0..n1 + n2).collect();
    order.sort_by(|&a, &b| (a >= n1).cmp(&(b >= n1)).then(names[a].cmp(&names[b])));

    let mut in_tree = vec![false; legs.len()];
    let mut parent = vec![None; n1 + n2];
    let mut seen = vec![false; n1 + n2];
    let mut roots = Vec::new();
    for &r in &order {
        if seen[r] {
            continue;
        }
        roots.push(r);
        seen[r] = true;
        let mut q = VecDeque::from([r]);
        while let Some(u) = q.pop_front() {
            for &(leg, w) in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    in_tree[leg] = true;
                    parent[w] = Some((leg, u));
                    q.push_back(w);
                }
            }
        }
    }
    let basis: Vec<usize> = (0..legs.len()).filter(|&l| !in_tree[l]).collect();
    let mut basis_pos = vec![None; legs.len()];
    for (i, &l) in basis.iter().enumerate() {
        basis_pos[l] = Some(i);
    }
    SpineGraph {
        n_type1: n1,
        n_type2: n2,
        names,
        legs,
        in_tree,
        basis,
        basis_pos,
        leg_index,
        adjacency,
        parent,
        root_order: roots,
        provenance: Provenance::of(c),
    }
}

/// Signed count of non-tree leg crossings of a closed walk.
pub fn h1_class(spine: &SpineGraph, walk: &[(usize, bool)]) -> Result<Vec<i64>, SpineError> {
    check_closed(spine, walk)?;
    let mut v = vec![0i64; spine.h1_rank()];
    for &(leg, fwd) in walk {
        if let Some(p) = spine.basis_position(leg) {
            v[p] += if fwd { 1 } else { -1 };
        }
    }
    Ok(v)
}

fn check_closed(spine: &SpineGraph, walk: &[(usize, bool)]) -> Result<(), SpineError> {
    let ends = |(leg, fwd): (usize, bool)| -> Result<(usize, usize), SpineError> {
        if leg >= spine.legs.len() {
            return Err(SpineError::BadLeg(leg));
        }
        let (t, h) = spine.leg_ends(leg);
        Ok(if fwd { (t, h) } else { (h, t) })
    };
    for i in 0..walk.len() {
        let (_, end) = ends(walk[i])?;
        let (start, _) = ends(walk[(i + 1) % walk.len()])?;
        if end != start {
            return Err(SpineError::NotClosed(i));
        }
    }
    Ok(())
}

/// Sum of per-leg values along a walk, negated on backward steps.
pub fn cochain_sum(values: &[i64], walk: &[(usize, bool)]) -> i64 {
    walk.iter()
        .map(|&(l, f)| if f { values[l] } else { -values[l] })
        .sum()
}

/// Map from the barycentric subdivision of a link into the spine.
///
/// Domain nodes `0..link.nodes.len()` are link nodes; node
/// `link.nodes.len() + e` is the midpoint of link edge `e`. Domain edge
/// `2e + s` joins `link.edges[e].ends[s]` to that midpoint.
#[derive(Debug, Clone)]
pub struct GraphMorphism {
    pub domain_nodes: usize,
    pub domain_edges: Vec<(usize, usize)>,
    pub node_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub immersion: bool,
    pub incidence_ok: bool,
}

pub fn link_to_spine(c: &PE2Complex, link: &LinkGraph, spine: &SpineGraph) -> Result<GraphMorphism, SpineError> {
    if Provenance::of(c) != spine.provenance {
        return Err(SpineError::Provenance);
    }
    let nl = link.nodes.len();
    let mut node_map: Vec<usize> = link.nodes.iter().map(|n| n.edge).collect();
    let mut domain_edges = Vec::with_capacity(2 * link.edges.len());
    let mut edge_map = Vec::with_capacity(2 * link.edges.len());
    for (ei, le) in link.edges.iter().enumerate() {
        let f = &c.faces()[le.face];
        let m = f.boundary.len();
        node_map.push(spine.face_node(le.face));
        let prev = (le.corner + m - 1) % m;
        for (s, step) in [(0, prev), (1, le.corner)] {
            domain_edges.push((le.ends[s], nl + ei));
            edge_map.push(spine.leg(le.face, step));
        }
    }
    let mut incidence_ok = true;
    for (de, &(a, mid)) in domain_edges.iter().enumerate() {
        let (t, h) = spine.leg_ends(edge_map[de]);
        if node_map[a] != h || node_map[mid] != t {
            incidence_ok = false;
        }
    }
    let mut star: Vec<Vec<usize>> = vec![Vec::new(); nl + link.edges.len()];
    for (de, &(a, mid)) in domain_edges.iter().enumerate() {
        star[a].push(edge_map[de]);
        star[mid].push(edge_map[de]);
    }
    let immersion = star.iter_mut().all(|s| {
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    });
    Ok(GraphMorphism {
        domain_nodes: nl + link.edges.len(),
        domain_edges,
        node_map,
        edge_map,
        immersion,
        incidence_ok,
    })
}

impl GraphMorphism {
    /// Image in the spine of a link path traversing `edges` starting at
    /// node `start`.
    pub fn image_of_path(&self, link: &LinkGraph, start: usize, edges: &[usize]) -> Vec<(usize, bool)> {
        let mut out = Vec::with_capacity(2 * edges.len());
        let mut at = start;
        for &e in edges {
            let [a, _] = link.edges[e].ends;
            let (first, second) = if a == at { (0, 1) } else { (1, 0) };
            out.push((self.edge_map[2 * e + first], false));
            out.push((self.edge_map[2 * e + second], true));
            at = link.other_end(e, at);
        }
        out
    }

    pub fn image_of_cycle(&self, link: &LinkGraph, cycle: &Cycle) -> Vec<(usize, bool)> {
        self.image_of_path(link, cycle.nodes[0], &cycle.edges)
    }
}

/// True iff some type-1 image node has exactly one preimage among the walk's
/// nodes (counted with multiplicity).
pub fn hnt_check(walk_nodes: &[usize], morphism: &GraphMorphism) -> bool {
    let mut count: HashMap<usize, usize> = HashMap::new();
    for &n in walk_nodes {
        *count.entry(morphism.node_map[n]).or_default() += 1;
    }
    count.values().any(|&c| c == 1)
}

/// All simple cycles with at most `max_len` edges, each once up to rotation
/// and reflection. Each cycle starts at its smallest node.
pub fn enumerate_short_cycles(link: &LinkGraph, max_len: usize) -> Vec<Cycle> {
    let mut out = Vec::new();
    let n = link.nodes.len();
    let mut on_path = vec![false; n];
    for s in 0..n {
        let mut nodes = vec![s];
        let mut edges = Vec::new();
        on_path[s] = true;
        extend(link, s, max_len, &mut nodes, &mut edges, &mut on_path, &mut out);
        on_path[s] = false;
    }
    out
}

fn extend(
    link: &LinkGraph,
    s: usize,
    max_len: usize,
    nodes: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
) {
    let u = *nodes.last().unwrap();
    for &(e, w) in link.neighbours(u) {
        if edges.last() == Some(&e) {
            continue;
        }
        if w == s {
            let len = edges.len() + 1;
            let keep = match len {
                1 => true,
                _ => edges[0] < e,
            };
            if keep && len <= max_len {
                let mut es = edges.clone();
                es.push(e);
                out.push(Cycle {
                    nodes: nodes.clone(),
                    edges: es,
                });
            }
            continue;
        }
        if w < s || on_path[w] || edges.len() + 1 >= max_len {
            continue;
        }
        on_path[w] = true;
        nodes.push(w);
        edges.push(e);
        extend(link, s, max_len, nodes, edges, on_path, out);
        edges.pop();
        nodes.pop();
        on_path[w] = false;
    }
}

/// Cycles formed by the link edges joining two ends of non-horizontal
/// edges. Returns one cycle per component that is a cycle, and the number
/// of components that are not.
pub fn middle_edge_cycles(link: &LinkGraph, horizontal: &dyn Fn(usize) -> bool) -> (Vec<Cycle>, usize) {
    let middle = |e: usize| {
        let [a, b] = link.edges[e].ends;
        !horizontal(link.nodes[a].edge) && !horizontal(link.nodes[b].edge)
    };
    let n = link.nodes.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    let mut other = 0;
    for s in 0..n {
        if seen[s] || horizontal(link.nodes[s].edge) {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &(e, w) in link.neighbours(u) {
                if middle(e) && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        let degree = |u: usize| link.neighbours(u).iter().filter(|&&(e, _)| middle(e)).count();
        if comp.len() < 2 || comp.iter().any(|&u| degree(u) != 2) {
            other += 1;
            continue;
        }
        let mut nodes = vec![s];
        let mut edges = Vec::new();
        let mut at = s;
        let mut last = usize::MAX;
        loop {
            let &(e, w) = link
                .neighbours(at)
                .iter()
                .find(|&&(e, _)| middle(e) && e != last)
                .unwrap();
            edges.push(e);
            if w == s {
                break;
            }
            nodes.push(w);
            last = e;
            at = w;
        }
        if nodes.len() == comp.len() {
            cycles.push(Cycle { nodes, edges });
        } else {
            other += 1;
        }
    }
    (cycles, other)
}

/// DOT rendering with boxes for edge barycentres and circles for faces.
pub fn spine_to_dot(spine: &SpineGraph) -> String {
    let mut s = String::from("graph \"spine\" {\n");
    for (i, n) in spine.names.iter().enumerate() {
        let shape = if i < spine.n_type1 { "box" } else { "ellipse" };
        s.push_str(&format!("  \"{n}\" [shape={shape}];\n"));
    }
    for (l, _) in spine.legs.iter().enumerate() {
        let (a, b) = spine.leg_ends(l);
        let style = if spine.in_tree[l] { "bold" } else { "dashed" };
        s.push_str(&format!(
            "  \"{}\" -- \"{}\" [style={style}];\n",
            spine.names[a], spine.names[b]
        ));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::build_link;
    use crate::templates::{build_xk, one_vertex_triangle};

    #[test]
    fn tripod_spine() {
        let c = one_vertex_triangle();
        let s = build_spine(&c);
        assert_eq!((s.n_type1, s.n_type2, s.legs.len()), (3, 1, 3));
        assert_eq!(s.h1_rank(), 0);
        assert_eq!(s.degree(s.face_node(0)), 3);
    }

    #[test]
    fn xk_spine_counts() {
        for k in 1..=3 {
            let s = build_spine(&build_xk(k));
            assert_eq!(s.n_type1, 8 * k + 8);
            assert_eq!(s.n_type2, 16 * k);
            assert_eq!(s.legs.len(), 48 * k);
            assert_eq!(s.components(), 1);
            assert_eq!(s.h1_rank(), 48 * k - (24 * k + 8) + 1);
        }
    }

    #[test]
    fn classes_of_tree_and_fundamental_walks() {
        let s = build_spine(&build_xk(1));
        let tree_walk: Vec<(usize, bool)> = {
            let l = (0..s.legs.len()).find(|&l| s.in_tree[l]).unwrap();
            vec![(l, true), (l, false)]
        };
        assert!(h1_class(&s, &tree_walk).unwrap().iter().all(|&x| x == 0));
        for (i, &b) in s.basis.iter().enumerate() {
            let v = h1_class(&s, &s.fundamental_cycle(b)).unwrap();
            let mut unit = vec![0; s.h1_rank()];
            unit[i] = 1;
            assert_eq!(v, unit);
        }
        assert!(h1_class(&s, &[(s.basis[0], true)]).is_err());
    }

    #[test]
    fn iota_is_immersion() {
        let c = build_xk(2);
        let l = build_link(&c, "v").unwrap();
        let s = build_spine(&c);
        let m = link_to_spine(&c, &l, &s).unwrap();
        assert!(m.immersion && m.incidence_ok);
        let other = build_xk(1);
        assert!(link_to_spine(&other, &l, &s).is_err());
    }

    #[test]
    fn short_cycles_of_template() {
        let l = build_link(&build_xk(1), "v").unwrap();
        let cycles = enumerate_short_cycles(&l, 6);
        assert!(cycles.iter().all(|c| c.len() == 4 || c.len() == 6));
        assert_eq!(cycles.iter().filter(|c| c.len() == 4).count(), 8);
    }

    #[test]
    fn doubled_triangle_fails_hnt() {
        let m = GraphMorphism {
            domain_nodes: 6,
            domain_edges: vec![],
            node_map: vec![0, 1, 2, 0, 1, 2],
            edge_map: vec![],
            immersion: true,
            incidence_ok: true,
        };
        assert!(!hnt_check(&[0, 1, 2, 3, 4, 5], &m));
        assert!(hnt_check(&[0, 1, 2, 3, 4], &m));
    }
}
