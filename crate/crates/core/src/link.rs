//! Vertex links with angle weights, the link condition, link distances and
//! ultra-convexity.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::complex::{
    common_denominator, format_ratio, serde_angle, serde_angle_opt, Angle, ComplexError,
    PE2Complex, Subcomplex1,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinkError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("unknown link node {0}")]
    UnknownNode(String),
    #[error("malformed DOT input at line {line}: {msg}")]
    Dot { line: usize, msg: String },
}

/// `Minus` is the tail end of an edge, `Plus` the head end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Plus => "+",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinkNode {
    pub edge: usize,
    pub sign: Sign,
}

/// The link edge contributed by corner `corner` of `face`. `ends[0]` is the
/// end of the previous boundary step, `ends[1]` the start of step `corner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkEdge {
    pub face: usize,
    pub corner: usize,
    pub ends: [usize; 2],
    pub weight: Angle,
}

#[derive(Debug, Clone)]
pub struct LinkGraph {
    pub vertex: usize,
    pub vertex_name: String,
    pub nodes: Vec<LinkNode>,
    pub edges: Vec<LinkEdge>,
    node_names: Vec<String>,
    face_names: Vec<String>,
    node_index: HashMap<(usize, Sign), usize>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

pub fn end_node(forward: bool) -> Sign {
    if forward {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

pub fn start_node(forward: bool) -> Sign {
    if forward {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

pub fn build_link(c: &PE2Complex, v: &str) -> Result<LinkGraph, LinkError> {
    let vi = c.vertex_id(v)?;
    Ok(build_link_at(c, vi))
}

pub fn build_link_at(c: &PE2Complex, vi: usize) -> LinkGraph {
    let mut nodes = Vec::new();
    let mut node_names = Vec::new();
    let mut node_index = HashMap::new();
    for (ei, e) in c.edges().iter().enumerate() {
        for (at, sign) in [(e.tail, Sign::Minus), (e.head, Sign::Plus)] {
            if at == vi {
                node_index.insert((ei, sign), nodes.len());
                nodes.push(LinkNode { edge: ei, sign });
                node_names.push(format!("{}{}", e.id, sign));
            }
        }
    }
    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for (fi, f) in c.faces().iter().enumerate() {
        let m = f.boundary.len();
        for i in 0..m {
            let step = f.boundary[i];
            if c.step_start(step) != vi {
                continue;
            }
            let prev = f.boundary[(i + m - 1) % m];
            let a = node_index[&(prev.edge, end_node(prev.forward))];
            let b = node_index[&(step.edge, start_node(step.forward))];
            let id = edges.len();
            edges.push(LinkEdge {
                face: fi,
                corner: i,
                ends: [a, b],
                weight: f.angles[i],
            });
            adjacency[a].push((id, b));
            if a != b {
                adjacency[b].push((id, a));
            }
        }
    }
    LinkGraph {
        vertex: vi,
        vertex_name: c.vertices()[vi].clone(),
        nodes,
        edges,
        node_names,
        face_names: c.faces().iter().map(|f| f.id.clone()).collect(),
        node_index,
        adjacency,
    }
}

impl LinkGraph {
    pub fn node_name(&self, n: usize) -> &str {
        &self.node_names[n]
    }

    pub fn node(&self, edge: usize, sign: Sign) -> Option<usize> {
        self.node_index.get(&(edge, sign)).copied()
    }

    pub fn node_by_name(&self, name: &str) -> Result<usize, LinkError> {
        self.node_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LinkError::UnknownNode(name.to_string()))
    }

    /// `(edge id, neighbour)` pairs.
    pub fn neighbours(&self, n: usize) -> &[(usize, usize)] {
        &self.adjacency[n]
    }

    pub fn other_end(&self, edge: usize, from: usize) -> usize {
        let [a, b] = self.edges[edge].ends;
        if a == from {
            b
        } else {
            a
        }
    }

    pub fn edge_label(&self, e: usize) -> String {
        let le = &self.edges[e];
        format!(
            "{}@{} ({})",
            self.face_names[le.face],
            le.corner,
            format_ratio(&le.weight)
        )
    }

    /// Unit of the integer weights returned by [`Self::integer_weights`],
    /// as a fraction of π.
    pub fn weight_unit(&self) -> i64 {
        common_denominator(self.edges.iter().map(|e| &e.weight))
    }

    pub fn integer_weights(&self) -> Vec<u64> {
        let d = self.weight_unit();
        self.edges
            .iter()
            .map(|e| (e.weight * d).to_integer() as u64)
            .collect()
    }

    /// Two-colouring of the nodes if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut colour: Vec<Option<bool>> = vec![None; self.nodes.len()];
        for s in 0..self.nodes.len() {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = colour[u].unwrap();
                for &(_, w) in &self.adjacency[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_connected(&self) -> bool {
        self.components_of(&|_| true) <= 1
    }

    /// Number of connected components using only edges accepted by `keep`.
    pub fn components_of(&self, keep: &dyn Fn(usize) -> bool) -> usize {
        let mut seen = vec![false; self.nodes.len()];
        let mut count = 0;
        for s in 0..self.nodes.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(e, w) in &self.adjacency[u] {
                    if keep(e) && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Copy without the link edges rejected by `keep`.
    pub fn filter_edges(&self, keep: &dyn Fn(usize) -> bool) -> LinkGraph {
        let mut g = self.clone();
        g.edges.clear();
        for a in &mut g.adjacency {
            a.clear();
        }
        for (i, e) in self.edges.iter().enumerate() {
            if !keep(i) {
                continue;
            }
            let id = g.edges.len();
            g.edges.push(e.clone());
            let [a, b] = e.ends;
            g.adjacency[a].push((id, b));
            if a != b {
                g.adjacency[b].push((id, a));
            }
        }
        g
    }
}

/// A simple cycle given by its nodes and the edges joining consecutive nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    #[serde(with = "serde_angle")]
    pub length: Angle,
    pub cycle: Cycle,
    pub node_names: Vec<String>,
}

/// Dijkstra from `src` ignoring edge `skip`, abandoning paths of weight
/// `>= limit`. Returns the distance to `dst` and the edge path.
fn bounded_path(
    link: &LinkGraph,
    w: &[u64],
    src: usize,
    dst: usize,
    skip: Option<usize>,
    limit: u64,
) -> Option<(u64, Vec<usize>)> {
    let n = link.nodes.len();
    let mut dist = vec![u64::MAX; n];
    let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0;
    heap.push(Reverse((0u64, src)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == dst {
            let mut path = Vec::new();
            let mut x = dst;
            while let Some((e, p)) = via[x] {
                path.push(e);
                x = p;
            }
            path.reverse();
            return Some((d, path));
        }
        for &(e, y) in &link.adjacency[u] {
            if Some(e) == skip {
                continue;
            }
            let nd = d + w[e];
            if nd < limit && nd < dist[y] {
                dist[y] = nd;
                via[y] = Some((e, u));
                heap.push(Reverse((nd, y)));
            }
        }
    }
    None
}

fn shortest_cycle_with(link: &LinkGraph, w: &[u64]) -> Option<(u64, Cycle)> {
    let mut best: Option<(u64, Cycle)> = None;
    for (id, e) in link.edges.iter().enumerate() {
        let [a, b] = e.ends;
        let bound = best.as_ref().map_or(u64::MAX, |(l, _)| *l);
        if w[id] >= bound {
            continue;
        }
        if a == b {
            best = Some((
                w[id],
                Cycle {
                    nodes: vec![a],
                    edges: vec![id],
                },
            ));
            continue;
        }
        if let Some((d, path)) = bounded_path(link, w, b, a, Some(id), bound - w[id]) {
            let mut nodes = vec![b];
            let mut x = b;
            for &pe in &path {
                x = link.other_end(pe, x);
                nodes.push(x);
            }
            debug_assert_eq!(x, a);
            let mut edges = path;
            edges.push(id);
            best = Some((d + w[id], Cycle { nodes, edges }));
        }
    }
    best
}

/// Minimal total angle over all simple cycles, with a witness.
///
/// For each edge `(u, w)` the shortest `w → u` path avoiding that edge is a
/// simple path, so closing it with the edge gives a simple cycle; the minimum
/// over all edges is the weighted girth.
pub fn shortest_injective_cycle(link: &LinkGraph) -> Option<CycleWitness> {
    let unit = link.weight_unit();
    let w = link.integer_weights();
    shortest_cycle_with(link, &w).map(|(len, cycle)| CycleWitness {
        length: Ratio::new(len as i64, unit),
        node_names: cycle.nodes.iter().map(|&n| link.node_name(n).to_string()).collect(),
        cycle,
    })
}

/// Girth counted in edges.
pub fn combinatorial_girth(link: &LinkGraph) -> Option<usize> {
    let w = vec![1u64; link.edges.len()];
    shortest_cycle_with(link, &w).map(|(l, _)| l as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexGirth {
    pub vertex: String,
    #[serde(with = "serde_angle_opt")]
    pub girth: Option<Angle>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NpcCertificate {
    pub pass: bool,
    pub strict: bool,
    pub vertices: Vec<VertexGirth>,
    pub failure: Option<(String, CycleWitness)>,
}

/// Link condition at every vertex: pass iff all injective link cycles have
/// length ≥ 2π, strict iff all are > 2π.
pub fn check_npc(c: &PE2Complex) -> NpcCertificate {
    let two = Ratio::from_integer(2);
    let mut cert = NpcCertificate {
        pass: true,
        strict: true,
        vertices: Vec::new(),
        failure: None,
    };
    for vi in 0..c.vertices().len() {
        let link = build_link_at(c, vi);
        let w = shortest_injective_cycle(&link);
        let girth = w.as_ref().map(|w| w.length);
        if let Some(g) = girth {
            if g <= two {
                cert.strict = false;
            }
            if g < two {
                cert.pass = false;
                if cert.failure.is_none() {
                    cert.failure = Some((link.vertex_name.clone(), w.unwrap()));
                }
            }
        }
        cert.vertices.push(VertexGirth {
            vertex: link.vertex_name.clone(),
            girth,
        });
    }
    if !cert.pass {
        cert.strict = false;
    }
    cert
}

/// Exact pairwise distances (in units of π) between `points`; `None` means
/// the pair lies in different components.
pub fn link_distance_matrix(link: &LinkGraph, points: &[usize]) -> Result<Vec<Vec<Option<Angle>>>, LinkError> {
    if let Some(p) = points.iter().find(|&&p| p >= link.nodes.len()) {
        return Err(LinkError::UnknownNode(format!("#{p}")));
    }
    let unit = link.weight_unit();
    let w = link.integer_weights();
    let mut out = Vec::with_capacity(points.len());
    for &p in points {
        let dist = single_source(link, &w, p);
        out.push(
            points
                .iter()
                .map(|&q| (dist[q] != u64::MAX).then(|| Ratio::new(dist[q] as i64, unit)))
                .collect(),
        );
    }
    Ok(out)
}

fn single_source(link: &LinkGraph, w: &[u64], src: usize) -> Vec<u64> {
    let mut dist = vec![u64::MAX; link.nodes.len()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0;
    heap.push(Reverse((0u64, src)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(e, y) in &link.adjacency[u] {
            let nd = d + w[e];
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Reverse((nd, y)));
            }
        }
    }
    dist
}

/// Unweighted distances, counted in link edges.
pub fn hop_distances(link: &LinkGraph, src: usize) -> Vec<Option<usize>> {
    let w = vec![1u64; link.edges.len()];
    single_source(link, &w, src)
        .into_iter()
        .map(|d| (d != u64::MAX).then_some(d as usize))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointDistance {
    pub a: String,
    pub b: String,
    #[serde(with = "serde_angle_opt")]
    pub distance: Option<Angle>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UltraConvexCertificate {
    pub pass: bool,
    pub pairs: Vec<PointDistance>,
    #[serde(with = "serde_angle_opt")]
    pub min_distance: Option<Angle>,
}

/// Pass iff at each rose vertex the link points of the rose edges are
/// pairwise at least 2π apart.
pub fn check_ultraconvex(c: &PE2Complex, rose: &Subcomplex1) -> Result<UltraConvexCertificate, LinkError> {
    rose.check(c)?;
    let two = Ratio::from_integer(2);
    let mut cert = UltraConvexCertificate {
        pass: true,
        pairs: Vec::new(),
        min_distance: None,
    };
    for v in &rose.vertices {
        let link = build_link(c, v)?;
        let mut points = Vec::new();
        for e in &rose.edges {
            let ei = c.edge_id(e)?;
            for s in [Sign::Minus, Sign::Plus] {
                if let Some(n) = link.node(ei, s) {
                    points.push(n);
                }
            }
        }
        let m = link_distance_matrix(&link, &points)?;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let d = m[i][j];
                if let Some(d) = d {
                    if d < two {
                        cert.pass = false;
                    }
                    cert.min_distance = Some(cert.min_distance.map_or(d, |x| x.min(d)));
                }
                cert.pairs.push(PointDistance {
                    a: link.node_name(points[i]).to_string(),
                    b: link.node_name(points[j]).to_string(),
                    distance: d,
                });
            }
        }
    }
    Ok(cert)
}

/// Plain graph read back from DOT: node names and labelled edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DotGraph {
    pub name: String,
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

impl LinkGraph {
    pub fn to_dot_graph(&self) -> DotGraph {
        DotGraph {
            name: format!("link_{}", self.vertex_name),
            nodes: self.node_names.clone(),
            edges: (0..self.edges.len())
                .map(|e| {
                    let [a, b] = self.edges[e].ends;
                    (
                        self.node_names[a].clone(),
                        self.node_names[b].clone(),
                        self.edge_label(e),
                    )
                })
                .collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        self.to_dot_graph().render()
    }
}

impl DotGraph {
    pub fn render(&self) -> String {
        let mut s = format!("graph \"{}\" {{\n", self.name);
        for n in &self.nodes {
            s.push_str(&format!("  \"{n}\";\n"));
        }
        for (a, b, l) in &self.edges {
            s.push_str(&format!("  \"{a}\" -- \"{b}\" [label=\"{l}\"];\n"));
        }
        s.push_str("}\n");
        s
    }

    /// Parses the subset of DOT produced by [`DotGraph::render`].
    pub fn parse(text: &str) -> Result<DotGraph, LinkError> {
        let mut g = DotGraph::default();
        let quoted = |s: &str, line: usize| -> Result<Vec<String>, LinkError> {
            let parts: Vec<&str> = s.split('"').collect();
            if parts.len() % 2 == 0 {
                return Err(LinkError::Dot {
                    line,
                    msg: "unbalanced quotes".into(),
                });
            }
            Ok(parts.iter().skip(1).step_by(2).map(|p| p.to_string()).collect())
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l == "}" {
                continue;
            }
            let q = quoted(l, line)?;
            if l.starts_with("graph ") {
                g.name = q.first().cloned().unwrap_or_default();
            } else if l.contains(" -- ") {
                if q.len() != 3 {
                    return Err(LinkError::Dot {
                        line,
                        msg: "edge needs two endpoints and a label".into(),
                    });
                }
                g.edges.push((q[0].clone(), q[1].clone(), q[2].clone()));
            } else if q.len() == 1 {
                g.nodes.push(q[0].clone());
            } else {
                return Err(LinkError::Dot {
                    line,
                    msg: "unrecognised statement".into(),
                });
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::templates::{build_gamma_squares, build_xk, one_vertex_triangle, pillow};

    #[test]
    fn isolated_vertex_has_empty_link() {
        let mut b = crate::complex::ComplexBuilder::new();
        b.vertex("v").unwrap();
        let c = b.finish();
        let l = build_link(&c, "v").unwrap();
        assert!(l.nodes.is_empty() && l.edges.is_empty());
        assert!(shortest_injective_cycle(&l).is_none());
        assert!(build_link(&c, "w").is_err());
    }

    #[test]
    fn xk_link_counts() {
        for k in 1..=3 {
            let l = build_link(&build_xk(k), "v").unwrap();
            assert_eq!(l.nodes.len(), 16 * k + 16);
            assert_eq!(l.edges.len(), 48 * k);
            assert!(l.bipartition().is_some());
        }
    }

    #[test]
    fn xk_link_girth_comes_from_four_cycles() {
        let l = build_link(&build_xk(1), "v").unwrap();
        let w = shortest_injective_cycle(&l).unwrap();
        assert_eq!(w.length, Ratio::new(4, 3));
        assert_eq!(w.cycle.len(), 4);
        assert_eq!(combinatorial_girth(&l), Some(4));
    }

    #[test]
    fn template_link_adjacencies() {
        let x = build_xk(1);
        let l = build_link(&x, "v").unwrap();
        let adjacent = |a: &str, b: &str| {
            let (a, b) = (l.node_by_name(a).unwrap(), l.node_by_name(b).unwrap());
            l.neighbours(a).iter().any(|&(_, w)| w == b)
        };
        assert!(adjacent("a_8-", "n_{1,1}+"));
        assert!(adjacent("a_8-", "n_{3,1}-"));
        assert!(adjacent("a_1+", "p_{1,1}+"));
        assert!(adjacent("a_1+", "p_{3,1}-"));
    }

    #[test]
    fn square_gamma_is_flat_npc() {
        for k in 1..=3 {
            let cert = check_npc(&build_gamma_squares(k));
            assert!(cert.pass, "k={k}");
            assert!(!cert.strict);
            assert_eq!(cert.vertices[0].girth, Some(Ratio::from_integer(2)));
        }
    }

    #[test]
    fn pillow_fails_with_two_cycle() {
        let cert = check_npc(&pillow());
        assert!(!cert.pass);
        let (_, w) = cert.failure.unwrap();
        assert_eq!(w.length, Ratio::new(2, 3));
        assert_eq!(w.cycle.len(), 2);
    }

    #[test]
    fn tripod_link_distances() {
        let c = one_vertex_triangle();
        let l = build_link(&c, "v").unwrap();
        let m = link_distance_matrix(&l, &[0, 1]).unwrap();
        assert_eq!(m[0][0], Some(Ratio::from_integer(0)));
        assert!(link_distance_matrix(&l, &[99]).is_err());
    }

    #[test]
    fn ultraconvex_cases() {
        let x = build_xk(1);
        let all: Vec<&str> = x.edges().iter().map(|e| e.id.as_str()).collect();
        let full = Subcomplex1::from_edges(&x, &all).unwrap();
        let cert = check_ultraconvex(&x, &full).unwrap();
        assert!(!cert.pass);
        assert_eq!(cert.min_distance, Some(Ratio::new(1, 3)));
        let empty = Subcomplex1::default();
        assert!(check_ultraconvex(&x, &empty).unwrap().pass);
    }

    #[test]
    fn dot_round_trip() {
        let l = build_link(&build_xk(1), "v").unwrap();
        let g = l.to_dot_graph();
        assert_eq!(DotGraph::parse(&g.render()).unwrap(), g);
    }
}
