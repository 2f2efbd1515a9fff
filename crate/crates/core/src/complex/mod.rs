//! Combinatorial piecewise-euclidean 2-complexes.
//!
//! Cells are addressed by string ids that are unique per dimension; every
//! analysis works on the dense indices assigned at construction.

mod metric;
pub mod text;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed};
use serde::Serialize;

pub use metric::{
    common_denominator, format_angle, format_ratio, parse_angle, serde_angle, serde_angle_opt,
    Angle, Length, ParseValueError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("duplicate {kind} id {id:?}")]
    DuplicateId { kind: &'static str, id: String },
    #[error("unknown {kind} id {id:?}")]
    UnknownId { kind: &'static str, id: String },
    #[error("invalid cell id {id:?}: ids must be non-empty and free of whitespace, ':' and '\"'")]
    BadId { id: String },
    #[error("glueing map is not a bijection: {0}")]
    NotBijective(String),
    #[error("glueing map does not preserve incidence at edge {a:?} -> {b:?}")]
    NotIsomorphic { a: String, b: String },
    #[error("length mismatch glueing {a:?} ({la}) to {b:?} ({lb})")]
    LengthMismatch {
        a: String,
        b: String,
        la: Length,
        lb: Length,
    },
    #[error("subcomplex is not closed: edge {edge:?} has an endpoint outside the vertex set")]
    NotClosed { edge: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeTag {
    EquilateralTriangle,
    UnitSquare,
    GeneralConvexPolygon,
}

impl ShapeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ShapeTag::EquilateralTriangle => "equilateral-triangle",
            ShapeTag::UnitSquare => "unit-square",
            ShapeTag::GeneralConvexPolygon => "general-convex-polygon",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "equilateral-triangle" => Some(ShapeTag::EquilateralTriangle),
            "unit-square" => Some(ShapeTag::UnitSquare),
            "general-convex-polygon" => Some(ShapeTag::GeneralConvexPolygon),
            _ => None,
        }
    }
}

impl fmt::Display for ShapeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub length: Length,
    /// Free-form label; generators use it for the name of the projected
    /// base cell.
    pub label: String,
}

/// One step of a face boundary: an edge traversed forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    pub boundary: Vec<Step>,
    /// `angles[i]` is the corner at the start of `boundary[i]`.
    pub angles: Vec<Angle>,
    pub shape: ShapeTag,
}

/// An immutable piecewise-euclidean 2-complex.
#[derive(Debug, Clone, Default)]
pub struct PE2Complex {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    face_index: HashMap<String, usize>,
}

impl PartialEq for PE2Complex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges && self.faces == other.faces
    }
}

impl Eq for PE2Complex {}

fn check_id(id: &str) -> Result<(), ComplexError> {
    if id.is_empty() || id.chars().any(|c| c.is_whitespace() || c == ':' || c == '"') {
        return Err(ComplexError::BadId { id: id.to_string() });
    }
    Ok(())
}

/// Incremental construction of a [`PE2Complex`] by id.
#[derive(Debug, Default)]
pub struct ComplexBuilder {
    inner: PE2Complex,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: &str) -> Result<usize, ComplexError> {
        check_id(id)?;
        let c = &mut self.inner;
        if c.vertex_index.contains_key(id) {
            return Err(ComplexError::DuplicateId {
                kind: "vertex",
                id: id.to_string(),
            });
        }
        c.vertex_index.insert(id.to_string(), c.vertices.len());
        c.vertices.push(id.to_string());
        Ok(c.vertices.len() - 1)
    }

    pub fn edge(
        &mut self,
        id: &str,
        tail: &str,
        head: &str,
        length: Length,
        label: &str,
    ) -> Result<usize, ComplexError> {
        check_id(id)?;
        check_id(label)?;
        let tail = self.inner.vertex_id(tail)?;
        let head = self.inner.vertex_id(head)?;
        self.edge_by_index(id, tail, head, length, label)
    }

    pub fn edge_by_index(
        &mut self,
        id: &str,
        tail: usize,
        head: usize,
        length: Length,
        label: &str,
    ) -> Result<usize, ComplexError> {
        check_id(id)?;
        let c = &mut self.inner;
        if c.edge_index.contains_key(id) {
            return Err(ComplexError::DuplicateId {
                kind: "edge",
                id: id.to_string(),
            });
        }
        c.edge_index.insert(id.to_string(), c.edges.len());
        c.edges.push(Edge {
            id: id.to_string(),
            tail,
            head,
            length,
            label: label.to_string(),
        });
        Ok(c.edges.len() - 1)
    }

    /// Adds a face from `(edge id, forward)` steps.
    pub fn face(
        &mut self,
        id: &str,
        steps: &[(&str, bool)],
        angles: Vec<Angle>,
        shape: ShapeTag,
    ) -> Result<usize, ComplexError> {
        let boundary = steps
            .iter()
            .map(|(e, fwd)| {
                Ok(Step {
                    edge: self.inner.edge_id(e)?,
                    forward: *fwd,
                })
            })
            .collect::<Result<Vec<_>, ComplexError>>()?;
        self.face_by_steps(id, boundary, angles, shape)
    }

    pub fn face_by_steps(
        &mut self,
        id: &str,
        boundary: Vec<Step>,
        angles: Vec<Angle>,
        shape: ShapeTag,
    ) -> Result<usize, ComplexError> {
        check_id(id)?;
        let c = &mut self.inner;
        if c.face_index.contains_key(id) {
            return Err(ComplexError::DuplicateId {
                kind: "face",
                id: id.to_string(),
            });
        }
        if let Some(s) = boundary.iter().find(|s| s.edge >= c.edges.len()) {
            return Err(ComplexError::UnknownId {
                kind: "edge",
                id: format!("#{}", s.edge),
            });
        }
        c.face_index.insert(id.to_string(), c.faces.len());
        c.faces.push(Face {
            id: id.to_string(),
            boundary,
            angles,
            shape,
        });
        Ok(c.faces.len() - 1)
    }

    pub fn finish(self) -> PE2Complex {
        self.inner
    }
}

impl PE2Complex {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex_id(&self, id: &str) -> Result<usize, ComplexError> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| ComplexError::UnknownId {
                kind: "vertex",
                id: id.to_string(),
            })
    }

    pub fn edge_id(&self, id: &str) -> Result<usize, ComplexError> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| ComplexError::UnknownId {
                kind: "edge",
                id: id.to_string(),
            })
    }

    pub fn face_id(&self, id: &str) -> Result<usize, ComplexError> {
        self.face_index
            .get(id)
            .copied()
            .ok_or_else(|| ComplexError::UnknownId {
                kind: "face",
                id: id.to_string(),
            })
    }

    /// Vertex at the start of a boundary step.
    pub fn step_start(&self, s: Step) -> usize {
        let e = &self.edges[s.edge];
        if s.forward {
            e.tail
        } else {
            e.head
        }
    }

    /// Vertex at the end of a boundary step.
    pub fn step_end(&self, s: Step) -> usize {
        let e = &self.edges[s.edge];
        if s.forward {
            e.head
        } else {
            e.tail
        }
    }

    pub fn counts(&self) -> CellCounts {
        CellCounts {
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            faces: self.faces.len(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Copy with every edge length multiplied by √2.
    pub fn scaled_by_sqrt2(&self) -> PE2Complex {
        let mut c = self.clone();
        for e in &mut c.edges {
            e.length = e.length.times_sqrt2();
        }
        for f in &mut c.faces {
            f.shape = ShapeTag::GeneralConvexPolygon;
        }
        c
    }

    /// Same complex with `prefix` prepended to every cell id. Labels are kept.
    pub fn with_id_prefix(&self, prefix: &str) -> Result<PE2Complex, ComplexError> {
        check_id(prefix)?;
        let mut c = self.clone();
        for v in &mut c.vertices {
            v.insert_str(0, prefix);
        }
        for e in &mut c.edges {
            e.id.insert_str(0, prefix);
        }
        for f in &mut c.faces {
            f.id.insert_str(0, prefix);
        }
        c.vertex_index = c.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        c.edge_index = c.edges.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();
        c.face_index = c.faces.iter().enumerate().map(|(i, f)| (f.id.clone(), i)).collect();
        Ok(c)
    }

    /// Removes the open edge `edge` and the interiors of all faces using it.
    pub fn delete_open_cells(&self, edge: &str) -> Result<PE2Complex, ComplexError> {
        let doomed = self.edge_id(edge)?;
        let mut b = ComplexBuilder::new();
        for v in &self.vertices {
            b.vertex(v)?;
        }
        let mut remap = vec![usize::MAX; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if i != doomed {
                remap[i] = b.edge_by_index(&e.id, e.tail, e.head, e.length, &e.label)?;
            }
        }
        for f in &self.faces {
            if f.boundary.iter().any(|s| s.edge == doomed) {
                continue;
            }
            let boundary = f
                .boundary
                .iter()
                .map(|s| Step {
                    edge: remap[s.edge],
                    forward: s.forward,
                })
                .collect();
            b.face_by_steps(&f.id, boundary, f.angles.clone(), f.shape)?;
        }
        Ok(b.finish())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CellCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

/// A violated invariant, attributed to a cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub cell: String,
    pub invariant: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural and metric invariants of every cell.
pub fn validate(c: &PE2Complex) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |cell: &str, invariant: &'static str, detail: String| {
        out.push(Violation {
            cell: cell.to_string(),
            invariant,
            detail,
        })
    };
    for e in &c.edges {
        if !e.length.is_positive() {
            push(&e.id, "positive-length", format!("length {}", e.length));
        }
    }
    let third = Ratio::new(1, 3);
    let half = Ratio::new(1, 2);
    for f in &c.faces {
        let m = f.boundary.len();
        if m < 3 {
            push(&f.id, "polygon", format!("boundary has {m} sides"));
            continue;
        }
        for i in 0..m {
            let here = f.boundary[i];
            let next = f.boundary[(i + 1) % m];
            if c.step_end(here) != c.step_start(next) {
                push(
                    &f.id,
                    "closed-boundary",
                    format!("step {i} ends where step {} does not start", (i + 1) % m),
                );
            }
        }
        if f.angles.len() != m {
            push(
                &f.id,
                "angle-count",
                format!("{} angles for {m} sides", f.angles.len()),
            );
            continue;
        }
        if f.angles.iter().any(|a| !a.is_positive() || *a >= Ratio::one()) {
            push(&f.id, "convex-corner", "corner angle outside (0, pi)".into());
        }
        let sum: Angle = f.angles.iter().sum();
        if sum != Ratio::from_integer(m as i64 - 2) {
            push(
                &f.id,
                "angle-sum",
                format!("angles sum to {} instead of {} pi", format_angle(&sum), m - 2),
            );
        }
        let unit_sides = f.boundary.iter().all(|s| c.edges[s.edge].length.is_one());
        match f.shape {
            ShapeTag::EquilateralTriangle => {
                if m != 3 || !unit_sides || f.angles.iter().any(|a| *a != third) {
                    push(&f.id, "equilateral-triangle", "needs 3 unit sides and pi/3 corners".into());
                }
            }
            ShapeTag::UnitSquare => {
                if m != 4 || !unit_sides || f.angles.iter().any(|a| *a != half) {
                    push(&f.id, "unit-square", "needs 4 unit sides and pi/2 corners".into());
                }
            }
            ShapeTag::GeneralConvexPolygon => {}
        }
    }
    ValidationReport { violations: out }
}

pub fn euler_characteristic(c: &PE2Complex) -> i64 {
    c.euler_characteristic()
}

/// A 1-dimensional subcomplex, closed under taking endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Subcomplex1 {
    pub edges: Vec<String>,
    pub vertices: Vec<String>,
}

impl Subcomplex1 {
    /// The closure of a set of edges.
    pub fn from_edges(owner: &PE2Complex, edges: &[&str]) -> Result<Self, ComplexError> {
        let mut vs = BTreeSet::new();
        let mut es = Vec::new();
        for id in edges {
            let e = &owner.edges[owner.edge_id(id)?];
            vs.insert(e.tail);
            vs.insert(e.head);
            if !es.contains(&e.id) {
                es.push(e.id.clone());
            }
        }
        Ok(Subcomplex1 {
            edges: es,
            vertices: vs.into_iter().map(|v| owner.vertices[v].clone()).collect(),
        })
    }

    pub fn from_vertices(owner: &PE2Complex, vertices: &[&str]) -> Result<Self, ComplexError> {
        let mut vs = Vec::new();
        for v in vertices {
            owner.vertex_id(v)?;
            if !vs.iter().any(|x: &String| x == v) {
                vs.push(v.to_string());
            }
        }
        Ok(Subcomplex1 {
            edges: Vec::new(),
            vertices: vs,
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }

    /// Checks that every id exists in `owner` and the subcomplex is closed.
    pub fn check(&self, owner: &PE2Complex) -> Result<(), ComplexError> {
        let vs: BTreeSet<usize> = self
            .vertices
            .iter()
            .map(|v| owner.vertex_id(v))
            .collect::<Result<_, _>>()?;
        for id in &self.edges {
            let e = &owner.edges[owner.edge_id(id)?];
            if !vs.contains(&e.tail) || !vs.contains(&e.head) {
                return Err(ComplexError::NotClosed { edge: id.clone() });
            }
        }
        Ok(())
    }
}

/// A cellular bijection between 1-subcomplexes of two complexes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CellIso {
    pub vertices: Vec<(String, String)>,
    pub edges: Vec<(String, String)>,
}

impl CellIso {
    /// Pairs edges in order and infers the vertex correspondence.
    pub fn from_edge_pairs(
        a: &PE2Complex,
        b: &PE2Complex,
        pairs: &[(&str, &str)],
    ) -> Result<Self, ComplexError> {
        let mut vertices: Vec<(String, String)> = Vec::new();
        for (ea, eb) in pairs {
            let x = &a.edges[a.edge_id(ea)?];
            let y = &b.edges[b.edge_id(eb)?];
            for (va, vb) in [(x.tail, y.tail), (x.head, y.head)] {
                let p = (a.vertices[va].clone(), b.vertices[vb].clone());
                if !vertices.contains(&p) {
                    vertices.push(p);
                }
            }
        }
        Ok(CellIso {
            vertices,
            edges: pairs
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }
}

fn fresh_id(taken: &HashMap<String, usize>, id: &str) -> String {
    let mut s = id.to_string();
    while taken.contains_key(&s) {
        s.push('\'');
    }
    s
}

/// Glues `b` onto `a` along `iso`. Cells of `a` keep their ids; unglued cells
/// of `b` keep theirs unless taken, in which case primes are appended.
pub fn amalgamate(a: &PE2Complex, b: &PE2Complex, iso: &CellIso) -> Result<PE2Complex, ComplexError> {
    let mut vmap_ab: HashMap<usize, usize> = HashMap::new();
    let mut vmap_ba: HashMap<usize, usize> = HashMap::new();
    for (x, y) in &iso.vertices {
        let (i, j) = (a.vertex_id(x)?, b.vertex_id(y)?);
        if vmap_ab.insert(i, j).is_some() || vmap_ba.insert(j, i).is_some() {
            return Err(ComplexError::NotBijective(format!("vertex pair {x:?} -> {y:?}")));
        }
    }
    let mut emap_ba: HashMap<usize, usize> = HashMap::new();
    let mut seen_a = BTreeSet::new();
    for (x, y) in &iso.edges {
        let (i, j) = (a.edge_id(x)?, b.edge_id(y)?);
        if !seen_a.insert(i) || emap_ba.insert(j, i).is_some() {
            return Err(ComplexError::NotBijective(format!("edge pair {x:?} -> {y:?}")));
        }
        let (ea, eb) = (&a.edges[i], &b.edges[j]);
        if ea.length != eb.length {
            return Err(ComplexError::LengthMismatch {
                a: x.clone(),
                b: y.clone(),
                la: ea.length,
                lb: eb.length,
            });
        }
        let tail_ok = vmap_ab.get(&ea.tail) == Some(&eb.tail);
        let head_ok = vmap_ab.get(&ea.head) == Some(&eb.head);
        if !tail_ok || !head_ok {
            return Err(ComplexError::NotIsomorphic {
                a: x.clone(),
                b: y.clone(),
            });
        }
    }

    let mut out = ComplexBuilder::new();
    for v in &a.vertices {
        out.vertex(v)?;
    }
    for e in &a.edges {
        out.edge_by_index(&e.id, e.tail, e.head, e.length, &e.label)?;
    }
    let mut bv = vec![0usize; b.vertices.len()];
    for (j, v) in b.vertices.iter().enumerate() {
        bv[j] = match vmap_ba.get(&j) {
            Some(&i) => i,
            None => {
                let id = fresh_id(&out.inner.vertex_index, v);
                out.vertex(&id)?
            }
        };
    }
    let mut be = vec![0usize; b.edges.len()];
    for (j, e) in b.edges.iter().enumerate() {
        be[j] = match emap_ba.get(&j) {
            Some(&i) => i,
            None => {
                let id = fresh_id(&out.inner.edge_index, &e.id);
                out.edge_by_index(&id, bv[e.tail], bv[e.head], e.length, &e.label)?
            }
        };
    }
    for f in &a.faces {
        out.face_by_steps(&f.id, f.boundary.clone(), f.angles.clone(), f.shape)?;
    }
    for f in &b.faces {
        let id = fresh_id(&out.inner.face_index, &f.id);
        let boundary = f
            .boundary
            .iter()
            .map(|s| Step {
                edge: be[s.edge],
                forward: s.forward,
            })
            .collect();
        out.face_by_steps(&id, boundary, f.angles.clone(), f.shape)?;
    }
    Ok(out.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn third() -> Angle {
        Ratio::new(1, 3)
    }

    fn one_triangle() -> PE2Complex {
        let mut b = ComplexBuilder::new();
        b.vertex("v").unwrap();
        for e in ["x", "y", "z"] {
            b.edge(e, "v", "v", Length::one(), e).unwrap();
        }
        b.face(
            "f",
            &[("x", true), ("y", true), ("z", false)],
            vec![third(); 3],
            ShapeTag::EquilateralTriangle,
        )
        .unwrap();
        b.finish()
    }

    #[test]
    fn empty_complex_validates() {
        assert!(validate(&PE2Complex::empty()).pass());
        assert_eq!(PE2Complex::empty().euler_characteristic(), 0);
    }

    #[test]
    fn bad_angle_sum_is_reported() {
        let mut b = ComplexBuilder::new();
        b.vertex("v").unwrap();
        for e in ["x", "y", "z"] {
            b.edge(e, "v", "v", Length::one(), e).unwrap();
        }
        b.face(
            "f",
            &[("x", true), ("y", true), ("z", true)],
            vec![third(), third(), Ratio::new(1, 2)],
            ShapeTag::GeneralConvexPolygon,
        )
        .unwrap();
        let r = validate(&b.finish());
        assert!(r.violations.iter().any(|v| v.invariant == "angle-sum"));
    }

    #[test]
    fn open_boundary_is_reported() {
        let mut b = ComplexBuilder::new();
        b.vertex("u").unwrap();
        b.vertex("w").unwrap();
        b.edge("x", "u", "w", Length::one(), "x").unwrap();
        b.face(
            "f",
            &[("x", true), ("x", true), ("x", true)],
            vec![third(); 3],
            ShapeTag::EquilateralTriangle,
        )
        .unwrap();
        let r = validate(&b.finish());
        assert!(r.violations.iter().any(|v| v.invariant == "closed-boundary"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut b = ComplexBuilder::new();
        b.vertex("v").unwrap();
        assert!(matches!(b.vertex("v"), Err(ComplexError::DuplicateId { .. })));
        assert!(matches!(b.vertex("a b"), Err(ComplexError::BadId { .. })));
    }

    #[test]
    fn delete_edge_without_faces() {
        let mut b = ComplexBuilder::new();
        b.vertex("v").unwrap();
        b.edge("loose", "v", "v", Length::one(), "loose").unwrap();
        let c = b.finish();
        let d = c.delete_open_cells("loose").unwrap();
        assert_eq!(d.counts(), CellCounts { vertices: 1, edges: 0, faces: 0 });
        assert!(c.delete_open_cells("nope").is_err());
    }

    #[test]
    fn glue_along_vertex_and_empty() {
        let t = one_triangle();
        let iso = CellIso {
            vertices: vec![("v".into(), "v".into())],
            edges: vec![],
        };
        let g = amalgamate(&t, &t, &iso).unwrap();
        assert_eq!(g.counts(), CellCounts { vertices: 1, edges: 6, faces: 2 });
        assert!(validate(&g).pass());
        assert_eq!(g.edges()[3].id, "x'");
        let d = amalgamate(&t, &t, &CellIso::default()).unwrap();
        assert_eq!(d.counts(), CellCounts { vertices: 2, edges: 6, faces: 2 });
        assert!(validate(&d).pass());
    }

    #[test]
    fn glue_rejects_length_mismatch() {
        let t = one_triangle();
        let s = t.scaled_by_sqrt2();
        let iso = CellIso::from_edge_pairs(&t, &s, &[("x", "x")]).unwrap();
        assert!(matches!(amalgamate(&t, &s, &iso), Err(ComplexError::LengthMismatch { .. })));
    }

    #[test]
    fn glue_rejects_incidence_mismatch() {
        let mut b = ComplexBuilder::new();
        b.vertex("u").unwrap();
        b.vertex("w").unwrap();
        b.edge("e", "u", "w", Length::one(), "e").unwrap();
        let seg = b.finish();
        let iso = CellIso {
            vertices: vec![("u".into(), "u".into()), ("w".into(), "w".into())],
            edges: vec![("e".into(), "e".into())],
        };
        assert!(amalgamate(&seg, &seg, &iso).is_ok());
        let flipped = CellIso {
            vertices: vec![("u".into(), "w".into()), ("w".into(), "u".into())],
            edges: vec![("e".into(), "e".into())],
        };
        assert!(matches!(amalgamate(&seg, &seg, &flipped), Err(ComplexError::NotIsomorphic { .. })));
    }

    #[test]
    fn subcomplex_closure() {
        let t = one_triangle();
        let r = Subcomplex1::from_edges(&t, &["x", "y"]).unwrap();
        assert_eq!(r.vertices, vec!["v".to_string()]);
        assert_eq!(r.euler_characteristic(), -1);
        assert!(r.check(&t).is_ok());
    }
}
