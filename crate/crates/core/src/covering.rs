//! Cyclic branched covers of a single-vertex complex along a spine cocycle.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::complex::{ComplexBuilder, ComplexError, PE2Complex, Step, Subcomplex1};
use crate::link::{build_link_at, check_ultraconvex, LinkError, LinkGraph, UltraConvexCertificate};
use crate::spine::{
    enumerate_short_cycles, h1_class, link_to_spine, middle_edge_cycles, GraphMorphism, SpineError, SpineGraph,
};
use crate::templates::n_id;

#[derive(Debug, thiserror::Error)]
pub enum CoverError {
    #[error("cycle {0} has zero homology class")]
    ZeroClass(String),
    #[error("lifted link is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("complex must have exactly one vertex, found {0}")]
    NotSingleVertex(usize),
    #[error("rose link points are too close: minimum {0}")]
    RoseTooClose(String),
    #[error("degree {n} does not exceed (M+1)k = {bound}")]
    DegreeTooSmall { n: u64, bound: u64 },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Spine(#[from] SpineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CycleKind {
    Short,
    Middle,
}

/// A link cycle and its first homology class in the spine.
#[derive(Debug, Clone, Serialize)]
pub struct CycleClass {
    pub kind: CycleKind,
    pub length: usize,
    pub nodes: Vec<String>,
    pub class: Vec<i64>,
}

/// Short cycles (length ≤ 6) and middle-edge cycles with their classes.
/// Fails if any class vanishes.
pub fn collect_classes(
    c: &PE2Complex,
    link: &LinkGraph,
    spine: &SpineGraph,
    horizontal: &dyn Fn(usize) -> bool,
) -> Result<Vec<CycleClass>, CoverError> {
    let iota = link_to_spine(c, link, spine)?;
    let mut cycles: Vec<(CycleKind, crate::link::Cycle)> = enumerate_short_cycles(link, 6)
        .into_iter()
        .map(|cy| (CycleKind::Short, cy))
        .collect();
    cycles.extend(
        middle_edge_cycles(link, horizontal)
            .0
            .into_iter()
            .map(|cy| (CycleKind::Middle, cy)),
    );
    let mut out = Vec::with_capacity(cycles.len());
    for (kind, cy) in cycles {
        let class = h1_class(spine, &iota.image_of_cycle(link, &cy))?;
        let nodes: Vec<String> = cy.nodes.iter().map(|&n| link.node_name(n).to_string()).collect();
        if class.iter().all(|&x| x == 0) {
            return Err(CoverError::ZeroClass(nodes.join(" ")));
        }
        out.push(CycleClass {
            kind,
            length: cy.len(),
            nodes,
            class,
        });
    }
    Ok(out)
}

fn pairing(lambda: &[i64], c: &[i64]) -> i64 {
    lambda.iter().zip(c).map(|(a, b)| a * b).sum()
}

/// Deterministic integer vector pairing nonzero with every class.
///
/// Classes are taken in order; when the current vector pairs to zero with a
/// class, one coordinate where the class is nonzero is nudged by
/// `+1, -1, +2, -2, …` until every class seen so far pairs nonzero.
pub fn choose_lambda(dim: usize, classes: &[Vec<i64>]) -> Vec<i64> {
    let mut lambda = vec![0i64; dim];
    for (i, c) in classes.iter().enumerate() {
        if pairing(&lambda, c) != 0 {
            continue;
        }
        let Some(coord) = c.iter().position(|&x| x != 0) else {
            continue;
        };
        let mut fixed = false;
        for step in 1..=2000i64 {
            let delta = if step % 2 == 1 { (step + 1) / 2 } else { -(step / 2) };
            lambda[coord] += delta;
            if classes[..=i].iter().all(|d| pairing(&lambda, d) != 0) {
                fixed = true;
                break;
            }
            lambda[coord] -= delta;
        }
        if !fixed {
            return power_lambda(dim, classes);
        }
    }
    lambda
}

/// `(1, B, B², …)` with `B` above twice the largest entry: pairs nonzero
/// with every nonzero class.
fn power_lambda(dim: usize, classes: &[Vec<i64>]) -> Vec<i64> {
    let b = 2 * classes.iter().flatten().map(|x| x.abs()).max().unwrap_or(0) + 1;
    (0..dim as u32).map(|i| b.pow(i)).collect()
}

/// Spine cochain: zero on tree legs, `λ_b` on the `b`-th basis leg.
pub fn cocycle_from_lambda(spine: &SpineGraph, lambda: &[i64]) -> Vec<i64> {
    (0..spine.legs.len())
        .map(|l| spine.basis_position(l).map_or(0, |p| lambda[p]))
        .collect()
}

/// Sheet change along each link edge traversed from `ends[0]` to `ends[1]`.
pub fn edge_deltas(link: &LinkGraph, iota: &GraphMorphism, cocycle: &[i64]) -> Vec<i64> {
    (0..link.edges.len())
        .map(|e| cocycle[iota.edge_map[2 * e + 1]] - cocycle[iota.edge_map[2 * e]])
        .collect()
}

/// Largest `|ℓ|` over closures of immersed link paths with at most
/// `max_len` edges. The closing tree geodesic carries no cocycle weight, so
/// each closure's value is the sum of edge deltas.
pub fn compute_m(link: &LinkGraph, deltas: &[i64], max_len: usize) -> i64 {
    fn walk(link: &LinkGraph, deltas: &[i64], at: usize, last: usize, depth: usize, sum: i64, best: &mut i64) {
        *best = (*best).max(sum.abs());
        if depth == 0 {
            return;
        }
        for &(e, w) in link.neighbours(at) {
            if e == last {
                continue;
            }
            let d = if link.edges[e].ends[0] == at && link.edges[e].ends[1] == w {
                deltas[e]
            } else {
                -deltas[e]
            };
            walk(link, deltas, w, e, depth - 1, sum + d, best);
        }
    }
    let mut best = 0;
    for s in 0..link.nodes.len() {
        walk(link, deltas, s, usize::MAX, max_len, 0, &mut best);
    }
    best
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime above `max((M+1)k, max|ℓ|)`.
pub fn choose_n(m: i64, k: usize, max_ell: i64) -> u64 {
    let floor = ((m as u64 + 1) * k as u64).max(max_ell.unsigned_abs());
    let mut n = floor + 1;
    while !is_prime(n) {
        n += 1;
    }
    n
}

/// The parameters that determine the cover.
#[derive(Debug, Clone, Serialize)]
pub struct CocycleSpec {
    pub lambda: Vec<i64>,
    pub cocycle: Vec<i64>,
    /// Distinct classes and their pairings with `lambda`.
    pub ell_values: BTreeMap<String, i64>,
    pub m: i64,
    pub n: u64,
}

pub fn class_key(c: &[i64]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Runs the parameter selection for a single-vertex complex.
pub fn select_parameters(
    spine: &SpineGraph,
    link: &LinkGraph,
    iota: &GraphMorphism,
    classes: &[CycleClass],
    k: usize,
) -> CocycleSpec {
    let vecs: Vec<Vec<i64>> = classes.iter().map(|c| c.class.clone()).collect();
    let lambda = choose_lambda(spine.h1_rank(), &vecs);
    let cocycle = cocycle_from_lambda(spine, &lambda);
    let deltas = edge_deltas(link, iota, &cocycle);
    let m = compute_m(link, &deltas, 6);
    let mut ell_values = BTreeMap::new();
    for c in &vecs {
        ell_values.insert(class_key(c), pairing(&lambda, c));
    }
    let max_ell = ell_values.values().map(|x| x.abs()).max().unwrap_or(0);
    let n = choose_n(m, k, max_ell);
    CocycleSpec {
        lambda,
        cocycle,
        ell_values,
        m,
        n,
    }
}

pub fn sheet_id(base: &str, p: u64) -> String {
    format!("{base}^({p})")
}

/// An `N`-sheeted cyclic cover. Edge `e·N + p` and face `f·N + p` lie over
/// base cell `e` or `f` in sheet `p`.
#[derive(Debug, Clone)]
pub struct CoverComplex {
    pub base: PE2Complex,
    pub degree: u64,
    pub complex: PE2Complex,
    /// Sheet offset of each face corner's edge: `c(f, s)`.
    pub shifts: Vec<Vec<i64>>,
}

/// Face `(f, p)` has step `s` on edge `(e_s, p + c(f→e_s))`.
pub fn build_branched_cover(base: &PE2Complex, spine: &SpineGraph, cocycle: &[i64], n: u64) -> Result<CoverComplex, CoverError> {
    if base.vertices().len() != 1 {
        return Err(CoverError::NotSingleVertex(base.vertices().len()));
    }
    let mut b = ComplexBuilder::new();
    b.vertex(&format!("{}^", base.vertices()[0]))?;
    for e in base.edges() {
        for p in 0..n {
            b.edge_by_index(&sheet_id(&e.id, p), 0, 0, e.length, &e.label)?;
        }
    }
    let mut shifts = Vec::with_capacity(base.faces().len());
    for (fi, f) in base.faces().iter().enumerate() {
        let sh: Vec<i64> = (0..f.boundary.len()).map(|s| cocycle[spine.leg(fi, s)]).collect();
        for p in 0..n {
            let boundary = f
                .boundary
                .iter()
                .zip(&sh)
                .map(|(st, &c)| Step {
                    edge: st.edge * n as usize + (p as i64 + c).rem_euclid(n as i64) as usize,
                    forward: st.forward,
                })
                .collect();
            b.face_by_steps(&sheet_id(&f.id, p), boundary, f.angles.clone(), f.shape)?;
        }
        shifts.push(sh);
    }
    let complex = b.finish();
    let link = build_link_at(&complex, 0);
    let comps = link.components_of(&|_| true);
    if comps != 1 {
        return Err(CoverError::Disconnected(comps));
    }
    Ok(CoverComplex {
        base: base.clone(),
        degree: n,
        complex,
        shifts,
    })
}

impl CoverComplex {
    pub fn project_edge(&self, e: usize) -> (usize, u64) {
        (e / self.degree as usize, (e % self.degree as usize) as u64)
    }

    pub fn project_face(&self, f: usize) -> (usize, u64) {
        (f / self.degree as usize, (f % self.degree as usize) as u64)
    }

    pub fn edge_at(&self, base_edge: usize, sheet: i64) -> usize {
        base_edge * self.degree as usize + sheet.rem_euclid(self.degree as i64) as usize
    }

    /// Projecting every cover face gives back the base face, and shifting
    /// sheets by one permutes the faces.
    pub fn check_projection_and_deck(&self) -> bool {
        let n = self.degree as i64;
        for (fi, f) in self.complex.faces().iter().enumerate() {
            let (bf, p) = self.project_face(fi);
            let base = &self.base.faces()[bf];
            if base.boundary.len() != f.boundary.len() || base.angles != f.angles {
                return false;
            }
            for (s, (a, b)) in f.boundary.iter().zip(&base.boundary).enumerate() {
                let (be, sheet) = self.project_edge(a.edge);
                if be != b.edge || a.forward != b.forward {
                    return false;
                }
                if sheet as i64 != (p as i64 + self.shifts[bf][s]).rem_euclid(n) {
                    return false;
                }
            }
            // Deck shift by one lands on the face of sheet p+1.
            let next = bf * self.degree as usize + ((p + 1) % self.degree) as usize;
            let g = &self.complex.faces()[next];
            for (a, b) in f.boundary.iter().zip(&g.boundary) {
                let (ea, sa) = self.project_edge(a.edge);
                let (eb, sb) = self.project_edge(b.edge);
                if ea != eb || (sa + 1) % self.degree != sb {
                    return false;
                }
            }
        }
        true
    }
}

/// Rose edges `n_{1,j}^((M+1)j)` for `j = 1..=k`.
pub fn rose_edge_ids(m: i64, k: usize) -> Vec<String> {
    (1..=k)
        .map(|j| sheet_id(&n_id(1, j), (m as u64 + 1) * j as u64))
        .collect()
}

/// Picks the rose and verifies its link points are pairwise at least 2π
/// apart.
pub fn select_rose(cover: &CoverComplex, m: i64, k: usize) -> Result<(Subcomplex1, UltraConvexCertificate), CoverError> {
    let bound = (m as u64 + 1) * k as u64;
    if cover.degree <= bound {
        return Err(CoverError::DegreeTooSmall { n: cover.degree, bound });
    }
    let ids = rose_edge_ids(m, k);
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    let rose = Subcomplex1::from_edges(&cover.complex, &refs)?;
    let cert = check_ultraconvex(&cover.complex, &rose)?;
    if !cert.pass {
        let d = cert.min_distance.map(|d| crate::complex::format_angle(&d)).unwrap_or_default();
        return Err(CoverError::RoseTooClose(d));
    }
    Ok((rose, cert))
}

/// Greatest common divisor of `N` with all `ℓ` values.
pub fn gcd_with_all(n: u64, ell: &BTreeMap<String, i64>) -> u64 {
    ell.values().fold(n, |g, &x| g.gcd(&x.unsigned_abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_examples() {
        let cs = vec![vec![1, 0], vec![0, 1], vec![1, -1]];
        let l = choose_lambda(2, &cs);
        assert!(cs.iter().all(|c| pairing(&l, c) != 0));
        assert_eq!(choose_lambda(3, &[vec![0, 2, 5]]), vec![0, 1, 0]);
        assert_eq!(choose_lambda(2, &[]), vec![0, 0]);
    }

    #[test]
    fn prime_choice() {
        assert_eq!(choose_n(4, 1, 3), 7);
        assert_eq!(choose_n(0, 2, 1), 3);
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
    }
}
