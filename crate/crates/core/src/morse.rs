//! Rose-valued Morse labelings, directional links and monodromy extraction
//! for triangle complexes whose faces have one horizontal and two vertical
//! sides.

use std::collections::VecDeque;

use serde::Serialize;

use crate::complex::PE2Complex;
use crate::group::semidirect::{MonodromyAction, SemidirectElement};
use crate::group::{FreeAutomorphism, FreeWord, WordError, DEFAULT_LETTER_CAP};
use crate::link::{build_link_at, LinkGraph, Sign};

#[derive(Debug, thiserror::Error)]
pub enum MorseError {
    #[error("edge {0} has a label that is neither horizontal nor vertical")]
    Unlabelled(String),
    #[error("face {0} is not a triangle with one horizontal and two vertical sides of one letter")]
    BadFace(String),
    #[error("condition C1 fails: directional link {0} is not a tree")]
    NotC1(String),
    #[error("Euler characteristic {chi} differs from (1 - {rank})(1 - {k})")]
    EulerMismatch { chi: i64, rank: usize, k: usize },
    #[error("letter {letter}: vertical edge {edge} not reached by propagation")]
    Underdetermined { letter: usize, edge: String },
    #[error("letter {letter}: horizontal edge {edge} {problem}")]
    Inconsistent { letter: usize, edge: String, problem: String },
    #[error("rose edge {0} is missing or not vertical")]
    BadRose(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeRole {
    Horizontal,
    /// Maps forward onto petal `letter` (0-based) of the base rose.
    Vertical { letter: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct MorseLabeling {
    pub roles: Vec<EdgeRole>,
    pub letters: usize,
}

/// Horizontal for labels `a_*`; letter `j` for `n_{i,j}` and `p_{i,j}`.
pub fn label_xk_family(c: &PE2Complex) -> Result<MorseLabeling, MorseError> {
    let mut roles = Vec::with_capacity(c.edges().len());
    let mut letters = 0;
    for e in c.edges() {
        let l = e.label.as_str();
        let role = if l.starts_with("a_") {
            EdgeRole::Horizontal
        } else if let Some(rest) = l.strip_prefix("n_{").or_else(|| l.strip_prefix("p_{")) {
            let j: usize = rest
                .strip_suffix('}')
                .and_then(|r| r.split_once(','))
                .and_then(|(_, j)| j.parse().ok())
                .filter(|&j| j >= 1)
                .ok_or_else(|| MorseError::Unlabelled(e.id.clone()))?;
            letters = letters.max(j);
            EdgeRole::Vertical { letter: j - 1 }
        } else {
            return Err(MorseError::Unlabelled(e.id.clone()));
        };
        roles.push(role);
    }
    Ok(MorseLabeling { roles, letters })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FaceKind {
    /// Boundary `u h w⁻¹`: `w = u·h`.
    HorizontalBetween,
    /// Boundary `u w⁻¹ h`: `w = h·u`.
    HorizontalAfter,
}

/// A face rotated so that its forward vertical side `u` comes first.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FaceShape {
    pub face: usize,
    pub kind: FaceKind,
    pub letter: usize,
    pub u: usize,
    pub h: usize,
    pub w: usize,
}

pub fn face_shapes(c: &PE2Complex, lab: &MorseLabeling) -> Result<Vec<FaceShape>, MorseError> {
    let mut out = Vec::with_capacity(c.faces().len());
    for (fi, f) in c.faces().iter().enumerate() {
        let bad = || MorseError::BadFace(f.id.clone());
        if f.boundary.len() != 3 {
            return Err(bad());
        }
        let start = (0..3)
            .find(|&i| {
                let s = f.boundary[i];
                s.forward && matches!(lab.roles[s.edge], EdgeRole::Vertical { .. })
            })
            .ok_or_else(bad)?;
        let steps: Vec<_> = (0..3).map(|i| f.boundary[(start + i) % 3]).collect();
        let EdgeRole::Vertical { letter } = lab.roles[steps[0].edge] else {
            return Err(bad());
        };
        let is_h = |i: usize| lab.roles[steps[i].edge] == EdgeRole::Horizontal;
        let is_back_v = |i: usize| !steps[i].forward && lab.roles[steps[i].edge] == EdgeRole::Vertical { letter };
        let shape = if is_h(1) && steps[1].forward && is_back_v(2) {
            (FaceKind::HorizontalBetween, steps[1].edge, steps[2].edge)
        } else if is_back_v(1) && is_h(2) && steps[2].forward {
            (FaceKind::HorizontalAfter, steps[2].edge, steps[1].edge)
        } else {
            return Err(bad());
        };
        out.push(FaceShape {
            face: fi,
            kind: shape.0,
            letter,
            u: steps[0].edge,
            h: shape.1,
            w: shape.2,
        });
    }
    Ok(out)
}

/// Ascending (`x_j`) or descending (`x̄_j`) link of the single vertex.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionalLink {
    pub name: String,
    pub letter: usize,
    pub ascending: bool,
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    pub max_degree: usize,
}

impl DirectionalLink {
    pub fn is_tree(&self) -> bool {
        self.nodes > 0 && self.components == 1 && self.edges + 1 == self.nodes
    }

    pub fn is_cycle(&self) -> bool {
        self.nodes > 0 && self.components == 1 && self.edges == self.nodes && self.max_degree == 2
    }

    pub fn is_segment(&self) -> bool {
        self.is_tree() && self.max_degree <= 2
    }
}

fn in_directional(link: &LinkGraph, lab: &MorseLabeling, n: usize, letter: usize, ascending: bool) -> bool {
    let node = link.nodes[n];
    let want = if ascending { Sign::Minus } else { Sign::Plus };
    lab.roles[node.edge] == EdgeRole::Vertical { letter } && node.sign == want
}

pub fn directional_link(link: &LinkGraph, lab: &MorseLabeling, letter: usize, ascending: bool) -> DirectionalLink {
    let keep = |n: usize| in_directional(link, lab, n, letter, ascending);
    let nodes = (0..link.nodes.len()).filter(|&n| keep(n)).count();
    let mut degree = vec![0usize; link.nodes.len()];
    let mut parent: Vec<usize> = (0..link.nodes.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut edges = 0;
    let mut merges = 0;
    for e in &link.edges {
        let [a, b] = e.ends;
        if keep(a) && keep(b) {
            edges += 1;
            degree[a] += 1;
            degree[b] += 1;
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                merges += 1;
            }
        }
    }
    DirectionalLink {
        name: format!("{}x_{}", if ascending { "" } else { "bar " }, letter + 1),
        letter,
        ascending,
        nodes,
        edges,
        components: nodes - merges,
        max_degree: degree.into_iter().max().unwrap_or(0),
    }
}

pub fn directional_links(c: &PE2Complex, lab: &MorseLabeling) -> Vec<DirectionalLink> {
    let link = build_link_at(c, 0);
    let mut out = Vec::new();
    for j in 0..lab.letters {
        for asc in [true, false] {
            out.push(directional_link(&link, lab, j, asc));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct MorseConditions {
    pub c0: bool,
    pub c1: bool,
    pub links: Vec<DirectionalLink>,
}

pub fn check_morse_conditions(c: &PE2Complex, lab: &MorseLabeling) -> MorseConditions {
    let links = directional_links(c, lab);
    MorseConditions {
        c0: links.iter().all(|l| l.nodes > 0 && l.components == 1),
        c1: links.iter().all(DirectionalLink::is_tree),
        links,
    }
}

/// Number of horizontal edges, after checking C1 and `χ = (1-ℓ)(1-k)`.
pub fn kernel_rank(c: &PE2Complex, lab: &MorseLabeling) -> Result<usize, MorseError> {
    let cond = check_morse_conditions(c, lab);
    if let Some(l) = cond.links.iter().find(|l| !l.is_tree()) {
        return Err(MorseError::NotC1(l.name.clone()));
    }
    let rank = lab.roles.iter().filter(|r| **r == EdgeRole::Horizontal).count();
    let chi = c.euler_characteristic();
    let k = lab.letters;
    if chi != (1 - rank as i64) * (1 - k as i64) {
        return Err(MorseError::EulerMismatch { chi, rank, k });
    }
    Ok(rank)
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub generator: String,
    pub edge: String,
}

/// The extracted action plus everything that was verified about it.
#[derive(Debug, Clone, Serialize)]
pub struct MonodromyCertificate {
    pub kernel_edges: Vec<String>,
    pub rose_edges: Vec<String>,
    #[serde(skip)]
    pub action: MonodromyAction,
    #[serde(skip)]
    pub psi: Vec<SemidirectElement>,
    pub relators_checked: usize,
    pub relator_failures: Vec<String>,
    pub inverse_verified: bool,
    pub witnesses: Vec<Witness>,
    pub image_letter_count: u64,
}

impl MonodromyCertificate {
    pub fn pass(&self) -> bool {
        self.relator_failures.is_empty() && self.inverse_verified
    }
}

/// Spanning propagation over faces of one kind: returns a word per vertical
/// edge of `letter`, seeded with the identity at `root`.
fn propagate(
    c: &PE2Complex,
    lab: &MorseLabeling,
    shapes: &[FaceShape],
    kind: FaceKind,
    letter: usize,
    root: usize,
    kernel_index: &[Option<u32>],
) -> Result<Vec<Option<FreeWord>>, MorseError> {
    let ne = c.edges().len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for (i, s) in shapes.iter().enumerate() {
        if s.kind == kind && s.letter == letter {
            adj[s.u].push(i);
            adj[s.w].push(i);
        }
    }
    let mut word: Vec<Option<FreeWord>> = vec![None; ne];
    word[root] = Some(FreeWord::identity());
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &si in &adj[x] {
            let s = shapes[si];
            let h = FreeWord::gen(kernel_index[s.h].expect("horizontal"));
            let (from, to, val) = if s.u == x {
                let wu = word[x].as_ref().unwrap();
                // HorizontalAfter: w = h·u. HorizontalBetween: w = u·h.
                let v = match kind {
                    FaceKind::HorizontalAfter => h.mul(wu),
                    FaceKind::HorizontalBetween => wu.mul(&h),
                };
                (x, s.w, v)
            } else {
                let ww = word[x].as_ref().unwrap();
                let v = match kind {
                    FaceKind::HorizontalAfter => h.inverse().mul(ww),
                    FaceKind::HorizontalBetween => ww.mul(&h.inverse()),
                };
                (x, s.u, v)
            };
            let _ = from;
            if word[to].is_none() {
                word[to] = Some(val);
                queue.push_back(to);
            }
        }
    }
    for (e, r) in lab.roles.iter().enumerate() {
        if *r == (EdgeRole::Vertical { letter }) && word[e].is_none() {
            return Err(MorseError::Underdetermined {
                letter: letter + 1,
                edge: c.edges()[e].id.clone(),
            });
        }
    }
    Ok(word)
}

/// Extracts `Φ_j` for each petal of the base rose.
///
/// Vertical edge `e` of letter `j` maps to `(w_e, t_j)`, horizontal `h` to
/// `(h, 1)` and the chosen rose edge of letter `j` to `(1, t_j)`. The
/// `w = h·u` faces fix every `w_e`; the `w = u·h` faces then read off
/// `Φ_j(h) = w_u⁻¹ w_w`. The inverse comes from the mirror propagation
/// with `ψ(e) = t_j·u_e`.
pub fn extract_monodromy(c: &PE2Complex, lab: &MorseLabeling, rose_edges: &[String]) -> Result<MonodromyCertificate, MorseError> {
    let shapes = face_shapes(c, lab)?;
    let kernel_edges: Vec<usize> = (0..c.edges().len())
        .filter(|&e| lab.roles[e] == EdgeRole::Horizontal)
        .collect();
    let mut kernel_index = vec![None; c.edges().len()];
    for (i, &e) in kernel_edges.iter().enumerate() {
        kernel_index[e] = Some(i as u32);
    }
    let kernel_names: Vec<String> = kernel_edges.iter().map(|&e| c.edges()[e].id.clone()).collect();
    let rank = kernel_edges.len();
    if rose_edges.len() != lab.letters {
        return Err(MorseError::BadRose(format!("{} rose edges for {} letters", rose_edges.len(), lab.letters)));
    }
    let mut roots = Vec::new();
    for (j, id) in rose_edges.iter().enumerate() {
        let e = c.edge_id(id).map_err(|_| MorseError::BadRose(id.clone()))?;
        if lab.roles[e] != (EdgeRole::Vertical { letter: j }) {
            return Err(MorseError::BadRose(id.clone()));
        }
        roots.push(e);
    }

    let mut w_all: Vec<Option<FreeWord>> = vec![None; c.edges().len()];
    let mut auts = Vec::new();
    for j in 0..lab.letters {
        let w = propagate(c, lab, &shapes, FaceKind::HorizontalAfter, j, roots[j], &kernel_index)?;
        let u = propagate(c, lab, &shapes, FaceKind::HorizontalBetween, j, roots[j], &kernel_index)?;
        let mut fwd: Vec<Option<FreeWord>> = vec![None; rank];
        let mut inv: Vec<Option<FreeWord>> = vec![None; rank];
        for s in shapes.iter().filter(|s| s.letter == j) {
            let hi = kernel_index[s.h].unwrap() as usize;
            let (slot, val) = match s.kind {
                FaceKind::HorizontalBetween => {
                    let (wu, ww) = (w[s.u].as_ref().unwrap(), w[s.w].as_ref().unwrap());
                    (&mut fwd[hi], wu.inverse().mul(ww))
                }
                FaceKind::HorizontalAfter => {
                    let (uu, uw) = (u[s.u].as_ref().unwrap(), u[s.w].as_ref().unwrap());
                    (&mut inv[hi], uw.mul(&uu.inverse()))
                }
            };
            match slot {
                Some(old) if *old != val => {
                    return Err(MorseError::Inconsistent {
                        letter: j + 1,
                        edge: kernel_names[hi].clone(),
                        problem: "receives two different images".into(),
                    })
                }
                _ => *slot = Some(val),
            }
        }
        let collect = |v: Vec<Option<FreeWord>>, what: &str| -> Result<Vec<FreeWord>, MorseError> {
            v.into_iter()
                .enumerate()
                .map(|(i, x)| {
                    x.ok_or_else(|| MorseError::Inconsistent {
                        letter: j + 1,
                        edge: kernel_names[i].clone(),
                        problem: format!("has no {what}"),
                    })
                })
                .collect()
        };
        let images = collect(fwd, "image")?;
        let inverse_images = collect(inv, "inverse image")?;
        auts.push(FreeAutomorphism::new(images, inverse_images)?);
        for (e, x) in w.into_iter().enumerate() {
            if x.is_some() {
                w_all[e] = x;
            }
        }
    }
    let base_names: Vec<String> = (1..=lab.letters).map(|j| format!("t_{j}")).collect();
    let action = MonodromyAction::new(kernel_names.clone(), base_names.clone(), auts)?;

    let psi: Vec<SemidirectElement> = (0..c.edges().len())
        .map(|e| match lab.roles[e] {
            EdgeRole::Horizontal => SemidirectElement::kernel(FreeWord::gen(kernel_index[e].unwrap())),
            EdgeRole::Vertical { letter } => SemidirectElement {
                kernel: w_all[e].clone().unwrap_or_default(),
                base: FreeWord::gen(letter as u32),
            },
        })
        .collect();
    let psi_inv: Vec<SemidirectElement> = psi
        .iter()
        .map(|x| action.inverse(x, DEFAULT_LETTER_CAP))
        .collect::<Result<_, _>>()?;
    let mut failures = Vec::new();
    for f in c.faces() {
        let mut acc = SemidirectElement::identity();
        for s in &f.boundary {
            let g = if s.forward { &psi[s.edge] } else { &psi_inv[s.edge] };
            acc = action.mul(&acc, g, DEFAULT_LETTER_CAP)?;
        }
        if !acc.is_identity() {
            failures.push(f.id.clone());
        }
    }

    let mut witnesses: Vec<Witness> = kernel_names
        .iter()
        .map(|n| Witness {
            generator: n.clone(),
            edge: n.clone(),
        })
        .collect();
    for (j, id) in rose_edges.iter().enumerate() {
        witnesses.push(Witness {
            generator: base_names[j].clone(),
            edge: id.clone(),
        });
    }
    let inverse_verified = action.auts.iter().all(|a| {
        let id = a.compose(&a.inverse());
        id.map(|x| x == FreeAutomorphism::identity(rank)).unwrap_or(false)
    });
    Ok(MonodromyCertificate {
        kernel_edges: kernel_names,
        rose_edges: rose_edges.to_vec(),
        image_letter_count: action.image_size(),
        action,
        psi,
        relators_checked: c.faces().len(),
        relator_failures: failures,
        inverse_verified,
        witnesses,
    })
}
