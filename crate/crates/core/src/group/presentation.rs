//! Finite presentations and the two segment graphs of groups for a chain of
//! free-by-free blocks over a terminal.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::automorphism::{example1_monodromy, FreeAutomorphism};
use super::semidirect::MonodromyAction;
use super::word::{FreeWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("block {level}: base rank {base} differs from the previous kernel rank {kernel}")]
    RankMismatch { level: usize, base: usize, kernel: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("presentation text: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub name: String,
    pub gens: Vec<String>,
    pub rels: Vec<FreeWord>,
}

impl Presentation {
    pub fn new(name: &str, gens: Vec<String>, rels: Vec<FreeWord>) -> Self {
        Presentation {
            name: name.to_string(),
            gens,
            rels,
        }
    }

    pub fn gen_index(&self, name: &str) -> Option<u32> {
        self.gens.iter().position(|g| g == name).map(|i| i as u32)
    }

    /// Renames every generator; words are index based so stay valid.
    pub fn renamed(&self, name: &str, f: impl Fn(&str) -> String) -> Presentation {
        Presentation {
            name: name.to_string(),
            gens: self.gens.iter().map(|g| f(g)).collect(),
            rels: self.rels.clone(),
        }
    }

    /// Appends `q`'s generators and relators; returns the index offset of `q`.
    pub fn absorb(&mut self, q: &Presentation) -> u32 {
        let off = self.gens.len() as u32;
        self.gens.extend(q.gens.iter().cloned());
        self.rels.extend(q.rels.iter().map(|r| shift(r, off)));
        off
    }

    pub fn to_text(&self) -> String {
        let rels: Vec<String> = self.rels.iter().map(|r| r.display_with(&self.gens)).collect();
        format!("[{}]\ngens: {}\nrels: {}\n", self.name, self.gens.join(" "), rels.join("; "))
    }

    /// Parses a sequence of blocks produced by [`Self::to_text`].
    pub fn parse_blocks(text: &str) -> Result<Vec<Presentation>, ChainError> {
        let bad = |s: &str| ChainError::Parse(s.to_string());
        let mut out = Vec::new();
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        while let Some(head) = lines.next() {
            let name = head
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| bad(head))?;
            let g = lines.next().ok_or_else(|| bad("missing gens"))?;
            let gens: Vec<String> = g
                .strip_prefix("gens:")
                .ok_or_else(|| bad(g))?
                .split_whitespace()
                .map(String::from)
                .collect();
            let r = lines.next().ok_or_else(|| bad("missing rels"))?;
            let body = r.strip_prefix("rels:").ok_or_else(|| bad(r))?.trim();
            let index: HashMap<&str, u32> = gens.iter().enumerate().map(|(i, n)| (n.as_str(), i as u32)).collect();
            let lookup = |s: &str| index.get(s).copied();
            let mut rels = Vec::new();
            if !body.is_empty() {
                for w in body.split(';') {
                    rels.push(FreeWord::parse_with(w, &lookup)?);
                }
            }
            out.push(Presentation::new(name, gens, rels));
        }
        Ok(out)
    }
}

fn shift(w: &FreeWord, off: u32) -> FreeWord {
    FreeWord::from_runs(w.runs().iter().map(|&(g, e)| (g + off, e)))
}

fn commutator(x: &FreeWord, y: &FreeWord) -> FreeWord {
    x.mul(y).mul(&x.inverse()).mul(&y.inverse())
}

/// `⟨A ∪ B | b a b⁻¹ = Φ(b)(a)⟩` with the given generator names.
pub fn semidirect_presentation(name: &str, action: &MonodromyAction, kernel: &[String], base: &[String]) -> Presentation {
    let ka = kernel.len() as u32;
    let mut rels = Vec::new();
    for (b, a) in action.relator_pairs() {
        let bw = FreeWord::gen(ka + b);
        let lhs = bw.mul(&FreeWord::gen(a)).mul(&bw.inverse());
        let img = &action.auts[b as usize].images()[a as usize];
        rels.push(lhs.mul(&img.inverse()));
    }
    Presentation::new(name, [kernel, base].concat(), rels)
}

/// `p × q`: free product plus all commutators.
pub fn direct_product(name: &str, p: &Presentation, q: &Presentation) -> (Presentation, u32) {
    let mut out = p.clone();
    out.name = name.to_string();
    let off = out.absorb(q);
    for i in 0..p.gens.len() as u32 {
        for j in 0..q.gens.len() as u32 {
            out.rels.push(commutator(&FreeWord::gen(i), &FreeWord::gen(off + j)));
        }
    }
    (out, off)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminalKind {
    /// `Γ_k`: polynomially distorted kernel.
    PolynomialKernel,
    /// An extracted hyperbolic `F_ℓ ⋊ ℤ`.
    HyperbolicKernel,
    /// Snowflake terminal: generators only, nothing checked.
    SnowflakeStub,
}

/// The square `A_0 → S → T ← H_0 ← A_0` at the end of the chain. Subgroup
/// inclusions are given as words in the ambient generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TerminalSpec {
    pub kind: TerminalKind,
    pub h0: Presentation,
    pub a0_in_h0: Vec<FreeWord>,
    pub s: Presentation,
    pub a0_in_s: Vec<FreeWord>,
    pub t: Presentation,
    pub s_in_t: Vec<FreeWord>,
    pub h0_in_t: Vec<FreeWord>,
    pub verified: bool,
    pub distortion: String,
    pub alpha: Option<f64>,
}

impl TerminalSpec {
    pub fn a0_rank(&self) -> usize {
        self.a0_in_h0.len()
    }

    /// `H_0 = S = F ⋊ ℤ` for a cyclic action and `T = H_0 × ⟨u⟩`, with `S`
    /// entering `T` through `F × 1` and the diagonal `s ↦ t u`.
    pub fn free_by_cyclic(kind: TerminalKind, action: &MonodromyAction, distortion: &str) -> Self {
        assert_eq!(action.base_rank(), 1);
        let l = action.kernel_rank();
        let h0 = semidirect_presentation("H_0", action, &action.kernel_names, &["t".into()]);
        let s = semidirect_presentation("S", action, &action.kernel_names, &["s".into()]);
        let kernel_words: Vec<FreeWord> = (0..l as u32).map(FreeWord::gen).collect();
        let u = Presentation::new("U", vec!["u".into()], vec![]);
        let (t, off) = direct_product("T", &h0, &u);
        let mut s_in_t = kernel_words.clone();
        s_in_t.push(FreeWord::from_runs([(l as u32, 1), (off, 1)]));
        let h0_in_t = (0..=l as u32).map(FreeWord::gen).collect();
        TerminalSpec {
            kind,
            h0,
            a0_in_h0: kernel_words.clone(),
            s,
            a0_in_s: kernel_words,
            t,
            s_in_t,
            h0_in_t,
            verified: true,
            distortion: distortion.into(),
            alpha: None,
        }
    }

    pub fn example1(k: usize) -> Self {
        let action = MonodromyAction::cyclic(example1_monodromy(k), "x", "t");
        Self::free_by_cyclic(TerminalKind::PolynomialKernel, &action, &format!("x^{k}"))
    }

    pub fn example2(action: &MonodromyAction) -> Self {
        Self::free_by_cyclic(TerminalKind::HyperbolicKernel, action, "exp(x)")
    }

    /// Generators only. The intersection square is assumed, not checked.
    pub fn example3(alpha: f64) -> Self {
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let h0 = Presentation::new("H_0", names(&["x", "y", "t"]), vec![]);
        let s = Presentation::new("S", names(&["x", "y", "s"]), vec![]);
        let t = Presentation::new("T", names(&["x", "y", "t", "u"]), vec![]);
        let gens = |n: u32| (0..n).map(FreeWord::gen).collect::<Vec<_>>();
        TerminalSpec {
            kind: TerminalKind::SnowflakeStub,
            a0_in_h0: gens(2),
            a0_in_s: gens(2),
            s_in_t: gens(3),
            h0_in_t: gens(3),
            h0,
            s,
            t,
            verified: false,
            distortion: format!("x^{alpha}"),
            alpha: Some(alpha),
        }
    }
}

/// One level `A_i ⋊ B_i` of the chain. `θ_i` sends the `j`-th base generator
/// to the `j`-th generator of `A_{i-1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainBlock {
    pub action: MonodromyAction,
    pub synthetic: bool,
}

/// A block with base rank `k` acting on `F_{k+1}` by transvections
/// `x_j ↦ x_j x_{j+1}`; used where no extracted monodromy of that rank is
/// available.
pub fn synthetic_block(k: usize) -> ChainBlock {
    let l = k + 1;
    let mut auts = Vec::new();
    for j in 0..k {
        let (g, h) = (j as u32 % l as u32, (j as u32 + 1) % l as u32);
        let mut img: Vec<FreeWord> = (0..l as u32).map(FreeWord::gen).collect();
        let mut inv = img.clone();
        img[g as usize] = FreeWord::from_runs([(g, 1), (h, 1)]);
        inv[g as usize] = FreeWord::from_runs([(g, 1), (h, -1)]);
        auts.push(FreeAutomorphism::new(img, inv).expect("transvection"));
    }
    let action = MonodromyAction::new(
        (1..=l).map(|i| format!("y_{i}")).collect(),
        (1..=k).map(|i| format!("s_{i}")).collect(),
        auts,
    )
    .expect("ranks agree");
    ChainBlock { action, synthetic: true }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub name: String,
    pub gens: usize,
    pub rels: usize,
}

/// A graph of groups over a segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentGraph {
    pub vertices: Vec<GroupDescriptor>,
    pub edges: Vec<GroupDescriptor>,
    /// Metric scale of the vertex space as `(√2)^e`.
    pub scale_exponents: Vec<u32>,
}

impl SegmentGraph {
    pub fn is_symmetric(&self) -> bool {
        let rev = |v: &[GroupDescriptor]| v.iter().rev().cloned().collect::<Vec<_>>();
        self.vertices == rev(&self.vertices) && self.edges == rev(&self.edges)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainAssembly {
    pub n: usize,
    pub terminal: TerminalKind,
    pub terminal_verified: bool,
    pub synthetic_levels: Vec<usize>,
    pub top: SegmentGraph,
    pub bottom: SegmentGraph,
    pub h: Vec<Presentation>,
    pub l: Vec<Presentation>,
    pub g: Vec<Presentation>,
    pub c_n: Presentation,
    pub d_n: Presentation,
}

fn level_names(i: usize, a: &MonodromyAction) -> (Vec<String>, Vec<String>) {
    (
        (1..=a.kernel_rank()).map(|j| format!("a{i}_{j}")).collect(),
        (1..=a.base_rank()).map(|j| format!("b{i}_{j}")).collect(),
    )
}

fn desc(p: &Presentation) -> GroupDescriptor {
    GroupDescriptor {
        name: p.name.clone(),
        gens: p.gens.len(),
        rels: p.rels.len(),
    }
}

fn free_desc(name: &str, rank: usize) -> GroupDescriptor {
    GroupDescriptor {
        name: name.into(),
        gens: rank,
        rels: 0,
    }
}

/// `p *_{u_j = v_j} q` where `u_j` are words in `p` and `v_j` words in `q`.
fn amalgam(name: &str, p: &Presentation, q: &Presentation, u: &[FreeWord], v: &[FreeWord]) -> Presentation {
    let mut out = p.clone();
    out.name = name.into();
    let off = out.absorb(q);
    for (x, y) in u.iter().zip(v) {
        out.rels.push(x.mul(&shift(y, off).inverse()));
    }
    out
}

fn double(name: &str, p: &Presentation, sub: &[FreeWord]) -> Presentation {
    let left = p.renamed(name, |g| format!("{g}@1"));
    let right = p.renamed(name, |g| format!("{g}@2"));
    amalgam(name, &left, &right, sub, sub)
}

/// Builds `H_i`, `L_i`, `G_i` and the doubles `C_n = G_n *_{H_n} G_n`,
/// `D_n = L_n *_{A_n} L_n` for `n = blocks.len()`.
pub fn assemble_chain(blocks: &[ChainBlock], terminal: &TerminalSpec) -> Result<ChainAssembly, ChainError> {
    let n = blocks.len();
    let mut prev_rank = terminal.a0_rank();
    for (i, b) in blocks.iter().enumerate() {
        if b.action.base_rank() != prev_rank {
            return Err(ChainError::RankMismatch {
                level: i + 1,
                base: b.action.base_rank(),
                kernel: prev_rank,
            });
        }
        prev_rank = b.action.kernel_rank();
    }

    // P_i and the words for A_i inside it.
    let mut p = Vec::new();
    let mut a_in_p = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let (kn, bn) = level_names(i + 1, &b.action);
        p.push(semidirect_presentation(&format!("P_{}", i + 1), &b.action, &kn, &bn));
        a_in_p.push((0..b.action.kernel_rank() as u32).map(FreeWord::gen).collect::<Vec<_>>());
    }

    // H_i = P_i *_{B_i = A_{i-1}} H_{i-1}; A_i sits in H_i as the first generators.
    let mut h = vec![terminal.h0.clone()];
    let mut a_in_h = vec![terminal.a0_in_h0.clone()];
    let mut l = vec![terminal.s.renamed("L_0", |g| g.to_string())];
    let mut a_in_l = vec![terminal.a0_in_s.clone()];
    for (i, b) in blocks.iter().enumerate() {
        let ka = b.action.kernel_rank() as u32;
        let base: Vec<FreeWord> = (0..b.action.base_rank() as u32).map(|j| FreeWord::gen(ka + j)).collect();
        h.push(amalgam(&format!("H_{}", i + 1), &p[i], &h[i], &base, &a_in_h[i]));
        a_in_h.push(a_in_p[i].clone());
        l.push(amalgam(&format!("L_{}", i + 1), &p[i], &l[i], &base, &a_in_l[i]));
        a_in_l.push(a_in_p[i].clone());
    }

    // G_i: free product of T and V_m = H_m × H_{m-1}, generators prefixed.
    let mut g = vec![terminal.t.renamed("G_0", |x| format!("T.{x}"))];
    let mut hn_in_g = vec![terminal.h0_in_t.clone()];
    for m in 1..=n {
        let left = h[m].renamed("", |x| format!("v{m}L.{x}"));
        let right = h[m - 1].renamed("", |x| format!("v{m}R.{x}"));
        let (v, off) = direct_product(&format!("V_{m}"), &left, &right);
        // Δ_{H_{m-1}} in V_m: H_{m-1} ⊂ H_m keeps its generator indices at
        // the end of H_m's list.
        let base_off = (h[m].gens.len() - h[m - 1].gens.len()) as u32;
        let diag: Vec<FreeWord> = (0..h[m - 1].gens.len() as u32)
            .map(|x| FreeWord::from_runs([(base_off + x, 1), (off + x, 1)]))
            .collect();
        let mut gm = amalgam(&format!("G_{m}"), &v, &g[m - 1], &diag, &hn_in_g[m - 1]);
        gm.name = format!("G_{m}");
        g.push(gm);
        hn_in_g.push((0..h[m].gens.len() as u32).map(FreeWord::gen).collect());
    }

    let c_n = double(&format!("C_{n}"), &g[n], &hn_in_g[n]);
    let d_n = double(&format!("D_{n}"), &l[n], &a_in_l[n]);

    let top_half: Vec<GroupDescriptor> = std::iter::once(desc(&terminal.s)).chain(p.iter().map(desc)).collect();
    let mut a_ranks = vec![terminal.a0_rank()];
    a_ranks.extend(blocks.iter().map(|b| b.action.kernel_rank()));
    let top_edges_half: Vec<GroupDescriptor> = a_ranks
        .iter()
        .enumerate()
        .take(n)
        .map(|(i, &r)| free_desc(&format!("A_{i}"), r))
        .collect();
    let top = mirror(top_half, top_edges_half, free_desc(&format!("A_{n}"), a_ranks[n]), n);

    let mut bottom_half = vec![desc(&terminal.t)];
    for m in 1..=n {
        bottom_half.push(GroupDescriptor {
            name: format!("H_{m} x H_{}", m - 1),
            gens: h[m].gens.len() + h[m - 1].gens.len(),
            rels: h[m].rels.len() + h[m - 1].rels.len() + h[m].gens.len() * h[m - 1].gens.len(),
        });
    }
    let bottom_edges_half: Vec<GroupDescriptor> = (0..n).map(|i| desc(&h[i])).collect();
    let bottom = mirror(bottom_half, bottom_edges_half, desc(&h[n]), n);

    Ok(ChainAssembly {
        n,
        terminal: terminal.kind,
        terminal_verified: terminal.verified,
        synthetic_levels: blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.synthetic)
            .map(|(i, _)| i + 1)
            .collect(),
        top,
        bottom,
        h,
        l,
        g,
        c_n,
        d_n,
    })
}

fn mirror(half: Vec<GroupDescriptor>, edges_half: Vec<GroupDescriptor>, middle: GroupDescriptor, n: usize) -> SegmentGraph {
    let mut vertices = half.clone();
    vertices.extend(half.into_iter().rev());
    let mut edges = edges_half.clone();
    edges.push(middle);
    edges.extend(edges_half.into_iter().rev());
    let scale: Vec<u32> = (0..=n).map(|i| (n - i) as u32).collect();
    let mut scale_exponents = scale.clone();
    scale_exponents.extend(scale.into_iter().rev());
    SegmentGraph {
        vertices,
        edges,
        scale_exponents,
    }
}

/// Generator and relator counts of `D_n` from the block data alone.
pub fn tally_double_of_l(blocks: &[ChainBlock], terminal: &TerminalSpec) -> (usize, usize) {
    let mut gens = terminal.s.gens.len();
    let mut rels = terminal.s.rels.len();
    for b in blocks {
        let (l, k) = (b.action.kernel_rank(), b.action.base_rank());
        gens += l + k;
        rels += l * k + k;
    }
    let an = blocks
        .last()
        .map(|b| b.action.kernel_rank())
        .unwrap_or(terminal.a0_rank());
    (2 * gens, 2 * rels + an)
}

impl ChainAssembly {
    /// All presentations as text blocks, in a fixed order.
    pub fn presentations_text(&self) -> String {
        let mut out = String::new();
        for p in self.h.iter().chain(&self.l).chain(&self.g) {
            out.push_str(&p.to_text());
        }
        out.push_str(&self.c_n.to_text());
        out.push_str(&self.d_n.to_text());
        out
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}", self.n);
        for (label, seg) in [("top", &self.top), ("bottom", &self.bottom)] {
            let names: Vec<&str> = seg.vertices.iter().map(|v| v.name.as_str()).collect();
            let _ = writeln!(s, "{label}: {}", names.join(" -- "));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_one_over_example1() {
        let term = TerminalSpec::example1(2);
        let block = synthetic_block(2);
        let asm = assemble_chain(&[block.clone()], &term).unwrap();
        let names: Vec<&str> = asm.top.vertices.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["S", "P_1", "P_1", "S"]);
        assert_eq!(asm.bottom.vertices.len(), 4);
        assert!(asm.top.is_symmetric() && asm.bottom.is_symmetric());
        let (g, r) = tally_double_of_l(&[block], &term);
        assert_eq!((asm.d_n.gens.len(), asm.d_n.rels.len()), (g, r));
    }

    #[test]
    fn n_zero_and_rank_mismatch() {
        let term = TerminalSpec::example1(2);
        let asm = assemble_chain(&[], &term).unwrap();
        assert_eq!(asm.top.edges.len(), 1);
        assert_eq!(asm.top.vertices.len(), 2);
        assert!(matches!(
            assemble_chain(&[synthetic_block(3)], &term),
            Err(ChainError::RankMismatch { level: 1, .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let term = TerminalSpec::example1(2);
        let asm = assemble_chain(&[synthetic_block(2), synthetic_block(3)], &term).unwrap();
        assert_eq!(asm.top.vertices.len(), 6);
        let text = asm.presentations_text();
        let back = Presentation::parse_blocks(&text).unwrap();
        assert_eq!(back.len(), 3 + 3 + 3 + 2);
        assert_eq!(back.last().unwrap(), &asm.d_n);
    }
}
