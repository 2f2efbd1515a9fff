//! End-to-end construction of `Y_k` with every certificate checked, and
//! iterated glueing of such complexes along ultra-convex roses.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{amalgamate, validate, CellCounts, CellIso, ComplexError, PE2Complex, Subcomplex1};
use crate::covering::{
    build_branched_cover, collect_classes, gcd_with_all, rose_edge_ids, select_parameters, select_rose,
    CoverComplex, CoverError, CycleKind,
};
use crate::link::{build_link_at, check_npc, check_ultraconvex, combinatorial_girth, LinkError, NpcCertificate, UltraConvexCertificate};
use crate::morse::{
    check_morse_conditions, extract_monodromy, kernel_rank, label_xk_family, EdgeRole, MonodromyCertificate, MorseError,
    MorseLabeling,
};
use crate::group::presentation::Presentation;
use crate::group::FreeWord;
use crate::spine::{build_spine, link_to_spine, SpineError};
use crate::templates::{build_gamma_diagonal, build_xk, gamma_x_id};

pub const MIN_COVER_GIRTH: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("k must be at least 1")]
    ZeroRank,
    #[error("stage {stage}: {detail}")]
    Certificate { stage: &'static str, detail: String },
    #[error("glueing step {step}: rose of rank {rose} cannot receive a base of rank {base}")]
    RankMismatch { step: usize, rose: usize, base: usize },
    #[error("glueing step {step}: rose edge {rose} and base edge {base} have incompatible lengths")]
    LengthMismatch { step: usize, rose: String, base: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Spine(#[from] SpineError),
    #[error(transparent)]
    Morse(#[from] MorseError),
}

fn fail(stage: &'static str, detail: impl Into<String>) -> PipelineError {
    PipelineError::Certificate {
        stage,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterChoice {
    pub tree: Vec<String>,
    pub lambda: Vec<i64>,
    pub ell_values: BTreeMap<String, i64>,
    pub m: i64,
    pub n: u64,
    pub deleted_cell: String,
    pub short_cycles: usize,
    pub middle_cycles: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseSummary {
    pub c0: bool,
    pub c1: bool,
    pub directional_links: usize,
    pub kernel_rank: usize,
    pub expected_kernel_rank: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonodromySummary {
    pub relators_checked: usize,
    pub relator_failures: Vec<String>,
    pub inverse_verified: bool,
    pub witnesses: usize,
    pub image_letter_count: u64,
}

/// Everything decided and verified while building `Y_k`. Contains no
/// timing, so two runs with the same `k` serialize identically.
#[derive(Debug, Clone, Serialize)]
pub struct YkReport {
    pub k: usize,
    pub parameters: ParameterChoice,
    pub template_counts: CellCounts,
    pub cover_counts: CellCounts,
    pub counts: CellCounts,
    pub euler_characteristic: i64,
    pub validation_pass: bool,
    pub npc: NpcCertificate,
    pub cover_girth: Option<usize>,
    pub deck_ok: bool,
    pub rose_edges: Vec<String>,
    pub ultraconvex: UltraConvexCertificate,
    pub morse: MorseSummary,
    pub monodromy: Option<MonodromySummary>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct YkRun {
    pub report: YkReport,
    pub cover: CoverComplex,
    pub complex: PE2Complex,
    pub labeling: MorseLabeling,
    pub rose_edges: Vec<String>,
    pub kernel_edges: Vec<String>,
    pub monodromy: Option<MonodromyCertificate>,
}

/// Builds `X_k`, its cover and `Y_k`, checking each certificate in turn.
/// The monodromy is extracted and verified when `extract` is set.
pub fn run_yk(k: usize, extract: bool) -> Result<YkRun, PipelineError> {
    if k == 0 {
        return Err(PipelineError::ZeroRank);
    }
    let x = build_xk(k);
    let link = build_link_at(&x, 0);
    let spine = build_spine(&x);
    let iota = link_to_spine(&x, &link, &spine)?;
    let hz = |e: usize| x.edges()[e].id.starts_with("a_");
    let classes = collect_classes(&x, &link, &spine, &hz)?;
    let spec = select_parameters(&spine, &link, &iota, &classes, k);
    if gcd_with_all(spec.n, &spec.ell_values) != 1 {
        return Err(fail("parameters", format!("N = {} shares a factor with some ℓ", spec.n)));
    }

    let cover = build_branched_cover(&x, &spine, &spec.cocycle, spec.n)?;
    let deck_ok = cover.check_projection_and_deck();
    if !deck_ok {
        return Err(fail("cover", "projection or deck action inconsistent"));
    }
    let cover_girth = combinatorial_girth(&build_link_at(&cover.complex, 0));
    if cover_girth.is_some_and(|g| g < MIN_COVER_GIRTH) {
        return Err(fail("cover", format!("link girth {cover_girth:?} below {MIN_COVER_GIRTH}")));
    }
    let (_, _) = select_rose(&cover, spec.m, k)?;

    let deleted = cover
        .complex
        .edges()
        .iter()
        .filter(|e| e.label.starts_with("a_"))
        .map(|e| e.id.clone())
        .min()
        .ok_or_else(|| fail("carve", "no horizontal edge"))?;
    let y = cover.complex.delete_open_cells(&deleted)?;

    let validation = validate(&y);
    if !validation.pass() {
        return Err(fail("validate", format!("{:?}", validation.violations.first())));
    }
    let npc = check_npc(&y);
    if !npc.pass || !npc.strict {
        return Err(fail("npc", format!("pass {} strict {}", npc.pass, npc.strict)));
    }
    let rose_ids = rose_edge_ids(spec.m, k);
    let refs: Vec<&str> = rose_ids.iter().map(String::as_str).collect();
    let ultraconvex = check_ultraconvex(&y, &Subcomplex1::from_edges(&y, &refs)?)?;
    if !ultraconvex.pass {
        return Err(fail("ultraconvex", "rose link points closer than 2π"));
    }

    let labeling = label_xk_family(&y)?;
    let cond = check_morse_conditions(&y, &labeling);
    let rank = kernel_rank(&y, &labeling)?;
    let expected = 8 * spec.n - 1;
    if !cond.c0 || !cond.c1 || rank as u64 != expected {
        return Err(fail("morse", format!("c0 {} c1 {} rank {rank} expected {expected}", cond.c0, cond.c1)));
    }
    let chi = y.euler_characteristic();
    if k == 1 && chi != 0 {
        return Err(fail("euler", format!("χ = {chi}")));
    }
    let kernel_edges: Vec<String> = y
        .edges()
        .iter()
        .zip(&labeling.roles)
        .filter(|(_, r)| **r == EdgeRole::Horizontal)
        .map(|(e, _)| e.id.clone())
        .collect();

    let monodromy = if extract {
        let cert = extract_monodromy(&y, &labeling, &rose_ids)?;
        if !cert.pass() {
            return Err(fail(
                "monodromy",
                format!("{} relator failures, inverse {}", cert.relator_failures.len(), cert.inverse_verified),
            ));
        }
        Some(cert)
    } else {
        None
    };

    let parameters = ParameterChoice {
        tree: spine.tree_description(),
        lambda: spec.lambda.clone(),
        ell_values: spec.ell_values.clone(),
        m: spec.m,
        n: spec.n,
        deleted_cell: deleted,
        short_cycles: classes.iter().filter(|c| c.kind == CycleKind::Short).count(),
        middle_cycles: classes.iter().filter(|c| c.kind == CycleKind::Middle).count(),
    };
    let report = YkReport {
        k,
        parameters,
        template_counts: x.counts(),
        cover_counts: cover.complex.counts(),
        counts: y.counts(),
        euler_characteristic: chi,
        validation_pass: true,
        npc,
        cover_girth,
        deck_ok,
        rose_edges: rose_ids.clone(),
        ultraconvex,
        morse: MorseSummary {
            c0: cond.c0,
            c1: cond.c1,
            directional_links: cond.links.len(),
            kernel_rank: rank,
            expected_kernel_rank: expected,
        },
        monodromy: monodromy.as_ref().map(|c| MonodromySummary {
            relators_checked: c.relators_checked,
            relator_failures: c.relator_failures.clone(),
            inverse_verified: c.inverse_verified,
            witnesses: c.witnesses.len(),
            image_letter_count: c.image_letter_count,
        }),
        notes: vec![
            "short paths for M are enumerated as immersed paths; backtracking paths have the same 1-chain as their reduction".into(),
            "the deleted cell is the lexicographically least horizontal edge".into(),
        ],
    };
    Ok(YkRun {
        report,
        cover,
        complex: y,
        labeling,
        rose_edges: rose_ids,
        kernel_edges,
        monodromy,
    })
}

/// A complex with a rose along which the next stage is attached.
#[derive(Debug, Clone)]
pub struct ChainBase {
    pub label: String,
    pub complex: PE2Complex,
    pub rose: Vec<String>,
}

/// A complex attached along `base_rose`, exposing `kernel_rose` for the
/// stage after it.
#[derive(Debug, Clone)]
pub struct ChainStage {
    pub label: String,
    pub complex: PE2Complex,
    pub base_rose: Vec<String>,
    pub kernel_rose: Vec<String>,
}

impl ChainBase {
    pub fn gamma_diagonal(k: usize) -> Self {
        ChainBase {
            label: format!("Gamma_{k} diagonal"),
            complex: build_gamma_diagonal(k),
            rose: (1..=k).map(gamma_x_id).collect(),
        }
    }

    /// `Y_k` with its base rose exposed.
    pub fn from_yk(run: &YkRun) -> Self {
        ChainBase {
            label: format!("Y_{}", run.report.k),
            complex: run.complex.clone(),
            rose: run.rose_edges.clone(),
        }
    }
}

impl ChainStage {
    pub fn from_yk(run: &YkRun) -> Self {
        ChainStage {
            label: format!("Y_{}", run.report.k),
            complex: run.complex.clone(),
            base_rose: run.rose_edges.clone(),
            kernel_rose: run.kernel_edges.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStepReport {
    pub step: usize,
    pub label: String,
    pub rank: usize,
    pub scaled_by_sqrt2: u32,
    pub rose_ultraconvex: bool,
    pub base_ultraconvex: bool,
    pub counts: CellCounts,
    pub npc: NpcCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub base: String,
    pub base_counts: CellCounts,
    pub base_npc: NpcCertificate,
    pub strict_required: bool,
    pub steps: Vec<ChainStepReport>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ChainRun {
    pub report: ChainReport,
    pub complex: PE2Complex,
    pub rose: Vec<String>,
}

/// Attaches each stage to the current rose, checking ranks, edge lengths,
/// ultra-convexity of the incoming base rose and the link condition after
/// every step. The receiving rose only needs distinct link points; whether
/// it is ultra-convex too is recorded.
/// Strictness is required throughout when the base is strict. Stage cells
/// are prefixed `K{i}.` so ids never collide.
pub fn glue_chain(base: &ChainBase, stages: &[ChainStage]) -> Result<ChainRun, PipelineError> {
    let base_npc = check_npc(&base.complex);
    if !base_npc.pass {
        return Err(fail("chain base", "base complex fails the link condition"));
    }
    let strict_required = base_npc.strict;
    let mut current = base.complex.clone();
    let mut rose = base.rose.clone();
    let mut steps = Vec::with_capacity(stages.len());
    for (i, stage) in stages.iter().enumerate() {
        let step = i + 1;
        if rose.len() != stage.base_rose.len() {
            return Err(PipelineError::RankMismatch {
                step,
                rose: rose.len(),
                base: stage.base_rose.len(),
            });
        }
        let target = current.edges()[current.edge_id(&rose[0])?].length;
        let mut piece = stage.complex.clone();
        let mut scaled = 0;
        while piece.edges()[piece.edge_id(&stage.base_rose[0])?].length < target && scaled < 2 {
            piece = piece.scaled_by_sqrt2();
            scaled += 1;
        }
        for (r, b) in rose.iter().zip(&stage.base_rose) {
            if current.edges()[current.edge_id(r)?].length != piece.edges()[piece.edge_id(b)?].length {
                return Err(PipelineError::LengthMismatch {
                    step,
                    rose: r.clone(),
                    base: b.clone(),
                });
            }
        }
        let rose_refs: Vec<&str> = rose.iter().map(String::as_str).collect();
        let rose_cert = check_ultraconvex(&current, &Subcomplex1::from_edges(&current, &rose_refs)?)?;
        let base_refs: Vec<&str> = stage.base_rose.iter().map(String::as_str).collect();
        let base_cert = check_ultraconvex(&piece, &Subcomplex1::from_edges(&piece, &base_refs)?)?;
        if !base_cert.pass {
            return Err(fail("chain ultraconvex", format!("step {step}: base rose of {} is not ultra-convex", stage.label)));
        }

        let prefix = format!("K{step}.");
        let piece = piece.with_id_prefix(&prefix)?;
        let pairs: Vec<(String, String)> = rose
            .iter()
            .zip(&stage.base_rose)
            .map(|(r, b)| (r.clone(), format!("{prefix}{b}")))
            .collect();
        let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let iso = CellIso::from_edge_pairs(&current, &piece, &pair_refs)?;
        current = amalgamate(&current, &piece, &iso)?;

        let npc = check_npc(&current);
        if !npc.pass || (strict_required && !npc.strict) {
            return Err(fail("chain npc", format!("step {step}: pass {} strict {}", npc.pass, npc.strict)));
        }
        steps.push(ChainStepReport {
            step,
            label: stage.label.clone(),
            rank: rose.len(),
            scaled_by_sqrt2: scaled,
            rose_ultraconvex: rose_cert.pass,
            base_ultraconvex: base_cert.pass,
            counts: current.counts(),
            npc,
        });
        rose = stage.kernel_rose.iter().map(|e| format!("{prefix}{e}")).collect();
    }
    Ok(ChainRun {
        report: ChainReport {
            base: base.label.clone(),
            base_counts: base.complex.counts(),
            base_npc,
            strict_required,
            steps,
            pass: true,
        },
        complex: current,
        rose,
    })
}

/// Presentation of `π_1(c)`: one generator per edge outside a breadth-first
/// spanning tree, one relator per face. Assumes `c` is connected.
pub fn fundamental_group_presentation(name: &str, c: &PE2Complex) -> Presentation {
    let nv = c.vertices().len();
    let mut in_tree = vec![false; c.edges().len()];
    let mut seen = vec![false; nv];
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (i, e) in c.edges().iter().enumerate() {
        incident[e.tail].push((i, e.head));
        incident[e.head].push((i, e.tail));
    }
    for root in 0..nv {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &incident[v] {
                if !seen[w] {
                    seen[w] = true;
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut index = vec![None; c.edges().len()];
    let mut gens = Vec::new();
    for (i, e) in c.edges().iter().enumerate() {
        if !in_tree[i] {
            index[i] = Some(gens.len() as u32);
            gens.push(e.id.clone());
        }
    }
    let rels = c
        .faces()
        .iter()
        .map(|f| {
            FreeWord::from_runs(
                f.boundary
                    .iter()
                    .filter_map(|s| index[s.edge].map(|g| (g, if s.forward { 1 } else { -1 }))),
            )
        })
        .collect();
    Presentation::new(name, gens, rels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_chain_passes_base_through() {
        let base = ChainBase::gamma_diagonal(2);
        let run = glue_chain(&base, &[]).unwrap();
        assert_eq!(run.complex, base.complex);
        assert_eq!(run.rose, base.rose);
        assert!(run.report.steps.is_empty());
    }

    #[test]
    fn prefixed_ids_are_consistent() {
        let c = build_gamma_diagonal(1).with_id_prefix("K1.").unwrap();
        assert!(c.edge_id("K1.x_1").is_ok());
        assert!(validate(&c).pass());
        assert!(c.with_id_prefix("bad:").is_err());
    }

    #[test]
    fn presentation_of_gamma_squares() {
        let p = fundamental_group_presentation("G", &crate::templates::build_gamma_squares(2));
        assert_eq!(p.gens, ["a_1", "a_2", "t"]);
        assert_eq!(p.rels.len(), 2);
        assert!(p.rels.iter().all(|r| r.len() == 4));
    }
}
