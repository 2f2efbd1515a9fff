use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde_json::{json, Value};

use curvchain::complex::{format_angle, text, validate, PE2Complex};
use curvchain::distortion::{
    chained_table, example1_length_table, example1_witness_table, example1_witness_word, fit_growth,
    hyperbolic_step_table, upper_model_check, witness_sequence, ChainLink, GrowthRow, GrowthTable,
};
use curvchain::group::bass::{bass_diagonal_test, bass_factor_test, embed_phi_homomorphism_test, BassSetup};
use curvchain::group::dyadic::bs_demo;
use curvchain::group::presentation::{assemble_chain, synthetic_block, tally_double_of_l, ChainBlock, Presentation, TerminalSpec};
use curvchain::group::{FreeWord, MonodromyAction, DEFAULT_LETTER_CAP};
use curvchain::link::{build_link_at, check_npc, DotGraph};
use curvchain::pipeline::{fundamental_group_presentation, glue_chain, run_yk, ChainBase, ChainStage, YkRun};
use curvchain::spine::{build_spine, spine_to_dot};
use curvchain::templates::build_xk;

use crate::config::Config;
use crate::report::Recorder;
use crate::{ChainBaseKind, Cli, Command, DistortCommand, ExportFormat, ExportWhat, PresentationArgs, TerminalChoice};

/// Bad arguments that clap cannot see; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn read_artifact(p: &Path) -> anyhow::Result<String> {
    if !p.exists() {
        bail!("missing artifact {}", p.display());
    }
    std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())
}

struct Ctx {
    out: PathBuf,
    cfg: Config,
}

impl Ctx {
    fn recorder(&self, command: &str, sub: &str) -> anyhow::Result<Recorder> {
        Recorder::new(command, self.out.join(command).join(sub))
    }
}

pub fn run(cli: Cli) -> anyhow::Result<bool> {
    let cfg = Config::load(cli.config.as_deref())?;
    let out = cli.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let ctx = Ctx { out, cfg };
    match cli.command {
        Command::BuildXk { k } => build_xk_cmd(&ctx, k),
        Command::CheckNpc { file, strict } => check_npc_cmd(&ctx, &file, strict),
        Command::PipelineYk { k, no_monodromy } => pipeline_yk(&ctx, k, !no_monodromy),
        Command::Chain { ks, base, base_rank } => chain_cmd(&ctx, &ks, base, base_rank),
        Command::Monodromy { from_pipeline } => monodromy_cmd(&ctx, &from_pipeline),
        Command::Presentations(args) => presentations_cmd(&ctx, &args),
        Command::BassTest { samples, seed } => bass_cmd(&ctx, samples, seed),
        Command::BsDemo => bs_demo_cmd(&ctx),
        Command::Distort { what } => distort_cmd(&ctx, what),
        Command::Export { what, from, format } => export_cmd(&ctx, what, &from, format),
    }
}

fn rank_arg(ctx: &Ctx, k: Option<usize>) -> anyhow::Result<usize> {
    let k = k.or(ctx.cfg.k).unwrap_or(1);
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    Ok(k)
}

fn build_xk_cmd(ctx: &Ctx, k: Option<usize>) -> anyhow::Result<bool> {
    let k = rank_arg(ctx, k)?;
    let mut rec = ctx.recorder("build-xk", &format!("k{k}"))?;
    rec.input("k", k);
    let x = build_xk(k);
    let link = build_link_at(&x, 0);
    let spine = build_spine(&x);
    rec.write("xk.complex", &text::emit(&x))?;
    rec.write("link.dot", &link.to_dot())?;
    rec.write("spine.dot", &spine_to_dot(&spine))?;
    let valid = validate(&x);
    let npc = check_npc(&x);
    let bipartite = link.bipartition().is_some();
    rec.finish(
        valid.pass() && bipartite,
        json!({
            "counts": x.counts(),
            "link_nodes": link.nodes.len(),
            "link_edges": link.edges.len(),
            "link_bipartite": bipartite,
            "validation": valid,
            "npc": npc,
            "spine_h1_rank": spine.h1_rank(),
        }),
    )
}

fn load_complex(p: &Path) -> anyhow::Result<PE2Complex> {
    let t = read_artifact(p)?;
    text::load(&t).with_context(|| format!("loading {}", p.display()))
}

fn check_npc_cmd(ctx: &Ctx, file: &Path, strict: bool) -> anyhow::Result<bool> {
    let c = load_complex(file)?;
    let mut rec = ctx.recorder("check-npc", &stem(file))?;
    rec.input("file", file.display().to_string()).input("strict", strict);
    let npc = check_npc(&c);
    let valid = validate(&c);
    let pass = valid.pass() && npc.pass && (!strict || npc.strict);
    rec.finish(pass, json!({ "counts": c.counts(), "validation": valid, "npc": npc }))
}

fn write_yk(rec: &mut Recorder, run: &YkRun) -> anyhow::Result<()> {
    rec.write("yk.complex", &text::emit(&run.complex))?;
    rec.write("cover.complex", &text::emit(&run.cover.complex))?;
    rec.write("link.dot", &build_link_at(&run.complex, 0).to_dot())?;
    if let Some(m) = &run.monodromy {
        rec.write("monodromy.txt", &m.action.to_text())?;
        rec.write_json("monodromy_certificate.json", m)?;
    }
    Ok(())
}

fn pipeline_yk(ctx: &Ctx, k: Option<usize>, extract: bool) -> anyhow::Result<bool> {
    let k = rank_arg(ctx, k)?;
    let mut rec = ctx.recorder("pipeline-yk", &format!("k{k}"))?;
    rec.input("k", k).input("extract_monodromy", extract);
    match run_yk(k, extract) {
        Ok(run) => {
            write_yk(&mut rec, &run)?;
            rec.finish(true, &run.report)
        }
        Err(e) => {
            eprintln!("pipeline-yk: {e}");
            rec.finish(false, json!({ "error": e.to_string() }))
        }
    }
}

fn chain_cmd(ctx: &Ctx, ks: &[usize], base: ChainBaseKind, base_rank: Option<usize>) -> anyhow::Result<bool> {
    if ks.contains(&0) {
        return Err(usage("chain ranks must be at least 1"));
    }
    let rank = base_rank.or(ks.first().copied()).unwrap_or(1);
    if rank == 0 {
        return Err(usage("base rank must be at least 1"));
    }
    let tag = match base {
        ChainBaseKind::Gamma => "gamma",
        ChainBaseKind::Y => "y",
    };
    let list: Vec<String> = ks.iter().map(usize::to_string).collect();
    let sub = format!("{tag}{rank}_{}", if list.is_empty() { "none".into() } else { list.join("-") });
    let mut rec = ctx.recorder("chain", &sub)?;
    rec.input("ks", ks).input("base", tag).input("base_rank", rank);

    let k0 = match base {
        ChainBaseKind::Gamma => ChainBase::gamma_diagonal(rank),
        ChainBaseKind::Y => ChainBase::from_yk(&run_yk(rank, false)?),
    };
    let mut stages = Vec::with_capacity(ks.len());
    for &k in ks {
        stages.push(ChainStage::from_yk(&run_yk(k, false)?));
    }
    let run = match glue_chain(&k0, &stages) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("chain: {e}");
            return rec.finish(false, json!({ "error": e.to_string() }));
        }
    };
    let mut presentations = vec![fundamental_group_presentation("H_0", &k0.complex)];
    for i in 1..=stages.len() {
        let partial = if i == stages.len() {
            run.complex.clone()
        } else {
            glue_chain(&k0, &stages[..i])?.complex
        };
        presentations.push(fundamental_group_presentation(&format!("H_{i}"), &partial));
    }
    let text_blocks: String = presentations.iter().map(Presentation::to_text).collect();
    rec.write("kn.complex", &text::emit(&run.complex))?;
    rec.write("h_presentations.txt", &text_blocks)?;
    let counts: Vec<Value> = presentations
        .iter()
        .map(|p| json!({ "name": p.name, "gens": p.gens.len(), "rels": p.rels.len() }))
        .collect();
    rec.finish(run.report.pass, json!({ "chain": run.report, "presentations": counts }))
}

fn monodromy_cmd(ctx: &Ctx, from: &Path) -> anyhow::Result<bool> {
    let recorded: Value = serde_json::from_str(&read_artifact(from)?).with_context(|| format!("parsing {}", from.display()))?;
    let k = recorded["certificates"]["k"]
        .as_u64()
        .ok_or_else(|| usage(format!("{} is not a pipeline-yk report", from.display())))? as usize;
    let mut rec = ctx.recorder("monodromy", &format!("k{k}"))?;
    rec.input("from_pipeline", from.display().to_string()).input("k", k);
    let run = run_yk(k, true)?;
    let cert = run.monodromy.as_ref().expect("extraction requested");
    let mut fresh = serde_json::to_value(&run.report)?;
    let mut old = recorded["certificates"].clone();
    for v in [&mut fresh, &mut old] {
        if let Some(o) = v.as_object_mut() {
            o.remove("monodromy");
        }
    }
    let replay_matches = fresh == old;
    rec.write("monodromy.txt", &cert.action.to_text())?;
    rec.write_json("monodromy_certificate.json", cert)?;
    rec.finish(
        cert.pass() && replay_matches,
        json!({
            "replay_matches": replay_matches,
            "relators_checked": cert.relators_checked,
            "relator_failures": cert.relator_failures,
            "inverse_verified": cert.inverse_verified,
            "kernel_rank": cert.action.kernel_rank(),
            "base_rank": cert.action.base_rank(),
        }),
    )
}

fn presentations_cmd(ctx: &Ctx, args: &PresentationArgs) -> anyhow::Result<bool> {
    let (terminal, tname) = match args.terminal {
        TerminalChoice::Example1 => {
            if args.k == 0 {
                return Err(usage("k must be at least 1"));
            }
            (TerminalSpec::example1(args.k), "example1")
        }
        TerminalChoice::Example2 => {
            let y1 = run_yk(1, true)?;
            (TerminalSpec::example2(&y1.monodromy.expect("extracted").action), "example2")
        }
        TerminalChoice::Example3 => (TerminalSpec::example3(args.alpha), "example3"),
    };
    let mut rec = ctx.recorder("presentations", &format!("n{}_{tname}", args.n))?;
    rec.input("n", args.n)
        .input("terminal", tname)
        .input("k", args.k)
        .input("extracted", args.extracted);
    let mut blocks: Vec<ChainBlock> = Vec::with_capacity(args.n);
    let mut rank = terminal.a0_rank();
    for level in 1..=args.n {
        let block = if level == 1 && args.extracted && rank <= 2 {
            let run = run_yk(rank, true)?;
            ChainBlock {
                action: run.monodromy.expect("extracted").action,
                synthetic: false,
            }
        } else {
            synthetic_block(rank)
        };
        rank = block.action.kernel_rank();
        blocks.push(block);
    }
    let asm = assemble_chain(&blocks, &terminal)?;
    rec.write("presentations.txt", &asm.presentations_text())?;
    rec.write("summary.txt", &asm.summary())?;
    rec.write_json("assembly.json", &asm)?;
    let (gens, rels) = tally_double_of_l(&blocks, &terminal);
    let tally_ok = (gens, rels) == (asm.d_n.gens.len(), asm.d_n.rels.len());
    let blocks_ok = asm.top.vertices.len() == 2 * args.n + 2 && asm.bottom.vertices.len() == 2 * args.n + 2;
    let symmetric = asm.top.is_symmetric() && asm.bottom.is_symmetric();
    rec.finish(
        tally_ok && blocks_ok && symmetric,
        json!({
            "top": asm.top,
            "bottom": asm.bottom,
            "synthetic_levels": asm.synthetic_levels,
            "terminal_verified": asm.terminal_verified,
            "d_n": { "gens": asm.d_n.gens.len(), "rels": asm.d_n.rels.len() },
            "independent_tally": { "gens": gens, "rels": rels, "matches": tally_ok },
            "vertex_blocks_per_side": asm.top.vertices.len(),
            "symmetric": symmetric,
        }),
    )
}

fn bass_cmd(ctx: &Ctx, samples: Option<usize>, seed: Option<u64>) -> anyhow::Result<bool> {
    let samples = samples.or(ctx.cfg.samples).unwrap_or(1000);
    let seed = seed.or(ctx.cfg.seed).unwrap_or(7);
    let mut rec = ctx.recorder("bass-test", "all")?;
    rec.input("samples", samples).seed(seed);
    let mut reports = Vec::new();
    for setup in BassSetup::standard() {
        reports.push(bass_factor_test(&setup, samples, seed)?);
        reports.push(bass_diagonal_test(&setup, samples, seed)?);
        reports.push(embed_phi_homomorphism_test(&setup, samples, seed)?);
    }
    let pass = reports.iter().all(|r| r.pass());
    rec.finish(pass, &reports)
}

fn bs_demo_cmd(ctx: &Ctx) -> anyhow::Result<bool> {
    let rec = ctx.recorder("bs-demo", "demo")?;
    let r = bs_demo();
    rec.finish(r.pass, &r)
}

fn parse_base(spec: &str) -> anyhow::Result<usize> {
    let k = spec
        .strip_prefix("example1:k=")
        .and_then(|k| k.parse::<usize>().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| usage(format!("base witness {spec:?} is not of the form example1:k=<k>")))?;
    Ok(k)
}

fn load_action(p: &Path) -> anyhow::Result<MonodromyAction> {
    MonodromyAction::from_text(&read_artifact(p)?).with_context(|| format!("parsing {}", p.display()))
}

fn distort_cmd(ctx: &Ctx, what: DistortCommand) -> anyhow::Result<bool> {
    match what {
        DistortCommand::Example1 { k, nmax } => {
            let k = rank_arg(ctx, k)?;
            let nmax = nmax.or(ctx.cfg.nmax).unwrap_or(200);
            let mut rec = ctx.recorder("distort", &format!("example1_k{k}"))?;
            rec.input("k", k).input("nmax", nmax);
            let mut cols = Vec::with_capacity(k);
            for i in 1..=k {
                cols.push(example1_length_table(k, i, nmax)?);
            }
            let mut lengths = String::from("n");
            for i in 1..=k {
                lengths.push_str(&format!(",x_{i}"));
            }
            lengths.push('\n');
            for n in 0..=nmax {
                lengths.push_str(&n.to_string());
                for c in &cols {
                    lengths.push_str(&format!(",{}", c[n]));
                }
                lengths.push('\n');
            }
            rec.write("lengths.csv", &lengths)?;
            let table = example1_witness_table(k, nmax)?;
            rec.write("witness.csv", &table.to_csv()?)?;
            let fit = fit_growth(&table)?;
            rec.write_json("fit.json", &fit)?;
            rec.finish(fit.depth == 0, json!({ "fit": fit }))
        }
        DistortCommand::Chain { monodromy, base, nmax } => {
            let k = parse_base(&base)?;
            let nmax = nmax.or(ctx.cfg.nmax).unwrap_or(18);
            let actions = monodromy.iter().map(|p| load_action(p)).collect::<anyhow::Result<Vec<_>>>()?;
            let mut rec = ctx.recorder("distort", "chain")?;
            let names: Vec<String> = monodromy.iter().map(|p| p.display().to_string()).collect();
            rec.input("monodromy", names).input("base", &base).input("nmax", nmax);
            if actions.len() == 1 {
                let ch = chained_table(k, &actions[0], &FreeWord::gen(0), nmax)?;
                rec.write("chain.csv", &ch.table.to_csv()?)?;
                rec.write_json("chain_details.json", &ch)?;
                let fit = fit_growth(&ch.table)?;
                let upper = upper_model_check(&ch);
                let explicit_ok = ch.details.iter().all(|d| d.explicit_agrees != Some(false));
                rec.write_json("fit.json", &fit)?;
                rec.finish(
                    upper.pass && explicit_ok,
                    json!({ "fit": fit, "upper_model": upper, "explicit_rows_agree": explicit_ok }),
                )
            } else {
                let chain: Vec<ChainLink> = actions
                    .into_iter()
                    .map(|action| ChainLink {
                        action,
                        letter: FreeWord::gen(0),
                    })
                    .collect();
                let mut rows = Vec::new();
                for n in 1..=nmax {
                    let g1 = example1_witness_word(k, n)?;
                    match witness_sequence(&g1, 3 * n as u128, &chain, DEFAULT_LETTER_CAP) {
                        Ok(seq) => {
                            let last = seq.last().expect("nonempty");
                            rows.push(GrowthRow {
                                x: n as u64,
                                kernel_length: last.length as u128,
                                ambient_budget: last.budget,
                            });
                        }
                        Err(_) => break,
                    }
                }
                let table = GrowthTable::new("chain-explicit", rows);
                rec.write("chain.csv", &table.to_csv()?)?;
                let fit = fit_growth(&table).ok();
                rec.finish(table.is_nondecreasing(), json!({ "rows": table.rows.len(), "fit": fit }))
            }
        }
        DistortCommand::Hyperbolic {
            monodromy,
            xmax,
            samples,
            seed,
        } => {
            let action = load_action(&monodromy)?;
            let xmax = xmax.or(ctx.cfg.xmax).unwrap_or(18);
            let samples = samples.or(ctx.cfg.samples).unwrap_or(8);
            let seed = seed.or(ctx.cfg.seed).unwrap_or(11);
            let mut rec = ctx.recorder("distort", "hyperbolic")?;
            rec.input("monodromy", monodromy.display().to_string())
                .input("xmax", xmax)
                .input("samples", samples)
                .seed(seed);
            let table = hyperbolic_step_table(&action, &FreeWord::gen(0), xmax, samples, seed)?;
            rec.write("hyperbolic.csv", &table.to_csv()?)?;
            let fit = fit_growth(&table)?;
            rec.write_json("fit.json", &fit)?;
            rec.finish(table.is_nondecreasing(), json!({ "fit": fit, "nondecreasing": table.is_nondecreasing() }))
        }
        DistortCommand::Fit { csv } => {
            let table = GrowthTable::from_csv(&stem(&csv), &read_artifact(&csv)?)?;
            let mut rec = ctx.recorder("distort", &format!("fit_{}", stem(&csv)))?;
            rec.input("csv", csv.display().to_string());
            let fit = fit_growth(&table)?;
            rec.write_json("fit.json", &fit)?;
            rec.finish(true, json!({ "fit": fit }))
        }
    }
}

fn complex_json(c: &PE2Complex) -> Value {
    let edges: Vec<Value> = c
        .edges()
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "tail": c.vertices()[e.tail],
                "head": c.vertices()[e.head],
                "length": e.length.to_string(),
                "label": e.label,
            })
        })
        .collect();
    let faces: Vec<Value> = c
        .faces()
        .iter()
        .map(|f| {
            let steps: Vec<Value> = f
                .boundary
                .iter()
                .map(|s| json!({ "edge": c.edges()[s.edge].id, "forward": s.forward }))
                .collect();
            let angles: Vec<String> = f.angles.iter().map(format_angle).collect();
            json!({ "id": f.id, "shape": f.shape, "boundary": steps, "angles": angles })
        })
        .collect();
    json!({ "vertices": c.vertices(), "edges": edges, "faces": faces })
}

fn dot_json(g: &DotGraph) -> Value {
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|(a, b, l)| json!({ "a": a, "b": b, "label": l }))
        .collect();
    json!({ "name": g.name, "nodes": g.nodes, "edges": edges })
}

fn export_cmd(ctx: &Ctx, what: ExportWhat, from: &Path, format: ExportFormat) -> anyhow::Result<bool> {
    use ExportFormat::*;
    use ExportWhat::*;
    let ext = match (what, format) {
        (Link, Dot) => "dot",
        (Complex, Text) | (Presentations, Text) => "txt",
        (Table, Csv) => "csv",
        (_, Json) => "json",
        _ => return Err(usage(format!("{what:?} cannot be exported as {format:?}"))),
    };
    let input = read_artifact(from)?;
    let pretty = |v: &Value| -> anyhow::Result<String> { Ok(serde_json::to_string_pretty(v)? + "\n") };
    let body = match what {
        Link => {
            let c = text::load(&input)?;
            if c.vertices().is_empty() {
                bail!("{} has no vertices", from.display());
            }
            let g = build_link_at(&c, 0).to_dot_graph();
            match format {
                Dot => g.render(),
                _ => pretty(&dot_json(&g))?,
            }
        }
        Complex => {
            let c = text::load(&input)?;
            match format {
                Text => text::emit(&c),
                _ => pretty(&complex_json(&c))?,
            }
        }
        Table => {
            let t = GrowthTable::from_csv(&stem(from), &input)?;
            match format {
                Csv => t.to_csv()?,
                _ => serde_json::to_string_pretty(&t)? + "\n",
            }
        }
        Presentations => {
            let ps = Presentation::parse_blocks(&input)?;
            match format {
                Text => ps.iter().map(Presentation::to_text).collect(),
                _ => serde_json::to_string_pretty(&ps)? + "\n",
            }
        }
    };
    let name = format!("{}_{}.{ext}", format!("{what:?}").to_lowercase(), stem(from));
    let mut rec = ctx.recorder("export", &name.replace('.', "_"))?;
    rec.input("what", format!("{what:?}").to_lowercase())
        .input("from", from.display().to_string())
        .input("format", format!("{format:?}").to_lowercase());
    rec.write(&name, &body)?;
    rec.finish(true, json!({ "file": name, "bytes": body.len() }))
}
