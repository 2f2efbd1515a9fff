//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use curvchain::complex::validate;
use curvchain::covering::collect_classes;
use curvchain::distortion::{
    chained_table, example1_length_table, example1_witness_table, fit_growth, hyperbolic_step_table, upper_model_check,
};
use curvchain::group::bass::{bass_diagonal_test, bass_factor_test, embed_phi_homomorphism_test, BassSetup};
use curvchain::group::dyadic::bs_demo;
use curvchain::group::{example1_monodromy, FreeWord, SdLetter, SemidirectElement, DEFAULT_LETTER_CAP};
use curvchain::link::{build_link, build_link_at, LinkGraph};
use curvchain::pipeline::{glue_chain, run_yk, ChainBase, ChainStage, PipelineError, YkRun};
use curvchain::spine::{build_spine, enumerate_short_cycles, hnt_check, link_to_spine, middle_edge_cycles};
use curvchain::templates::{build_xk, n_id};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, format!("{what} took {e:?}, limit {limit:?}"))
}

fn simple_neighbours(link: &LinkGraph) -> Vec<Vec<usize>> {
    (0..link.nodes.len())
        .map(|u| link.neighbours(u).iter().map(|&(_, w)| w).collect())
        .collect()
}

/// Simple cycles of each length up to `max`, each counted once.
fn cycle_length_census(adj: &[Vec<usize>], max: usize) -> Vec<usize> {
    fn walk(adj: &[Vec<usize>], start: usize, path: &mut Vec<usize>, max: usize, out: &mut Vec<usize>) {
        let u = *path.last().unwrap();
        for &w in &adj[u] {
            if w == start && path.len() >= 3 && path[1] < path[path.len() - 1] {
                out[path.len()] += 1;
            }
            if w > start && !path.contains(&w) && path.len() < max {
                path.push(w);
                walk(adj, start, path, max, out);
                path.pop();
            }
        }
    }
    let mut out = vec![0; max + 1];
    for s in 0..adj.len() {
        walk(adj, s, &mut vec![s], max, &mut out);
    }
    out
}

fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<Option<usize>> {
    let mut d = vec![None; adj.len()];
    d[src] = Some(0);
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if d[w].is_none() {
                d[w] = Some(d[u].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    d
}

/// Shortest cycle length counted in edges, parallel edges included.
fn girth_oracle(link: &LinkGraph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in 0..link.nodes.len() {
        let mut dist = vec![usize::MAX; link.nodes.len()];
        let mut via = vec![usize::MAX; link.nodes.len()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &(e, w) in link.neighbours(u) {
                if e == via[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    via[w] = e;
                    q.push_back(w);
                } else {
                    let c = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
    }
    best
}

fn template_fidelity() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    for k in 1..=3 {
        let x = build_xk(k);
        let c = x.counts();
        ensure(
            (c.vertices, c.edges, c.faces) == (1, 8 * k + 8, 16 * k),
            format!("k={k}: counts {c:?}"),
        )?;
        let link = build_link(&x, "v").map_err(|e| e.to_string())?;
        ensure(
            link.nodes.len() == 16 * k + 16 && link.edges.len() == 48 * k,
            format!("k={k}: link has {} nodes, {} edges", link.nodes.len(), link.edges.len()),
        )?;
        ensure(link.bipartition().is_some(), format!("k={k}: link not bipartite"))?;
        let adj = simple_neighbours(&link);
        let parallel = adj.iter().any(|ns| ns.iter().collect::<BTreeSet<_>>().len() != ns.len());
        ensure(!parallel, format!("k={k}: link has a 2-cycle"))?;
        let census = cycle_length_census(&adj, 7);
        ensure(census[3] + census[5] + census[7] == 0, format!("k={k}: odd cycles {census:?}"))?;
        notes.push(format!("k={k} ok"));
    }
    within(t, Duration::from_secs(5), "template")?;
    Ok(format!("{} in {:?}", notes.join(", "), t.elapsed()))
}

fn short_cycle_homology() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    for k in 1..=3 {
        let x = build_xk(k);
        let link = build_link_at(&x, 0);
        let spine = build_spine(&x);
        let iota = link_to_spine(&x, &link, &spine).map_err(|e| e.to_string())?;
        let short = enumerate_short_cycles(&link, 6);
        let census = cycle_length_census(&simple_neighbours(&link), 6);
        ensure(
            short.len() == census.iter().sum::<usize>(),
            format!("k={k}: {} cycles enumerated, oracle finds {}", short.len(), census.iter().sum::<usize>()),
        )?;
        ensure(short.iter().all(|c| c.len() == 4 || c.len() == 6), format!("k={k}: cycle of other length"))?;
        let hz = |e: usize| x.edges()[e].id.starts_with("a_");
        let classes = collect_classes(&x, &link, &spine, &hz).map_err(|e| format!("k={k}: {e}"))?;
        ensure(
            classes.iter().all(|c| c.class.iter().any(|&v| v != 0)),
            format!("k={k}: zero class"),
        )?;
        let (middle, other) = middle_edge_cycles(&link, &hz);
        ensure(
            other == 0 && middle.len() == 2 * k && middle.iter().all(|c| c.len() == 8),
            format!("k={k}: {} middle cycles, {other} other components", middle.len()),
        )?;
        ensure(
            middle.iter().all(|c| hnt_check(&c.nodes, &iota)),
            format!("k={k}: middle cycle fails HNT"),
        )?;
        notes.push(format!("k={k}: {} short ({}x4, {}x6), {} middle", short.len(), census[4], census[6], middle.len()));
    }
    within(t, Duration::from_secs(120), "short cycles")?;
    Ok(format!("{} in {:?}", notes.join("; "), t.elapsed()))
}

fn petal_separation() -> Outcome {
    let mut least = usize::MAX;
    for k in 1..=3 {
        let x = build_xk(k);
        let link = build_link_at(&x, 0);
        let adj = simple_neighbours(&link);
        for j in 1..=k {
            let id = n_id(1, j);
            let plus = link.node_by_name(&format!("{id}+")).map_err(|e| e.to_string())?;
            let minus = link.node_by_name(&format!("{id}-")).map_err(|e| e.to_string())?;
            let d = bfs(&adj, plus)[minus].unwrap_or(usize::MAX);
            ensure(d >= 6, format!("k={k}, j={j}: distance {d}"))?;
            least = least.min(d);
        }
    }
    Ok(format!("least distance {least} over k ≤ 3"))
}

fn full_pipeline(y1: &YkRun, elapsed: Duration) -> Outcome {
    let r = &y1.report;
    ensure(validate(&y1.complex).pass() && r.validation_pass, "validate")?;
    ensure(r.npc.pass && r.npc.strict, "npc not strict")?;
    ensure(r.ultraconvex.pass, "rose not ultra-convex")?;
    ensure(r.morse.c1, "C1 fails")?;
    let l = 8 * r.parameters.n - 1;
    ensure(r.morse.kernel_rank as u64 == l, format!("kernel rank {} != {l}", r.morse.kernel_rank))?;
    ensure(r.euler_characteristic == 0, format!("χ = {}", r.euler_characteristic))?;
    let girth = girth_oracle(&build_link_at(&y1.cover.complex, 0));
    ensure(girth == r.cover_girth, format!("girth {:?} vs oracle {girth:?}", r.cover_girth))?;
    ensure(girth.is_some_and(|g| g >= 8), format!("cover girth {girth:?}"))?;
    let replay = run_yk(1, true).map_err(|e| e.to_string())?;
    let a = serde_json::to_string(&r).map_err(|e| e.to_string())?;
    let b = serde_json::to_string(&replay.report).map_err(|e| e.to_string())?;
    ensure(a == b, "replay differs")?;
    ensure(elapsed < Duration::from_secs(600), format!("pipeline took {elapsed:?}"))?;
    Ok(format!(
        "N={} M={} ℓ={l} girth={} report {} bytes replayed identically, {elapsed:?}",
        r.parameters.n,
        r.parameters.m,
        girth.unwrap(),
        a.len()
    ))
}

fn sd_letters(x: &SemidirectElement, forward: bool) -> Vec<SdLetter> {
    let mut v: Vec<SdLetter> = x.kernel.letters().map(|(g, s)| SdLetter::Kernel(g, s)).collect();
    v.extend(x.base.letters().map(|(g, s)| SdLetter::Base(g, s)));
    if !forward {
        v.reverse();
        for l in &mut v {
            *l = match *l {
                SdLetter::Kernel(g, s) => SdLetter::Kernel(g, -s),
                SdLetter::Base(g, s) => SdLetter::Base(g, -s),
            };
        }
    }
    v
}

fn monodromy_certificate(y1: &YkRun) -> Outcome {
    let cert = y1.monodromy.as_ref().ok_or("no monodromy extracted")?;
    ensure(cert.pass(), format!("{} relator failures", cert.relator_failures.len()))?;
    let action = &cert.action;
    for f in y1.complex.faces() {
        let word: Vec<SdLetter> = f.boundary.iter().flat_map(|s| sd_letters(&cert.psi[s.edge], s.forward)).collect();
        let nf = action.normal_form(&word, DEFAULT_LETTER_CAP).map_err(|e| e.to_string())?;
        ensure(nf.is_identity(), format!("face {} does not close up", f.id))?;
    }
    let rank = action.kernel_rank();
    ensure(rank as u64 == 8 * y1.report.parameters.n - 1, "kernel rank")?;
    for aut in &action.auts {
        for i in 0..rank as u32 {
            let a = FreeWord::gen(i);
            let there = aut.apply_inverse(&a, DEFAULT_LETTER_CAP).map_err(|e| e.to_string())?;
            let back = aut.apply(&there, DEFAULT_LETTER_CAP).map_err(|e| e.to_string())?;
            ensure(back == a, format!("Φ∘Φ⁻¹ moves generator {i}"))?;
            let there = aut.apply(&a, DEFAULT_LETTER_CAP).map_err(|e| e.to_string())?;
            let back = aut.apply_inverse(&there, DEFAULT_LETTER_CAP).map_err(|e| e.to_string())?;
            ensure(back == a, format!("Φ⁻¹∘Φ moves generator {i}"))?;
        }
    }
    ensure(cert.witnesses.len() == rank + action.base_rank(), "witness count")?;
    for w in &cert.witnesses {
        let e = y1.complex.edge_id(&w.edge).map_err(|e| e.to_string())?;
        let psi = &cert.psi[e];
        let hits = if let Some(i) = action.kernel_names.iter().position(|n| *n == w.generator) {
            *psi == SemidirectElement::kernel(FreeWord::gen(i as u32))
        } else {
            let j = action.base_names.iter().position(|n| *n == w.generator).ok_or("unknown witness")?;
            *psi == SemidirectElement::base(FreeWord::gen(j as u32))
        };
        ensure(hits, format!("witness {} -> {} does not map onto its generator", w.edge, w.generator))?;
    }
    Ok(format!(
        "{} relators close, Φ∘Φ⁻¹ = id on {rank} generators, {} witnesses",
        y1.complex.faces().len(),
        cert.witnesses.len()
    ))
}

fn example1_distortion() -> Outcome {
    let phi = example1_monodromy(4);
    let mut direct: Vec<Vec<u64>> = vec![vec![0; 201]; 4];
    for (i, row) in direct.iter_mut().enumerate() {
        let mut w = FreeWord::gen(i as u32);
        for n in 0..=200usize {
            if n > 0 {
                w = phi.apply(&w, DEFAULT_LETTER_CAP).map_err(|e| e.to_string())?;
            }
            row[n] = w.len();
        }
    }
    let x1 = example1_length_table(4, 1, 200).map_err(|e| e.to_string())?;
    let x2 = example1_length_table(4, 2, 200).map_err(|e| e.to_string())?;
    for n in 0..=200 {
        ensure(x1[n] == 1 && direct[0][n] == 1, format!("|φ^{n}(x_1)|"))?;
        ensure(x2[n] == n as u64 + 1 && direct[1][n] == n as u64 + 1, format!("|φ^{n}(x_2)|"))?;
    }
    for i in 1..=4usize {
        let table = example1_length_table(4, i, 100).map_err(|e| e.to_string())?;
        for n in 0..=100usize {
            let rec = if i == 1 {
                1
            } else {
                (1..=n).map(|m| direct[i - 2][m]).sum::<u64>() + 1
            };
            ensure(
                table[n] == direct[i - 1][n] && table[n] == rec,
                format!("i={i} n={n}: table {} direct {} recurrence {rec}", table[n], direct[i - 1][n]),
            )?;
        }
    }
    let mut fits = Vec::new();
    for k in [2usize, 3] {
        let f = fit_growth(&example1_witness_table(k, 200).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(
            f.depth == 0 && (f.slope - k as f64).abs() <= 0.15,
            format!("k={k}: depth {} slope {:.3}", f.depth, f.slope),
        )?;
        fits.push(format!("k={k} slope {:.3}", f.slope));
    }
    Ok(format!("lengths match direct application and recurrence; {}", fits.join(", ")))
}

fn hyperbolic_step(y1: &YkRun) -> Outcome {
    let action = &y1.monodromy.as_ref().ok_or("no monodromy")?.action;
    let table = hyperbolic_step_table(action, &FreeWord::gen(0), 18, 8, 11).map_err(|e| e.to_string())?;
    ensure(table.rows.len() == 18, "row count")?;
    ensure(table.is_nondecreasing(), "table not monotone")?;
    let f = fit_growth(&table).map_err(|e| e.to_string())?;
    let base = f.exp_base.unwrap_or(0.0);
    ensure(f.depth == 1 && base > 1.0, format!("depth {} base {base:.3}", f.depth))?;
    Ok(format!("depth 1, exp base {base:.2}, |Φ(g)(b)| at |g|=18: {}", table.rows[17].kernel_length))
}

fn chained_witness(y1: &YkRun) -> Outcome {
    let action = &y1.monodromy.as_ref().ok_or("no monodromy")?.action;
    let base_fit = fit_growth(&example1_witness_table(1, 200).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let ch = chained_table(1, action, &FreeWord::gen(0), 18).map_err(|e| e.to_string())?;
    let explicit: Vec<bool> = ch.details.iter().filter_map(|d| d.explicit_agrees).collect();
    ensure(!explicit.is_empty() && explicit.iter().all(|&x| x), "materialized rows disagree")?;
    ensure(DEFAULT_LETTER_CAP == 1 << 26, "letter cap")?;
    let f = fit_growth(&ch.table).map_err(|e| e.to_string())?;
    ensure(
        f.depth == 1 && (f.slope - base_fit.slope).abs() <= 0.25,
        format!("depth {} slope {:.3} vs base degree {:.3}", f.depth, f.slope, base_fit.slope),
    )?;
    let upper = upper_model_check(&ch);
    ensure(upper.pass, format!("upper model violated at {:?}", upper.violations))?;
    Ok(format!(
        "depth 1, inner slope {:.3} vs base {:.3}, {} rows cross-checked explicitly, upper model holds on {} rows",
        f.slope,
        base_fit.slope,
        explicit.len(),
        upper.rows_checked
    ))
}

fn bass_tests() -> Outcome {
    let mut notes = Vec::new();
    for setup in BassSetup::standard() {
        let reports = [
            bass_factor_test(&setup, 1000, 7),
            bass_diagonal_test(&setup, 1000, 7),
            embed_phi_homomorphism_test(&setup, 1000, 7),
        ];
        for r in reports {
            let r = r.map_err(|e| e.to_string())?;
            ensure(
                r.samples == 1000 && r.pass(),
                format!("{} {}: {} violations {:?}", r.setup, r.test, r.violations, r.first_violation),
            )?;
        }
        notes.push(setup.name.clone());
    }
    Ok(format!("0 violations in 3 x 1000 samples for {}", notes.join(", ")))
}

fn bs_remark() -> Outcome {
    let t = Instant::now();
    let r = bs_demo();
    let e = t.elapsed();
    ensure(r.quotient_commutator_trivial, "commutator in the central quotient is not trivial")?;
    ensure(!r.double_commutator_trivial && r.double_commutator_syllables > 0, "double commutator trivial")?;
    ensure(r.pass, "demo reports failure")?;
    ensure(e < Duration::from_secs(1), format!("took {e:?}"))?;
    Ok(format!("conjugator {}, double commutator has {} syllables, {e:?}", r.quotient_conjugator, r.double_commutator_syllables))
}

fn chaining(y1: &YkRun) -> Outcome {
    let y2 = run_yk(2, false).map_err(|e| e.to_string())?;
    let flat = glue_chain(&ChainBase::gamma_diagonal(2), &[ChainStage::from_yk(&y2)]).map_err(|e| e.to_string())?;
    let step = &flat.report.steps[0];
    ensure(step.npc.pass && step.scaled_by_sqrt2 == 1, "Γ_2 ∪ √2·Y_2 fails the link condition")?;
    ensure(validate(&flat.complex).pass(), "Γ_2 ∪ √2·Y_2 fails validation")?;
    let strict = glue_chain(&ChainBase::from_yk(y1), &[ChainStage::from_yk(y1)]).map_err(|e| e.to_string())?;
    let s = &strict.report.steps[0];
    ensure(strict.report.strict_required && s.npc.pass && s.npc.strict, "Y_1 ∪ Y_1 not strict")?;
    let mismatch = glue_chain(&ChainBase::gamma_diagonal(2), &[ChainStage::from_yk(y1)]);
    ensure(
        matches!(mismatch, Err(PipelineError::RankMismatch { rose: 2, base: 1, .. })),
        "rank mismatch not rejected",
    )?;
    Ok(format!(
        "Γ_2 ∪ √2·Y_2 NPC ({} faces), Y_1 ∪ Y_1 strict ({} faces), rank mismatch rejected",
        step.counts.faces, s.counts.faces
    ))
}

fn main() -> ExitCode {
    let t = Instant::now();
    let y1 = run_yk(1, true);
    let y1_time = t.elapsed();
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "template fidelity", template_fidelity()),
        (2, "short-cycle homology", short_cycle_homology()),
        (3, "petal end separation", petal_separation()),
        (6, "Example-1 distortion", example1_distortion()),
        (9, "Bass property tests", bass_tests()),
        (10, "BS(1,2) double", bs_remark()),
    ];
    match &y1 {
        Ok(y1) => {
            results.push((4, "Y_1 pipeline", full_pipeline(y1, y1_time)));
            results.push((5, "monodromy certificate", monodromy_certificate(y1)));
            results.push((7, "hyperbolic step growth", hyperbolic_step(y1)));
            results.push((8, "chained witness", chained_witness(y1)));
            results.push((11, "chaining certificate", chaining(y1)));
        }
        Err(e) => {
            for (n, name) in [
                (4, "Y_1 pipeline"),
                (5, "monodromy certificate"),
                (7, "hyperbolic step growth"),
                (8, "chained witness"),
                (11, "chaining certificate"),
            ] {
                results.push((n, name, Err(format!("Y_1 pipeline failed: {e}"))));
            }
        }
    }
    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(d) => println!("criterion {n:>2} PASS  {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {d}");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
