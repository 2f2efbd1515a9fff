use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use curvchain::distortion::{chained_table, example1_length_table};
use curvchain::group::FreeWord;
use curvchain::link::{build_link_at, check_npc};
use curvchain::pipeline::run_yk;
use curvchain::templates::build_xk;

fn templates(c: &mut Criterion) {
    for k in [1, 3] {
        c.bench_function(&format!("build_xk_link/k{k}"), |b| {
            b.iter(|| {
                let x = build_xk(black_box(k));
                build_link_at(&x, 0).edges.len()
            })
        });
    }
}

fn pipeline(c: &mut Criterion) {
    let y1 = run_yk(1, false).unwrap();
    c.bench_function("check_npc/y1", |b| b.iter(|| check_npc(black_box(&y1.complex)).pass));
    let mut g = c.benchmark_group("run_yk");
    g.sample_size(10);
    g.bench_function("k1", |b| b.iter(|| run_yk(black_box(1), false).unwrap().report.counts));
    g.finish();
}

fn distortion(c: &mut Criterion) {
    c.bench_function("example1_lengths/k3_n200", |b| b.iter(|| example1_length_table(3, 3, black_box(200)).unwrap()));
    let action = run_yk(1, true).unwrap().monodromy.unwrap().action;
    let mut g = c.benchmark_group("chained_table");
    g.sample_size(10);
    g.bench_function("y1_n5", |b| b.iter(|| chained_table(1, &action, &FreeWord::gen(0), black_box(5)).unwrap().table.rows.len()));
    g.finish();
}

criterion_group!(benches, templates, pipeline, distortion);
criterion_main!(benches);
