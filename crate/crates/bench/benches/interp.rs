use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use ifc_bench::{powerset_cfg, two_point_cfg};
use ifc_core::erase::erase_program;
use ifc_core::eval::{eval_star, Fuel, Mutation};
use ifc_core::label::{check_laws, Label, PowersetLabel};
use ifc_core::meta::{check_simulation_star_with, gen_program};

fn bench_eval_star(c: &mut Criterion) {
    let cfg = powerset_cfg();
    let programs: Vec<_> = (0..64).map(|seed| gen_program(&cfg, seed)).collect();
    c.bench_function("eval_star/64_generated_programs", |b| {
        b.iter_batched(
            || programs.clone(),
            |ps| {
                for p in ps {
                    black_box(eval_star(p, &mut Fuel::new(1000)));
                }
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_erase(c: &mut Criterion) {
    let cfg = powerset_cfg();
    let observer = PowersetLabel::from_names(["A"]);
    let programs: Vec<_> = (0..64).map(|seed| gen_program(&cfg, seed)).collect();
    c.bench_function("erase_program/64_generated_programs", |b| {
        b.iter(|| {
            for p in &programs {
                black_box(erase_program(&observer, p));
            }
        })
    });
}

fn bench_laws(c: &mut Criterion) {
    let universe: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
    let domain = PowersetLabel::all_subsets(&universe);
    c.bench_function("check_laws/powerset_of_3", |b| {
        b.iter(|| black_box(check_laws(&domain)))
    });
}

fn bench_generator(c: &mut Criterion) {
    let cfg = two_point_cfg();
    c.bench_function("gen_program/two_point", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed = seed.wrapping_add(1);
            black_box(gen_program(&cfg, seed))
        })
    });
}

fn bench_simulation_trial(c: &mut Criterion) {
    let cfg = two_point_cfg();
    let programs: Vec<_> = (0..64).map(|seed| gen_program(&cfg, seed)).collect();
    c.bench_function("check_simulation_star/64_trials", |b| {
        b.iter(|| {
            for p in &programs {
                black_box(check_simulation_star_with(
                    &<ifc_core::label::TwoPointLabel as Label>::bottom(),
                    p,
                    1000,
                    Mutation::None,
                ));
            }
        })
    });
}

criterion_group!(
    benches,
    bench_eval_star,
    bench_erase,
    bench_laws,
    bench_generator,
    bench_simulation_trial
);
criterion_main!(benches);
