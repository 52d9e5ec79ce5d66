//! Each workload runs on a one-thread rayon pool and on the default pool.
//!
//! Built with `--no-default-features` there is no rayon at all and every
//! workload runs once, as `sequential`.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use itl::bisimulation::greatest_bisimulation;
use itl::corpus::Corpus;
use itl::gen::{frame_catalogue, gen_random_model, IndistPolicy};
use itl::morphisms::{search_pmorphisms, SearchOptions};
use itl::{Frame, Language, Model};

fn modes() -> Vec<(&'static str, Option<usize>)> {
    if itl::par::is_parallel() {
        vec![("one-thread", Some(1)), ("default-pool", None)]
    } else {
        vec![("sequential", None)]
    }
}

#[cfg(feature = "parallel")]
fn run<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run<R: Send>(_threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn corpus_frame_validity(c: &mut Criterion) {
    let corpus = Corpus::exhaustive(&["p"], 3, Language::LF);
    let frames: Vec<Frame> = frame_catalogue(4);
    let mut group = c.benchmark_group("corpus_frame_validity");
    group.sample_size(10);
    for (name, threads) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                run(threads, || {
                    frames.iter().map(|f| corpus.frame_validity(f, 20).unwrap().len()).sum::<usize>()
                })
            })
        });
    }
    group.finish();
}

fn bisimulation(c: &mut Criterion) {
    let models: Vec<Model> = (0..6).map(|s| gen_random_model(s, 14, 3, IndistPolicy::Coarsened, 2)).collect();
    let mut group = c.benchmark_group("greatest_bisimulation");
    for (name, threads) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                run(threads, || {
                    let mut total = 0;
                    for a in &models {
                        for m in &models {
                            total += greatest_bisimulation(black_box(a), m, Language::LF).len();
                        }
                    }
                    total
                })
            })
        });
    }
    group.finish();
}

fn pmorphism_search(c: &mut Criterion) {
    let frames = frame_catalogue(5);
    let opts = SearchOptions::default();
    let mut group = c.benchmark_group("pmorphism_search");
    group.sample_size(10);
    for (name, threads) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                run(threads, || {
                    let mut total = 0;
                    for src in frames.iter().step_by(3) {
                        for dst in frames.iter().step_by(5) {
                            total += search_pmorphisms(src, dst, Language::LF, &opts).unwrap().len();
                        }
                    }
                    total
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, corpus_frame_validity, bisimulation, pmorphism_search);
criterion_main!(benches);
