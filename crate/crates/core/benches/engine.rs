use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use quiver_horn::cone::{cone_inequalities, DominantWeight};
use quiver_horn::euler::Weight;
use quiver_horn::harness::theo1;
use quiver_horn::horn::HornEngine;
use quiver_horn::oracle::OracleConfig;
use quiver_horn::par;
use quiver_horn::{DimensionVector, LabeledFamily, Parallelism, Quiver};

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn horn_star(c: &mut Criterion) {
    let q = Quiver::star(3);
    let j = LabeledFamily::canonical(&DimensionVector(vec![3; 4]));
    let mut g = c.benchmark_group("horn_star_s3_n3");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| HornEngine::new(&q).with_parallelism(mode).horn_families(black_box(&j)).unwrap().len())
        });
    }
    g.finish();
}

fn selftest_star(c: &mut Criterion) {
    let q = Quiver::star(2);
    let j = LabeledFamily::canonical(&DimensionVector(vec![3; 3]));
    let mut g = c.benchmark_group("theo1_star_s2_n3");
    g.sample_size(10);
    for (name, mode) in MODES {
        let cfg = OracleConfig::new(1).with_parallelism(mode);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| theo1(&HornEngine::new(&q).with_parallelism(mode), black_box(&j), &cfg).unwrap().len())
        });
    }
    g.finish();
}

fn cone_scan(c: &mut Criterion) {
    let q = Quiver::from_names(&["x", "y"], &[("x", "y")]).unwrap();
    let j = LabeledFamily::canonical(&DimensionVector(vec![3, 3]));
    let sys = cone_inequalities(&HornEngine::new(&q), &j, true).unwrap();
    let mut vecs = Vec::new();
    for a in (-4..=4i64).rev() {
        for b in (-4..=a).rev() {
            for c in (-4..=b).rev() {
                vecs.push(vec![a, b, c]);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..vecs.len()).flat_map(|i| (0..vecs.len()).map(move |k| (i, k))).collect();
    let mut g = c.benchmark_group("a2_cone_scan_n3");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::map(&pairs, mode, |&(i, k)| {
                    let w = Weight::from_integers(&[vecs[i].clone(), vecs[k].clone()]);
                    sys.contains(&DominantWeight::new(&q, &j, w).unwrap()).unwrap()
                })
                .into_iter()
                .filter(|&m| m)
                .count()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, horn_star, selftest_star, cone_scan);
criterion_main!(benches);
