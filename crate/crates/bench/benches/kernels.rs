
use cprop::algebra::{transfer, Direction};
use cprop::bimodule::{box_dot, tensor_over_sigma};
use cprop::chain::{path_object, ChainComplex, ChainMap};
use cprop::endo::{ColoredFamily, FamilyMap};
use cprop::graph::{free_component_dim, PropGraph};
use cprop::operad::{prop_from_operad, ColoredOperad};
use cprop::profile::Profile;
use cprop::{samples, Matrix};
use cprop_bench::*;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn graphs(c: &mut Criterion) {
    let (sig, e) = sample_expression();
    c.bench_function("canonical_graph", |b| b.iter(|| PropGraph::from_expression(black_box(&e), &sig).canonical(&sig)));
    let mu = binary_signature();
    let prof = |n: usize| Profile::from_names(mu.palette(), &vec!["c"; n]).unwrap();
    let mut g = c.benchmark_group("free_component_dim");
    for n in [3, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| free_component_dim(&mu, &prof(1), &prof(n), n - 1).unwrap()));
    }
    g.finish();
}

fn bimodules(c: &mut Criterion) {
    let mut g = c.benchmark_group("tensor_over_sigma");
    for k in [2, 3] {
        let (x, y) = tensor_pair(k, 4);
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, _| b.iter(|| tensor_over_sigma(&x, &y).unwrap()));
    }
    g.finish();
    let (x, y) = dot_pair();
    c.bench_function("box_dot", |b| b.iter(|| box_dot(black_box(&x), &y).unwrap()));
}

fn chains(c: &mut Criterion) {
    let m = square_matrix(24);
    c.bench_function("rank_24", |b| b.iter(|| black_box(&m).rank()));
    let x = complex(30);
    c.bench_function("path_object_30", |b| b.iter(|| path_object(black_box(&x))));
}

fn algebras(c: &mut Criterion) {
    let ground = samples::ground_field_algebra();
    let k = ground.family().complexes()[0].clone();
    let d = ChainComplex::disc(1).direct_sum(&ChainComplex::disc(2));
    let big = k.direct_sum(&d);
    let blocks = (0..big.len() as i64).map(|n| Matrix::hstack(&[&Matrix::identity(k.dim(n)), &Matrix::zeros(k.dim(n), d.dim(n))])).collect();
    let proj = ChainMap::new(big.clone(), k.clone(), 0, blocks).unwrap();
    let fam = ColoredFamily::new(ground.family().palette(), vec![big]).unwrap();
    let f = FamilyMap::new(fam, ground.family().clone(), vec![proj]).unwrap();
    c.bench_function("transfer_along_projection", |b| {
        b.iter(|| transfer(ground.presentation(), black_box(&f), Direction::AlongAcyclicFibration, &ground).unwrap())
    });
}

fn operads(c: &mut Criterion) {
    let assoc = ColoredOperad::associative(3).unwrap();
    c.bench_function("prop_from_associative_3", |b| b.iter(|| prop_from_operad(black_box(&assoc), 3).unwrap()));
}

criterion_group!(kernels, graphs, bimodules, chains, algebras, operads);
criterion_main!(kernels);
