use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wick_core::chart::Chart;
use wick_core::exactnum::parse_expr;
use wick_core::io;
use wick_core::momentum::momentum_map;
use wick_core::star::StarProduct;
use wick_core::symmetry::Ansatz;

fn data(rel: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel);
    std::fs::read_to_string(path).unwrap()
}

fn chart(name: &str, order: usize) -> Chart {
    io::parse_chart(&data(&format!("charts/{name}.json")), Some(order)).unwrap()
}

fn products(c: &mut Criterion) {
    let mut g = c.benchmark_group("product");
    let a = parse_expr("z1^3*w1 + z1", 1).unwrap();
    let b = parse_expr("w1^3/(1 + z1*w1)", 1).unwrap();
    for name in ["flat", "fs", "fs_corrected"] {
        for order in [2, 4] {
            let ch = chart(name, order);
            // fresh product each time, so operator recursion is included
            g.bench_with_input(BenchmarkId::new(name, order), &order, |bench, &order| {
                bench.iter(|| StarProduct::new(&ch, order).star_fn(&a, &b).unwrap())
            });
        }
    }
    g.finish();
}

fn certificates(c: &mut Criterion) {
    let mut g = c.benchmark_group("certificate");
    g.sample_size(10);
    let fs = chart("fs", 2);
    g.bench_function("associativity fs N=2", |bench| {
        bench.iter(|| StarProduct::new(&fs, 2).verify_associativity(2).unwrap())
    });
    g.bench_function("round trip fs N=3", |bench| {
        let ch = chart("fs", 3);
        bench.iter(|| StarProduct::new(&ch, 3).verify_round_trip().unwrap())
    });
    let act = io::parse_action(&data("actions/su2_cp1.json"), 1).unwrap();
    g.bench_function("su(2) momentum map N=2", |bench| {
        bench.iter(|| momentum_map(&StarProduct::new(&fs, 2), &act, Ansatz::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, products, certificates);
criterion_main!(benches);
