use std::hint::black_box;
use std::ops::ControlFlow;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diffset::adsearch::{enumerate_fixed_density, search_ads, AdsOptions, MISSED_ADS};
use diffset::arith::primitive_root;
use diffset::cyclotomy::{cyclotomic_numbers, octic_set_classification};
use diffset::extend::extension_report;
use diffset::families::residue_set;
use diffset::mgr::{search_mgr, MgrOptions};
use diffset::{classify, SearchMode};

fn classification(c: &mut Criterion) {
    let set = MISSED_ADS[4].subset().unwrap();
    c.bench_function("classify (50,20)", |b| b.iter(|| classify(black_box(&set))));
    let paley = residue_set(1019, 2, false).unwrap();
    c.bench_function("extension report paley 1019", |b| b.iter(|| extension_report(black_box(&paley)).unwrap()));
}

fn necklaces(c: &mut Criterion) {
    let mut g = c.benchmark_group("necklaces");
    for (v, k) in [(20u64, 8usize), (24, 10)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{v},{k}")), &(v, k), |b, &(v, k)| {
            b.iter(|| enumerate_fixed_density(v, k, |c| {
                black_box(c.counts());
                ControlFlow::Continue(())
            }))
        });
    }
    g.finish();
}

fn searches(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("ads (28,12) exists", |b| b.iter(|| search_ads(28, 12, AdsOptions::default()).unwrap()));
    g.bench_function("ads (18,6) count", |b| b.iter(|| search_ads(18, 6, AdsOptions::mode(SearchMode::Count)).unwrap()));
    for pruning in [true, false] {
        let opts = MgrOptions { pruning, ..MgrOptions::mode(SearchMode::Count) };
        g.bench_function(BenchmarkId::new("mgr (48,7) count", if pruning { "affine" } else { "translation" }), |b| {
            b.iter(|| search_mgr(48, 7, opts).unwrap())
        });
    }
    g.finish();
}

fn cyclotomy(c: &mut Criterion) {
    let p = 26041;
    let g = primitive_root(p).unwrap();
    c.bench_function("cyclotomic numbers p=26041 e=8", |b| b.iter(|| cyclotomic_numbers(black_box(p), 8, g).unwrap()));
    c.bench_function("octic set check p=26041", |b| b.iter(|| octic_set_classification(black_box(p), false).unwrap()));
}

criterion_group!(benches, classification, necklaces, searches, cyclotomy);
criterion_main!(benches);
