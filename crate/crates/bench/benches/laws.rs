use criterion::{criterion_group, criterion_main, Criterion};
use effectlaws::{catalog, Config};

const LAWS: [&str; 5] = [
    "monad-laws/state/assoc",
    "coincidence/bind",
    "thm19/get/stateT/lifting",
    "thm27/local/exceptT",
    "fastproduct",
];

fn laws(c: &mut Criterion) {
    let cfg = Config::default();
    let cat = catalog(&cfg);
    let mut group = c.benchmark_group("laws");
    group.sample_size(10);
    for id in LAWS {
        let entry = cat.iter().find(|e| e.id == id).expect("law exists");
        group.bench_function(id, |b| b.iter(|| assert!(entry.run(&cfg, None).passed())));
    }
    group.finish();
}

criterion_group!(benches, laws);
criterion_main!(benches);
