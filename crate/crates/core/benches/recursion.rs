use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use setcalc::acceptance::AcceptanceFamily;
use setcalc::hedging::{superhedge_recursion, zero_claim, SolvencyProcess};
use setcalc::parallel::{set_parallelism, Parallelism};
use setcalc::sample::{random_bid_ask, random_solvency_process};
use setcalc::tree::{uniform_tree, ScenarioTree};

fn instances() -> Vec<(&'static str, ScenarioTree, SolvencyProcess)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let wide = uniform_tree(2, &[4, 4, 4]);
    let (b, a) = random_bid_ask(&mut rng, &wide, 1, 100, true);
    let k_wide = setcalc::hedging::solvency_from_bid_ask(&wide, &b, &a).unwrap();
    let deep = uniform_tree(3, &[3, 3]);
    let k_deep = random_solvency_process(&mut rng, &deep);
    vec![
        ("bid_ask_4x4x4", wide, k_wide),
        ("cones_d3_3x3", deep, k_deep),
    ]
}

fn recursion(c: &mut Criterion) {
    let mut group = c.benchmark_group("superhedge_recursion");
    group.sample_size(10);
    for (name, tree, k) in instances() {
        let xi = zero_claim(&tree);
        for family in [AcceptanceFamily::ess_inf(), AcceptanceFamily::expectation()] {
            for mode in [Parallelism::Sequential, Parallelism::Parallel] {
                let id = BenchmarkId::new(format!("{name}/{}", family.kind), format!("{mode:?}"));
                group.bench_function(id, |bench| {
                    set_parallelism(mode);
                    bench.iter(|| superhedge_recursion(&tree, &k, &xi, &family).unwrap());
                });
            }
        }
    }
    set_parallelism(Parallelism::Parallel);
    group.finish();
}

criterion_group!(benches, recursion);
criterion_main!(benches);
