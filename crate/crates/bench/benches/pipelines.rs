use criterion::{criterion_group, criterion_main, Criterion};

use zrp_core::{
    capacity, enumerate, partition_wells, trace_mean_rates, Initial, Operators, SimConfig,
    Simulator,
};

fn bench_capacity(c: &mut Criterion) {
    let space = enumerate(3, 20, 4.0).unwrap();
    let ops = Operators::build(&space);
    let wells = partition_wells(&space, 4).unwrap();
    let a = wells.wells[0].clone();
    let b = wells.complement_wells(0);
    c.bench_function("capacity L3 N20 alpha4", |bench| {
        bench.iter(|| capacity(&space, &ops, &a, &b).unwrap())
    });
}

fn bench_trace_rates(c: &mut Criterion) {
    let space = enumerate(3, 20, 4.0).unwrap();
    let ops = Operators::build(&space);
    let wells = partition_wells(&space, 4).unwrap();
    c.bench_function("trace rates L3 N20 alpha4", |bench| {
        bench.iter(|| trace_mean_rates(&space, &ops.forward, &wells).unwrap())
    });
}

fn bench_simulation_events(c: &mut Criterion) {
    let cfg = SimConfig {
        l: 3,
        n: 8,
        alpha: 2.0,
        ell: 2,
        seed: 7,
        t_max: f64::INFINITY,
        initial: Initial::Well(0),
    };
    c.bench_function("simulate 100k events L3 N8 alpha2", |bench| {
        bench.iter(|| {
            let mut sim = Simulator::new(&cfg).unwrap();
            for _ in 0..100_000 {
                sim.step();
            }
            sim.time
        })
    });
}

criterion_group!(benches, bench_capacity, bench_trace_rates, bench_simulation_events);
criterion_main!(benches);
