use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nalgebra::{Matrix4, Vector4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trackselect::game::{check_proposition, nash_set, Proposition};
use trackselect::{GainTable, GameSpec, ProfileSpace, RadarSite, TargetState, Track};

fn section_size_game() -> GameSpec {
    let incs = [3.0, 2.0, 1.0, 0.5, 0.25, 0.125];
    GameSpec::new(3, 5, 2, 0.1, GainTable::uniform(5, &incs).unwrap()).unwrap()
}

fn oracles(c: &mut Criterion) {
    let spec = section_size_game();
    c.bench_function("nash_set distinct 3x5 m=2", |b| {
        b.iter(|| nash_set(black_box(&spec), ProfileSpace::Distinct).unwrap())
    });
    c.bench_function("nash_set full 3x5 m=2", |b| {
        b.iter(|| nash_set(black_box(&spec), ProfileSpace::Full).unwrap())
    });
    c.bench_function("check_proposition distinct 3x5 m=2", |b| {
        b.iter(|| {
            check_proposition(black_box(&spec), Proposition::CaseA, ProfileSpace::Distinct).unwrap()
        })
    });
}

fn filter(c: &mut Criterion) {
    let radars: Vec<RadarSite> = [-10.0, 3.0, 10.0]
        .iter()
        .enumerate()
        .map(|(id, &x)| RadarSite {
            id,
            x,
            y: 0.0,
            m: 2,
            sigma_a: 0.002,
            sigma_r_base: 0.015,
            b: vec![2.0],
        })
        .collect();
    let truth = TargetState::new(1.0, 6.0, 0.5, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let meas: Vec<_> = radars
        .iter()
        .map(|r| r.sample_measurement(0, &truth, 1, &mut rng).unwrap())
        .collect();
    let track = Track::new(
        0,
        truth.to_vector() + Vector4::repeat(0.01),
        Matrix4::identity() * 0.01,
    );
    c.bench_function("update_cyclic 3 looks", |b| {
        b.iter(|| black_box(&track).update_cyclic(&meas, &radars).unwrap())
    });
    let refs: Vec<&RadarSite> = radars.iter().collect();
    c.bench_function("hypothetical_trace 3 looks", |b| {
        b.iter(|| black_box(&track).hypothetical_trace(&refs).unwrap())
    });
}

criterion_group!(benches, oracles, filter);
criterion_main!(benches);
