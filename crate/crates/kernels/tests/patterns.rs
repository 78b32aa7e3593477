//! Accuracy patterns of the kernels at their default parameter points.

use rebits_core::{FoldPolicy, SchemeVariant};
use rebits_kernels::gen::{gen_grid, gen_skewed_blocks, gen_skewed_positive, GRID_COLS, GRID_ROWS};
use rebits_kernels::montecarlo::{mc_euro_price, McParams};
use rebits_kernels::nbody::{gen_particles, nbody_potential};
use rebits_kernels::norm::two_norm;
use rebits_kernels::record::{abs_deviation, rel_deviation};
use rebits_kernels::sum::{grid_sum_orders, parallel_accumulate, sum_experiment};
use rebits_kernels::trapezoid::trapezoid_integrate;
use rebits_kernels::{Order, Scheme};

const NAIVE: Scheme = Scheme::Naive;
const REBITS: Scheme = Scheme::Rebits(FoldPolicy::None);

fn fold(k: u64) -> Scheme {
    Scheme::Rebits(FoldPolicy::EveryK(k))
}

#[test]
fn skewed_sum_ordering() {
    let schemes = [fold(1), fold(100), fold(1000), REBITS, NAIVE, Scheme::Oracle];
    let recs = sum_experiment::<f32>(100_000, 1, &schemes).unwrap();
    let err: Vec<f64> = recs.iter().map(|r| r.abs_err.unwrap()).collect();
    eprintln!("abs errors {err:?}");
    assert!(err.windows(2).take(4).all(|w| w[0] <= w[1]));
    assert_eq!(recs[2].value_hex, recs[5].value_hex);
    assert!(recs[4].rel_err.unwrap() >= 1e3 * recs[3].rel_err.unwrap());
}

#[test]
fn every_scheme_beats_or_ties_naive_on_the_skewed_sum() {
    for n in [1000, 33_333] {
        let recs = sum_experiment::<f32>(n, 2, &Scheme::all()).unwrap();
        let naive = recs[0].abs_err.unwrap();
        for r in &recs {
            assert!(r.abs_err.unwrap() <= naive, "{} at n={n}", r.scheme);
        }
        let recs = sum_experiment::<f64>(n, 2, &Scheme::all()).unwrap();
        let naive = recs[0].abs_err.unwrap();
        assert!(naive > 0.0);
        assert!(recs.iter().all(|r| r.abs_err.unwrap() <= naive));
    }
}

#[test]
fn parallel_blocks() {
    let v = gen_skewed_blocks::<f32>(4, 1);
    let oracle = parallel_accumulate(Scheme::Oracle, &v, 1, 1).unwrap().finish().0.unwrap();
    let rel = |s| {
        let x = parallel_accumulate(s, &v, 4, 4).unwrap().finish().0.unwrap();
        rel_deviation(x, oracle).unwrap()
    };
    let (naive, rebits) = (rel(NAIVE), rel(REBITS));
    eprintln!("parallel naive {naive:e}, rebits {rebits:e}");
    assert!(naive >= 5e-2);
    assert!(rebits <= 1e-2);
}

#[test]
fn grid_orders() {
    let g = gen_grid(GRID_ROWS, GRID_COLS, 1);
    let rebits = grid_sum_orders(&g, REBITS, &Order::ALL, 1);
    assert!(rebits.iter().all(|r| r.value_hex == rebits[0].value_hex && r.abs_err == Some(0.0)));
    let naive = grid_sum_orders(&g, NAIVE, &Order::ALL, 1);
    let vals: Vec<f64> = naive.iter().map(|r| r.value_dec.parse().unwrap()).collect();
    let spread = vals.iter().fold(f64::MIN, |a, &b| a.max(b)) - vals.iter().fold(f64::MAX, |a, &b| a.min(b));
    eprintln!("naive grid values {vals:?}");
    assert!(spread > 0.0);
}

#[test]
fn norm_of_the_skewed_vector() {
    let v = gen_skewed_positive::<f32>(100_000, 1).unwrap();
    let ev = two_norm(&v, &[NAIVE, REBITS]);
    let (n, r) = (ev.rel_err(NAIVE).unwrap(), ev.rel_err(REBITS).unwrap());
    eprintln!("norm naive {n:e}, rebits {r:e}");
    assert!(r <= 1e-2);
    assert!(n >= 10.0 * r);
}

#[test]
fn trapezoid_samples() {
    let out = trapezoid_integrate::<f32>(100.0, 1_000_000, 10_000, &[NAIVE, REBITS]).unwrap();
    let max = |s| out.iter().filter_map(|(_, e)| e.rel_err(s)).fold(0.0f64, f64::max);
    let (n, r) = (max(NAIVE), max(REBITS));
    eprintln!("trapezoid naive {n:e}, rebits {r:e}");
    assert!(r <= 5e-2);
    assert!(r * 10.0 <= n);
}

#[test]
fn nbody_small_sweep() {
    let mut worst = [0.0f64; 2];
    for n in [500, 1000, 1500] {
        let ps = gen_particles::<f32>(n, n as u64).unwrap();
        let ev = nbody_potential(&ps, &[NAIVE, REBITS]);
        worst[0] = worst[0].max(ev.rel_err(NAIVE).unwrap());
        worst[1] = worst[1].max(ev.rel_err(REBITS).unwrap());
    }
    eprintln!("nbody worst {worst:?}");
    assert!(worst[1] * 5.0 <= worst[0]);
}

#[test]
fn monte_carlo() {
    let ev = mc_euro_price::<f32>(1_000_000, 1, &McParams::default(), &[NAIVE, REBITS]).unwrap();
    let (n, r) = (ev.rel_err(NAIVE).unwrap(), ev.rel_err(REBITS).unwrap());
    eprintln!("mc naive {n:e}, rebits {r:e}");
    assert!(r <= 1e-2 && r * 5.0 <= n);
}

#[test]
fn dd_schemes_are_deterministic_and_close() {
    let v = gen_skewed_positive::<f64>(20_000, 3).unwrap();
    let a = sum_experiment::<f64>(20_000, 3, &[Scheme::Dd(SchemeVariant::Native), Scheme::Dd(SchemeVariant::Rebits)])
        .unwrap();
    assert_eq!(a[0].value_hex, a[1].value_hex);
    assert!(a[0].abs_err == Some(0.0));
    let s: f64 = v.iter().sum();
    assert!(abs_deviation(s, s) == Some(0.0));
}
