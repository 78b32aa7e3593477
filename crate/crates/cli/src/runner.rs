//! Runs a resolved configuration and collects its records.

use anyhow::Result;
use rebits_core::{FloatFormat, Scalar};
use rebits_kernels::ddwork::{dd_workload, exact_checksum};
use rebits_kernels::gen::{gen_grid, gen_skewed_blocks, gen_skewed_positive};
use rebits_kernels::montecarlo::mc_euro_price;
use rebits_kernels::nbody::{gen_particles, nbody_potential};
use rebits_kernels::norm::two_norm;
use rebits_kernels::record::record;
use rebits_kernels::sum::{grid_sum_orders, parallel_experiment, sum_experiment};
use rebits_kernels::trapezoid::trapezoid_integrate;
use rebits_kernels::verify::{verify_exhaustive, verify_random, VerifyReport};
use rebits_kernels::{Point, ResultRecord, Scheme};

use crate::config::{Data, Kernel, RunConfig};

/// Records of a run, plus any failed adder verification.
#[derive(Debug, Default)]
pub struct RunResult {
    pub records: Vec<ResultRecord>,
    pub failed: Vec<VerifyReport>,
}

pub fn run(cfg: &RunConfig, workers: usize) -> Result<RunResult> {
    if cfg.kernel == Kernel::VerifyAdder {
        return verify(cfg);
    }
    let records = match cfg.format.as_str() {
        "f32" => run_typed::<f32>(cfg, workers)?,
        "f64" => run_typed::<f64>(cfg, workers)?,
        other => anyhow::bail!("kernel {} cannot run in {other}", cfg.kernel.name()),
    };
    Ok(RunResult { records, failed: Vec::new() })
}

fn run_typed<T: Scalar>(cfg: &RunConfig, workers: usize) -> Result<Vec<ResultRecord>> {
    let schemes = cfg.schemes();
    let kernel = cfg.kernel.name();
    let seed = cfg.seed;
    let mut out = Vec::new();
    match cfg.kernel {
        Kernel::Sum => {
            for &n in &cfg.n {
                out.extend(sum_experiment::<T>(n as usize, seed, &schemes)?);
            }
        }
        Kernel::ParallelSum => {
            let inputs: Vec<Vec<T>> = match cfg.data {
                Data::Skewed => {
                    cfg.n.iter().map(|&n| gen_skewed_positive(n as usize, seed)).collect::<Result<_, _>>()?
                }
                Data::Blocks => vec![gen_skewed_blocks(cfg.blocks as usize, seed)],
            };
            for v in &inputs {
                let point = Point::new::<T>(&kernel, v.len() as u64, seed);
                for &p in &cfg.partitions {
                    out.extend(parallel_experiment(v, p as usize, workers, &schemes, &point)?);
                }
            }
        }
        Kernel::Grid => {
            let g = gen_grid(cfg.rows, cfg.cols, seed);
            for &s in &schemes {
                out.extend(grid_sum_orders(&g, s, &cfg.orders(), seed));
            }
        }
        Kernel::Norm => {
            for &n in &cfg.n {
                let v = gen_skewed_positive::<T>(n as usize, seed)?;
                out.extend(two_norm(&v, &schemes).records(&Point::new::<T>(&kernel, n, seed)));
            }
        }
        Kernel::Trapezoid => {
            let point = Point::new::<T>(&kernel, 0, seed);
            for (j, e) in trapezoid_integrate::<T>(cfg.x_max, cfg.steps, cfg.sample_every, &schemes)? {
                out.extend(e.records(&point.clone().with_n(j)));
            }
        }
        Kernel::Nbody => {
            for &n in &cfg.n {
                let ps = gen_particles::<T>(n as usize, seed)?;
                out.extend(nbody_potential(&ps, &schemes).records(&Point::new::<T>(&kernel, n, seed)));
            }
        }
        Kernel::Mc => {
            let e = mc_euro_price::<T>(cfg.paths, seed, &cfg.mc, &schemes)?;
            out.extend(e.records(&Point::new::<T>(&kernel, cfg.paths, seed)));
        }
        Kernel::DdWorkload => {
            let point = Point::new::<f64>(&kernel, cfg.calls, seed);
            let oracle = Ok(exact_checksum(cfg.calls, seed));
            for &s in &schemes {
                let (value, counts) = match s {
                    Scheme::Dd(v) => {
                        let w = dd_workload(cfg.calls, seed, v);
                        (w.checksum(), w.counts)
                    }
                    _ => (exact_checksum(cfg.calls, seed), Default::default()),
                };
                out.push(record(&point, s, &Ok(value), &oracle, counts));
            }
        }
        Kernel::VerifyAdder => unreachable!("handled by verify"),
    }
    Ok(out)
}

fn verify(cfg: &RunConfig) -> Result<RunResult> {
    let format = FloatFormat::parse(&cfg.format)?;
    let mut res = RunResult::default();
    let reports: Vec<VerifyReport> = match cfg.format.as_str() {
        "f32" => cfg.n.iter().map(|&n| verify_random::<f32>(n, cfg.seed)).collect(),
        "f64" => cfg.n.iter().map(|&n| verify_random::<f64>(n, cfg.seed)).collect(),
        _ => vec![verify_exhaustive(format)?],
    };
    for r in reports {
        res.records.push(ResultRecord {
            kernel: cfg.kernel.name(),
            scheme: "rebits".into(),
            format: r.format.clone(),
            n: r.pairs,
            seed: cfg.seed,
            policy: String::new(),
            order: String::new(),
            partitions: 1,
            value_hex: String::new(),
            value_dec: r.failures.to_string(),
            abs_err: None,
            rel_err: None,
            counts: Default::default(),
            error: r.first_failure.clone(),
        });
        if !r.passed() {
            res.failed.push(r);
        }
    }
    Ok(res)
}
