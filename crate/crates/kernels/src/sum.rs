use std::thread;

use rebits_core::{AccumError, FoldPolicy, OpCounters, Scalar};

use crate::error::KernelError;
use crate::gen::{gen_skewed_positive, Grid, Order};
use crate::record::{record, Evaluation, Point, ResultRecord};
use crate::scheme::{Accumulator, Scheme};

/// Skewed-vector summation under each scheme.
pub fn sum_experiment<T: Scalar>(n: usize, seed: u64, schemes: &[Scheme]) -> Result<Vec<ResultRecord>, KernelError> {
    let v = gen_skewed_positive::<T>(n, seed)?;
    let e = Evaluation::evaluate(schemes, v);
    Ok(e.records(&Point::new::<T>("sum", n as u64, seed)))
}

/// Splits `v` into `partitions` contiguous chunks, accumulates each one
/// independently on up to `workers` threads, then merges the partials in
/// chunk order. The result does not depend on `workers`.
pub fn parallel_accumulate<T: Scalar>(
    scheme: Scheme,
    v: &[T],
    partitions: usize,
    workers: usize,
) -> Result<Accumulator<T>, KernelError> {
    if partitions == 0 {
        return Err(KernelError::InvalidParameter("partitions must be at least 1".into()));
    }
    let chunk = v.len().div_ceil(partitions).max(1);
    let chunks: Vec<&[T]> = (0..partitions)
        .map(|i| {
            let lo = (i * chunk).min(v.len());
            let hi = ((i + 1) * chunk).min(v.len());
            &v[lo..hi]
        })
        .collect();
    let workers = workers.clamp(1, partitions);
    let mut partials: Vec<Option<Accumulator<T>>> = vec![None; partitions];
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let chunks = &chunks;
                s.spawn(move || {
                    (w..partitions)
                        .step_by(workers)
                        .map(|i| {
                            let mut acc = Accumulator::new(scheme);
                            acc.extend(chunks[i].iter().copied());
                            (i, acc)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, acc) in h.join().expect("worker panicked") {
                partials[i] = Some(acc);
            }
        }
    });
    let mut it = partials.into_iter().map(|p| p.expect("every chunk summed"));
    let mut total = it.next().expect("at least one partition");
    for p in it {
        total.merge(&p);
    }
    Ok(total)
}

/// Folding-accumulator sum over partitions; see [`parallel_accumulate`].
pub fn parallel_sum<T: Scalar>(
    v: &[T],
    partitions: usize,
    policy: FoldPolicy,
    workers: usize,
) -> Result<(Result<T, AccumError>, OpCounters), KernelError> {
    Ok(parallel_accumulate(Scheme::Rebits(policy), v, partitions, workers)?.finish())
}

/// Every scheme over the same partitioning, with the oracle as reference.
pub fn parallel_experiment<T: Scalar>(
    v: &[T],
    partitions: usize,
    workers: usize,
    schemes: &[Scheme],
    point: &Point,
) -> Result<Vec<ResultRecord>, KernelError> {
    let oracle = parallel_accumulate(Scheme::Oracle, v, 1, 1)?.finish().0;
    let point = point.clone().with_partitions(partitions as u64);
    schemes
        .iter()
        .map(|&s| {
            let (value, counts) = parallel_accumulate(s, v, partitions, workers)?.finish();
            Ok(record(&point, s, &value, &oracle, counts))
        })
        .collect()
}

/// The grid summed under each traversal order by one scheme.
pub fn grid_sum_orders(g: &Grid, scheme: Scheme, orders: &[Order], seed: u64) -> Vec<ResultRecord> {
    let n = (g.rows() * g.cols()) as u64;
    orders
        .iter()
        .flat_map(|&o| {
            let e = Evaluation::evaluate(&[scheme], g.traverse(o));
            e.records(&Point::new::<f64>("grid", n, seed).with_order(o.name()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_grid, GRID_COLS, GRID_ROWS};

    #[test]
    fn oracle_scheme_has_zero_error() {
        let recs = sum_experiment::<f32>(1000, 3, &[Scheme::Oracle]).unwrap();
        assert_eq!(recs[0].rel_err, Some(0.0));
    }

    #[test]
    fn no_fold_costs_one_add_and_one_move_per_element_over_naive() {
        let n = 10_000;
        let recs = sum_experiment::<f32>(n, 1, &[Scheme::Naive, Scheme::Rebits(FoldPolicy::None)]).unwrap();
        let naive = recs[0].counts;
        let rebits = recs[1].counts;
        // the terminal fold adds one more of each
        assert_eq!(rebits.fpadd, naive.fpadd + n as u64 + 1);
        assert_eq!(rebits.move_fperr, n as u64 + 1);
    }

    #[test]
    fn one_partition_is_the_sequential_sum() {
        let v = gen_skewed_positive::<f32>(5000, 2).unwrap();
        let seq = rebits_core::accum::sum_with_policy(&v, FoldPolicy::EveryK(100)).unwrap();
        let (par, counts) = parallel_sum(&v, 1, FoldPolicy::EveryK(100), 4).unwrap();
        assert_eq!(par.unwrap().to_bits(), seq.0.to_bits());
        assert_eq!(counts, seq.1.counts);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let v = gen_skewed_positive::<f64>(10_001, 5).unwrap();
        let r: Vec<_> = [1, 2, 3, 7].iter().map(|&w| parallel_sum(&v, 7, FoldPolicy::None, w).unwrap()).collect();
        assert!(r.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn zeros_sum_to_zero_with_any_partitioning() {
        let v = vec![0.0f32; 1000];
        for p in [1, 3, 1000, 2000] {
            assert_eq!(parallel_sum(&v, p, FoldPolicy::None, 2).unwrap().0.unwrap().to_bits(), 0);
        }
        assert!(parallel_sum(&v, 0, FoldPolicy::None, 2).is_err());
    }

    #[test]
    fn constant_grid_is_order_independent() {
        let g = Grid::constant(12, 8, 0.1);
        for scheme in Scheme::all() {
            let recs = grid_sum_orders(&g, scheme, &Order::ALL, 0);
            assert!(recs.windows(2).all(|w| w[0].value_hex == w[1].value_hex), "{scheme}");
        }
    }

    #[test]
    fn rebits_grid_sum_is_order_independent() {
        let g = gen_grid(GRID_ROWS, GRID_COLS, 1);
        let recs = grid_sum_orders(&g, Scheme::Rebits(FoldPolicy::None), &Order::ALL, 1);
        assert!(recs.iter().all(|r| r.abs_err == Some(0.0)));
    }
}
