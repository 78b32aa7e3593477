use rebits_core::eft::two_prod;
use rebits_core::{ExactAccumulator, Host, Scalar};

use crate::record::Evaluation;
use crate::scheme::{Accumulator, Scheme};

/// Euclidean norm with the squares rounded in `T` (their errors ignored) and
/// only the accumulation varying by scheme.
///
/// The oracle is different in kind: it accumulates the exact squares (two-prod
/// pairs), rounds that sum to binary64 and takes the square root there.
pub fn two_norm<T: Scalar>(v: &[T], schemes: &[Scheme]) -> Evaluation<T> {
    let mut accs: Vec<Accumulator<T>> = schemes.iter().map(|&s| Accumulator::new(s)).collect();
    for &x in v {
        let sq = x * x;
        for a in accs.iter_mut() {
            a.push(sq);
        }
    }
    let runs = accs
        .iter()
        .map(|a| {
            let (value, counts) = a.finish();
            crate::record::SchemeRun { scheme: a.scheme(), value: value.map(|s| s.sqrt()), counts }
        })
        .collect();
    Evaluation { runs, oracle: Ok(exact_norm(v)) }
}

pub fn exact_norm<T: Scalar>(v: &[T]) -> T {
    let mut acc = ExactAccumulator::for_scalar::<f64>();
    let mut ar = Host::new();
    for &x in v {
        let x = x.widen();
        let p = two_prod(&mut ar, x, x);
        acc.add_scalar(p.s).expect("finite square");
        acc.add_scalar(p.e).expect("finite square");
    }
    T::narrow(acc.round_to::<f64>().sqrt())
}
