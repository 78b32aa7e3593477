use rebits_core::Scalar;

use crate::error::KernelError;
use crate::record::Evaluation;
use crate::scheme::{Accumulator, Scheme};

pub const X_MAX: f64 = 100.0;
pub const STEPS: u64 = 1_000_000;
pub const SAMPLE_EVERY: u64 = 10_000;

/// `400 (x sin x + cos x - 1)`, evaluated in `T`.
pub fn integrand<T: Scalar>(x: T) -> T {
    let c = |v: f64| T::narrow(v);
    c(400.0) * (x * x.sin() + x.cos() - T::one())
}

/// `400 (2 sin x - x cos x - x)`, the antiderivative vanishing at 0.
pub fn closed_form(x: f64) -> f64 {
    400.0 * (2.0 * x.sin() - x * x.cos() - x)
}

/// Composite trapezoid rule on `[0, x_max]`. The panel terms `h f(x_i)` are
/// rounded in `T` and shared by every scheme; the oracle sums those same
/// rounded terms exactly.
///
/// Returns the evaluation of the integral up to `x_j = j h` for every `j`
/// that is a multiple of `sample_every`, and for `j = steps`.
pub fn trapezoid_integrate<T: Scalar>(
    x_max: f64,
    steps: u64,
    sample_every: u64,
    schemes: &[Scheme],
) -> Result<Vec<(u64, Evaluation<T>)>, KernelError> {
    if steps == 0 || x_max.is_nan() || x_max <= 0.0 || sample_every == 0 {
        return Err(KernelError::InvalidParameter(format!(
            "trapezoid needs steps >= 1, x_max > 0, sample_every >= 1 (got {steps}, {x_max}, {sample_every})"
        )));
    }
    let mut accs: Vec<Accumulator<T>> = schemes.iter().map(|&s| Accumulator::new(s)).collect();
    let drop_oracle = !schemes.contains(&Scheme::Oracle);
    if drop_oracle {
        accs.push(Accumulator::new(Scheme::Oracle));
    }
    let h = T::narrow(x_max) / T::narrow(steps as f64);
    let half = T::narrow(0.5);
    let term = |i: u64| h * integrand(T::narrow(i as f64) * h);
    let first = term(0) * half;
    for a in accs.iter_mut() {
        a.push(first);
    }
    let mut out = Vec::new();
    for j in 1..=steps {
        let t = term(j);
        if j % sample_every == 0 || j == steps {
            let closing = t * half;
            let peek: Vec<Accumulator<T>> = accs
                .iter()
                .map(|a| {
                    let mut a = a.clone();
                    a.push(closing);
                    a
                })
                .collect();
            out.push((j, Evaluation::from_accumulators(&peek, drop_oracle)));
        }
        if j < steps {
            for a in accs.iter_mut() {
                a.push(t);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rebits_core::FoldPolicy;

    #[test]
    fn single_panel() {
        let out = trapezoid_integrate::<f32>(2.0, 1, 1, &Scheme::all()).unwrap();
        assert_eq!(out.len(), 1);
        let (j, ev) = &out[0];
        assert_eq!(*j, 1);
        let h = 2.0f32;
        let expect = h * (integrand(0.0f32) + integrand(2.0f32)) / 2.0;
        assert!(ev.runs.iter().all(|r| r.value == Ok(expect)));
    }

    #[test]
    fn binary64_matches_the_antiderivative() {
        let out = trapezoid_integrate::<f64>(10.0, 1_000_000, 1_000_000, &[Scheme::Rebits(FoldPolicy::None)]).unwrap();
        let v = out[0].1.value(Scheme::Rebits(FoldPolicy::None)).unwrap();
        let exact = closed_form(10.0);
        assert!(((v - exact) / exact).abs() <= 1e-6, "{v} vs {exact}");
    }

    #[test]
    fn samples_land_on_the_grid() {
        let out = trapezoid_integrate::<f64>(1.0, 95, 10, &[Scheme::Naive]).unwrap();
        let js: Vec<u64> = out.iter().map(|(j, _)| *j).collect();
        assert_eq!(js, [10, 20, 30, 40, 50, 60, 70, 80, 90, 95]);
        assert!(trapezoid_integrate::<f64>(1.0, 0, 1, &[]).is_err());
    }
}
