use rand_distr::{Distribution, StandardNormal};
use rebits_core::Scalar;
use serde::{Deserialize, Serialize};

use crate::error::KernelError;
use crate::gen::rng;
use crate::record::Evaluation;
use crate::scheme::Scheme;

pub const PATHS: u64 = 1_000_000;

/// European call parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub s0: f64,
    pub strike: f64,
    pub rate: f64,
    pub sigma: f64,
    pub maturity: f64,
}

impl Default for McParams {
    fn default() -> Self {
        Self { s0: 100.0, strike: 100.0, rate: 0.1, sigma: 0.25, maturity: 1.0 }
    }
}

impl McParams {
    pub fn validate(&self) -> Result<(), KernelError> {
        if self.sigma > 0.0 && self.maturity > 0.0 {
            Ok(())
        } else {
            Err(KernelError::InvalidParameter("Monte Carlo needs sigma > 0 and T > 0".into()))
        }
    }
}

/// Call payoff at expiry for one standard normal draw, in `T`.
pub fn payoff<T: Scalar>(p: &McParams, z: T) -> T {
    let c = |v: f64| T::narrow(v);
    let drift = (c(p.rate) - c(0.5) * c(p.sigma) * c(p.sigma)) * c(p.maturity);
    let vol = c(p.sigma) * c(p.maturity).sqrt();
    let st = c(p.s0) * (drift + vol * z).exp();
    (st - c(p.strike)).max(T::zero())
}

/// Discounted mean of the summed payoffs.
pub fn price_from_sum<T: Scalar>(p: &McParams, sum: T, paths: u64) -> T {
    let c = |v: f64| T::narrow(v);
    (-c(p.rate) * c(p.maturity)).exp() * sum / c(paths as f64)
}

/// Prices with normals drawn from `draw`; only the payoff sum varies by
/// scheme, and the oracle sums the same rounded payoffs exactly.
pub fn mc_price_with<T: Scalar>(
    paths: u64,
    params: &McParams,
    schemes: &[Scheme],
    mut draw: impl FnMut() -> f64,
) -> Result<Evaluation<T>, KernelError> {
    params.validate()?;
    if paths == 0 {
        return Err(KernelError::InvalidParameter("paths must be at least 1".into()));
    }
    let terms = (0..paths).map(|_| payoff(params, T::narrow(draw())));
    Ok(Evaluation::evaluate(schemes, terms).map(|s| price_from_sum(params, s, paths)))
}

pub fn mc_euro_price<T: Scalar>(
    paths: u64,
    seed: u64,
    params: &McParams,
    schemes: &[Scheme],
) -> Result<Evaluation<T>, KernelError> {
    let mut r = rng(seed);
    mc_price_with(paths, params, schemes, || StandardNormal.sample(&mut r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_draws() {
        let p = McParams::default();
        let ev = mc_price_with::<f64>(1000, &p, &[Scheme::Oracle], || 0.0).unwrap();
        let one = p.s0 * ((p.rate - p.sigma * p.sigma / 2.0) * p.maturity).exp() - p.strike;
        assert!((payoff(&p, 0.0f64) - one).abs() < 1e-12);
        let expect = (-p.rate * p.maturity).exp() * one;
        assert!((ev.oracle.unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn one_path_is_scheme_independent() {
        let ev = mc_euro_price::<f32>(1, 7, &McParams::default(), &Scheme::all()).unwrap();
        let o = ev.oracle.clone().unwrap();
        assert!(ev.runs.iter().all(|r| r.value == Ok(o)));
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = McParams { sigma: 0.0, ..McParams::default() };
        assert!(mc_euro_price::<f64>(10, 1, &p, &[]).is_err());
        assert!(mc_euro_price::<f64>(0, 1, &McParams::default(), &[]).is_err());
    }

    #[test]
    fn price_is_near_black_scholes() {
        // Black-Scholes value for the defaults is about 14.98
        let ev = mc_euro_price::<f64>(200_000, 3, &McParams::default(), &[Scheme::Oracle]).unwrap();
        assert!((ev.oracle.unwrap() - 14.98).abs() < 0.3);
    }
}
