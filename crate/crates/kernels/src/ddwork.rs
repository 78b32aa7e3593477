//! Synthetic stand-in for a double-double hydrodynamics code: a ring of cells
//! whose state is updated only through double-double additions.

use rand::Rng;
use rebits_core::ddouble::{add_native, add_rebits};
use rebits_core::eft::fast_two_sum;
use rebits_core::{DDouble, ExactAccumulator, Host, OpCounters, SchemeVariant, Soft};

use crate::gen::rng;

pub const CELLS: usize = 256;
const FLUXES: usize = 4096;
pub const CALLS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct DdWorkload {
    pub cells: Vec<DDouble>,
    /// Counts of the update loop only; setup is not counted.
    pub counts: OpCounters,
    pub calls: u64,
}

impl DdWorkload {
    /// Sum of all cell limbs, accumulated exactly and rounded once.
    pub fn checksum(&self) -> f64 {
        let mut acc = ExactAccumulator::for_scalar::<f64>();
        for c in &self.cells {
            acc.add_scalar(c.hi).expect("finite cell");
            acc.add_scalar(c.lo).expect("finite cell");
        }
        acc.round_to::<f64>()
    }
}

fn random_dd(r: &mut impl Rng, lo: i32, hi: i32) -> DDouble {
    let h = r.random_range(1.0..2.0) * 2f64.powi(r.random_range(lo..=hi));
    let h = if r.random::<bool>() { h } else { -h };
    let l = h * r.random_range(-1.0..1.0) * f64::EPSILON / 2.0;
    let s = fast_two_sum(&mut Host::new(), h, l);
    DDouble::new(s.s, s.e)
}

/// Cell energies near `2^10` receive signed fluxes between `2^-20` and `2^4`.
pub fn setup(seed: u64) -> (Vec<DDouble>, Vec<DDouble>) {
    let mut r = rng(seed);
    let cells =
        (0..CELLS).map(|_| random_dd(&mut r, 10, 10)).map(|d| if d.hi < 0.0 { d.negate() } else { d }).collect();
    let fluxes = (0..FLUXES).map(|_| random_dd(&mut r, -20, 4)).collect();
    (cells, fluxes)
}

/// `calls` updates `cell[k % CELLS] += flux[k % FLUXES]`.
pub fn dd_workload(calls: u64, seed: u64, variant: SchemeVariant) -> DdWorkload {
    let (mut cells, fluxes) = setup(seed);
    let mut counts = OpCounters::default();
    for k in 0..calls as usize {
        let c = &mut cells[k % CELLS];
        let f = fluxes[k % FLUXES];
        *c = match variant {
            SchemeVariant::Native => add_native(&mut Host::counting(&mut counts), *c, f),
            SchemeVariant::Rebits => add_rebits(&mut Soft::counting(&mut counts), *c, f),
        };
    }
    DdWorkload { cells, counts, calls }
}

/// Exact total of the initial cells and every applied flux.
pub fn exact_checksum(calls: u64, seed: u64) -> f64 {
    let (cells, fluxes) = setup(seed);
    let mut acc = ExactAccumulator::for_scalar::<f64>();
    for c in &cells {
        acc.add_scalar(c.hi).unwrap();
        acc.add_scalar(c.lo).unwrap();
    }
    // each flux is applied floor or ceil of calls / FLUXES times
    for (i, f) in fluxes.iter().enumerate() {
        let times = calls / FLUXES as u64 + u64::from((i as u64) < calls % FLUXES as u64);
        for _ in 0..times {
            acc.add_scalar(f.hi).unwrap();
            acc.add_scalar(f.lo).unwrap();
        }
    }
    acc.round_to::<f64>()
}
