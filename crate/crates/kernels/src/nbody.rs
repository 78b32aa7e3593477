use rand::Rng;
use rebits_core::Scalar;

use crate::error::KernelError;
use crate::gen::rng;
use crate::record::Evaluation;
use crate::scheme::Scheme;

/// Particle counts of the default sweep.
pub const SWEEP: [usize; 8] = [1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Particle<T> {
    pub pos: [T; 3],
    pub q: T,
}

/// Positions uniform in the unit cube, charges uniform in `[-1, 1]`, rounded
/// to `T`. Coincident positions are rejected.
pub fn gen_particles<T: Scalar>(n: usize, seed: u64) -> Result<Vec<Particle<T>>, KernelError> {
    if n < 2 {
        return Err(KernelError::InvalidParameter(format!("n-body needs n >= 2, got {n}")));
    }
    let mut r = rng(seed);
    let ps: Vec<Particle<T>> = (0..n)
        .map(|_| {
            let pos = [0; 3].map(|_| T::narrow(r.random::<f64>()));
            Particle { pos, q: T::narrow(r.random_range(-1.0..=1.0)) }
        })
        .collect();
    let mut keys: Vec<[u64; 3]> = ps.iter().map(|p| p.pos.map(|c| c.widen().to_bits())).collect();
    keys.sort_unstable();
    if keys.windows(2).any(|w| w[0] == w[1]) {
        return Err(KernelError::InvalidParameter(format!("seed {seed} produced coincident particles")));
    }
    Ok(ps)
}

/// `q_i q_j / |r_i - r_j|` for every `i < j`, evaluated in `T`.
pub fn pair_terms<T: Scalar>(ps: &[Particle<T>]) -> impl Iterator<Item = T> + '_ {
    (0..ps.len()).flat_map(move |i| {
        (i + 1..ps.len()).map(move |j| {
            let (a, b) = (&ps[i], &ps[j]);
            let d = [0, 1, 2].map(|k| a.pos[k] - b.pos[k]);
            let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            a.q * b.q / r
        })
    })
}

/// Electrostatic potential energy with unit Coulomb constant.
pub fn nbody_potential<T: Scalar>(ps: &[Particle<T>], schemes: &[Scheme]) -> Evaluation<T> {
    Evaluation::evaluate(schemes, pair_terms(ps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;

    #[test]
    fn two_unit_charges_half_apart() {
        let ps = [Particle { pos: [0.0f32, 0.0, 0.0], q: 1.0 }, Particle { pos: [0.5, 0.0, 0.0], q: 1.0 }];
        let ev = nbody_potential(&ps, &Scheme::all());
        assert!(ev.runs.iter().all(|r| r.value == Ok(2.0)));
    }

    #[test]
    fn oracle_ignores_labels() {
        let mut ps = gen_particles::<f32>(60, 4).unwrap();
        let a = nbody_potential(&ps, &[Scheme::Oracle]).oracle;
        ps.shuffle(&mut rng(1));
        // relabelling also swaps i and j, which flips the differences' signs
        // but not the rounded distances or the products
        assert_eq!(nbody_potential(&ps, &[Scheme::Oracle]).oracle, a);
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(gen_particles::<f64>(10, 3).unwrap(), gen_particles::<f64>(10, 3).unwrap());
        assert!(gen_particles::<f64>(1, 3).is_err());
    }
}
