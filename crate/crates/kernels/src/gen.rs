//! Seeded input generators. Every generated value is exactly representable in
//! the requested format, and the same (parameters, seed) always gives the same
//! data.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rebits_core::{ExactAccumulator, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::KernelError;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over the representable values of `T` in `[2^e, 2^(e+1))`.
pub fn uniform_in_binade<T: Scalar>(r: &mut impl Rng, e: i32) -> T {
    let frac_bits = T::FORMAT.frac_bits();
    let m = r.random_range(0..1u64 << frac_bits) | (1u64 << frac_bits);
    T::narrow(m as f64 * 2f64.powi(e - frac_bits as i32))
}

/// Binade exponents used by [`gen_skewed_positive`]: the large values sit in
/// `[2^large, 2^(large+1))` and the small ones in `[2^-6, 2^-5)`. For binary64
/// the large range moves up by 29 binades so that, as in binary32, the
/// large/small ratio exceeds `2^p`.
pub fn skewed_binades<T: Scalar>() -> (i32, i32) {
    let shift = T::FORMAT.precision() as i32 - 24;
    (20 + shift, -6)
}

/// First `ceil(3n/4)` values large, the rest small. Naive summation stalls
/// on every small value.
pub fn gen_skewed_positive<T: Scalar>(n: usize, seed: u64) -> Result<Vec<T>, KernelError> {
    if n < 4 {
        return Err(KernelError::InvalidParameter(format!("skewed vector needs n >= 4, got {n}")));
    }
    let (large, small) = skewed_binades::<T>();
    let mut r = rng(seed);
    let heads = (3 * n).div_ceil(4);
    Ok((0..n).map(|i| uniform_in_binade(&mut r, if i < heads { large } else { small })).collect())
}

/// Number of large values opening each block of [`gen_skewed_blocks`].
pub const BLOCK_HEADS: usize = 1024;
/// Number of small values following them.
pub const BLOCK_TAIL: usize = 3 << 20;

/// Blocks of [`BLOCK_HEADS`] values in `[2^20, 2^21)` followed by
/// [`BLOCK_TAIL`] values just under half an ulp of the block's running sum.
/// The head sum lies in `[2^30, 2^31)`, so each tail value is lost to a naive
/// sum of its block; together the tails carry about 8% of the total.
pub fn gen_skewed_blocks<T: Scalar>(blocks: usize, seed: u64) -> Vec<T> {
    let p = T::FORMAT.precision() as i32;
    let mut r = rng(seed);
    let mut v = Vec::with_capacity(blocks * (BLOCK_HEADS + BLOCK_TAIL));
    for _ in 0..blocks {
        v.extend((0..BLOCK_HEADS).map(|_| uniform_in_binade::<T>(&mut r, 20)));
        v.extend((0..BLOCK_TAIL).map(|_| uniform_in_binade::<T>(&mut r, 29 - p)));
    }
    v
}

/// Traversal order over a [`Grid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    RowFirst,
    ReverseRowFirst,
    ColFirst,
    ReverseColFirst,
}

impl Order {
    pub const ALL: [Order; 4] = [Order::RowFirst, Order::ReverseRowFirst, Order::ColFirst, Order::ReverseColFirst];

    pub fn name(&self) -> &'static str {
        match self {
            Order::RowFirst => "row-first",
            Order::ReverseRowFirst => "reverse-row-first",
            Order::ColFirst => "col-first",
            Order::ReverseColFirst => "reverse-col-first",
        }
    }

    /// A comma-separated list, or `all`.
    pub fn parse_list(text: &str) -> Result<Vec<Order>, KernelError> {
        if text == "all" {
            return Ok(Self::ALL.to_vec());
        }
        text.split(',').map(str::trim).map(str::parse).collect()
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Order {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, KernelError> {
        Order::ALL.into_iter().find(|o| o.name() == s).ok_or_else(|| KernelError::UnknownOrder(s.to_string()))
    }
}

/// Row-major matrix of binary64 values.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

pub const GRID_ROWS: usize = 120;
pub const GRID_COLS: usize = 64;

impl Grid {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, KernelError> {
        if rows * cols != data.len() {
            return Err(KernelError::InvalidParameter(format!(
                "{rows}x{cols} grid needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn constant(rows: usize, cols: usize, x: f64) -> Self {
        Self { rows, cols, data: vec![x; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn traverse(&self, order: Order) -> impl Iterator<Item = f64> + '_ {
        let (rows, cols) = (self.rows, self.cols);
        let n = rows * cols;
        (0..n).map(move |k| {
            let (r, c) = match order {
                Order::RowFirst => (k / cols, k % cols),
                Order::ReverseRowFirst => ((n - 1 - k) / cols, (n - 1 - k) % cols),
                Order::ColFirst => (k % rows, k / rows),
                Order::ReverseColFirst => ((n - 1 - k) % rows, (n - 1 - k) / rows),
            };
            self.get(r, c)
        })
    }

    /// `sum |x| / |sum x|`, infinite when the sum is zero.
    pub fn condition_number(&self) -> f64 {
        let mut abs = ExactAccumulator::for_scalar::<f64>();
        let mut sum = ExactAccumulator::for_scalar::<f64>();
        for &x in &self.data {
            abs.add_scalar(x.abs()).expect("finite grid");
            sum.add_scalar(x).expect("finite grid");
        }
        abs.round_to::<f64>() / sum.round_to::<f64>().abs()
    }
}

/// Ill-conditioned mixed-sign grid. Half the cells hold a small signal
/// `k * 2^-30` with `|k| <= 2^29`; the rest hold pairs `L`, `-L + m` with
/// `|L|` in `[2^40, 2^50)` and integer `m` in `[-4, 4]`, scattered at random.
///
/// Every value is a multiple of `2^-30`. The error terms of a rebits sum are
/// multiples of `2^-30` too and their running total stays below `2^22`, so
/// it is exact and the final fold rounds the exact sum in every traversal
/// order.
pub fn gen_grid(rows: usize, cols: usize, seed: u64) -> Grid {
    let n = rows * cols;
    let mut r = rng(seed);
    let pairs = n / 4;
    let mut data = Vec::with_capacity(n);
    for _ in 0..pairs {
        let e = r.random_range(40..50);
        let big: f64 = uniform_in_binade(&mut r, e);
        let big = if r.random::<bool>() { big } else { -big };
        let m = r.random_range(-4i32..=4) as f64;
        data.push(big);
        data.push(-big + m);
    }
    while data.len() < n {
        let k = r.random_range(-(1i64 << 29)..=(1i64 << 29));
        data.push(k as f64 * 2f64.powi(-30));
    }
    data.shuffle(&mut r);
    Grid { rows, cols, data }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skewed_structure_and_determinism() {
        let v: Vec<f32> = gen_skewed_positive(4, 9).unwrap();
        assert!(v[..3].iter().all(|x| (1_048_576.0..2_097_152.0).contains(x)));
        assert!((0.015625..0.03125).contains(&v[3]));
        assert_eq!(v, gen_skewed_positive::<f32>(4, 9).unwrap());
        assert!(gen_skewed_positive::<f32>(3, 9).is_err());
        let w: Vec<f64> = gen_skewed_positive(7, 1).unwrap();
        assert!(w[..6].iter().all(|x| (2f64.powi(49)..2f64.powi(50)).contains(x)));
    }

    #[test]
    fn binade_sampler_stays_inside() {
        let mut r = rng(3);
        for e in [-140, -20, 0, 100] {
            for _ in 0..1000 {
                let x: f32 = uniform_in_binade(&mut r, e.clamp(-126, 127));
                let e = e.clamp(-126, 127);
                assert!(x >= 2f32.powi(e) && x < 2f32.powi(e + 1));
            }
        }
    }

    #[test]
    fn traversals_are_permutations() {
        let g = Grid::new(3, 5, (0..15).map(|x| x as f64).collect()).unwrap();
        for o in Order::ALL {
            let mut seen: Vec<f64> = g.traverse(o).collect();
            seen.sort_by(f64::total_cmp);
            assert_eq!(seen, (0..15).map(|x| x as f64).collect::<Vec<_>>());
        }
        assert_eq!(g.traverse(Order::ColFirst).take(4).collect::<Vec<_>>(), [0.0, 5.0, 10.0, 1.0]);
        assert_eq!(g.traverse(Order::ReverseColFirst).next(), Some(14.0));
        assert_eq!(Order::parse_list("all").unwrap().len(), 4);
        assert_eq!("col-first".parse::<Order>().unwrap(), Order::ColFirst);
    }

    #[test]
    fn shipped_grid_is_ill_conditioned() {
        let g = gen_grid(GRID_ROWS, GRID_COLS, 1);
        assert!(g.condition_number() >= 1e14, "{}", g.condition_number());
        assert!(g.data.iter().all(|x| (x * 2f64.powi(30)).fract() == 0.0));
    }
}
