//! Counter-based randomness: every draw is a pure function of (seed, tag, index).

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn hash3(seed: u64, tag: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ tag) ^ index)
}

/// Derived seed for sweep point `index`.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    hash3(seed, 0x9017, index as u64)
}

pub fn uniform01(h: u64) -> f64 {
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// ±1 bit for symbol `k` of stream `tag`; negative symbol indices are valid.
pub fn bit(seed: u64, tag: u64, k: i64) -> f64 {
    if hash3(seed, tag, k as u64) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Generator for everything drawn inside symbol `k`.
pub fn symbol_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(hash3(seed, 0xc4a, 0));
    rng.set_stream(k);
    rng
}

/// Circular complex Gaussian with `E|z|² = var`.
pub fn cgauss(rng: &mut ChaCha8Rng, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

/// Complex Gaussian segment scaled to exactly unit average power.
pub fn unit_power_gaussian_segment(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<Complex64> = (0..n).map(|_| cgauss(&mut rng, 1.0)).collect();
    let p = g.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
    g.iter().map(|z| z / p.sqrt()).collect()
}
