//! Blocked array data `X(k) = √P0·b0(k)·a0·c0ᵀ + Σ √Pₚ·aₚ·sₚ(k)ᵀ + V(k)`.

use num_complex::Complex64;
use rand::Rng;

use super::rng::{bit, cgauss, symbol_rng};
use super::scenario::{cycles, Realization, Wave, TAG_SOI_BITS};
use crate::error::Result;
use crate::linalg::ComplexMatrix;

/// Per-symbol generator over a fixed realization and data seed.
///
/// Symbol `k` depends only on `(data_seed, k)`, so any partition of the
/// symbol range across workers yields the same blocks.
#[derive(Clone, Debug)]
pub struct BlockSynth<'a> {
    pub real: &'a Realization,
    pub data_seed: u64,
}

impl<'a> BlockSynth<'a> {
    pub fn new(real: &'a Realization, data_seed: u64) -> Self {
        Self { real, data_seed }
    }

    /// SOI bit `b0(k)`.
    pub fn soi_bit(&self, k: u64) -> f64 {
        bit(self.data_seed, TAG_SOI_BITS, k as i64)
    }

    /// Writes the interference-plus-noise block `Z(k)` (L × N) into `z`.
    pub fn interference_block(&self, k: u64, z: &mut ComplexMatrix) {
        let real = self.real;
        let n = real.processing_gain();
        let l = real.scenario.elements();
        debug_assert!(z.rows() == l && z.cols() == n);
        let mut rng = symbol_rng(self.data_seed, k);
        let sigma2 = real.scenario.noise_var;
        for r in 0..l {
            for c in 0..n {
                z[(r, c)] = cgauss(&mut rng, sigma2);
            }
        }
        let mut wave = vec![Complex64::new(0.0, 0.0); n];
        let t0 = (k as usize * n + real.scenario.soi.delay) as i64;
        for path in &real.paths {
            match &path.wave {
                Wave::White => {
                    for w in wave.iter_mut() {
                        *w = Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0);
                    }
                }
                Wave::Periodic { block_cycles, block, .. } => {
                    let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * cycles(*block_cycles, k as f64));
                    for (w, t) in wave.iter_mut().zip(block) {
                        *w = t * rot;
                    }
                }
                Wave::Mai { code, delay, stream_tag } => {
                    let nn = n as i64;
                    for (m, w) in wave.iter_mut().enumerate() {
                        let a = t0 + m as i64 - *delay as i64;
                        let b = bit(self.data_seed, *stream_tag, a.div_euclid(nn));
                        *w = Complex64::new(b * code[a.rem_euclid(nn) as usize], 0.0);
                    }
                }
            }
            let amp = path.power.sqrt();
            for r in 0..l {
                let a = path.steering[r] * amp;
                for c in 0..n {
                    z[(r, c)] += a * wave[c];
                }
            }
        }
    }

    /// Full block `X(k)`.
    pub fn block(&self, k: u64) -> ComplexMatrix {
        let real = self.real;
        let mut x = ComplexMatrix::zeros(real.scenario.elements(), real.processing_gain());
        self.interference_block(k, &mut x);
        let s = real.scenario.soi.power.sqrt() * self.soi_bit(k);
        for r in 0..x.rows() {
            for c in 0..x.cols() {
                x[(r, c)] += real.a0[r] * (s * real.c0[c]);
            }
        }
        x
    }
}

/// Blocks `X(0)..X(K−1)` of a scenario, with the scenario seed as data seed.
pub fn synth_blocks(real: &Realization) -> Result<Vec<ComplexMatrix>> {
    let synth = BlockSynth::new(real, real.scenario.seed);
    Ok((0..real.scenario.symbols as u64).map(|k| synth.block(k)).collect())
}
