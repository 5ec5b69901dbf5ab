//! Channel snapshots and the covariance pair `(R_S, R_I)`, sampled or analytic.

use num_complex::Complex64;
use rayon::prelude::*;

use super::bases::ProjectionBases;
use crate::error::{Error, Result};
use crate::linalg::{hpd_inverse, ComplexMatrix};
use crate::sigmodel::{BlockSynth, Realization};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    Sample,
    Analytic,
}

#[derive(Clone, Debug)]
pub struct CovariancePair {
    pub r_s: ComplexMatrix,
    pub r_i: ComplexMatrix,
    pub kind: PairKind,
}

/// Signal-channel snapshot `x_S = X h_S*` and interference-channel snapshots `X_I = X H_I*`.
pub fn snapshots(x: &ComplexMatrix, bases: &ProjectionBases) -> Result<(Vec<Complex64>, ComplexMatrix)> {
    if x.cols() != bases.n() {
        return Err(Error::Dimension(format!("block has {} columns, bases length {}", x.cols(), bases.n())));
    }
    let hs = ComplexMatrix::column(&bases.h_s).conj();
    let xs = x.matmul(&hs)?.col(0);
    let xi = x.matmul(&bases.h_i.conj())?;
    Ok((xs, xi))
}

fn add_outer(acc: &mut [Complex64], v: &[Complex64]) {
    let l = v.len();
    for i in 0..l {
        let vi = v[i];
        let row = &mut acc[i * l..(i + 1) * l];
        for (a, vj) in row.iter_mut().zip(v) {
            *a += vi * vj.conj();
        }
    }
}

/// `R_S = (1/K)Σ x_S x_Sᴴ`, `R_I = (1/(K r_I))Σ X_I X_Iᴴ`.
pub fn estimate_cov_pair(xs: &[Vec<Complex64>], xi: &[ComplexMatrix]) -> Result<CovariancePair> {
    let k = xs.len();
    if k == 0 || xi.len() != k {
        return Err(Error::InvalidArgument(format!("need equal non-zero snapshot counts, got {k} and {}", xi.len())));
    }
    let l = xs[0].len();
    let r = xi[0].cols();
    let mut rs = vec![Complex64::new(0.0, 0.0); l * l];
    let mut ri = vec![Complex64::new(0.0, 0.0); l * l];
    for (s, m) in xs.iter().zip(xi) {
        add_outer(&mut rs, s);
        for j in 0..r {
            add_outer(&mut ri, &m.col(j));
        }
    }
    let rs = ComplexMatrix::from_vec(l, l, rs)?.scale(1.0 / k as f64).hermitian_part();
    let ri = ComplexMatrix::from_vec(l, l, ri)?.scale(1.0 / (k * r) as f64).hermitian_part();
    Ok(CovariancePair { r_s: rs, r_i: ri, kind: PairKind::Sample })
}

/// Monte Carlo statistics of one sweep point, per scheme.
#[derive(Clone, Debug)]
pub struct SampleStats {
    pub pair: CovariancePair,
    /// Sample covariance of the interference-plus-noise part of the signal channel.
    pub r_zs: ComplexMatrix,
}

#[derive(Clone)]
struct Sums {
    rs: Vec<Complex64>,
    rzs: Vec<Complex64>,
    ri: Vec<Vec<Complex64>>,
}

impl Sums {
    fn new(l: usize, schemes: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); l * l];
        Self { rs: z.clone(), rzs: z.clone(), ri: vec![z; schemes] }
    }

    fn merge(&mut self, o: &Sums) {
        for (a, b) in self.rs.iter_mut().zip(&o.rs) {
            *a += b;
        }
        for (a, b) in self.rzs.iter_mut().zip(&o.rzs) {
            *a += b;
        }
        for (ra, rb) in self.ri.iter_mut().zip(&o.ri) {
            for (a, b) in ra.iter_mut().zip(rb) {
                *a += b;
            }
        }
    }
}

/// Symbols per work unit; fixed so the reduction tree does not depend on thread count.
pub const BATCH: usize = 4096;

/// Accumulates sample pairs for several bases sharing one data stream.
///
/// All bases must share the same `h_S` (same SOI code). Batches run on the
/// current rayon pool and are summed in index order.
pub fn simulate_stats(
    real: &Realization,
    bases: &[ProjectionBases],
    data_seed: u64,
    symbols: usize,
) -> Result<Vec<SampleStats>> {
    if symbols == 0 {
        return Err(Error::InvalidArgument("symbol count must be positive".into()));
    }
    if bases.is_empty() {
        return Ok(Vec::new());
    }
    let n = real.processing_gain();
    let l = real.scenario.elements();
    let hs = &bases[0].h_s;
    if bases.iter().any(|b| b.n() != n || b.h_s != *hs) {
        return Err(Error::InvalidArgument("bases must share the signal vector".into()));
    }
    let amp = real.scenario.soi.power.sqrt();
    let (gs, _) = bases[0].code_gains();
    let gis: Vec<Vec<Complex64>> = bases.iter().map(|b| b.code_gains().1).collect();
    let hic: Vec<ComplexMatrix> = bases.iter().map(|b| b.h_i.conj()).collect();
    let synth = BlockSynth::new(real, data_seed);
    let nb = symbols.div_ceil(BATCH);
    let parts: Vec<Sums> = (0..nb)
        .into_par_iter()
        .map(|bi| {
            let mut sums = Sums::new(l, bases.len());
            let mut z = ComplexMatrix::zeros(l, n);
            let mut zs = vec![Complex64::new(0.0, 0.0); l];
            let mut xs = vec![Complex64::new(0.0, 0.0); l];
            let mut xi = vec![Complex64::new(0.0, 0.0); l];
            for k in bi * BATCH..((bi + 1) * BATCH).min(symbols) {
                let k = k as u64;
                synth.interference_block(k, &mut z);
                let s = amp * synth.soi_bit(k);
                for r in 0..l {
                    zs[r] = z.row(r).iter().zip(hs).map(|(a, h)| a * h.conj()).sum();
                    xs[r] = zs[r] + real.a0[r] * (gs * s);
                }
                add_outer(&mut sums.rs, &xs);
                add_outer(&mut sums.rzs, &zs);
                for (si, (hi, gi)) in hic.iter().zip(&gis).enumerate() {
                    for j in 0..hi.cols() {
                        for r in 0..l {
                            let zr = z.row(r);
                            let mut acc = real.a0[r] * (gi[j] * s);
                            for c in 0..n {
                                acc += zr[c] * hi[(c, j)];
                            }
                            xi[r] = acc;
                        }
                        add_outer(&mut sums.ri[si], &xi);
                    }
                }
            }
            sums
        })
        .collect();
    let mut total = Sums::new(l, bases.len());
    for p in &parts {
        total.merge(p);
    }
    let k = symbols as f64;
    let rs = ComplexMatrix::from_vec(l, l, total.rs)?.scale(1.0 / k).hermitian_part();
    let rzs = ComplexMatrix::from_vec(l, l, total.rzs)?.scale(1.0 / k).hermitian_part();
    Ok(bases
        .iter()
        .zip(total.ri)
        .map(|(b, ri)| {
            let ri = ComplexMatrix::from_vec(l, l, ri).expect("shape").scale(1.0 / (k * b.r_i() as f64)).hermitian_part();
            SampleStats {
                pair: CovariancePair { r_s: rs.clone(), r_i: ri, kind: PairKind::Sample },
                r_zs: rzs.clone(),
            }
        })
        .collect())
}

/// Exact second-order statistics of a scenario seen through a pair of bases.
#[derive(Clone, Debug)]
pub struct AnalyticModel {
    pub l: usize,
    pub n: usize,
    pub r_i: usize,
    pub a0: Vec<Complex64>,
    /// Interference steering matrix (L × D).
    pub a_int: ComplexMatrix,
    /// Path covariances as seen in each channel, powers included (D × D).
    pub phi_s: ComplexMatrix,
    pub phi_i: ComplexMatrix,
    pub q_s: ComplexMatrix,
    pub q_i: ComplexMatrix,
    pub sigma2: f64,
    pub sigma_s0_sq: f64,
    pub sigma_i0_sq: f64,
    pub beta: f64,
}

/// Builds `Q_S = A_I Φ_S A_Iᴴ + σ²I` and `Q_I = A_I Φ_I A_Iᴴ + σ²I` with the
/// waveform expectations taken in closed form (including the random-bit
/// average for multipath users).
pub fn analytic_cov(real: &Realization, bases: &ProjectionBases) -> Result<AnalyticModel> {
    let n = real.processing_gain();
    if bases.n() != n {
        return Err(Error::Dimension(format!("bases of length {} for processing gain {n}", bases.n())));
    }
    let l = real.scenario.elements();
    let d = real.paths.len();
    let sigma2 = real.scenario.noise_var;
    let r_i = bases.r_i();
    let hs = ComplexMatrix::column(&bases.h_s);
    let mut phi_s = ComplexMatrix::zeros(d, d);
    let mut phi_i = ComplexMatrix::zeros(d, d);
    for p in 0..d {
        for q in 0..d {
            if let Some(c) = real.block_cov(p, q) {
                let amp = (real.paths[p].power * real.paths[q].power).sqrt();
                let s = hs.adj_mul(&c.matmul(&hs)?)?[(0, 0)];
                let i = bases.h_i.adj_mul(&c.matmul(&bases.h_i)?)?.trace();
                phi_s[(p, q)] = s * amp;
                phi_i[(p, q)] = i * (amp / r_i as f64);
            }
        }
    }
    let phi_s = phi_s.hermitian_part();
    let phi_i = phi_i.hermitian_part();
    let a_int = real.steering_matrix();
    let noise = ComplexMatrix::identity(l).scale(sigma2);
    let (q_s, q_i) = if d == 0 {
        (noise.clone(), noise)
    } else {
        (
            (&a_int.matmul(&phi_s)?.matmul(&a_int.adjoint())? + &noise).hermitian_part(),
            (&a_int.matmul(&phi_i)?.matmul(&a_int.adjoint())? + &noise).hermitian_part(),
        )
    };
    let p0 = real.scenario.soi.power;
    let beta = bases.beta();
    Ok(AnalyticModel {
        l,
        n,
        r_i,
        a0: real.a0.clone(),
        a_int,
        phi_s,
        phi_i,
        q_s,
        q_i,
        sigma2,
        sigma_s0_sq: n as f64 * p0,
        sigma_i0_sq: p0 * beta,
        beta,
    })
}

impl AnalyticModel {
    pub fn d(&self) -> usize {
        self.a_int.cols()
    }

    pub fn snr(&self) -> f64 {
        self.sigma_s0_sq / self.sigma2
    }

    fn a0a0(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.a0, &self.a0)
    }

    pub fn r_s(&self) -> ComplexMatrix {
        (&self.a0a0().scale(self.sigma_s0_sq) + &self.q_s).hermitian_part()
    }

    pub fn r_i(&self) -> ComplexMatrix {
        (&self.a0a0().scale(self.sigma_i0_sq) + &self.q_i).hermitian_part()
    }

    pub fn pair(&self) -> CovariancePair {
        CovariancePair { r_s: self.r_s(), r_i: self.r_i(), kind: PairKind::Analytic }
    }

    /// Same model with the SOI power changed to give input SNR `snr`.
    pub fn with_snr(&self, snr: f64) -> Self {
        let mut m = self.clone();
        let p0 = snr * self.sigma2 / self.n as f64;
        m.sigma_s0_sq = self.n as f64 * p0;
        m.sigma_i0_sq = p0 * self.beta;
        m
    }

    /// `Φ_Δ = Φ_S − Φ_I`.
    pub fn phi_delta(&self) -> ComplexMatrix {
        &self.phi_s - &self.phi_i
    }

    pub fn r_i_inverse(&self) -> Result<ComplexMatrix> {
        hpd_inverse(&self.r_i())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpb::bases::papc_bases;
    use crate::sigmodel::{gold31, ArrayGeometry, Scenario, SoiSpec};

    #[test]
    fn snapshot_examples() {
        let c0 = gold31(0).unwrap();
        let b = papc_bases(&c0, 0).unwrap();
        let a0 = crate::sigmodel::steering(10.0, &ArrayGeometry::default()).unwrap();
        let x = ComplexMatrix::from_fn(8, 31, |r, c| a0[r] * c0[c]);
        let (xs, _) = snapshots(&x, &b).unwrap();
        for r in 0..8 {
            assert!((xs[r] - a0[r] * 31f64.sqrt()).norm() < 1e-12);
        }
        let mm = crate::mpb::bases::maximin_bases(&c0, 16.0 / 31.0).unwrap();
        let (_, xi) = snapshots(&x, &mm).unwrap();
        assert!(xi.norm_max() < 1e-12);
    }

    #[test]
    fn constant_snapshots_give_outer_product() {
        let v = vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0)];
        let xs = vec![v.clone(); 5];
        let xi = vec![ComplexMatrix::column(&v); 5];
        let p = estimate_cov_pair(&xs, &xi).unwrap();
        assert!((&p.r_s - &ComplexMatrix::outer(&v, &v)).norm_max() < 1e-14);
        assert!(estimate_cov_pair(&[], &[]).is_err());
    }

    #[test]
    fn no_interferers_gives_noise_only_q() {
        let sc = Scenario {
            geometry: ArrayGeometry::default(),
            soi: SoiSpec { code_index: 0, delay: 0, doa_deg: 0.0, power: 1.0 },
            interferers: vec![],
            noise_var: 2.0,
            symbols: 10,
            seed: 1,
        };
        let real = Realization::new(&sc).unwrap();
        let b = papc_bases(&real.c0, 0).unwrap();
        let m = analytic_cov(&real, &b).unwrap();
        let want = ComplexMatrix::identity(8).scale(2.0);
        assert!((&m.q_s - &want).norm_max() == 0.0 && (&m.q_i - &want).norm_max() == 0.0);
        assert_eq!(m.sigma_s0_sq, 31.0);
        assert!((m.sigma_i0_sq - 1.0).abs() < 1e-12);
    }
}
