mod common;

use common::*;
use mpb_core::harness::{preset, scheme_bases, ExperimentConfig, InterfererConfig};
use mpb_core::linalg::ComplexMatrix;
use mpb_core::mpb::*;
use mpb_core::sigmodel::*;
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn gold_family_correlations() {
    let codes: Vec<Vec<f64>> = (0..GOLD_FAMILY).map(|i| gold31(i).unwrap()).collect();
    for c in &codes {
        assert_eq!(c.len(), 31);
        assert!(c.iter().all(|&v| v == 1.0 || v == -1.0));
    }
    let allowed = [-1.0, -9.0, 7.0];
    for i in 0..GOLD_FAMILY {
        for j in 0..GOLD_FAMILY {
            for k in 0..31 {
                if i == j && k == 0 {
                    assert_eq!(cross_corr(&codes[i], &codes[j], 0), 31.0);
                    continue;
                }
                let v = cross_corr(&codes[i], &codes[j], k);
                assert!(allowed.contains(&v), "codes {i},{j} shift {k}: {v}");
            }
        }
    }
    assert!(gold31(GOLD_FAMILY).is_err());
}

#[test]
fn steering_examples() {
    let g = ArrayGeometry::default();
    let a = steering(0.0, &g).unwrap();
    assert!(a.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    let a = steering(30.0, &g).unwrap();
    assert!(a.iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));
    // half-wavelength spacing at 30°: phase step π/2 in magnitude
    assert!(((a[1] / a[0]).arg().abs() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!(steering(90.0, &g).is_err());
}

#[test]
fn pn_segment_has_unit_power_and_is_seeded() {
    let s = rng::unit_power_gaussian_segment(5, 31);
    let p: f64 = s.iter().map(|v| v.norm_sqr()).sum::<f64>() / 31.0;
    assert!((p - 1.0).abs() < 1e-12);
    assert_eq!(s, rng::unit_power_gaussian_segment(5, 31));
    assert_ne!(s, rng::unit_power_gaussian_segment(6, 31));
}

fn noise_only(symbols: usize) -> Scenario {
    let mut cfg = preset("fig4a-bpsk3").unwrap();
    cfg.interferers.clear();
    cfg.symbols = symbols;
    cfg.scenario_at(-300.0).unwrap()
}

#[test]
fn noise_variance_and_determinism() {
    let s = noise_only(2000);
    let real = Realization::new(&s).unwrap();
    let blocks = synth_blocks(&real).unwrap();
    assert_eq!(blocks.len(), 2000);
    let mut acc = 0.0;
    let mut cnt = 0.0;
    for b in &blocks {
        for v in b.data() {
            acc += v.norm_sqr();
            cnt += 1.0;
        }
    }
    let var = acc / cnt;
    // 496k complex samples: standard error ≈ 1.4e-3
    assert!((var - NOISE_VAR_EXPECTED).abs() < 0.01, "{var}");
    let again = synth_blocks(&real).unwrap();
    assert_eq!(blocks[17], again[17]);
    let mut s2 = s.clone();
    s2.seed += 1;
    let other = synth_blocks(&Realization::new(&s2).unwrap()).unwrap();
    assert_ne!(blocks[17], other[17]);
}

const NOISE_VAR_EXPECTED: f64 = 1.0;

#[test]
fn soi_block_structure() {
    // noise-free check through the SOI term: block − interference = √P0·b·a0·c0ᵀ
    let mut s = noise_only(10);
    s.set_snr(100.0);
    let real = Realization::new(&s).unwrap();
    let synth = BlockSynth::new(&real, 3);
    let p0 = s.soi.power;
    for k in 0..5u64 {
        let x = synth.block(k);
        let mut z = ComplexMatrix::zeros(8, 31);
        synth.interference_block(k, &mut z);
        let b = synth.soi_bit(k);
        assert!(b == 1.0 || b == -1.0);
        let d = &x - &z;
        for r in 0..8 {
            for c in 0..31 {
                let want = real.a0[r] * (p0.sqrt() * b * real.c0[c]);
                assert!((d[(r, c)] - want).norm() < 1e-12);
            }
        }
    }
}

fn with_interferers(list: Vec<InterfererConfig>, elements: usize) -> ExperimentConfig {
    let mut cfg = preset("fig4a-bpsk3").unwrap();
    cfg.interferers = list;
    cfg.geometry.elements = elements;
    cfg.inr_db = 10.0;
    cfg
}

/// The closed-form pair must be the limit of the sample pair for every interferer kind.
#[test]
fn sample_pairs_converge_to_closed_form() {
    let kinds = vec![
        InterfererConfig::BpskWhite { doa_deg: 30.0, rel_power_db: 0.0 },
        InterfererConfig::Tone { doa_deg: -20.0, offset_hz: 100e3, rel_power_db: 0.0 },
        InterfererConfig::Tone { doa_deg: 40.0, offset_hz: 37e3, rel_power_db: 0.0 },
        InterfererConfig::PeriodicalNoise { doa_deg: 30.0, rel_power_db: 0.0, segment_seed: None },
        InterfererConfig::MaiMultipath {
            user_code: 3,
            path_delays: vec![3, 5],
            path_doas: vec![30.0, -20.0],
            path_gains: Some(vec![2.0, 1.0]),
            rel_power_db: 0.0,
        },
    ];
    for k in kinds {
        let cfg = with_interferers(vec![k.clone()], 4);
        let real = Realization::new(&cfg.scenario_at(5.0).unwrap()).unwrap();
        let bases = scheme_bases(&cfg).unwrap();
        let stats = simulate_stats(&real, &bases, 77, 40_000).unwrap();
        for (b, st) in bases.iter().zip(&stats) {
            let m = analytic_cov(&real, b).unwrap();
            let es = (&st.pair.r_s - &m.r_s()).norm_fro() / m.r_s().norm_fro();
            let ei = (&st.pair.r_i - &m.r_i()).norm_fro() / m.r_i().norm_fro();
            let q = (&st.r_zs - &m.q_s).norm_fro() / m.q_s.norm_fro();
            assert!(es < 0.03 && ei < 0.03 && q < 0.03, "{k:?} {}: {es} {ei} {q}", b.scheme.name());
        }
    }
}

#[test]
fn simulate_stats_independent_of_worker_count() {
    let cfg = preset("fig4c-tones5").unwrap();
    let real = Realization::new(&cfg.scenario_at(10.0).unwrap()).unwrap();
    let bases = scheme_bases(&cfg).unwrap();
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| simulate_stats(&real, &bases, 9, 3 * mpb_core::mpb::cov::BATCH + 17).unwrap())
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a[0].pair.r_s, b[0].pair.r_s);
    assert_eq!(a[1].pair.r_i, b[1].pair.r_i);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn steering_unit_modulus(doa in -89.0f64..89.0, l in 2usize..16) {
        let g = ArrayGeometry { elements: l, spacing: 0.5 };
        let a = steering(doa, &g).unwrap();
        prop_assert_eq!(a.len(), l);
        prop_assert!(a.iter().all(|v| (v.norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn bits_are_deterministic(seed in any::<u64>(), tag in any::<u64>(), k in any::<i64>()) {
        let b = rng::bit(seed, tag, k);
        prop_assert!(b == 1.0 || b == -1.0);
        prop_assert_eq!(b, rng::bit(seed, tag, k));
    }
}
