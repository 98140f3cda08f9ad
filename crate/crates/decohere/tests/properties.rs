//! Property tests for the structural invariants the closed forms promise.

use decohere::decoherence;
use decohere::density::{self, WavePacket};
use decohere::model::{self, MomentumPair, PhysicalParams};
use decohere::oracle::{self, Cutoff, KernelKind, SpectralKernel};
use decohere::specfun;
use decohere::Regime;
use num_complex::Complex64;
use proptest::prelude::*;

fn params_strategy() -> impl Strategy<Value = PhysicalParams> {
    // α spanning weak to strong coupling, r = ϖ/Ω across four decades.
    (1e-4..1.0f64, 1e-4..0.99f64, 0.0..100.0f64).prop_map(|(alpha, ratio, chi)| {
        PhysicalParams::new(alpha, 1.0, ratio, 1.0, chi).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_real_parts_are_never_positive(
        q in 0.0..50.0f64,
        tau in 0.0..1e4f64,
    ) {
        let vac = decoherence::gamma_vac_partial(q, tau).unwrap();
        prop_assert!(vac <= 0.0);
        prop_assert!(vac.exp() <= 1.0 && vac.exp() > 0.0 || q * tau > 600.0);
        let unc = decoherence::gamma_uncorrelated(q, 0.0, tau).unwrap();
        prop_assert!(unc.gamma_real <= 0.0);
    }

    #[test]
    fn gamma_scaling_collapses_onto_the_master_curve(
        q in 1e-3..100.0f64,
        tau in 1e-3..1e3f64,
    ) {
        let master = decoherence::gamma_vac_partial(1.0, tau).unwrap();
        let scaled = decoherence::gamma_vac_partial(q, tau).unwrap() / q;
        prop_assert!((scaled - master).abs() <= 1e-14 * (1.0 + master.abs()));
    }

    #[test]
    fn si_deficit_and_cin_stay_nonnegative_and_bounded(x in 0.0..1e6f64) {
        let cin = specfun::cin(x).unwrap().value;
        prop_assert!(cin >= 0.0);
        let deficit = specfun::si_deficit(x).unwrap().value;
        prop_assert!((0.0..=x.max(0.0) + 1e-12).contains(&deficit));
    }

    #[test]
    fn q_factor_is_translation_invariant_and_quadratic(
        u in -0.09..0.09f64,
        separation in 1e-4..0.05f64,
        shift in -0.5..0.5f64,
        alpha in 1e-4..1.0f64,
    ) {
        let params = PhysicalParams::new(alpha, 1.0, 0.01, 1.0, 0.0).unwrap();
        let base = MomentumPair::new(u, u + separation).unwrap();
        let shifted = MomentumPair::new(u + shift, u + separation + shift).unwrap();
        let q0 = model::q_factor(&base, &params);
        let q1 = model::q_factor(&shifted, &params);
        prop_assert!((q1 - q0).abs() <= 1e-10 * q0.max(1e-300));

        let doubled = MomentumPair::new(u, u + 2.0 * separation).unwrap();
        prop_assert!(
            (model::q_factor(&doubled, &params) - 4.0 * q0).abs() <= 1e-12 * q0
        );
    }

    #[test]
    fn oracle_is_deterministic_across_calls(
        tau in 0.01..200.0f64,
        kind_pick in 0..3usize,
    ) {
        let kind = [
            KernelKind::OneMinusCosOverOmega,
            KernelKind::TMinusSinOverOmega,
            KernelKind::SinOverOmega,
        ][kind_pick];
        let kernel = SpectralKernel::new(kind, Cutoff::Step { omega_ir: 1.0 }, tau).unwrap();
        let a = oracle::integrate(&kernel, 1e-10).unwrap();
        let b = oracle::integrate(&kernel, 1e-10).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn evolved_states_are_physical(
        params in params_strategy(),
        center in -0.05..0.05f64,
        width in 1e-3..0.02f64,
        n in 2..9usize,
        tau in 0.0..100.0f64,
        regime_pick in 0..3usize,
    ) {
        let regime = [
            Regime::Uncorrelated,
            Regime::PartiallyCorrelated,
            Regime::FullyCorrelated,
        ][regime_pick];
        let packet = WavePacket::gaussian(center, width, n, 2.0).unwrap();
        let rho = density::evolve(&packet, &params, regime, tau).unwrap();
        prop_assert!(rho.hermiticity_error() <= 1e-12);
        prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        prop_assert!(rho.min_eigenvalue() >= -1e-10);
        prop_assert!(rho.purity() <= 1.0 + 1e-12);
        for i in 0..n {
            prop_assert_eq!(
                rho.entry(i, i),
                Complex64::new(packet.amplitudes()[i].norm_sqr(), 0.0)
            );
        }
    }

    #[test]
    fn explicit_packets_normalize_and_reject_disorder(
        raw in proptest::collection::vec((-0.1..0.1f64, -2.0..2.0f64, -2.0..2.0f64), 1..12)
    ) {
        let mut momenta: Vec<f64> = raw.iter().map(|(u, _, _)| *u).collect();
        momenta.sort_by(f64::total_cmp);
        momenta.dedup();
        let amplitudes: Vec<Complex64> = momenta
            .iter()
            .zip(raw.iter())
            .map(|(_, (_, re, im))| Complex64::new(*re, *im))
            .collect();
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        prop_assume!(norm > 1e-12);
        let packet = WavePacket::new(momenta, amplitudes).unwrap();
        let total: f64 = packet.amplitudes().iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn config_parser_never_panics(text in "\\PC*") {
        let _ = decohere::cli::ScenarioConfig::load(&text, &[]);
    }

    #[test]
    fn complex_literal_parser_never_panics(text in "\\PC*") {
        let _ = decohere::cli::config::parse_complex(&text);
    }

    #[test]
    fn float_format_round_trips(x in proptest::num::f64::NORMAL) {
        let rendered = decohere::cli::format_float(x);
        let parsed: f64 = rendered.parse().unwrap();
        // 17 significant digits round-trip any f64 exactly.
        prop_assert_eq!(parsed.to_bits(), x.to_bits());
    }
}
