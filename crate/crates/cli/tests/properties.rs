//! Property tests of the output and config plumbing.

use proptest::prelude::*;
use toda_birkhoff_cli::config::ExperimentConfig;
use toda_birkhoff_cli::data::packet_datum;
use toda_birkhoff_cli::output::Series;

proptest! {
    #[test]
    fn csv_roundtrip_is_bit_exact(rows in prop::collection::vec((any::<f64>(), 0usize..1000, any::<f64>()), 0..50)) {
        let rows: Vec<_> = rows.into_iter().filter(|(t, _, v)| t.is_finite() && v.is_finite()).collect();
        let mut s = Series::new("p");
        for (t, k, v) in &rows {
            s.push(*t, *k, *v);
        }
        let (hash, back) = Series::from_csv("p", &s.to_csv("h")).unwrap();
        prop_assert_eq!(hash, "h");
        for (a, b) in back.rows.iter().zip(&s.rows) {
            prop_assert_eq!(a.t.to_bits(), b.t.to_bits());
            prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
            prop_assert_eq!(a.k, b.k);
        }
        prop_assert_eq!(back.rows.len(), s.rows.len());
    }

    #[test]
    fn config_survives_its_canonical_form(seed in any::<u64>(), r in 1e-3f64..2.0, n in 2usize..512) {
        let cfg = ExperimentConfig { seed, amplitude: r, n, ..ExperimentConfig::default() };
        let back = ExperimentConfig::from_json(&cfg.canonical_json()).unwrap();
        prop_assert_eq!(back.hash(), cfg.hash());
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn packet_excites_only_the_lowest_modes(n in 4usize..64, r in 0.01f64..1.0, sigma in 0.0f64..2.0, phase in -3.2f64..3.2) {
        let state = packet_datum(n, r, sigma, phase).unwrap();
        let e = toda_birkhoff::fourier::specific_energies(&state).unwrap();
        let target = r * r * (-2.0 * sigma).exp() / (n as f64).powi(4);
        prop_assert!((e[0] - target).abs() <= 1e-10 * target);
        prop_assert!((e[n - 2] - target).abs() <= 1e-10 * target);
        prop_assert!(e[1..n - 2].iter().all(|&x| x <= 1e-12 * target));
        prop_assert!(state.q().iter().all(|&q| q == 0.0));
    }
}
