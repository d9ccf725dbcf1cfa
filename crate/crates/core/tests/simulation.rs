use modlat_core::lattice::{lattice_figures_with, FigureOptions, Lattice};
use modlat_core::simulator::{
    effective_noise_ball, simulate, simulate_coset_pair, spherical_codebook, trial_rng, Decoder, Dither, Ensemble,
    SimConfig, SimResult,
};
use modlat_core::{ChannelSpec, Error, RateNats};

fn base() -> SimConfig {
    SimConfig {
        n: 8,
        spec: ChannelSpec::new(4.0).unwrap(),
        rate: RateNats(0.3),
        ensemble: Ensemble::Spherical,
        alpha: None,
        decoder: Decoder::Ml,
        trials: 5_000,
        seed: 17,
        fixed_codebook: false,
        noiseless: false,
    }
}

fn e8() -> modlat_core::LatticeSpec {
    lattice_figures_with(&Lattice::builtin("e8").unwrap(), FigureOptions { samples: 50_000, probes: 4, seed: 2 }).unwrap()
}

#[test]
fn config_and_result_round_trip_through_json() {
    let mut cfg = base();
    cfg.ensemble = Ensemble::LatticeCoset { lattice: e8() };
    cfg.decoder = Decoder::ClosestCoset;
    cfg.trials = 200;
    let text = serde_json::to_string(&cfg).unwrap();
    assert!(text.contains("\"kind\":\"lattice-coset\"") && text.contains("\"closest-coset\""));
    let back: SimConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cfg);
    let res = simulate(&cfg).unwrap();
    let again: SimResult = serde_json::from_str(&serde_json::to_string(&res).unwrap()).unwrap();
    assert_eq!(again, res);
}

#[test]
fn optional_fields_default() {
    let text = r#"{"n":8,"spec":{"snr":4.0},"rate":0.3,"ensemble":{"kind":"spherical"},"decoder":"ml","trials":10,"seed":1}"#;
    let cfg: SimConfig = serde_json::from_str(text).unwrap();
    assert_eq!(cfg.alpha, None);
    assert!(!cfg.fixed_codebook && !cfg.noiseless);
}

#[test]
fn same_seed_same_result() {
    let a = simulate(&base()).unwrap();
    let b = simulate(&base()).unwrap();
    assert_eq!(a, b);
    let mut other = base();
    other.seed = 18;
    assert_ne!(simulate(&other).unwrap().errors, a.errors);
}

#[test]
fn expurgation_raises_reliability() {
    let mut exp = base();
    exp.ensemble = Ensemble::SphericalExpurgated { d_min: 0.7 };
    exp.trials = 20_000;
    let mut plain = base();
    plain.trials = 20_000;
    let (a, b) = (simulate(&plain).unwrap(), simulate(&exp).unwrap());
    assert!(b.ci95.1 < a.ci95.0, "{} vs {}", a.pe, b.pe);
}

#[test]
fn expurgated_codebooks_keep_their_distance() {
    for t in 0..50 {
        let book = spherical_codebook(&mut trial_rng(3, t), 8, 11, 0.7).unwrap();
        assert!(book.min_distance() >= 0.7);
    }
}

#[test]
fn coset_decoders_ordered_on_e8() {
    let mut cfg = base();
    cfg.ensemble = Ensemble::LatticeCoset { lattice: e8() };
    cfg.decoder = Decoder::ClosestCoset;
    cfg.trials = 3_000;
    let (cc, ee) = simulate_coset_pair(&cfg).unwrap();
    assert!(cc <= ee, "{cc} > {ee}");
}

#[test]
fn mismatched_lattice_is_rejected() {
    let mut cfg = base();
    cfg.n = 4;
    cfg.rate = RateNats(0.6);
    cfg.ensemble = Ensemble::LatticeCoset { lattice: e8() };
    cfg.decoder = Decoder::EuclideanExtended;
    match simulate(&cfg) {
        Err(Error::Config { field, .. }) => assert_eq!(field, "ensemble.lattice"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn ball_exit_rejects_rates_outside_the_identity_regime() {
    let s = ChannelSpec::new(10.0).unwrap();
    assert!(effective_noise_ball(16, &s, RateNats(0.5), &Dither::Spherical, 10, 1).is_err());
    let rep = effective_noise_ball(16, &s, RateNats(1.0), &Dither::Spherical, 2_000, 1).unwrap();
    assert!(rep.alpha < 1.0 && rep.ci95.0 <= rep.p_hat && rep.p_hat <= rep.ci95.1);
}
