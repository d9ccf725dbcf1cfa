//! Fixtures shared by the benchmarks.

use modlat_core::lattice::Lattice;
use modlat_core::simulator::{trial_rng, Decoder, Ensemble, SimConfig};
use modlat_core::{ChannelSpec, RateNats};

/// Query points spread over a few Voronoi cells of `lattice`.
pub fn cvp_queries(lattice: &Lattice, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = trial_rng(seed, 0);
    (0..count).map(|_| lattice.sample_voronoi(&mut rng).into_iter().map(|x| 3.0 * x).collect()).collect()
}

/// Rates spanning `(0, C)` excluding the endpoints.
pub fn rate_grid(spec: &ChannelSpec, points: usize) -> Vec<RateNats> {
    let c = spec.capacity_nats();
    (1..=points).map(|i| RateNats(c * i as f64 / (points + 1) as f64)).collect()
}

pub fn spherical_config(n: usize, trials: u64) -> SimConfig {
    SimConfig {
        n,
        spec: ChannelSpec::new(4.0).expect("positive snr"),
        rate: RateNats(0.3),
        ensemble: Ensemble::Spherical,
        alpha: None,
        decoder: Decoder::Ml,
        trials,
        seed: 1,
        fixed_codebook: false,
        noiseless: false,
    }
}
