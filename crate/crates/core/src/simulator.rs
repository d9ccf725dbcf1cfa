//! Monte Carlo transmission over the AWGN channel and the dithered
//! mod-lattice channel, plus empirical checks of the Gaussian tail bounds.
//!
//! Power is normalised to `P = 1`, so the noise has per-dimension variance
//! `1/snr`. Every trial draws its randomness from a ChaCha stream indexed by
//! the trial number, and error counts are summed, so results do not depend
//! on how rayon schedules the work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::awgn_exponents::{
    critical_rates, sphere_packing_exponent, tail_exponents, theta_of_rate, ChannelSpec, RateNats,
};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeSpec, MAX_DIMENSION};
use crate::modlambda::alpha_lambda;
use crate::regions_geometry::{alpha_star_sphere, joint_tail_exponent};
use crate::stats::clopper_pearson;

/// Largest codebook the simulator will build.
pub const MAX_CODEBOOK: u64 = 1 << 20;

/// Stream reserved for the shared codebook in fixed-codebook mode.
const CODEBOOK_STREAM: u64 = u64::MAX;

/// Seed offset for the independent inner-product decoder.
const INDEPENDENT_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Ensemble {
    /// Codewords uniform on the sphere of radius `sqrt(n)`.
    Spherical,
    /// As above, with every pair at normalised distance at least `d_min`.
    SphericalExpurgated { d_min: f64 },
    /// Codewords uniform over the Voronoi cell of the lattice, which is
    /// rescaled to unit second moment.
    LatticeCoset { lattice: LatticeSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decoder {
    Ml,
    EuclideanExtended,
    ClosestCoset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub spec: ChannelSpec,
    pub rate: RateNats,
    pub ensemble: Ensemble,
    /// Receiver scaling for the lattice scheme. Defaults to the
    /// exponent-optimal scaling for the rate.
    #[serde(default)]
    pub alpha: Option<f64>,
    pub decoder: Decoder,
    pub trials: u64,
    pub seed: u64,
    /// Reuse one codebook for every trial instead of drawing a fresh one.
    #[serde(default)]
    pub fixed_codebook: bool,
    /// Suppress the channel noise.
    #[serde(default)]
    pub noiseless: bool,
}

fn field<T>(name: &str, msg: impl Into<String>) -> Result<T> {
    Err(Error::Config { field: name.into(), msg: msg.into() })
}

impl SimConfig {
    /// `round(e^{nR})`.
    pub fn codebook_size(&self) -> Result<u64> {
        let m = (self.n as f64 * self.rate.value()).exp().round();
        if !(m < MAX_CODEBOOK as f64 + 0.5) {
            return Err(Error::Infeasible(format!("codebook size e^(nR) = {m:.3e} exceeds the cap {MAX_CODEBOOK}")));
        }
        Ok(m as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return field("n", "blocklength must be positive");
        }
        if !(self.spec.snr.is_finite() && self.spec.snr > 0.0) {
            return field("spec.snr", format!("must be positive and finite, got {}", self.spec.snr));
        }
        if !(self.rate.value().is_finite() && self.rate.value() >= 0.0) {
            return field("rate", "must be finite and non-negative");
        }
        if self.trials == 0 {
            return field("trials", "need at least one trial");
        }
        if self.codebook_size()? < 2 {
            return field("rate", "codebook size round(e^(nR)) must be at least 2");
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a <= 1.0) {
                return field("alpha", format!("must lie in (0, 1], got {a}"));
            }
        }
        match &self.ensemble {
            Ensemble::Spherical | Ensemble::SphericalExpurgated { .. } => {
                if self.decoder != Decoder::Ml {
                    return field("decoder", "spherical ensembles use the ml decoder");
                }
                if let Ensemble::SphericalExpurgated { d_min } = self.ensemble {
                    if !(0.0..=2.0).contains(&d_min) {
                        return field("ensemble.d_min", format!("must lie in [0, 2], got {d_min}"));
                    }
                }
            }
            Ensemble::LatticeCoset { lattice } => {
                if self.decoder == Decoder::Ml {
                    return field("decoder", "lattice-coset uses euclidean-extended or closest-coset");
                }
                if lattice.dimension != self.n || lattice.basis.len() != self.n {
                    return field("ensemble.lattice", format!("dimension {} does not match n = {}", lattice.dimension, self.n));
                }
                if self.n > MAX_DIMENSION {
                    return field("n", format!("exact search is limited to n <= {MAX_DIMENSION}"));
                }
                if !(lattice.second_moment > 0.0) {
                    return field("ensemble.lattice.second_moment", "must be positive");
                }
            }
        }
        Ok(())
    }

    fn noise_sd(&self) -> f64 {
        if self.noiseless {
            0.0
        } else {
            self.spec.snr.recip().sqrt()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub config: SimConfig,
    pub trials: u64,
    pub errors: u64,
    pub pe: f64,
    pub ci95: (f64, f64),
    /// `-ln(pe)/n`, absent when no errors were seen.
    pub empirical_exponent: Option<f64>,
}

impl SimResult {
    fn new(config: SimConfig, errors: u64) -> Self {
        let trials = config.trials;
        let pe = errors as f64 / trials as f64;
        let empirical_exponent = (errors > 0).then(|| -pe.ln() / config.n as f64);
        Self { ci95: clopper_pearson(errors, trials, 0.95), config, trials, errors, pe, empirical_exponent }
    }
}

/// RNG for one trial: the seed picks the key, the trial index the stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn count_trials<F>(trials: u64, seed: u64, f: F) -> Result<u64>
where
    F: Fn(&mut ChaCha8Rng) -> Result<bool> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| f(&mut trial_rng(seed, t)).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize, sd: f64) -> Vec<f64> {
    (0..n).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Uniform point on the sphere of the given radius.
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> Vec<f64> {
    loop {
        let g = gaussian(rng, n, 1.0);
        let norm = norm2(&g).sqrt();
        if norm > 0.0 {
            return g.into_iter().map(|v| v * radius / norm).collect();
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Codebook of `m` codewords stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub n: usize,
    pub words: Vec<f64>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.words.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &[f64] {
        &self.words[i * self.n..(i + 1) * self.n]
    }

    /// Smallest pairwise distance, normalised by `sqrt(n)`.
    pub fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            for j in 0..i {
                best = best.min(dist2(self.word(i), self.word(j)));
            }
        }
        (best / self.n as f64).sqrt()
    }
}

/// Spherical codebook, expurgated by sequential rejection when `d_min > 0`.
pub fn spherical_codebook<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, d_min: f64) -> Result<Codebook> {
    let radius = (n as f64).sqrt();
    let thresh = d_min * d_min * n as f64;
    let mut words = Vec::with_capacity(m * n);
    let budget = 10_000 + 1_000 * m as u64;
    let mut attempts = 0u64;
    while words.len() < m * n {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Infeasible(format!(
                "expurgation placed {} of {m} codewords with d_min = {d_min} in {budget} draws",
                words.len() / n
            )));
        }
        let cand = sphere_point(rng, n, radius);
        if d_min > 0.0 && words.chunks(n).any(|w| dist2(w, &cand) < thresh) {
            continue;
        }
        words.extend(cand);
    }
    Ok(Codebook { n, words })
}

/// Coset codebook: `m` points uniform over the Voronoi cell.
pub fn coset_codebook<R: Rng + ?Sized>(rng: &mut R, lattice: &Lattice, m: usize) -> Codebook {
    let n = lattice.dimension();
    Codebook { n, words: (0..m).flat_map(|_| lattice.sample_voronoi(rng)).collect() }
}

/// Lattice from a spec, rescaled to unit per-dimension second moment.
pub fn unit_power_lattice(spec: &LatticeSpec) -> Result<Lattice> {
    Lattice::new(spec.basis.clone())?.scaled(spec.second_moment.recip().sqrt())
}

/// Receiver scaling used by [`simulate`] for a lattice run.
pub fn effective_alpha(config: &SimConfig) -> Result<f64> {
    match config.alpha {
        Some(a) => Ok(a),
        None => alpha_lambda(config.rate, &config.spec),
    }
}

/// Whether the ML rule errs: some other codeword is at least as close.
fn spherical_ml_error(book: &Codebook, sent: usize, y: &[f64]) -> bool {
    let own = dist2(y, book.word(sent));
    (0..book.len()).any(|i| i != sent && dist2(y, book.word(i)) <= own)
}

/// Errors of the two coset decoders for one received point `v = c + z_eff`
/// (unreduced). Returns `(closest_coset, euclidean_extended)`.
fn coset_errors(lattice: &Lattice, book: &Codebook, sent: usize, v: &[f64]) -> (bool, bool) {
    let c = book.word(sent);
    let diff: Vec<f64> = v.iter().zip(c).map(|(a, b)| a - b).collect();
    let own_coords = lattice.closest_coords(&diff);
    let own_pt = lattice.point(&own_coords);
    let own = dist2(&diff, &own_pt);
    let cc = (0..book.len()).any(|i| {
        if i == sent {
            return false;
        }
        let d: Vec<f64> = v.iter().zip(book.word(i)).map(|(a, b)| a - b).collect();
        lattice.dist2(&d) <= own
    });
    // A nonzero nearest lattice point means another translate of the sent
    // coset is closer than the codeword itself.
    (cc, cc || own_coords.iter().any(|&u| u != 0))
}

pub fn simulate(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let m = config.codebook_size()? as usize;
    let n = config.n;
    let sd = config.noise_sd();
    let errors = match &config.ensemble {
        Ensemble::Spherical | Ensemble::SphericalExpurgated { .. } => {
            let d_min = match config.ensemble {
                Ensemble::SphericalExpurgated { d_min } => d_min,
                _ => 0.0,
            };
            let fixed = if config.fixed_codebook {
                Some(spherical_codebook(&mut trial_rng(config.seed, CODEBOOK_STREAM), n, m, d_min)?)
            } else {
                None
            };
            count_trials(config.trials, config.seed, |rng| {
                let fresh;
                let book = match &fixed {
                    Some(b) => b,
                    None => {
                        fresh = spherical_codebook(rng, n, m, d_min)?;
                        &fresh
                    }
                };
                let sent = rng.random_range(0..m);
                let z = gaussian(rng, n, sd);
                let y: Vec<f64> = book.word(sent).iter().zip(&z).map(|(c, e)| c + e).collect();
                Ok(spherical_ml_error(book, sent, &y))
            })?
        }
        Ensemble::LatticeCoset { lattice } => {
            let lat = unit_power_lattice(lattice)?;
            let alpha = effective_alpha(config)?;
            let extended = config.decoder == Decoder::EuclideanExtended;
            let fixed = config
                .fixed_codebook
                .then(|| coset_codebook(&mut trial_rng(config.seed, CODEBOOK_STREAM), &lat, m));
            count_trials(config.trials, config.seed, |rng| {
                let fresh;
                let book = match &fixed {
                    Some(b) => b,
                    None => {
                        fresh = coset_codebook(rng, &lat, m);
                        &fresh
                    }
                };
                let sent = rng.random_range(0..m);
                let u = lat.sample_voronoi(rng);
                let z = gaussian(rng, n, sd);
                let c = book.word(sent);
                // Transmit x = [c - u] mod L; receive [alpha y + u] mod L,
                // which equals c + z_eff modulo the lattice.
                let x = lat.reduce(&c.iter().zip(&u).map(|(a, b)| a - b).collect::<Vec<_>>());
                let v: Vec<f64> = (0..n).map(|i| c[i] + (alpha - 1.0) * x[i] + alpha * z[i]).collect();
                let (cc, ee) = coset_errors(&lat, book, sent, &v);
                Ok(if extended { ee } else { cc })
            })?
        }
    };
    Ok(SimResult::new(config.clone(), errors))
}

/// Both coset decoders on shared randomness: `(closest_coset, euclidean_extended)`
/// error counts.
pub fn simulate_coset_pair(config: &SimConfig) -> Result<(u64, u64)> {
    let mut cc = config.clone();
    cc.decoder = Decoder::ClosestCoset;
    let mut ee = config.clone();
    ee.decoder = Decoder::EuclideanExtended;
    Ok((simulate(&cc)?.errors, simulate(&ee)?.errors))
}

/// Independent spherical ML path: fresh randomness and decisions by largest
/// inner product, which is equivalent because all codewords share one norm.
pub fn simulate_inner_product(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let d_min = match config.ensemble {
        Ensemble::Spherical => 0.0,
        Ensemble::SphericalExpurgated { d_min } => d_min,
        Ensemble::LatticeCoset { .. } => {
            return field("ensemble", "the inner-product path covers spherical ensembles only");
        }
    };
    let m = config.codebook_size()? as usize;
    let (n, sd) = (config.n, config.noise_sd());
    let errors = count_trials(config.trials, config.seed ^ INDEPENDENT_SALT, |rng| {
        let book = spherical_codebook(rng, n, m, d_min)?;
        let sent = rng.random_range(0..m);
        let z = gaussian(rng, n, sd);
        let y: Vec<f64> = book.word(sent).iter().zip(&z).map(|(c, e)| c + e).collect();
        let own = dot(&y, book.word(sent));
        Ok((0..m).any(|i| i != sent && dot(&y, book.word(i)) >= own))
    })?;
    Ok(SimResult::new(config.clone(), errors))
}

/// One row of a tail-bound check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub label: String,
    pub hits: u64,
    pub p_hat: f64,
    pub bound: f64,
    /// `(ln p_hat - ln bound) / n`, absent without hits.
    pub log_ratio_per_n: Option<f64>,
    /// `p_hat <= bound + 3 sigma`, with `sigma` the binomial deviation at the bound.
    pub holds: bool,
    /// The bound is at least one, so the check is vacuous.
    pub trivial: bool,
}

impl TailRow {
    fn new(label: String, hits: u64, trials: u64, n: usize, bound: f64) -> Self {
        let p_hat = hits as f64 / trials as f64;
        let b = bound.min(1.0);
        let slack = 3.0 * (b * (1.0 - b) / trials as f64).sqrt();
        Self {
            label,
            hits,
            p_hat,
            bound,
            log_ratio_per_n: (hits > 0).then(|| (p_hat.ln() - bound.ln()) / n as f64),
            holds: p_hat <= b + slack,
            trivial: bound >= 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub n: usize,
    pub trials: u64,
    pub rows: Vec<TailRow>,
}

/// Empirical `P(||z|| >= r sqrt(n))` against `exp(-n E_h(r^2 snr))` for each `r`.
pub fn tail_check_norm(n: usize, spec: &ChannelSpec, r_list: &[f64], trials: u64, seed: u64) -> Result<TailReport> {
    if n == 0 || trials == 0 {
        return field("n", "need n >= 1 and trials >= 1");
    }
    let sd = spec.snr.recip().sqrt();
    let thresholds: Vec<f64> = r_list.iter().map(|r| r * r * n as f64).collect();
    let hits: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let z2 = norm2(&gaussian(&mut trial_rng(seed, t), n, sd));
            thresholds.iter().map(|&th| u64::from(z2 >= th)).collect::<Vec<_>>()
        })
        .reduce(|| vec![0; thresholds.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    let rows = r_list
        .iter()
        .zip(&hits)
        .map(|(&r, &h)| {
            let mu = r * r * spec.snr;
            let bound = (-(n as f64) * tail_exponents(mu).0).exp();
            TailRow::new(format!("r={r}"), h, trials, n, bound)
        })
        .collect();
    Ok(TailReport { n, trials, rows })
}

/// Empirical `P(|z_1| >= x sqrt(n), ||z|| <= y sqrt(n))` against
/// `exp(-n E~_bd(x, y; snr))`.
pub fn tail_check_joint(n: usize, spec: &ChannelSpec, x: f64, y: f64, trials: u64, seed: u64) -> Result<TailReport> {
    if n < 2 || trials == 0 {
        return field("n", "need n >= 2 and trials >= 1");
    }
    let e = joint_tail_exponent(x, y, spec.snr)?;
    let sd = spec.snr.recip().sqrt();
    let (ax, ay) = (x * (n as f64).sqrt(), y * y * n as f64);
    let hits = count_trials(trials, seed, |rng| {
        let z = gaussian(rng, n, sd);
        Ok(z[0].abs() >= ax && norm2(&z) <= ay)
    })?;
    let row = TailRow::new(format!("x={x},y={y}"), hits, trials, n, (-(n as f64) * e).exp());
    Ok(TailReport { n, trials, rows: vec![row] })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Dither {
    /// Uniform on the sphere of radius `sqrt(n)`.
    Spherical,
    /// Product of Voronoi cells of a lattice whose dimension divides `n`,
    /// rescaled to unit second moment.
    Voronoi { lattice: LatticeSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallReport {
    pub n: usize,
    pub rate: f64,
    pub alpha: f64,
    pub radius: f64,
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub ci95: (f64, f64),
    pub empirical_exponent: Option<f64>,
    pub e_sp: f64,
}

/// Exit probability of `K b + z` from the ball of radius `radius * sqrt(n)`.
/// The noise is drawn before the dither, so `k = 0` reproduces
/// [`tail_check_norm`] draw for draw.
pub fn ball_exit_count(n: usize, spec: &ChannelSpec, k: f64, radius: f64, dither: &Dither, trials: u64, seed: u64) -> Result<u64> {
    let sd = spec.snr.recip().sqrt();
    let block = match dither {
        Dither::Spherical => None,
        Dither::Voronoi { lattice } => {
            if lattice.dimension == 0 || !n.is_multiple_of(lattice.dimension) {
                return field("dither.lattice", format!("dimension {} does not divide n = {n}", lattice.dimension));
            }
            Some(unit_power_lattice(lattice)?)
        }
    };
    let th = radius * radius * n as f64;
    count_trials(trials, seed, |rng| {
        let z = gaussian(rng, n, sd);
        let b = match &block {
            None => sphere_point(rng, n, (n as f64).sqrt()),
            Some(lat) => (0..n / lat.dimension()).flat_map(|_| lat.sample_voronoi(rng)).collect(),
        };
        Ok(z.iter().zip(&b).map(|(zi, bi)| (zi + k * bi).powi(2)).sum::<f64>() >= th)
    })
}

/// Probability that the effective noise `((1-a)/a) b + z` leaves the ball of
/// radius `sqrt(n) sin(theta(R)) / a`, with `a` the tangent-sphere scaling.
pub fn effective_noise_ball(n: usize, spec: &ChannelSpec, rate: RateNats, dither: &Dither, trials: u64, seed: u64) -> Result<BallReport> {
    let cr = critical_rates(spec);
    let r = rate.value();
    if !(r > cr.r_crit.value() && r < cr.c.value()) {
        return field("rate", format!("need R_crit < R < C, got {r}"));
    }
    if trials == 0 || n == 0 {
        return field("trials", "need n >= 1 and trials >= 1");
    }
    let th = theta_of_rate(r);
    let alpha = alpha_star_sphere(th, spec);
    let radius = th.sin() / alpha;
    let hits = ball_exit_count(n, spec, (1.0 - alpha) / alpha, radius, dither, trials, seed)?;
    let p_hat = hits as f64 / trials as f64;
    Ok(BallReport {
        n,
        rate: r,
        alpha,
        radius,
        trials,
        hits,
        p_hat,
        ci95: clopper_pearson(hits, trials, 0.95),
        empirical_exponent: (hits > 0).then(|| -p_hat.ln() / n as f64),
        e_sp: sphere_packing_exponent(rate, spec)?.value,
    })
}

/// Histogram over `[lo, hi)` with equal-width bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Self { lo, hi, counts: vec![0; bins.max(1)] }
    }

    pub fn add(&mut self, x: f64) {
        let bins = self.counts.len();
        let i = ((x - self.lo) / (self.hi - self.lo) * bins as f64).floor();
        if i >= 0.0 && i < bins as f64 {
            self.counts[i as usize] += 1;
        }
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn mode(&self) -> f64 {
        let i = (0..self.counts.len()).max_by_key(|&i| self.counts[i]).unwrap_or(0);
        self.center(i)
    }
}

/// Joint histogram of normalised distance and angle to the dither.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointHistogram {
    pub d_max: f64,
    /// `counts[i][j]`: distance bin `i`, angle bin `j` over `[0, pi]`.
    pub counts: Vec<Vec<u64>>,
}

impl JointHistogram {
    pub fn angle_marginal(&self) -> Vec<u64> {
        let bins = self.counts.first().map_or(0, Vec::len);
        (0..bins).map(|j| self.counts.iter().map(|row| row[j]).sum()).collect()
    }

    pub fn distance_marginal(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }
}

/// `(d sqrt(1 - d^2/4))^(n-1)`, the large-n shape of the spherical spectrum.
pub fn spectrum_density_asymptotic(n: usize, d: f64) -> f64 {
    (d * (1.0 - 0.25 * d * d).max(0.0).sqrt()).powi(n as i32 - 1)
}

/// Exact density of the normalised distance between two independent uniform
/// points on the sphere in `R^n`, up to normalisation:
/// `d^(n-2) (1 - d^2/4)^((n-3)/2)`.
pub fn spectrum_density_exact(n: usize, d: f64) -> f64 {
    let q = (1.0 - 0.25 * d * d).max(0.0);
    d.powi(n as i32 - 2) * q.powf((n as f64 - 3.0) / 2.0)
}

/// CDFs at `n = 2`: `(asymptotic, exact)`.
pub fn spectrum_cdf_n2(d: f64) -> (f64, f64) {
    let q = (1.0 - 0.25 * d * d).clamp(0.0, 1.0);
    (1.0 - q.powf(1.5), 2.0 / std::f64::consts::PI * (0.5 * d).clamp(0.0, 1.0).asin())
}

/// Normalised distances between `pairs` independent pairs of uniform points
/// on the sphere in `R^n`.
pub fn spherical_distances(n: usize, pairs: u64, seed: u64) -> Vec<f64> {
    (0..pairs)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let a = sphere_point(&mut rng, n, 1.0);
            let b = sphere_point(&mut rng, n, 1.0);
            dist2(&a, &b).sqrt()
        })
        .collect()
}

pub fn spherical_spectrum(n: usize, bins: usize, pairs: u64, seed: u64) -> Histogram {
    let mut h = Histogram::new(0.0, 2.0, bins);
    spherical_distances(n, pairs, seed).into_iter().for_each(|d| h.add(d));
    h
}

/// Spectrum of the extended coset codebook seen from the sent codeword:
/// every `c' + lambda` other than the codeword itself within normalised
/// distance `d_max`, binned by distance and by the angle its offset makes
/// with the dither.
pub fn coset_spectrum(lattice: &LatticeSpec, rate: RateNats, d_bins: usize, angle_bins: usize, d_max: f64, trials: u64, seed: u64) -> Result<JointHistogram> {
    let lat = unit_power_lattice(lattice)?;
    let n = lat.dimension();
    let m = (n as f64 * rate.value()).exp().round().max(1.0);
    if m > MAX_CODEBOOK as f64 {
        return Err(Error::Infeasible(format!("codebook size {m:.3e} exceeds the cap")));
    }
    let m = m as usize;
    let rad = d_max * (n as f64).sqrt();
    let (db, ab) = (d_bins.max(1), angle_bins.max(1));
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let book = coset_codebook(&mut rng, &lat, m);
            let u = lat.sample_voronoi(&mut rng);
            let un = norm2(&u).sqrt();
            let c = book.word(0);
            let mut local = vec![vec![0u64; ab]; db];
            for i in 0..m {
                let off: Vec<f64> = book.word(i).iter().zip(c).map(|(a, b)| a - b).collect();
                let centre: Vec<f64> = off.iter().map(|v| -v).collect();
                for coords in lat.points_within(&centre, rad) {
                    if i == 0 && coords.iter().all(|&k| k == 0) {
                        continue;
                    }
                    let p = lat.point(&coords);
                    let e: Vec<f64> = off.iter().zip(&p).map(|(a, b)| a + b).collect();
                    let en = norm2(&e).sqrt();
                    let d = en / (n as f64).sqrt();
                    let cos = (dot(&u, &e) / (un * en)).clamp(-1.0, 1.0);
                    let di = ((d / d_max) * db as f64).floor() as usize;
                    let ai = ((cos.acos() / std::f64::consts::PI) * ab as f64).floor() as usize;
                    if di < db {
                        local[di][ai.min(ab - 1)] += 1;
                    }
                }
            }
            local
        })
        .reduce(
            || vec![vec![0u64; ab]; db],
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.into_iter().zip(y).map(|(p, q)| p + q).collect()).collect(),
        );
    Ok(JointHistogram { d_max, counts })
}
