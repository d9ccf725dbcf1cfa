//! Small fixed lattices: parsing, exact closest-point search, uniform
//! Voronoi sampling and Monte Carlo figures of merit.
//!
//! Basis files are plain text: the dimension `n`, then `n*n` whitespace
//! separated reals in row-major order. Rows generate the lattice.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted for exact closest-point search.
pub const MAX_DIMENSION: usize = 16;

const BUILTIN_Z8: &str = include_str!("../data/z8.txt");
const BUILTIN_D4: &str = include_str!("../data/d4.txt");
const BUILTIN_E8: &str = include_str!("../data/e8.txt");

/// A full-rank lattice with the QR factorisation used by the closest-point
/// search.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    n: usize,
    /// Rows generate the lattice.
    basis: Vec<Vec<f64>>,
    /// Orthonormal factor, stored by columns: `q[j]` is column `j`.
    q: Vec<Vec<f64>>,
    /// Upper-triangular factor of the column generator matrix.
    r: Vec<Vec<f64>>,
}

impl Lattice {
    pub fn new(basis: Vec<Vec<f64>>) -> Result<Self> {
        let n = basis.len();
        if n == 0 || basis.iter().any(|row| row.len() != n) {
            return Err(Error::Lattice("basis must be a non-empty square matrix".into()));
        }
        if n > MAX_DIMENSION {
            return Err(Error::Lattice(format!("dimension {n} exceeds the exact-search limit {MAX_DIMENSION}")));
        }
        if basis.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Lattice("basis has non-finite entries".into()));
        }
        // Modified Gram-Schmidt on the basis vectors (columns of the generator).
        let mut q: Vec<Vec<f64>> = basis.clone();
        let mut r = vec![vec![0.0; n]; n];
        let scale = basis.iter().flatten().fold(0f64, |m, v| m.max(v.abs()));
        for j in 0..n {
            for i in 0..j {
                let dot: f64 = (0..n).map(|t| q[i][t] * q[j][t]).sum();
                r[i][j] = dot;
                let qi = q[i].clone();
                for (v, u) in q[j].iter_mut().zip(&qi) {
                    *v -= dot * u;
                }
            }
            let norm = q[j].iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 1e-12 * scale.max(1e-300)) {
                return Err(Error::Lattice("singular basis".into()));
            }
            r[j][j] = norm;
            for v in &mut q[j] {
                *v /= norm;
            }
        }
        Ok(Self { n, basis, q, r })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut it = text.split_whitespace();
        let n: usize = it
            .next()
            .ok_or_else(|| Error::Lattice("empty basis file".into()))?
            .parse()
            .map_err(|e| Error::Lattice(format!("bad dimension: {e}")))?;
        let vals: Vec<f64> = it
            .map(|t| t.parse::<f64>().map_err(|e| Error::Lattice(format!("bad entry `{t}`: {e}"))))
            .collect::<Result<_>>()?;
        if vals.len() != n * n {
            return Err(Error::Lattice(format!("expected {} entries, found {}", n * n, vals.len())));
        }
        Self::new(vals.chunks(n).map(|c| c.to_vec()).collect())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let p = path.as_ref();
        let text = std::fs::read_to_string(p).map_err(|e| Error::Lattice(format!("{}: {e}", p.display())))?;
        Self::parse(&text)
    }

    /// Built-in lattices by name: `z<n>` (`n <= 16`), `d4`, `e8`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "d4" => Self::parse(BUILTIN_D4),
            "e8" => Self::parse(BUILTIN_E8),
            "z8" => Self::parse(BUILTIN_Z8),
            other => match other.strip_prefix('z').and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if (1..=MAX_DIMENSION).contains(&k) => Self::integer(k),
                _ => Err(Error::Lattice(format!("unknown built-in lattice `{name}`"))),
            },
        }
    }

    /// A built-in name or a basis file path.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        Self::builtin(name_or_path).or_else(|_| Self::load(name_or_path))
    }

    pub fn integer(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect())
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn volume(&self) -> f64 {
        self.r.iter().enumerate().map(|(i, row)| row[i]).product()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.basis.iter().map(|row| row.iter().map(|v| v * c).collect()).collect())
    }

    /// Lattice point with integer coordinates `u`.
    pub fn point(&self, u: &[i64]) -> Vec<f64> {
        let mut p = vec![0.0; self.n];
        for (ui, row) in u.iter().zip(&self.basis) {
            for (pt, b) in p.iter_mut().zip(row) {
                *pt += *ui as f64 * b;
            }
        }
        p
    }

    /// Exact closest lattice point by Schnorr-Euchner sphere enumeration,
    /// started from the Babai point so the search radius always contains a
    /// candidate. Returns integer coordinates.
    pub fn closest_coords(&self, y: &[f64]) -> Vec<i64> {
        let n = self.n;
        let yt: Vec<f64> = (0..n).map(|j| (0..n).map(|t| self.q[j][t] * y[t]).sum()).collect();
        let mut u = vec![0i64; n];
        // Babai nearest plane.
        for k in (0..n).rev() {
            let s: f64 = ((k + 1)..n).map(|j| self.r[k][j] * u[j] as f64).sum();
            u[k] = ((yt[k] - s) / self.r[k][k]).round() as i64;
        }
        let mut best = u.clone();
        let mut best_d = self.tri_dist2(&yt, &u) * (1.0 + 1e-12) + 1e-300;
        let mut cur = vec![0i64; n];
        self.search(n - 1, 0.0, &yt, &mut cur, &mut best, &mut best_d);
        best
    }

    fn tri_dist2(&self, yt: &[f64], u: &[i64]) -> f64 {
        (0..self.n)
            .map(|k| {
                let s: f64 = (k..self.n).map(|j| self.r[k][j] * u[j] as f64).sum();
                (yt[k] - s).powi(2)
            })
            .sum()
    }

    fn search(&self, k: usize, partial: f64, yt: &[f64], cur: &mut [i64], best: &mut Vec<i64>, best_d: &mut f64) {
        let s: f64 = ((k + 1)..self.n).map(|j| self.r[k][j] * cur[j] as f64).sum();
        let rkk = self.r[k][k];
        let c = (yt[k] - s) / rkk;
        let mut x = c.round();
        let mut dx = if c >= x { 1.0 } else { -1.0 };
        loop {
            let d = partial + (rkk * (x - c)).powi(2);
            if d >= *best_d {
                break;
            }
            cur[k] = x as i64;
            if k == 0 {
                *best_d = d;
                best.copy_from_slice(cur);
            } else {
                self.search(k - 1, d, yt, cur, best, best_d);
            }
            // Zig-zag around the centre so |x - c| is non-decreasing.
            x += dx;
            dx = -dx - dx.signum();
        }
    }

    /// Integer coordinates of every lattice point within `radius` of `y`
    /// (Fincke-Pohst enumeration).
    pub fn points_within(&self, y: &[f64], radius: f64) -> Vec<Vec<i64>> {
        let n = self.n;
        let yt: Vec<f64> = (0..n).map(|j| (0..n).map(|t| self.q[j][t] * y[t]).sum()).collect();
        let mut out = Vec::new();
        let mut cur = vec![0i64; n];
        self.enumerate(n - 1, 0.0, radius * radius, &yt, &mut cur, &mut out);
        out
    }

    fn enumerate(&self, k: usize, partial: f64, r2: f64, yt: &[f64], cur: &mut [i64], out: &mut Vec<Vec<i64>>) {
        let s: f64 = ((k + 1)..self.n).map(|j| self.r[k][j] * cur[j] as f64).sum();
        let rkk = self.r[k][k];
        let c = (yt[k] - s) / rkk;
        let half = ((r2 - partial).max(0.0)).sqrt() / rkk;
        for x in (c - half).ceil() as i64..=(c + half).floor() as i64 {
            let d = partial + (rkk * (x as f64 - c)).powi(2);
            if d > r2 {
                continue;
            }
            cur[k] = x;
            if k == 0 {
                out.push(cur.to_vec());
            } else {
                self.enumerate(k - 1, d, r2, yt, cur, out);
            }
        }
    }

    pub fn closest_point(&self, y: &[f64]) -> Vec<f64> {
        self.point(&self.closest_coords(y))
    }

    /// `y mod Lambda`: the representative of `y` in the Voronoi cell of 0.
    pub fn reduce(&self, y: &[f64]) -> Vec<f64> {
        let p = self.closest_point(y);
        y.iter().zip(&p).map(|(a, b)| a - b).collect()
    }

    /// Squared distance from `y` to the lattice.
    pub fn dist2(&self, y: &[f64]) -> f64 {
        self.reduce(y).iter().map(|v| v * v).sum()
    }

    /// Uniform sample from the Voronoi cell: a uniform point of the fundamental
    /// parallelepiped reduced modulo the lattice.
    pub fn sample_voronoi<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for row in &self.basis {
            let t: f64 = rng.random();
            for (xi, b) in x.iter_mut().zip(row) {
                *xi += t * b;
            }
        }
        self.reduce(&x)
    }

    /// Upper bound on the covering radius: half the norm of the Gram-Schmidt
    /// diagonal.
    pub fn covering_radius_upper(&self) -> f64 {
        0.5 * (0..self.n).map(|k| self.r[k][k].powi(2)).sum::<f64>().sqrt()
    }
}

/// Figures of merit of a concrete lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub dimension: usize,
    pub basis: Vec<Vec<f64>>,
    pub volume: f64,
    /// Per-dimension second moment of the Voronoi cell.
    pub second_moment: f64,
    pub second_moment_stderr: f64,
    /// Normalised second moment `sigma^2 / V^(2/n)`.
    pub nsm: f64,
    pub nsm_stderr: f64,
    /// Radius of the ball with the cell's volume.
    pub r_eff: f64,
    /// Largest distance to the lattice found by deep-hole probing. This is an
    /// estimate of the covering radius from below.
    pub r_cov: f64,
    /// Gram-Schmidt upper bound on the covering radius.
    pub r_cov_upper: f64,
}

/// Sampling effort for [`lattice_figures_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub samples: usize,
    pub probes: usize,
    pub seed: u64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self { samples: 200_000, probes: 64, seed: 0x1a77 }
    }
}

/// Volume of the unit ball in `n` dimensions.
pub fn unit_ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    (h * std::f64::consts::PI.ln() - statrs::function::gamma::ln_gamma(h + 1.0)).exp()
}

pub fn lattice_figures(basis: Vec<Vec<f64>>) -> Result<LatticeSpec> {
    lattice_figures_with(&Lattice::new(basis)?, FigureOptions::default())
}

pub fn lattice_figures_with(lat: &Lattice, opts: FigureOptions) -> Result<LatticeSpec> {
    let n = lat.dimension();
    let nf = n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples = opts.samples.max(2);
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let e = lat.sample_voronoi(&mut rng).iter().map(|v| v * v).sum::<f64>() / nf;
        sum += e;
        sum2 += e * e;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum2 / m - mean * mean).max(0.0) * m / (m - 1.0);
    let stderr = (var / m).sqrt();
    let volume = lat.volume();
    let v2n = volume.powf(2.0 / nf);
    let r_eff = (volume / unit_ball_volume(n)).powf(1.0 / nf);
    let upper = lat.covering_radius_upper();
    let r_cov = deep_hole_search(lat, opts.probes, &mut rng).min(upper).max(0.0);
    Ok(LatticeSpec {
        dimension: n,
        basis: lat.basis().to_vec(),
        volume,
        second_moment: mean,
        second_moment_stderr: stderr,
        nsm: mean / v2n,
        nsm_stderr: stderr / v2n,
        r_eff,
        r_cov,
        r_cov_upper: upper,
    })
}

/// Random probes followed by hill climbing on the distance to the lattice.
fn deep_hole_search<R: Rng>(lat: &Lattice, probes: usize, rng: &mut R) -> f64 {
    let n = lat.dimension();
    let step0 = 0.25 * lat.volume().powf(1.0 / n as f64);
    let mut best = 0f64;
    for _ in 0..probes.max(1) {
        let mut x = lat.sample_voronoi(rng);
        let mut fx = lat.dist2(&x);
        let mut step = step0;
        while step > 1e-9 * step0 {
            let mut improved = false;
            for _ in 0..4 * n {
                let dir: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                let cand: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d / norm).collect();
                let fc = lat.dist2(&cand);
                if fc > fx {
                    x = cand;
                    fx = fc;
                    improved = true;
                    break;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(fx.sqrt());
    }
    best
}
