//! Confidence intervals and goodness-of-fit helpers.

use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};

/// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let a = 0.5 * (1.0 - confidence);
    let (k, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0).map(|b| b.inverse_cdf(a)).unwrap_or(0.0)
    };
    let hi = if successes >= trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k).map(|b| b.inverse_cdf(1.0 - a)).unwrap_or(1.0)
    };
    (lo, hi)
}

/// Outcome of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of `observed` counts against bin probabilities.
/// Adjacent bins are pooled until each expected count is at least 5.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let mass: f64 = probs.iter().sum();
    let scale = total as f64 / mass;
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &p) in observed.iter().zip(probs) {
        o += ob as f64;
        e += p * scale;
        if e >= 5.0 {
            pooled.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => pooled.push((o, e)),
        }
    }
    let statistic: f64 = pooled.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = pooled.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map(|c| c.sf(statistic)).unwrap_or(f64::NAN)
    };
    ChiSquare { statistic, dof, p_value }
}

/// Bin probabilities of an unnormalised density on `[lo, hi]` split into
/// `bins` equal cells, by Simpson's rule on each cell.
pub fn bin_probabilities(density: impl Fn(f64) -> f64, lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let w = (hi - lo) / bins as f64;
    let sub = 64;
    let h = w / sub as f64;
    let mut p: Vec<f64> = (0..bins)
        .map(|b| {
            let a = lo + b as f64 * w;
            let mut s = density(a) + density(a + w);
            for i in 1..sub {
                s += density(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            (s * h / 3.0).max(0.0)
        })
        .collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    p
}

/// Largest gap between the empirical CDF of `samples` and `cdf`.
pub fn ks_distance(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clopper_pearson_values() {
        let cases = [
            (3, 100, 0.006229971538306395, 0.08517605297428002),
            (0, 50, 0.0, 0.07112173646419764),
            (50, 50, 0.9288782635358024, 1.0),
            (17, 1000, 0.009933512592716538, 0.027079496864851366),
        ];
        for (k, n, lo, hi) in cases {
            let (a, b) = clopper_pearson(k, n, 0.95);
            assert!((a - lo).abs() < 1e-9 && (b - hi).abs() < 1e-9, "{k}/{n}: {a} {b}");
        }
    }

    #[test]
    fn chi_square_tail() {
        let c = ChiSquared::new(7.0).unwrap();
        assert!((c.sf(12.3) - 0.0911148860003131).abs() < 1e-10);
        let c = ChiSquared::new(10.0).unwrap();
        assert!((c.sf(30.0) - 0.000856641210775301).abs() < 1e-10);
    }

    #[test]
    fn gof_pools_sparse_bins() {
        let r = chi_square_gof(&[50, 50, 1, 0], &[0.5, 0.49, 0.005, 0.005]);
        assert_eq!(r.dof, 1);
        let exact = chi_square_gof(&[25, 25, 25, 25], &[0.25; 4]);
        assert_eq!(exact.statistic, 0.0);
        assert_eq!(exact.p_value, 1.0);
    }

    #[test]
    fn bin_probabilities_of_linear_density() {
        let p = bin_probabilities(|x| x, 0.0, 1.0, 2);
        assert!((p[0] - 0.25).abs() < 1e-12 && (p[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn ks_of_exact_grid() {
        let mut s: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_distance(&mut s, |x| x) - 0.005).abs() < 1e-12);
    }
}
