//! Exponents of the dithered mod-lattice channel.
//!
//! The closed forms here describe the ideal limit of lattices that are good
//! for covering and quantization; they never consume a concrete
//! [`LatticeSpec`](crate::lattice::LatticeSpec). Fixed small lattices only
//! enter through the simulator. Distances are normalised by `sqrt(nP)`.
//!
//! The lattice offset `beta` is measured towards the receiver scaling point,
//! i.e. with the opposite sign to the AWGN cone offset.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::awgn_exponents::{critical_rates, theta_of_rate, ChannelSpec, ExponentValue, ExponentRegime, RateNats};
use crate::error::{domain, Error, Result};
use crate::numerics::{bisect_expanding, golden_min, GOLDEN_TOL, ROOT_TOL};
use crate::regions_geometry::{alpha_star_sphere, ebd, f_bnd, k_zeta, theta_zeta, D_EPS};

pub use crate::lattice::{lattice_figures, LatticeSpec};

/// Receiver scaling `alpha` and `K_alpha = (1 - alpha)/alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpec {
    pub alpha: f64,
    pub k_alpha: f64,
}

impl ScalingSpec {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return domain(format!("scaling alpha = {alpha} outside (0, 1]"));
        }
        Ok(Self { alpha, k_alpha: 1.0 / alpha - 1.0 })
    }

    pub fn from_k(k_alpha: f64) -> Result<Self> {
        if !(k_alpha >= 0.0 && k_alpha.is_finite()) {
            return domain(format!("K_alpha = {k_alpha} must be finite and non-negative"));
        }
        Ok(Self { alpha: 1.0 / (1.0 + k_alpha), k_alpha })
    }
}

/// Geometry of a dominating error event in the lattice picture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeTypicalEvent {
    pub d: f64,
    pub l: f64,
    pub beta_lambda: f64,
    /// Angle with `cos(theta_p) = d / (2l)`.
    pub theta_p: f64,
}

impl LatticeTypicalEvent {
    pub fn new(d: f64, l: f64, beta_lambda: f64) -> Result<Self> {
        if !(d >= 0.0 && d <= 2.0 * l) {
            return domain(format!("need 0 <= d <= 2l, got d={d}, l={l}"));
        }
        Ok(Self { d, l, beta_lambda, theta_p: (0.5 * d / l).acos() })
    }
}

/// Branch of the lattice radial offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeRegime {
    /// The half-space constraint is slack; `beta` solves the key equation.
    AboveThreshold,
    /// The half-space constraint binds.
    BelowThreshold,
}

/// Which constraint fixes the maximising `(l, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaximizerRegime {
    /// Above threshold and the distance floor is slack: `l = l°*`, `d = sqrt(2) r`.
    Unconstrained,
    /// Below threshold with the distance floor slack.
    Critical,
    /// The distance floor binds: `d = d_min (1 + K_alpha)`.
    Expurgated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeMaximizers {
    pub l_star: f64,
    pub d_star: f64,
    pub regime: MaximizerRegime,
}

/// Which branch of `K_alpha*` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KAlphaBranch {
    AboveCritical,
    CriticalDistance,
    MinimumDistance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KAlphaStar {
    pub scaling: ScalingSpec,
    pub branch: KAlphaBranch,
}

/// Full mod-lattice characterisation at one rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModLambdaExponent {
    pub exponent: ExponentValue,
    pub alpha: f64,
    pub theta: f64,
    pub d_typ_ii: f64,
    pub r_alpha: f64,
}

pub fn mmse_alpha(spec: &ChannelSpec) -> ScalingSpec {
    let alpha = spec.snr / (1.0 + spec.snr);
    ScalingSpec { alpha, k_alpha: 1.0 / spec.snr }
}

/// `(x_lambda, y_lambda)`; `None` when the slice misses the region.
pub fn lattice_cross_section(beta_l: f64, l: f64, d: f64, r: f64, scaling: &ScalingSpec) -> Option<(f64, f64)> {
    let h = beta_l + scaling.k_alpha;
    let y2 = r * r - h * h;
    if !(y2 >= 0.0) || !(l > h) || !(d > 0.0 && 2.0 * l > d) {
        return None;
    }
    Some(((l - h) / (4.0 * l * l / (d * d) - 1.0).sqrt(), y2.sqrt()))
}

/// `E_bnd^lambda(r, K, l, d, beta, R)`; `+inf` outside the feasible set.
pub fn union_bound_exponent_lattice(r: f64, k_alpha: f64, l: f64, d: f64, beta: f64, rate: RateNats, spec: &ChannelSpec) -> f64 {
    if !(d > D_EPS && d < 2.0 * l * (1.0 - D_EPS)) {
        return f64::INFINITY;
    }
    let scaling = ScalingSpec { alpha: 1.0 / (1.0 + k_alpha), k_alpha };
    let Some((x, y)) = lattice_cross_section(beta, l, d, r, &scaling) else {
        return f64::INFINITY;
    };
    let q = d * d / (4.0 * l * l);
    let Ok(e) = ebd(beta, x, y, spec.snr) else {
        return f64::INFINITY;
    };
    e - 0.5 * (4.0 * q * (1.0 - q)).ln() - (l / (1.0 + k_alpha)).ln() - rate.value()
}

/// `R^alpha(r) = -ln(alpha r)`: the AWGN rate whose cone the lattice sphere of
/// radius `r` is tangent to.
pub fn r_alpha(r: f64, scaling: &ScalingSpec) -> f64 {
    -(scaling.alpha * r).ln()
}

/// Threshold rate `R^alpha_cr(d, l)` separating the two offset branches.
pub fn r_alpha_crit(d: f64, l: f64, scaling: &ScalingSpec, spec: &ChannelSpec) -> f64 {
    let k = scaling.k_alpha;
    let num = 0.25 * d * d + k * k * (1.0 - d * d / (4.0 * l * l)) + 1.0 / spec.snr;
    -0.5 * (num / (1.0 + k).powi(2)).ln()
}

/// Optimal lattice offset `beta_lambda*` at fixed `(r, d, l)`.
pub fn beta_star_lattice(r: f64, d: f64, l: f64, scaling: &ScalingSpec, spec: &ChannelSpec) -> Result<(f64, LatticeRegime)> {
    if !(d > 0.0 && 2.0 * l > d && l > 0.0) {
        return domain(format!("need 0 < d < 2l, got d={d}, l={l}"));
    }
    let k = scaling.k_alpha;
    let q = d * d / (4.0 * l * l);
    if r_alpha(r, scaling) > r_alpha_crit(d, l, scaling, spec) {
        let x = (r * r - 0.25 * d * d) * (1.0 - q);
        let a = 1.0 / (2.0 * k * spec.snr);
        let disc = a * a + x;
        if !(disc >= 0.0) {
            return Err(Error::Infeasible(format!("negative discriminant {disc} in the key equation")));
        }
        // a - sqrt(a^2 + x) in a form that stays finite as K -> 0.
        let tail = if a.is_infinite() { 0.0 } else { -x / (a + disc.sqrt()) };
        let bracket = l * (1.0 - q) + tail;
        Ok((l - k - bracket, LatticeRegime::AboveThreshold))
    } else {
        Ok((q * (l - k), LatticeRegime::BelowThreshold))
    }
}

/// `l°*(r, K)`, the unconstrained maximiser in `l`, independent of `d`.
pub fn l_star_unconstrained(r: f64, scaling: &ScalingSpec, spec: &ChannelSpec) -> f64 {
    let (k, s) = (scaling.k_alpha, spec.snr);
    (1.0 + (1.0 + 4.0 * k * k * r * r * s * s).sqrt()) / (2.0 * k * s)
}

/// Stationary `l` at a fixed distance `d` on the below-threshold branch:
/// the feasible root (`l > max(K, d/2)`) of `snr K (l-K)(1 - d^2/4l^2) = 1`.
/// Clearing denominators gives the cubic relation of the expurgated regime;
/// the feasible root is unique because the left side increases from 0.
pub fn l_star_at_distance(d: f64, scaling: &ScalingSpec, spec: &ChannelSpec) -> Result<f64> {
    let (k, s) = (scaling.k_alpha, spec.snr);
    if !(k > 0.0) {
        return Err(Error::Infeasible("K_alpha = 0 sends l* to infinity".into()));
    }
    let dd = 0.25 * d * d;
    let lo = k.max(dd.sqrt());
    let g = |l: f64| s * k * (l - k) * (1.0 - dd / (l * l)) - 1.0;
    bisect_expanding(g, lo, 2.0 * lo + 1.0, ROOT_TOL)
}

/// Below-threshold optimum with a free distance: `snr K l^2 - (1 + snr K^2) l - K = 0`
/// and `d^2/4l^2 = K/(l+K)`.
fn critical_maximizers(scaling: &ScalingSpec, spec: &ChannelSpec) -> (f64, f64) {
    let (k, s) = (scaling.k_alpha, spec.snr);
    let b = 1.0 + s * k * k;
    let l = (b + (b * b + 4.0 * s * k * k).sqrt()) / (2.0 * s * k);
    let d = 2.0 * l * (k / (l + k)).sqrt();
    (l, d)
}

/// Maximising `(l, d)` of the lattice union exponent at radius `r` with the
/// distance floor `d >= min_distance (1 + K_alpha)`.
pub fn maximizers_lattice(r: f64, scaling: &ScalingSpec, spec: &ChannelSpec, min_distance: f64) -> Result<LatticeMaximizers> {
    let k = scaling.k_alpha;
    if !(r > 0.0) {
        return domain(format!("radius {r} must be positive"));
    }
    if !(k > 0.0) {
        return Err(Error::Infeasible("K_alpha -> 0 sends l* to infinity (saturated)".into()));
    }
    let ra = r_alpha(r, scaling);
    let l0 = l_star_unconstrained(r, scaling, spec);
    let d0 = SQRT_2 * r;
    let (mut l, mut d, mut regime) = if ra > r_alpha_crit(d0, l0, scaling, spec) {
        (l0, d0, MaximizerRegime::Unconstrained)
    } else {
        let (lc, dc) = critical_maximizers(scaling, spec);
        (lc, dc, MaximizerRegime::Critical)
    };
    let floor = min_distance * (1.0 + k);
    if d < floor {
        d = floor;
        l = l_star_at_distance(floor, scaling, spec)?;
        if ra > r_alpha_crit(floor, l, scaling, spec) {
            l = l0;
        }
        regime = MaximizerRegime::Expurgated;
    }
    if !(l > k && 2.0 * l > d) {
        return Err(Error::Infeasible(format!(
            "closed-form maximiser l = {l} leaves the feasible set l > K = {k}, 2l > d = {d}"
        )));
    }
    Ok(LatticeMaximizers { l_star: l, d_star: d, regime })
}

/// Result of a numeric minimisation of the lattice union exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeOptimum {
    pub value: f64,
    pub l: f64,
    pub d: f64,
    pub beta: f64,
}

fn lattice_min_beta(r: f64, k: f64, l: f64, d: f64, rate: RateNats, spec: &ChannelSpec) -> (f64, f64) {
    let lo = -k - r + 1e-12;
    let hi = r.min(l) - k - 1e-12;
    if hi <= lo {
        return (f64::NAN, f64::INFINITY);
    }
    golden_min(|b| union_bound_exponent_lattice(r, k, l, d, b, rate, spec), lo, hi, GOLDEN_TOL)
}

fn lattice_min_d(r: f64, k: f64, l: f64, d_lo: f64, rate: RateNats, spec: &ChannelSpec) -> (f64, f64) {
    let lo = d_lo.max(1e-9);
    let hi = (2.0 * l).min(2.0 * r) * (1.0 - 1e-12);
    if lo >= hi {
        return (f64::NAN, f64::INFINITY);
    }
    golden_min(|d| lattice_min_beta(r, k, l, d, rate, spec).1, lo, hi, GOLDEN_TOL)
}

/// Nested golden-section minimisation over `l in (K, l_hi]`, `d >= d_lo` and
/// `beta`, with `l_hi = max(4, 8/(K snr))`.
pub fn lattice_union_min(r: f64, scaling: &ScalingSpec, rate: RateNats, spec: &ChannelSpec, d_lo: f64) -> Result<LatticeOptimum> {
    let k = scaling.k_alpha;
    if !(k > 0.0) {
        return Err(Error::Infeasible("K_alpha must be positive for a bounded l search".into()));
    }
    let l_hi = 4f64.max(8.0 / (k * spec.snr));
    let (l, value) = golden_min(|l| lattice_min_d(r, k, l, d_lo, rate, spec).1, k + 1e-9, l_hi, GOLDEN_TOL);
    if !value.is_finite() {
        return Err(Error::Infeasible("lattice union exponent is infinite on the whole search box".into()));
    }
    let (d, _) = lattice_min_d(r, k, l, d_lo, rate, spec);
    let (beta, _) = lattice_min_beta(r, k, l, d, rate, spec);
    Ok(LatticeOptimum { value, l, d, beta })
}

/// Exponent-optimal scaling `K_alpha*` for an ensemble with normalised minimum
/// distance `d_omega` (the same parameter the text also writes `r_Omega`).
pub fn k_alpha_star(d_omega: f64, rate: RateNats, spec: &ChannelSpec) -> Result<KAlphaStar> {
    let rv = rate.value();
    if !(d_omega >= 0.0 && d_omega <= (-rv).exp() * (1.0 + 1e-12)) {
        return domain(format!("d_Omega = {d_omega} outside [0, e^-R]"));
    }
    let cr = critical_rates(spec);
    let s = spec.snr;
    let (k, branch) = if rv > cr.r_crit.value() {
        let a = alpha_star_sphere(theta_of_rate(rv), spec);
        ((1.0 - a) / a, KAlphaBranch::AboveCritical)
    } else if cr.d_crit > d_omega {
        (1.0 / ((1.0 - 0.25 * cr.d_crit * cr.d_crit) * s), KAlphaBranch::CriticalDistance)
    } else {
        (1.0 / ((1.0 - 0.25 * d_omega * d_omega) * s), KAlphaBranch::MinimumDistance)
    };
    Ok(KAlphaStar { scaling: ScalingSpec::from_k(k)?, branch })
}

/// `alpha_lambda* = 1/(1 + K_alpha*)`.
pub fn alpha_lambda_star(d_omega: f64, rate: RateNats, spec: &ChannelSpec) -> Result<f64> {
    Ok(k_alpha_star(d_omega, rate, spec)?.scaling.alpha)
}

/// `alpha_Lambda(R)`: the optimal scaling for the coset ensemble whose minimum
/// distance is `e^-R`.
pub fn alpha_lambda(rate: RateNats, spec: &ChannelSpec) -> Result<f64> {
    alpha_lambda_star((-rate.value()).exp(), rate, spec)
}

/// `R_II = max{0, -ln d_crit}`.
pub fn r_ii(spec: &ChannelSpec) -> f64 {
    (-critical_rates(spec).d_crit.ln()).max(0.0)
}

/// Typical error distance of the coset ensemble.
pub fn d_typ_ii(rate: RateNats, spec: &ChannelSpec) -> Result<f64> {
    let cr = critical_rates(spec);
    let rv = rate.value();
    if !(rv >= 0.0 && rv <= cr.c.value() * (1.0 + 1e-12)) {
        return domain(format!("rate {rv} outside [0, C]"));
    }
    // Strict: when d_crit >= 1 the minimum-distance branch is empty.
    Ok(if rv < r_ii(spec) {
        (-rv).exp()
    } else if rv <= cr.r_crit.value() {
        cr.d_crit
    } else {
        SQRT_2 * (-rv).exp()
    })
}

/// Best known exponent of the mod-lattice channel with its typical-event
/// parameters.
pub fn modlambda_exponent(rate: RateNats, spec: &ChannelSpec) -> Result<ModLambdaExponent> {
    let cr = critical_rates(spec);
    let rv = rate.value().min(cr.c.value());
    let rate = RateNats(rv);
    let d = d_typ_ii(rate, spec)?;
    let value = f_bnd(d, theta_of_rate(rv), rate, spec)?;
    let regime = if rv > cr.r_crit.value() {
        ExponentRegime::SpherePacking
    } else if rv >= r_ii(spec) {
        ExponentRegime::RandomCoding
    } else {
        ExponentRegime::Expurgated
    };
    let exponent = if value <= 0.0 {
        ExponentValue { value: 0.0, regime: ExponentRegime::Zero }
    } else {
        ExponentValue { value, regime }
    };
    let theta = if rv < cr.r_crit.value() {
        theta_zeta(k_zeta(d, rate, spec)?, spec)?
    } else {
        theta_of_rate(rv)
    };
    let alpha = alpha_lambda(rate, spec)?;
    Ok(ModLambdaExponent { exponent, alpha, theta, d_typ_ii: d, r_alpha: theta.sin() / alpha })
}

/// Best known bounds on the packing density parameter `rho` of lattices.
pub fn rho_bounds() -> (f64, f64) {
    (0.5, 0.660211)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::awgn_exponents::{beta_star, random_coding_exponent, sphere_packing_exponent};

    fn s10() -> ChannelSpec {
        ChannelSpec::new(10.0).unwrap()
    }

    #[test]
    fn mmse_scaling() {
        let m = mmse_alpha(&s10());
        assert!((m.alpha - 10.0 / 11.0).abs() < 1e-15);
        assert!((m.k_alpha - 0.1).abs() < 1e-15);
        let big = mmse_alpha(&ChannelSpec::new(1e15).unwrap());
        assert!((big.alpha - 1.0).abs() < 1e-14);
        let sc = ScalingSpec::from_alpha(m.alpha).unwrap();
        assert!((sc.k_alpha - 0.1).abs() < 1e-15);
    }

    #[test]
    fn cross_section_edges() {
        let sc = ScalingSpec::from_k(0.2).unwrap();
        let (_, y) = lattice_cross_section(-0.2, 1.3, 0.8, 0.9, &sc).unwrap();
        assert!((y - 0.9).abs() < 1e-15);
        assert!(lattice_cross_section(0.9, 1.3, 0.8, 0.9, &sc).is_none());
        // Far slices approach half the chord.
        let (x, _) = lattice_cross_section(0.0, 1e8, 0.8, 0.9, &sc).unwrap();
        assert!((x - 0.4).abs() < 1e-8);
    }

    #[test]
    fn lattice_section_matches_cone_section() {
        let s = s10();
        let rate = 1.0;
        let th = theta_of_rate(rate);
        let a = alpha_star_sphere(th, &s);
        let sc = ScalingSpec::from_alpha(a).unwrap();
        let r = th.sin() / a;
        let (l, d) = (1.0 / a, SQRT_2 * r);
        let (bl, reg) = beta_star_lattice(r, d, l, &sc, &s).unwrap();
        assert_eq!(reg, LatticeRegime::AboveThreshold);
        assert!((l - sc.k_alpha - bl - (1.0 + beta_star(th, &s))).abs() < 1e-8);
        let (xl, yl) = lattice_cross_section(bl, l, d, r, &sc).unwrap();
        let b = beta_star(th, &s);
        let xc = (1.0 + b) * (SQRT_2 * th.sin() / 2.0).asin().tan();
        let yc = (1.0 + b) * th.tan();
        assert!((bl + b).abs() < 1e-12);
        assert!((xl - xc).abs() < 1e-12, "{xl} vs {xc}");
        assert!((yl - yc).abs() < 1e-12, "{yl} vs {yc}");
    }

    #[test]
    fn below_threshold_offset() {
        let sc = ScalingSpec::from_k(0.0).unwrap();
        let s = ChannelSpec::new(1e3).unwrap();
        let (b, reg) = beta_star_lattice(1.0, SQRT_2, 1.0, &sc, &s).unwrap();
        assert_eq!(reg, LatticeRegime::BelowThreshold);
        assert!((b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn offset_branches_meet_at_threshold() {
        let s = s10();
        let sc = ScalingSpec::from_k(0.15).unwrap();
        let (d, l) = (0.8, 1.2);
        let target = r_alpha_crit(d, l, &sc, &s);
        let r_j = (-target).exp() / sc.alpha;
        let (b_hi, g_hi) = beta_star_lattice(r_j * (1.0 - 1e-12), d, l, &sc, &s).unwrap();
        let (b_lo, g_lo) = beta_star_lattice(r_j * (1.0 + 1e-12), d, l, &sc, &s).unwrap();
        assert_ne!(g_hi, g_lo);
        assert!((b_hi - b_lo).abs() < 1e-8, "{b_hi} vs {b_lo}");
    }

    #[test]
    fn lambda_key_identity() {
        let s = s10();
        let cr = critical_rates(&s);
        for &rate in &[0.2f64, 0.45, 0.7, 1.0, 1.1] {
            for d_omega in [0.0, (-rate).exp()] {
                let ks = k_alpha_star(d_omega, RateNats(rate), &s).unwrap();
                let r = (1.0 + ks.scaling.k_alpha) * theta_of_rate(rate).sin();
                let m = maximizers_lattice(r, &ks.scaling, &s, d_omega).unwrap();
                assert!((m.l_star - 1.0 / ks.scaling.alpha).abs() < 1e-8, "R={rate} dO={d_omega}: {m:?}");
                if rate > cr.r_crit.value() {
                    assert!((ks.scaling.alpha * m.d_star - SQRT_2 * theta_of_rate(rate).sin()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn maximizers_match_numeric() {
        let s = ChannelSpec::new(3.0).unwrap();
        let cases = [(0.2406, 0.3918, 0.0), (0.5196, 1.5251, 0.353), (0.3148, 0.6211, 0.435)];
        for &(k, r, dmin) in &cases {
            let sc = ScalingSpec::from_k(k).unwrap();
            let m = maximizers_lattice(r, &sc, &s, dmin).unwrap();
            let num = lattice_union_min(r, &sc, RateNats(0.0), &s, dmin * (1.0 + k)).unwrap();
            let closed = lattice_min_beta(r, k, m.l_star, m.d_star, RateNats(0.0), &s).1;
            assert!((closed - num.value).abs() < 1e-7, "{m:?} {num:?}");
        }
        let s50 = ChannelSpec::new(50.0).unwrap();
        let sc = ScalingSpec::from_k(0.0429).unwrap();
        let m = maximizers_lattice(0.4296, &sc, &s50, 0.5).unwrap();
        assert_eq!(m.regime, MaximizerRegime::Expurgated);
        assert!((m.d_star - 0.5 * 1.0429).abs() < 1e-15);
        assert!(maximizers_lattice(1.0, &ScalingSpec::from_k(0.0).unwrap(), &s, 0.0).is_err());
    }

    #[test]
    fn k_alpha_star_branches() {
        let s = s10();
        let cr = critical_rates(&s);
        let rc = cr.r_crit;
        // e^-R_crit < d_crit, so the coset ensemble sits on the critical branch there.
        let at = k_alpha_star((-rc.value()).exp(), rc, &s).unwrap();
        assert_eq!(at.branch, KAlphaBranch::CriticalDistance);
        let k_hi = k_alpha_star(0.0, RateNats(rc.value() * (1.0 + 1e-14)), &s).unwrap();
        let k_lo = k_alpha_star(0.0, rc, &s).unwrap();
        assert_eq!(k_lo.branch, KAlphaBranch::CriticalDistance);
        assert!((k_hi.scaling.k_alpha - 0.109_901_951_359_278_5).abs() < 1e-10);
        assert!((k_lo.scaling.k_alpha - 0.109_901_951_359_278_5).abs() < 1e-12);
        let k02 = k_alpha_star((-0.2f64).exp(), RateNats(0.2), &s).unwrap();
        assert_eq!(k02.branch, KAlphaBranch::MinimumDistance);
        assert!((k02.scaling.k_alpha - 0.120_131_665_964_999_05).abs() < 1e-12);
    }

    #[test]
    fn alpha_lambda_below_mmse() {
        let s = s10();
        let m = mmse_alpha(&s).alpha;
        let c = s.capacity_nats();
        for i in 1..50 {
            let r = c * i as f64 / 50.0;
            assert!(alpha_lambda(RateNats(r), &s).unwrap() < m);
        }
        assert!((alpha_lambda(RateNats(c), &s).unwrap() - m).abs() < 1e-12);
    }

    #[test]
    fn modlambda_values() {
        let s = s10();
        assert!((r_ii(&s) - 0.510_281_205_594_064_6).abs() < 1e-12);
        let e = modlambda_exponent(RateNats(1.0), &s).unwrap();
        assert!((e.exponent.value - sphere_packing_exponent(RateNats(1.0), &s).unwrap().value).abs() < 1e-12);
        let e = modlambda_exponent(RateNats(0.7), &s).unwrap();
        assert!((e.exponent.value - random_coding_exponent(RateNats(0.7), &s).unwrap().value).abs() < 1e-10);
        assert!(e.theta <= theta_of_rate(0.7));
        assert_eq!(modlambda_exponent(RateNats(s.capacity_nats()), &s).unwrap().exponent.value, 0.0);
    }

    #[test]
    fn rho_constants() {
        let (lo, hi) = rho_bounds();
        assert_eq!(lo, 0.5);
        assert_eq!(hi, 0.660211);
        assert!(hi < std::f64::consts::FRAC_1_SQRT_2);
    }
}
