//! Closed-form AWGN error exponents, critical rates and distances.
//!
//! Rates and exponents are in nats per dimension. Distances are chord
//! lengths normalised by `sqrt(nP)`, so they live in `[0, 2]`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::{bisect, golden_min_expanding, GOLDEN_TOL, ROOT_TOL};

/// Relative slack used when checking `R <= C` on inputs produced by
/// floating-point grids.
const RATE_SLACK: f64 = 1e-12;

/// An AWGN channel described by its linear signal-to-noise ratio `P / sigma^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub snr: f64,
}

impl ChannelSpec {
    pub fn new(snr: f64) -> Result<Self> {
        if !(snr.is_finite() && snr > 0.0) {
            return domain(format!("snr must be positive and finite, got {snr}"));
        }
        Ok(Self { snr })
    }

    pub fn from_db(snr_db: f64) -> Result<Self> {
        Self::new(10f64.powf(snr_db / 10.0))
    }

    /// Capacity `0.5 ln(1 + snr)` in nats.
    pub fn capacity_nats(&self) -> f64 {
        0.5 * self.snr.ln_1p()
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * self.snr.log10()
    }
}

/// A non-negative rate in nats per channel use.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RateNats(pub f64);

impl RateNats {
    pub fn new(value: f64) -> Result<Self> {
        if !(value.is_finite() && value >= 0.0) {
            return domain(format!("rate must be finite and non-negative, got {value}"));
        }
        Ok(Self(value))
    }

    pub fn from_bits(bits: f64) -> Result<Self> {
        Self::new(bits * std::f64::consts::LN_2)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn bits(self) -> f64 {
        self.0 / std::f64::consts::LN_2
    }
}

/// Which bound produced an exponent value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentRegime {
    SpherePacking,
    RandomCoding,
    Expurgated,
    Zero,
}

/// An exponent in nats per dimension together with the regime that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentValue {
    pub value: f64,
    pub regime: ExponentRegime,
}

impl ExponentValue {
    fn new(value: f64, regime: ExponentRegime) -> Self {
        if value <= 0.0 {
            Self { value: 0.0, regime: ExponentRegime::Zero }
        } else {
            Self { value, regime }
        }
    }
}

/// Critical rates and distances of an AWGN channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalRates {
    pub c: RateNats,
    pub r_crit: RateNats,
    pub r_x: RateNats,
    pub d_crit: f64,
    pub beta_g_prime: f64,
}

/// `theta(R) = asin(e^{-R})`, the half-angle of a cone whose cap fraction is `e^{-nR}`.
pub fn theta_of_rate(r: f64) -> f64 {
    (-r).exp().asin()
}

/// `R(theta) = -ln sin(theta)`.
pub fn rate_of_theta(theta: f64) -> f64 {
    -theta.sin().ln()
}

/// Angle subtended at the origin by a chord of normalised length `d`.
pub fn theta_of_distance(d: f64) -> f64 {
    2.0 * (0.5 * d).asin()
}

/// Minimum distance of a good spherical code at rate `r`.
pub fn d_min(r: f64) -> f64 {
    // 2 - 2 sqrt(1 - e^{-2R}) written to avoid cancellation near R = 0.
    let e = (-2.0 * r).exp();
    let s = (1.0 - e).sqrt();
    (2.0 * e / (1.0 + s)).sqrt()
}

fn check_rate(r: RateNats, spec: &ChannelSpec) -> Result<f64> {
    let c = spec.capacity_nats();
    let v = r.value();
    if !(v >= 0.0) || v > c * (1.0 + RATE_SLACK) + RATE_SLACK {
        return domain(format!("rate {v} outside [0, C = {c}]"));
    }
    Ok(v.min(c))
}

pub fn capacity(spec: &ChannelSpec) -> RateNats {
    RateNats(spec.capacity_nats())
}

/// Gallager's `E_G(beta, rho; R)` for the power-constrained Gaussian channel.
pub fn gallager_eg(beta: f64, rho: f64, r: RateNats, spec: &ChannelSpec) -> Result<f64> {
    let s = spec.snr;
    if !(beta > 0.0) || !(rho >= 0.0) {
        return domain(format!("need beta > 0 and rho >= 0, got beta={beta}, rho={rho}"));
    }
    let inner = beta - s / (1.0 + rho);
    if !(inner > 0.0) {
        return domain(format!("beta - snr/(1+rho) = {inner} is not positive"));
    }
    Ok(0.5 * ((1.0 - beta) * (1.0 + rho) + s + rho * beta.ln() + inner.ln() - 2.0 * rho * r.value()))
}

/// The optimising `rho` of the sphere-packing exponent at rate `r`.
pub fn rho_g(r: RateNats, spec: &ChannelSpec) -> Result<f64> {
    let rv = check_rate(r, spec)?;
    if rv <= 0.0 {
        return domain("rho_G diverges at R = 0");
    }
    let s = spec.snr;
    let bg = (2.0 * rv).exp();
    let bm1 = (2.0 * rv).exp_m1();
    Ok(s / (2.0 * bg) * (1.0 + (1.0 + 4.0 * bg / (s * bm1)).sqrt()) - 1.0)
}

pub fn sphere_packing_exponent(r: RateNats, spec: &ChannelSpec) -> Result<ExponentValue> {
    let rv = check_rate(r, spec)?;
    if rv >= spec.capacity_nats() {
        return Ok(ExponentValue::new(0.0, ExponentRegime::Zero));
    }
    if rv == 0.0 {
        // rho -> infinity; the limit is snr/2.
        return Ok(ExponentValue::new(0.5 * spec.snr, ExponentRegime::SpherePacking));
    }
    let rho = rho_g(RateNats(rv), spec)?.max(0.0);
    let v = gallager_eg((2.0 * rv).exp(), rho, RateNats(rv), spec)?;
    Ok(ExponentValue::new(v, ExponentRegime::SpherePacking))
}

fn r_crit_closed(s: f64) -> f64 {
    0.5 * (0.5 + 0.25 * s + 0.5 * (1.0 + 0.25 * s * s).sqrt()).ln()
}

fn beta_g_prime(s: f64) -> f64 {
    0.5 * (1.0 + 0.5 * s + (1.0 + 0.25 * s * s).sqrt())
}

/// Slope of the expurgated exponent, `d E^x / d R`.
fn expurgated_slope(r: f64, s: f64) -> f64 {
    let e = (-2.0 * r).exp();
    -0.25 * s * e / (-(-2.0 * r).exp_m1()).sqrt()
}

/// Closed form of the expurgated/random-coding junction, kept as a cross-check.
pub fn r_x_closed_form(spec: &ChannelSpec) -> f64 {
    let s = spec.snr;
    0.5 * (0.5 * (1.0 + (1.0 + 0.25 * s * s).sqrt())).ln()
}

pub fn critical_rates(spec: &ChannelSpec) -> CriticalRates {
    let s = spec.snr;
    let r_crit = r_crit_closed(s);
    let bgp = beta_g_prime(s);
    // E^x - E_r is convex, non-negative and touches zero where E^x' = -1,
    // so the junction is located on the derivative of the difference.
    let r_x = bisect(|r| expurgated_slope(r, s) + 1.0, 1e-300, r_crit, ROOT_TOL)
        .unwrap_or_else(|_| r_x_closed_form(spec));
    let d_crit = (2.0 + 4.0 / s - 2.0 * (1.0 + 4.0 / (s * s)).sqrt()).sqrt();
    CriticalRates {
        c: capacity(spec),
        r_crit: RateNats(r_crit),
        r_x: RateNats(r_x),
        d_crit,
        beta_g_prime: bgp,
    }
}

/// `E_r(0) = E_G(beta_G', 1; 0)`.
fn random_coding_intercept(spec: &ChannelSpec) -> f64 {
    gallager_eg(beta_g_prime(spec.snr), 1.0, RateNats(0.0), spec)
        .expect("beta_G' > snr/2 for every snr > 0")
}

pub fn random_coding_exponent(r: RateNats, spec: &ChannelSpec) -> Result<ExponentValue> {
    let rv = check_rate(r, spec)?;
    if rv <= r_crit_closed(spec.snr) {
        let v = random_coding_intercept(spec) - rv;
        Ok(ExponentValue::new(v, ExponentRegime::RandomCoding))
    } else {
        sphere_packing_exponent(RateNats(rv), spec)
    }
}

pub fn expurgated_exponent(r: RateNats, spec: &ChannelSpec) -> Result<ExponentValue> {
    let rv = r.value();
    if !(rv >= 0.0) {
        return domain(format!("rate {rv} is negative"));
    }
    let v = 0.25 * spec.snr * (1.0 - (-(-2.0 * rv).exp_m1()).sqrt());
    Ok(ExponentValue::new(v, ExponentRegime::Expurgated))
}

/// Best known lower bound: expurgated up to `R_x`, random coding above.
pub fn awgn_exponent(r: RateNats, spec: &ChannelSpec) -> Result<ExponentValue> {
    let rv = check_rate(r, spec)?;
    let cr = critical_rates(spec);
    if rv <= cr.r_x.value() {
        expurgated_exponent(RateNats(rv), spec)
    } else {
        random_coding_exponent(RateNats(rv), spec)
    }
}

/// Chernoff exponents for a chi-square norm (`E_h`) and a single Gaussian
/// component (`E_v`).
pub fn tail_exponents(mu: f64) -> (f64, f64) {
    let eh = if mu >= 1.0 { 0.5 * (mu - 1.0 - mu.ln()) } else { 0.0 };
    (eh, 0.5 * mu)
}

/// Radial offset minimising the cone-exit exponent. Tends to `-1` as the cone
/// degenerates into a half-space at `theta = pi/2`.
pub fn beta_star(theta: f64, spec: &ChannelSpec) -> f64 {
    let c2 = theta.cos().powi(2);
    0.5 * c2 + 0.5 * (c2 * c2 + 4.0 * c2 / spec.snr).sqrt() - 1.0
}

/// True when `theta` is numerically `pi/2`, where the cone is a half-space.
pub fn is_degenerate_angle(theta: f64) -> bool {
    (std::f64::consts::FRAC_PI_2 - theta).abs() < 1e-12
}

/// Objective of the cone-exit minimisation.
pub fn leave_cone_objective(beta: f64, theta: f64, spec: &ChannelSpec) -> f64 {
    if beta <= -1.0 {
        return f64::INFINITY;
    }
    let r = (1.0 + beta) * theta.tan();
    let (_, ev) = tail_exponents(beta * beta * spec.snr);
    let (eh, _) = tail_exponents(r * r * spec.snr);
    ev + eh
}

/// Exponent of the probability that the received vector leaves the cone of
/// half-angle `theta` around the transmitted codeword, minimised numerically
/// over the radial offset.
pub fn leave_cone_exponent(theta: f64, spec: &ChannelSpec) -> Result<ExponentValue> {
    if !(theta > 0.0) || theta > std::f64::consts::FRAC_PI_2 {
        return domain(format!("cone angle {theta} outside (0, pi/2)"));
    }
    if is_degenerate_angle(theta) {
        return Err(Error::Domain("cone angle pi/2 is a half-space".into()));
    }
    let (_, v) = golden_min_expanding(
        |b| leave_cone_objective(b, theta, spec),
        -1.0 + 1e-12,
        1.0,
        GOLDEN_TOL,
    );
    Ok(ExponentValue::new(v, ExponentRegime::SpherePacking))
}

/// Distance of the dominating error event at rate `r`.
pub fn typical_distance(r: RateNats, spec: &ChannelSpec) -> Result<f64> {
    let rv = check_rate(r, spec)?;
    let cr = critical_rates(spec);
    Ok(if rv <= cr.r_x.value() {
        d_min(rv)
    } else if rv <= cr.r_crit.value() {
        cr.d_crit
    } else {
        std::f64::consts::SQRT_2 * (-rv).exp()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s10() -> ChannelSpec {
        ChannelSpec::new(10.0).unwrap()
    }

    #[test]
    fn sphere_packing_zero_rate_limit() {
        let s = s10();
        assert_eq!(sphere_packing_exponent(RateNats(0.0), &s).unwrap().value, 5.0);
        // mpmath at R = 1e-9
        let v = sphere_packing_exponent(RateNats(1e-9), &s).unwrap().value;
        assert!((v - 4.999_858_574_643_716).abs() < 1e-9, "{v}");
    }

    #[test]
    fn capacity_values() {
        assert!((capacity(&s10()).value() - 1.198_947_636_399_185).abs() < 1e-14);
        let s = ChannelSpec::new(std::f64::consts::E.powi(2) - 1.0).unwrap();
        assert!((capacity(&s).value() - 1.0).abs() < 1e-15);
        assert!(capacity(&ChannelSpec::new(1e-300).unwrap()).value() < 1e-299);
        assert!(ChannelSpec::new(0.0).is_err());
    }

    #[test]
    fn gallager_examples() {
        let s = s10();
        assert!(gallager_eg(11.0, 0.0, RateNats(0.7), &s).unwrap().abs() < 1e-15);
        let v = gallager_eg(5.549510, 1.0, RateNats(0.180698), &s).unwrap();
        assert!((v - 0.827_282_664_315_256).abs() < 1e-12);
        assert!(gallager_eg(5.0, 1.0, RateNats(0.1), &s).is_err());
    }

    #[test]
    fn rho_g_endpoints() {
        let s = s10();
        let cr = critical_rates(&s);
        assert!(rho_g(cr.c, &s).unwrap().abs() < 1e-12);
        assert!((rho_g(cr.r_crit, &s).unwrap() - 1.0).abs() < 1e-12);
        assert!(rho_g(RateNats(0.0), &s).is_err());
        assert!(rho_g(RateNats(1e-8), &s).unwrap() > 1e3);
    }

    #[test]
    fn critical_rate_anchors() {
        let cr = critical_rates(&s10());
        assert!((cr.r_crit.value() - 0.856_854_795_874_037_3).abs() < 1e-13);
        assert!((cr.beta_g_prime - 5.549_509_756_796_392).abs() < 1e-12);
        assert!((cr.d_crit - 0.600_326_739_836_637_7).abs() < 1e-12);
        assert!((cr.r_x.value() - 0.557_490_421_111_698_2).abs() < 1e-11);
        assert!((cr.d_crit - (2.0 / cr.beta_g_prime).sqrt()).abs() < 1e-12);
        assert!((cr.d_crit - std::f64::consts::SQRT_2 * (-cr.r_crit.value()).exp()).abs() < 1e-12);
    }

    #[test]
    fn random_coding_anchors() {
        let s = s10();
        let cr = critical_rates(&s);
        let e0 = random_coding_exponent(RateNats(0.0), &s).unwrap().value;
        assert!((e0 - 1.007_980_664_315_306).abs() < 1e-12);
        let at_crit = random_coding_exponent(cr.r_crit, &s).unwrap().value;
        let sp = sphere_packing_exponent(cr.r_crit, &s).unwrap().value;
        assert!((at_crit - 0.151_125_868_441_268_5).abs() < 1e-12);
        assert!((at_crit - sp).abs() < 1e-12);
        assert_eq!(random_coding_exponent(cr.c, &s).unwrap().value, 0.0);
    }

    #[test]
    fn expurgated_values() {
        let s = s10();
        assert_eq!(expurgated_exponent(RateNats(0.0), &s).unwrap().value, 2.5);
        let rx = critical_rates(&s).r_x;
        let ex = expurgated_exponent(rx, &s).unwrap().value;
        let er = random_coding_exponent(rx, &s).unwrap().value;
        assert!((ex - 0.450_490_243_203_607_6).abs() < 1e-10);
        assert!((ex - er).abs() < 1e-10);
        assert!(expurgated_exponent(RateNats(40.0), &s).unwrap().value < 1e-30);
    }

    #[test]
    fn awgn_dispatch() {
        let s = s10();
        let e = awgn_exponent(RateNats(0.3), &s).unwrap();
        assert_eq!(e.regime, ExponentRegime::Expurgated);
        let ex = expurgated_exponent(RateNats(0.3), &s).unwrap().value;
        let er = random_coding_exponent(RateNats(0.3), &s).unwrap().value;
        assert_eq!(e.value, ex.max(er));
        assert_eq!(awgn_exponent(capacity(&s), &s).unwrap().value, 0.0);
        assert_eq!(awgn_exponent(RateNats(1.0), &s).unwrap().regime, ExponentRegime::SpherePacking);
    }

    #[test]
    fn tails() {
        assert_eq!(tail_exponents(1.0), (0.0, 0.5));
        assert_eq!(tail_exponents(0.5), (0.0, 0.25));
        let (eh, ev) = tail_exponents(2.0);
        assert!((eh - 0.5 * (1.0 - 2f64.ln())).abs() < 1e-15);
        assert!((eh - 0.153_426).abs() < 1e-6);
        assert_eq!(ev, 1.0);
    }

    #[test]
    fn beta_star_values() {
        let s = s10();
        let cr = critical_rates(&s);
        assert!(beta_star(theta_of_rate(cr.c.value()), &s).abs() < 1e-14);
        let b = beta_star(theta_of_rate(cr.r_crit.value()), &s);
        assert!((b + 0.090_098_048_640_721_52).abs() < 1e-12);
        assert_eq!(beta_star(std::f64::consts::FRAC_PI_2, &s), -1.0);
        let big = ChannelSpec::new(1e12).unwrap();
        let th: f64 = 0.7;
        assert!((beta_star(th, &big) + th.sin().powi(2)).abs() < 1e-6);
    }

    #[test]
    fn leave_cone_matches_sphere_packing() {
        let s = s10();
        let c = s.capacity_nats();
        let r = 0.9 * c;
        let lc = leave_cone_exponent(theta_of_rate(r), &s).unwrap().value;
        let sp = sphere_packing_exponent(RateNats(r), &s).unwrap().value;
        assert!((lc - 0.015_751_627_092_680_03).abs() < 1e-9);
        assert!((lc - sp).abs() < 1e-9);
        assert!(leave_cone_exponent(theta_of_rate(c), &s).unwrap().value < 1e-12);
        assert!(leave_cone_exponent(std::f64::consts::FRAC_PI_2, &s).is_err());
    }

    #[test]
    fn typical_distance_junctions() {
        let s = s10();
        let cr = critical_rates(&s);
        assert!((typical_distance(RateNats(0.0), &s).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let rx = cr.r_x.value();
        assert!((d_min(rx) - cr.d_crit).abs() < 1e-8);
        let rc = cr.r_crit.value();
        assert!((std::f64::consts::SQRT_2 * (-rc).exp() - cr.d_crit).abs() < 1e-12);
        assert!(typical_distance(RateNats(2.0), &s).is_err());
    }

    #[test]
    fn rate_units() {
        let r = RateNats::from_bits(1.0).unwrap();
        assert!((r.value() - std::f64::consts::LN_2).abs() < 1e-16);
        assert!((r.bits() - 1.0).abs() < 1e-15);
        assert!(RateNats::new(-1.0).is_err());
    }
}
