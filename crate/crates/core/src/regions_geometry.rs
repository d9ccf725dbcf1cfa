//! Gallager bounding regions around the transmitted codeword.
//!
//! Joint tail exponents, cone and tangent-sphere union-bound exponents, the
//! optimal radial offset / error distance pair and the `theta_zeta`/`K_zeta`
//! construction that locates the smallest useful cone below the critical
//! rate. Distances are normalised by `sqrt(nP)`.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::awgn_exponents::{
    beta_star, critical_rates, rate_of_theta, sphere_packing_exponent, tail_exponents, theta_of_distance,
    theta_of_rate, typical_distance, ChannelSpec, RateNats,
};
use crate::error::{domain, Error, Result};
use crate::numerics::{bisect, bisect_expanding, golden_min, golden_min_expanding, GOLDEN_TOL, ROOT_TOL};

/// Distances closer than this to 0 or 2 are treated as saturated.
pub const D_EPS: f64 = 1e-12;

/// Which branch of the optimal radial offset applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventRegime {
    AboveCritical,
    BelowCritical,
    Expurgated,
}

/// Geometry of a dominating error event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypicalEvent {
    pub d: f64,
    pub beta: f64,
    pub theta_d: f64,
    pub regime: EventRegime,
}

/// A Gallager bounding region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegionSpec {
    Cone { theta: f64 },
    TangentSphere { theta: f64, alpha: f64, radius: f64 },
    SmallestValid { theta: f64, profile: Vec<(f64, Option<f64>)> },
}

impl RegionSpec {
    pub fn cone(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= FRAC_PI_2) {
            return domain(format!("cone angle {theta} outside (0, pi/2]"));
        }
        Ok(RegionSpec::Cone { theta })
    }

    /// Sphere tangent to the cone of half-angle `theta` at the optimal offset.
    pub fn tangent_sphere(theta: f64, spec: &ChannelSpec) -> Result<Self> {
        let ts = tangent_sphere_scaling(theta, spec)?;
        Ok(RegionSpec::TangentSphere { theta, alpha: ts.alpha_star, radius: ts.radius })
    }

    pub fn smallest_valid(r: RateNats, spec: &ChannelSpec, beta_grid: &[f64]) -> Result<Self> {
        let profile = smallest_valid_region(r, spec, beta_grid)?;
        Ok(RegionSpec::SmallestValid {
            theta: theta_of_rate(r.value()),
            profile: beta_grid.iter().copied().zip(profile).collect(),
        })
    }
}

/// `E~_bd(x, y; tau)`: exponent of `P(|z_1| >= x, ||z|| <= y)` per dimension for
/// noise of per-dimension variance `1/tau` (all lengths normalised).
pub fn joint_tail_exponent(x: f64, y: f64, tau: f64) -> Result<f64> {
    if !(x >= 0.0 && y > x && tau > 0.0) {
        return domain(format!("joint tail needs y > x >= 0 and tau > 0, got x={x}, y={y}, tau={tau}"));
    }
    let gap = y * y - x * x;
    Ok(if gap * tau >= 1.0 {
        0.5 * tau * x * x
    } else {
        0.5 * (tau * y * y - (std::f64::consts::E * tau * gap).ln())
    })
}

/// Joint tail exponent plus the radial-offset penalty `tau beta^2 / 2`.
pub fn ebd(beta: f64, x: f64, y: f64, tau: f64) -> Result<f64> {
    Ok(0.5 * tau * beta * beta + joint_tail_exponent(x, y, tau)?)
}

fn ebd_or_inf(beta: f64, x: f64, y: f64, tau: f64) -> f64 {
    ebd(beta, x, y, tau).unwrap_or(f64::INFINITY)
}

/// Half-space offset and cross-section radius of the cone at radial offset `beta`.
pub fn cone_cross_section(beta: f64, theta_d: f64, theta: f64) -> Result<(f64, f64)> {
    if !(beta >= -1.0) {
        return domain(format!("radial offset {beta} below -1"));
    }
    if !(theta_d > 0.0) || 0.5 * theta_d > theta || theta >= FRAC_PI_2 {
        return domain(format!("need 0 < theta_d/2 <= theta < pi/2, got theta_d={theta_d}, theta={theta}"));
    }
    Ok(((1.0 + beta) * (0.5 * theta_d).tan(), (1.0 + beta) * theta.tan()))
}

fn d_saturated(d: f64) -> bool {
    !(d > D_EPS && d < 2.0 - D_EPS)
}

/// Cone union-bound exponent `E_bnd(theta, d, beta, R)`. Returns `+inf` for
/// saturated distances and for parameter points outside the region.
pub fn union_bound_exponent_cone(theta: f64, d: f64, beta: f64, r: RateNats, spec: &ChannelSpec) -> f64 {
    if d_saturated(d) || beta <= -1.0 {
        return f64::INFINITY;
    }
    let Ok((x, y)) = cone_cross_section(beta, theta_of_distance(d), theta) else {
        return f64::INFINITY;
    };
    ebd_or_inf(beta, x, y, spec.snr) - 0.5 * (d * d * (1.0 - 0.25 * d * d)).ln() - r.value()
}

/// Rate at which the optimal offset for an error at angle `theta_d` switches
/// branch.
pub fn r_crit_theta_d(theta_d: f64, spec: &ChannelSpec) -> Result<f64> {
    let s = spec.snr;
    let c2 = (0.5 * theta_d).cos().powi(2);
    let arg = 1.0 - 2.0 * s * c2 * c2 / (2.0 + s * (1.0 + theta_d.cos()));
    if !(arg > 0.0) {
        return domain(format!("critical-rate argument {arg} is not positive"));
    }
    Ok(-0.5 * arg.ln())
}

/// Optimal radial offset for the cone union bound.
///
/// Above the threshold the offset is the cone-exit optimum and does not
/// depend on `theta_d`. Below it the half-space constraint binds and the
/// offset is `cos^2(theta_d/2) - 1 = -d^2/4`.
pub fn beta_star_cone(theta: f64, theta_d: f64, spec: &ChannelSpec) -> Result<(f64, EventRegime)> {
    if !(theta_d > 0.0) || 0.5 * theta_d > theta + 1e-15 {
        return domain(format!("need 0 < theta_d/2 <= theta, got theta_d={theta_d}, theta={theta}"));
    }
    if rate_of_theta(theta) > r_crit_theta_d(theta_d, spec)? {
        Ok((beta_star(theta, spec), EventRegime::AboveCritical))
    } else {
        Ok(((0.5 * theta_d).cos().powi(2) - 1.0, EventRegime::BelowCritical))
    }
}

/// Error distance minimising the cone union exponent at half-angle `theta`.
pub fn d_star_cone(theta: f64, spec: &ChannelSpec) -> f64 {
    let cr = critical_rates(spec);
    if rate_of_theta(theta) > cr.r_crit.value() {
        SQRT_2 * theta.sin()
    } else {
        cr.d_crit
    }
}

fn sphere_packing_saturating(r: f64, spec: &ChannelSpec) -> f64 {
    if r >= spec.capacity_nats() {
        0.0
    } else {
        sphere_packing_exponent(RateNats(r.max(1e-300)), spec).map(|e| e.value).unwrap_or(f64::INFINITY)
    }
}

/// Closed-form minimum over `beta` of the cone union exponent (`E~_bnd`).
pub fn f_bnd(d: f64, theta: f64, r: RateNats, spec: &ChannelSpec) -> Result<f64> {
    if d_saturated(d) {
        return Ok(f64::INFINITY);
    }
    let r_theta = rate_of_theta(theta);
    if r_theta > r_crit_theta_d(theta_of_distance(d), spec)? {
        Ok(sphere_packing_saturating(r_theta, spec) + r_theta - r.value())
    } else {
        Ok(union_exponent_case2(d, r.value(), spec.snr))
    }
}

/// `snr d^2/8 - ln(d sqrt(1-d^2/4)) - R`, the pairwise-error term of the union bound.
fn union_exponent_case2(d: f64, r: f64, s: f64) -> f64 {
    s * d * d / 8.0 - (d * (1.0 - 0.25 * d * d).sqrt()).ln() - r
}

/// Result of a numeric minimisation of the cone union exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeOptimum {
    pub value: f64,
    pub d: f64,
    pub beta: f64,
}

/// Minimum over `beta` of the cone union exponent at fixed `(theta, d)`.
pub fn cone_min_over_beta(theta: f64, d: f64, r: RateNats, spec: &ChannelSpec) -> (f64, f64) {
    golden_min_expanding(
        |b| union_bound_exponent_cone(theta, d, b, r, spec),
        -1.0 + 1e-12,
        1.0,
        GOLDEN_TOL,
    )
}

/// Nested golden-section minimisation of the cone union exponent over
/// `d >= d_lo` and `beta`.
pub fn cone_union_min(theta: f64, r: RateNats, spec: &ChannelSpec, d_lo: f64) -> Result<ConeOptimum> {
    let lo = d_lo.max(D_EPS);
    let hi = (2.0 * theta.sin()).min(2.0 - D_EPS) * (1.0 - 1e-12);
    if lo >= hi {
        return Err(Error::Infeasible(format!("distance floor {d_lo} leaves no chord inside the cone")));
    }
    let (d, value) = golden_min(|d| cone_min_over_beta(theta, d, r, spec).1, lo, hi, GOLDEN_TOL);
    let (beta, _) = cone_min_over_beta(theta, d, r, spec);
    Ok(ConeOptimum { value, d, beta })
}

/// Radius profile `r(beta)` of the smallest valid region at rate `r`.
///
/// Entry `None` means the region is pinched off at that offset.
pub fn smallest_valid_region(r: RateNats, spec: &ChannelSpec, beta_grid: &[f64]) -> Result<Vec<Option<f64>>> {
    let cr = critical_rates(spec);
    let rv = r.value();
    if !(rv > cr.r_crit.value() && rv < cr.c.value()) {
        return domain(format!("rate {rv} outside (R_crit, C)"));
    }
    let s = spec.snr;
    let esp = sphere_packing_exponent(r, spec)?.value;
    beta_grid
        .iter()
        .map(|&b| {
            let budget = esp - tail_exponents(b * b * s).1;
            if budget < 0.0 {
                return Ok(None);
            }
            // E_h(mu) = budget has a unique root mu >= 1.
            let mu = bisect_expanding(|mu| tail_exponents(mu).0 - budget, 1.0, 2.0, ROOT_TOL)?;
            Ok(Some((mu / s).sqrt()))
        })
        .collect()
}

/// Scalings of spheres tangent to a cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentSphere {
    pub theta: f64,
    pub alpha_star: f64,
    pub radius: f64,
}

impl TangentSphere {
    /// `alpha_s(beta, theta)`: scaling of the sphere tangent to the cone at offset `beta`.
    pub fn alpha_of_beta(&self, beta: f64) -> f64 {
        alpha_s(beta, self.theta)
    }
}

pub fn alpha_s(beta: f64, theta: f64) -> f64 {
    theta.cos().powi(2) / (1.0 + beta)
}

/// `alpha*_s(theta)` from its closed form.
pub fn alpha_star_sphere(theta: f64, spec: &ChannelSpec) -> f64 {
    2.0 / (1.0 + (1.0 + 4.0 / (spec.snr * theta.cos().powi(2))).sqrt())
}

pub fn tangent_sphere_scaling(theta: f64, spec: &ChannelSpec) -> Result<TangentSphere> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return domain(format!("cone angle {theta} outside (0, pi/2)"));
    }
    let alpha_star = alpha_star_sphere(theta, spec);
    Ok(TangentSphere { theta, alpha_star, radius: theta.sin() / alpha_star })
}

/// `theta_zeta(K)`: cone angle at which the sphere-packing exponent has the
/// parametrisation `sphere_param(K)`.
pub fn theta_zeta(k: f64, spec: &ChannelSpec) -> Result<f64> {
    let s = spec.snr;
    if !(k >= 1.0 / s * (1.0 - 1e-14)) {
        return domain(format!("K = {k} below 1/snr"));
    }
    Ok((1.0 - 1.0 / (k * (1.0 + k) * s)).max(0.0).sqrt().asin())
}

pub fn sphere_param(k: f64, spec: &ChannelSpec) -> Result<f64> {
    let s = spec.snr;
    if !(k >= 1.0 / s * (1.0 - 1e-14)) {
        return domain(format!("K = {k} below 1/snr"));
    }
    let arg = (1.0 + 1.0 / k - 1.0 / (k * k * s)).max(f64::MIN_POSITIVE);
    Ok(((-1.0 + k * s - k * arg.ln()) / (2.0 * k)).max(0.0))
}

/// `z(K; d, R, snr)` as printed; its root in `K` balances the sphere-packing
/// and pairwise terms.
pub fn z_function(k: f64, d: f64, r: f64, spec: &ChannelSpec) -> f64 {
    let s = spec.snr;
    let q = 1.0 - 0.25 * d * d;
    -1.0 + k * (2.0 * r + q * s) + k * (d * d * q * k * k * s / (k * (1.0 + k) * s - 1.0)).ln()
}

/// Root of `z(K)` on `[1/snr, inf)` by bisection with upper-bracket doubling.
pub fn k_zeta(d: f64, r: RateNats, spec: &ChannelSpec) -> Result<f64> {
    if !(d >= 0.0 && r.value() >= 0.0) {
        return domain(format!("need d >= 0 and R >= 0, got d={d}, R={}", r.value()));
    }
    let lo = 1.0 / spec.snr;
    bisect_expanding(|k| z_function(k, d, r.value(), spec), lo, 2.0 * lo, 0.0)
}

/// Smallest cone angle that still yields the full AWGN exponent.
pub fn theta_awgn(r: RateNats, spec: &ChannelSpec) -> Result<f64> {
    let cr = critical_rates(spec);
    if r.value() < cr.r_crit.value() {
        let d = typical_distance(r, spec)?;
        theta_zeta(k_zeta(d, r, spec)?, spec)
    } else {
        typical_distance(r, spec)?;
        Ok(theta_of_rate(r.value()))
    }
}

/// `alpha^r_AWGN(R) = alpha*_s(theta(max{R, R_crit}))`.
pub fn alpha_awgn_r(r: RateNats, spec: &ChannelSpec) -> f64 {
    let rc = critical_rates(spec).r_crit.value();
    alpha_star_sphere(theta_of_rate(r.value().max(rc)), spec)
}

/// Scaling for the expurgated spherical ensemble.
///
/// Above `R_crit` this is `alpha_s(beta*, theta(R))`; below it the sphere is
/// matched to the half-angle of the typical error chord,
/// `1 / (1 + 1/((1 - d_typ^2/4) snr))`.
pub fn alpha_awgn(r: RateNats, spec: &ChannelSpec) -> Result<f64> {
    let cr = critical_rates(spec);
    let rv = r.value();
    if rv <= 0.0 {
        return domain("alpha_AWGN is defined for R > 0");
    }
    let d = typical_distance(r, spec)?;
    if rv > cr.r_crit.value() {
        let theta = theta_of_rate(rv);
        let (b, _) = beta_star_cone(theta, theta_of_distance(d), spec)?;
        Ok(alpha_s(b, theta))
    } else {
        Ok(1.0 / (1.0 + 1.0 / ((1.0 - 0.25 * d * d) * spec.snr)))
    }
}

/// Typical error event of the expurgated spherical ensemble at rate `r`.
pub fn typical_event(r: RateNats, spec: &ChannelSpec) -> Result<TypicalEvent> {
    let cr = critical_rates(spec);
    let d = typical_distance(r, spec)?;
    let theta_d = theta_of_distance(d);
    let theta = theta_of_rate(r.value()).max(0.5 * theta_d);
    let (beta, branch) = beta_star_cone(theta, theta_d, spec)?;
    let regime = if r.value() <= cr.r_x.value() { EventRegime::Expurgated } else { branch };
    Ok(TypicalEvent { d, beta, theta_d, regime })
}

/// Cross-section of the sphere of scaling `alpha` tangent-inscribed in the
/// cone of half-angle `theta`, at radial offset `beta_s`. `None` when the
/// offset misses the sphere.
pub fn sphere_region_cross_section(alpha: f64, beta_s: f64, theta: f64, theta_d: f64) -> Option<(f64, f64)> {
    let ys2 = (theta.sin() / alpha).powi(2) - (1.0 / alpha - (1.0 + beta_s)).powi(2);
    if ys2 < 0.0 {
        return None;
    }
    Some(((1.0 + beta_s) * (0.5 * theta_d).tan(), ys2.sqrt()))
}

/// Rate at which the two closed-form branches of `beta_star_cone` meet for a
/// given error angle, found by bisection on `theta`.
pub fn beta_branch_junction(theta_d: f64, spec: &ChannelSpec) -> Result<f64> {
    let target = r_crit_theta_d(theta_d, spec)?;
    let lo = 0.5 * theta_d;
    bisect(|t| rate_of_theta(t) - target, lo.max(1e-12), FRAC_PI_2 - 1e-12, ROOT_TOL)
}
