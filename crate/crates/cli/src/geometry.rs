//! Every typical-error-event quantity at one rate, as a single JSON object.

use anyhow::{bail, Result};
use modlat_core::awgn_exponents::{
    awgn_exponent, critical_rates, random_coding_exponent, sphere_packing_exponent, theta_of_rate, CriticalRates,
    ExponentValue,
};
use modlat_core::modlambda::{
    k_alpha_star, maximizers_lattice, mmse_alpha, modlambda_exponent, KAlphaStar, LatticeMaximizers,
    ModLambdaExponent,
};
use modlat_core::regions_geometry::{alpha_awgn, alpha_awgn_r, k_zeta, theta_awgn, typical_event};
use modlat_core::{ChannelSpec, RateNats, TypicalEvent};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Exponents {
    pub e_sp: ExponentValue,
    pub e_r: ExponentValue,
    pub e_awgn: ExponentValue,
    pub e_modlambda: ExponentValue,
}

/// Maximising lattice event, or why it has none.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Maximizers {
    Found(LatticeMaximizers),
    Unavailable { error: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometryReport {
    pub snr: f64,
    pub snr_db: f64,
    pub rate_nats: f64,
    pub rate_bits: f64,
    pub rate_over_c: f64,
    pub critical: CriticalRates,
    pub exponents: Exponents,
    /// Half-angle `theta(R)` of the cone with the rate's solid angle.
    pub theta: f64,
    pub typical_event: TypicalEvent,
    /// Root of `z(K)`, present below `R_crit`.
    pub k_zeta: Option<f64>,
    pub theta_awgn: f64,
    pub alpha_awgn: f64,
    pub alpha_awgn_r: f64,
    pub alpha_mmse: f64,
    pub k_alpha_star: KAlphaStar,
    pub modlambda: ModLambdaExponent,
    pub lattice_maximizers: Maximizers,
}

pub fn geometry_report(rate: RateNats, spec: &ChannelSpec) -> Result<GeometryReport> {
    let cr = critical_rates(spec);
    let r = rate.value();
    if !(r > 0.0 && r <= cr.c.value() * (1.0 + 1e-12)) {
        bail!("rate must satisfy 0 < R <= C = {} nats, got {r}", cr.c.value());
    }
    let rate = RateNats(r.min(cr.c.value()));
    let ev = typical_event(rate, spec)?;
    let kz = if rate < cr.r_crit { Some(k_zeta(ev.d, rate, spec)?) } else { None };
    let d_omega = (-rate.value()).exp();
    let ks = k_alpha_star(d_omega, rate, spec)?;
    let ml = modlambda_exponent(rate, spec)?;
    let lattice_maximizers = match maximizers_lattice(ml.r_alpha, &ks.scaling, spec, d_omega) {
        Ok(m) => Maximizers::Found(m),
        Err(e) => Maximizers::Unavailable { error: e.to_string() },
    };
    Ok(GeometryReport {
        snr: spec.snr,
        snr_db: spec.snr_db(),
        rate_nats: rate.value(),
        rate_bits: rate.bits(),
        rate_over_c: rate.value() / cr.c.value(),
        critical: cr,
        exponents: Exponents {
            e_sp: sphere_packing_exponent(rate, spec)?,
            e_r: random_coding_exponent(rate, spec)?,
            e_awgn: awgn_exponent(rate, spec)?,
            e_modlambda: ml.exponent,
        },
        theta: theta_of_rate(rate.value()),
        typical_event: ev,
        k_zeta: kz,
        theta_awgn: theta_awgn(rate, spec)?,
        alpha_awgn: alpha_awgn(rate, spec)?,
        alpha_awgn_r: alpha_awgn_r(rate, spec),
        alpha_mmse: mmse_alpha(spec).alpha,
        k_alpha_star: ks,
        modlambda: ml,
        lattice_maximizers,
    })
}
