//! Exponent curves on a rate grid, written as CSV or JSON.
//!
//! Columns, in order: `rate_nats`, `rate_bits`, `rate_over_C`, one column per
//! requested exponent (`E_sp`, `E_r`, `E_x`, `E_awgn`, `E_modlambda`), then the
//! same exponents divided by the snr (`E_over_snr_sp`, ...). The expurgated
//! column is only filled up to `R_x`, where the bound applies; cells above it
//! are empty.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use modlat_core::awgn_exponents::{
    awgn_exponent, critical_rates, expurgated_exponent, random_coding_exponent, sphere_packing_exponent,
};
use modlat_core::modlambda::modlambda_exponent;
use modlat_core::{ChannelSpec, RateNats};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Curve {
    #[serde(rename = "E_sp")]
    Sp,
    #[serde(rename = "E_r")]
    R,
    #[serde(rename = "E_x")]
    X,
    #[serde(rename = "E_awgn")]
    Awgn,
    #[serde(rename = "E_modlambda")]
    ModLambda,
}

impl Curve {
    pub const ALL: [Curve; 5] = [Curve::Sp, Curve::R, Curve::X, Curve::Awgn, Curve::ModLambda];

    pub fn column(self) -> &'static str {
        match self {
            Curve::Sp => "E_sp",
            Curve::R => "E_r",
            Curve::X => "E_x",
            Curve::Awgn => "E_awgn",
            Curve::ModLambda => "E_modlambda",
        }
    }

    pub fn normalized_column(self) -> String {
        format!("E_over_snr_{}", &self.column()[2..])
    }

    /// Exponent at `r`, `None` where the bound does not apply.
    pub fn value(self, r: RateNats, spec: &ChannelSpec) -> Result<Option<f64>> {
        Ok(Some(match self {
            Curve::Sp => sphere_packing_exponent(r, spec)?.value,
            Curve::R => random_coding_exponent(r, spec)?.value,
            Curve::X => {
                if r > critical_rates(spec).r_x {
                    return Ok(None);
                }
                expurgated_exponent(r, spec)?.value
            }
            Curve::Awgn => awgn_exponent(r, spec)?.value,
            Curve::ModLambda => modlambda_exponent(r, spec)?.exponent.value,
        }))
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for Curve {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix("e_").unwrap_or(&key);
        match key {
            "sp" => Ok(Curve::Sp),
            "r" => Ok(Curve::R),
            "x" => Ok(Curve::X),
            "awgn" => Ok(Curve::Awgn),
            "modlambda" => Ok(Curve::ModLambda),
            _ => Err(format!("unknown curve `{s}` (expected E_sp, E_r, E_x, E_awgn, E_modlambda)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateUnit {
    Nats,
    Bits,
}

/// `min:max:points`; `max` may be `C` for capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateGrid {
    pub min: f64,
    /// `None` stands for capacity.
    pub max: Option<f64>,
    pub points: usize,
    pub unit: RateUnit,
}

impl FromStr for RateGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, points] = parts[..] else {
            return Err(format!("grid `{s}` is not min:max:points"));
        };
        let min: f64 = min.trim().parse().map_err(|e| format!("grid min `{min}`: {e}"))?;
        let max = match max.trim() {
            "C" | "c" => None,
            m => Some(m.parse::<f64>().map_err(|e| format!("grid max `{m}`: {e}"))?),
        };
        let points: usize = points.trim().parse().map_err(|e| format!("grid points `{points}`: {e}"))?;
        Ok(RateGrid { min, max, points, unit: RateUnit::Nats })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRequest {
    pub spec: ChannelSpec,
    pub grid: RateGrid,
    pub curves: Vec<Curve>,
}

impl CurveRequest {
    /// Grid rates in nats, ascending. Fails unless `points >= 2` and
    /// `min < max <= C`.
    pub fn rates(&self) -> Result<Vec<f64>> {
        let c = self.spec.capacity_nats();
        let scale = match self.grid.unit {
            RateUnit::Nats => 1.0,
            RateUnit::Bits => std::f64::consts::LN_2,
        };
        let lo = self.grid.min * scale;
        let hi = self.grid.max.map_or(c, |m| m * scale);
        if self.grid.points < 2 {
            bail!("grid needs at least 2 points, got {}", self.grid.points);
        }
        if !(lo >= 0.0 && lo < hi) {
            bail!("grid needs 0 <= min < max, got {lo} and {hi} nats");
        }
        if hi > c * (1.0 + 1e-12) {
            bail!("grid max {hi} nats exceeds capacity {c}");
        }
        let hi = hi.min(c);
        let k = self.grid.points - 1;
        Ok((0..=k).map(|i| if i == k { hi } else { lo + (hi - lo) * i as f64 / k as f64 }).collect())
    }

    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["rate_nats", "rate_bits", "rate_over_C"].iter().map(|s| s.to_string()).collect();
        h.extend(self.curves.iter().map(|c| c.column().to_string()));
        h.extend(self.curves.iter().map(|c| c.normalized_column()));
        h
    }

    pub fn rows(&self) -> Result<Vec<Vec<Option<f64>>>> {
        let c = self.spec.capacity_nats();
        let snr = self.spec.snr;
        self.rates()?
            .into_iter()
            .map(|r| {
                let rate = RateNats(r);
                let vals: Vec<Option<f64>> = self
                    .curves
                    .iter()
                    .map(|cv| cv.value(rate, &self.spec).with_context(|| format!("{cv} at R = {r}")))
                    .collect::<Result<_>>()?;
                let mut row = vec![Some(r), Some(rate.bits()), Some(r / c)];
                row.extend(vals.iter().copied());
                row.extend(vals.iter().map(|v| v.map(|x| x / snr)));
                Ok(row)
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for row in self.rows()? {
            // `{}` on f64 is the shortest round-tripping decimal, independent of locale.
            w.write_record(row.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let header = self.header();
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows()?
            .into_iter()
            .map(|row| header.iter().cloned().zip(row.into_iter().map(|v| serde_json::json!(v))).collect())
            .collect();
        Ok(serde_json::json!({ "snr": self.spec.snr, "snr_db": self.spec.snr_db(), "rows": rows }))
    }
}
