use serde::{Deserialize, Serialize};

use crate::evolution::{component_series, reconstruct_extremes, LineKind, Trajectory};
use crate::{Error, Result};

use super::fit::{fit_exponent, power_slope, DecayFit, WindowPolicy};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeelingConfig {
    /// Outgoing line `t − r* = u₀` used for the `r`-slopes.
    #[serde(default = "default_u0")]
    pub u0: f64,
    #[serde(default = "default_r_range")]
    pub r_range: [f64; 2],
    /// Areal radius of the probe carrying the radiation field.
    #[serde(default = "default_radiation_radius")]
    pub radiation_radius: f64,
    #[serde(default)]
    pub u_policy: WindowPolicy,
}

fn default_u0() -> f64 {
    50.0
}
fn default_r_range() -> [f64; 2] {
    [100.0, 1000.0]
}
fn default_radiation_radius() -> f64 {
    1000.0
}

impl Default for PeelingConfig {
    fn default() -> Self {
        Self {
            u0: default_u0(),
            r_range: default_r_range(),
            radiation_radius: default_radiation_radius(),
            u_policy: WindowPolicy::default(),
        }
    }
}

/// Expected `r`-slopes along an outgoing line.
pub const PEELING_TARGETS: [(&str, f64); 4] = [("F_uA", -1.0), ("F_uv", -2.0), ("F_AB", -2.0), ("F_vA", -3.0)];

/// Expected `u`-slope of the radiation field `r·F_uA`.
pub const RADIATION_TARGET: f64 = -3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub component: String,
    pub slope: f64,
    pub std_error: f64,
    pub target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeelingTable {
    pub u0: f64,
    pub r_range: [f64; 2],
    pub r_slopes: Vec<SlopeFit>,
    /// Radiation-field decay; its `exponent` is minus the `u`-slope.
    pub radiation: Option<DecayFit>,
    pub radiation_error: Option<String>,
}

impl PeelingTable {
    pub fn slope(&self, component: &str) -> Option<&SlopeFit> {
        self.r_slopes.iter().find(|s| s.component == component)
    }

    pub fn radiation_slope(&self) -> Option<f64> {
        self.radiation.as_ref().map(|f| -f.exponent)
    }
}

/// Power-law slopes of the null-frame components along `u = u₀` and of the
/// radiation field against `u` at fixed large `r`.
pub fn peeling_scan(trajectory: &Trajectory, config: &PeelingConfig) -> Result<PeelingTable> {
    let [r_lo, r_hi] = config.r_range;
    if !(r_hi >= 10.0 * r_lo && r_lo > 0.0) {
        return Err(Error::InsufficientSpan(format!("r-range [{r_lo}, {r_hi}] is shorter than a decade")));
    }
    let line = trajectory
        .outgoing(config.u0)
        .ok_or_else(|| Error::Input(format!("no outgoing line recorded at u = {}", config.u0)))?;
    let samples = component_series(trajectory, line);
    let lowest = samples.iter().map(|s| s.r).fold(f64::INFINITY, f64::min);
    let highest = samples.iter().map(|s| s.r).fold(0.0, f64::max);
    if !(lowest <= r_lo && highest >= r_hi) {
        return Err(Error::InsufficientSpan(format!(
            "line u = {} covers r ∈ [{lowest:.1}, {highest:.1}], range [{r_lo}, {r_hi}] requested",
            config.u0
        )));
    }
    let mut r_slopes = Vec::new();
    for (name, target) in PEELING_TARGETS {
        let series: Vec<(f64, f64)> = samples.iter().filter_map(|s| Some((s.r, s.column(name)?))).collect();
        if series.iter().filter(|(r, _)| *r >= r_lo && *r <= r_hi).any(|(_, v)| *v == 0.0) {
            return Err(Error::Input(format!("{name} vanishes on the scan range")));
        }
        let (slope, std_error) = power_slope(&series, r_lo, r_hi);
        r_slopes.push(SlopeFit { component: name.to_string(), slope, std_error, target });
    }

    let (radiation, radiation_error) = match radiation_series(trajectory, config.radiation_radius) {
        Ok(series) => match fit_exponent(&series, &config.u_policy) {
            Ok(fit) => (Some(fit), None),
            Err(e) => (None, Some(e.to_string())),
        },
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(PeelingTable { u0: config.u0, r_range: config.r_range, r_slopes, radiation, radiation_error })
}

/// `(u, r·F_uA)` at the probe whose areal radius is within 1% of `radius`.
pub fn radiation_series(trajectory: &Trajectory, radius: f64) -> Result<Vec<(f64, f64)>> {
    let extremes = reconstruct_extremes(trajectory)?;
    let probe = extremes
        .iter()
        .filter(|e| matches!(e.kind, LineKind::Probe(_)))
        .find(|e| e.samples.first().is_some_and(|s| (s.r - radius).abs() <= 1e-2 * radius))
        .ok_or_else(|| Error::Input(format!("no probe recorded at r ≈ {radius}")))?;
    Ok(probe.samples.iter().filter(|s| s.u > 0.0).map(|s| (s.u, s.r_f_ua)).collect())
}
