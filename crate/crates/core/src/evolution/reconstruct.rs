use serde::{Deserialize, Serialize};

use crate::modes::{ModeAmplitudes, Parity};
use crate::{Error, Result};

use super::run::{LineKind, LineSample, LineSeries, Trajectory};

/// Null-frame component amplitudes of one mode at a recorded point, with the
/// angular factors (`Y`, `∂_θY`) divided out.
///
/// A single master function describes both parities, the even field being the
/// dual of the odd one, so `f_uv` (even) and `f_ab` (odd) are both reported.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSample {
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub r: f64,
    pub psi: f64,
    pub f_uv: f64,
    pub f_ab: f64,
    pub f_ua: f64,
    pub f_va: f64,
}

impl ComponentSample {
    pub fn from_line(l: u32, parity: Parity, s: &LineSample) -> Self {
        let odd = ModeAmplitudes::from_master(Parity::Odd, l, s.r, s.lapse, s.psi, s.phi_minus, s.phi_plus);
        let even = ModeAmplitudes::from_master(Parity::Even, l, s.r, s.lapse, s.psi, s.phi_minus, s.phi_plus);
        let own = if parity == Parity::Odd { odd } else { even };
        Self {
            t: s.t,
            u: s.u(),
            v: s.v(),
            r: s.r,
            psi: s.psi,
            f_uv: even.middle,
            f_ab: odd.middle,
            f_ua: own.ua,
            f_va: own.va,
        }
    }

    /// Column value by name: `psi`, `F_uv`, `F_AB`, `F_uA`, `F_vA`.
    pub fn column(&self, name: &str) -> Option<f64> {
        Some(match name {
            "psi" => self.psi,
            "F_uv" => self.f_uv,
            "F_AB" => self.f_ab,
            "F_uA" => self.f_ua,
            "F_vA" => self.f_va,
            _ => return None,
        })
    }
}

pub const COMPONENT_COLUMNS: [&str; 4] = ["F_uv", "F_AB", "F_uA", "F_vA"];

/// Component samples along a recorded line (points at `r = 0` are skipped).
pub fn component_series(trajectory: &Trajectory, series: &LineSeries) -> Vec<ComponentSample> {
    let mode = &trajectory.config.mode;
    series
        .samples
        .iter()
        .filter(|s| s.r > 0.0)
        .map(|s| ComponentSample::from_line(mode.l, mode.parity, s))
        .collect()
}

/// `r·F_uA` and `r·F_vA` mode amplitudes at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeSample {
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub r: f64,
    pub r_f_ua: f64,
    pub r_f_va: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeSeries {
    pub kind: LineKind,
    pub samples: Vec<ExtremeSample>,
}

/// Extreme-component amplitudes along every recorded line.
///
/// `∂_vψ` and `∂_uψ` are carried by the evolution as fields transported along
/// ingoing and outgoing characteristics, `∂_u(∂_vψ) = ∂_v(∂_uψ) = −¼Vψ`, which
/// is the null-line integration of the extreme components with the angular
/// operators reduced to their mode multipliers.
pub fn reconstruct_extremes(trajectory: &Trajectory) -> Result<Vec<ExtremeSeries>> {
    if trajectory.config.source.is_some() {
        return Err(Error::Input("extreme reconstruction needs a homogeneous run".into()));
    }
    let sign = if trajectory.config.mode.parity == Parity::Odd { 1.0 } else { -1.0 };
    Ok(trajectory
        .probes
        .iter()
        .chain(&trajectory.null_lines)
        .map(|series| ExtremeSeries {
            kind: series.kind,
            samples: series
                .samples
                .iter()
                .map(|s| ExtremeSample {
                    t: s.t,
                    u: s.u(),
                    v: s.v(),
                    r: s.r,
                    r_f_ua: s.phi_minus,
                    r_f_va: sign * s.phi_plus,
                })
                .collect(),
        })
        .collect())
}
