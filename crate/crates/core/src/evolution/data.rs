use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::grid::Grid1D;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Gaussian,
    /// `exp(1 − 1/(1 − ξ²))` with `ξ = (r* − r*_c)/(5σ)`: smooth, supported in `|ξ| < 1`.
    CompactBump,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    TimeSymmetric,
    Ingoing,
    Outgoing,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialDataSpec {
    pub profile: Profile,
    pub center: f64,
    pub sigma: f64,
    pub amplitude: f64,
    pub symmetry: Symmetry,
}

impl Default for InitialDataSpec {
    fn default() -> Self {
        Self { profile: Profile::Gaussian, center: 50.0, sigma: 4.0, amplitude: 1.0, symmetry: Symmetry::TimeSymmetric }
    }
}

fn bump(xi: f64) -> (f64, f64) {
    if xi.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - xi * xi;
    let v = (1.0 - 1.0 / q).exp();
    (v, -2.0 * xi / (q * q) * v)
}

/// Values `(ψ, π, ∂_vψ, ∂_uψ)` of the initial data at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DataSample {
    pub psi: f64,
    pub pi: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
}

impl InitialDataSpec {
    /// Profile value and `r*`-derivative.
    pub fn shape(&self, x: f64) -> (f64, f64) {
        let a = self.amplitude;
        match self.profile {
            Profile::Gaussian => {
                let z = (x - self.center) / self.sigma;
                let g = a * (-0.5 * z * z).exp();
                (g, -z / self.sigma * g)
            }
            Profile::CompactBump => {
                let w = 5.0 * self.sigma;
                let (v, dv) = bump((x - self.center) / w);
                (a * v, a * dv / w)
            }
        }
    }

    pub fn sample(&self, x: f64) -> DataSample {
        let (g, dg) = self.shape(x);
        let pi = match self.symmetry {
            Symmetry::TimeSymmetric => 0.0,
            Symmetry::Ingoing => dg,
            Symmetry::Outgoing => -dg,
        };
        DataSample { psi: g, pi, phi_plus: 0.5 * (pi + dg), phi_minus: 0.5 * (pi - dg) }
    }

    /// `[r*_c − 5σ, r*_c + 5σ]`.
    pub fn support(&self) -> (f64, f64) {
        (self.center - 5.0 * self.sigma, self.center + 5.0 * self.sigma)
    }

    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        if !(self.sigma > 0.0) || !self.amplitude.is_finite() || !self.center.is_finite() {
            return Err(Error::Input("initial data needs σ > 0 and finite center/amplitude".into()));
        }
        let (lo, hi) = self.support();
        if lo <= grid.rstar_min || hi >= grid.rstar_max {
            return Err(Error::Input(format!(
                "data support [{lo}, {hi}] not inside grid ({}, {})",
                grid.rstar_min, grid.rstar_max
            )));
        }
        Ok(())
    }
}

/// Mode-level source `A·b((r* − r*_c)/w_r)·b((t − t_c)/w_t)` added to the
/// master equation, with `b` the compact bump.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub amplitude: f64,
    pub center_rstar: f64,
    pub width_rstar: f64,
    pub center_t: f64,
    pub width_t: f64,
}

impl SourceSpec {
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        let (bx, _) = bump((x - self.center_rstar) / self.width_rstar);
        if bx == 0.0 {
            return 0.0;
        }
        let (bt, _) = bump((t - self.center_t) / self.width_t);
        self.amplitude * bx * bt
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width_rstar > 0.0 && self.width_t > 0.0) {
            return Err(Error::Input("source widths must be positive".into()));
        }
        if self.center_t - self.width_t < 0.0 {
            return Err(Error::Input("source must be supported in t ≥ 0".into()));
        }
        Ok(())
    }
}
