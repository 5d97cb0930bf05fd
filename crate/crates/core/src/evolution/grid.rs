use serde::{Deserialize, Serialize};

use crate::geometry::{inverse_tortoise_with_lapse, Family, MetricSpec};
use crate::{Error, Result};

use super::potential::{check_mode, potential_with_lapse};

/// Uniform tortoise grid with its time step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub rstar_min: f64,
    pub rstar_max: f64,
    pub n: usize,
    pub dr: f64,
    pub dt: f64,
}

impl Grid1D {
    pub fn new(rstar_min: f64, rstar_max: f64, n: usize, cfl: f64) -> Result<Self> {
        if n < 8 || !(rstar_max > rstar_min) {
            return Err(Error::Input(format!("grid needs n ≥ 8 and r*_max > r*_min (got n = {n})")));
        }
        let dr = (rstar_max - rstar_min) / (n - 1) as f64;
        let grid = Self { rstar_min, rstar_max, n, dr, dt: cfl * dr };
        grid.check_cfl()?;
        Ok(grid)
    }

    /// Grid with spacing `dr` (rounded so that both ends are nodes).
    pub fn with_spacing(rstar_min: f64, rstar_max: f64, dr: f64, cfl: f64) -> Result<Self> {
        let n = ((rstar_max - rstar_min) / dr).round() as usize + 1;
        Self::new(rstar_min, rstar_max, n, cfl)
    }

    pub fn check_cfl(&self) -> Result<()> {
        let limit = 0.5 * self.dr;
        if !(self.dt > 0.0) || self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt: self.dt, limit });
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.rstar_min + i as f64 * self.dr
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpatialOrder {
    #[serde(rename = "2")]
    Second,
    #[serde(rename = "4")]
    Fourth,
}

impl Default for SpatialOrder {
    fn default() -> Self {
        SpatialOrder::Second
    }
}

/// Treatment of the inner end of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerBoundary {
    /// Sommerfeld condition toward a horizon at `r* → −∞`.
    Radiative,
    /// Regular center `r = 0` of flat space, where `ψ`, `∂_uψ`, `∂_vψ` vanish for `l ≥ 1`.
    Origin,
}

/// Areal radius, lapse and potentials sampled on the grid.
#[derive(Clone, Debug)]
pub struct Background {
    pub r: Vec<f64>,
    pub lapse: Vec<f64>,
    /// Potential driving `ψ`.
    pub evolution_potential: Vec<f64>,
    /// Potential entering the null-transport equations of the extremes.
    pub transport_potential: Vec<f64>,
    pub inner: InnerBoundary,
}

impl Background {
    /// `potential_spin` selects the potential used for `ψ`; `spin` the one used
    /// for the transported extremes. They differ only in negative controls.
    pub fn new(spec: &MetricSpec, grid: &Grid1D, l: u32, spin: u32, potential_spin: u32) -> Result<Self> {
        check_mode(l, spin)?;
        check_mode(l, potential_spin)?;
        let inner = match spec.family {
            Family::Schwarzschild => InnerBoundary::Radiative,
            Family::Minkowski if grid.rstar_min == 0.0 => InnerBoundary::Origin,
            Family::Minkowski if grid.rstar_min > 0.0 => InnerBoundary::Radiative,
            Family::Minkowski => return Err(Error::Domain { r: grid.rstar_min, r_min: 0.0 }),
            Family::GeneralNormalized => {
                return Err(Error::Unsupported("evolution runs on Minkowski and Schwarzschild only".into()))
            }
        };
        let mut bg = Self {
            r: Vec::with_capacity(grid.n),
            lapse: Vec::with_capacity(grid.n),
            evolution_potential: Vec::with_capacity(grid.n),
            transport_potential: Vec::with_capacity(grid.n),
            inner,
        };
        for i in 0..grid.n {
            let x = grid.x(i);
            if inner == InnerBoundary::Origin && i == 0 {
                bg.r.push(0.0);
                bg.lapse.push(1.0);
                bg.evolution_potential.push(0.0);
                bg.transport_potential.push(0.0);
                continue;
            }
            let (r, f) = inverse_tortoise_with_lapse(spec, x)?;
            bg.r.push(r);
            bg.lapse.push(f);
            bg.evolution_potential.push(potential_with_lapse(l, potential_spin, spec.mass, r, f));
            bg.transport_potential.push(potential_with_lapse(l, spin, spec.mass, r, f));
        }
        Ok(bg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cfl_guard() {
        assert!(Grid1D::new(0.0, 10.0, 101, 0.5).is_ok());
        assert!(matches!(Grid1D::new(0.0, 10.0, 101, 0.51), Err(Error::Cfl { .. })));
        let g = Grid1D::with_spacing(-100.0, 100.0, 0.1, 0.5).unwrap();
        assert_eq!(g.n, 2001);
        assert!((g.x(1000)).abs() < 1e-12);
    }

    #[test]
    fn background_reaches_deep_toward_horizon() {
        let spec = MetricSpec::schwarzschild(1.0);
        let g = Grid1D::with_spacing(-1000.0, 100.0, 1.0, 0.5).unwrap();
        let bg = Background::new(&spec, &g, 1, 1, 1).unwrap();
        assert!(bg.lapse[0] > 0.0 && bg.lapse[0] < 1e-100);
        assert!(bg.evolution_potential.iter().all(|v| v.is_finite() && *v >= 0.0));
        let peak = bg.evolution_potential.iter().cloned().fold(0.0, f64::max);
        assert!((peak - 2.0 / 27.0).abs() < 2e-3, "l = 1 barrier height {peak}");
    }

    #[test]
    fn flat_grid_must_not_cross_origin() {
        let g = Grid1D::new(-1.0, 10.0, 50, 0.5).unwrap();
        assert!(Background::new(&MetricSpec::minkowski(), &g, 1, 1, 1).is_err());
        let g = Grid1D::new(0.0, 10.0, 50, 0.5).unwrap();
        let bg = Background::new(&MetricSpec::minkowski(), &g, 1, 1, 1).unwrap();
        assert_eq!(bg.inner, InnerBoundary::Origin);
    }
}
