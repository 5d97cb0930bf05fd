use crate::geometry::{Family, MetricSpec};
use crate::{Error, Result};

/// Effective potential of the spin-`s` master equation on a spherically
/// symmetric background: `f·(l(l+1)/r² + (1 − s²)·2M/r³)`.
pub fn rw_potential(spec: &MetricSpec, l: u32, s: u32, r: f64) -> Result<f64> {
    check_mode(l, s)?;
    match spec.family {
        Family::Minkowski | Family::Schwarzschild => {
            spec.check_radius(r)?;
            Ok(potential_with_lapse(l, s, spec.mass, r, spec.lapse(r)))
        }
        Family::GeneralNormalized => Err(Error::Unsupported(
            "master-equation potential is defined on Minkowski and Schwarzschild only".into(),
        )),
    }
}

pub(crate) fn check_mode(l: u32, s: u32) -> Result<()> {
    if s > 1 || l < s {
        return Err(Error::InvalidMode { l, s });
    }
    Ok(())
}

/// Same as [`rw_potential`] with the lapse supplied, for grids reaching deep
/// toward the horizon where `1 − 2M/r` is not recoverable from `r`.
pub(crate) fn potential_with_lapse(l: u32, s: u32, mass: f64, r: f64, lapse: f64) -> f64 {
    let ll = (l * (l + 1)) as f64;
    let mass_term = (1.0 - (s * s) as f64) * 2.0 * mass / (r * r * r);
    lapse * (ll / (r * r) + mass_term)
}
