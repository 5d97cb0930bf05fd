use crate::geometry::{Family, MetricSpec, SpacetimePoint, TwoForm};
use crate::tensorcalc::TwoFormField;
use crate::{Error, Result};

use super::projection::{radial_form, RadialPart};

/// Stationary `l = 0` field with prescribed charges, decaying at infinity.
#[derive(Clone, Debug)]
pub struct ChargeSector {
    pub q_e: f64,
    pub q_m: f64,
    spec: MetricSpec,
}

/// Unique stationary charge-sector solution with `d F̄ = 0 = d⋆F̄` and the given charges.
///
/// `radial_source_norm` is the size of any radial source supplied by the caller; only
/// the homogeneous problem is handled here.
pub fn charge_sector_evolution(q_e: f64, q_m: f64, spec: &MetricSpec, radial_source_norm: f64) -> Result<ChargeSector> {
    if radial_source_norm != 0.0 {
        return Err(Error::Unsupported(
            "inhomogeneous radial sector; use the fixed-time resolvent solver".into(),
        ));
    }
    if !spec.is_spherically_symmetric() {
        return Err(Error::Unsupported("charge sector on a metric with short-range terms".into()));
    }
    Ok(ChargeSector { q_e, q_m, spec: spec.clone() })
}

impl ChargeSector {
    /// `F̄_tr = q_e / (r²(1 + g_ω))` (the Schwarzschild lapse cancels), `F̄_area = q_m`.
    pub fn profile(&self, r: f64) -> Result<RadialPart> {
        self.spec.check_radius(r)?;
        let w = match self.spec.family {
            Family::GeneralNormalized => 1.0 + self.spec.g_omega.eval(r),
            _ => 1.0,
        };
        Ok(RadialPart { tr: self.q_e / (r * r * w), area: self.q_m })
    }
}

impl TwoFormField for ChargeSector {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        Ok(radial_form(&self.profile(p.r())?, p))
    }
}
