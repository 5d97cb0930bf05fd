use serde::{Deserialize, Serialize};

use crate::geometry::{null_frame, FrameComponents, MetricSpec, SpacetimePoint, TwoForm};
use crate::tensorcalc::TwoFormField;
use crate::{Error, Result};

use super::harmonics::{zonal, SphereQuadrature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// Electric type: `F_uv ∝ Y`, `F_uA, F_vA ∝ ∂_θY`.
    Even,
    /// Magnetic type: `F_AB ∝ Y`, `F_uB, F_vB ∝ ∂_θY`.
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeIndex {
    pub l: u32,
    pub m: i32,
    pub parity: Parity,
}

impl ModeIndex {
    pub fn axisymmetric(l: u32, parity: Parity) -> Self {
        Self { l, m: 0, parity }
    }
}

/// Radial coefficients of one `m = 0` mode in the null frame: `middle` multiplies
/// `Y_l0`, `ua`/`va` multiply `∂_θY_l0` in the tangential slot selected by parity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModeAmplitudes {
    pub middle: f64,
    pub ua: f64,
    pub va: f64,
}

impl ModeAmplitudes {
    /// Amplitudes from the master function `ψ` and its null derivatives
    /// `∂_uψ`, `∂_vψ` at areal radius `r`, lapse `f`.
    ///
    /// Odd parity comes from the potential `A = ψ sinθ ∂_θY dφ`:
    /// `F_AB = −l(l+1)ψY/r²`, `F_uB = ∂_uψ ∂_θY/r`, `F_vB = ∂_vψ ∂_θY/r`.
    /// Even parity is its dual: `F_uv = −½f l(l+1)ψY/r²`, `F_uA = ∂_uψ ∂_θY/r`,
    /// `F_vA = −∂_vψ ∂_θY/r`.
    pub fn from_master(parity: Parity, l: u32, r: f64, lapse: f64, psi: f64, du_psi: f64, dv_psi: f64) -> Self {
        let ll = (l * (l + 1)) as f64;
        match parity {
            Parity::Odd => Self { middle: -ll * psi / (r * r), ua: du_psi / r, va: dv_psi / r },
            Parity::Even => Self { middle: -0.5 * lapse * ll * psi / (r * r), ua: du_psi / r, va: -dv_psi / r },
        }
    }
}

fn frame_values(mode: &ModeIndex, amps: &ModeAmplitudes, theta: f64) -> FrameComponents {
    let (y, dy) = zonal(mode.l, theta);
    let mut c = FrameComponents::default();
    match mode.parity {
        Parity::Even => {
            c.uv = amps.middle * y;
            c.ua = amps.ua * dy;
            c.va = amps.va * dy;
        }
        Parity::Odd => {
            c.ab = amps.middle * y;
            c.ub = amps.ua * dy;
            c.vb = amps.va * dy;
        }
    }
    c
}

/// Cartesian 2-form of one `m = 0` mode at `p`.
pub fn mode_sample_to_tensor(mode: &ModeIndex, amps: &ModeAmplitudes, spec: &MetricSpec, p: &SpacetimePoint) -> Result<TwoForm> {
    if mode.l == 0 {
        return Err(Error::InvalidMode { l: 0, s: 1 });
    }
    if mode.m != 0 {
        return Err(Error::Unsupported(format!("tensor assembly for m = {}", mode.m)));
    }
    let frame = null_frame(spec, p)?;
    frame.to_cartesian(&frame_values(mode, amps, p.theta()))
}

/// Projects a field onto `(l, m = 0, parity)` on the sphere `(t, r)`.
pub fn project_mode(
    field: &impl TwoFormField,
    mode: &ModeIndex,
    spec: &MetricSpec,
    t: f64,
    r: f64,
    quadrature_n: usize,
) -> Result<ModeAmplitudes> {
    let q = SphereQuadrature::new(quadrature_n);
    let ll = (mode.l * (mode.l + 1)) as f64;
    let mut out = ModeAmplitudes::default();
    for &(th, ph, w) in &q.nodes {
        let p = crate::geometry::SpacetimePoint::from_polar(t, r, th, ph);
        let c = null_frame(spec, &p)?.components(&field.eval(&p)?);
        let (y, dy) = zonal(mode.l, th);
        let (mid, ua, va) = match mode.parity {
            Parity::Even => (c.uv, c.ua, c.va),
            Parity::Odd => (c.ab, c.ub, c.vb),
        };
        out.middle += w * mid * y;
        out.ua += w * ua * dy / ll;
        out.va += w * va * dy / ll;
    }
    Ok(out)
}
