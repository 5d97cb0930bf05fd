use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use super::forms::{SpacetimePoint, TwoForm};
use super::metric::MetricSpec;
use crate::{Error, Result};

/// Null frame `(∂_u, ∂_v, e_A, e_B)` as Cartesian coordinate components.
///
/// `∂_u = ½(∂_t − ∂_{r*})`, `∂_v = ½(∂_t + ∂_{r*})` are the coordinate vectors
/// of `u = t − r*`, `v = t + r*`; `e_A = r⁻¹∂_θ`, `e_B = (r sinθ)⁻¹∂_φ`.
/// On the axis the polar pair is taken at `φ = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NullFrame {
    pub vectors: [[f64; 4]; 4],
}

/// Null-frame components of a 2-form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FrameComponents {
    pub uv: f64,
    pub ua: f64,
    pub ub: f64,
    pub va: f64,
    pub vb: f64,
    pub ab: f64,
}

impl FrameComponents {
    pub fn max_abs(&self) -> f64 {
        [self.uv, self.ua, self.ub, self.va, self.vb, self.ab]
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

pub fn null_frame(spec: &MetricSpec, p: &SpacetimePoint) -> Result<NullFrame> {
    let r = p.r();
    if r == 0.0 {
        return Err(Error::FrameUndefined);
    }
    spec.check_radius(r)?;
    let f = spec.lapse(r);
    let n = [p.x[0] / r, p.x[1] / r, p.x[2] / r];
    let (st, ct) = p.theta().sin_cos();
    let phi = if p.x[0] == 0.0 && p.x[1] == 0.0 { 0.0 } else { p.phi() };
    let (sp, cp) = phi.sin_cos();
    let e_theta = [ct * cp, ct * sp, -st];
    let e_phi = [-sp, cp, 0.0];
    let mut v = [[0.0; 4]; 4];
    v[0][0] = 0.5;
    v[1][0] = 0.5;
    for i in 0..3 {
        v[0][i + 1] = -0.5 * f * n[i];
        v[1][i + 1] = 0.5 * f * n[i];
        v[2][i + 1] = e_theta[i];
        v[3][i + 1] = e_phi[i];
    }
    Ok(NullFrame { vectors: v })
}

impl NullFrame {
    fn matrix(&self) -> Matrix4<f64> {
        // Columns are frame vectors: E[(μ, a)] = e_a^μ.
        Matrix4::from_fn(|mu, a| self.vectors[a][mu])
    }

    /// The frame with `(e_A, e_B)` rotated by `χ`.
    pub fn rotated(&self, chi: f64) -> NullFrame {
        let (s, c) = chi.sin_cos();
        let mut out = *self;
        for mu in 0..4 {
            let a = self.vectors[2][mu];
            let b = self.vectors[3][mu];
            out.vectors[2][mu] = c * a + s * b;
            out.vectors[3][mu] = -s * a + c * b;
        }
        out
    }

    pub fn components(&self, f: &TwoForm) -> FrameComponents {
        let m = f.to_matrix();
        let contract = |a: usize, b: usize| {
            let (ea, eb) = (&self.vectors[a], &self.vectors[b]);
            let mut acc = 0.0;
            for mu in 0..4 {
                for nu in 0..4 {
                    acc += ea[mu] * eb[nu] * m[mu][nu];
                }
            }
            acc
        };
        FrameComponents {
            uv: contract(0, 1),
            ua: contract(0, 2),
            ub: contract(0, 3),
            va: contract(1, 2),
            vb: contract(1, 3),
            ab: contract(2, 3),
        }
    }

    /// Cartesian 2-form with the given frame components.
    pub fn to_cartesian(&self, c: &FrameComponents) -> Result<TwoForm> {
        let inv = self.matrix().try_inverse().ok_or(Error::Degenerate)?;
        let mut fr = Matrix4::zeros();
        let entries = [(0, 1, c.uv), (0, 2, c.ua), (0, 3, c.ub), (1, 2, c.va), (1, 3, c.vb), (2, 3, c.ab)];
        for (a, b, v) in entries {
            fr[(a, b)] = v;
            fr[(b, a)] = -v;
        }
        let cart = inv.transpose() * fr * inv;
        let mut out = TwoForm::ZERO;
        for a in 0..4 {
            for b in (a + 1)..4 {
                out.set(a, b, 0.5 * (cart[(a, b)] - cart[(b, a)]));
            }
        }
        Ok(out)
    }
}

pub fn frame_components(f: &TwoForm, frame: &NullFrame) -> FrameComponents {
    frame.components(f)
}
