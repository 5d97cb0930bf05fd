use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use super::coefficient::{RadialFn, SpatialFn};
use super::forms::SpacetimePoint;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Minkowski,
    Schwarzschild,
    GeneralNormalized,
}

/// One short-range metric term, added symmetrically to `g_{αβ}` and `g_{βα}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShortRangeTerm {
    pub alpha: usize,
    pub beta: usize,
    pub profile: SpatialFn,
}

/// A stationary background in normalized Cartesian coordinates.
///
/// * `Minkowski`: `η = diag(−1, 1, 1, 1)`.
/// * `Schwarzschild`: `−f dt² + f⁻¹ dr² + r² dω²`, `f = 1 − 2M/r`, areal `r`.
/// * `GeneralNormalized`: `−dt² + dr² + r²(1 + g_ω(r)) dω² + g_sr`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub family: Family,
    #[serde(default)]
    pub mass: f64,
    #[serde(default = "zero_fn")]
    pub g_omega: RadialFn,
    #[serde(default)]
    pub g_sr: Vec<ShortRangeTerm>,
    #[serde(default)]
    pub domain_r_min: f64,
}

fn zero_fn() -> RadialFn {
    RadialFn::Zero
}

/// Metric, inverse and volume factor at a point.
#[derive(Clone, Copy, Debug)]
pub struct MetricSample {
    pub g: Matrix4<f64>,
    pub inv: Matrix4<f64>,
    pub sqrt_neg_det: f64,
}

impl MetricSpec {
    pub fn minkowski() -> Self {
        Self {
            family: Family::Minkowski,
            mass: 0.0,
            g_omega: RadialFn::Zero,
            g_sr: Vec::new(),
            domain_r_min: 0.0,
        }
    }

    pub fn schwarzschild(mass: f64) -> Self {
        Self {
            family: Family::Schwarzschild,
            mass,
            g_omega: RadialFn::Zero,
            g_sr: Vec::new(),
            domain_r_min: 2.0 * mass,
        }
    }

    pub fn general_normalized(g_omega: RadialFn, g_sr: Vec<ShortRangeTerm>, domain_r_min: f64) -> Self {
        Self { family: Family::GeneralNormalized, mass: 0.0, g_omega, g_sr, domain_r_min }
    }

    /// A normal-form metric with `g_ω = a/r` plus an anisotropic `O(r^{-2})`
    /// short-range part; the standard non-spherical test background.
    pub fn perturbed_catalog_entry() -> Self {
        Self::general_normalized(
            RadialFn::Power { amplitude: 0.5, power: -1 },
            vec![
                ShortRangeTerm {
                    alpha: 1,
                    beta: 3,
                    profile: SpatialFn::AnisotropicInverseSquare { amplitude: 0.8, a: 0, b: 2 },
                },
                ShortRangeTerm {
                    alpha: 0,
                    beta: 2,
                    profile: SpatialFn::DipoleInverseSquare { amplitude: 0.3, a: 0 },
                },
            ],
            1.0,
        )
    }

    pub fn is_spherically_symmetric(&self) -> bool {
        self.g_sr.is_empty()
    }

    /// Smallest admissible areal radius (strict bound).
    pub fn excision_radius(&self) -> f64 {
        match self.family {
            Family::Schwarzschild => self.domain_r_min.max(2.0 * self.mass),
            _ => self.domain_r_min,
        }
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        let r_min = self.excision_radius();
        if !(r > r_min) {
            return Err(Error::Domain { r, r_min });
        }
        Ok(())
    }

    /// Lapse-type factor `f(r)` with `dr*/dr = 1/f`; identically 1 outside Schwarzschild.
    pub fn lapse(&self, r: f64) -> f64 {
        match self.family {
            Family::Schwarzschild => 1.0 - 2.0 * self.mass / r,
            _ => 1.0,
        }
    }

    /// Diagonal metric in polar coordinates `(t, r, θ, φ)` for the
    /// spherically symmetric part, as `(g_tt, g_rr, g_θθ / sin⁰, g_φφ / sin²θ)`.
    pub fn polar_diagonal(&self, r: f64) -> [f64; 4] {
        match self.family {
            Family::Minkowski => [-1.0, 1.0, r * r, r * r],
            Family::Schwarzschild => {
                let f = self.lapse(r);
                [-f, 1.0 / f, r * r, r * r]
            }
            Family::GeneralNormalized => {
                let w = 1.0 + self.g_omega.eval(r);
                [-1.0, 1.0, r * r * w, r * r * w]
            }
        }
    }

    /// Metric components only (no inverse); used by finite-difference stencils.
    pub fn metric_matrix(&self, p: &SpacetimePoint) -> Result<Matrix4<f64>> {
        let r = p.r();
        self.check_radius(r)?;
        let mut g = Matrix4::zeros();
        if r == 0.0 {
            g[(0, 0)] = -1.0;
            for i in 1..4 {
                g[(i, i)] = 1.0;
            }
            return Ok(g);
        }
        let n = [p.x[0] / r, p.x[1] / r, p.x[2] / r];
        let (gtt, radial, angular) = match self.family {
            Family::Minkowski => (-1.0, 1.0, 1.0),
            Family::Schwarzschild => {
                let f = self.lapse(r);
                (-f, 1.0 / f, 1.0)
            }
            Family::GeneralNormalized => (-1.0, 1.0, 1.0 + self.g_omega.eval(r)),
        };
        g[(0, 0)] = gtt;
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                g[(i + 1, j + 1)] = radial * n[i] * n[j] + angular * (delta - n[i] * n[j]);
            }
        }
        for term in &self.g_sr {
            let v = term.profile.eval(p.x);
            if term.alpha == term.beta {
                g[(term.alpha, term.alpha)] += v;
            } else {
                g[(term.alpha, term.beta)] += v;
                g[(term.beta, term.alpha)] += v;
            }
        }
        Ok(g)
    }
}

/// `g_{αβ}`, `g^{αβ}` and `√(−g)` at `p`.
pub fn metric_components(spec: &MetricSpec, p: &SpacetimePoint) -> Result<MetricSample> {
    let g = spec.metric_matrix(p)?;
    let det = g.determinant();
    if !(det < 0.0) || !det.is_finite() {
        return Err(Error::Degenerate);
    }
    let inv = g.try_inverse().ok_or(Error::Degenerate)?;
    Ok(MetricSample { g, inv, sqrt_neg_det: (-det).sqrt() })
}

/// Jacobian `∂x^μ_cart / ∂y^ν` for polar coordinates `y = (t, r, θ, φ)`.
pub fn polar_jacobian(p: &SpacetimePoint) -> Matrix4<f64> {
    let (r, th, ph) = (p.r(), p.theta(), p.phi());
    let (st, ct) = th.sin_cos();
    let (sp, cp) = ph.sin_cos();
    let mut j = Matrix4::zeros();
    j[(0, 0)] = 1.0;
    j[(1, 1)] = st * cp;
    j[(2, 1)] = st * sp;
    j[(3, 1)] = ct;
    j[(1, 2)] = r * ct * cp;
    j[(2, 2)] = r * ct * sp;
    j[(3, 2)] = -r * st;
    j[(1, 3)] = -r * st * sp;
    j[(2, 3)] = r * st * cp;
    j
}

/// Covariant components of a symmetric or antisymmetric tensor in polar coordinates.
pub fn to_polar(m: &Matrix4<f64>, p: &SpacetimePoint) -> Matrix4<f64> {
    let j = polar_jacobian(p);
    j.transpose() * m * j
}
