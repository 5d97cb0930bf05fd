use nalgebra::Matrix4;

use super::forms::SpacetimePoint;
use super::metric::MetricSpec;
use crate::Result;

/// `Γ^ρ_{μν}` stored as `[ρ][μ][ν]`.
pub type Christoffel = [[[f64; 4]; 4]; 4];

/// Finite-difference curvature at a point.
#[derive(Clone, Debug)]
pub struct Curvature {
    /// `R^ρ_{σμν}` with `[∇_μ, ∇_ν]V^ρ = R^ρ_{σμν} V^σ`.
    pub riemann: [[[[f64; 4]; 4]; 4]; 4],
    /// `R_{σν} = R^ρ_{σρν}`.
    pub ricci: [[f64; 4]; 4],
    pub metric: Matrix4<f64>,
    pub inverse: Matrix4<f64>,
    pub kretschmann: f64,
    pub ricci_scalar: f64,
}

/// Second-order centered Christoffel symbols from metric samples at `p ± h e_μ`.
pub fn christoffel_fd(spec: &MetricSpec, p: &SpacetimePoint, h: f64) -> Result<Christoffel> {
    let mut dg = [Matrix4::zeros(); 4];
    for (mu, slot) in dg.iter_mut().enumerate() {
        let hi = spec.metric_matrix(&p.shifted(mu, h))?;
        let lo = spec.metric_matrix(&p.shifted(mu, -h))?;
        *slot = (hi - lo) / (2.0 * h);
    }
    assemble(spec, p, &dg)
}

/// Fourth-order variant of [`christoffel_fd`] (stencil radius `2h`).
pub fn christoffel_fd4(spec: &MetricSpec, p: &SpacetimePoint, h: f64) -> Result<Christoffel> {
    let mut dg = [Matrix4::zeros(); 4];
    for (mu, slot) in dg.iter_mut().enumerate() {
        let m2 = spec.metric_matrix(&p.shifted(mu, -2.0 * h))?;
        let m1 = spec.metric_matrix(&p.shifted(mu, -h))?;
        let p1 = spec.metric_matrix(&p.shifted(mu, h))?;
        let p2 = spec.metric_matrix(&p.shifted(mu, 2.0 * h))?;
        *slot = (m2 - p2 + (p1 - m1) * 8.0) / (12.0 * h);
    }
    assemble(spec, p, &dg)
}

fn assemble(spec: &MetricSpec, p: &SpacetimePoint, dg: &[Matrix4<f64>; 4]) -> Result<Christoffel> {
    let g0 = spec.metric_matrix(p)?;
    let inv = g0.try_inverse().ok_or(crate::Error::Degenerate)?;
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for rho in 0..4 {
        for mu in 0..4 {
            for nu in mu..4 {
                let mut acc = 0.0;
                for lam in 0..4 {
                    acc += inv[(rho, lam)] * (dg[mu][(lam, nu)] + dg[nu][(lam, mu)] - dg[lam][(mu, nu)]);
                }
                gamma[rho][mu][nu] = 0.5 * acc;
                gamma[rho][nu][mu] = 0.5 * acc;
            }
        }
    }
    Ok(gamma)
}

/// Riemann and Ricci tensors by centered differences of Christoffel samples
/// (stencil radius `2h`).
pub fn riemann_fd(spec: &MetricSpec, p: &SpacetimePoint, h: f64) -> Result<Curvature> {
    let gamma = christoffel_fd(spec, p, h)?;
    let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4];
    for (mu, slot) in dgamma.iter_mut().enumerate() {
        let hi = christoffel_fd(spec, &p.shifted(mu, h), h)?;
        let lo = christoffel_fd(spec, &p.shifted(mu, -h), h)?;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    slot[a][b][c] = (hi[a][b][c] - lo[a][b][c]) / (2.0 * h);
                }
            }
        }
    }
    let mut riemann = [[[[0.0; 4]; 4]; 4]; 4];
    for rho in 0..4 {
        for sigma in 0..4 {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut v = dgamma[mu][rho][nu][sigma] - dgamma[nu][rho][mu][sigma];
                    for lam in 0..4 {
                        v += gamma[rho][mu][lam] * gamma[lam][nu][sigma] - gamma[rho][nu][lam] * gamma[lam][mu][sigma];
                    }
                    riemann[rho][sigma][mu][nu] = v;
                }
            }
        }
    }
    let mut ricci = [[0.0; 4]; 4];
    for s in 0..4 {
        for n in 0..4 {
            ricci[s][n] = (0..4).map(|r| riemann[r][s][r][n]).sum();
        }
    }
    let metric = spec.metric_matrix(p)?;
    let inverse = metric.try_inverse().ok_or(crate::Error::Degenerate)?;
    let ricci_scalar = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| inverse[(a, b)] * ricci[a][b]).sum();

    // R_{abcd} with the first index lowered, then fully raised for the contraction.
    let mut low = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    low[a][b][c][d] = (0..4).map(|r| metric[(a, r)] * riemann[r][b][c][d]).sum();
                }
            }
        }
    }
    let mut up = low;
    for slot in 0..4 {
        let prev = up;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut idx = [a, b, c, d];
                        let target = idx[slot];
                        let mut acc = 0.0;
                        for k in 0..4 {
                            idx[slot] = k;
                            acc += inverse[(target, k)] * prev[idx[0]][idx[1]][idx[2]][idx[3]];
                        }
                        up[a][b][c][d] = acc;
                    }
                }
            }
        }
    }
    let mut kretschmann = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    kretschmann += low[a][b][c][d] * up[a][b][c][d];
                }
            }
        }
    }
    Ok(Curvature { riemann, ricci, metric, inverse, kretschmann, ricci_scalar })
}

impl Curvature {
    pub fn max_ricci(&self) -> f64 {
        self.ricci.iter().flatten().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}
