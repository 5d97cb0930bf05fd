use serde::{Deserialize, Serialize};

use crate::geometry::{
    christoffel_fd4, hodge_star_3form_with, metric_components, riemann_fd, Christoffel, MetricSpec, SpacetimePoint,
    ThreeForm, TwoForm, PAIRS,
};
use crate::Result;

use super::exterior::exterior_d;
use super::field::{partials, stencil4, ThreeFormField, TwoFormField};

type Rank3 = [[[f64; 4]; 4]; 4];

/// `J_β = ∇^γF_{γβ} = σ (⋆G₂)_β` for a field with `d⋆F = G₂`.
pub const DIVERGENCE_SIGN: f64 = 1.0;

/// Optional sources `dF = G₁`, `d⋆F = G₂`.
#[derive(Default)]
pub struct Sources<'a> {
    pub g1: Option<&'a dyn ThreeFormField>,
    pub g2: Option<&'a dyn ThreeFormField>,
}

/// Per-component values of the wave-form identity at a point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WaveResidual {
    /// `□_g F_{αβ} − R_α^γF_{γβ} − R_β^γF_{αγ} + R_{αβ}^{γδ}F_{γδ}`, from second covariant derivatives.
    pub direct: TwoForm,
    /// `∇^γ(dF)_{γαβ} + ∇_αJ_β − ∇_βJ_α` with `J_β = ∇^γF_{γβ}`.
    pub assembled: TwoForm,
    /// `∇^γG₁_{γαβ} + σ(∇_α⋆G₂_β − ∇_β⋆G₂_α)`.
    pub source: TwoForm,
    /// `direct − source`.
    pub residual: TwoForm,
}

/// Steps for the nested stencils.
#[derive(Clone, Copy, Debug)]
pub struct WaveSteps {
    pub field: f64,
    pub metric: f64,
    pub curvature: f64,
}

impl WaveSteps {
    pub fn at(p: &SpacetimePoint) -> Self {
        let s = p.r().max(1.0);
        Self { field: 1e-3 * s, metric: 1e-3 * s, curvature: 5e-3 * s }
    }
}

/// `∇_νF_{αβ}` as `[ν][α][β]`.
pub fn covariant_derivative(spec: &MetricSpec, field: &impl TwoFormField, p: &SpacetimePoint, steps: WaveSteps) -> Result<Rank3> {
    let gamma = christoffel_fd4(spec, p, steps.metric)?;
    let dp = partials(field, p, steps.field)?;
    let f = field.eval(p)?.to_matrix();
    Ok(nabla_two(&gamma, &dp.map(|d| d.to_matrix()), &f))
}

fn nabla_two(gamma: &Christoffel, dp: &[[[f64; 4]; 4]; 4], f: &[[f64; 4]; 4]) -> Rank3 {
    let mut out = [[[0.0; 4]; 4]; 4];
    for n in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let mut v = dp[n][a][b];
                for l in 0..4 {
                    v -= gamma[l][n][a] * f[l][b] + gamma[l][n][b] * f[a][l];
                }
                out[n][a][b] = v;
            }
        }
    }
    out
}

fn flatten3(t: &Rank3) -> [f64; 64] {
    let mut out = [0.0; 64];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                out[16 * a + 4 * b + c] = t[a][b][c];
            }
        }
    }
    out
}

fn unflatten3(v: &[f64; 64]) -> Rank3 {
    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                out[a][b][c] = v[16 * a + 4 * b + c];
            }
        }
    }
    out
}

fn to_rank3(g: &ThreeForm) -> Rank3 {
    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                out[a][b][c] = g.get(a, b, c);
            }
        }
    }
    out
}

/// `g^{γμ}∇_μ T_{γαβ}` for a rank-3 covariant tensor sampled around `p`.
fn divergence_rank3(
    spec: &MetricSpec,
    p: &SpacetimePoint,
    steps: WaveSteps,
    sample: impl Fn(&SpacetimePoint) -> Result<Rank3>,
) -> Result<TwoForm> {
    let ms = metric_components(spec, p)?;
    let gamma = christoffel_fd4(spec, p, steps.metric)?;
    let t = sample(p)?;
    let mut dt = [[[[0.0; 4]; 4]; 4]; 4];
    for (mu, slot) in dt.iter_mut().enumerate() {
        *slot = unflatten3(&stencil4(p, mu, steps.field, |q| sample(q).map(|x| flatten3(&x)))?);
    }
    let mut out = TwoForm::ZERO;
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        let mut acc = 0.0;
        for g in 0..4 {
            for m in 0..4 {
                let gi = ms.inv[(g, m)];
                if gi == 0.0 {
                    continue;
                }
                let mut v = dt[m][g][a][b];
                for l in 0..4 {
                    v -= gamma[l][m][g] * t[l][a][b] + gamma[l][m][a] * t[g][l][b] + gamma[l][m][b] * t[g][a][l];
                }
                acc += gi * v;
            }
        }
        out.0[k] = acc;
    }
    Ok(out)
}

/// `∇_αW_β − ∇_βW_α` for a covector sampled around `p` (the Christoffel terms cancel).
fn curl_one_form(p: &SpacetimePoint, h: f64, sample: impl Fn(&SpacetimePoint) -> Result<[f64; 4]>) -> Result<TwoForm> {
    let mut d = [[0.0; 4]; 4];
    for (a, row) in d.iter_mut().enumerate() {
        *row = stencil4(p, a, h, &sample)?;
    }
    let mut out = TwoForm::ZERO;
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        out.0[k] = d[a][b] - d[b][a];
    }
    Ok(out)
}

/// `J_β = g^{γμ}∇_μF_{γβ}`.
pub fn divergence(spec: &MetricSpec, field: &impl TwoFormField, p: &SpacetimePoint, steps: WaveSteps) -> Result<[f64; 4]> {
    let ms = metric_components(spec, p)?;
    let nf = covariant_derivative(spec, field, p, steps)?;
    let mut j = [0.0; 4];
    for (b, slot) in j.iter_mut().enumerate() {
        let mut acc = 0.0;
        for g in 0..4 {
            for m in 0..4 {
                acc += ms.inv[(g, m)] * nf[m][g][b];
            }
        }
        *slot = acc;
    }
    Ok(j)
}

/// Left side of the wave-form identity from second covariant derivatives and curvature.
pub fn wave_operator_direct(spec: &MetricSpec, field: &impl TwoFormField, p: &SpacetimePoint, steps: WaveSteps) -> Result<TwoForm> {
    let ms = metric_components(spec, p)?;
    let gamma = christoffel_fd4(spec, p, steps.metric)?;
    let nf = covariant_derivative(spec, field, p, steps)?;
    let mut dnf = [[[[0.0; 4]; 4]; 4]; 4];
    for (mu, slot) in dnf.iter_mut().enumerate() {
        let d = stencil4(p, mu, steps.field, |q| covariant_derivative(spec, field, q, steps).map(|x| flatten3(&x)))?;
        *slot = unflatten3(&d);
    }
    let curv = riemann_fd(spec, p, steps.curvature)?;
    let f = field.eval(p)?;
    let inv = ms.inv;

    let mut out = TwoForm::ZERO;
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        let mut boxf = 0.0;
        for m in 0..4 {
            for n in 0..4 {
                let gi = inv[(m, n)];
                if gi == 0.0 {
                    continue;
                }
                let mut v = dnf[m][n][a][b];
                for l in 0..4 {
                    v -= gamma[l][m][n] * nf[l][a][b] + gamma[l][m][a] * nf[n][l][b] + gamma[l][m][b] * nf[n][a][l];
                }
                boxf += gi * v;
            }
        }
        let mut ricci_terms = 0.0;
        for g in 0..4 {
            let ra_g: f64 = (0..4).map(|m| inv[(g, m)] * curv.ricci[a][m]).sum();
            let rb_g: f64 = (0..4).map(|m| inv[(g, m)] * curv.ricci[b][m]).sum();
            ricci_terms += ra_g * f.get(g, b) + rb_g * f.get(a, g);
        }
        let mut riemann_term = 0.0;
        for g in 0..4 {
            for d in 0..4 {
                let fgd = f.get(g, d);
                if fgd == 0.0 {
                    continue;
                }
                // R_{αβ}^{γδ} = g^{γμ} g^{δν} g_{αρ} R^ρ_{βμν}
                let mut r = 0.0;
                for m in 0..4 {
                    for n in 0..4 {
                        let w = inv[(g, m)] * inv[(d, n)];
                        if w == 0.0 {
                            continue;
                        }
                        for rho in 0..4 {
                            r += w * curv.metric[(a, rho)] * curv.riemann[rho][b][m][n];
                        }
                    }
                }
                riemann_term += r * fgd;
            }
        }
        out.0[k] = boxf - ricci_terms + riemann_term;
    }
    Ok(out)
}

/// The same left side through `∇^γ(dF)_{γαβ} + ∇_αJ_β − ∇_βJ_α`.
pub fn wave_operator_assembled(spec: &MetricSpec, field: &impl TwoFormField, p: &SpacetimePoint, steps: WaveSteps) -> Result<TwoForm> {
    let div_df = divergence_rank3(spec, p, steps, |q| exterior_d(field, q, steps.field).map(|g| to_rank3(&g)))?;
    let curl_j = curl_one_form(p, steps.field, |q| divergence(spec, field, q, steps))?;
    Ok(div_df + curl_j)
}

/// `∇^γG₁_{γαβ} + σ(∇_α⋆G₂_β − ∇_β⋆G₂_α)`.
pub fn wave_source(spec: &MetricSpec, sources: &Sources, p: &SpacetimePoint, steps: WaveSteps) -> Result<TwoForm> {
    let mut out = TwoForm::ZERO;
    if let Some(g1) = sources.g1 {
        out = out + divergence_rank3(spec, p, steps, |q| g1.eval(q).map(|g| to_rank3(&g)))?;
    }
    if let Some(g2) = sources.g2 {
        let curl = curl_one_form(p, steps.field, |q| {
            let ms = metric_components(spec, q)?;
            Ok(hodge_star_3form_with(&ms, &g2.eval(q)?))
        })?;
        out = out + curl * DIVERGENCE_SIGN;
    }
    Ok(out)
}

/// Evaluates both sides of the wave-form reduction at `p`.
pub fn wave_residual(spec: &MetricSpec, field: &impl TwoFormField, sources: &Sources, p: &SpacetimePoint) -> Result<WaveResidual> {
    let steps = WaveSteps::at(p);
    let direct = wave_operator_direct(spec, field, p, steps)?;
    let assembled = wave_operator_assembled(spec, field, p, steps)?;
    let source = wave_source(spec, sources, p, steps)?;
    Ok(WaveResidual { direct, assembled, source, residual: direct - source })
}
