use crate::geometry::{MetricSpec, SpacetimePoint, ThreeForm, TwoForm, TRIPLES};
use crate::Result;

use super::field::{partials, Dual, TwoFormField};

fn assemble_d(dp: &[TwoForm; 4], skip_time_derivative: bool) -> ThreeForm {
    let mut out = ThreeForm::ZERO;
    for (k, &(a, b, c)) in TRIPLES.iter().enumerate() {
        let term = |mu: usize, x: usize, y: usize| {
            if skip_time_derivative && mu == 0 {
                0.0
            } else {
                dp[mu].get(x, y)
            }
        };
        out.0[k] = term(a, b, c) + term(b, c, a) + term(c, a, b);
    }
    out
}

/// `(dF)_{αβγ} = ∂_α F_{βγ} + ∂_β F_{γα} + ∂_γ F_{αβ}` by fourth-order centered differences.
pub fn exterior_d(field: &impl TwoFormField, p: &SpacetimePoint, h: f64) -> Result<ThreeForm> {
    Ok(assemble_d(&partials(field, p, h)?, false))
}

/// `d⁰F = dF − dt∧L_{∂_t}F`: the exterior derivative with every `∂_t` dropped.
///
/// Components without `t` equal those of `dF`; the `tij` components keep
/// their spatial derivatives `∂_i F_{jt} + ∂_j F_{ti}`.
pub fn d0(field: &impl TwoFormField, p: &SpacetimePoint, h: f64) -> Result<ThreeForm> {
    Ok(assemble_d(&partials(field, p, h)?, true))
}

/// `d⋆F`.
pub fn codifferential_d_star(spec: &MetricSpec, field: &impl TwoFormField, p: &SpacetimePoint, h: f64) -> Result<ThreeForm> {
    exterior_d(&Dual { spec, field }, p, h)
}

/// `d⁰⋆F`.
pub fn d0_star(spec: &MetricSpec, field: &impl TwoFormField, p: &SpacetimePoint, h: f64) -> Result<ThreeForm> {
    d0(&Dual { spec, field }, p, h)
}

/// `(dA)_{αβ} = ∂_α A_β − ∂_β A_α` for a 1-form given as a closure.
pub fn exterior_d_one_form(
    a: &(impl Fn(&SpacetimePoint) -> Result<[f64; 4]> + Sync),
    p: &SpacetimePoint,
    h: f64,
) -> Result<TwoForm> {
    one_form_d(a, p, h, false)
}

/// `d⁰A` for a 1-form: `dA` with `∂_t` dropped.
pub fn d0_one_form(
    a: &(impl Fn(&SpacetimePoint) -> Result<[f64; 4]> + Sync),
    p: &SpacetimePoint,
    h: f64,
) -> Result<TwoForm> {
    one_form_d(a, p, h, true)
}

fn one_form_d(
    a: &(impl Fn(&SpacetimePoint) -> Result<[f64; 4]> + Sync),
    p: &SpacetimePoint,
    h: f64,
    skip_time_derivative: bool,
) -> Result<TwoForm> {
    let mut da = [[0.0; 4]; 4];
    for (mu, row) in da.iter_mut().enumerate() {
        if !(skip_time_derivative && mu == 0) {
            *row = super::field::stencil4(p, mu, h, a)?;
        }
    }
    let mut out = TwoForm::ZERO;
    for x in 0..4 {
        for y in (x + 1)..4 {
            out.set(x, y, da[x][y] - da[y][x]);
        }
    }
    Ok(out)
}
