use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{inverse_tortoise_with_lapse, tortoise, Family, MetricSpec, SpacetimePoint, TwoForm};
use crate::modes::{mode_sample_to_tensor, ModeAmplitudes, ModeIndex, Parity};
use crate::tensorcalc::{codifferential_d_star, default_step, exterior_d, TwoFormField};
use crate::{Error, Result};

use super::data::InitialDataSpec;
use super::grid::Grid1D;
use super::interp::lagrange_uniform;
use super::run::{evolve, EvolutionConfig, GridConfig, ModeConfig, NullLineConfig, Slice};

const SPACE_POINTS: usize = 6;
const TIME_POINTS: usize = 6;

/// The full 2-form of one evolved mode, read off stored slices by Lagrange
/// interpolation in `r*` and `t`.
pub struct SliceField<'a> {
    pub spec: &'a MetricSpec,
    pub grid: &'a Grid1D,
    pub slices: &'a [Slice],
    pub mode: ModeIndex,
}

impl SliceField<'_> {
    /// `(ψ, ∂_uψ, ∂_vψ)` at `(t, r*)`.
    pub fn master_at(&self, t: f64, x: f64) -> Result<[f64; 3]> {
        let m = self.slices.len();
        if m < TIME_POINTS {
            return Err(Error::Input(format!("need at least {TIME_POINTS} stored slices, have {m}")));
        }
        let t0 = self.slices[0].t;
        let dt = self.slices[1].t - t0;
        let s = (t - t0) / dt;
        if s < -1e-9 || s > (m - 1) as f64 + 1e-9 {
            return Err(Error::Input(format!("t = {t} outside stored slices")));
        }
        let start = (s.floor() as isize - (TIME_POINTS as isize / 2 - 1)).clamp(0, (m - TIME_POINTS) as isize) as usize;
        let mut out = [0.0; 3];
        let g = self.grid;
        for (slot, pick) in out.iter_mut().zip([
            (|s: &Slice| &s.psi) as fn(&Slice) -> &Vec<f64>,
            |s: &Slice| &s.phi_minus,
            |s: &Slice| &s.phi_plus,
        ]) {
            let mut vals = [0.0; TIME_POINTS];
            for (j, v) in vals.iter_mut().enumerate() {
                *v = lagrange_uniform(pick(&self.slices[start + j]), g.rstar_min, g.dr, x, SPACE_POINTS)
                    .ok_or_else(|| Error::Input(format!("r* = {x} outside grid")))?;
            }
            let tj = self.slices[start].t;
            *slot = lagrange_uniform(&vals, tj, dt, t, TIME_POINTS).unwrap_or(f64::NAN);
        }
        Ok(out)
    }
}

impl TwoFormField for SliceField<'_> {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        let r = p.r();
        let x = tortoise(self.spec, r)?;
        let [psi, du, dv] = self.master_at(p.t, x)?;
        let amps = ModeAmplitudes::from_master(self.mode.parity, self.mode.l, r, self.spec.lapse(r), psi, du, dv);
        mode_sample_to_tensor(&self.mode, &amps, self.spec, p)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateConfig {
    /// Coarsest run; the finer two halve and quarter its spacing.
    pub base: EvolutionConfig,
    pub sample_time: f64,
    #[serde(default = "default_samples")]
    pub sample_points: usize,
    /// Bound on the finest relative residual.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_min_order")]
    pub min_order: f64,
}

fn default_samples() -> usize {
    8
}
fn default_tolerance() -> f64 {
    1e-3
}
fn default_min_order() -> f64 {
    1.8
}

impl GateConfig {
    /// Homogeneous run with the default Gaussian, sampled after the ingoing
    /// half has scattered off the potential barrier.
    pub fn new(metric: MetricSpec, mode: ModeConfig) -> Self {
        let rstar_min = if metric.family == Family::Schwarzschild { -100.0 } else { 0.0 };
        Self {
            base: EvolutionConfig {
                metric,
                mode,
                grid: GridConfig::spaced(rstar_min, 200.0, 0.2),
                data: InitialDataSpec::default(),
                source: None,
                probes: vec![],
                null_lines: NullLineConfig::default(),
                t_final: 62.0,
                save_every: 1,
                slice_window: Some([59.0, 61.0]),
                causal_purity: false,
                purity_margin: 10.0,
            },
            sample_time: 60.0,
            sample_points: default_samples(),
            tolerance: default_tolerance(),
            min_order: default_min_order(),
        }
    }

    pub fn schwarzschild_maxwell() -> Self {
        Self::new(
            MetricSpec::schwarzschild(1.0),
            ModeConfig { l: 1, s: 1, parity: Parity::Odd, potential_spin: None },
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolutionResidual {
    pub dr: f64,
    /// `max |dF| / max |F|` over the sample points.
    pub closed_residual: f64,
    /// `max |d⋆F| / max |F|`.
    pub coclosed_residual: f64,
}

impl ResolutionResidual {
    pub fn residual(&self) -> f64 {
        self.closed_residual.max(self.coclosed_residual)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateReport {
    pub resolutions: Vec<ResolutionResidual>,
    /// `log₂` ratios of successive residuals, coarse pair first.
    pub orders: Vec<f64>,
    /// Order from the two finest resolutions.
    pub order: f64,
    pub finest_residual: f64,
    pub pass: bool,
}

impl GateReport {
    pub fn ensure(&self) -> Result<()> {
        if self.pass {
            Ok(())
        } else {
            Err(Error::Formulation(format!(
                "Maxwell residual converges at order {:.2} with finest residual {:.2e}",
                self.order, self.finest_residual
            )))
        }
    }
}

fn refined(base: &EvolutionConfig, factor: usize) -> EvolutionConfig {
    let mut c = base.clone();
    c.grid.n = (base.grid.n - 1) * factor + 1;
    c
}

fn sample_points(config: &GateConfig, grid: &Grid1D, slice: &Slice) -> Result<Vec<SpacetimePoint>> {
    let peak = slice.psi.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let strong: Vec<usize> = (0..grid.n).filter(|&i| slice.psi[i].abs() >= 0.2 * peak && grid.x(i) >= 5.0).collect();
    if strong.is_empty() || peak == 0.0 {
        return Err(Error::Input("no field content at the sample time".into()));
    }
    let thetas = [0.5, 1.0, 1.4, 2.2];
    let k = config.sample_points.max(1);
    let denom = (k - 1).max(1);
    (0..k)
        .map(|j| {
            let i = strong[j * (strong.len() - 1) / denom];
            let (r, _) = inverse_tortoise_with_lapse(&config.base.metric, grid.x(i))?;
            Ok(SpacetimePoint::from_polar(config.sample_time, r, thetas[j % thetas.len()], 0.3))
        })
        .collect()
}

fn residual_at(config: &EvolutionConfig, points: &[SpacetimePoint]) -> Result<ResolutionResidual> {
    let tr = evolve(config)?;
    let field = SliceField { spec: &config.metric, grid: &tr.grid, slices: &tr.slices, mode: config.mode_index() };
    let (mut scale, mut closed, mut coclosed) = (0.0_f64, 0.0_f64, 0.0_f64);
    for p in points {
        let h = default_step(p);
        scale = scale.max(field.eval(p)?.max_abs());
        closed = closed.max(exterior_d(&field, p, h)?.max_abs());
        coclosed = coclosed.max(codifferential_d_star(&config.metric, &field, p, h)?.max_abs());
    }
    if scale == 0.0 {
        return Err(Error::Input("field vanishes at every sample point".into()));
    }
    Ok(ResolutionResidual { dr: tr.grid.dr, closed_residual: closed / scale, coclosed_residual: coclosed / scale })
}

/// Three-resolution convergence test of the assembled tensor against the
/// first-order Maxwell system.
pub fn maxwell_residual_order(config: &GateConfig) -> Result<GateReport> {
    if config.base.source.is_some() {
        return Err(Error::Input("residual gate needs a homogeneous run".into()));
    }
    if config.base.save_every == 0 {
        return Err(Error::Input("residual gate needs stored slices (save_every ≥ 1)".into()));
    }
    let probe = evolve(&config.base)?;
    let nearest = probe
        .slices
        .iter()
        .min_by(|a, b| (a.t - config.sample_time).abs().total_cmp(&(b.t - config.sample_time).abs()))
        .ok_or_else(|| Error::Input("no slices inside the slice window".into()))?;
    let points = sample_points(config, &probe.grid, nearest)?;

    let configs: Vec<EvolutionConfig> = [1, 2, 4].iter().map(|&f| refined(&config.base, f)).collect();
    let resolutions = configs.par_iter().map(|c| residual_at(c, &points)).collect::<Result<Vec<_>>>()?;
    let orders: Vec<f64> = resolutions.windows(2).map(|w| (w[0].residual() / w[1].residual()).log2()).collect();
    let order = *orders.last().unwrap_or(&f64::NAN);
    let finest_residual = resolutions.last().map_or(f64::NAN, |r| r.residual());
    let pass = order >= config.min_order && finest_residual <= config.tolerance;
    Ok(GateReport { resolutions, orders, order, finest_residual, pass })
}
