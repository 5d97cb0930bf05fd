use serde::{Deserialize, Serialize};

use crate::geometry::{inverse_tortoise_with_lapse, MetricSpec};
use crate::modes::{ModeIndex, Parity};
use crate::{Error, Result};

use super::data::{InitialDataSpec, SourceSpec};
use super::grid::{Background, Grid1D, InnerBoundary, SpatialOrder};
use super::interp::lagrange_uniform;
use super::state::{ModeState, Stepper};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub l: u32,
    /// Field spin: 1 for Maxwell, 0 for the scalar comparison.
    pub s: u32,
    pub parity: Parity,
    /// Spin whose potential drives `ψ`; defaults to `s`. Setting it apart from
    /// `s` produces an inconsistent run, used as a negative control.
    #[serde(default)]
    pub potential_spin: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub rstar_min: f64,
    pub rstar_max: f64,
    pub n: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub spatial_order: SpatialOrder,
}

fn default_cfl() -> f64 {
    0.5
}

impl GridConfig {
    /// Grid description with spacing `dr` (rounded to fit both ends).
    pub fn spaced(rstar_min: f64, rstar_max: f64, dr: f64) -> Self {
        let n = ((rstar_max - rstar_min) / dr).round() as usize + 1;
        Self { rstar_min, rstar_max, n, cfl: 0.5, spatial_order: SpatialOrder::Second }
    }

    pub fn build(&self) -> Result<Grid1D> {
        Grid1D::new(self.rstar_min, self.rstar_max, self.n, self.cfl)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NullLineConfig {
    #[serde(default)]
    pub u0: Vec<f64>,
    #[serde(default)]
    pub v0: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub metric: MetricSpec,
    pub mode: ModeConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub data: InitialDataSpec,
    #[serde(default)]
    pub source: Option<SourceSpec>,
    #[serde(default)]
    pub probes: Vec<f64>,
    #[serde(default)]
    pub null_lines: NullLineConfig,
    pub t_final: f64,
    /// Store a full slice every this many steps (0: none).
    #[serde(default)]
    pub save_every: usize,
    /// Restrict stored slices to `t ∈ [a, b]`.
    #[serde(default)]
    pub slice_window: Option<[f64; 2]>,
    /// Require probes to be causally isolated from both grid ends until `t_final`.
    #[serde(default)]
    pub causal_purity: bool,
    #[serde(default = "default_margin")]
    pub purity_margin: f64,
}

fn default_margin() -> f64 {
    10.0
}

impl EvolutionConfig {
    /// Schwarzschild `M = 1`, odd `l = 1` Maxwell mode, default Gaussian data,
    /// probe at `r* = 20` and an outgoing line at `u = 50`.
    pub fn schwarzschild_default() -> Self {
        Self {
            metric: MetricSpec::schwarzschild(1.0),
            mode: ModeConfig { l: 1, s: 1, parity: Parity::Odd, potential_spin: None },
            grid: GridConfig::spaced(-400.0, 600.0, 0.1),
            data: InitialDataSpec::default(),
            source: None,
            probes: vec![20.0],
            null_lines: NullLineConfig { u0: vec![50.0], v0: vec![] },
            t_final: 300.0,
            save_every: 0,
            slice_window: None,
            causal_purity: false,
            purity_margin: default_margin(),
        }
    }

    pub fn mode_index(&self) -> ModeIndex {
        ModeIndex::axisymmetric(self.mode.l, self.mode.parity)
    }

    pub fn steps(&self, grid: &Grid1D) -> usize {
        (self.t_final / grid.dt - 1e-9).ceil() as usize
    }

    fn validate(&self, grid: &Grid1D, inner: InnerBoundary) -> Result<()> {
        if !(self.t_final >= 0.0) {
            return Err(Error::Input(format!("t_final must be non-negative, got {}", self.t_final)));
        }
        self.data.validate(grid)?;
        if let Some(src) = &self.source {
            src.validate()?;
        }
        for &p in &self.probes {
            if p < grid.rstar_min || p > grid.rstar_max {
                return Err(Error::Input(format!("probe r* = {p} outside grid")));
            }
            if !self.causal_purity {
                continue;
            }
            let reach = self.t_final + self.purity_margin;
            if grid.rstar_max < p + reach {
                return Err(Error::CausalPurity(format!(
                    "outer boundary {} closer than {reach} to probe {p}",
                    grid.rstar_max
                )));
            }
            if inner == InnerBoundary::Radiative && grid.rstar_min > p - reach {
                return Err(Error::CausalPurity(format!(
                    "inner boundary {} closer than {reach} to probe {p}",
                    grid.rstar_min
                )));
            }
        }
        Ok(())
    }
}

/// Field values at one spacetime point of a recorded line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSample {
    pub t: f64,
    pub rstar: f64,
    pub r: f64,
    pub lapse: f64,
    pub psi: f64,
    pub pi: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
}

impl LineSample {
    pub fn u(&self) -> f64 {
        self.t - self.rstar
    }

    pub fn v(&self) -> f64 {
        self.t + self.rstar
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum LineKind {
    /// Fixed `r*`.
    Probe(f64),
    /// Outgoing null line `t − r* = u₀`.
    Outgoing(f64),
    /// Ingoing null line `t + r* = v₀`.
    Ingoing(f64),
}

impl LineKind {
    fn rstar_at(&self, t: f64) -> f64 {
        match *self {
            LineKind::Probe(x) => x,
            LineKind::Outgoing(u0) => t - u0,
            LineKind::Ingoing(v0) => v0 - t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSeries {
    pub kind: LineKind,
    pub samples: Vec<LineSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slice {
    pub t: f64,
    pub psi: Vec<f64>,
    pub pi: Vec<f64>,
    pub phi_plus: Vec<f64>,
    pub phi_minus: Vec<f64>,
}

/// Everything recorded by [`evolve`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub config: EvolutionConfig,
    pub grid: Grid1D,
    pub probes: Vec<LineSeries>,
    pub null_lines: Vec<LineSeries>,
    pub slices: Vec<Slice>,
    /// `(t, energy)` at every stored slice time and at the end.
    pub energy: Vec<(f64, f64)>,
}

impl Trajectory {
    pub fn probe(&self, rstar: f64) -> Option<&LineSeries> {
        self.probes.iter().find(|s| matches!(s.kind, LineKind::Probe(x) if (x - rstar).abs() < 1e-9))
    }

    pub fn outgoing(&self, u0: f64) -> Option<&LineSeries> {
        self.null_lines.iter().find(|s| matches!(s.kind, LineKind::Outgoing(u) if (u - u0).abs() < 1e-9))
    }
}

const LINE_POINTS: usize = 4;

fn sample_line(spec: &MetricSpec, grid: &Grid1D, state: &ModeState, kind: LineKind) -> Result<Option<LineSample>> {
    let x = kind.rstar_at(state.t);
    let at = |v: &[f64]| lagrange_uniform(v, grid.rstar_min, grid.dr, x, LINE_POINTS);
    let Some(psi) = at(&state.psi) else {
        return Ok(None);
    };
    let (r, lapse) = if x <= 0.0 && spec.family != crate::geometry::Family::Schwarzschild {
        (0.0, 1.0)
    } else {
        inverse_tortoise_with_lapse(spec, x)?
    };
    Ok(Some(LineSample {
        t: state.t,
        rstar: x,
        r,
        lapse,
        psi,
        pi: at(&state.pi).unwrap_or(0.0),
        phi_plus: at(&state.phi_plus).unwrap_or(0.0),
        phi_minus: at(&state.phi_minus).unwrap_or(0.0),
    }))
}

/// Runs the configured evolution from `t = 0` to `t_final`.
pub fn evolve(config: &EvolutionConfig) -> Result<Trajectory> {
    let grid = config.grid.build()?;
    let spin = config.mode.s;
    let background = Background::new(
        &config.metric,
        &grid,
        config.mode.l,
        spin,
        config.mode.potential_spin.unwrap_or(spin),
    )?;
    config.validate(&grid, background.inner)?;
    let mut state = ModeState::from_data(config.mode_index(), &grid, &background, &config.data);
    let mut stepper = Stepper::new(grid, background, config.grid.spatial_order, config.source)?;

    let mut probes: Vec<LineSeries> =
        config.probes.iter().map(|&x| LineSeries { kind: LineKind::Probe(x), samples: Vec::new() }).collect();
    let mut lines: Vec<LineSeries> = config
        .null_lines
        .u0
        .iter()
        .map(|&u| LineKind::Outgoing(u))
        .chain(config.null_lines.v0.iter().map(|&v| LineKind::Ingoing(v)))
        .map(|kind| LineSeries { kind, samples: Vec::new() })
        .collect();
    let mut slices = Vec::new();
    let mut energy = Vec::new();

    let steps = config.steps(&grid);
    for k in 0..=steps {
        if k > 0 {
            stepper.step(&mut state)?;
        }
        for series in probes.iter_mut().chain(lines.iter_mut()) {
            if let Some(s) = sample_line(&config.metric, &grid, &state, series.kind)? {
                series.samples.push(s);
            }
        }
        let in_window = config.slice_window.map_or(true, |[a, b]| state.t >= a - 1e-12 && state.t <= b + 1e-12);
        if config.save_every > 0 && k % config.save_every == 0 && in_window {
            slices.push(Slice {
                t: state.t,
                psi: state.psi.clone(),
                pi: state.pi.clone(),
                phi_plus: state.phi_plus.clone(),
                phi_minus: state.phi_minus.clone(),
            });
            energy.push((state.t, stepper.energy(&state)));
        }
    }
    energy.push((state.t, stepper.energy(&state)));
    Ok(Trajectory { config: config.clone(), grid, probes, null_lines: lines, slices, energy })
}
