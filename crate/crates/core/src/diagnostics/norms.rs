use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::evolution::{InnerBoundary, Trajectory};
use crate::modes::ModeAmplitudes;
use crate::{Error, Result};

use super::regions::{annulus, bracket, RegionSpec};

/// Sphere-integrated field densities on a `(t, r)` lattice.
///
/// `density` is `∫_{S²}|F|²` in the null-frame norm, `radial_density` the same
/// for the radial part `F̄`, `gradient_density` for first derivatives, and
/// `pointwise` an upper bound for `sup_{S²}|F|`. All are indexed `[time][radius]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldSamples {
    pub times: Vec<f64>,
    pub r: Vec<f64>,
    /// Quadrature weights for `∫ · r² dr`.
    pub r_weights: Vec<f64>,
    pub density: Vec<Vec<f64>>,
    pub radial_density: Vec<Vec<f64>>,
    pub gradient_density: Vec<Vec<f64>>,
    pub pointwise: Vec<Vec<f64>>,
    /// Factor turning `‖F‖²` into `‖F^{≤2}‖²` under rotations (mode level).
    pub rotation_gain: f64,
}

fn trapezoid_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![1.0; n];
    }
    (0..n)
        .map(|i| {
            let lo = if i > 0 { x[i] - x[i - 1] } else { 0.0 };
            let hi = if i + 1 < n { x[i + 1] - x[i] } else { 0.0 };
            0.5 * (lo + hi)
        })
        .collect()
}

impl FieldSamples {
    pub fn validate(&self) -> Result<()> {
        let (nt, nr) = (self.times.len(), self.r.len());
        let shaped = |m: &Vec<Vec<f64>>| m.len() == nt && m.iter().all(|row| row.len() == nr);
        if nt == 0 || nr == 0 {
            return Err(Error::Input("empty field samples".into()));
        }
        if self.r_weights.len() != nr
            || ![&self.density, &self.radial_density, &self.gradient_density, &self.pointwise].into_iter().all(shaped)
        {
            return Err(Error::Input("field sample arrays have inconsistent shapes".into()));
        }
        Ok(())
    }

    pub fn time_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.times)
    }

    /// Densities of one evolved mode from the stored slices of a trajectory.
    /// Radial derivatives are taken in `r*`, time derivatives between slices.
    pub fn from_trajectory(trajectory: &Trajectory) -> Result<Self> {
        let slices = &trajectory.slices;
        if slices.len() < 2 {
            return Err(Error::Input("norms need at least two stored slices".into()));
        }
        let grid = &trajectory.grid;
        let cfg = &trajectory.config;
        let (l, parity) = (cfg.mode.l, cfg.mode.parity);
        let bg = crate::evolution::Background::new(&cfg.metric, grid, l, cfg.mode.s, cfg.mode.s)?;
        let start = usize::from(bg.inner == InnerBoundary::Origin);
        let idx: Vec<usize> = (start..grid.n).collect();
        let ll = (l * (l + 1)) as f64;
        let (y_max, dy_max) = angular_maxima(l);

        let amps: Vec<Vec<ModeAmplitudes>> = slices
            .iter()
            .map(|s| {
                idx.iter()
                    .map(|&i| {
                        ModeAmplitudes::from_master(parity, l, bg.r[i], bg.lapse[i], s.psi[i], s.phi_minus[i], s.phi_plus[i])
                    })
                    .collect()
            })
            .collect();
        let dens = |a: &ModeAmplitudes| a.middle * a.middle + ll * (a.ua * a.ua + a.va * a.va);
        let diff = |a: &ModeAmplitudes, b: &ModeAmplitudes, h: f64| ModeAmplitudes {
            middle: (a.middle - b.middle) / h,
            ua: (a.ua - b.ua) / h,
            va: (a.va - b.va) / h,
        };

        let nt = slices.len();
        let m = idx.len();
        let mut samples = FieldSamples {
            times: slices.iter().map(|s| s.t).collect(),
            r: idx.iter().map(|&i| bg.r[i]).collect(),
            r_weights: idx.iter().map(|&i| bg.r[i] * bg.r[i] * bg.lapse[i] * grid.dr).collect(),
            rotation_gain: 1.0 + ll + ll * ll,
            ..Default::default()
        };
        for k in 0..nt {
            let (ka, kb) = (k.saturating_sub(1), (k + 1).min(nt - 1));
            let ht = samples.times[kb] - samples.times[ka];
            let mut d = Vec::with_capacity(m);
            let mut g = Vec::with_capacity(m);
            let mut p = Vec::with_capacity(m);
            for j in 0..m {
                let a = &amps[k][j];
                let (ja, jb) = (j.saturating_sub(1), (j + 1).min(m - 1));
                let dr = (jb - ja) as f64 * grid.dr;
                let dt_part = dens(&diff(&amps[kb][j], &amps[ka][j], ht));
                let dr_part = dens(&diff(&amps[k][jb], &amps[k][ja], dr));
                let r = samples.r[j];
                d.push(dens(a));
                g.push(dt_part + dr_part + ll * dens(a) / (r * r));
                p.push(((a.middle * y_max).powi(2) + (a.ua * a.ua + a.va * a.va) * dy_max * dy_max).sqrt());
            }
            samples.density.push(d);
            samples.gradient_density.push(g);
            samples.pointwise.push(p);
            samples.radial_density.push(vec![0.0; m]);
        }
        Ok(samples)
    }
}

fn angular_maxima(l: u32) -> (f64, f64) {
    let n = 2000;
    (0..=n).fold((0.0_f64, 0.0_f64), |(ym, dm), k| {
        let (y, dy) = crate::modes::zonal(l, std::f64::consts::PI * k as f64 / n as f64);
        (ym.max(y.abs()), dm.max(dy.abs()))
    })
}

/// Extra weights on a norm: `t^{time_power}·⟨r⟩^{bracket_power}` multiplying the field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormWeights {
    #[serde(default)]
    pub time_power: f64,
    #[serde(default)]
    pub bracket_power: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub le: f64,
    pub le_star: f64,
    pub le_max: f64,
    /// Fixed-time `𝓛𝓔` norm per slice.
    pub slice_le: Vec<(f64, f64)>,
    /// `(t, [E⁰, E¹])` per slice.
    pub energies: Vec<(f64, [f64; 2])>,
}

/// Per-annulus sums `Σ w·⟨r⟩^{power}·density` (weights folded in).
fn annulus_sums(
    samples: &FieldSamples,
    density: &[Vec<f64>],
    region: Option<&RegionSpec>,
    weights: &NormWeights,
    power: f64,
    slice: Option<usize>,
) -> BTreeMap<u64, f64> {
    let wt = samples.time_weights();
    let mut sums = BTreeMap::new();
    for (k, &t) in samples.times.iter().enumerate() {
        if slice.is_some_and(|s| s != k) {
            continue;
        }
        let tw = if slice.is_some() { 1.0 } else { wt[k] };
        let tp = t.abs().max(1.0).powf(2.0 * weights.time_power);
        for (j, &r) in samples.r.iter().enumerate() {
            if region.is_some_and(|reg| !reg.contains(t, r)) {
                continue;
            }
            let b = bracket(r);
            let v = tw * tp * samples.r_weights[j] * b.powf(power + 2.0 * weights.bracket_power) * density[k][j];
            *sums.entry(annulus(r) as u64).or_insert(0.0) += v;
        }
    }
    sums
}

fn sup_norm(sums: &BTreeMap<u64, f64>) -> f64 {
    sums.values().fold(0.0_f64, |a, v| a.max(v.sqrt()))
}

fn sum_norm(sums: &BTreeMap<u64, f64>) -> f64 {
    sums.values().map(|v| v.sqrt()).sum()
}

/// `LE`, `LE*`, `LE_Max` over the samples (optionally restricted to a region),
/// plus slice norms and energies.
pub fn le_norms(samples: &FieldSamples, region: Option<&RegionSpec>, weights: &NormWeights) -> Result<NormReport> {
    samples.validate()?;
    let le = sup_norm(&annulus_sums(samples, &samples.density, region, weights, -1.0, None));
    let le_star = sum_norm(&annulus_sums(samples, &samples.density, region, weights, 1.0, None));
    let radial = sup_norm(&annulus_sums(samples, &samples.radial_density, region, weights, 1.0, None));
    let mut slice_le = Vec::new();
    let mut energies = Vec::new();
    for (k, &t) in samples.times.iter().enumerate() {
        let sums = annulus_sums(samples, &samples.density, region, weights, -1.0, Some(k));
        slice_le.push((t, sup_norm(&sums)));
        let e0: f64 = samples.r_weights.iter().zip(&samples.density[k]).map(|(w, d)| w * d).sum::<f64>().sqrt();
        let e1: f64 = samples.r_weights.iter().zip(&samples.gradient_density[k]).map(|(w, d)| w * d).sum::<f64>().sqrt();
        energies.push((t, [e0, e0 + e1]));
    }
    Ok(NormReport { le, le_star, le_max: le + radial, slice_le, energies })
}
