use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{MetricSpec, SpacetimePoint};
use crate::tensorcalc::{d0, d0_star};
use crate::Result;

use super::bounds::{verify_bounds, BoundReport, BoundsConfig};
use super::problem::{FixedTimeProblem, ModeSource, Sector};
use super::profile::{Profile, SourceProfile};
use super::solve::FixedTimeField;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FuzzConfig {
    pub seeds: u64,
    pub base_seed: u64,
    /// Interval holding every source support.
    pub support: [f64; 2],
    pub l_max: u32,
    pub max_modes: usize,
    pub neutral_radial: bool,
    pub r0: f64,
    pub r_max: f64,
    pub residual_points: usize,
    /// Finite-difference step of the residual check.
    pub step: f64,
    pub bounds: BoundsConfig,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seeds: 20,
            base_seed: 0,
            support: [2.0, 8.0],
            l_max: 3,
            max_modes: 3,
            neutral_radial: true,
            r0: 0.5,
            r_max: 10.0,
            residual_points: 32,
            step: 1e-3,
            bounds: BoundsConfig::default(),
        }
    }
}

fn bump_parts(rng: &mut ChaCha8Rng, support: [f64; 2]) -> (f64, f64, f64) {
    let half_width = rng.gen_range(0.8..1.6);
    let center = rng.gen_range(support[0] + half_width..support[1] - half_width);
    let amplitude = rng.gen_range(0.5..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    (center, half_width, amplitude)
}

fn random_bump(rng: &mut ChaCha8Rng, support: [f64; 2]) -> SourceProfile {
    let (center, half_width, amplitude) = bump_parts(rng, support);
    SourceProfile::single(Profile::Bump { center, half_width, amplitude })
}

/// Two bumps with opposite total charge, so `r²F̄` is compactly supported.
fn neutral_pair(rng: &mut ChaCha8Rng, support: [f64; 2]) -> SourceProfile {
    let (c1, w1, a1) = bump_parts(rng, support);
    let (c2, w2, _) = bump_parts(rng, support);
    SourceProfile(vec![
        Profile::Bump { center: c1, half_width: w1, amplitude: a1 },
        Profile::Bump { center: c2, half_width: w2, amplitude: -a1 * w1 / w2 },
    ])
}

/// A random compactly supported problem: a radial source per sector plus up
/// to `max_modes` nonradial modes with random charge and vector potentials.
/// With `neutral_radial` each radial source carries zero total charge, the
/// condition for a solution regular at the origin.
pub fn random_problem(seed: u64, cfg: &FuzzConfig) -> FixedTimeProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.base_seed.wrapping_add(seed));
    let mut p = FixedTimeProblem::empty(cfg.r0, cfg.r_max);
    let radial = |rng: &mut ChaCha8Rng| if cfg.neutral_radial { neutral_pair(rng, cfg.support) } else { random_bump(rng, cfg.support) };
    p.radial_electric = radial(&mut rng);
    p.radial_magnetic = radial(&mut rng);
    let n = rng.gen_range(1..=cfg.max_modes.max(1));
    for _ in 0..n {
        let l = rng.gen_range(1..=cfg.l_max.max(1));
        let m = rng.gen_range(-(l as i32)..=l as i32);
        let sector = if rng.gen_bool(0.5) { Sector::Electric } else { Sector::Magnetic };
        let maybe = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { random_bump(rng, cfg.support) } else { SourceProfile::zero() };
        let radial = maybe(&mut rng);
        let tangential = maybe(&mut rng);
        let toroidal = maybe(&mut rng);
        p.modes.push(ModeSource { l, m, sector, charge: random_bump(&mut rng, cfg.support), radial, tangential, toroidal });
    }
    p
}

/// `max|d⁰F − G₁|, |d⁰⋆F − G₂|` over `max|G|` at random points of the support shell.
pub fn relative_residual(problem: &FixedTimeProblem, field: &FixedTimeField, points: &[SpacetimePoint], step: f64) -> Result<f64> {
    let flat = MetricSpec::minkowski();
    let (mut res, mut scale) = (0.0_f64, 0.0_f64);
    for p in points {
        let (g1, g2) = problem.sources(p);
        let r1 = d0(field, p, step)? - g1;
        let r2 = d0_star(&flat, field, p, step)? - g2;
        res = res.max(r1.max_abs()).max(r2.max_abs());
        scale = scale.max(g1.max_abs()).max(g2.max_abs());
    }
    Ok(if res == 0.0 { 0.0 } else { res / scale })
}

fn sample_points(seed: u64, cfg: &FuzzConfig) -> Vec<SpacetimePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.base_seed.wrapping_add(seed) ^ 0x5eed);
    (0..cfg.residual_points)
        .map(|_| {
            let r = rng.gen_range(cfg.support[0]..cfg.support[1]);
            let c: f64 = rng.gen_range(-0.999..0.999);
            SpacetimePoint::from_polar(0.0, r, c.acos(), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    pub seed: u64,
    pub residual: f64,
    pub radial_residual: f64,
    /// Largest gap between the split-moment and direct-kernel potentials, relative to `max|u|`.
    pub quadrature_gap: f64,
    pub bounds: BoundReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seeds: Vec<SeedResult>,
    pub max_residual: f64,
    pub max_radial_residual: f64,
    pub max_quadrature_gap: f64,
    /// Empirical constants: the largest ratios over the campaign.
    pub constant0: f64,
    pub constant1: f64,
    /// `max/min` of the second-bound ratio across seeds.
    pub spread1: f64,
    pub max_annulus_ratio: f64,
    pub all_finite: bool,
    pub inf_bc_clean: bool,
}

pub fn run_seed(seed: u64, cfg: &FuzzConfig) -> Result<SeedResult> {
    let problem = random_problem(seed, cfg);
    let field = FixedTimeField::solve(&problem)?;
    let points = sample_points(seed, cfg);
    let residual = relative_residual(&problem, &field, &points, cfg.step)?;
    let radial = problem.radial_only();
    let radial_residual = relative_residual(&radial, &FixedTimeField::solve(&radial)?, &points, cfg.step)?;
    let mut gap = 0.0_f64;
    let mut size = 0.0_f64;
    for m in &field.modes {
        for k in 0..40 {
            let r = cfg.r0 + (cfg.r_max - cfg.r0) * (k as f64 + 0.5) / 40.0;
            let u = m.potential(r).0;
            gap = gap.max((u - m.potential_direct(r)).abs());
            size = size.max(u.abs());
        }
    }
    let bounds = verify_bounds(&problem, &field, &cfg.bounds)?;
    Ok(SeedResult { seed, residual, radial_residual, quadrature_gap: if gap == 0.0 { 0.0 } else { gap / size }, bounds })
}

/// Runs every seed in parallel and collects the empirical constants.
pub fn fuzz_campaign(cfg: &FuzzConfig) -> Result<FuzzReport> {
    let seeds: Vec<SeedResult> = (0..cfg.seeds).into_par_iter().map(|s| run_seed(s, cfg)).collect::<Result<_>>()?;
    let fold = |f: &dyn Fn(&SeedResult) -> f64| seeds.iter().map(f).fold(0.0_f64, f64::max);
    let r1: Vec<f64> = seeds.iter().map(|s| s.bounds.ratio1).collect();
    let min1 = r1.iter().copied().fold(f64::INFINITY, f64::min);
    let max1 = r1.iter().copied().fold(0.0_f64, f64::max);
    let all_finite = seeds.iter().all(|s| {
        s.bounds.ratio0.is_finite() && s.bounds.ratio1.is_finite() && s.bounds.annuli.iter().all(|a| a.ratio.is_finite())
    });
    Ok(FuzzReport {
        max_residual: fold(&|s| s.residual),
        max_radial_residual: fold(&|s| s.radial_residual),
        max_quadrature_gap: fold(&|s| s.quadrature_gap),
        constant0: fold(&|s| s.bounds.ratio0),
        constant1: max1,
        spread1: if min1 > 0.0 { max1 / min1 } else { f64::INFINITY },
        max_annulus_ratio: seeds.iter().flat_map(|s| s.bounds.annuli.iter().map(|a| a.ratio)).fold(0.0, f64::max),
        all_finite,
        inf_bc_clean: seeds.iter().all(|s| !s.bounds.inf_bc_violated),
        seeds,
    })
}
