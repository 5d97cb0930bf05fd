use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{annulus, bracket};
use crate::geometry::{hodge_star_2form, MetricSpec, SpacetimePoint, ThreeForm, TwoForm};
use crate::modes::{gauss_legendre, radial_components, radial_form, RadialPart, SphereQuadrature};
use crate::tensorcalc::{d0, default_step, stencil4, FnField, TwoFormField};
use crate::{Error, Result};

use super::problem::FixedTimeProblem;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsConfig {
    /// Norms are integrated over `r₀ ≤ r ≤ r_outer`.
    pub r_outer: f64,
    /// Gauss points in `θ` of the sphere rule.
    pub sphere_n: usize,
    pub nodes_per_unit: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
    /// Dyadic shells beyond `r_outer` sampled for the decay condition at infinity.
    pub tail_shells: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self { r_outer: 64.0, sphere_n: 6, nodes_per_unit: 6.0, min_nodes: 16, max_nodes: 48, tail_shells: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusRatio {
    pub label: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Both sides of the strengthened fixed-time bounds and the radial improvement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `‖F‖ + ‖⟨r⟩∇F‖ + ‖⟨r⟩F̄‖ + ‖⟨r⟩²∇F̄‖` in `𝓛𝓔` against `‖G‖ + ‖⟨r⟩Ḡ‖` in `𝓛𝓔*`.
    pub lhs0: f64,
    pub rhs0: f64,
    pub ratio0: f64,
    /// `‖⟨r⟩⁻¹F‖ + ‖∇F‖ + ‖⟨r⟩F̄‖ + ‖⟨r⟩²∇F̄‖` against `‖⟨r⟩⁻¹G‖ + ‖⟨r⟩Ḡ‖`.
    pub lhs1: f64,
    pub rhs1: f64,
    pub ratio1: f64,
    /// `‖⟨r⟩^{3/2}F̄‖_{L²(A_R)}` against `‖⟨r⟩²Ḡ‖_{𝓛𝓔*} + ‖⟨r⟩^{−1/2}F‖_{L²(A_R)}`.
    pub annuli: Vec<AnnulusRatio>,
    /// `(R, ‖1_{r>R} r F̄‖_{𝓛𝓔})` on dyadic shells out to large radii.
    pub tail: Vec<(f64, f64)>,
    pub inf_bc_violated: bool,
    /// Field and sources both vanish; ratios are reported as 0.
    pub trivial: bool,
}

/// Per-annulus, per-component sums of weighted squares.
#[derive(Default)]
struct Acc<const N: usize> {
    sums: BTreeMap<u64, [f64; N]>,
}

impl<const N: usize> Acc<N> {
    fn add(&mut self, label: f64, comps: &[f64; N], weight: f64) {
        let slot = self.sums.entry(label as u64).or_insert([0.0; N]);
        for c in 0..N {
            slot[c] += weight * comps[c] * comps[c];
        }
    }

    /// `Σ_components sup_R`.
    fn le(&self) -> f64 {
        (0..N).map(|c| self.sums.values().fold(0.0_f64, |a, s| a.max(s[c].sqrt()))).sum()
    }

    /// `Σ_components Σ_R`.
    fn le_star(&self) -> f64 {
        (0..N).map(|c| self.sums.values().map(|s| s[c].sqrt()).sum::<f64>()).sum()
    }

    fn on_annulus(&self, label: f64) -> f64 {
        self.sums.get(&(label as u64)).map_or(0.0, |s| s.iter().map(|v| v.sqrt()).sum())
    }
}

/// Radial nodes and weights (for `∫ · r² dr`) on `[a, b]` split at the annulus edges.
fn radial_nodes(a: f64, b: f64, cfg: &BoundsConfig) -> Vec<(f64, f64)> {
    let mut edges = vec![a];
    let mut k = 2;
    loop {
        let e = (4f64.powi(k) - 4.0).sqrt();
        if e >= b {
            break;
        }
        if e > a {
            edges.push(e);
        }
        k += 1;
    }
    edges.push(b);
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let len = w[1] - w[0];
        let n = ((cfg.nodes_per_unit * len).ceil() as usize).clamp(cfg.min_nodes, cfg.max_nodes);
        let (x, wt) = gauss_legendre(n);
        for (xi, wi) in x.iter().zip(&wt) {
            let r = 0.5 * (w[0] + w[1]) + 0.5 * len * xi;
            out.push((r, 0.5 * len * wi * r * r));
        }
    }
    out
}

fn sphere_average(field: &impl TwoFormField, r: f64, q: &SphereQuadrature) -> Result<RadialPart> {
    let (mut tr, mut area) = (0.0, 0.0);
    for &(th, ph, w) in &q.nodes {
        let p = SpacetimePoint::from_polar(0.0, r, th, ph);
        let (a, b) = radial_components(&field.eval(&p)?, &p);
        tr += w * a;
        area += w * b;
    }
    let s = 4.0 * std::f64::consts::PI;
    Ok(RadialPart { tr: tr / s, area: area / s })
}

fn grad_norms(d: &[TwoForm; 3]) -> [f64; 6] {
    std::array::from_fn(|c| (0..3).map(|i| d[i].0[c] * d[i].0[c]).sum::<f64>().sqrt())
}

/// Weighted-norm ratios of the strengthened fixed-time bounds for `field`
/// against the sources of `problem`.
pub fn verify_bounds(problem: &FixedTimeProblem, field: &impl TwoFormField, cfg: &BoundsConfig) -> Result<BoundReport> {
    if !(cfg.r_outer > problem.r0) || cfg.sphere_n < 2 {
        return Err(Error::Input(format!("empty norm domain [{}, {}]", problem.r0, cfg.r_outer)));
    }
    let q = SphereQuadrature::new(cfg.sphere_n);
    let nodes = radial_nodes(problem.r0, cfg.r_outer, cfg);

    let (mut f_m1, mut f_m3, mut df_p1, mut df_m1, mut fb_p1, mut dfb_p3, mut fb_p3) =
        (Acc::<6>::default(), Acc::<6>::default(), Acc::<6>::default(), Acc::<6>::default(), Acc::<6>::default(), Acc::<6>::default(), Acc::<6>::default());
    let (mut g_p1, mut g_m1, mut gb_p3, mut gb_p5) = (Acc::<8>::default(), Acc::<8>::default(), Acc::<8>::default(), Acc::<8>::default());

    for &(r, wr) in &nodes {
        let label = annulus(r);
        let b = bracket(r);
        let h = default_step(&SpacetimePoint::from_polar(0.0, r, 1.0, 0.0));
        let rp = sphere_average(field, r, &q)?;
        let shifted = |k: f64| sphere_average(field, r + k * h, &q);
        let (m2, m1, p1, p2) = (shifted(-2.0)?, shifted(-1.0)?, shifted(1.0)?, shifted(2.0)?);
        let d_rp = RadialPart {
            tr: (m2.tr - p2.tr + 8.0 * (p1.tr - m1.tr)) / (12.0 * h),
            area: (m2.area - p2.area + 8.0 * (p1.area - m1.area)) / (12.0 * h),
        };
        for &(th, ph, ws) in &q.nodes {
            let p = SpacetimePoint::from_polar(0.0, r, th, ph);
            let w = wr * ws;
            let f = field.eval(&p)?.0;
            let mut d = [TwoForm::ZERO; 3];
            for (i, slot) in d.iter_mut().enumerate() {
                *slot = TwoForm(stencil4(&p, i + 1, h, |x| field.eval(x).map(|v| v.0))?);
            }
            let df = grad_norms(&d);
            let fb = radial_form(&rp, &p).0;
            let mut db = [TwoForm::ZERO; 3];
            for (i, slot) in db.iter_mut().enumerate() {
                let geometric = TwoForm(stencil4(&p, i + 1, h, |x| Ok(radial_form(&rp, x).0))?);
                *slot = geometric + radial_form(&d_rp, &p) * (p.x[i] / r);
            }
            let dfb = grad_norms(&db);
            f_m1.add(label, &f, w / b);
            f_m3.add(label, &f, w / b.powi(3));
            df_p1.add(label, &df, w * b);
            df_m1.add(label, &df, w / b);
            fb_p1.add(label, &fb, w * b);
            dfb_p3.add(label, &dfb, w * b.powi(3));
            fb_p3.add(label, &fb, w * b.powi(3));

            let (g1, g2) = problem.sources(&p);
            let (gb1, gb2) = problem.radial_sources(&p);
            let cat = |a: ThreeForm, c: ThreeForm| -> [f64; 8] { std::array::from_fn(|k| if k < 4 { a.0[k] } else { c.0[k - 4] }) };
            let (g, gb) = (cat(g1, g2), cat(gb1, gb2));
            g_p1.add(label, &g, w * b);
            g_m1.add(label, &g, w / b);
            gb_p3.add(label, &gb, w * b.powi(3));
            gb_p5.add(label, &gb, w * b.powi(5));
        }
    }

    let radial_terms = fb_p1.le() + dfb_p3.le();
    let lhs0 = f_m1.le() + df_p1.le() + radial_terms;
    let lhs1 = f_m3.le() + df_m1.le() + radial_terms;
    let rhs0 = g_p1.le_star() + gb_p3.le_star();
    let rhs1 = g_m1.le_star() + gb_p3.le_star();
    let trivial = lhs0 == 0.0 && rhs0 == 0.0;
    let ratio = |l: f64, r: f64| if l == 0.0 { 0.0 } else { l / r };

    let g2_star = gb_p5.le_star();
    let annuli = fb_p3
        .sums
        .keys()
        .map(|&k| {
            let label = k as f64;
            let lhs = fb_p3.on_annulus(label);
            let rhs = g2_star + f_m1.on_annulus(label);
            AnnulusRatio { label, lhs, rhs, ratio: ratio(lhs, rhs) }
        })
        .collect();

    let tail = tail_profile(field, cfg, &q)?;
    let peak = tail.iter().fold(0.0_f64, |a, t| a.max(t.1));
    let last = tail.last().map_or(0.0, |t| t.1);
    let inf_bc_violated = peak > 0.0 && last > 0.25 * peak;

    Ok(BoundReport {
        lhs0,
        rhs0,
        ratio0: ratio(lhs0, rhs0),
        lhs1,
        rhs1,
        ratio1: ratio(lhs1, rhs1),
        annuli,
        tail,
        inf_bc_violated,
        trivial,
    })
}

/// `sup_{R′ ≥ R} ‖⟨r⟩^{−1/2} r F̄‖_{L²(A_R′)}` on dyadic shells from `r_outer` outwards.
fn tail_profile(field: &impl TwoFormField, cfg: &BoundsConfig, q: &SphereQuadrature) -> Result<Vec<(f64, f64)>> {
    let (x, wt) = gauss_legendre(16);
    let mut shells = Vec::new();
    let mut lo = cfg.r_outer;
    for _ in 0..cfg.tail_shells {
        let hi = 2.0 * lo;
        let mut acc = 0.0;
        for (xi, wi) in x.iter().zip(&wt) {
            let r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xi;
            let rp = sphere_average(field, r, q)?;
            let p = SpacetimePoint::from_polar(0.0, r, 1.0, 0.5);
            let fb = radial_form(&rp, &p);
            // Sphere-symmetric modulus: integrate the sphere analytically.
            acc += 0.5 * (hi - lo) * wi * r * r * 4.0 * std::f64::consts::PI * r * r * fb.norm().powi(2) / bracket(r);
        }
        shells.push((lo, acc.sqrt()));
        lo = hi;
    }
    let mut out = shells.clone();
    for k in (0..out.len().saturating_sub(1)).rev() {
        out[k].1 = out[k].1.max(out[k + 1].1);
    }
    Ok(out)
}

/// Size of the error term `d⁰((⋆_g − ★)F)` produced by a perturbed metric,
/// relative to the source side of the flat bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub error_le_star: f64,
    pub weighted_error_le_star: f64,
    pub source_norm: f64,
    pub ratio: f64,
}

/// One pass of the perturbative correction: evaluates `d⁰(⋆_g − ★)F` for the
/// flat solution `F` and measures it in `𝓛𝓔*` and `⟨r⟩𝓛𝓔*`.
pub fn perturbation_check(problem: &FixedTimeProblem, field: &impl TwoFormField, metric: &MetricSpec, cfg: &BoundsConfig) -> Result<PerturbationReport> {
    let flat = MetricSpec::minkowski();
    let r_start = problem.r0.max(2.0 * metric.excision_radius());
    let diff = FnField(|p: &SpacetimePoint| {
        let f = field.eval(p)?;
        Ok(hodge_star_2form(metric, p, &f)? - hodge_star_2form(&flat, p, &f)?)
    });
    let q = SphereQuadrature::new(cfg.sphere_n);
    let coarse = BoundsConfig { nodes_per_unit: 2.0, min_nodes: 8, max_nodes: 16, ..*cfg };
    let (mut e, mut ew) = (Acc::<4>::default(), Acc::<4>::default());
    for (r, wr) in radial_nodes(r_start, cfg.r_outer, &coarse) {
        let label = annulus(r);
        let b = bracket(r);
        for &(th, ph, ws) in &q.nodes {
            let p = SpacetimePoint::from_polar(0.0, r, th, ph);
            let v = d0(&diff, &p, default_step(&p))?.0;
            e.add(label, &v, wr * ws * b);
            ew.add(label, &v, wr * ws * b.powi(3));
        }
    }
    let report = verify_bounds(problem, field, cfg)?;
    let error_le_star = e.le_star();
    Ok(PerturbationReport {
        error_le_star,
        weighted_error_le_star: ew.le_star(),
        source_norm: report.rhs0,
        ratio: if error_le_star == 0.0 { 0.0 } else { error_le_star / report.rhs0 },
    })
}
