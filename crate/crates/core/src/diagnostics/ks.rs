use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::norms::FieldSamples;
use super::regions::{RegionKind, RegionSpec};

/// Both sides of the `L²→L^∞` embedding on one dyadic piece.
///
/// The right side is normalised by the same expression evaluated on a field of
/// unit modulus filling the enlargement, so `rhs` reads as an RMS amplitude plus
/// scale-weighted RMS gradient and `ratio = lhs/rhs` equals 1 for such a field.
/// `margin = 1 − ratio/C` with `C` the embedding constant of the policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsEntry {
    pub region: RegionSpec,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub margin: f64,
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub entries: Vec<KsEntry>,
    pub min_margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsPolicy {
    /// Implicit constant of the embeddings.
    pub constant: f64,
    /// Margins below this are flagged as tight.
    pub tight_below: f64,
    /// Pieces whose enlargement holds fewer lattice points are skipped.
    pub min_points: usize,
}

impl Default for KsPolicy {
    fn default() -> Self {
        Self { constant: 1.0, tight_below: 0.1, min_points: 16 }
    }
}

/// The enlargement `[T/2, 4T] × [R/2, 4R]` (or `[U/2, 4U]` in `t − r`).
fn in_enlargement(region: &RegionSpec, t: f64, r: f64) -> bool {
    let big_t = region.t_scale;
    if t < 0.5 * big_t || t > 4.0 * big_t {
        return false;
    }
    match region.kind {
        RegionKind::Near { r: rr } => {
            let lo = if rr <= 1.0 { 0.0 } else { 0.5 * rr };
            r >= lo && r <= 4.0 * rr
        }
        RegionKind::Far { u } => {
            let w = t - r;
            let lo = if u <= 1.0 { -2.0 * region.cone_offset } else { 0.5 * u };
            r >= 0.25 * t && w >= lo && w <= 4.0 * u
        }
        RegionKind::Cone | RegionKind::Interior => true,
    }
}

fn scale(region: &RegionSpec) -> f64 {
    match region.kind {
        RegionKind::Near { r } => r,
        RegionKind::Far { u } => u,
        _ => region.t_scale,
    }
}

/// Evaluates the embeddings on every `C_T^R`, `C_T^U` piece of the cone
/// `C_T` for which the samples hold data.
pub fn ks_monitor(samples: &FieldSamples, cone: &RegionSpec, policy: &KsPolicy) -> Result<KsReport> {
    samples.validate()?;
    if samples.gradient_density.iter().all(|row| row.iter().all(|&g| g == 0.0))
        && samples.density.iter().any(|row| row.iter().any(|&d| d != 0.0))
    {
        return Err(Error::Input("ks monitor needs derivative data".into()));
    }
    let wt = samples.time_weights();
    let four_pi = 4.0 * std::f64::consts::PI;
    let mut entries = Vec::new();
    for region in cone.decompose() {
        let mut lhs = 0.0_f64;
        let mut hit = false;
        let (mut vol, mut mass, mut grad, mut count) = (0.0, 0.0, 0.0, 0usize);
        for (k, &t) in samples.times.iter().enumerate() {
            for (j, &r) in samples.r.iter().enumerate() {
                if region.contains(t, r) {
                    hit = true;
                    lhs = lhs.max(samples.pointwise[k][j]);
                }
                if in_enlargement(&region, t, r) {
                    let w = wt[k] * samples.r_weights[j];
                    vol += four_pi * w;
                    mass += w * samples.density[k][j];
                    grad += w * samples.gradient_density[k][j];
                    count += 1;
                }
            }
        }
        if !hit || count < policy.min_points || vol <= 0.0 {
            continue;
        }
        let gain = samples.rotation_gain;
        let rhs = (gain * mass / vol).sqrt() + scale(&region) * (gain * grad / vol).sqrt();
        let ratio = if rhs > 0.0 { lhs / rhs } else if lhs == 0.0 { 0.0 } else { f64::INFINITY };
        let margin = 1.0 - ratio / policy.constant;
        entries.push(KsEntry { region, lhs, rhs, ratio, margin, tight: margin < policy.tight_below });
    }
    let min_margin = entries.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min);
    Ok(KsReport { entries, min_margin })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(density: impl Fn(f64, f64) -> f64, grad: impl Fn(f64, f64) -> f64) -> FieldSamples {
        let times: Vec<f64> = (0..=80).map(|k| 4.0 + k as f64 * 0.5).collect();
        let r: Vec<f64> = (0..400).map(|i| (i as f64 + 0.5) * 0.25).collect();
        let grid = |g: &dyn Fn(f64, f64) -> f64| times.iter().map(|&t| r.iter().map(|&x| g(t, x)).collect()).collect();
        FieldSamples {
            density: grid(&density),
            radial_density: grid(&|_, _| 0.0),
            gradient_density: grid(&grad),
            pointwise: grid(&|t, x| (density(t, x) / (4.0 * std::f64::consts::PI)).sqrt()),
            r_weights: r.iter().map(|x| x * x * 0.25).collect(),
            times,
            r,
            rotation_gain: 1.0,
        }
    }

    #[test]
    fn zero_field_has_nonnegative_margins() {
        let s = lattice(|_, _| 0.0, |_, _| 0.0);
        let rep = ks_monitor(&s, &RegionSpec::cone(8.0, 2.0), &KsPolicy::default()).unwrap();
        assert!(!rep.entries.is_empty());
        assert!(rep.min_margin >= 0.0);
    }

    #[test]
    fn unit_modulus_field_is_tight() {
        // Constant modulus everywhere: sup equals the RMS on every piece.
        let s = lattice(|_, _| 4.0 * std::f64::consts::PI, |_, _| 1e-30);
        let rep = ks_monitor(&s, &RegionSpec::cone(8.0, 2.0), &KsPolicy::default()).unwrap();
        for e in &rep.entries {
            assert!(e.margin.abs() < 1e-6 && e.tight, "{e:?}");
        }
    }

    #[test]
    fn localized_bump_ratios_are_order_one() {
        // Modulus exp(−(r − 0.8t)²/8) with its full (t, r) gradient.
        let bump = |t: f64, x: f64| (-(x - 0.8 * t).powi(2) / 4.0).exp();
        let s = lattice(bump, move |t, x| 1.64 * (x - 0.8 * t).powi(2) / 16.0 * bump(t, x));
        let cone = RegionSpec::cone(8.0, 2.0);
        let loose = KsPolicy { constant: 4.0, ..KsPolicy::default() };
        let rep = ks_monitor(&s, &cone, &loose).unwrap();
        assert!(rep.min_margin >= 0.0, "{rep:?}");
        let strict = ks_monitor(&s, &cone, &KsPolicy::default()).unwrap();
        assert!(strict.min_margin < rep.min_margin);
        assert!(rep.entries.iter().all(|e| e.ratio.is_finite() && e.ratio > 0.0));
    }

    #[test]
    fn missing_derivatives_rejected() {
        let s = lattice(|_, _| 1.0, |_, _| 0.0);
        assert!(ks_monitor(&s, &RegionSpec::cone(8.0, 2.0), &KsPolicy::default()).is_err());
    }
}
