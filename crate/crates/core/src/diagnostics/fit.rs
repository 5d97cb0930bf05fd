use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which part of a series counts as the tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowPolicy {
    /// Window length in decades of `t`.
    #[serde(default = "one")]
    pub decades: f64,
    /// Largest accepted relative difference between the slopes of the two halves.
    #[serde(default = "two_percent")]
    pub drift_tolerance: f64,
    /// End of the window; defaults to the last sample.
    #[serde(default)]
    pub t_end: Option<f64>,
}

fn one() -> f64 {
    1.0
}
fn two_percent() -> f64 {
    0.02
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self { decades: 1.0, drift_tolerance: 0.02, t_end: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// `p` in `|v| ∝ t^{−p}`.
    pub exponent: f64,
    pub std_error: f64,
    pub window: [f64; 2],
    /// Relative slope difference between the two halves of the window.
    pub drift: f64,
    pub stable: bool,
    /// Local exponents `−d log|v| / d log t` on a log-spaced grid over the whole series.
    pub local: Vec<(f64, f64)>,
}

const LOG_POINTS: usize = 200;

/// Least-squares line `y = a + b·x`; returns `(b, standard error of b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    let se = if xs.len() > 2 { (sse / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    (b, se)
}

/// `log|v|` at log-spaced abscissae in `[x0, x1]`, by linear interpolation of
/// `log|v|` in `log x`. The series must be sorted by `x`.
pub fn log_resample(series: &[(f64, f64)], x0: f64, x1: f64, points: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(points);
    let (l0, l1) = (x0.ln(), x1.ln());
    let mut j = 0;
    for k in 0..points {
        let lx = l0 + (l1 - l0) * k as f64 / (points - 1) as f64;
        let x = lx.exp();
        while j + 2 < series.len() && series[j + 1].0 < x {
            j += 1;
        }
        let (xa, va) = series[j];
        let (xb, vb) = series[(j + 1).min(series.len() - 1)];
        let w = if xb > xa { ((x.ln() - xa.ln()) / (xb.ln() - xa.ln())).clamp(0.0, 1.0) } else { 0.0 };
        out.push((lx, (1.0 - w) * va.abs().ln() + w * vb.abs().ln()));
    }
    out
}

/// Power-law slope of `|v|` against `x` over `[x0, x1]`, log-uniformly weighted.
pub fn power_slope(series: &[(f64, f64)], x0: f64, x1: f64) -> (f64, f64) {
    let pts = log_resample(series, x0, x1, LOG_POINTS);
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    linear_fit(&xs, &ys)
}

/// Self-convergence order `log₂(‖c − m‖ / ‖m − f‖)` of three series whose
/// resolutions differ by factors of two, compared on the coarse sample times.
pub fn self_convergence_order(coarse: &[(f64, f64)], medium: &[(f64, f64)], fine: &[(f64, f64)]) -> Result<f64> {
    let lookup = |series: &[(f64, f64)], t: f64| {
        let i = series.partition_point(|s| s.0 < t - 1e-9 * t.abs().max(1.0));
        series.get(i).filter(|s| (s.0 - t).abs() <= 1e-9 * t.abs().max(1.0)).map(|s| s.1)
    };
    let (mut cm, mut mf, mut matched) = (0.0, 0.0, 0usize);
    for &(t, c) in coarse {
        if let (Some(m), Some(f)) = (lookup(medium, t), lookup(fine, t)) {
            cm += (c - m).powi(2);
            mf += (m - f).powi(2);
            matched += 1;
        }
    }
    if matched < 2 {
        return Err(Error::Input("series share fewer than two sample times".into()));
    }
    if mf == 0.0 || cm == 0.0 {
        return Err(Error::Input("identical series give no convergence information".into()));
    }
    Ok(0.5 * (cm / mf).log2())
}

fn local_exponents(series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let positive: Vec<(f64, f64)> = series.iter().copied().filter(|&(t, v)| t > 0.0 && v != 0.0).collect();
    if positive.len() < 2 {
        return Vec::new();
    }
    let (t0, t1) = (positive[0].0, positive[positive.len() - 1].0);
    let pts = log_resample(&positive, t0, t1, LOG_POINTS);
    pts.windows(2).map(|w| ((0.5 * (w[0].0 + w[1].0)).exp(), -(w[1].1 - w[0].1) / (w[1].0 - w[0].0))).collect()
}

/// Fits `|v| ∝ t^{−p}` over the latest window allowed by `policy`.
pub fn fit_exponent(series: &[(f64, f64)], policy: &WindowPolicy) -> Result<DecayFit> {
    let last = series.last().ok_or_else(|| Error::InsufficientSpan("empty series".into()))?.0;
    let t_end = policy.t_end.unwrap_or(last).min(last);
    let t_start = t_end / 10f64.powf(policy.decades);
    if !(t_start > 0.0) || series[0].0 > t_start {
        return Err(Error::InsufficientSpan(format!(
            "series starts at t = {} but the window needs t ≥ {t_start}",
            series[0].0
        )));
    }
    let window: Vec<(f64, f64)> =
        series.iter().copied().filter(|&(t, _)| t >= t_start * (1.0 - 1e-12) && t <= t_end * (1.0 + 1e-12)).collect();
    if window.len() < 8 {
        return Err(Error::InsufficientSpan(format!("only {} samples in the window", window.len())));
    }
    let sign = window[0].1.signum();
    if let Some(&(t, _)) = window.iter().find(|&&(_, v)| v == 0.0 || v.signum() != sign) {
        return Err(Error::TailNotReached(format!(
            "sign change at t = {t:.1} inside [{t_start:.1}, {t_end:.1}]; extend t_final"
        )));
    }
    let (b, se) = power_slope(&window, t_start, t_end);
    let mid = (t_start * t_end).sqrt();
    let (b1, _) = power_slope(&window, t_start, mid);
    let (b2, _) = power_slope(&window, mid, t_end);
    let drift = ((b1 - b2) / b).abs();
    Ok(DecayFit {
        exponent: -b,
        std_error: se,
        window: [t_start, t_end],
        drift,
        stable: drift < policy.drift_tolerance,
        local: local_exponents(series),
    })
}
