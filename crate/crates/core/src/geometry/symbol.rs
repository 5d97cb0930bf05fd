use serde::{Deserialize, Serialize};

use super::coefficient::RadialFn;
use crate::{Error, Result};

/// `⟨r⟩ = √(4 + r²)`.
pub fn japanese_bracket(r: f64) -> f64 {
    (4.0 + r * r).sqrt()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolCheckOptions {
    pub r0: f64,
    pub r_max: f64,
    pub samples_per_decade: usize,
    /// Bound `c_j` per derivative order; missing entries default to `10·(j+1)!`.
    pub bounds: Vec<f64>,
}

impl Default for SymbolCheckOptions {
    fn default() -> Self {
        Self { r0: 1.0, r_max: 1e4, samples_per_decade: 4000, bounds: Vec::new() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolOrder {
    pub j: usize,
    pub sup_ratio: f64,
    pub bound: f64,
    /// Sup over the last decade divided by the sup over the one before it.
    pub growth: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolReport {
    pub k: i32,
    pub orders: Vec<SymbolOrder>,
    pub pass: bool,
    pub first_failing_order: Option<usize>,
}

/// Checks `f ∈ S^Z(r^k)`: `sup r^j |∂_r^j f| / ⟨r⟩^k` for `j ≤ j_max` over
/// log-spaced samples of `[r0, r_max]`.
///
/// An order passes when the sup is finite, below its bound, and the sup over
/// the last sampled decade does not exceed twice the sup over the previous one.
pub fn symbol_class_check(f: &RadialFn, k: i32, j_max: usize, opts: &SymbolCheckOptions) -> Result<SymbolReport> {
    if !(opts.r0 > 0.0 && opts.r_max > opts.r0) {
        return Err(Error::Input(format!("bad sample range [{}, {}]", opts.r0, opts.r_max)));
    }
    let decades = (opts.r_max / opts.r0).log10();
    let n = ((decades * opts.samples_per_decade as f64).ceil() as usize).max(2);
    let step = (opts.r_max / opts.r0).ln() / (n - 1) as f64;
    let last = opts.r_max / 10.0;
    let prev = opts.r_max / 100.0;

    let mut orders = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let (mut sup, mut sup_last, mut sup_prev) = (0.0_f64, 0.0_f64, 0.0_f64);
        for i in 0..n {
            let r = opts.r0 * (step * i as f64).exp();
            let d = f.deriv(r, j);
            if d.is_nan() {
                return Err(Error::Input(format!("NaN sample of derivative {j} at r = {r}")));
            }
            let ratio = r.powi(j as i32) * d.abs() / japanese_bracket(r).powi(k);
            sup = sup.max(ratio);
            if r >= last {
                sup_last = sup_last.max(ratio);
            } else if r >= prev {
                sup_prev = sup_prev.max(ratio);
            }
        }
        let bound = opts.bounds.get(j).copied().unwrap_or_else(|| 10.0 * (1..=j + 1).product::<usize>() as f64);
        let growth = if sup_prev > 0.0 { sup_last / sup_prev } else if sup_last > 0.0 { f64::INFINITY } else { 1.0 };
        let pass = sup.is_finite() && sup <= bound && growth <= 2.0;
        orders.push(SymbolOrder { j, sup_ratio: sup, bound, growth, pass });
    }
    let first_failing_order = orders.iter().find(|o| !o.pass).map(|o| o.j);
    Ok(SymbolReport { k, pass: first_failing_order.is_none(), first_failing_order, orders })
}

/// Coefficients of the Schwarzschild metric measured against the flat normal
/// form: `−g_tt − 1`, `g_rr − 1` and the Regge-Wheeler angular coefficient
/// `2M/r`, each in `S^Z(r^{-1})`.
pub fn schwarzschild_coefficients(mass: f64) -> Vec<(&'static str, RadialFn, i32)> {
    vec![
        ("lapse_deficit", RadialFn::Power { amplitude: 2.0 * mass, power: -1 }, -1),
        ("radial_excess", RadialFn::ShiftedInverse { amplitude: 2.0 * mass, shift: 2.0 * mass }, -1),
        ("angular", RadialFn::Power { amplitude: 2.0 * mass, power: -1 }, -1),
    ]
}
