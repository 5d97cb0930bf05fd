use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Closure-backed radial coefficient; derivatives come from finite differences.
pub type RadialClosure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closure-backed spatial coefficient `f(x, y, z)`.
pub type SpatialClosure = Arc<dyn Fn([f64; 3]) -> f64 + Send + Sync>;

/// Radial coefficient functions. The named variants form the config registry
/// and carry analytic derivatives of every order.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialFn {
    Zero,
    /// `amplitude · r^power`
    Power { amplitude: f64, power: i32 },
    /// `amplitude / (r − shift)`
    ShiftedInverse { amplitude: f64, shift: f64 },
    /// `amplitude · sin(r) / r`
    SinOverR { amplitude: f64 },
    #[serde(skip)]
    Custom(RadialClosure),
}

impl fmt::Debug for RadialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialFn::Zero => write!(f, "Zero"),
            RadialFn::Power { amplitude, power } => write!(f, "Power({amplitude} r^{power})"),
            RadialFn::ShiftedInverse { amplitude, shift } => {
                write!(f, "ShiftedInverse({amplitude}/(r-{shift}))")
            }
            RadialFn::SinOverR { amplitude } => write!(f, "SinOverR({amplitude})"),
            RadialFn::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl PartialEq for RadialFn {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (RadialFn::Custom(a), RadialFn::Custom(b)) => Arc::ptr_eq(a, b),
            (RadialFn::Custom(_), _) | (_, RadialFn::Custom(_)) => false,
            _ => format!("{self:?}") == format!("{other:?}"),
        }
    }
}

fn falling_factorial(p: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (p - i as f64))
}

fn factorial(j: usize) -> f64 {
    (1..=j).fold(1.0, |acc, i| acc * i as f64)
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

impl RadialFn {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialFn::Custom(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RadialFn::Zero)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.deriv(r, 0)
    }

    /// `d^j f / dr^j` at `r`.
    pub fn deriv(&self, r: f64, j: usize) -> f64 {
        match self {
            RadialFn::Zero => 0.0,
            RadialFn::Power { amplitude, power } => {
                let p = *power as f64;
                amplitude * falling_factorial(p, j) * r.powf(p - j as f64)
            }
            RadialFn::ShiftedInverse { amplitude, shift } => {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                amplitude * sign * factorial(j) / (r - shift).powi(j as i32 + 1)
            }
            RadialFn::SinOverR { amplitude } => {
                // Leibniz rule on sin(r) · r^{-1}.
                let mut acc = 0.0;
                for i in 0..=j {
                    let k = j - i;
                    let sin_i = (r + i as f64 * std::f64::consts::FRAC_PI_2).sin();
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let inv_k = sign * factorial(k) / r.powi(k as i32 + 1);
                    acc += binomial(j, i) * sin_i * inv_k;
                }
                amplitude * acc
            }
            RadialFn::Custom(f) => fd_derivative(&|x| f(x), r, j),
        }
    }
}

/// Nested central differences at step `h = 1e-4 · max(1, r)`.
fn fd_derivative(f: &dyn Fn(f64) -> f64, r: f64, j: usize) -> f64 {
    if j == 0 {
        return f(r);
    }
    let h = 1e-4 * r.abs().max(1.0);
    let lo = fd_derivative(f, r - h, j - 1);
    let hi = fd_derivative(f, r + h, j - 1);
    (hi - lo) / (2.0 * h)
}

/// Spatial (non-radial) coefficient functions for the short-range metric part.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpatialFn {
    /// `amplitude · x_a x_b / (r² (4 + r²))`: smooth, anisotropic, `O(r^{-2})`.
    AnisotropicInverseSquare { amplitude: f64, a: usize, b: usize },
    /// `amplitude · x_a / (r (4 + r²))`: odd under reflection, `O(r^{-2})`.
    DipoleInverseSquare { amplitude: f64, a: usize },
    #[serde(skip)]
    Custom(SpatialClosure),
}

impl fmt::Debug for SpatialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpatialFn::AnisotropicInverseSquare { amplitude, a, b } => {
                write!(f, "AnisotropicInverseSquare({amplitude}, {a}, {b})")
            }
            SpatialFn::DipoleInverseSquare { amplitude, a } => {
                write!(f, "DipoleInverseSquare({amplitude}, {a})")
            }
            SpatialFn::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl SpatialFn {
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        match self {
            SpatialFn::AnisotropicInverseSquare { amplitude, a, b } => {
                if r2 == 0.0 {
                    0.0
                } else {
                    amplitude * x[*a] * x[*b] / (r2 * (4.0 + r2))
                }
            }
            SpatialFn::DipoleInverseSquare { amplitude, a } => {
                let r = r2.sqrt();
                if r == 0.0 {
                    0.0
                } else {
                    amplitude * x[*a] / (r * (4.0 + r2))
                }
            }
            SpatialFn::Custom(f) => f(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: &RadialFn, r: f64, j: usize) -> f64 {
        fd_derivative(&|x| f.eval(x), r, j)
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let fns = [
            RadialFn::Power { amplitude: 2.0, power: -1 },
            RadialFn::ShiftedInverse { amplitude: 2.0, shift: 2.0 },
            RadialFn::SinOverR { amplitude: 1.5 },
        ];
        for f in &fns {
            for &r in &[3.0, 7.5, 20.0] {
                for j in 0..3 {
                    let exact = f.deriv(r, j);
                    let approx = fd(f, r, j);
                    assert!(
                        (exact - approx).abs() < 1e-5 * (1.0 + exact.abs()),
                        "{f:?} j={j} r={r}: {exact} vs {approx}"
                    );
                }
            }
        }
    }

    #[test]
    fn registry_round_trips_through_json() {
        let f = RadialFn::Power { amplitude: 1.0, power: -1 };
        let s = serde_json::to_string(&f).unwrap();
        let back: RadialFn = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
    }
}
