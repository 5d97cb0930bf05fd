use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One radial building block of a source.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    /// `A·exp(1 − 1/(1 − ξ²))` for `|ξ| < 1`, `ξ = (r − center)/half_width`.
    Bump { center: f64, half_width: f64, amplitude: f64 },
    /// `A` on `[lo, hi]`.
    Indicator { lo: f64, hi: f64, amplitude: f64 },
}

impl Profile {
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            Profile::Bump { center, half_width, amplitude } => {
                let xi = (r - center) / half_width;
                if xi.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - 1.0 / (1.0 - xi * xi)).exp()
                }
            }
            Profile::Indicator { lo, hi, amplitude } => {
                if r >= lo && r <= hi {
                    amplitude
                } else {
                    0.0
                }
            }
        }
    }

    /// Derivative away from the jumps of an indicator.
    pub fn derivative(&self, r: f64) -> f64 {
        match *self {
            Profile::Bump { center, half_width, amplitude } => {
                let xi = (r - center) / half_width;
                if xi.abs() >= 1.0 {
                    return 0.0;
                }
                let q = 1.0 - xi * xi;
                amplitude * (1.0 - 1.0 / q).exp() * (-2.0 * xi / (q * q)) / half_width
            }
            Profile::Indicator { .. } => 0.0,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            Profile::Bump { center, half_width, .. } => (center - half_width, center + half_width),
            Profile::Indicator { lo, hi, .. } => (lo, hi),
        }
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self, Profile::Bump { .. })
    }

    pub fn scaled(&self, s: f64) -> Self {
        match *self {
            Profile::Bump { center, half_width, amplitude } => Profile::Bump { center, half_width, amplitude: s * amplitude },
            Profile::Indicator { lo, hi, amplitude } => Profile::Indicator { lo, hi, amplitude: s * amplitude },
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.support();
        let amp = match *self {
            Profile::Bump { amplitude, .. } | Profile::Indicator { amplitude, .. } => amplitude,
        };
        if !(lo.is_finite() && hi.is_finite() && amp.is_finite()) || !(hi > lo) {
            return Err(Error::Input(format!("non-integrable source profile {self:?}")));
        }
        Ok(())
    }
}

/// A sum of profiles; empty means identically zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SourceProfile(pub Vec<Profile>);

impl SourceProfile {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn single(p: Profile) -> Self {
        Self(vec![p])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|p| match *p {
            Profile::Bump { amplitude, .. } | Profile::Indicator { amplitude, .. } => amplitude == 0.0,
        })
    }

    pub fn value(&self, r: f64) -> f64 {
        self.0.iter().map(|p| p.value(r)).sum()
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.0.iter().map(|p| p.derivative(r)).sum()
    }

    /// Convex hull of the supports, `None` when empty.
    pub fn support(&self) -> Option<(f64, f64)> {
        self.0.iter().map(Profile::support).reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
    }

    /// Support endpoints, where the integrand may lose smoothness.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.0.iter().flat_map(|p| {
            let (a, b) = p.support();
            [a, b]
        }).collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.0.iter().all(Profile::is_smooth)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|p| p.scaled(s)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        self.0.iter().try_for_each(Profile::validate)
    }
}
