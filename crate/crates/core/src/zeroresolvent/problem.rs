use serde::{Deserialize, Serialize};

use crate::geometry::{SpacetimePoint, ThreeForm};
use crate::modes::{assoc_legendre, real_ylm};
use crate::{Error, Result};

use super::profile::SourceProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    /// Sources of `F_{ti}`: `div E` (in `d⁰⋆F`) and `curl E` (in `d⁰F`).
    Electric,
    /// Sources of `F_{ij}`: `div B` (in `d⁰F`) and `curl B` (in `d⁰⋆F`).
    Magnetic,
}

/// One nonradial `(l, m)` source in one sector.
///
/// The sector vector field is `E = α + ∇w` with the compactly supported
/// `α = g Y r̂ + h ∇_S Y + k r̂×∇_S Y` (`∇_S = r∇` on the unit sphere), so the
/// prescribed sources are `div E = ρ Y` and `curl E = curl α`, and the only
/// elliptic solve is `Δw = (ρ − div α)·Y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSource {
    pub l: u32,
    #[serde(default)]
    pub m: i32,
    pub sector: Sector,
    #[serde(default)]
    pub charge: SourceProfile,
    #[serde(default)]
    pub radial: SourceProfile,
    #[serde(default)]
    pub tangential: SourceProfile,
    #[serde(default)]
    pub toroidal: SourceProfile,
}

impl ModeSource {
    fn ll(&self) -> f64 {
        (self.l * (self.l + 1)) as f64
    }

    /// Coefficient of `Y` in `div α`.
    pub fn div_alpha(&self, r: f64) -> f64 {
        let g = self.radial.value(r);
        self.radial.derivative(r) + 2.0 * g / r - self.ll() * self.tangential.value(r) / r
    }

    /// Right side `σ` of the radial Poisson problem `u″ + 2u′/r − l(l+1)u/r² = σ`.
    pub fn poisson_rhs(&self, r: f64) -> f64 {
        self.charge.value(r) - self.div_alpha(r)
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        [&self.charge, &self.radial, &self.tangential, &self.toroidal]
            .into_iter()
            .filter_map(SourceProfile::support)
            .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        [&self.charge, &self.radial, &self.tangential, &self.toroidal].into_iter().flat_map(SourceProfile::breakpoints).collect()
    }

    /// `α` at `x`.
    pub fn alpha(&self, x: &SpacetimePoint) -> [f64; 3] {
        let r = x.r();
        let h = SurfaceHarmonic::at(self.l, self.m, x);
        let (g, t, k) = (self.radial.value(r), self.tangential.value(r), self.toroidal.value(r));
        combine(&[(g * h.y, h.rhat), (t, h.grad), (k, h.rot)])
    }

    /// `curl α` in closed form:
    /// `−(g/r) r̂×∇_SY + ((rh)′/r) r̂×∇_SY − l(l+1)(k/r) Y r̂ − ((rk)′/r) ∇_SY`.
    pub fn curl_alpha(&self, x: &SpacetimePoint) -> [f64; 3] {
        let r = x.r();
        let h = SurfaceHarmonic::at(self.l, self.m, x);
        let (g, t, k) = (self.radial.value(r), self.tangential.value(r), self.toroidal.value(r));
        let (dt, dk) = (self.tangential.derivative(r), self.toroidal.derivative(r));
        let rot = -g / r + dt + t / r;
        combine(&[(rot, h.rot), (-self.ll() * k / r * h.y, h.rhat), (-(dk + k / r), h.grad)])
    }

    pub fn divergence(&self, x: &SpacetimePoint) -> f64 {
        self.charge.value(x.r()) * real_ylm(self.l, self.m, x.theta(), x.phi())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            charge: self.charge.scaled(s),
            radial: self.radial.scaled(s),
            tangential: self.tangential.scaled(s),
            toroidal: self.toroidal.scaled(s),
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::InvalidMode { l: 0, s: 1 });
        }
        if self.m.unsigned_abs() > self.l {
            return Err(Error::Input(format!("|m| = {} exceeds l = {}", self.m.abs(), self.l)));
        }
        for p in [&self.radial, &self.tangential, &self.toroidal] {
            p.validate()?;
            if !p.is_smooth() {
                return Err(Error::Input("vector potentials of a mode source must be smooth bumps".into()));
            }
        }
        self.charge.validate()
    }
}

fn combine(terms: &[(f64, [f64; 3])]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (c, v) in terms {
        for i in 0..3 {
            out[i] += c * v[i];
        }
    }
    out
}

/// `Y_lm`, `∇_S Y`, `r̂×∇_S Y` and `r̂` in Cartesian components.
pub(crate) struct SurfaceHarmonic {
    pub y: f64,
    pub grad: [f64; 3],
    pub rot: [f64; 3],
    pub rhat: [f64; 3],
}

impl SurfaceHarmonic {
    pub fn at(l: u32, m: i32, x: &SpacetimePoint) -> Self {
        let (theta, phi) = (x.theta(), x.phi());
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let st = if st.abs() < 1e-300 { 1e-300 } else { st };
        let am = m.unsigned_abs();
        let y = real_ylm(l, m, theta, phi);
        let norm = ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI)
            * ((l - am + 1)..=(l + am)).fold(1.0, |acc, k| acc / k as f64))
        .sqrt()
            * if m == 0 { 1.0 } else { std::f64::consts::SQRT_2 };
        let p = assoc_legendre(l, am, ct);
        let pm1 = if l == 0 { 0.0 } else { assoc_legendre(l - 1, am, ct) };
        let dp_dtheta = (l as f64 * ct * p - (l + am) as f64 * pm1) / st;
        let mphi = am as f64 * phi;
        let (trig, dtrig) = match m.cmp(&0) {
            std::cmp::Ordering::Equal => (1.0, 0.0),
            std::cmp::Ordering::Greater => (mphi.cos(), -(am as f64) * mphi.sin()),
            std::cmp::Ordering::Less => (mphi.sin(), am as f64 * mphi.cos()),
        };
        let d_theta = norm * dp_dtheta * trig;
        let d_phi = norm * p * dtrig / st;
        let e_theta = [ct * cp, ct * sp, -st];
        let e_phi = [-sp, cp, 0.0];
        let rhat = [st * cp, st * sp, ct];
        let grad = combine(&[(d_theta, e_theta), (d_phi, e_phi)]);
        // r̂ × e_θ = e_φ, r̂ × e_φ = −e_θ
        let rot = combine(&[(d_theta, e_phi), (-d_phi, e_theta)]);
        Self { y, grad, rot, rhat }
    }
}

/// Sources of the fixed-time system `d⁰F = G₁`, `d⁰⋆F = G₂` on Minkowski,
/// given per sector as a radial part and nonradial modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedTimeProblem {
    pub r0: f64,
    pub r_max: f64,
    /// `r²` times the sphere average of `div E`.
    #[serde(default)]
    pub radial_electric: SourceProfile,
    /// `r²` times the sphere average of `div B`.
    #[serde(default)]
    pub radial_magnetic: SourceProfile,
    #[serde(default)]
    pub modes: Vec<ModeSource>,
}

impl FixedTimeProblem {
    pub fn empty(r0: f64, r_max: f64) -> Self {
        Self { r0, r_max, radial_electric: SourceProfile::zero(), radial_magnetic: SourceProfile::zero(), modes: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0 && self.r_max > self.r0) {
            return Err(Error::Input(format!("radial grid [{}, {}] is not a positive interval", self.r0, self.r_max)));
        }
        self.radial_electric.validate()?;
        self.radial_magnetic.validate()?;
        for m in &self.modes {
            m.validate()?;
        }
        let supports = [self.radial_electric.support(), self.radial_magnetic.support()]
            .into_iter()
            .chain(self.modes.iter().map(ModeSource::support))
            .flatten();
        for (lo, hi) in supports {
            if !(lo > self.r0 && hi < self.r_max) {
                return Err(Error::Input(format!(
                    "source support [{lo}, {hi}] not inside ({}, {})",
                    self.r0, self.r_max
                )));
            }
        }
        Ok(())
    }

    /// Outermost support radius of all sources.
    pub fn outer_support(&self) -> f64 {
        [self.radial_electric.support(), self.radial_magnetic.support()]
            .into_iter()
            .chain(self.modes.iter().map(ModeSource::support))
            .flatten()
            .map(|s| s.1)
            .fold(self.r0, f64::max)
    }

    pub fn radial_only(&self) -> Self {
        Self { modes: Vec::new(), ..self.clone() }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            radial_electric: self.radial_electric.scaled(s),
            radial_magnetic: self.radial_magnetic.scaled(s),
            modes: self.modes.iter().map(|m| m.scaled(s)).collect(),
            ..self.clone()
        }
    }

    /// Prescribed `(div, curl)` of one sector at `x`.
    pub fn sector_sources(&self, sector: Sector, x: &SpacetimePoint) -> (f64, [f64; 3]) {
        let r = x.r();
        let q = match sector {
            Sector::Electric => &self.radial_electric,
            Sector::Magnetic => &self.radial_magnetic,
        };
        let mut div = q.value(r) / (r * r);
        let mut curl = [0.0; 3];
        for m in self.modes.iter().filter(|m| m.sector == sector) {
            div += m.divergence(x);
            let c = m.curl_alpha(x);
            for i in 0..3 {
                curl[i] += c[i];
            }
        }
        (div, curl)
    }

    /// `(G₁, G₂)` at `x`; with `F_{ti} = −E_i`, `F_{ij} = ε_{ijk}B_k` and
    /// `⋆(E, B) = (−B, E)` these are `G₁ = (curl E, div B)`, `G₂ = (−curl B, div E)`.
    pub fn sources(&self, x: &SpacetimePoint) -> (ThreeForm, ThreeForm) {
        let (div_e, curl_e) = self.sector_sources(Sector::Electric, x);
        let (div_b, curl_b) = self.sector_sources(Sector::Magnetic, x);
        let form = |curl: [f64; 3], div: f64| ThreeForm([curl[2], -curl[1], curl[0], div]);
        (form(curl_e, div_b), form(curl_b.map(|c| -c), div_e))
    }

    /// Sphere-averaged parts `(Ḡ₁, Ḡ₂)` at `x`: only the `div` components survive the average.
    pub fn radial_sources(&self, x: &SpacetimePoint) -> (ThreeForm, ThreeForm) {
        let r = x.r();
        let rr = r * r;
        (
            ThreeForm([0.0, 0.0, 0.0, self.radial_magnetic.value(r) / rr]),
            ThreeForm([0.0, 0.0, 0.0, self.radial_electric.value(r) / rr]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeroresolvent::profile::Profile;

    fn bump(c: f64, w: f64, a: f64) -> SourceProfile {
        SourceProfile::single(Profile::Bump { center: c, half_width: w, amplitude: a })
    }

    fn fd_curl_div(f: &dyn Fn(&SpacetimePoint) -> [f64; 3], x: &SpacetimePoint) -> ([f64; 3], f64) {
        let h = 1e-4;
        let mut j = [[0.0; 3]; 3];
        for d in 0..3 {
            let (p, m) = (f(&x.shifted(d + 1, h)), f(&x.shifted(d + 1, -h)));
            for i in 0..3 {
                j[i][d] = (p[i] - m[i]) / (2.0 * h);
            }
        }
        ([j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]], j[0][0] + j[1][1] + j[2][2])
    }

    #[test]
    fn closed_form_curl_and_div_of_alpha() {
        for (l, m) in [(1, 0), (2, -1), (3, 2)] {
            let src = ModeSource {
                l,
                m,
                sector: Sector::Electric,
                charge: SourceProfile::zero(),
                radial: bump(3.0, 1.5, 0.7),
                tangential: bump(3.5, 1.2, -0.4),
                toroidal: bump(2.8, 1.0, 1.1),
            };
            for x in [SpacetimePoint::from_polar(0.0, 3.1, 0.7, 0.4), SpacetimePoint::from_polar(0.0, 2.5, 2.2, -1.9)] {
                let (curl, div) = fd_curl_div(&|p| src.alpha(p), &x);
                let exact = src.curl_alpha(&x);
                let ydiv = src.div_alpha(x.r()) * real_ylm(l, m, x.theta(), x.phi());
                for i in 0..3 {
                    assert!((curl[i] - exact[i]).abs() < 1e-6, "l={l} m={m} {curl:?} {exact:?}");
                }
                assert!((div - ydiv).abs() < 1e-6, "{div} {ydiv}");
            }
        }
    }

    #[test]
    fn surface_gradient_matches_differences() {
        let x = SpacetimePoint::from_polar(0.0, 1.0, 1.1, 0.6);
        let h = SurfaceHarmonic::at(2, 1, &x);
        let (curl, _) = fd_curl_div(&|_| [0.0; 3], &x);
        assert_eq!(curl, [0.0; 3]);
        // ∇_S Y = r∇Y at r = 1 for the degree-0 extension Y(x/|x|).
        let f = |p: &SpacetimePoint| real_ylm(2, 1, p.theta(), p.phi());
        for d in 0..3 {
            let g = (f(&x.shifted(d + 1, 1e-6)) - f(&x.shifted(d + 1, -1e-6))) / 2e-6;
            assert!((g - h.grad[d]).abs() < 1e-8);
        }
    }

    #[test]
    fn validation() {
        let mut p = FixedTimeProblem::empty(0.5, 10.0);
        assert!(p.validate().is_ok());
        p.radial_electric = bump(9.5, 1.0, 1.0);
        assert!(p.validate().is_err());
        p.radial_electric = SourceProfile::zero();
        p.modes.push(ModeSource {
            l: 0,
            m: 0,
            sector: Sector::Magnetic,
            charge: bump(3.0, 1.0, 1.0),
            radial: SourceProfile::zero(),
            tangential: SourceProfile::zero(),
            toroidal: SourceProfile::zero(),
        });
        assert!(matches!(p.validate(), Err(Error::InvalidMode { .. })));
    }
}
