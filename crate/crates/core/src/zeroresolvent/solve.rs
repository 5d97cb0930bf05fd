use serde::Serialize;

use crate::geometry::{SpacetimePoint, TwoForm};
use crate::tensorcalc::TwoFormField;
use crate::{Error, Result};

use super::problem::{FixedTimeProblem, ModeSource, Sector, SurfaceHarmonic};
use super::profile::SourceProfile;
use super::quad::{adaptive_split, Cumulative};

const CELL: f64 = 0.05;

/// `r²F̄(r) = −∫_r^∞ q` for one sector's radial source `q`.
#[derive(Clone, Debug)]
pub struct RadialProfileSolution {
    source: SourceProfile,
    table: Option<Cumulative>,
}

impl RadialProfileSolution {
    fn new(source: &SourceProfile) -> Self {
        let table = source.support().map(|(a, b)| Cumulative::new(&|r| source.value(r), a, b, &source.breakpoints(), CELL));
        Self { source: source.clone(), table }
    }

    /// `r²F̄(r)`, identically zero beyond the support.
    pub fn weighted(&self, r: f64) -> f64 {
        match &self.table {
            None => 0.0,
            Some(t) => {
                let f = |s| self.source.value(s);
                t.at(&f, r) - t.total()
            }
        }
    }

    /// `F̄(r)`, the radial field strength.
    pub fn value(&self, r: f64) -> f64 {
        self.weighted(r) / (r * r)
    }

    /// The same by adaptive Simpson, as an independent route.
    pub fn weighted_adaptive(&self, r: f64) -> f64 {
        match self.source.support() {
            None => 0.0,
            Some((_, b)) => -adaptive_split(&|s| self.source.value(s), r, b, &self.source.breakpoints(), 1e-14),
        }
    }
}

/// Radial parts of both sectors.
#[derive(Clone, Debug)]
pub struct RadialSolution {
    pub electric: RadialProfileSolution,
    pub magnetic: RadialProfileSolution,
}

/// Integrates the radial equations `∂_r(r²F̄) = r²Ḡ` in from infinity.
pub fn solve_radial(problem: &FixedTimeProblem) -> Result<RadialSolution> {
    problem.radial_electric.validate()?;
    problem.radial_magnetic.validate()?;
    Ok(RadialSolution {
        electric: RadialProfileSolution::new(&problem.radial_electric),
        magnetic: RadialProfileSolution::new(&problem.radial_magnetic),
    })
}

/// Green-function solution of one nonradial mode:
/// `u(r) = −[r^{−l−1}∫_0^r s^{l+2}σ + r^l∫_r^∞ s^{1−l}σ]/(2l+1)`.
#[derive(Clone, Debug)]
pub struct ModeSolution {
    pub source: ModeSource,
    inner: Option<Cumulative>,
    outer: Option<Cumulative>,
}

impl ModeSolution {
    fn new(source: &ModeSource) -> Self {
        let l = source.l as i32;
        let support = source.support();
        let breaks = source.breakpoints();
        let inner = support.map(|(a, b)| Cumulative::new(&|s: f64| s.powi(l + 2) * source.poisson_rhs(s), a, b, &breaks, CELL));
        let outer = support.map(|(a, b)| Cumulative::new(&|s: f64| s.powi(1 - l) * source.poisson_rhs(s), a, b, &breaks, CELL));
        Self { source: source.clone(), inner, outer }
    }

    fn moments(&self, r: f64) -> (f64, f64) {
        let l = self.source.l as i32;
        match (&self.inner, &self.outer) {
            (Some(i), Some(o)) => {
                let fi = |s: f64| s.powi(l + 2) * self.source.poisson_rhs(s);
                let fo = |s: f64| s.powi(1 - l) * self.source.poisson_rhs(s);
                (i.at(&fi, r), o.total() - o.at(&fo, r))
            }
            _ => (0.0, 0.0),
        }
    }

    /// `(u, u′)` at `r`.
    pub fn potential(&self, r: f64) -> (f64, f64) {
        let l = self.source.l as i32;
        let lf = l as f64;
        let (i_in, i_out) = self.moments(r);
        let c = -1.0 / (2.0 * lf + 1.0);
        let u = c * (r.powi(-l - 1) * i_in + r.powi(l) * i_out);
        let du = c * (-(lf + 1.0) * r.powi(-l - 2) * i_in + lf * r.powi(l - 1) * i_out);
        (u, du)
    }

    /// `u(r) = ∫ K(r, s) σ(s) ds` with the kernel `K = −s² r_<^l / ((2l+1) r_>^{l+1})`
    /// integrated directly by adaptive Simpson.
    pub fn potential_direct(&self, r: f64) -> f64 {
        let Some((a, b)) = self.source.support() else { return 0.0 };
        let l = self.source.l as i32;
        let c = -1.0 / (2.0 * l as f64 + 1.0);
        let kernel = |s: f64| {
            let (lo, hi) = if s < r { (s, r) } else { (r, s) };
            c * s * s * lo.powi(l) / hi.powi(l + 1) * self.source.poisson_rhs(s)
        };
        let mut breaks = self.source.breakpoints();
        breaks.push(r);
        adaptive_split(&kernel, a, b, &breaks, 1e-15)
    }

    /// Exterior multipole coefficient `c` in `u = c·r^{−l−1}` beyond the support.
    pub fn exterior_coefficient(&self) -> f64 {
        let i_in = self.inner.as_ref().map_or(0.0, Cumulative::total);
        -i_in / (2.0 * self.source.l as f64 + 1.0)
    }

    /// Sector vector `α + ∇(uY)` at `x`.
    pub fn vector(&self, x: &SpacetimePoint) -> [f64; 3] {
        let r = x.r();
        let (u, du) = self.potential(r);
        let h = SurfaceHarmonic::at(self.source.l, self.source.m, x);
        let alpha = self.source.alpha(x);
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = alpha[i] + du * h.y * h.rhat[i] + u / r * h.grad[i];
        }
        out
    }
}

/// Solves `Δw = σY` for every nonradial mode.
pub fn solve_nonradial(problem: &FixedTimeProblem) -> Result<Vec<ModeSolution>> {
    problem.validate()?;
    Ok(problem.modes.iter().map(ModeSolution::new).collect())
}

/// The unique solution of the fixed-time system with `r·F̄ → 0` at infinity.
#[derive(Clone, Debug)]
pub struct FixedTimeField {
    pub problem: FixedTimeProblem,
    pub radial: RadialSolution,
    pub modes: Vec<ModeSolution>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileSample {
    pub r: f64,
    pub radial_electric: f64,
    pub radial_magnetic: f64,
    /// `(l, m, sector, u, u′)` per mode.
    pub modes: Vec<(u32, i32, Sector, f64, f64)>,
}

impl FixedTimeField {
    pub fn solve(problem: &FixedTimeProblem) -> Result<Self> {
        problem.validate()?;
        Ok(Self { problem: problem.clone(), radial: solve_radial(problem)?, modes: solve_nonradial(problem)? })
    }

    /// `(E, B)` with `F_{ti} = −E_i`, `F_{ij} = ε_{ijk}B_k`.
    pub fn electric_magnetic(&self, x: &SpacetimePoint) -> Result<([f64; 3], [f64; 3])> {
        let r = x.r();
        if !(r > 0.0) {
            return Err(Error::Domain { r, r_min: 0.0 });
        }
        let (er, br) = (self.radial.electric.value(r), self.radial.magnetic.value(r));
        let mut e = x.x.map(|c| er * c / r);
        let mut b = x.x.map(|c| br * c / r);
        for m in &self.modes {
            let v = m.vector(x);
            let target = match m.source.sector {
                Sector::Electric => &mut e,
                Sector::Magnetic => &mut b,
            };
            for i in 0..3 {
                target[i] += v[i];
            }
        }
        Ok((e, b))
    }

    pub fn profiles(&self, radii: &[f64]) -> Vec<ProfileSample> {
        radii
            .iter()
            .map(|&r| ProfileSample {
                r,
                radial_electric: self.radial.electric.value(r),
                radial_magnetic: self.radial.magnetic.value(r),
                modes: self
                    .modes
                    .iter()
                    .map(|m| {
                        let (u, du) = m.potential(r);
                        (m.source.l, m.source.m, m.source.sector, u, du)
                    })
                    .collect(),
            })
            .collect()
    }
}

pub(crate) fn em_to_form(e: [f64; 3], b: [f64; 3]) -> TwoForm {
    let mut f = TwoForm::ZERO;
    for i in 0..3 {
        f.set(0, i + 1, -e[i]);
    }
    f.set(2, 3, b[0]);
    f.set(3, 1, b[1]);
    f.set(1, 2, b[2]);
    f
}

impl TwoFormField for FixedTimeField {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        let (e, b) = self.electric_magnetic(p)?;
        Ok(em_to_form(e, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MetricSpec;
    use crate::tensorcalc::{d0, d0_star};
    use crate::zeroresolvent::profile::Profile;

    fn indicator(lo: f64, hi: f64) -> SourceProfile {
        SourceProfile::single(Profile::Indicator { lo, hi, amplitude: 1.0 })
    }

    fn bump(c: f64, w: f64, a: f64) -> SourceProfile {
        SourceProfile::single(Profile::Bump { center: c, half_width: w, amplitude: a })
    }

    #[test]
    fn radial_indicator_oracle() {
        let mut p = FixedTimeProblem::empty(0.5, 5.0);
        p.radial_electric = indicator(1.0, 2.0);
        let sol = solve_radial(&p).unwrap();
        for r in [0.6, 0.9] {
            assert!((sol.electric.value(r) + 1.0 / (r * r)).abs() < 1e-13);
        }
        for r in [2.0, 2.5, 4.0] {
            assert_eq!(sol.electric.value(r), 0.0);
        }
        let r = 1.4;
        assert!((sol.electric.weighted(r) + (2.0 - r)).abs() < 1e-13);
        assert!((sol.electric.weighted_adaptive(r) - sol.electric.weighted(r)).abs() < 1e-10);
        assert_eq!(sol.magnetic.value(1.5), 0.0);
    }

    #[test]
    fn radial_solve_is_linear() {
        let mut a = FixedTimeProblem::empty(0.5, 8.0);
        a.radial_magnetic = bump(3.0, 1.0, 1.0);
        let mut b = a.clone();
        b.radial_magnetic = bump(4.5, 2.0, -0.3);
        let mut ab = a.clone();
        ab.radial_magnetic = SourceProfile(vec![a.radial_magnetic.0[0].scaled(2.0), b.radial_magnetic.0[0]]);
        let (sa, sb, sab) = (solve_radial(&a).unwrap(), solve_radial(&b).unwrap(), solve_radial(&ab).unwrap());
        for r in [1.0, 2.7, 3.9, 6.0] {
            let lhs = sab.magnetic.value(r);
            let rhs = 2.0 * sa.magnetic.value(r) + sb.magnetic.value(r);
            assert!((lhs - rhs).abs() < 1e-14 * (1.0 + rhs.abs()));
        }
    }

    fn dipole(shift: f64) -> ModeSource {
        ModeSource {
            l: 1,
            m: 0,
            sector: Sector::Electric,
            charge: indicator(1.0 + shift, 2.0 + shift),
            radial: SourceProfile::zero(),
            tangential: SourceProfile::zero(),
            toroidal: SourceProfile::zero(),
        }
    }

    #[test]
    fn dipole_exterior_coefficient_and_two_quadratures() {
        for shift in [0.0, 0.75] {
            let sol = ModeSolution::new(&dipole(shift));
            let (a, b) = (1.0 + shift, 2.0 + shift);
            let moment = (b.powi(4) - a.powi(4)) / 4.0;
            assert!((sol.exterior_coefficient() + moment / 3.0).abs() < 1e-12);
            for r in [0.7, 1.3, 1.9 + shift, 3.5, 6.0] {
                let (u, _) = sol.potential(r);
                assert!((u - sol.potential_direct(r)).abs() < 1e-8, "r={r}");
            }
            let r = 5.0;
            assert!((sol.potential(r).0 - sol.exterior_coefficient() / (r * r)).abs() < 1e-14);
        }
    }

    #[test]
    fn potential_solves_the_radial_poisson_problem() {
        let src = ModeSource { l: 2, charge: bump(3.0, 1.2, 1.0), tangential: bump(3.3, 1.0, 0.5), ..dipole(0.0) };
        let sol = ModeSolution::new(&src);
        let h = 1e-3;
        for r in [2.2, 3.0, 3.9, 5.0] {
            let (_, dm) = sol.potential(r - h);
            let (_, dp) = sol.potential(r + h);
            let (u, du) = sol.potential(r);
            let lap = (dp - dm) / (2.0 * h) + 2.0 * du / r - 6.0 * u / (r * r);
            assert!((lap - src.poisson_rhs(r)).abs() < 1e-5, "r={r}: {lap} vs {}", src.poisson_rhs(r));
            let fd = (sol.potential(r + h).0 - sol.potential(r - h).0) / (2.0 * h);
            assert!((fd - du).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_sources_give_zero_field() {
        let f = FixedTimeField::solve(&FixedTimeProblem::empty(0.5, 8.0)).unwrap();
        let p = SpacetimePoint::from_polar(0.0, 2.0, 0.4, 1.0);
        assert_eq!(f.eval(&p).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn full_tensor_solves_the_fixed_time_system() {
        let mut p = FixedTimeProblem::empty(0.5, 8.0);
        p.radial_electric = bump(3.0, 1.5, 1.0);
        p.radial_magnetic = bump(4.0, 1.0, -0.5);
        p.modes.push(ModeSource {
            l: 2,
            m: 1,
            sector: Sector::Magnetic,
            charge: bump(3.5, 1.5, 0.8),
            radial: bump(3.0, 1.2, 0.3),
            tangential: bump(4.0, 1.3, -0.6),
            toroidal: bump(3.2, 1.0, 0.4),
        });
        p.modes.push(ModeSource { l: 1, m: -1, charge: bump(2.5, 1.0, 1.0), toroidal: bump(3.0, 1.1, 0.7), ..dipole(0.0) });
        let f = FixedTimeField::solve(&p).unwrap();
        let flat = MetricSpec::minkowski();
        for x in [
            SpacetimePoint::from_polar(0.0, 2.6, 0.7, 0.4),
            SpacetimePoint::from_polar(0.0, 3.7, 2.1, -2.0),
            SpacetimePoint::from_polar(0.0, 4.4, 1.3, 2.9),
        ] {
            let (g1, g2) = p.sources(&x);
            let r1 = d0(&f, &x, 1e-3).unwrap() - g1;
            let r2 = d0_star(&flat, &f, &x, 1e-3).unwrap() - g2;
            let scale = g1.max_abs().max(g2.max_abs());
            assert!(r1.max_abs() < 1e-7 * scale && r2.max_abs() < 1e-7 * scale, "{r1:?} {r2:?} {scale}");
        }
    }
}
