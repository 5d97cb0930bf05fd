use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::{hodge_star_2form, MetricSpec, SpacetimePoint, TwoForm};
use crate::tensorcalc::TwoFormField;
use crate::{Error, Result};

use super::harmonics::SphereQuadrature;

/// Spherical average of a 2-form on one sphere: `F̄ = tr dt∧dr + area sinθ dθ∧dφ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RadialPart {
    pub tr: f64,
    /// Coefficient of the area form `sinθ dθ∧dφ` (`r²` times the orthonormal `F_AB`).
    pub area: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChargePair {
    pub q_e: f64,
    pub q_m: f64,
}

/// `F_{tr}` and `F_{θφ}/sinθ` at `p`.
pub fn radial_components(f: &TwoForm, p: &SpacetimePoint) -> (f64, f64) {
    let r = p.r();
    let n = [p.x[0] / r, p.x[1] / r, p.x[2] / r];
    let tr: f64 = (0..3).map(|i| f.get(0, i + 1) * n[i]).sum();
    // F_{θφ}/sinθ = r² F(ê_θ, ê_φ) = r² n·(B) with B_i = ½ε_{ijk}F_{jk}.
    let b = [f.get(2, 3), f.get(3, 1), f.get(1, 2)];
    let area = r * r * (0..3).map(|i| b[i] * n[i]).sum::<f64>();
    (tr, area)
}

/// The 2-form `tr dt∧dr + area sinθ dθ∧dφ` at `p`.
pub fn radial_form(rp: &RadialPart, p: &SpacetimePoint) -> TwoForm {
    let r = p.r();
    let r3 = r * r * r;
    let mut f = TwoForm::ZERO;
    for i in 0..3 {
        f.set(0, i + 1, rp.tr * p.x[i] / r);
    }
    let [x, y, z] = p.x;
    f.set(1, 2, rp.area * z / r3);
    f.set(2, 3, rp.area * x / r3);
    f.set(3, 1, rp.area * y / r3);
    f
}

fn check_quadrature(n: usize) -> Result<()> {
    if n < 8 {
        return Err(Error::Input(format!("sphere quadrature needs at least 8 points, got {n}")));
    }
    Ok(())
}

/// Sphere average of `(F_tr, F_θφ/sinθ)` on the sphere of radius `r` at time `t`.
pub fn radial_part(field: &impl TwoFormField, t: f64, r: f64, quadrature_n: usize) -> Result<RadialPart> {
    check_quadrature(quadrature_n)?;
    let q = SphereQuadrature::new(quadrature_n);
    let mut tr = 0.0;
    let mut area = 0.0;
    for &(th, ph, w) in &q.nodes {
        let p = SpacetimePoint::from_polar(t, r, th, ph);
        let (a, b) = radial_components(&field.eval(&p)?, &p);
        tr += w * a;
        area += w * b;
    }
    Ok(RadialPart { tr: tr / (4.0 * PI), area: area / (4.0 * PI) })
}

/// `q_e = −(1/4π)∮⋆F`, `q_m = (1/4π)∮F`; both return `q` for the Coulomb and monopole fields.
pub fn charges(spec: &MetricSpec, field: &impl TwoFormField, t: f64, r: f64, quadrature_n: usize) -> Result<ChargePair> {
    check_quadrature(quadrature_n)?;
    spec.check_radius(r)?;
    let q = SphereQuadrature::new(quadrature_n);
    let (mut qe, mut qm) = (0.0, 0.0);
    for &(th, ph, w) in &q.nodes {
        let p = SpacetimePoint::from_polar(t, r, th, ph);
        let f = field.eval(&p)?;
        let s = hodge_star_2form(spec, &p, &f)?;
        qm += w * radial_components(&f, &p).1;
        qe -= w * radial_components(&s, &p).1;
    }
    Ok(ChargePair { q_e: qe / (4.0 * PI), q_m: qm / (4.0 * PI) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::harmonics::real_ylm;
    use crate::tensorcalc::{Coulomb, FnField, Monopole};

    /// An l = 1 electric-type field `Y_1m(ω)/r² dt∧dr` plus an l = 1 magnetic piece.
    fn dipole(p: &SpacetimePoint) -> TwoForm {
        let (r, th, ph) = (p.r(), p.theta(), p.phi());
        let y = real_ylm(1, 1, th, ph) + 0.3 * real_ylm(1, 0, th, ph);
        let rp = RadialPart { tr: y / (r * r), area: 0.7 * y };
        radial_form(&rp, p)
    }

    #[test]
    fn coulomb_is_already_radial() {
        let rp = radial_part(&Coulomb { q: 2.0 }, 0.0, 4.0, 16).unwrap();
        assert!((rp.tr - 2.0 / 16.0).abs() < 1e-14 && rp.area.abs() < 1e-14);
    }

    #[test]
    fn dipole_projects_to_zero_and_projection_is_linear() {
        let f = FnField(|p: &SpacetimePoint| Ok(dipole(p)));
        let rp = radial_part(&f, 0.0, 3.0, 16).unwrap();
        assert!(rp.tr.abs() < 1e-14 && rp.area.abs() < 1e-14);
        let g = FnField(|p: &SpacetimePoint| Ok(dipole(p) + Coulomb { q: 0.4 }.eval(p)?));
        let rp = radial_part(&g, 0.0, 3.0, 16).unwrap();
        assert!((rp.tr - 0.4 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn projection_is_idempotent() {
        let f = FnField(|p: &SpacetimePoint| Ok(dipole(p) + Monopole { q: 0.2 }.eval(p)? + Coulomb { q: 1.0 }.eval(p)?));
        let once = radial_part(&f, 0.0, 5.0, 12).unwrap();
        let proj = FnField(move |p: &SpacetimePoint| Ok(radial_form(&once, p)));
        let twice = radial_part(&proj, 0.0, 5.0, 12).unwrap();
        assert!((once.tr - twice.tr).abs() < 1e-15 && (once.area - twice.area).abs() < 1e-15);
    }

    #[test]
    fn charge_normalization() {
        let mink = MetricSpec::minkowski();
        let c = charges(&mink, &Coulomb { q: 1.5 }, 0.0, 7.0, 16).unwrap();
        assert!((c.q_e - 1.5).abs() < 1e-13 && c.q_m.abs() < 1e-13);
        let c = charges(&mink, &Monopole { q: -0.5 }, 0.0, 7.0, 16).unwrap();
        assert!((c.q_m + 0.5).abs() < 1e-13 && c.q_e.abs() < 1e-13);
    }

    #[test]
    fn charges_are_radius_independent_on_schwarzschild() {
        let spec = MetricSpec::schwarzschild(1.0);
        let f = FnField(|p: &SpacetimePoint| Ok(Coulomb { q: 1.0 }.eval(p)? + dipole(p)));
        for r in [5.0, 20.0, 100.0] {
            let c = charges(&spec, &f, 0.0, r, 16).unwrap();
            assert!((c.q_e - 1.0).abs() < 1e-12, "r={r}: {c:?}");
        }
    }

    #[test]
    fn small_quadrature_rejected() {
        assert!(radial_part(&Coulomb { q: 1.0 }, 0.0, 3.0, 4).is_err());
    }
}
