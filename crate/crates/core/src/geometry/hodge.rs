use super::forms::{levi_civita, ThreeForm, TwoForm, PAIRS};
use super::metric::{metric_components, MetricSample, MetricSpec};
use super::SpacetimePoint;
use crate::Result;

/// Raises both indices of a 2-form: `F^{γδ} = g^{γμ} g^{δν} F_{μν}`.
pub fn raise_two_form(sample: &MetricSample, f: &TwoForm) -> [[f64; 4]; 4] {
    let low = f.to_matrix();
    let mut up = [[0.0; 4]; 4];
    for g in 0..4 {
        for d in 0..4 {
            let mut acc = 0.0;
            for m in 0..4 {
                let gm = sample.inv[(g, m)];
                if gm == 0.0 {
                    continue;
                }
                for n in 0..4 {
                    acc += gm * sample.inv[(d, n)] * low[m][n];
                }
            }
            up[g][d] = acc;
        }
    }
    up
}

/// `(⋆F)_{αβ} = ½ ε_{αβγδ} √(−g) g^{γμ} g^{δν} F_{μν}` with `ε_{txyz} = +1`.
pub fn hodge_star_with(sample: &MetricSample, f: &TwoForm) -> TwoForm {
    let up = raise_two_form(sample, f);
    let mut out = TwoForm::ZERO;
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        let mut acc = 0.0;
        for g in 0..4 {
            for d in 0..4 {
                let e = levi_civita([a, b, g, d]);
                if e != 0.0 {
                    acc += e * up[g][d];
                }
            }
        }
        out.0[k] = 0.5 * sample.sqrt_neg_det * acc;
    }
    out
}

pub fn hodge_star_2form(spec: &MetricSpec, p: &SpacetimePoint, f: &TwoForm) -> Result<TwoForm> {
    let sample = metric_components(spec, p)?;
    Ok(hodge_star_with(&sample, f))
}

/// Hodge dual of a 3-form as a covector:
/// `(⋆G)_α = (1/6) ε_{αβγδ} √(−g) G^{βγδ}`.
pub fn hodge_star_3form_with(sample: &MetricSample, g3: &ThreeForm) -> [f64; 4] {
    let mut up = [[[0.0; 4]; 4]; 4];
    for b in 0..4 {
        for c in 0..4 {
            for d in 0..4 {
                let mut acc = 0.0;
                for m in 0..4 {
                    for n in 0..4 {
                        for o in 0..4 {
                            let v = g3.get(m, n, o);
                            if v != 0.0 {
                                acc += sample.inv[(b, m)] * sample.inv[(c, n)] * sample.inv[(d, o)] * v;
                            }
                        }
                    }
                }
                up[b][c][d] = acc;
            }
        }
    }
    let mut out = [0.0; 4];
    for (a, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let e = levi_civita([a, b, c, d]);
                    if e != 0.0 {
                        acc += e * up[b][c][d];
                    }
                }
            }
        }
        *slot = sample.sqrt_neg_det * acc / 6.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::metric::{metric_components, to_polar};
    use crate::geometry::RadialFn;

    fn sample_forms() -> Vec<TwoForm> {
        vec![
            TwoForm([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            TwoForm([0.3, -1.2, 0.7, 2.0, -0.4, 0.9]),
            TwoForm([-2.0, 0.5, 1.5, -0.1, 0.2, 3.0]),
        ]
    }

    #[test]
    fn minkowski_dt_dx_dual() {
        let spec = MetricSpec::minkowski();
        let p = SpacetimePoint::new(0.0, 1.0, 2.0, 3.0);
        let f = TwoForm::basis(0, 1, 1.0);
        let s = hodge_star_2form(&spec, &p, &f).unwrap();
        assert!((s.get(2, 3).abs() - 1.0).abs() < 1e-15);
        let ss = hodge_star_2form(&spec, &p, &s).unwrap();
        assert!((ss + f).max_abs() < 1e-15);
    }

    #[test]
    fn double_star_is_minus_identity() {
        let specs = [
            MetricSpec::minkowski(),
            MetricSpec::schwarzschild(1.0),
            MetricSpec::perturbed_catalog_entry(),
            MetricSpec::general_normalized(RadialFn::Power { amplitude: 1.0, power: -1 }, vec![], 0.5),
        ];
        for spec in &specs {
            for &r in &[3.0, 17.0, 400.0] {
                let p = SpacetimePoint::from_polar(0.5, r, 1.0, 0.3);
                for f in sample_forms() {
                    let ss = hodge_star_2form(spec, &p, &hodge_star_2form(spec, &p, &f).unwrap()).unwrap();
                    assert!((ss + f).max_abs() < 1e-12 * (1.0 + f.max_abs()), "{spec:?} r={r}");
                }
            }
        }
    }

    #[test]
    fn star_is_linear() {
        let spec = MetricSpec::schwarzschild(1.0);
        let p = SpacetimePoint::from_polar(0.0, 6.0, 0.4, 2.2);
        let fs = sample_forms();
        let (a, b) = (1.7, -0.6);
        let lhs = hodge_star_2form(&spec, &p, &(fs[1] * a + fs[2] * b)).unwrap();
        let rhs = hodge_star_2form(&spec, &p, &fs[1]).unwrap() * a + hodge_star_2form(&spec, &p, &fs[2]).unwrap() * b;
        assert!((lhs - rhs).max_abs() < 1e-13);
    }

    #[test]
    fn coulomb_duality_on_schwarzschild() {
        // q/r² dt∧dr has dual ∓q sinθ dθ∧dφ; the sign is fixed by ε_{txyz} = +1.
        let spec = MetricSpec::schwarzschild(1.0);
        let q = 0.7;
        let (r, th) = (5.0_f64, 0.8_f64);
        let p = SpacetimePoint::from_polar(0.0, r, th, 0.4);
        let n = [p.x[0] / r, p.x[1] / r, p.x[2] / r];
        let mut f = TwoForm::ZERO;
        for i in 0..3 {
            f.set(0, i + 1, q / (r * r) * n[i]);
        }
        let s = hodge_star_2form(&spec, &p, &f).unwrap();
        let polar = to_polar(&nalgebra::Matrix4::from_fn(|i, j| s.to_matrix()[i][j]), &p);
        assert!((polar[(2, 3)] + q * th.sin()).abs() < 1e-12, "{}", polar[(2, 3)]);
        assert!(polar[(0, 1)].abs() < 1e-12);
        let _ = metric_components(&spec, &p).unwrap();
    }
}
