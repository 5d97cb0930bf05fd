use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{
    hodge_star_2form, metric_components, riemann_fd, MetricSpec, RadialFn, SpacetimePoint, TwoForm,
};
use crate::Result;

use super::exterior::{codifferential_d_star, d0, d0_one_form, exterior_d, exterior_d_one_form};
use super::field::{default_step, Coulomb, FnField, GenericField, PlaneWave, TwoFormField};
use super::lie::{scaling_commutator_remainder, star_lie_commutator, star_lie_commutator_fd, VectorFieldTag};
use super::wave::{wave_residual, Sources};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitySuiteConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Sample points per metric.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_seed() -> u64 {
    7
}

fn default_samples() -> usize {
    6
}

impl Default for IdentitySuiteConfig {
    fn default() -> Self {
        Self { seed: default_seed(), samples: default_samples() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityResult {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub order: Option<f64>,
    pub pass: bool,
}

impl IdentityResult {
    fn new(name: &str, max_residual: f64, tolerance: f64, order: Option<f64>) -> Self {
        let order_ok = order.is_none_or(|o| o >= 1.8);
        Self {
            name: name.to_string(),
            max_residual,
            tolerance,
            order,
            pass: max_residual.is_finite() && max_residual <= tolerance && order_ok,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub results: Vec<IdentityResult>,
    pub pass: bool,
}

impl IdentityReport {
    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

pub fn catalog() -> Vec<MetricSpec> {
    vec![
        MetricSpec::minkowski(),
        MetricSpec::schwarzschild(1.0),
        MetricSpec::general_normalized(RadialFn::Power { amplitude: 0.5, power: -1 }, vec![], 0.5),
        MetricSpec::perturbed_catalog_entry(),
    ]
}

fn sample_points(rng: &mut ChaCha8Rng, n: usize, r_lo: f64, r_hi: f64) -> Vec<SpacetimePoint> {
    (0..n)
        .map(|_| {
            let r = r_lo * (r_hi / r_lo).powf(rng.gen_range(0.0..1.0));
            let cth: f64 = rng.gen_range(-0.95..0.95);
            SpacetimePoint::from_polar(rng.gen_range(-1.0..1.0), r, cth.acos(), rng.gen_range(-3.1..3.1))
        })
        .collect()
}

fn random_form(rng: &mut ChaCha8Rng) -> TwoForm {
    TwoForm(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

/// `sup r² |[⋆, L_Ω]F| / |F|` over a sphere of radius `r`, maximized over the rotations.
pub fn rotation_commutator_profile(spec: &MetricSpec, f: &TwoForm, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let field = FnField(|_: &SpacetimePoint| Ok(*f));
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut sup = 0.0_f64;
        for i in 0..8 {
            let th = (i as f64 + 0.5) * std::f64::consts::PI / 8.0;
            for k in 0..8 {
                let ph = k as f64 * std::f64::consts::PI / 4.0;
                let p = SpacetimePoint::from_polar(0.0, r, th, ph);
                for x in VectorFieldTag::rotations() {
                    let c = star_lie_commutator(spec, x, &field, &p)?;
                    sup = sup.max(r * r * c.max_abs() / f.max_abs());
                }
            }
        }
        out.push((r, sup));
    }
    Ok(out)
}

pub fn run_identity_suite(cfg: &IdentitySuiteConfig) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut results = Vec::new();
    let specs = catalog();
    let generic = GenericField::seeded(cfg.seed);

    // ⋆⋆ = −1
    let mut worst = 0.0_f64;
    for spec in &specs {
        for p in sample_points(&mut rng, cfg.samples, 2.5, 1e3) {
            let f = random_form(&mut rng);
            let ss = hodge_star_2form(spec, &p, &hodge_star_2form(spec, &p, &f)?)?;
            worst = worst.max((ss + f).max_abs() / f.max_abs());
        }
    }
    results.push(IdentityResult::new("double_star", worst, 1e-12, None));

    // metric inverse
    let mut worst = 0.0_f64;
    for spec in &specs {
        for p in sample_points(&mut rng, cfg.samples, 2.1, 1e3) {
            let s = metric_components(spec, &p)?;
            worst = worst.max((s.g * s.inv - nalgebra::Matrix4::identity()).abs().max());
        }
    }
    results.push(IdentityResult::new("metric_inverse", worst, 1e-12, None));

    // Schwarzschild vacuum and Kretschmann
    let schw = MetricSpec::schwarzschild(1.0);
    let p = SpacetimePoint::from_polar(0.0, 4.0, 1.0, 0.4);
    let (c1, c2) = (riemann_fd(&schw, &p, 0.02)?, riemann_fd(&schw, &p, 0.01)?);
    let ricci_order = (c1.max_ricci() / c2.max_ricci()).log2();
    results.push(IdentityResult::new("schwarzschild_ricci", c2.max_ricci(), 1e-5, Some(ricci_order)));
    let exact = 48.0 / 4096.0;
    let (k1, k2) = ((c1.kretschmann - exact).abs(), (c2.kretschmann - exact).abs());
    results.push(IdentityResult::new("schwarzschild_kretschmann", k2 / exact, 1e-4, Some((k1 / k2).log2())));

    // d∘d and d⁰∘d⁰ on exact differentials
    let a = |p: &SpacetimePoint| {
        let [t, x, y, z] = p.as_array();
        Ok([x * t + y.sin(), (x * y).sin() + t * z, (t - z).cos() * y, x * x * z])
    };
    let (mut dd, mut dd0) = (0.0_f64, 0.0_f64);
    for p in sample_points(&mut rng, cfg.samples, 0.5, 3.0) {
        let f = FnField(|q: &SpacetimePoint| exterior_d_one_form(&a, q, 1e-3));
        let f0 = FnField(|q: &SpacetimePoint| d0_one_form(&a, q, 1e-3));
        dd = dd.max(exterior_d(&f, &p, 1e-3)?.max_abs());
        dd0 = dd0.max(d0(&f0, &p, 1e-3)?.max_abs());
    }
    results.push(IdentityResult::new("d_d", dd, 1e-5, None));
    results.push(IdentityResult::new("d0_d0", dd0, 1e-5, None));

    // closed-form commutator against finite differences
    let mut worst = 0.0_f64;
    for spec in &specs {
        for p in sample_points(&mut rng, cfg.samples.min(3), 3.0, 12.0) {
            for x in VectorFieldTag::all() {
                let closed = star_lie_commutator(spec, x, &generic, &p)?;
                let fd = star_lie_commutator_fd(spec, x, &generic, &p, default_step(&p))?;
                worst = worst.max((closed - fd).max_abs() / (1.0 + closed.max_abs()));
            }
        }
    }
    let fd_error = worst;
    results.push(IdentityResult::new("commutator_closed_form_vs_fd", worst, 1e-6, None));

    // Killing rotations on Schwarzschild
    let mut worst = 0.0_f64;
    for p in sample_points(&mut rng, cfg.samples, 2.5, 1e3) {
        for x in VectorFieldTag::rotations() {
            let scale = generic.eval(&p)?.max_abs().max(1e-300);
            worst = worst.max(star_lie_commutator(&schw, x, &generic, &p)?.max_abs() / scale);
        }
    }
    results.push(IdentityResult::new("rotation_commutator_schwarzschild", worst, 10.0 * fd_error.max(1e-12), None));

    // κ-corrected scaling commutator on Minkowski
    let mink = MetricSpec::minkowski();
    let mut worst = 0.0_f64;
    for p in sample_points(&mut rng, cfg.samples, 1.0, 1e3) {
        let scale = generic.eval(&p)?.max_abs().max(1e-300);
        worst = worst.max(scaling_commutator_remainder(&mink, &generic, &p)?.max_abs() / scale);
    }
    results.push(IdentityResult::new("scaling_commutator_minkowski", worst, 10.0 * fd_error.max(1e-12), None));

    // r² [⋆, L_Ω]F bounded on the perturbed metric
    let pert = MetricSpec::perturbed_catalog_entry();
    let radii: Vec<f64> = (0..=12).map(|k| 10.0 * 10f64.powf(k as f64 / 6.0)).collect();
    let profile = rotation_commutator_profile(&pert, &random_form(&mut rng), &radii)?;
    let sup = profile.iter().fold(0.0_f64, |a, &(_, v)| a.max(v));
    let last = profile[profile.len() - 1].1;
    let mid = profile[profile.len() / 2].1;
    let growth = if mid > 0.0 { last / mid } else { 0.0 };
    let mut res = IdentityResult::new("rotation_commutator_decay_perturbed", growth, 2.0, None);
    res.pass &= sup.is_finite() && sup > 0.0;
    results.push(res);

    // Coulomb is Maxwell on Schwarzschild
    let mut worst = 0.0_f64;
    for p in sample_points(&mut rng, cfg.samples, 3.0, 300.0) {
        let r = p.r();
        let f = Coulomb { q: 1.0 };
        let h = default_step(&p);
        worst = worst.max(exterior_d(&f, &p, h)?.max_abs() * r.powi(3));
        worst = worst.max(codifferential_d_star(&schw, &f, &p, h)?.max_abs() * r);
    }
    results.push(IdentityResult::new("coulomb_maxwell_schwarzschild", worst, 1e-7, None));

    // wave-form reduction
    let p = SpacetimePoint::new(0.4, 1.0, 0.5, 0.3);
    let w = wave_residual(&mink, &PlaneWave, &Sources::default(), &p)?;
    results.push(IdentityResult::new("wave_plane_wave_minkowski", w.residual.max_abs(), 1e-5, None));
    let p = SpacetimePoint::from_polar(0.0, 6.0, 1.0, 0.3);
    let w = wave_residual(&schw, &Coulomb { q: 1.0 }, &Sources::default(), &p)?;
    results.push(IdentityResult::new("wave_coulomb_schwarzschild", w.residual.max_abs(), 1e-7, None));
    let mut worst = 0.0_f64;
    for spec in &specs {
        let p = SpacetimePoint::from_polar(0.1, 4.5, 1.2, -0.4);
        let w = wave_residual(spec, &generic, &Sources::default(), &p)?;
        worst = worst.max((w.direct - w.assembled).max_abs() / (1.0 + w.direct.max_abs()));
    }
    results.push(IdentityResult::new("wave_two_paths_generic", worst, 1e-4, None));

    let pass = results.iter().all(|r| r.pass);
    Ok(IdentityReport { results, pass })
}
