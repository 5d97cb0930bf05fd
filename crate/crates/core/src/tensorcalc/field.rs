use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{hodge_star_2form, MetricSpec, SpacetimePoint, ThreeForm, TwoForm};
use crate::Result;

/// A 2-form valued field on spacetime.
pub trait TwoFormField: Send + Sync {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm>;
}

/// A 3-form valued field (sources `G₁`, `G₂`).
pub trait ThreeFormField: Send + Sync {
    fn eval(&self, p: &SpacetimePoint) -> Result<ThreeForm>;
}

impl<T: TwoFormField + ?Sized> TwoFormField for &T {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        (**self).eval(p)
    }
}

impl<T: ThreeFormField + ?Sized> ThreeFormField for &T {
    fn eval(&self, p: &SpacetimePoint) -> Result<ThreeForm> {
        (**self).eval(p)
    }
}

/// Wraps a closure as a 2-form field.
pub struct FnField<F>(pub F);

impl<F> TwoFormField for FnField<F>
where
    F: Fn(&SpacetimePoint) -> Result<TwoForm> + Send + Sync,
{
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        (self.0)(p)
    }
}

/// Wraps a closure as a 3-form field.
pub struct FnThreeField<F>(pub F);

impl<F> ThreeFormField for FnThreeField<F>
where
    F: Fn(&SpacetimePoint) -> Result<ThreeForm> + Send + Sync,
{
    fn eval(&self, p: &SpacetimePoint) -> Result<ThreeForm> {
        (self.0)(p)
    }
}

/// `⋆F` as a field.
pub struct Dual<'a, F: TwoFormField> {
    pub spec: &'a MetricSpec,
    pub field: &'a F,
}

impl<F: TwoFormField> TwoFormField for Dual<'_, F> {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        hodge_star_2form(self.spec, p, &self.field.eval(p)?)
    }
}

/// `aF + bG`.
pub struct Combination<'a, F: TwoFormField, G: TwoFormField> {
    pub a: f64,
    pub f: &'a F,
    pub b: f64,
    pub g: &'a G,
}

impl<F: TwoFormField, G: TwoFormField> TwoFormField for Combination<'_, F, G> {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        Ok(self.f.eval(p)? * self.a + self.g.eval(p)? * self.b)
    }
}

/// Per-point finite-difference step `10⁻³·max(1, r)`.
pub fn default_step(p: &SpacetimePoint) -> f64 {
    1e-3 * p.r().max(1.0)
}

/// Fourth-order centered first derivative of a vector-valued sample along `dir`.
pub fn stencil4<const N: usize>(
    p: &SpacetimePoint,
    dir: usize,
    h: f64,
    mut f: impl FnMut(&SpacetimePoint) -> Result<[f64; N]>,
) -> Result<[f64; N]> {
    let m2 = f(&p.shifted(dir, -2.0 * h))?;
    let m1 = f(&p.shifted(dir, -h))?;
    let p1 = f(&p.shifted(dir, h))?;
    let p2 = f(&p.shifted(dir, 2.0 * h))?;
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = (m2[k] - p2[k] + 8.0 * (p1[k] - m1[k])) / (12.0 * h);
    }
    Ok(out)
}

/// `∂_μ F_{αβ}` for all four directions.
pub fn partials(field: &impl TwoFormField, p: &SpacetimePoint, h: f64) -> Result<[TwoForm; 4]> {
    let mut out = [TwoForm::ZERO; 4];
    for (mu, slot) in out.iter_mut().enumerate() {
        *slot = TwoForm(stencil4(p, mu, h, |q| field.eval(q).map(|f| f.0))?);
    }
    Ok(out)
}

/// Flat-space plane wave `F = d(sin(t − z) dx)`.
pub struct PlaneWave;

impl TwoFormField for PlaneWave {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        let c = (p.t - p.x[2]).cos();
        let mut f = TwoForm::ZERO;
        f.set(0, 1, c);
        f.set(3, 1, -c);
        Ok(f)
    }
}

/// `F = q/r² dt∧dr`, the Coulomb field (Maxwell on Minkowski and Schwarzschild).
pub struct Coulomb {
    pub q: f64,
}

impl TwoFormField for Coulomb {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        let r = p.r();
        let mut f = TwoForm::ZERO;
        for i in 0..3 {
            f.set(0, i + 1, self.q * p.x[i] / (r * r * r));
        }
        Ok(f)
    }
}

/// `F = q_m sinθ dθ∧dφ = q_m ε_{ijk} x^k / r³ dx^i∧dx^j / 2`.
pub struct Monopole {
    pub q: f64,
}

impl TwoFormField for Monopole {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        let r3 = p.r().powi(3);
        let [x, y, z] = p.x;
        let mut f = TwoForm::ZERO;
        f.set(1, 2, self.q * z / r3);
        f.set(2, 3, self.q * x / r3);
        f.set(3, 1, self.q * y / r3);
        Ok(f)
    }
}

/// Smooth generic (non-Maxwell) field: every component a sum of a few
/// seeded products of sines and Gaussians.
#[derive(Clone, Debug)]
pub struct GenericField {
    terms: Vec<[f64; 10]>,
}

impl GenericField {
    pub fn seeded(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = (0..6)
            .map(|_| {
                let mut t = [0.0; 10];
                t[0] = rng.gen_range(-1.0..1.0);
                for k in t.iter_mut().take(5).skip(1) {
                    *k = rng.gen_range(-0.6..0.6);
                }
                t[5] = rng.gen_range(0.0..2.0 * PI);
                for k in t.iter_mut().take(9).skip(6) {
                    *k = rng.gen_range(-8.0..8.0);
                }
                t[9] = rng.gen_range(20.0..80.0);
                t
            })
            .collect();
        Self { terms }
    }
}

impl TwoFormField for GenericField {
    fn eval(&self, p: &SpacetimePoint) -> Result<TwoForm> {
        let c = p.as_array();
        let mut out = TwoForm::ZERO;
        for (k, t) in self.terms.iter().enumerate() {
            let phase = t[1] * c[0] + t[2] * c[1] + t[3] * c[2] + t[4] * c[3] + t[5];
            let d2 = (c[1] - t[6]).powi(2) + (c[2] - t[7]).powi(2) + (c[3] - t[8]).powi(2);
            out.0[k] = t[0] * phase.sin() * (-d2 / t[9]).exp() + 0.1 * t[0];
        }
        Ok(out)
    }
}
