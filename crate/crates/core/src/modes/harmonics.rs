use std::f64::consts::PI;

/// `P_l(x)` and `P_l′(x)` by the three-term recurrences; the derivative uses
/// `P_l′ = P_{l−2}′ + (2l − 1)P_{l−1}`, which stays regular at `x = ±1`.
pub fn legendre(l: u32, x: f64) -> (f64, f64) {
    let l = l as usize;
    let mut p = vec![0.0; l + 1];
    let mut dp = vec![0.0; l + 1];
    p[0] = 1.0;
    if l >= 1 {
        p[1] = x;
        dp[1] = 1.0;
    }
    for k in 2..=l {
        let kf = k as f64;
        p[k] = ((2.0 * kf - 1.0) * x * p[k - 1] - (kf - 1.0) * p[k - 2]) / kf;
        dp[k] = dp[k - 2] + (2.0 * kf - 1.0) * p[k - 1];
    }
    (p[l], dp[l])
}

/// Associated Legendre `P_l^m(x)` for `m ≥ 0` without the Condon–Shortley phase.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= (2 * k - 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pl = 0.0;
    for k in (m + 2)..=l {
        pl = ((2 * k - 1) as f64 * x * pm1 - (k + m - 1) as f64 * pmm) / (k - m) as f64;
        pmm = pm1;
        pm1 = pl;
    }
    pl
}

fn factorial_ratio(l: u32, m: u32) -> f64 {
    // (l − m)! / (l + m)!
    ((l - m + 1)..=(l + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// Real orthonormal spherical harmonic `Y_lm(θ, φ)`; `m < 0` selects `sin(|m|φ)`.
pub fn real_ylm(l: u32, m: i32, theta: f64, phi: f64) -> f64 {
    let am = m.unsigned_abs();
    if am > l {
        return 0.0;
    }
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial_ratio(l, am)).sqrt();
    let p = assoc_legendre(l, am, theta.cos());
    match m.cmp(&0) {
        std::cmp::Ordering::Equal => norm * p,
        std::cmp::Ordering::Greater => std::f64::consts::SQRT_2 * norm * p * (am as f64 * phi).cos(),
        std::cmp::Ordering::Less => std::f64::consts::SQRT_2 * norm * p * (am as f64 * phi).sin(),
    }
}

/// `(Y_l0(θ), ∂_θ Y_l0(θ))`.
pub fn zonal(l: u32, theta: f64) -> (f64, f64) {
    let norm = ((2 * l + 1) as f64 / (4.0 * PI)).sqrt();
    let (st, ct) = theta.sin_cos();
    let (p, dp) = legendre(l, ct);
    (norm * p, -norm * st * dp)
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n as u32, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n as u32, z);
        let wi = 2.0 / ((1.0 - z * z) * d * d);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Product rule on the unit sphere: Gauss–Legendre in `cosθ` times the
/// trapezoid rule in `φ`.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    pub nodes: Vec<(f64, f64, f64)>,
}

impl SphereQuadrature {
    /// `n` points in `θ`, `2n` in `φ`; integrates `Y_lm` products exactly for `l + l′ < 2n`.
    pub fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        let nphi = 2 * n;
        let dphi = 2.0 * PI / nphi as f64;
        let mut nodes = Vec::with_capacity(n * nphi);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.clamp(-1.0, 1.0).acos();
            for k in 0..nphi {
                nodes.push((theta, (k as f64 + 0.5) * dphi, wi * dphi));
            }
        }
        Self { nodes }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        self.nodes.iter().map(|&(th, ph, w)| w * f(th, ph)).sum()
    }

    pub fn try_integrate<E>(&self, mut f: impl FnMut(f64, f64) -> Result<f64, E>) -> Result<f64, E> {
        let mut acc = 0.0;
        for &(th, ph, w) in &self.nodes {
            acc += w * f(th, ph)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_values() {
        let (p, dp) = legendre(2, 0.3);
        assert!((p - 0.5 * (3.0 * 0.09 - 1.0)).abs() < 1e-15);
        assert!((dp - 0.9).abs() < 1e-15);
        let (p, dp) = legendre(5, 1.0);
        assert!((p - 1.0).abs() < 1e-14 && (dp - 15.0).abs() < 1e-12);
    }

    #[test]
    fn y10_values() {
        assert!(real_ylm(1, 0, PI / 2.0, 0.0).abs() < 1e-16);
        assert!((real_ylm(1, 0, 0.0, 0.0) - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn orthonormality() {
        let q = SphereQuadrature::new(16);
        let modes: Vec<(u32, i32)> = (0..5).flat_map(|l| (-(l as i32)..=l as i32).map(move |m| (l, m))).collect();
        for &(l1, m1) in &modes {
            for &(l2, m2) in &modes {
                let v = q.integrate(|th, ph| real_ylm(l1, m1, th, ph) * real_ylm(l2, m2, th, ph));
                let expect = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-13, "({l1},{m1}) ({l2},{m2}): {v}");
            }
        }
    }

    #[test]
    fn zonal_gradient_norm() {
        let q = SphereQuadrature::new(16);
        for l in 1..6 {
            let v = q.integrate(|th, _| zonal(l, th).1.powi(2));
            assert!((v - (l * (l + 1)) as f64).abs() < 1e-12);
        }
    }
}
