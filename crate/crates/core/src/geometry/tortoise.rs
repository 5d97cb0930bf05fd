use super::metric::{Family, MetricSpec};
use crate::{Error, Result};

/// `r*(r)`: `r + 2M ln(r/2M − 1)` on Schwarzschild, the identity otherwise.
pub fn tortoise(spec: &MetricSpec, r: f64) -> Result<f64> {
    match spec.family {
        Family::Schwarzschild => {
            let m = spec.mass;
            if !(r > 2.0 * m) {
                return Err(Error::Domain { r, r_min: 2.0 * m });
            }
            Ok(r + 2.0 * m * (r / (2.0 * m) - 1.0).ln())
        }
        _ => {
            if !(r > 0.0) {
                return Err(Error::Domain { r, r_min: 0.0 });
            }
            Ok(r)
        }
    }
}

/// Inverse of [`tortoise`], accurate to ~1e-14 relative.
pub fn inverse_tortoise(spec: &MetricSpec, rs: f64) -> Result<f64> {
    inverse_tortoise_with_lapse(spec, rs).map(|(r, _)| r)
}

/// `(r, 1 − 2M/r)` at tortoise coordinate `r*`.
///
/// Near the horizon `r` rounds to `2M` long before the lapse underflows, so the
/// lapse is returned from the same solve rather than recomputed from `r`.
/// With `x = r/2M − 1` the relation reads `x + ln x = r*/2M − 1`; Newton
/// iterates on `z = ln x`, where `z ↦ e^z + z` is convex and monotone.
pub fn inverse_tortoise_with_lapse(spec: &MetricSpec, rs: f64) -> Result<(f64, f64)> {
    match spec.family {
        Family::Schwarzschild => {
            let m = spec.mass;
            if !rs.is_finite() {
                return Err(Error::Input(format!("non-finite tortoise coordinate {rs}")));
            }
            let y = rs / (2.0 * m) - 1.0;
            let mut z = if y < 1.0 { y } else { y.ln() };
            for _ in 0..100 {
                let ez = z.exp();
                let step = (ez + z - y) / (ez + 1.0);
                z -= step;
                if step.abs() < 1e-15 * z.abs().max(1.0) {
                    let x = z.exp();
                    return Ok((2.0 * m * (1.0 + x), x / (1.0 + x)));
                }
            }
            Err(Error::NonConvergence(format!("inverse tortoise at r* = {rs}")))
        }
        _ => {
            if !(rs > 0.0) {
                return Err(Error::Domain { r: rs, r_min: 0.0 });
            }
            Ok((rs, 1.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minkowski_identity() {
        let spec = MetricSpec::minkowski();
        assert_eq!(tortoise(&spec, 7.25).unwrap(), 7.25);
        assert_eq!(inverse_tortoise(&spec, 7.25).unwrap(), 7.25);
    }

    #[test]
    fn log_term_vanishes_at_4m() {
        let spec = MetricSpec::schwarzschild(1.0);
        assert!((tortoise(&spec, 4.0).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn horizon_rejected() {
        let spec = MetricSpec::schwarzschild(1.0);
        assert!(matches!(tortoise(&spec, 2.0), Err(Error::Domain { .. })));
        assert!(tortoise(&spec, 1.0).is_err());
    }

    #[test]
    fn round_trip() {
        for &m in &[1.0, 0.5, 3.0] {
            let spec = MetricSpec::schwarzschild(m);
            let mut r = 2.1 * m;
            while r < 1e4 * m {
                let back = inverse_tortoise(&spec, tortoise(&spec, r).unwrap()).unwrap();
                assert!(((back - r) / r).abs() < 1e-12, "m={m} r={r} back={back}");
                r *= 1.07;
            }
        }
    }

    #[test]
    fn deep_negative_rstar() {
        let spec = MetricSpec::schwarzschild(1.0);
        let (r, f) = inverse_tortoise_with_lapse(&spec, -600.0).unwrap();
        assert_eq!(r, 2.0);
        assert!(f > 0.0 && f < 1e-100);
    }
}
