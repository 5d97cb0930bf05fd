/// Lagrange interpolation of samples on the uniform grid `x_i = x0 + i·dx`
/// using the `points` nodes nearest to `x`. Exact at nodes.
pub fn lagrange_uniform(values: &[f64], x0: f64, dx: f64, x: f64, points: usize) -> Option<f64> {
    let n = values.len();
    if n < points || points == 0 {
        return None;
    }
    let s = (x - x0) / dx;
    if s < -1e-9 || s > (n - 1) as f64 + 1e-9 {
        return None;
    }
    let nearest = s.round();
    if (s - nearest).abs() < 1e-12 {
        return Some(values[nearest as usize]);
    }
    let half = points / 2;
    let base = s.floor() as isize - (half as isize - 1);
    let start = base.clamp(0, (n - points) as isize) as usize;
    let mut acc = 0.0;
    for j in 0..points {
        let xj = (start + j) as f64;
        let mut w = 1.0;
        for k in 0..points {
            if k != j {
                let xk = (start + k) as f64;
                w *= (s - xk) / (xj - xk);
            }
        }
        acc += w * values[start + j];
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_polynomials_of_matching_degree() {
        let xs: Vec<f64> = (0..20).map(|i| 0.5 + 0.25 * i as f64).collect();
        let cubic = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let quintic = |x: f64| x.powi(5) - 3.0 * x.powi(2);
        let v3: Vec<f64> = xs.iter().map(|&x| cubic(x)).collect();
        let v5: Vec<f64> = xs.iter().map(|&x| quintic(x)).collect();
        for &x in &[0.51, 1.3, 3.77, 5.2] {
            assert!((lagrange_uniform(&v3, 0.5, 0.25, x, 4).unwrap() - cubic(x)).abs() < 1e-12);
            assert!((lagrange_uniform(&v5, 0.5, 0.25, x, 6).unwrap() - quintic(x)).abs() < 1e-9);
        }
        assert_eq!(lagrange_uniform(&v3, 0.5, 0.25, 0.75, 4), Some(v3[1]));
        assert!(lagrange_uniform(&v3, 0.5, 0.25, 10.0, 4).is_none());
    }
}
