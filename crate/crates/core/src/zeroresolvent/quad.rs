use crate::modes::gauss_legendre;

const GL_ORDER: usize = 8;

fn gl_nodes() -> &'static (Vec<f64>, Vec<f64>) {
    use std::sync::OnceLock;
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Eight-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss8(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = gl_nodes();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * x.iter().zip(w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>()
}

fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fb, fm) = (f(a), f(b), f(m));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// Adaptive Simpson over `[a, b]` split at `breaks`.
pub fn adaptive_split(f: &impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.windows(2).map(|w| adaptive_simpson(f, w[0], w[1], tol)).sum()
}

/// Running integral `∫_a^x f` on a cell table aligned with the breakpoints:
/// exact-to-rounding for piecewise smooth integrands resolved by the cells.
#[derive(Clone, Debug)]
pub struct Cumulative {
    edges: Vec<f64>,
    cum: Vec<f64>,
}

impl Cumulative {
    pub fn new(f: &impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], max_cell: f64) -> Self {
        let mut knots: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
        knots.push(a);
        knots.push(b);
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let mut edges = vec![a];
        for w in knots.windows(2) {
            let n = ((w[1] - w[0]) / max_cell).ceil().max(1.0) as usize;
            for k in 1..=n {
                edges.push(w[0] + (w[1] - w[0]) * k as f64 / n as f64);
            }
        }
        let mut cum = vec![0.0];
        for w in edges.windows(2) {
            let last = *cum.last().unwrap();
            cum.push(last + gauss8(f, w[0], w[1]));
        }
        Self { edges, cum }
    }

    pub fn lower(&self) -> f64 {
        self.edges[0]
    }

    pub fn upper(&self) -> f64 {
        *self.edges.last().unwrap()
    }

    pub fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// `∫_a^x f`, clamped to the table range.
    pub fn at(&self, f: &impl Fn(f64) -> f64, x: f64) -> f64 {
        if x <= self.lower() {
            return 0.0;
        }
        if x >= self.upper() {
            return self.total();
        }
        let k = self.edges.partition_point(|&e| e <= x) - 1;
        self.cum[k] + gauss8(f, self.edges[k], x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_agree_on_smooth_integrand() {
        let f = |x: f64| (x * 1.3).sin() * (-0.2 * x).exp();
        let exact = {
            let g = |x: f64| (-0.2 * x).exp() * (-0.2 * (1.3 * x).sin() - 1.3 * (1.3 * x).cos()) / (0.04 + 1.69);
            g(4.0) - g(0.5)
        };
        assert!((adaptive_simpson(&f, 0.5, 4.0, 1e-13) - exact).abs() < 1e-11);
        let c = Cumulative::new(&f, 0.0, 5.0, &[], 0.1);
        assert!((c.at(&f, 4.0) - c.at(&f, 0.5) - exact).abs() < 1e-13);
    }

    #[test]
    fn breakpoints_handle_jumps() {
        let f = |x: f64| if (1.0..=2.0).contains(&x) { x * x } else { 0.0 };
        let c = Cumulative::new(&f, 0.0, 3.0, &[1.0, 2.0], 0.25);
        assert!((c.total() - 7.0 / 3.0).abs() < 1e-13);
        assert!((adaptive_split(&f, 0.0, 3.0, &[1.0, 2.0], 1e-13) - 7.0 / 3.0).abs() < 1e-12);
    }
}
