use serde::{Deserialize, Serialize};

use crate::modes::ModeIndex;
use crate::{Error, Result};

use super::data::{InitialDataSpec, SourceSpec};
use super::grid::{Background, Grid1D, InnerBoundary, SpatialOrder};

/// One mode on the tortoise grid: master function `ψ`, `π = ∂_tψ`, and the
/// transported null derivatives `φ₊ = ∂_vψ`, `φ₋ = ∂_uψ` (the `r`-weighted
/// amplitudes of `F_vA` and `F_uA`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeState {
    pub t: f64,
    pub mode: ModeIndex,
    pub psi: Vec<f64>,
    pub pi: Vec<f64>,
    pub phi_plus: Vec<f64>,
    pub phi_minus: Vec<f64>,
}

impl ModeState {
    pub fn zero(mode: ModeIndex, n: usize) -> Self {
        Self { t: 0.0, mode, psi: vec![0.0; n], pi: vec![0.0; n], phi_plus: vec![0.0; n], phi_minus: vec![0.0; n] }
    }

    pub fn from_data(mode: ModeIndex, grid: &Grid1D, bg: &Background, data: &InitialDataSpec) -> Self {
        let mut s = Self::zero(mode, grid.n);
        for i in 0..grid.n {
            if bg.inner == InnerBoundary::Origin && i == 0 {
                continue;
            }
            let d = data.sample(grid.x(i));
            s.psi[i] = d.psi;
            s.pi[i] = d.pi;
            s.phi_plus[i] = d.phi_plus;
            s.phi_minus[i] = d.phi_minus;
        }
        s
    }

    fn fields(&self) -> [&[f64]; 4] {
        [&self.psi, &self.pi, &self.phi_plus, &self.phi_minus]
    }

    fn fields_mut(&mut self) -> [&mut Vec<f64>; 4] {
        [&mut self.psi, &mut self.pi, &mut self.phi_plus, &mut self.phi_minus]
    }
}

type Fields = [Vec<f64>; 4];

/// Method-of-lines integrator for `∂_t²ψ = ∂_{r*}²ψ − Vψ + S` together with
/// `∂_tφ₊ = ∂_{r*}φ₊ + ½(S − V_sψ)` and `∂_tφ₋ = −∂_{r*}φ₋ + ½(S − V_sψ)`.
pub struct Stepper {
    pub grid: Grid1D,
    pub background: Background,
    pub order: SpatialOrder,
    pub source: Option<SourceSpec>,
    stage: Fields,
    acc: Fields,
    rate: Fields,
}

fn zeros(n: usize) -> Fields {
    [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]]
}

impl Stepper {
    pub fn new(grid: Grid1D, background: Background, order: SpatialOrder, source: Option<SourceSpec>) -> Result<Self> {
        grid.check_cfl()?;
        if background.r.len() != grid.n {
            return Err(Error::Input("background does not match grid".into()));
        }
        let n = grid.n;
        Ok(Self { grid, background, order, source, stage: zeros(n), acc: zeros(n), rate: zeros(n) })
    }

    /// One RK4 step of size `grid.dt`.
    pub fn step(&mut self, state: &mut ModeState) -> Result<()> {
        self.grid.check_cfl()?;
        let dt = self.grid.dt;
        let t0 = state.t;
        for k in 0..4 {
            self.acc[k].copy_from_slice(state.fields()[k]);
        }
        let weights = [(0.5, 1.0 / 6.0), (0.5, 1.0 / 3.0), (1.0, 1.0 / 3.0), (0.0, 1.0 / 6.0)];
        let mut stage_time = t0;
        for (s, &(next, w)) in weights.iter().enumerate() {
            let mut rate = std::mem::take(&mut self.rate);
            if s == 0 {
                self.rhs(stage_time, state.fields(), &mut rate);
            } else {
                let stage = std::mem::take(&mut self.stage);
                self.rhs(stage_time, [&stage[0], &stage[1], &stage[2], &stage[3]], &mut rate);
                self.stage = stage;
            }
            for k in 0..4 {
                let (wdt, cdt) = (w * dt, next * dt);
                for (a, r) in self.acc[k].iter_mut().zip(&rate[k]) {
                    *a += wdt * r;
                }
                if next > 0.0 {
                    for ((st, y), r) in self.stage[k].iter_mut().zip(state.fields()[k]).zip(&rate[k]) {
                        *st = y + cdt * r;
                    }
                }
            }
            self.rate = rate;
            stage_time = t0 + next * dt;
        }
        for (k, dst) in state.fields_mut().into_iter().enumerate() {
            dst.copy_from_slice(&self.acc[k]);
        }
        state.t = t0 + dt;
        for field in state.fields() {
            if let Some(index) = field.iter().position(|v| !v.is_finite()) {
                return Err(Error::Instability { index, time: state.t });
            }
        }
        Ok(())
    }

    fn rhs(&self, t: f64, y: [&[f64]; 4], out: &mut Fields) {
        let n = self.grid.n;
        let h = self.grid.dr;
        let [psi, pi, pp, pm] = y;
        let bg = &self.background;
        let (ve, vt) = (&bg.evolution_potential[..n], &bg.transport_potential[..n]);
        let [d_psi, d_pi, d_pp, d_pm] = out;
        let (d_psi, d_pi, d_pp, d_pm) = (&mut d_psi[..n], &mut d_pi[..n], &mut d_pp[..n], &mut d_pm[..n]);

        d_psi[1..n - 1].copy_from_slice(&pi[1..n - 1]);
        let (c2, c1) = (1.0 / (h * h), 0.5 / h);
        for i in 1..n - 1 {
            let drive = -0.5 * vt[i] * psi[i];
            d_pi[i] = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) * c2 - ve[i] * psi[i];
            d_pp[i] = (pp[i + 1] - pp[i - 1]) * c1 + drive;
            d_pm[i] = -(pm[i + 1] - pm[i - 1]) * c1 + drive;
        }
        if self.order == SpatialOrder::Fourth && n > 4 {
            let (c2, c1) = (1.0 / (12.0 * h * h), 1.0 / (12.0 * h));
            for i in 2..n - 2 {
                let drive = -0.5 * vt[i] * psi[i];
                let lap = (-psi[i + 2] + 16.0 * psi[i + 1] - 30.0 * psi[i] + 16.0 * psi[i - 1] - psi[i - 2]) * c2;
                d_pi[i] = lap - ve[i] * psi[i];
                d_pp[i] = (-pp[i + 2] + 8.0 * pp[i + 1] - 8.0 * pp[i - 1] + pp[i - 2]) * c1 + drive;
                d_pm[i] = -(-pm[i + 2] + 8.0 * pm[i + 1] - 8.0 * pm[i - 1] + pm[i - 2]) * c1 + drive;
            }
        }

        let forward = |f: &[f64]| (-3.0 * f[0] + 4.0 * f[1] - f[2]) * c1;
        let backward = |f: &[f64]| (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * c1;
        let last = n - 1;
        let drive = -0.5 * vt[last] * psi[last];
        d_psi[last] = -backward(psi);
        d_pi[last] = -backward(pi);
        d_pp[last] = drive;
        d_pm[last] = -backward(pm) + drive;
        match bg.inner {
            InnerBoundary::Radiative => {
                let drive = -0.5 * vt[0] * psi[0];
                d_psi[0] = forward(psi);
                d_pi[0] = forward(pi);
                d_pp[0] = forward(pp) + drive;
                d_pm[0] = drive;
            }
            InnerBoundary::Origin => {
                d_psi[0] = 0.0;
                d_pi[0] = 0.0;
                d_pp[0] = 0.0;
                d_pm[0] = 0.0;
            }
        }

        if let Some(src) = &self.source {
            let start = if bg.inner == InnerBoundary::Origin { 1 } else { 0 };
            for i in start..n {
                let s = src.eval(t, self.grid.x(i));
                if s != 0.0 {
                    d_pi[i] += s;
                    d_pp[i] += 0.5 * s;
                    d_pm[i] += 0.5 * s;
                }
            }
        }
    }

    /// Discrete energy `Σ (π² + (δ₊ψ)² + Vψ²)·dr*`, with `δ₊` the forward
    /// difference (the form conserved by the three-point Laplacian).
    pub fn energy(&self, state: &ModeState) -> f64 {
        let h = self.grid.dr;
        let v = &self.background.evolution_potential;
        (0..self.grid.n - 1)
            .map(|i| {
                let d = (state.psi[i + 1] - state.psi[i]) / h;
                state.pi[i] * state.pi[i] + d * d + v[i] * state.psi[i] * state.psi[i]
            })
            .sum::<f64>()
            * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::data::{Profile, Symmetry};
    use crate::geometry::MetricSpec;
    use crate::modes::Parity;

    fn flat_line(rmin: f64, rmax: f64, dr: f64, order: SpatialOrder) -> Stepper {
        let grid = Grid1D::with_spacing(rmin, rmax, dr, 0.5).unwrap();
        let mut bg = Background::new(&MetricSpec::minkowski(), &grid, 1, 1, 1).unwrap();
        bg.evolution_potential.iter_mut().for_each(|v| *v = 0.0);
        bg.transport_potential.iter_mut().for_each(|v| *v = 0.0);
        Stepper::new(grid, bg, order, None).unwrap()
    }

    fn mode() -> ModeIndex {
        ModeIndex::axisymmetric(1, Parity::Odd)
    }

    fn translation_error(dr: f64, order: SpatialOrder) -> f64 {
        let mut st = flat_line(1.0, 200.0, dr, order);
        let data = InitialDataSpec { center: 50.0, symmetry: Symmetry::Outgoing, ..Default::default() };
        let mut s = ModeState::from_data(mode(), &st.grid, &st.background, &data);
        let steps = (100.0 / st.grid.dt).round() as usize;
        for _ in 0..steps {
            st.step(&mut s).unwrap();
        }
        let err2: f64 = (0..st.grid.n)
            .map(|i| {
                let exact = data.shape(st.grid.x(i) - s.t).0;
                (s.psi[i] - exact).powi(2)
            })
            .sum::<f64>()
            * st.grid.dr;
        err2.sqrt()
    }

    #[test]
    fn pulse_translates_at_unit_speed() {
        let coarse = translation_error(0.2, SpatialOrder::Second);
        let fine = translation_error(0.1, SpatialOrder::Second);
        let order = (coarse / fine).log2();
        assert!(fine < 1e-2, "L2 error {fine}");
        assert!((order - 2.0).abs() < 0.2, "order {order}");
        let fourth = translation_error(0.2, SpatialOrder::Fourth);
        assert!(fourth < coarse / 10.0);
    }

    #[test]
    fn zero_stays_zero() {
        let mut st = flat_line(1.0, 50.0, 0.5, SpatialOrder::Second);
        let mut s = ModeState::zero(mode(), st.grid.n);
        for _ in 0..200 {
            st.step(&mut s).unwrap();
        }
        assert!(s.psi.iter().chain(&s.pi).chain(&s.phi_plus).chain(&s.phi_minus).all(|&v| v == 0.0));
    }

    #[test]
    fn energy_conserved_while_pulse_is_interior() {
        let grid = Grid1D::with_spacing(-700.0, 700.0, 0.1, 0.5).unwrap();
        let spec = MetricSpec::schwarzschild(1.0);
        let bg = Background::new(&spec, &grid, 1, 1, 1).unwrap();
        let mut st = Stepper::new(grid, bg, SpatialOrder::Second, None).unwrap();
        let data = InitialDataSpec { profile: Profile::Gaussian, ..Default::default() };
        let mut s = ModeState::from_data(mode(), &st.grid, &st.background, &data);
        let e0 = st.energy(&s);
        let mut prev = e0;
        for k in 0..10_000 {
            st.step(&mut s).unwrap();
            if k % 100 == 99 {
                let e = st.energy(&s);
                assert!(e <= prev * (1.0 + 1e-12), "energy grew at step {k}: {prev} -> {e}");
                prev = e;
            }
        }
        let drift = (e0 - prev).abs() / e0;
        assert!(drift <= 1e-6, "relative drift {drift}");
    }

    #[test]
    fn cfl_violation_is_refused() {
        let mut st = flat_line(1.0, 50.0, 0.5, SpatialOrder::Second);
        st.grid.dt = 0.3;
        let mut s = ModeState::zero(mode(), st.grid.n);
        assert!(matches!(st.step(&mut s), Err(Error::Cfl { .. })));
    }

    #[test]
    fn blow_up_reports_index() {
        let mut st = flat_line(1.0, 50.0, 0.5, SpatialOrder::Second);
        let mut s = ModeState::zero(mode(), st.grid.n);
        s.psi[7] = f64::NAN;
        match st.step(&mut s) {
            Err(Error::Instability { index, .. }) => assert!(index >= 5 && index <= 9),
            other => panic!("expected instability, got {other:?}"),
        }
    }
}
