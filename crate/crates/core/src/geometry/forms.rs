use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Index pairs `(α, β)`, `α < β`, in storage order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index triples `(α, β, γ)`, `α < β < γ`, in storage order.
pub const TRIPLES: [(usize, usize, usize); 4] = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];

/// A point `(t, x, y, z)` of the spacetime in Cartesian coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: [f64; 3],
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x: [x, y, z] }
    }

    /// Point at areal radius `r` and polar angles `(θ, φ)`.
    pub fn from_polar(t: f64, r: f64, theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self { t, x: [r * st * cp, r * st * sp, r * ct] }
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self { t: c[0], x: [c[1], c[2], c[3]] }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.t, self.x[0], self.x[1], self.x[2]]
    }

    pub fn r(&self) -> f64 {
        (self.x[0] * self.x[0] + self.x[1] * self.x[1] + self.x[2] * self.x[2]).sqrt()
    }

    pub fn theta(&self) -> f64 {
        let r = self.r();
        if r == 0.0 {
            0.0
        } else {
            (self.x[2] / r).clamp(-1.0, 1.0).acos()
        }
    }

    pub fn phi(&self) -> f64 {
        self.x[1].atan2(self.x[0])
    }

    /// The point displaced by `h` along coordinate direction `dir`.
    pub fn shifted(&self, dir: usize, h: f64) -> Self {
        let mut c = self.as_array();
        c[dir] += h;
        Self::from_array(c)
    }
}

/// Antisymmetric (0,2)-tensor; only the six components with `α < β` are stored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TwoForm(pub [f64; 6]);

fn pair_slot(a: usize, b: usize) -> Option<(usize, f64)> {
    if a == b {
        return None;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let slot = match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => return None,
    };
    Some((slot, sign))
}

impl TwoForm {
    pub const ZERO: TwoForm = TwoForm([0.0; 6]);

    /// `F_{ab}` with antisymmetry applied.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        match pair_slot(a, b) {
            Some((slot, sign)) => sign * self.0[slot],
            None => 0.0,
        }
    }

    /// Sets `F_{ab}` (and therefore `F_{ba} = -F_{ab}`).
    pub fn set(&mut self, a: usize, b: usize, value: f64) {
        if let Some((slot, sign)) = pair_slot(a, b) {
            self.0[slot] = sign * value;
        }
    }

    /// Elementary form `dx^a ∧ dx^b` scaled by `value`.
    pub fn basis(a: usize, b: usize, value: f64) -> Self {
        let mut f = TwoForm::ZERO;
        f.set(a, b, value);
        f
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            m[a][b] = self.0[k];
            m[b][a] = -self.0[k];
        }
        m
    }

    /// Antisymmetric part of a general matrix.
    pub fn from_matrix(m: &[[f64; 4]; 4]) -> Self {
        let mut f = TwoForm::ZERO;
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            f.0[k] = 0.5 * (m[a][b] - m[b][a]);
        }
        f
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl Add for TwoForm {
    type Output = TwoForm;
    fn add(self, rhs: TwoForm) -> TwoForm {
        let mut out = self;
        for k in 0..6 {
            out.0[k] += rhs.0[k];
        }
        out
    }
}

impl Sub for TwoForm {
    type Output = TwoForm;
    fn sub(self, rhs: TwoForm) -> TwoForm {
        let mut out = self;
        for k in 0..6 {
            out.0[k] -= rhs.0[k];
        }
        out
    }
}

impl Neg for TwoForm {
    type Output = TwoForm;
    fn neg(self) -> TwoForm {
        self * -1.0
    }
}

impl Mul<f64> for TwoForm {
    type Output = TwoForm;
    fn mul(self, s: f64) -> TwoForm {
        TwoForm(self.0.map(|v| v * s))
    }
}

/// Totally antisymmetric (0,3)-tensor; four independent components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ThreeForm(pub [f64; 4]);

fn triple_slot(a: usize, b: usize, c: usize) -> Option<(usize, f64)> {
    if a == b || b == c || a == c || a > 3 || b > 3 || c > 3 {
        return None;
    }
    let mut idx = [a, b, c];
    let mut sign = 1.0;
    for i in 0..3 {
        for j in 0..2 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let slot = TRIPLES.iter().position(|&(x, y, z)| [x, y, z] == idx)?;
    Some((slot, sign))
}

impl ThreeForm {
    pub const ZERO: ThreeForm = ThreeForm([0.0; 4]);

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        match triple_slot(a, b, c) {
            Some((slot, sign)) => sign * self.0[slot],
            None => 0.0,
        }
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, value: f64) {
        if let Some((slot, sign)) = triple_slot(a, b, c) {
            self.0[slot] = sign * value;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

impl Add for ThreeForm {
    type Output = ThreeForm;
    fn add(self, rhs: ThreeForm) -> ThreeForm {
        let mut out = self;
        for k in 0..4 {
            out.0[k] += rhs.0[k];
        }
        out
    }
}

impl Sub for ThreeForm {
    type Output = ThreeForm;
    fn sub(self, rhs: ThreeForm) -> ThreeForm {
        let mut out = self;
        for k in 0..4 {
            out.0[k] -= rhs.0[k];
        }
        out
    }
}

impl Mul<f64> for ThreeForm {
    type Output = ThreeForm;
    fn mul(self, s: f64) -> ThreeForm {
        ThreeForm(self.0.map(|v| v * s))
    }
}

/// Levi-Civita symbol with `ε_{0123} = +1`.
pub fn levi_civita(i: [usize; 4]) -> f64 {
    let mut seen = [false; 4];
    for &k in &i {
        if k > 3 || seen[k] {
            return 0.0;
        }
        seen[k] = true;
    }
    let mut sign = 1.0;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if i[a] > i[b] {
                sign = -sign;
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_form_antisymmetry() {
        let mut f = TwoForm::ZERO;
        f.set(2, 1, 3.0);
        assert_eq!(f.get(1, 2), -3.0);
        assert_eq!(f.get(2, 1), 3.0);
        assert_eq!(f.get(1, 1), 0.0);
        let back = TwoForm::from_matrix(&f.to_matrix());
        assert_eq!(back, f);
    }

    #[test]
    fn three_form_permutations() {
        let mut g = ThreeForm::ZERO;
        g.set(1, 2, 3, 1.0);
        assert_eq!(g.get(2, 3, 1), 1.0);
        assert_eq!(g.get(3, 2, 1), -1.0);
        assert_eq!(g.get(1, 1, 2), 0.0);
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita([0, 1, 2, 3]), 1.0);
        assert_eq!(levi_civita([1, 0, 2, 3]), -1.0);
        assert_eq!(levi_civita([1, 2, 3, 0]), -1.0);
        assert_eq!(levi_civita([0, 0, 2, 3]), 0.0);
    }

    #[test]
    fn polar_round_trip() {
        let p = SpacetimePoint::from_polar(1.0, 5.0, 0.7, -2.1);
        assert!((p.r() - 5.0).abs() < 1e-14);
        assert!((p.theta() - 0.7).abs() < 1e-14);
        assert!((p.phi() + 2.1).abs() < 1e-14);
    }
}
