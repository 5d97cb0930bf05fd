use serde::{Deserialize, Serialize};

/// `⟨r⟩ = √(4 + r²)`.
pub fn bracket(r: f64) -> f64 {
    (4.0 + r * r).sqrt()
}

/// Dyadic label `R = 2^k ≥ 2` of the annulus `R ≤ ⟨r⟩ < 2R`; since `⟨r⟩ ≥ 2`
/// the lowest label `R = 2` covers the ball `⟨r⟩ < 4`.
pub fn annulus(r: f64) -> f64 {
    let k = bracket(r).log2().floor().max(1.0);
    2f64.powf(k)
}

/// Dyadic label `2^k ≥ 1` of `x`, with everything below 2 in label 1.
fn dyadic(x: f64) -> f64 {
    if x < 2.0 {
        1.0
    } else {
        2f64.powf(x.log2().floor())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RegionKind {
    /// `C_T = {T ≤ t ≤ 2T, r ≤ t + R₁}`.
    Cone,
    /// `C_T^R`: the part of `C_T` with `r < t/2` and `R ≤ r < 2R` (`r < 2` for `R = 1`).
    Near { r: f64 },
    /// `C_T^U`: the part with `r ≥ t/2` and `U ≤ t − r < 2U` (`t − r < 2` for `U = 1`).
    Far { u: f64 },
    /// `C_T^{<T/2}`: the union of the `C_T^R` with `R < T/2`.
    Interior,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub kind: RegionKind,
    pub t_scale: f64,
    /// Cone offset `R₁`.
    pub cone_offset: f64,
}

impl RegionSpec {
    pub fn cone(t_scale: f64, cone_offset: f64) -> Self {
        Self { kind: RegionKind::Cone, t_scale, cone_offset }
    }

    pub fn with_kind(&self, kind: RegionKind) -> Self {
        Self { kind, ..*self }
    }

    pub fn in_cone(&self, t: f64, r: f64) -> bool {
        t >= self.t_scale && t <= 2.0 * self.t_scale && r <= t + self.cone_offset
    }

    pub fn contains(&self, t: f64, r: f64) -> bool {
        if !self.in_cone(t, r) {
            return false;
        }
        let near = r < 0.5 * t;
        match self.kind {
            RegionKind::Cone => true,
            RegionKind::Near { r: label } => near && dyadic(r) == label,
            RegionKind::Far { u } => !near && dyadic(t - r) == u,
            RegionKind::Interior => near && dyadic(r) < 0.5 * self.t_scale,
        }
    }

    /// The `C_T^R` and `C_T^U` pieces that can be non-empty; they partition `C_T`.
    pub fn decompose(&self) -> Vec<RegionSpec> {
        let mut out = Vec::new();
        let mut label = 1.0;
        while label <= self.t_scale {
            out.push(self.with_kind(RegionKind::Near { r: label }));
            label *= 2.0;
        }
        label = 1.0;
        while label <= 2.0 * self.t_scale {
            out.push(self.with_kind(RegionKind::Far { u: label }));
            label *= 2.0;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_and_annuli() {
        assert_eq!(bracket(0.0), 2.0);
        assert_eq!(annulus(0.0), 2.0);
        assert_eq!(annulus(3.0), 2.0);
        assert_eq!(annulus(4.0), 4.0);
        assert_eq!(annulus(100.0), 64.0);
    }

    #[test]
    fn pieces_partition_the_cone_on_a_grid() {
        for &t_scale in &[3.0, 10.0, 37.0, 100.0] {
            let cone = RegionSpec::cone(t_scale, 5.0);
            let pieces = cone.decompose();
            for it in 0..=40 {
                let t = t_scale * (1.0 + it as f64 / 40.0);
                for ir in 0..=400 {
                    let r = ir as f64 * (2.0 * t_scale + 5.0) * 1.01 / 400.0;
                    let hits = pieces.iter().filter(|p| p.contains(t, r)).count();
                    assert_eq!(hits, usize::from(cone.contains(t, r)), "T = {t_scale}, t = {t}, r = {r}");
                }
            }
        }
    }

    #[test]
    fn interior_lies_in_near_part() {
        let c = RegionSpec::cone(64.0, 5.0);
        let interior = c.with_kind(RegionKind::Interior);
        assert!(interior.contains(64.0, 10.0));
        assert!(!interior.contains(64.0, 40.0));
    }
}
