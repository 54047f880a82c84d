//! Validation tolerances, scaled together by the `FLIPKIT_TOL` factor.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Segment lengths and positions along an edge.
    pub len: f64,
    /// Face areas and the total area budget.
    pub area: f64,
    /// Corner angles and angle sums.
    pub angle: f64,
    /// Distance of a vertex from its supporting geodesic.
    pub incidence: f64,
    /// Disagreement between two routes of the development.
    pub closure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { len: 1e-8, area: 1e-8, angle: 1e-8, incidence: 1e-8, closure: 1e-7 }
    }
}

impl Tolerances {
    pub fn scaled(self, k: f64) -> Self {
        Tolerances {
            len: self.len * k,
            area: self.area * k,
            angle: self.angle * k,
            incidence: self.incidence * k,
            closure: self.closure * k,
        }
    }

    /// Defaults scaled by `FLIPKIT_TOL` (1.0 when unset or unparsable).
    pub fn from_env() -> Self {
        Self::default().scaled(env_scale())
    }
}

pub fn env_scale() -> f64 {
    std::env::var("FLIPKIT_TOL")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|k| k.is_finite() && *k > 0.0)
        .unwrap_or(1.0)
}
