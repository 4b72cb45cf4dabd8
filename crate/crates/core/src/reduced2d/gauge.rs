use crate::eigencore::VectorPotential;

use super::params::StepFieldParams;

/// The step-field gauge `A = (0, A₂)` with
/// `A₂ = cos γ x₁ - (1 - a) cos γ cot α x₂` on `D¹` and `A₂ = a cos γ x₁`
/// on `D²`. Both branches agree on the discontinuity line, and
/// `curl A = s cos γ`.
#[derive(Debug, Clone, Copy)]
pub struct StepGauge {
    params: StepFieldParams,
    cos_g: f64,
    cot_a: f64,
}

impl StepGauge {
    pub fn new(params: StepFieldParams) -> Self {
        Self { params, cos_g: params.gamma.cos(), cot_a: 1.0 / params.alpha.tan() }
    }

    pub fn a2_d1(&self, x: [f64; 2]) -> f64 {
        self.cos_g * x[0] - (1.0 - self.params.a) * self.cos_g * self.cot_a * x[1]
    }

    pub fn a2_d2(&self, x: [f64; 2]) -> f64 {
        self.params.a * self.cos_g * x[0]
    }

    fn crossing(&self, p: [f64; 2], q: [f64; 2]) -> Option<[f64; 2]> {
        let (fp, fq) = (self.params.side(p), self.params.side(q));
        if fp * fq < 0.0 {
            let t = fp / (fp - fq);
            Some([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])])
        } else {
            None
        }
    }

    /// Exact integral over a segment lying in one sector (A is linear there).
    fn piece(&self, p: [f64; 2], q: [f64; 2]) -> f64 {
        let m = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
        self.value(m)[1] * (q[1] - p[1])
    }
}

impl VectorPotential for StepGauge {
    fn value(&self, x: [f64; 2]) -> [f64; 2] {
        if self.params.side(x) > 0.0 {
            [0.0, self.a2_d1(x)]
        } else {
            [0.0, self.a2_d2(x)]
        }
    }

    fn link_integral(&self, p: [f64; 2], q: [f64; 2]) -> f64 {
        match self.crossing(p, q) {
            Some(m) => self.piece(p, m) + self.piece(m, q),
            None => self.piece(p, q),
        }
    }

    fn interface_jump(&self, p: [f64; 2], q: [f64; 2]) -> Option<(f64, [f64; 2])> {
        self.crossing(p, q).map(|m| ((self.a2_d1(m) - self.a2_d2(m)).abs(), m))
    }
}
