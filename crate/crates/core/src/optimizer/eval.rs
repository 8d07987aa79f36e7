use crate::error::Result;
use crate::model::{self, Hop, ScenarioParams};

/// Model access for the solvers, counting every objective or derivative call.
pub(crate) struct Evaluator<'a> {
    pub params: &'a ScenarioParams,
    pub count: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(params: &'a ScenarioParams) -> Self {
        Self { params, count: 0 }
    }

    pub fn surrogate(&mut self, x: f64, m1: u32) -> Result<f64> {
        self.count += 1;
        model::approx_error(self.params, x, m1 as f64)
    }

    /// One blocklength bisection step: `true` when the search should move to
    /// smaller `m1`. Counts as a single evaluation.
    pub fn blocklength_descends_left(&mut self, x: f64, m1: f64) -> Result<bool> {
        self.count += 1;
        let p = self.params;
        let l = p.packet_bits as f64;
        let m2 = p.total_blocklength as f64 - m1;
        let (g1, g2) = (p.snr(x, Hop::First)?, p.snr(x, Hop::Second)?);
        if model::rate_penalty(g1, m1, l)? + model::rate_penalty(g2, m2, l)? <= 0.0 {
            let slope = model::rate_penalty_dm(g1, m1, l)? - model::rate_penalty_dm(g2, m2, l)?;
            return Ok(slope < 0.0);
        }
        Ok(model::approx_error_dm1(p, x, m1)? > 0.0)
    }

    pub fn g_prime(&mut self, x: f64, m1: u32) -> Result<f64> {
        self.count += 1;
        let m2 = self.params.total_blocklength - m1;
        model::g_prime(self.params, x, m1 as f64, m2 as f64)
    }
}
