use crate::error::{ModelError, Result};

/// Which leg of the relay link is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hop {
    /// Controller at the origin to the UAV.
    First,
    /// UAV to the robot at distance `D`.
    Second,
}

impl Hop {
    pub const BOTH: [Hop; 2] = [Hop::First, Hop::Second];
}

/// Physical scenario: geometry, powers, packet size and blocklength budget.
///
/// Distances are in meters, powers in watts, the reference channel gain in dB
/// and blocklengths in channel symbols. Noise is normalized, so SNRs are
/// `P * beta0 / (d^2 * noise_power)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    /// Horizontal distance from the controller to the robot, `D`.
    pub distance_m: f64,
    /// Fixed hover altitude of the UAV, `H`.
    pub altitude_m: f64,
    /// Lower end of the feasible hover interval, `d1`.
    pub x_min_m: f64,
    /// Upper end of the feasible hover interval, `d2`.
    pub x_max_m: f64,
    /// Packet size `L`.
    pub packet_bits: u32,
    /// Total blocklength `M` shared by the two hops.
    pub total_blocklength: u32,
    /// Bandwidth, informational. `M = round(B * T_max)` when both are set.
    pub bandwidth_hz: Option<f64>,
    /// Latency budget, informational.
    pub latency_s: Option<f64>,
    pub p1_w: f64,
    pub p2_w: f64,
    /// Channel power gain at the 1 m reference distance.
    pub beta0_db: f64,
    pub noise_power: f64,
}

impl ScenarioParams {
    /// The evaluation scenario of the reference system: 1 MHz, 100 us,
    /// D = 200 m, H = 120 m, x in [30, 130] m, L = 100 bits, M = 100,
    /// beta0 = 50 dB, P1 = 3 W, P2 = 1 W.
    pub fn reference() -> Self {
        Self {
            distance_m: 200.0,
            altitude_m: 120.0,
            x_min_m: 30.0,
            x_max_m: 130.0,
            packet_bits: 100,
            total_blocklength: 100,
            bandwidth_hz: Some(1.0e6),
            latency_s: Some(100.0e-6),
            p1_w: 3.0,
            p2_w: 1.0,
            beta0_db: 50.0,
            noise_power: 1.0,
        }
    }

    /// Blocklength implied by a bandwidth and latency budget.
    pub fn blocklength_from_budget(bandwidth_hz: f64, latency_s: f64) -> u32 {
        (bandwidth_hz * latency_s).round() as u32
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("D", self.distance_m),
            ("H", self.altitude_m),
            ("d1", self.x_min_m),
            ("d2", self.x_max_m),
            ("P1", self.p1_w),
            ("P2", self.p2_w),
            ("beta0_db", self.beta0_db),
            ("noise", self.noise_power),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(ModelError::InvalidScenario(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        let bad = |msg: String| Err(ModelError::InvalidScenario(msg));
        if self.distance_m <= 0.0 {
            return bad(format!("D must be > 0, got {}", self.distance_m));
        }
        if self.altitude_m <= 0.0 {
            return bad(format!("H must be > 0, got {}", self.altitude_m));
        }
        if self.x_min_m < 0.0 {
            return bad(format!("d1 must be >= 0, got {}", self.x_min_m));
        }
        if self.x_min_m >= self.x_max_m {
            return bad(format!(
                "d1 < d2 required, got d1 = {} and d2 = {}",
                self.x_min_m, self.x_max_m
            ));
        }
        if self.x_max_m > self.distance_m {
            return bad(format!(
                "d2 <= D required, got d2 = {} and D = {}",
                self.x_max_m, self.distance_m
            ));
        }
        if self.total_blocklength < 2 {
            return bad(format!("M must be >= 2, got {}", self.total_blocklength));
        }
        if self.packet_bits < 1 {
            return bad("L must be >= 1".to_string());
        }
        if self.p1_w <= 0.0 {
            return bad(format!("P1 must be > 0, got {}", self.p1_w));
        }
        if self.p2_w <= 0.0 {
            return bad(format!("P2 must be > 0, got {}", self.p2_w));
        }
        if self.noise_power <= 0.0 {
            return bad(format!("noise must be > 0, got {}", self.noise_power));
        }
        if let (Some(b), Some(t)) = (self.bandwidth_hz, self.latency_s) {
            if !(b > 0.0 && t > 0.0 && b.is_finite() && t.is_finite()) {
                return bad(format!(
                    "B and T_max must be positive, got B = {b}, T_max = {t}"
                ));
            }
            let implied = Self::blocklength_from_budget(b, t);
            if implied != self.total_blocklength {
                return bad(format!(
                    "M = {} disagrees with round(B * T_max) = {implied}",
                    self.total_blocklength
                ));
            }
        }
        Ok(())
    }

    pub fn beta0_linear(&self) -> f64 {
        10f64.powf(self.beta0_db / 10.0)
    }

    pub fn power(&self, hop: Hop) -> f64 {
        match hop {
            Hop::First => self.p1_w,
            Hop::Second => self.p2_w,
        }
    }

    /// Horizontal offset between the UAV at `x` and the ground node of `hop`.
    fn offset(&self, x: f64, hop: Hop) -> f64 {
        match hop {
            Hop::First => x,
            Hop::Second => self.distance_m - x,
        }
    }

    /// Receive SNR of `hop` with the UAV hovering at `x`.
    pub fn snr(&self, x: f64, hop: Hop) -> Result<f64> {
        Ok(self.snr_with_derivatives(x, hop)?.0)
    }

    /// SNR together with its first and second derivatives in `x`.
    pub fn snr_with_derivatives(&self, x: f64, hop: Hop) -> Result<(f64, f64, f64)> {
        if !x.is_finite() {
            return Err(ModelError::NonFinite {
                what: "x",
                value: x,
            });
        }
        let u = self.offset(x, hop);
        let h2 = self.altitude_m * self.altitude_m;
        let s = h2 + u * u;
        let k = self.power(hop) * self.beta0_linear() / self.noise_power;
        let gamma = k / s;
        // d/du and d2/du2 of k / (H^2 + u^2); du/dx is +1 for the first hop, -1 for the second.
        let d_du = -2.0 * k * u / (s * s);
        let d2_du2 = (6.0 * k * u.powi(4) + 4.0 * k * h2 * u * u - 2.0 * k * h2 * h2) / s.powi(4);
        let d_dx = match hop {
            Hop::First => d_du,
            Hop::Second => -d_du,
        };
        Ok((gamma, d_dx, d2_du2))
    }

    /// Midpoint of the feasible hover interval.
    pub fn x_mid(&self) -> f64 {
        0.5 * (self.x_min_m + self.x_max_m)
    }
}

/// Integer split of the blocklength budget between the two hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Allocation {
    pub m1: u32,
    pub m2: u32,
}

impl Allocation {
    /// Split `total` as `(m1, total - m1)`; both parts must be at least one symbol.
    pub fn new(m1: u32, total: u32) -> Result<Self> {
        if m1 < 1 || m1 >= total {
            return Err(ModelError::AllocationOutOfRange {
                m1: m1 as f64,
                max: total.saturating_sub(1),
            });
        }
        Ok(Self { m1, m2: total - m1 })
    }

    pub fn total(&self) -> u32 {
        self.m1 + self.m2
    }

    pub fn get(&self, hop: Hop) -> u32 {
        match hop {
            Hop::First => self.m1,
            Hop::Second => self.m2,
        }
    }
}
