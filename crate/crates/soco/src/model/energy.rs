use crate::error::{Result, SocoError};
use serde::{Deserialize, Serialize};

/// Power draw of one server as a function of its utilization in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnergyConsumptionModel {
    /// Linear between idle and peak power.
    Linear { idle: f64, peak: f64 },
    /// Idle power is half of peak power.
    HalfPeak { peak: f64 },
    /// `s^exponent / scale + idle`.
    Nonlinear { exponent: f64, scale: f64, idle: f64 },
}

impl EnergyConsumptionModel {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            EnergyConsumptionModel::Linear { idle, peak } => idle >= 0.0 && peak >= idle && peak.is_finite(),
            EnergyConsumptionModel::HalfPeak { peak } => peak >= 0.0 && peak.is_finite(),
            EnergyConsumptionModel::Nonlinear { exponent, scale, idle } => {
                exponent > 1.0 && scale > 0.0 && idle >= 0.0 && exponent.is_finite() && idle.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(SocoError::InvalidArgument(format!("invalid energy consumption model {self:?}")))
        }
    }

    /// Power at utilization `s`.
    pub fn power(&self, s: f64) -> f64 {
        let s = s.max(0.0);
        match *self {
            EnergyConsumptionModel::Linear { idle, peak } => (peak - idle) * s + idle,
            EnergyConsumptionModel::HalfPeak { peak } => 0.5 * peak * (1.0 + s),
            EnergyConsumptionModel::Nonlinear { exponent, scale, idle } => s.powf(exponent) / scale + idle,
        }
    }

    /// Energy consumed during a slot of length `slot_length` at utilization `s`.
    pub fn consumption(&self, slot_length: f64, s: f64) -> f64 {
        slot_length * self.power(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_peak_idles_at_half() {
        let m = EnergyConsumptionModel::HalfPeak { peak: 2.0 };
        assert_eq!(m.power(0.0), 1.0);
        assert_eq!(m.power(1.0), 2.0);
        let lin = EnergyConsumptionModel::Linear { idle: 1.0, peak: 2.0 };
        for s in [0.0, 0.3, 1.0] {
            assert!((m.power(s) - lin.power(s)).abs() < 1e-15);
        }
    }

    #[test]
    fn models_are_convex_and_increasing() {
        let models = [
            EnergyConsumptionModel::Linear { idle: 0.5, peak: 1.0 },
            EnergyConsumptionModel::HalfPeak { peak: 1.0 },
            EnergyConsumptionModel::Nonlinear { exponent: 2.5, scale: 3.0, idle: 0.2 },
        ];
        for m in models {
            m.validate().unwrap();
            for k in 0..99 {
                let (a, b, c) = (k as f64 / 100.0, (k + 1) as f64 / 100.0, (k + 2) as f64 / 100.0);
                assert!(m.power(b) >= m.power(a));
                assert!(m.power(a) + m.power(c) >= 2.0 * m.power(b) - 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(EnergyConsumptionModel::Nonlinear { exponent: 1.0, scale: 1.0, idle: 0.0 }.validate().is_err());
        assert!(EnergyConsumptionModel::Linear { idle: 2.0, peak: 1.0 }.validate().is_err());
    }
}
