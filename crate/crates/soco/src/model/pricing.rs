use crate::error::{Result, SocoError};
use serde::{Deserialize, Serialize};

/// A value that is either constant or given per slot.
///
/// Per-slot series repeat their last entry beyond their length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Series {
    Constant(f64),
    PerSlot(Vec<f64>),
}

impl Default for Series {
    fn default() -> Self {
        Series::Constant(0.0)
    }
}

impl Series {
    pub fn at(&self, t: usize) -> f64 {
        match self {
            Series::Constant(v) => *v,
            Series::PerSlot(v) if v.is_empty() => 0.0,
            Series::PerSlot(v) => v[(t.max(1) - 1).min(v.len() - 1)],
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Series::Constant(_) => true,
            Series::PerSlot(v) => v.windows(2).all(|w| w[0] == w[1]),
        }
    }

    /// Mean over slots `1..=horizon`.
    pub fn mean(&self, horizon: usize) -> f64 {
        if horizon == 0 {
            return self.at(1);
        }
        (1..=horizon).map(|t| self.at(t)).sum::<f64>() / horizon as f64
    }

    fn all(&self, ok: impl Fn(f64) -> bool) -> bool {
        match self {
            Series::Constant(v) => ok(*v),
            Series::PerSlot(v) => v.iter().all(|x| ok(*x)),
        }
    }
}

/// One energy source with a per-location supply cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySource {
    /// Cost per unit of energy.
    pub cost: Series,
    /// Profit per unit of unused energy sold back.
    #[serde(default)]
    pub profit: Series,
    /// Available energy per location; missing or `null` entries are unlimited.
    #[serde(default)]
    pub supply: Vec<Option<Series>>,
}

impl EnergySource {
    fn supply_at(&self, location: usize, t: usize) -> f64 {
        match self.supply.get(location) {
            Some(Some(s)) => s.at(t),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnergyPricing {
    /// Every unit of energy costs `cost`.
    Flat { cost: Series },
    /// Sources are used in order of cost until the demand is met.
    Quotas { sources: Vec<EnergySource> },
}

impl EnergyPricing {
    pub fn validate(&self) -> Result<()> {
        let nonneg = |s: &Series| s.all(|v| v >= 0.0 && v.is_finite());
        let ok = match self {
            EnergyPricing::Flat { cost } => nonneg(cost),
            EnergyPricing::Quotas { sources } => {
                !sources.is_empty()
                    && sources.iter().all(|s| {
                        nonneg(&s.cost) && nonneg(&s.profit) && s.supply.iter().flatten().all(|p| p.all(|v| v >= 0.0))
                    })
            }
        };
        if ok {
            Ok(())
        } else {
            Err(SocoError::InvalidArgument("energy prices, profits and supplies must be nonnegative".into()))
        }
    }

    /// Flat price at slot `t`, if the pricing is flat.
    pub fn flat_price(&self, t: usize) -> Option<f64> {
        match self {
            EnergyPricing::Flat { cost } => Some(cost.at(t)),
            EnergyPricing::Quotas { .. } => None,
        }
    }

    /// Total supply at `location` during slot `t`.
    pub fn supply(&self, location: usize, t: usize) -> f64 {
        match self {
            EnergyPricing::Flat { .. } => f64::INFINITY,
            EnergyPricing::Quotas { sources } => sources.iter().map(|s| s.supply_at(location, t)).sum(),
        }
    }

    /// Cost of consuming `p` units of energy at `location` during slot `t`.
    ///
    /// With sell-back profits the raw value can be negative; it is clamped at zero.
    pub fn energy_price(&self, location: usize, t: usize, p: f64) -> Result<f64> {
        if !(p >= 0.0) {
            return Err(SocoError::InvalidArgument(format!("energy consumption {p} is negative")));
        }
        match self {
            EnergyPricing::Flat { cost } => Ok(cost.at(t) * p),
            EnergyPricing::Quotas { sources } => {
                let mut order: Vec<&EnergySource> = sources.iter().collect();
                order.sort_by(|a, b| (a.cost.at(t) + a.profit.at(t)).total_cmp(&(b.cost.at(t) + b.profit.at(t))));
                let supply = self.supply(location, t);
                if p > supply * (1.0 + 1e-12) {
                    return Err(SocoError::InsufficientSupply { demand: p, supply });
                }
                let mut remaining = p;
                let mut total = 0.0;
                for s in order {
                    let cap = s.supply_at(location, t);
                    let used = remaining.min(cap);
                    let (c, u) = (s.cost.at(t), s.profit.at(t));
                    total += c * used;
                    if u > 0.0 && cap.is_finite() {
                        total -= u * (cap - used);
                    }
                    remaining -= used;
                }
                Ok(total.max(0.0))
            }
        }
    }
}
