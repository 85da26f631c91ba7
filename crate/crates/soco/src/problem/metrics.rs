use crate::error::{Result, SocoError};
use serde::{Deserialize, Serialize};

/// Evaluation metrics relative to the dynamic and static offline optima.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// `cost / opt`
    pub normalized_cost: f64,
    /// `(static - cost) / static`
    pub cost_reduction: f64,
    /// Static/dynamic ratio `static / opt`.
    pub sdr: f64,
    /// Potential cost reduction: the cost reduction of the dynamic optimum.
    pub pcr: f64,
}

pub fn metrics(cost_alg: f64, cost_opt: f64, cost_static: f64) -> Result<Metrics> {
    if !(cost_opt > 0.0) {
        return Err(SocoError::DegenerateBaseline(format!("optimal cost {cost_opt}")));
    }
    if !(cost_static > 0.0) {
        return Err(SocoError::DegenerateBaseline(format!("static cost {cost_static}")));
    }
    Ok(Metrics {
        normalized_cost: cost_alg / cost_opt,
        cost_reduction: (cost_static - cost_alg) / cost_static,
        sdr: cost_static / cost_opt,
        pcr: (cost_static - cost_opt) / cost_static,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let m = metrics(8.0, 4.0, 10.0).unwrap();
        assert_eq!(m.normalized_cost, 2.0);
        assert!((m.cost_reduction - 0.2).abs() < 1e-15);
        assert_eq!(m.sdr, 2.5);
        assert_eq!(metrics(4.0, 4.0, 10.0).unwrap().normalized_cost, 1.0);
    }

    #[test]
    fn reported_shape() {
        let opt = 100.0;
        let alg = 1.284 * opt;
        let stat = alg / 0.89;
        let m = metrics(alg, opt, stat).unwrap();
        assert!((m.normalized_cost - 1.284).abs() < 1e-12);
        assert!((m.cost_reduction - 0.11).abs() < 1e-12);
    }

    #[test]
    fn degenerate() {
        assert!(matches!(metrics(1.0, 0.0, 1.0), Err(SocoError::DegenerateBaseline(_))));
        assert!(matches!(metrics(1.0, 1.0, 0.0), Err(SocoError::DegenerateBaseline(_))));
    }
}
