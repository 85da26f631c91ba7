use super::multi::{Afhc, BudgetMode, LazyBudgetSblo, LazyBudgetSbloRefined, LazyBudgetSlo, Obd, Ogd, Rhc};
use super::uni::{FractionalKind, IntLcp, Lcp, Memoryless, Probabilistic, RandomizedRelaxation, RandomlyBiasedGreedy};
use super::OnlineAlgorithm;
use crate::error::{Result, SocoError};
use serde::{Deserialize, Serialize};

fn default_theta() -> f64 {
    1.0
}

fn default_epsilon() -> f64 {
    1e-3
}

fn default_half() -> f64 {
    0.5
}

fn default_one() -> f64 {
    1.0
}

fn default_mode() -> BudgetMode {
    BudgetMode::TimeIndependent
}

/// Serializable description of an online algorithm and its options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "alg", rename_all = "snake_case")]
pub enum OnlineSpec {
    Lcp {
        #[serde(default)]
        window: usize,
    },
    IntLcp {
        #[serde(default)]
        window: usize,
    },
    Memoryless,
    Probabilistic {
        #[serde(default = "default_epsilon")]
        epsilon: f64,
    },
    Rbg {
        #[serde(default = "default_theta")]
        theta: f64,
        #[serde(default)]
        seed: u64,
    },
    RandomizedRelaxation {
        #[serde(default = "default_kind")]
        kind: FractionalKind,
        #[serde(default)]
        seed: u64,
    },
    LazyBudgetSlo {
        #[serde(default)]
        randomized: bool,
        #[serde(default)]
        seed: u64,
    },
    LazyBudgetSblo {
        #[serde(default = "default_mode")]
        mode: BudgetMode,
    },
    LazyBudgetSbloRefined {
        epsilon: f64,
    },
    Ogd {
        #[serde(default = "default_one")]
        eta0: f64,
    },
    PObd {
        #[serde(default = "default_half")]
        beta: f64,
    },
    DObd {
        #[serde(default = "default_one")]
        eta: f64,
    },
    Rhc {
        #[serde(default)]
        window: usize,
    },
    Afhc {
        #[serde(default)]
        window: usize,
    },
}

fn default_kind() -> FractionalKind {
    FractionalKind::Probabilistic
}

impl OnlineSpec {
    /// Parses a command-line style name with window and seed options.
    pub fn from_name(name: &str, window: usize, seed: u64, param: Option<f64>) -> Result<Self> {
        Ok(match name {
            "lcp" => OnlineSpec::Lcp { window },
            "int_lcp" | "int-lcp" => OnlineSpec::IntLcp { window },
            "memoryless" => OnlineSpec::Memoryless,
            "probabilistic" => OnlineSpec::Probabilistic { epsilon: param.unwrap_or(default_epsilon()) },
            "rbg" => OnlineSpec::Rbg { theta: param.unwrap_or(1.0), seed },
            "randomized_relaxation" | "rand-relaxation" => {
                OnlineSpec::RandomizedRelaxation { kind: FractionalKind::Probabilistic, seed }
            }
            "randomized_relaxation_rbg" => OnlineSpec::RandomizedRelaxation { kind: FractionalKind::Rbg, seed },
            "lazy_budget_slo" | "lb-slo" => OnlineSpec::LazyBudgetSlo { randomized: false, seed },
            "randomized_lazy_budget_slo" | "rlb-slo" => OnlineSpec::LazyBudgetSlo { randomized: true, seed },
            "lazy_budget_sblo" | "lb-sblo" => OnlineSpec::LazyBudgetSblo { mode: BudgetMode::TimeIndependent },
            "lazy_budget_sblo_time_dependent" => OnlineSpec::LazyBudgetSblo { mode: BudgetMode::TimeDependent },
            "lazy_budget_sblo_refined" | "lb-sblo-refined" => {
                OnlineSpec::LazyBudgetSbloRefined { epsilon: param.unwrap_or(0.25) }
            }
            "ogd" => OnlineSpec::Ogd { eta0: param.unwrap_or(1.0) },
            "p_obd" | "p-obd" => OnlineSpec::PObd { beta: param.unwrap_or(0.5) },
            "d_obd" | "d-obd" => OnlineSpec::DObd { eta: param.unwrap_or(1.0) },
            "rhc" => OnlineSpec::Rhc { window },
            "afhc" => OnlineSpec::Afhc { window },
            other => return Err(SocoError::InvalidArgument(format!("unknown online algorithm {other:?}"))),
        })
    }

    pub fn build(&self) -> Result<Box<dyn OnlineAlgorithm>> {
        Ok(match *self {
            OnlineSpec::Lcp { window } => Box::new(Lcp::new(window)),
            OnlineSpec::IntLcp { window } => Box::new(IntLcp::new(window)),
            OnlineSpec::Memoryless => Box::new(Memoryless::new()),
            OnlineSpec::Probabilistic { epsilon } => Box::new(Probabilistic::new(epsilon)),
            OnlineSpec::Rbg { theta, seed } => Box::new(RandomlyBiasedGreedy::new(theta, seed)),
            OnlineSpec::RandomizedRelaxation { kind, seed } => Box::new(RandomizedRelaxation::new(kind, seed)),
            OnlineSpec::LazyBudgetSlo { randomized: false, .. } => Box::new(LazyBudgetSlo::new()),
            OnlineSpec::LazyBudgetSlo { randomized: true, seed } => Box::new(LazyBudgetSlo::randomized(seed)),
            OnlineSpec::LazyBudgetSblo { mode } => Box::new(LazyBudgetSblo::new(mode)),
            OnlineSpec::LazyBudgetSbloRefined { epsilon } => Box::new(LazyBudgetSbloRefined::new(epsilon)?),
            OnlineSpec::Ogd { eta0 } => Box::new(Ogd::new(eta0)),
            OnlineSpec::PObd { beta } => Box::new(Obd::primal(beta)),
            OnlineSpec::DObd { eta } => Box::new(Obd::dual(eta)),
            OnlineSpec::Rhc { window } => Box::new(Rhc::new(window)),
            OnlineSpec::Afhc { window } => Box::new(Afhc::new(window)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_build() {
        for name in ["lcp", "int_lcp", "memoryless", "probabilistic", "rbg", "randomized_relaxation", "lb-slo", "rlb-slo", "lb-sblo", "lb-sblo-refined", "ogd", "p-obd", "d-obd", "rhc", "afhc"] {
            let spec = OnlineSpec::from_name(name, 2, 1, None).unwrap();
            assert!(spec.build().is_ok(), "{name}");
        }
        assert!(OnlineSpec::from_name("nope", 0, 0, None).is_err());
    }

    #[test]
    fn json_form() {
        let spec: OnlineSpec = serde_json::from_str(r#"{"alg": "lcp", "window": 3}"#).unwrap();
        assert_eq!(spec, OnlineSpec::Lcp { window: 3 });
        let spec: OnlineSpec = serde_json::from_str(r#"{"alg": "memoryless"}"#).unwrap();
        assert_eq!(spec.build().unwrap().name(), "memoryless");
    }
}
