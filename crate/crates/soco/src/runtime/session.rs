use super::trace::Trace;
use crate::error::{Result, SocoError};
use crate::model::{DataCenterModel, InstanceKind, LoadProfile, OnlineInput};
use crate::online::{OnlineAlgorithm, OnlineSpec};
use crate::problem::{Config, Problem, ProblemInstance, Schedule, SlotCost};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Accumulated cost of the emitted schedule prefix.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostSoFar {
    pub hitting: f64,
    pub movement: f64,
    pub total: f64,
}

/// Configuration of one streamed slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub slot: usize,
    pub config: Config,
    pub slot_cost: SlotCost,
    pub cost: CostSoFar,
}

/// An online algorithm fed slot by slot from a data-center model.
///
/// The instance grows with every step and the schedule prefix is append-only.
pub struct StreamSession {
    model: DataCenterModel,
    spec: OnlineSpec,
    alg: Box<dyn OnlineAlgorithm>,
    instance: ProblemInstance,
    schedule: Schedule,
    cost: CostSoFar,
    samples: usize,
    seed: u64,
}

impl std::fmt::Debug for StreamSession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StreamSession")
            .field("algorithm", &self.alg.name())
            .field("slot", &self.schedule.horizon())
            .field("cost", &self.cost)
            .finish()
    }
}

impl StreamSession {
    pub fn new(model: DataCenterModel, kind: InstanceKind, spec: OnlineSpec, samples: usize, seed: u64) -> Result<Self> {
        model.validate()?;
        if samples == 0 {
            return Err(SocoError::InvalidArgument("at least one prediction sample is required".into()));
        }
        let instance = model.empty_instance(kind)?;
        let alg = spec.build()?;
        Ok(StreamSession { model, spec, alg, instance, schedule: Schedule::new(), cost: CostSoFar::default(), samples, seed })
    }

    pub fn spec(&self) -> &OnlineSpec {
        &self.spec
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn cost(&self) -> CostSoFar {
        self.cost
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    /// Slot of the next step.
    pub fn next_slot(&self) -> usize {
        self.schedule.horizon() + 1
    }

    /// Reveals the load of the next slot with predictions of the following ones and returns
    /// the algorithm's configuration.
    pub fn step(&mut self, load: LoadProfile, predictions: Vec<Vec<Vec<f64>>>) -> Result<StepOutcome> {
        let slot = self.next_slot();
        let input = OnlineInput { slot, load, predictions };
        // Work on a copy so that a failed step leaves the session untouched.
        let mut instance = self.instance.clone();
        self.model.update_instance(&mut instance, &input, self.samples, self.seed)?;
        let config = self.alg.step(&instance, slot)?;
        let prev = self.schedule.at(slot - 1, config.dim());
        let slot_cost = SlotCost {
            hitting: instance.hitting_cost(slot, &config)?,
            movement: instance.movement(&prev, &config, false),
        };
        self.instance = instance;
        self.schedule.push(config.clone());
        self.cost.hitting += slot_cost.hitting;
        self.cost.movement += slot_cost.movement;
        self.cost.total = self.cost.hitting + self.cost.movement;
        Ok(StepOutcome { slot, config, slot_cost, cost: self.cost })
    }

    /// Streams recorded inputs; their slots must continue the current prefix.
    pub fn replay(&mut self, inputs: Vec<OnlineInput>) -> Result<Option<StepOutcome>> {
        let mut last = None;
        for input in inputs {
            if input.slot != self.next_slot() {
                return Err(SocoError::InvalidArgument(format!(
                    "recorded input is for slot {}, expected {}",
                    input.slot,
                    self.next_slot()
                )));
            }
            last = Some(self.step(input.load, input.predictions)?);
        }
        Ok(last)
    }
}

/// How predictions are derived from a recorded trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionNoise {
    /// Number of predicted slots per input.
    pub window: usize,
    /// Samples per load type and predicted slot.
    pub samples: usize,
    /// Relative half-width of the uniform multiplicative noise.
    pub noise: f64,
    pub seed: u64,
}

/// Turns a trace into online inputs whose predictions are noisy samples around the true load.
///
/// With zero noise every sample equals the true future load.
pub fn trace_inputs(trace: &Trace, opts: PredictionNoise) -> Result<Vec<OnlineInput>> {
    if !(opts.noise >= 0.0) || opts.samples == 0 {
        return Err(SocoError::InvalidArgument("noise must be nonnegative and samples positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let horizon = trace.horizon();
    let mut inputs = Vec::with_capacity(horizon);
    for t in 1..=horizon {
        let last = (t + opts.window).min(horizon);
        let predictions = ((t + 1)..=last)
            .map(|u| {
                trace.loads[u - 1]
                    .iter()
                    .map(|&l| {
                        (0..opts.samples)
                            .map(|_| {
                                let factor = if opts.noise > 0.0 { 1.0 + rng.gen_range(-opts.noise..=opts.noise) } else { 1.0 };
                                (l * factor).max(0.0)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        inputs.push(OnlineInput { slot: t, load: trace.loads[t - 1].clone(), predictions });
    }
    Ok(inputs)
}
