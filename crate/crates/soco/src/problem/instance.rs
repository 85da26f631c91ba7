use super::dispatch::dispatch;
use super::{pos, HittingCostStore, Norm, FEASIBILITY_SLACK};
use crate::error::{Result, SocoError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Common surface of all problem variants.
pub trait Problem: Send + Sync {
    fn dim(&self) -> usize;
    fn horizon(&self) -> usize;
    /// Upper bounds of the box `[0, m]`, absent for unconstrained instances.
    fn bounds(&self) -> Option<&[f64]>;
    /// Hitting cost of slot `t` (1-based); infinite outside the decision space.
    fn hitting_cost(&self, t: usize, x: &[f64]) -> Result<f64>;
    /// Movement cost from `prev` to `next`. Inverted instances pay for decreases.
    fn movement(&self, prev: &[f64], next: &[f64], inverted: bool) -> f64;
    /// Extra feasibility requirements of a slot beyond the box bounds.
    fn check_slot(&self, _t: usize, _x: &[f64]) -> Result<()> {
        Ok(())
    }
}

/// Variant tag of a [`ProblemInstance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemVariant {
    Sco,
    IntSco,
    Ssco,
    IntSsco,
    Sblo,
    Slo,
}

fn in_box(bounds: &[f64], x: &[f64]) -> bool {
    x.iter().zip(bounds).all(|(v, m)| *v >= -FEASIBILITY_SLACK && *v <= m + FEASIBILITY_SLACK)
}

fn validate_box(bounds: &[f64], switching: &[f64]) -> Result<()> {
    if bounds.len() != switching.len() {
        return Err(SocoError::InvalidArgument("bounds and switching costs differ in length".into()));
    }
    if bounds.iter().any(|m| !(*m > 0.0)) {
        return Err(SocoError::InvalidArgument("upper bounds must be positive".into()));
    }
    if switching.iter().any(|b| !(*b > 0.0) || !b.is_finite()) {
        return Err(SocoError::InvalidArgument("switching costs must be positive".into()));
    }
    Ok(())
}

fn up_down(switching: &[f64], prev: &[f64], next: &[f64], inverted: bool) -> f64 {
    switching
        .iter()
        .zip(prev.iter().zip(next))
        .map(|(b, (p, n))| b * if inverted { pos(p - n) } else { pos(n - p) })
        .sum()
}

fn checked(t: usize, v: f64) -> Result<f64> {
    if v.is_nan() {
        Err(SocoError::NonFinite(format!("hitting cost at slot {t} is NaN")))
    } else {
        Ok(v)
    }
}

/// Smoothed convex optimization with an arbitrary movement norm.
#[derive(Clone, Debug)]
pub struct ScoProblem {
    pub dim: usize,
    pub horizon: usize,
    pub bounds: Option<Vec<f64>>,
    pub norm: Norm,
    pub costs: HittingCostStore,
    pub integral: bool,
    /// Whether `horizon` is final (offline) rather than the number of slots seen so far.
    pub horizon_known: bool,
}

impl ScoProblem {
    pub fn new(dim: usize, horizon: usize, bounds: Option<Vec<f64>>, norm: Norm, costs: HittingCostStore) -> Result<Self> {
        if let Some(b) = &bounds {
            if b.len() != dim || b.iter().any(|m| !(*m > 0.0)) {
                return Err(SocoError::InvalidArgument("bounds must be positive and match the dimension".into()));
            }
        }
        Ok(ScoProblem { dim, horizon, bounds, norm, costs, integral: false, horizon_known: true })
    }

    pub fn hit(&self, t: usize, x: &[f64]) -> Result<f64> {
        if let Some(b) = &self.bounds {
            if !in_box(b, x) {
                return Ok(f64::INFINITY);
            }
        }
        checked(t, self.costs.eval(t, x)?)
    }

    /// Bounds required by algorithms that search a compact domain.
    pub fn require_bounds(&self) -> Result<&[f64]> {
        self.bounds
            .as_deref()
            .ok_or_else(|| SocoError::InvalidArgument("algorithm requires a bounded decision space".into()))
    }
}

impl Problem for ScoProblem {
    fn dim(&self) -> usize {
        self.dim
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn bounds(&self) -> Option<&[f64]> {
        self.bounds.as_deref()
    }
    fn hitting_cost(&self, t: usize, x: &[f64]) -> Result<f64> {
        self.hit(t, x)
    }
    fn movement(&self, prev: &[f64], next: &[f64], _inverted: bool) -> f64 {
        self.norm.distance(next, prev)
    }
}

/// Simplified smoothed convex optimization: box `[0, m]` and per-dimension switching costs.
#[derive(Clone, Debug)]
pub struct SscoProblem {
    pub dim: usize,
    pub horizon: usize,
    pub bounds: Vec<f64>,
    pub switching: Vec<f64>,
    pub costs: HittingCostStore,
    pub integral: bool,
    pub horizon_known: bool,
}

impl SscoProblem {
    pub fn new(horizon: usize, bounds: Vec<f64>, switching: Vec<f64>, costs: HittingCostStore) -> Result<Self> {
        validate_box(&bounds, &switching)?;
        Ok(SscoProblem { dim: bounds.len(), horizon, bounds, switching, costs, integral: false, horizon_known: true })
    }

    /// Uni-dimensional instance with `f(t, x)` as certain hitting cost.
    pub fn uni(
        horizon: usize,
        bound: f64,
        switching: f64,
        f: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(horizon, vec![bound], vec![switching], HittingCostStore::certain(move |t, x| f(t, x[0])))
    }

    pub fn integral(mut self) -> Self {
        self.integral = true;
        self
    }

    pub fn hit(&self, t: usize, x: &[f64]) -> Result<f64> {
        if !in_box(&self.bounds, x) {
            return Ok(f64::INFINITY);
        }
        checked(t, self.costs.eval(t, x)?)
    }

    /// Uni-dimensional hitting cost of slot `t` as an infallible closure.
    ///
    /// Fails up front when no cost is available for `t`.
    pub fn slot_fn(&self, t: usize) -> Result<impl Fn(f64) -> f64 + '_> {
        self.costs.resolve(t)?;
        Ok(move |x: f64| self.hit(t, &[x]).unwrap_or(f64::INFINITY))
    }

    /// Multi-dimensional hitting cost of slot `t` as an infallible closure.
    pub fn slot_fn_md(&self, t: usize) -> Result<impl Fn(&[f64]) -> f64 + '_> {
        self.costs.resolve(t)?;
        Ok(move |x: &[f64]| self.hit(t, x).unwrap_or(f64::INFINITY))
    }
}

impl Problem for SscoProblem {
    fn dim(&self) -> usize {
        self.dim
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn bounds(&self) -> Option<&[f64]> {
        Some(&self.bounds)
    }
    fn hitting_cost(&self, t: usize, x: &[f64]) -> Result<f64> {
        self.hit(t, x)
    }
    fn movement(&self, prev: &[f64], next: &[f64], inverted: bool) -> f64 {
        up_down(&self.switching, prev, next, inverted)
    }
}

/// Per-server cost of one server type as a function of slot and per-server load.
#[derive(Clone)]
pub struct LoadCost {
    eval: Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>,
    /// Maximum per-server load; may be infinite.
    pub max_load: f64,
    /// Whether the cost is independent of the slot.
    pub time_independent: bool,
}

impl LoadCost {
    pub fn new(f: impl Fn(usize, f64) -> f64 + Send + Sync + 'static, max_load: f64) -> Self {
        LoadCost { eval: Arc::new(f), max_load, time_independent: false }
    }

    pub fn stationary(f: impl Fn(f64) -> f64 + Send + Sync + 'static, max_load: f64) -> Self {
        LoadCost { eval: Arc::new(move |_, l| f(l)), max_load, time_independent: true }
    }

    /// Constant cost `c` for per-server loads up to `max_load`.
    pub fn constant(c: f64, max_load: f64) -> Self {
        Self::stationary(move |_| c, max_load)
    }

    pub fn eval(&self, t: usize, l: f64) -> f64 {
        if l > self.max_load * (1.0 + FEASIBILITY_SLACK) + FEASIBILITY_SLACK {
            f64::INFINITY
        } else {
            (self.eval)(t, l.max(0.0))
        }
    }

    /// Idle cost `g_t(0)`.
    pub fn idle(&self, t: usize) -> f64 {
        self.eval(t, 0.0)
    }
}

impl fmt::Debug for LoadCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LoadCost").field("max_load", &self.max_load).finish_non_exhaustive()
    }
}

/// Smoothed balanced-load optimization: the load of each slot is split among active servers.
#[derive(Clone, Debug)]
pub struct SbloProblem {
    pub horizon: usize,
    pub bounds: Vec<f64>,
    pub switching: Vec<f64>,
    pub load_costs: Vec<LoadCost>,
    /// `loads[t - 1]` is the load of slot `t`.
    pub loads: Vec<f64>,
    pub integral: bool,
}

impl SbloProblem {
    pub fn new(bounds: Vec<f64>, switching: Vec<f64>, load_costs: Vec<LoadCost>, loads: Vec<f64>) -> Result<Self> {
        validate_box(&bounds, &switching)?;
        if load_costs.len() != bounds.len() {
            return Err(SocoError::InvalidArgument("one load cost per dimension required".into()));
        }
        if loads.iter().any(|l| !(*l >= 0.0)) {
            return Err(SocoError::InvalidArgument("loads must be nonnegative".into()));
        }
        Ok(SbloProblem { horizon: loads.len(), bounds, switching, load_costs, loads, integral: true })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn load(&self, t: usize) -> Result<f64> {
        self.loads.get(t.wrapping_sub(1)).copied().ok_or(SocoError::NoCostAvailable(t))
    }

    pub fn hit(&self, t: usize, x: &[f64]) -> Result<f64> {
        if !in_box(&self.bounds, x) {
            return Ok(f64::INFINITY);
        }
        Ok(dispatch(&self.load_costs, t, x, self.load(t)?).cost)
    }

    /// The equivalent SSCO instance whose hitting cost solves the load split.
    pub fn to_ssco(&self) -> SscoProblem {
        let inner = Arc::new(self.clone());
        let costs = HittingCostStore::certain(move |t, x| inner.hit(t, x).unwrap_or(f64::INFINITY));
        SscoProblem {
            dim: self.dim(),
            horizon: self.horizon,
            bounds: self.bounds.clone(),
            switching: self.switching.clone(),
            costs,
            integral: self.integral,
            horizon_known: true,
        }
    }
}

impl Problem for SbloProblem {
    fn dim(&self) -> usize {
        self.bounds.len()
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn bounds(&self) -> Option<&[f64]> {
        Some(&self.bounds)
    }
    fn hitting_cost(&self, t: usize, x: &[f64]) -> Result<f64> {
        self.hit(t, x)
    }
    fn movement(&self, prev: &[f64], next: &[f64], inverted: bool) -> f64 {
        up_down(&self.switching, prev, next, inverted)
    }
}

/// Smoothed load optimization: linear operating costs, each active server handles one unit of load.
#[derive(Clone, Debug)]
pub struct SloProblem {
    pub horizon: usize,
    pub bounds: Vec<f64>,
    pub switching: Vec<f64>,
    pub costs: Vec<f64>,
    pub loads: Vec<f64>,
    pub integral: bool,
}

impl SloProblem {
    pub fn new(bounds: Vec<f64>, switching: Vec<f64>, costs: Vec<f64>, loads: Vec<f64>) -> Result<Self> {
        validate_box(&bounds, &switching)?;
        if costs.len() != bounds.len() || costs.iter().any(|c| !(*c >= 0.0)) {
            return Err(SocoError::InvalidArgument("operating costs must be nonnegative, one per dimension".into()));
        }
        if loads.iter().any(|l| !(*l >= 0.0)) {
            return Err(SocoError::InvalidArgument("loads must be nonnegative".into()));
        }
        Ok(SloProblem { horizon: loads.len(), bounds, switching, costs, loads, integral: true })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn load(&self, t: usize) -> Result<f64> {
        self.loads.get(t.wrapping_sub(1)).copied().ok_or(SocoError::NoCostAvailable(t))
    }

    pub fn hit(&self, t: usize, x: &[f64]) -> Result<f64> {
        if !in_box(&self.bounds, x) || x.iter().sum::<f64>() < self.load(t)? - FEASIBILITY_SLACK {
            return Ok(f64::INFINITY);
        }
        Ok(self.costs.iter().zip(x).map(|(c, v)| c * v).sum())
    }

    pub fn to_ssco(&self) -> SscoProblem {
        let inner = Arc::new(self.clone());
        let costs = HittingCostStore::certain(move |t, x| inner.hit(t, x).unwrap_or(f64::INFINITY));
        SscoProblem {
            dim: self.dim(),
            horizon: self.horizon,
            bounds: self.bounds.clone(),
            switching: self.switching.clone(),
            costs,
            integral: self.integral,
            horizon_known: true,
        }
    }
}

impl Problem for SloProblem {
    fn dim(&self) -> usize {
        self.bounds.len()
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn bounds(&self) -> Option<&[f64]> {
        Some(&self.bounds)
    }
    fn hitting_cost(&self, t: usize, x: &[f64]) -> Result<f64> {
        self.hit(t, x)
    }
    fn movement(&self, prev: &[f64], next: &[f64], inverted: bool) -> f64 {
        up_down(&self.switching, prev, next, inverted)
    }
    fn check_slot(&self, t: usize, x: &[f64]) -> Result<()> {
        let load = self.load(t)?;
        let capacity: f64 = x.iter().sum();
        if capacity < load - FEASIBILITY_SLACK {
            return Err(SocoError::InfeasibleSchedule { slot: t, load, capacity });
        }
        Ok(())
    }
}

/// Any problem variant.
#[derive(Clone, Debug)]
pub enum ProblemInstance {
    Sco(ScoProblem),
    Ssco(SscoProblem),
    Sblo(SbloProblem),
    Slo(SloProblem),
}

impl ProblemInstance {
    pub fn variant(&self) -> ProblemVariant {
        match self {
            ProblemInstance::Sco(p) if p.integral => ProblemVariant::IntSco,
            ProblemInstance::Sco(_) => ProblemVariant::Sco,
            ProblemInstance::Ssco(p) if p.integral => ProblemVariant::IntSsco,
            ProblemInstance::Ssco(_) => ProblemVariant::Ssco,
            ProblemInstance::Sblo(_) => ProblemVariant::Sblo,
            ProblemInstance::Slo(_) => ProblemVariant::Slo,
        }
    }

    fn inner(&self) -> &dyn Problem {
        match self {
            ProblemInstance::Sco(p) => p,
            ProblemInstance::Ssco(p) => p,
            ProblemInstance::Sblo(p) => p,
            ProblemInstance::Slo(p) => p,
        }
    }

    pub fn is_integral(&self) -> bool {
        match self {
            ProblemInstance::Sco(p) => p.integral,
            ProblemInstance::Ssco(p) => p.integral,
            ProblemInstance::Sblo(p) => p.integral,
            ProblemInstance::Slo(p) => p.integral,
        }
    }

    /// The SSCO view of SSCO, SBLO and SLO instances.
    pub fn to_ssco(&self) -> Result<SscoProblem> {
        match self {
            ProblemInstance::Ssco(p) => Ok(p.clone()),
            ProblemInstance::Sblo(p) => Ok(p.to_ssco()),
            ProblemInstance::Slo(p) => Ok(p.to_ssco()),
            ProblemInstance::Sco(_) => {
                Err(SocoError::InvalidArgument("an SCO instance has no per-dimension switching costs".into()))
            }
        }
    }
}

impl Problem for ProblemInstance {
    fn dim(&self) -> usize {
        self.inner().dim()
    }
    fn horizon(&self) -> usize {
        self.inner().horizon()
    }
    fn bounds(&self) -> Option<&[f64]> {
        self.inner().bounds()
    }
    fn hitting_cost(&self, t: usize, x: &[f64]) -> Result<f64> {
        self.inner().hitting_cost(t, x)
    }
    fn movement(&self, prev: &[f64], next: &[f64], inverted: bool) -> f64 {
        self.inner().movement(prev, next, inverted)
    }
    fn check_slot(&self, t: usize, x: &[f64]) -> Result<()> {
        self.inner().check_slot(t, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outside_box_is_infinite() {
        let p = SscoProblem::uni(2, 3.0, 1.0, |_, x| x).unwrap();
        assert_eq!(p.hit(1, &[4.0]).unwrap(), f64::INFINITY);
        assert_eq!(p.hit(1, &[-0.5]).unwrap(), f64::INFINITY);
        assert_eq!(p.hit(1, &[2.0]).unwrap(), 2.0);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(SscoProblem::uni(1, 0.0, 1.0, |_, _| 0.0).is_err());
        assert!(SscoProblem::uni(1, 1.0, 0.0, |_, _| 0.0).is_err());
        assert!(SloProblem::new(vec![1.0], vec![1.0], vec![-1.0], vec![0.0]).is_err());
    }

    #[test]
    fn slo_hitting_cost_requires_coverage() {
        let p = SloProblem::new(vec![3.0, 3.0], vec![1.0, 1.0], vec![2.0, 1.0], vec![2.0]).unwrap();
        assert_eq!(p.hit(1, &[1.0, 0.0]).unwrap(), f64::INFINITY);
        assert_eq!(p.hit(1, &[1.0, 1.0]).unwrap(), 3.0);
    }

    #[test]
    fn variants() {
        let p = SscoProblem::uni(1, 1.0, 1.0, |_, _| 0.0).unwrap();
        assert_eq!(ProblemInstance::Ssco(p.clone()).variant(), ProblemVariant::Ssco);
        assert_eq!(ProblemInstance::Ssco(p.integral()).variant(), ProblemVariant::IntSsco);
    }
}
