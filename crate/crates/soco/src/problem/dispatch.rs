use super::LoadCost;
use crate::numerics::minimize_scalar;

/// Optimal split of a slot's load among server types.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispatch {
    pub cost: f64,
    /// Total load assigned to each type.
    pub loads: Vec<f64>,
}

const MULTIPLIER_STEPS: usize = 100;

/// Cost of `x` servers of one type handling a total load `l`.
fn type_cost(g: &LoadCost, t: usize, x: f64, l: f64) -> f64 {
    if x <= 0.0 {
        if l <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        x * g.eval(t, l / x)
    }
}

/// Minimizes `sum_k x_k g_k(l_k / x_k)` subject to `sum_k l_k = load`.
pub fn dispatch(costs: &[LoadCost], t: usize, x: &[f64], load: f64) -> Dispatch {
    let d = x.len();
    let mut loads = vec![0.0; d];
    if load <= 0.0 {
        let cost = (0..d).map(|k| type_cost(&costs[k], t, x[k], 0.0)).sum();
        return Dispatch { cost, loads };
    }
    let caps: Vec<f64> = (0..d).map(|k| if x[k] > 0.0 { x[k] * costs[k].max_load } else { 0.0 }).collect();
    let active: Vec<usize> = (0..d).filter(|&k| x[k] > 0.0).collect();
    let capacity: f64 = caps.iter().sum();
    if active.is_empty() || capacity < load * (1.0 - 1e-12) {
        return Dispatch { cost: f64::INFINITY, loads };
    }
    let idle: f64 = (0..d).filter(|k| x[*k] <= 0.0).map(|k| type_cost(&costs[k], t, x[k], 0.0)).sum();
    let xtol = 1e-10 * load.max(1.0);
    match active[..] {
        [k] => {
            loads[k] = load;
            Dispatch { cost: idle + type_cost(&costs[k], t, x[k], load), loads }
        }
        [a, b] => {
            let lo = (load - caps[b]).max(0.0);
            let hi = caps[a].min(load);
            let pair = |la: f64| type_cost(&costs[a], t, x[a], la) + type_cost(&costs[b], t, x[b], load - la);
            match minimize_scalar(pair, lo, hi.max(lo), xtol) {
                Ok(m) => {
                    loads[a] = m.x;
                    loads[b] = load - m.x;
                    Dispatch { cost: idle + m.value, loads }
                }
                Err(_) => Dispatch { cost: f64::INFINITY, loads },
            }
        }
        _ => by_multiplier(costs, t, x, load, &caps, &active, idle, xtol),
    }
}

/// Bisection on the multiplier of the load constraint.
#[allow(clippy::too_many_arguments)]
fn by_multiplier(
    costs: &[LoadCost],
    t: usize,
    x: &[f64],
    load: f64,
    caps: &[f64],
    active: &[usize],
    idle: f64,
    xtol: f64,
) -> Dispatch {
    let d = x.len();
    let response = |mu: f64| -> Vec<f64> {
        let mut l = vec![0.0; d];
        for &k in active {
            let hi = caps[k].min(load);
            let f = |v: f64| type_cost(&costs[k], t, x[k], v) - mu * v;
            l[k] = minimize_scalar(f, 0.0, hi, xtol).map(|m| m.x).unwrap_or(0.0);
        }
        l
    };
    let total = |l: &[f64]| l.iter().sum::<f64>();
    let mut mu_lo = -1.0;
    let mut l_lo = response(mu_lo);
    while total(&l_lo) > load {
        mu_lo *= 2.0;
        l_lo = response(mu_lo);
        if mu_lo < -1e300 {
            break;
        }
    }
    let mut mu_hi = 1.0;
    let mut l_hi = response(mu_hi);
    let mut guard = 0;
    while total(&l_hi) < load && guard < 1100 {
        mu_hi *= 2.0;
        l_hi = response(mu_hi);
        guard += 1;
    }
    for _ in 0..MULTIPLIER_STEPS {
        let mid = 0.5 * (mu_lo + mu_hi);
        let l = response(mid);
        if total(&l) < load {
            mu_lo = mid;
            l_lo = l;
        } else {
            mu_hi = mid;
            l_hi = l;
        }
        if mu_hi - mu_lo <= 1e-13 * mu_hi.abs().max(1.0) {
            break;
        }
    }
    let (s_lo, s_hi) = (total(&l_lo), total(&l_hi));
    let theta = if s_hi > s_lo { ((load - s_lo) / (s_hi - s_lo)).clamp(0.0, 1.0) } else { 1.0 };
    let mut loads: Vec<f64> = l_lo.iter().zip(&l_hi).map(|(a, b)| a + theta * (b - a)).collect();
    let residual = load - total(&loads);
    if residual.abs() > 0.0 {
        // Put any rounding residual on the type with the most slack.
        if let Some(&k) = active.iter().max_by(|a, b| (caps[**a] - loads[**a]).total_cmp(&(caps[**b] - loads[**b]))) {
            loads[k] = (loads[k] + residual).max(0.0);
        }
    }
    let cost = idle + active.iter().map(|&k| type_cost(&costs[k], t, x[k], loads[k])).sum::<f64>();
    Dispatch { cost, loads }
}
