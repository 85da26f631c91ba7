/// Mean delay in a processor-sharing queue with service rate `mu` at per-server load `l`.
///
/// Infinite once the load reaches the service rate. At zero load this is the service time `1 / mu`.
pub fn static_delay(mu: f64, l: f64) -> f64 {
    if l < mu {
        1.0 / (mu - l)
    } else {
        f64::INFINITY
    }
}

/// Mean delay with heterogeneous job durations.
///
/// `loads[i]` jobs of type `i` with mean duration `durations[i]` are spread over `servers`
/// servers during a slot of length `slot_length`. A server without load has zero delay.
pub fn dynamic_delay(loads: &[f64], durations: &[f64], servers: f64, slot_length: f64) -> f64 {
    let jobs: f64 = loads.iter().sum();
    if jobs <= 0.0 {
        return 0.0;
    }
    if servers <= 0.0 {
        return f64::INFINITY;
    }
    let mean_duration = loads.iter().zip(durations).map(|(l, eta)| l * eta).sum::<f64>() / jobs;
    let arrival_rate = jobs / servers / slot_length;
    let service_rate = 1.0 / mean_duration;
    if service_rate > arrival_rate {
        1.0 / (service_rate - arrival_rate)
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_form() {
        assert_eq!(static_delay(1.0, 0.5), 2.0);
        assert_eq!(static_delay(1.0, 0.0), 1.0);
        assert_eq!(static_delay(1.0, 1.0), f64::INFINITY);
    }

    #[test]
    fn dynamic_form_zero_load() {
        assert_eq!(dynamic_delay(&[0.0], &[10.0], 1.0, 100.0), 0.0);
    }

    #[test]
    fn saturation_increases_delay() {
        // One job per server per slot: utilization equals duration / slot length.
        let slot = 100.0;
        let near = dynamic_delay(&[1.0], &[99.0], 1.0, slot);
        let nearer = dynamic_delay(&[1.0], &[99.9], 1.0, slot);
        assert!(near.is_finite() && nearer > near);
        assert_eq!(dynamic_delay(&[1.0], &[100.0], 1.0, slot), f64::INFINITY);
    }

    #[test]
    fn dynamic_matches_static_for_unit_rate() {
        // Durations of a whole slot with slot length one reproduce the unit service rate.
        let d = dynamic_delay(&[0.5], &[1.0], 1.0, 1.0);
        assert!((d - static_delay(1.0, 0.5)).abs() < 1e-12);
    }
}
