use super::trace::Trace;
use crate::problem::quantile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Summary statistics of a load trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStats {
    /// Maximum over mean load.
    pub pmr: f64,
    /// 0.9-quantile over mean load.
    pub tpmr: f64,
    /// Mean number of slots between consecutive peaks (loads above the 0.9-quantile).
    pub mean_peak_distance: f64,
    /// Mean length in slots of maximal runs of loads below the 0.9-quantile.
    pub mean_valley_length: f64,
    /// Every day except the final one has a valley of at least twelve hours.
    pub diurnal: bool,
}

const DAY: f64 = 86_400.0;

pub fn trace_stats(trace: &Trace) -> TraceStats {
    let loads = trace.totals();
    if loads.is_empty() {
        return TraceStats { pmr: f64::NAN, tpmr: f64::NAN, mean_peak_distance: 0.0, mean_valley_length: 0.0, diurnal: false };
    }
    let mean = loads.iter().sum::<f64>() / loads.len() as f64;
    let max = loads.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let threshold = quantile(&loads, 0.9);
    let peaks: Vec<usize> = (0..loads.len()).filter(|t| loads[*t] > threshold).collect();
    let mean_peak_distance = if peaks.len() < 2 {
        0.0
    } else {
        (peaks[peaks.len() - 1] - peaks[0]) as f64 / (peaks.len() - 1) as f64
    };
    // Valleys as (start, length).
    let mut valleys: Vec<(usize, usize)> = Vec::new();
    let mut start = None;
    for (t, l) in loads.iter().enumerate() {
        match (*l < threshold, start) {
            (true, None) => start = Some(t),
            (false, Some(s)) => {
                valleys.push((s, t - s));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        valleys.push((s, loads.len() - s));
    }
    let mean_valley_length = if valleys.is_empty() {
        0.0
    } else {
        valleys.iter().map(|v| v.1 as f64).sum::<f64>() / valleys.len() as f64
    };
    let per_day = (DAY / trace.slot_length).round().max(1.0) as usize;
    let half_day = per_day.div_ceil(2);
    let days = loads.len() / per_day;
    let diurnal = days >= 2
        && (0..days - 1).all(|d| {
            let (lo, hi) = (d * per_day, (d + 1) * per_day);
            valleys.iter().any(|(s, len)| *len >= half_day && *s < hi && s + len > lo)
        });
    TraceStats { pmr: max / mean, tpmr: threshold / mean, mean_peak_distance, mean_valley_length, diurnal }
}

/// Synthetic trace with one load peak per day.
///
/// The daily shape is a squared half sine; the mean load is `mean` and, before rounding and
/// noise, the peak-to-mean ratio is `pmr` (at most 4). Multiplicative noise of relative size
/// `noise` is drawn from a seeded generator.
pub fn synthetic_diurnal(days: usize, slot_length: f64, mean: f64, pmr: f64, noise: f64, seed: u64) -> Trace {
    let per_day = (DAY / slot_length).round().max(1.0) as usize;
    let pmr = pmr.clamp(1.0, 4.0);
    let shape = |t: usize| {
        let phase = 2.0 * std::f64::consts::PI * (t % per_day) as f64 / per_day as f64;
        phase.sin().max(0.0).powi(2)
    };
    let shape_mean = (0..per_day).map(shape).sum::<f64>() / per_day as f64;
    let shape_max = (0..per_day).map(shape).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let loads = (0..days * per_day)
        .map(|t| {
            let s = (shape(t) - shape_mean) / (shape_max - shape_mean);
            let jitter = if noise > 0.0 { 1.0 + rng.gen_range(-noise..=noise) } else { 1.0 };
            vec![(mean * (1.0 + (pmr - 1.0) * s) * jitter).max(0.0).round()]
        })
        .collect();
    Trace { slot_length, loads }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_load() {
        let t = Trace { slot_length: 3600.0, loads: vec![vec![5.0]; 48] };
        let s = trace_stats(&t);
        assert_eq!((s.pmr, s.tpmr, s.mean_valley_length), (1.0, 1.0, 0.0));
        assert!(!s.diurnal);
    }

    #[test]
    fn synthetic_trace_has_configured_pmr() {
        let t = synthetic_diurnal(3, 3600.0, 100.0, 2.5, 0.0, 1);
        let s = trace_stats(&t);
        assert!((s.pmr - 2.5).abs() < 0.05, "{}", s.pmr);
        assert!(s.pmr >= s.tpmr && s.tpmr >= 1.0);
        assert!(s.diurnal);
        // One peak slot per day.
        assert_eq!(s.mean_peak_distance, 24.0);
    }

    #[test]
    fn sub_day_trace_is_not_diurnal() {
        let t = synthetic_diurnal(1, 3600.0, 100.0, 2.0, 0.0, 1);
        assert!(!trace_stats(&t).diurnal);
    }

    #[test]
    fn seeded_noise_is_reproducible() {
        assert_eq!(synthetic_diurnal(2, 3600.0, 50.0, 2.0, 0.1, 9), synthetic_diurnal(2, 3600.0, 50.0, 2.0, 0.1, 9));
    }
}
