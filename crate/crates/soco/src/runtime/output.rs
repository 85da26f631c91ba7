//! CSV and JSON artifacts.
//!
//! | file | header |
//! |------|--------|
//! | schedule | `t,x_1,...,x_d` |
//! | cost | `t,hitting,movement` |
//! | plot data | `t,load,<series>...` with the total number of active servers per series |
//! | metrics | JSON array of [`MetricsRow`] sorted by normalized cost |

use crate::error::{Result, SocoError};
use crate::problem::{CostBreakdown, Metrics, Schedule};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

fn io(e: impl std::fmt::Display) -> SocoError {
    SocoError::Io(e.to_string())
}

pub fn write_schedule_csv(schedule: &Schedule, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let d = schedule.dim().unwrap_or(0);
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|k| format!("x_{k}")));
    w.write_record(&header).map_err(io)?;
    for (t, x) in schedule.iter().enumerate() {
        let mut row = vec![(t + 1).to_string()];
        row.extend(x.iter().map(|v| v.to_string()));
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_schedule_csv(reader: impl Read) -> Result<Schedule> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = r.headers().map_err(|e| SocoError::ParseError { line: 1, message: e.to_string() })?.clone();
    if header.get(0) != Some("t") {
        return Err(SocoError::ParseError { line: 1, message: "schedule header must start with t".into() });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| SocoError::ParseError { line, message: e.to_string() })?;
        let row = rec
            .iter()
            .skip(1)
            .map(|v| v.parse::<f64>().map_err(|_| SocoError::ParseError { line, message: format!("bad value {v}") }))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Schedule::from_rows(rows))
}

pub fn write_cost_csv(cost: &CostBreakdown, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "hitting", "movement"]).map_err(io)?;
    for (t, c) in cost.per_slot.iter().enumerate() {
        w.write_record([(t + 1).to_string(), c.hitting.to_string(), c.movement.to_string()]).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Load next to the number of active servers of each named schedule.
pub fn write_plot_csv(loads: &[f64], series: &[(&str, &Schedule)], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["t".to_string(), "load".to_string()];
    header.extend(series.iter().map(|(name, _)| name.to_string()));
    w.write_record(&header).map_err(io)?;
    let horizon = series.iter().map(|(_, s)| s.horizon()).chain([loads.len()]).max().unwrap_or(0);
    for t in 0..horizon {
        let mut row = vec![(t + 1).to_string(), loads.get(t).map_or(String::new(), |l| l.to_string())];
        for (_, s) in series {
            // A static schedule has a single row that holds for every slot.
            let x = if s.horizon() == 1 { s.0.first() } else { s.0.get(t) };
            row.push(x.map_or(String::new(), |x| x.total().to_string()));
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// One line of a metrics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub algorithm: String,
    pub cost: f64,
    #[serde(flatten)]
    pub metrics: Metrics,
}

pub fn sort_metrics(rows: &mut [MetricsRow]) {
    rows.sort_by(|a, b| a.metrics.normalized_cost.total_cmp(&b.metrics.normalized_cost));
}

pub fn write_metrics_json(rows: &[MetricsRow], mut writer: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, rows).map_err(io)?;
    writeln!(writer).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{metrics, SlotCost};

    #[test]
    fn schedule_round_trip() {
        let s = Schedule::from_rows(vec![vec![0.0, 1.5], vec![2.0, 0.25]]);
        let mut buf = Vec::new();
        write_schedule_csv(&s, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap().lines().next(), Some("t,x_1,x_2"));
        assert_eq!(read_schedule_csv(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn cost_rows() {
        let c = CostBreakdown {
            per_slot: vec![SlotCost { hitting: 1.0, movement: 2.0 }, SlotCost { hitting: 0.5, movement: 0.0 }],
            total: 3.5,
        };
        let mut buf = Vec::new();
        write_cost_csv(&c, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,hitting,movement\n1,1,2\n2,0.5,0\n");
    }

    #[test]
    fn static_series_is_repeated() {
        let dynamic = Schedule::from_scalars(&[1.0, 2.0, 0.0]);
        let fixed = Schedule::from_scalars(&[1.0]);
        let mut buf = Vec::new();
        write_plot_csv(&[3.0, 4.0, 0.0], &[("optimum", &dynamic), ("static", &fixed)], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,load,optimum,static\n1,3,1,1\n2,4,2,1\n3,0,0,1\n");
    }

    #[test]
    fn metrics_sorted_by_normalized_cost() {
        let mut rows = vec![
            MetricsRow { algorithm: "b".into(), cost: 8.0, metrics: metrics(8.0, 4.0, 10.0).unwrap() },
            MetricsRow { algorithm: "a".into(), cost: 5.0, metrics: metrics(5.0, 4.0, 10.0).unwrap() },
        ];
        sort_metrics(&mut rows);
        assert_eq!(rows[0].algorithm, "a");
        let mut buf = Vec::new();
        write_metrics_json(&rows, &mut buf).unwrap();
        let parsed: Vec<MetricsRow> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(parsed, rows);
    }
}
