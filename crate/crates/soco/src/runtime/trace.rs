use crate::error::{Result, SocoError};
use crate::model::LoadProfile;
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::Path;

/// Per-slot job counts of each job type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub slot_length: f64,
    /// `loads[t - 1][i]` jobs of type `i` in slot `t`.
    pub loads: Vec<LoadProfile>,
}

impl Trace {
    pub fn horizon(&self) -> usize {
        self.loads.len()
    }

    pub fn job_types(&self) -> usize {
        self.loads.first().map_or(0, |l| l.len())
    }

    /// Profiles padded with zeros to `types` load types.
    pub fn profiles(&self, types: usize) -> Result<Vec<LoadProfile>> {
        if self.job_types() > types {
            return Err(SocoError::InvalidArgument(format!(
                "trace has {} job types, the model has {types} load types",
                self.job_types()
            )));
        }
        Ok(self
            .loads
            .iter()
            .map(|l| {
                let mut l = l.clone();
                l.resize(types, 0.0);
                l
            })
            .collect())
    }

    /// Total load per slot.
    pub fn totals(&self) -> Vec<f64> {
        self.loads.iter().map(|l| l.iter().sum()).collect()
    }
}

enum Layout {
    /// `t,job_type,count` with zero-based integer slots.
    Binned,
    /// `timestamp,job_type` with one row per job.
    Events,
}

fn parse_error(line: usize, message: impl Into<String>) -> SocoError {
    SocoError::ParseError { line, message: message.into() }
}

/// Reads a trace; the layout is detected from the header.
///
/// Event timestamps are binned relative to the earliest timestamp. Slots without rows have
/// zero load. With `horizon` the trace is padded or truncated to that many slots.
pub fn parse_trace(reader: impl Read, slot_length: f64, horizon: Option<usize>) -> Result<Trace> {
    if !(slot_length > 0.0) {
        return Err(SocoError::InvalidArgument("slot length must be positive".into()));
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(false).from_reader(reader);
    let header = rdr.headers().map_err(|e| parse_error(1, e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    let layout = match names.as_slice() {
        [] | [""] => return Ok(Trace { slot_length, loads: pad(Vec::new(), 0, horizon) }),
        ["t", "job_type", "count"] => Layout::Binned,
        ["timestamp", "job_type"] => Layout::Events,
        _ => return Err(parse_error(1, format!("unknown trace header {names:?}"))),
    };
    let mut rows: Vec<(f64, usize, f64)> = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| parse_error(line, e.to_string()))?;
        let field = |k: usize| record.get(k).ok_or_else(|| parse_error(line, "missing field"));
        let time: f64 = field(0)?.parse().map_err(|_| parse_error(line, "time is not a number"))?;
        let job: usize = field(1)?.parse().map_err(|_| parse_error(line, "job type is not a nonnegative integer"))?;
        let count = match layout {
            Layout::Binned => {
                let c: f64 = field(2)?.parse().map_err(|_| parse_error(line, "count is not a number"))?;
                if c < 0.0 {
                    return Err(SocoError::NegativeCount(line));
                }
                c
            }
            Layout::Events => 1.0,
        };
        if !time.is_finite() || (matches!(layout, Layout::Binned) && (time < 0.0 || time.fract() != 0.0)) {
            return Err(parse_error(line, "slot index must be a nonnegative integer"));
        }
        rows.push((time, job, count));
    }
    let origin = match layout {
        Layout::Binned => 0.0,
        Layout::Events => rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min),
    };
    let types = rows.iter().map(|r| r.1 + 1).max().unwrap_or(0);
    let mut loads: Vec<LoadProfile> = Vec::new();
    for (time, job, count) in rows {
        let slot = match layout {
            Layout::Binned => time as usize,
            Layout::Events => ((time - origin) / slot_length).floor() as usize,
        };
        if loads.len() <= slot {
            loads.resize(slot + 1, vec![0.0; types]);
        }
        loads[slot][job] += count;
    }
    Ok(Trace { slot_length, loads: pad(loads, types, horizon) })
}

fn pad(mut loads: Vec<LoadProfile>, types: usize, horizon: Option<usize>) -> Vec<LoadProfile> {
    if let Some(h) = horizon {
        loads.resize(h, vec![0.0; types.max(1)]);
    }
    loads
}

pub fn ingest_trace(path: &Path, slot_length: f64, horizon: Option<usize>) -> Result<Trace> {
    let file = std::fs::File::open(path).map_err(|e| SocoError::Io(format!("{}: {e}", path.display())))?;
    parse_trace(file, slot_length, horizon)
}

/// Writes a trace in the binned layout, skipping zero counts.
pub fn write_trace(trace: &Trace, writer: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| SocoError::Io(e.to_string());
    w.write_record(["t", "job_type", "count"]).map_err(io)?;
    for (t, load) in trace.loads.iter().enumerate() {
        for (i, c) in load.iter().enumerate() {
            if *c != 0.0 {
                w.write_record([t.to_string(), i.to_string(), c.to_string()]).map_err(io)?;
            }
        }
    }
    w.flush().map_err(|e| SocoError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file() {
        assert_eq!(parse_trace("".as_bytes(), 3600.0, None).unwrap().horizon(), 0);
        assert_eq!(parse_trace("t,job_type,count\n".as_bytes(), 3600.0, None).unwrap().horizon(), 0);
    }

    #[test]
    fn single_row() {
        let t = parse_trace("t,job_type,count\n0,0,5\n".as_bytes(), 3600.0, None).unwrap();
        assert_eq!(t.loads, vec![vec![5.0]]);
    }

    #[test]
    fn missing_slots_are_zero() {
        let t = parse_trace("t,job_type,count\n0,1,2\n3,0,4\n0,1,1\n".as_bytes(), 3600.0, None).unwrap();
        assert_eq!(t.loads, vec![vec![0.0, 3.0], vec![0.0, 0.0], vec![0.0, 0.0], vec![4.0, 0.0]]);
    }

    #[test]
    fn events_are_binned() {
        let text = "timestamp,job_type\n100,0\n130,0\n7300,1\n3700,0\n";
        let t = parse_trace(text.as_bytes(), 3600.0, Some(3)).unwrap();
        assert_eq!(t.loads, vec![vec![2.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_trace("t,job_type,count\n0,0,1\n1,0,-2\n".as_bytes(), 1.0, None).unwrap_err();
        assert!(matches!(err, SocoError::NegativeCount(3)));
        let err = parse_trace("t,job_type,count\n0,x,1\n".as_bytes(), 1.0, None).unwrap_err();
        assert!(matches!(err, SocoError::ParseError { line: 2, .. }));
        assert!(parse_trace("a,b\n".as_bytes(), 1.0, None).is_err());
    }

    #[test]
    fn profiles_are_padded() {
        let t = Trace { slot_length: 1.0, loads: vec![vec![1.0], vec![2.0]] };
        assert_eq!(t.profiles(2).unwrap(), vec![vec![1.0, 0.0], vec![2.0, 0.0]]);
        assert!(t.profiles(0).is_err());
    }

    #[test]
    fn round_trip() {
        let t = Trace { slot_length: 60.0, loads: vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![2.0, 3.0]] };
        let mut buf = Vec::new();
        write_trace(&t, &mut buf).unwrap();
        assert_eq!(parse_trace(buf.as_slice(), 60.0, Some(3)).unwrap(), t);
    }
}
