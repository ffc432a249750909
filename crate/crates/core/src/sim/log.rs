//! Time-series log formats and their CSV encodings.
//!
//! Pressure log: `t,fx,fy,fz,tx,ty,tz,p01..p16`, SI units, LF line endings.
//! Wrench series: `t,fx,fy,fz,tx,ty,tz`. Floats are written in shortest
//! round-trip form so write -> read -> write is byte-identical.

use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::imperfection::NoiseConfig;
use crate::sim::profile::ProfileSpec;
use crate::wrench::Wrench;
use crate::NUM_CHANNELS;

pub const LOG_SCHEMA_VERSION: u32 = 1;

const PRESSURE_HEADER: &str =
    "t,fx,fy,fz,tx,ty,tz,p01,p02,p03,p04,p05,p06,p07,p08,p09,p10,p11,p12,p13,p14,p15,p16";
const WRENCH_HEADER: &str = "t,fx,fy,fz,tx,ty,tz";

/// One sample: time, reference wrench and the 16 absolute channel pressures
/// (lower chambers 1-8 then upper 1-8), Pa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimRow {
    pub t: f64,
    pub wrench: Wrench,
    pub pressures: [f64; 16],
}

/// Provenance metadata stored in the sidecar JSON next to a log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMeta {
    pub schema_version: u32,
    pub sample_rate_hz: f64,
    pub seed: u64,
    /// Content hash of the generating model configuration.
    pub model_hash: String,
    pub profile: ProfileSpec,
    pub noise: NoiseConfig,
}

impl SimMeta {
    pub fn check_schema(&self) -> Result<()> {
        if self.schema_version != LOG_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported log schema version {} (expected {})",
                self.schema_version, LOG_SCHEMA_VERSION
            )));
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let meta: SimMeta = serde_json::from_str(&text)?;
        meta.check_schema()?;
        Ok(meta)
    }

    pub fn to_file(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Paired (reference wrench, channel pressures) log.
#[derive(Debug, Clone, PartialEq)]
pub struct SimLog {
    /// Present for simulated logs; ingested CSVs carry none.
    pub meta: Option<SimMeta>,
    pub rows: Vec<SimRow>,
}

impl SimLog {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{PRESSURE_HEADER}")?;
        for row in &self.rows {
            write_row(&mut out, row.t, &row.wrench, Some(&row.pressures))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let mut rows = Vec::new();
        let mut lines = reader.lines().enumerate();

        let (_, header) = lines.next().ok_or_else(|| Error::Csv {
            line: 1,
            message: "empty file".into(),
        })?;
        let header = header?;
        if header.trim_end() != PRESSURE_HEADER {
            return Err(Error::Csv {
                line: 1,
                message: format!("unexpected header {header:?}"),
            });
        }

        for (idx, line) in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let fields = parse_fields(&line, 7 + NUM_CHANNELS, idx + 1)?;
            let mut pressures = [0.0; 16];
            pressures.copy_from_slice(&fields[7..]);
            rows.push(SimRow {
                t: fields[0],
                wrench: Wrench::new(
                    fields[1], fields[2], fields[3], fields[4], fields[5], fields[6],
                ),
                pressures,
            });
        }
        let log = SimLog { meta: None, rows };
        log.validate_times()?;
        Ok(log)
    }

    /// Sample times must increase strictly.
    fn validate_times(&self) -> Result<()> {
        for (i, pair) in self.rows.windows(2).enumerate() {
            let increasing = pair[1].t > pair[0].t;
            if !increasing {
                // Header is line 1, row i is line i+2; the pair fails at row i+1.
                return Err(Error::Csv {
                    line: i + 3,
                    message: "time column must increase strictly".into(),
                });
            }
        }
        Ok(())
    }

    /// Reference wrench series of the log.
    pub fn wrench_series(&self) -> WrenchSeries {
        WrenchSeries {
            t: self.rows.iter().map(|r| r.t).collect(),
            wrenches: self.rows.iter().map(|r| r.wrench).collect(),
        }
    }
}

/// A time-stamped wrench series (decoupler output or reference input).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WrenchSeries {
    pub t: Vec<f64>,
    pub wrenches: Vec<Wrench>,
}

impl WrenchSeries {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{WRENCH_HEADER}")?;
        for (t, w) in self.t.iter().zip(&self.wrenches) {
            write_row(&mut out, *t, w, None)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let mut series = WrenchSeries::default();
        let mut lines = reader.lines().enumerate();

        let (_, header) = lines.next().ok_or_else(|| Error::Csv {
            line: 1,
            message: "empty file".into(),
        })?;
        let header = header?;
        if header.trim_end() != WRENCH_HEADER {
            return Err(Error::Csv {
                line: 1,
                message: format!("unexpected header {header:?}"),
            });
        }
        for (idx, line) in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let fields = parse_fields(&line, 7, idx + 1)?;
            series.t.push(fields[0]);
            series.wrenches.push(Wrench::new(
                fields[1], fields[2], fields[3], fields[4], fields[5], fields[6],
            ));
        }
        Ok(series)
    }

    /// Per-axis component column, canonical axis index.
    pub fn axis(&self, i: usize) -> Vec<f64> {
        self.wrenches.iter().map(|w| w.to_array()[i]).collect()
    }
}

fn write_row<W: Write>(out: &mut W, t: f64, w: &Wrench, pressures: Option<&[f64; 16]>) -> Result<()> {
    write!(out, "{t}")?;
    for v in w.to_array() {
        write!(out, ",{v}")?;
    }
    if let Some(p) = pressures {
        for v in p {
            write!(out, ",{v}")?;
        }
    }
    writeln!(out)?;
    Ok(())
}

fn parse_fields(line: &str, expected: usize, line_no: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = line.split(',').collect();
    if parts.len() != expected {
        return Err(Error::Csv {
            line: line_no,
            message: format!("expected {expected} fields, got {}", parts.len()),
        });
    }
    parts
        .iter()
        .map(|s| {
            s.parse::<f64>().map_err(|_| Error::Csv {
                line: line_no,
                message: format!("not a number: {s:?}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_log() -> SimLog {
        let rows = (0..64)
            .map(|i| SimRow {
                t: i as f64 / 1024.0,
                wrench: Wrench::new(
                    (i as f64 * 0.1).sin() * 10.0,
                    0.0,
                    i as f64,
                    0.25,
                    -0.125,
                    1.0 / 3.0,
                ),
                pressures: std::array::from_fn(|k| 101_325.0 + (i * k) as f64 * 0.7),
            })
            .collect();
        SimLog { meta: None, rows }
    }

    #[test]
    fn pressure_csv_round_trip_is_byte_identical() {
        let dir = std::env::temp_dir().join("hexwrench-log-test");
        std::fs::create_dir_all(&dir).unwrap();
        let p1 = dir.join("a.csv");
        let p2 = dir.join("b.csv");
        let log = sample_log();
        log.write_csv(&p1).unwrap();
        let read = SimLog::read_csv(&p1).unwrap();
        read.write_csv(&p2).unwrap();
        let a = std::fs::read(&p1).unwrap();
        let b = std::fs::read(&p2).unwrap();
        assert_eq!(a, b);
        assert_eq!(read.rows, log.rows);
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let dir = std::env::temp_dir().join("hexwrench-log-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        let mut text = String::from(PRESSURE_HEADER);
        text.push('\n');
        text.push_str("0.0");
        for _ in 0..22 {
            text.push_str(",1.0");
        }
        text.push('\n');
        text.push_str("oops\n");
        std::fs::write(&path, text).unwrap();
        match SimLog::read_csv(&path) {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected csv error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_header_rejected() {
        let dir = std::env::temp_dir().join("hexwrench-log-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("hdr.csv");
        std::fs::write(&path, "time,stuff\n0,1\n").unwrap();
        assert!(matches!(
            SimLog::read_csv(&path),
            Err(Error::Csv { line: 1, .. })
        ));
    }
}
