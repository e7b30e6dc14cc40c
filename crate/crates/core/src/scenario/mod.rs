//! Scripted command timelines, the closed-loop runner and its reports.
//!
//! Scenario files are line oriented; `#` starts a comment:
//!
//! ```text
//! duration = 20
//! # start  v_fw  v_lw  yaw_rate  z     roll  pitch
//! segment = 0    0     0     0         0.30  0     0
//! segment = 2    0.2   0     0         0.30  0     0     ramp
//! ```
//!
//! A `ramp` segment blends linearly into the next segment's values over its
//! own span; otherwise values are held.

mod run;
mod summary;

pub use run::{
    run_scenario, write_trace, RunFailure, RunOptions, RunOutput, RuntimeFault, TraceRow,
    TRACE_HEADER,
};
pub use summary::{timing_report, ErrorStats, NBucket, Summary};

use crate::error::ParseError;
use crate::feet::CommandSet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub cmds: CommandSet,
    pub ramp: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub segments: Vec<Segment>,
    pub duration: f64,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut duration = None;
        let mut segments: Vec<Segment> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ParseError::new(line_no, "expected `key = value`"))?;
            let fields: Vec<&str> = value.split_whitespace().collect();
            let num = |s: &str| -> Result<f64, ParseError> {
                let v: f64 = s
                    .parse()
                    .map_err(|_| ParseError::new(line_no, format!("not a number: `{s}`")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(ParseError::new(line_no, format!("not finite: `{s}`")))
                }
            };
            match key.trim() {
                "duration" => {
                    if fields.len() != 1 {
                        return Err(ParseError::new(line_no, "duration takes one value"));
                    }
                    let d = num(fields[0])?;
                    if d <= 0.0 {
                        return Err(ParseError::new(line_no, "duration must be positive"));
                    }
                    duration = Some(d);
                }
                "segment" => {
                    let ramp = match fields.len() {
                        7 => false,
                        8 if fields[7] == "ramp" => true,
                        _ => {
                            return Err(ParseError::new(
                                line_no,
                                "segment = start v_fw v_lw yaw_rate z roll pitch [ramp]",
                            ))
                        }
                    };
                    let v: Vec<f64> = fields[..7]
                        .iter()
                        .map(|s| num(s))
                        .collect::<Result<_, _>>()?;
                    let start = v[0];
                    match segments.last() {
                        None if start != 0.0 => {
                            return Err(ParseError::new(line_no, "first segment must start at 0"))
                        }
                        Some(prev) if start <= prev.start => {
                            return Err(ParseError::new(line_no, "segment starts must increase"))
                        }
                        _ => {}
                    }
                    let cmds = CommandSet {
                        v_fw: v[1],
                        v_lw: v[2],
                        yaw_rate: v[3],
                        z: v[4],
                        roll: v[5],
                        pitch: v[6],
                    };
                    segments.push(Segment { start, cmds, ramp });
                }
                other => return Err(ParseError::new(line_no, format!("unknown key `{other}`"))),
            }
        }
        if segments.is_empty() {
            return Err(ParseError::new(0, "no segments"));
        }
        let duration = duration.ok_or_else(|| ParseError::new(0, "missing duration"))?;
        Ok(Self { segments, duration })
    }

    /// Index of the segment active at `t`.
    pub fn segment_at(&self, t: f64) -> usize {
        self.segments
            .partition_point(|s| s.start <= t)
            .saturating_sub(1)
    }

    pub fn command_at(&self, t: f64) -> CommandSet {
        let i = self.segment_at(t);
        let seg = &self.segments[i];
        match self.segments.get(i + 1) {
            Some(next) if seg.ramp => {
                let s = ((t - seg.start) / (next.start - seg.start)).clamp(0.0, 1.0);
                let (a, b) = (&seg.cmds, &next.cmds);
                let lerp = |x: f64, y: f64| x + (y - x) * s;
                CommandSet {
                    v_fw: lerp(a.v_fw, b.v_fw),
                    v_lw: lerp(a.v_lw, b.v_lw),
                    yaw_rate: lerp(a.yaw_rate, b.yaw_rate),
                    z: lerp(a.z, b.z),
                    roll: lerp(a.roll, b.roll),
                    pitch: lerp(a.pitch, b.pitch),
                }
            }
            _ => seg.cmds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "\
# demo
duration = 4
segment = 0 0 0 0 0.3 0 0 ramp
segment = 2 0.2 0 0 0.25 0 0   # walk
";

    #[test]
    fn parses_and_ramps() {
        let s = Scenario::parse(TEXT).unwrap();
        assert_eq!(s.duration, 4.0);
        assert_eq!(s.segments.len(), 2);
        let mid = s.command_at(1.0);
        assert!((mid.v_fw - 0.1).abs() < 1e-15 && (mid.z - 0.275).abs() < 1e-15);
        assert_eq!(s.command_at(3.0).v_fw, 0.2);
        assert_eq!(s.segment_at(1.999), 0);
        assert_eq!(s.segment_at(2.0), 1);
    }

    #[test]
    fn rejects_bad_input() {
        let err = |t: &str| Scenario::parse(t).unwrap_err().line;
        assert_eq!(err("duration = 1\nsegment = 1 0 0 0 0.3 0 0\n"), 2);
        assert_eq!(
            err("duration = 1\nsegment = 0 0 0 0 0.3 0 0\nsegment = 0 0 0 0 0.3 0 0\n"),
            3
        );
        assert_eq!(err("duration = x\n"), 1);
        assert_eq!(err("segment = 0 0 0 0 0.3 0\n"), 1);
        assert_eq!(err("segment = 0 0 0 0 0.3 0 0 slow\n"), 1);
        assert_eq!(err("speed = 1\n"), 1);
        assert_eq!(err("segment = 0 0 0 0 0.3 0 0\n"), 0);
    }
}
