use std::io::{self, Write};
use std::time::Instant;

use crate::error::Error;
use crate::feet::{foot_reference, SwingPhase};
use crate::linalg::rot_z;
use crate::linalg::Vec3;
use crate::model::params::{RobotParams, LEG_COUNT};
use crate::model::state::pose;
use crate::reference::reference_zmp;
use crate::sim::{Controller, TickReport};

use super::summary::Summary;
use super::Scenario;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunOptions {
    /// Overrides the scenario duration (s).
    pub duration: Option<f64>,
    /// Overrides the control rate (Hz).
    pub rate: Option<f64>,
    /// Keep per-tick wall-clock durations in the trace and summary.
    pub timing: bool,
}

/// A module error, located in time.
#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
#[error("tick {tick} (t = {time} s): {source}")]
pub struct RuntimeFault {
    pub tick: usize,
    pub time: f64,
    pub source: Error,
}

/// One control tick as written to the trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub segment: usize,
    pub pose: [f64; 6],
    pub pose_ref: [f64; 6],
    /// Integrated position before the stability clamp.
    pub raw_ref: [f64; 2],
    /// Shadow-frame forward, lateral and yaw rates.
    pub velocity: [f64; 3],
    pub velocity_ref: [f64; 3],
    pub sigma: [bool; LEG_COUNT],
    pub contacts: usize,
    pub rank: usize,
    pub period: f64,
    pub duty: f64,
    pub clock: f64,
    pub feet: [[f64; 3]; LEG_COUNT],
    pub zmp: [f64; 2],
    pub iterations: usize,
    pub compute_ns: u64,
    /// Largest boundary velocity/acceleration of swings starting this tick.
    pub swing_boundary: f64,
    /// Stability-clamp checks: ZMP inside the polygon, and the forward ZMP
    /// of the clamped reference against the clamped point.
    pub zmp_inside: bool,
    pub zmp_round_trip: f64,
    pub residual: f64,
    pub lambda_norm: f64,
}

pub const TRACE_HEADER: &str = "t,x,y,z,roll,pitch,yaw,\
x_ref,y_ref,z_ref,roll_ref,pitch_ref,yaw_ref,x_raw,y_raw,\
v_fw,v_lw,yaw_rate,v_fw_ref,v_lw_ref,yaw_rate_ref,\
sigma_fl,sigma_fr,sigma_rl,sigma_rr,n,r,period,duty,clock,\
fl_x,fl_y,fl_z,fr_x,fr_y,fr_z,rl_x,rl_y,rl_z,rr_x,rr_y,rr_z,\
zmp_x,zmp_y,iterations";

pub struct RunOutput {
    pub rows: Vec<TraceRow>,
    pub summary: Summary,
}

/// A fault together with the rows recorded before it.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{fault}")]
pub struct RunFailure {
    pub fault: RuntimeFault,
    pub rows: Vec<TraceRow>,
}

fn swing_boundary(
    params: &RobotParams,
    report: &TickReport,
    previous: &[SwingPhase; LEG_COUNT],
) -> f64 {
    let mut worst = 0.0f64;
    for leg in 0..LEG_COUNT {
        if let SwingPhase::Swinging { lift_off, swing } = report.feet.gait.phases[leg] {
            if matches!(previous[leg], SwingPhase::Swinging { .. }) {
                continue;
            }
            let (a, b) = (
                report.feet.footholds.start[leg],
                report.feet.footholds.end[leg],
            );
            for t in [lift_off, lift_off + swing] {
                let r = foot_reference(&a, &b, params.step_height, lift_off, swing, t);
                worst = worst
                    .max(r.velocity.max_abs())
                    .max(r.acceleration.max_abs());
            }
        }
    }
    worst
}

fn row(
    params: &RobotParams,
    t: f64,
    segment: usize,
    report: &TickReport,
    boundary: f64,
    ns: u64,
) -> TraceRow {
    let q = report.pose;
    let refs = &report.refs;
    let yaw_frame = rot_z(q[pose::YAW]).transpose();
    let v = yaw_frame * Vec3::new(report.pose_rate[0], report.pose_rate[1], 0.0);
    let vr = rot_z(refs.pose[pose::YAW]).transpose() * Vec3::new(refs.rate[0], refs.rate[1], 0.0);
    let g = &report.feet.gait;
    let zmp_round_trip = if refs.flight {
        0.0
    } else {
        reference_zmp(params, refs)
            .map(|z| (z - refs.safe_zmp).max_abs())
            .unwrap_or(f64::INFINITY)
    };
    TraceRow {
        t,
        segment,
        pose: core::array::from_fn(|i| q[i]),
        pose_ref: core::array::from_fn(|i| refs.pose[i]),
        raw_ref: [refs.raw_position.x(), refs.raw_position.y()],
        velocity: [v.x(), v.y(), report.pose_rate[pose::YAW]],
        velocity_ref: [vr.x(), vr.y(), refs.rate[pose::YAW]],
        sigma: report.contacts.sigma,
        contacts: report.control.contacts,
        rank: report.control.rank,
        period: g.period,
        duty: g.duty,
        clock: g.t,
        feet: report.of.map(|f| [f.x(), f.y(), f.z()]),
        zmp: [refs.safe_zmp.x(), refs.safe_zmp.y()],
        iterations: report.control.iterations,
        compute_ns: ns,
        swing_boundary: boundary,
        zmp_inside: refs.flight || report.polygon.contains(&refs.safe_zmp.xy(), 1e-12),
        zmp_round_trip,
        residual: report.control.residual,
        lambda_norm: report.control.lambda_norm,
    }
}

/// Runs the closed loop from the nominal stance, one row per tick.
pub fn run_scenario(
    params: &RobotParams,
    scenario: &Scenario,
    opts: &RunOptions,
) -> Result<RunOutput, RunFailure> {
    let mut params = params.clone();
    if let Some(rate) = opts.rate {
        params.sampling_time = 1.0 / rate;
    }
    let ts = params.sampling_time;
    let duration = opts.duration.unwrap_or(scenario.duration);
    let ticks = (duration / ts).round() as usize;

    let mut ctrl = Controller::new(params.clone());
    let mut rows = Vec::with_capacity(ticks);
    let mut phases = ctrl.feet.gait().phases;
    for k in 0..ticks {
        let t = k as f64 * ts;
        let segment = scenario.segment_at(t);
        let cmds = scenario.command_at(t);
        let started = Instant::now();
        let report = match ctrl.step(&cmds) {
            Ok(r) => r,
            Err(source) => {
                return Err(RunFailure {
                    fault: RuntimeFault {
                        tick: k,
                        time: t,
                        source,
                    },
                    rows,
                })
            }
        };
        let ns = if opts.timing {
            started.elapsed().as_nanos() as u64
        } else {
            0
        };
        let boundary = swing_boundary(&params, &report, &phases);
        phases = report.feet.gait.phases;
        rows.push(row(&params, t, segment, &report, boundary, ns));
    }
    let summary = Summary::from_rows(&rows, scenario.segments.len(), opts.timing);
    Ok(RunOutput { rows, summary })
}

/// CSV trace; the timing column is appended only when requested, so that
/// default traces are reproducible bit for bit.
pub fn write_trace<W: Write>(out: &mut W, rows: &[TraceRow], timing: bool) -> io::Result<()> {
    write!(out, "{TRACE_HEADER}")?;
    if timing {
        write!(out, ",compute_ns")?;
    }
    writeln!(out)?;
    for r in rows {
        write!(out, "{}", r.t)?;
        let floats = r
            .pose
            .iter()
            .chain(&r.pose_ref)
            .chain(&r.raw_ref)
            .chain(&r.velocity)
            .chain(&r.velocity_ref);
        for v in floats {
            write!(out, ",{v}")?;
        }
        for s in r.sigma {
            write!(out, ",{}", u8::from(s))?;
        }
        write!(
            out,
            ",{},{},{},{},{}",
            r.contacts, r.rank, r.period, r.duty, r.clock
        )?;
        for v in r.feet.iter().flatten().chain(&r.zmp) {
            write!(out, ",{v}")?;
        }
        write!(out, ",{}", r.iterations)?;
        if timing {
            write!(out, ",{}", r.compute_ns)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
