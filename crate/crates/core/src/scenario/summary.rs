use serde::Serialize;

use crate::body::wrap_angle;
use crate::model::params::LEG_COUNT;
use crate::model::state::pose;

use super::run::TraceRow;

/// Absolute tracking errors per pose coordinate, `(x, y, z, roll, pitch,
/// yaw)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ErrorStats {
    pub ticks: usize,
    pub max_abs: [f64; 6],
    pub mean_abs: [f64; 6],
}

impl ErrorStats {
    fn add(&mut self, e: &[f64; 6]) {
        self.ticks += 1;
        for i in 0..6 {
            self.max_abs[i] = self.max_abs[i].max(e[i].abs());
            self.mean_abs[i] += e[i].abs();
        }
    }

    fn finish(mut self) -> Self {
        if self.ticks > 0 {
            for m in &mut self.mean_abs {
                *m /= self.ticks as f64;
            }
        }
        self
    }
}

/// Ticks that ran with the same number of grounded feet.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct NBucket {
    pub contacts: usize,
    pub ticks: usize,
    pub rank: usize,
    pub iterations_min: usize,
    pub iterations_max: usize,
    /// Every tick in the bucket did the same amount of pivoting.
    pub iterations_constant: bool,
    /// Wall-clock percentiles (ns); present only for timed runs.
    pub p50_ns: Option<u64>,
    pub p90_ns: Option<u64>,
    pub p99_ns: Option<u64>,
    pub max_ns: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub ticks: usize,
    /// Against the commanded motion: the integrated position before the
    /// stability clamp, and the commanded height and angles.
    pub errors: ErrorStats,
    /// Against the clamped reference the controller actually tracks. Its x
    /// and y jump whenever the support polygon changes.
    pub safe_errors: ErrorStats,
    pub segments: Vec<ErrorStats>,
    pub min_contacts: usize,
    pub max_contacts: usize,
    pub buckets: Vec<NBucket>,
    pub swing_boundary_max: f64,
    pub zmp_outside_ticks: usize,
    pub zmp_round_trip_max: f64,
    pub residual_max: f64,
    pub lambda_full_rank_max: f64,
    /// Most contact changes of one foot within one gait period.
    pub contact_toggles_max: usize,
}

fn error(row: &TraceRow, safe: bool) -> [f64; 6] {
    let mut e: [f64; 6] = core::array::from_fn(|i| row.pose_ref[i] - row.pose[i]);
    if !safe {
        e[pose::X] = row.raw_ref[0] - row.pose[pose::X];
        e[pose::Y] = row.raw_ref[1] - row.pose[pose::Y];
    }
    e[pose::YAW] = wrap_angle(e[pose::YAW]);
    e
}

fn percentile(sorted: &[u64], q: f64) -> Option<u64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

/// Per-N iteration counts and, for timed runs, duration percentiles.
pub fn timing_report(rows: &[TraceRow], timing: bool) -> Vec<NBucket> {
    let mut out = Vec::new();
    for n in 0..=LEG_COUNT {
        let ticks: Vec<&TraceRow> = rows.iter().filter(|r| r.contacts == n).collect();
        if ticks.is_empty() {
            continue;
        }
        let min = ticks.iter().map(|r| r.iterations).min().unwrap_or(0);
        let max = ticks.iter().map(|r| r.iterations).max().unwrap_or(0);
        let mut b = NBucket {
            contacts: n,
            ticks: ticks.len(),
            rank: ticks[0].rank,
            iterations_min: min,
            iterations_max: max,
            iterations_constant: min == max,
            ..Default::default()
        };
        if timing {
            let mut ns: Vec<u64> = ticks.iter().map(|r| r.compute_ns).collect();
            ns.sort_unstable();
            b.p50_ns = percentile(&ns, 0.5);
            b.p90_ns = percentile(&ns, 0.9);
            b.p99_ns = percentile(&ns, 0.99);
            b.max_ns = ns.last().copied();
        }
        out.push(b);
    }
    out
}

impl Summary {
    pub fn from_rows(rows: &[TraceRow], segment_count: usize, timing: bool) -> Self {
        let mut s = Summary {
            ticks: rows.len(),
            segments: vec![ErrorStats::default(); segment_count],
            min_contacts: usize::MAX,
            buckets: timing_report(rows, timing),
            ..Default::default()
        };
        let mut toggles = [0usize; LEG_COUNT];
        for (k, r) in rows.iter().enumerate() {
            let e = error(r, false);
            s.errors.add(&e);
            s.safe_errors.add(&error(r, true));
            if let Some(seg) = s.segments.get_mut(r.segment) {
                seg.add(&e);
            }
            s.min_contacts = s.min_contacts.min(r.contacts);
            s.max_contacts = s.max_contacts.max(r.contacts);
            s.swing_boundary_max = s.swing_boundary_max.max(r.swing_boundary);
            s.zmp_outside_ticks += usize::from(!r.zmp_inside);
            s.zmp_round_trip_max = s.zmp_round_trip_max.max(r.zmp_round_trip);
            s.residual_max = s.residual_max.max(r.residual);
            if r.rank == 6 {
                s.lambda_full_rank_max = s.lambda_full_rank_max.max(r.lambda_norm);
            }
            if k > 0 {
                let prev = &rows[k - 1];
                if r.clock < prev.clock {
                    toggles = [0; LEG_COUNT];
                }
                for leg in 0..LEG_COUNT {
                    toggles[leg] += usize::from(r.sigma[leg] != prev.sigma[leg]);
                    s.contact_toggles_max = s.contact_toggles_max.max(toggles[leg]);
                }
            }
        }
        if rows.is_empty() {
            s.min_contacts = 0;
        }
        s.errors = s.errors.finish();
        s.safe_errors = s.safe_errors.finish();
        for seg in &mut s.segments {
            *seg = seg.finish();
        }
        s
    }
}
