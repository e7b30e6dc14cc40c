//! Gait period, duty factor and swing time from the wheel motion.

use crate::feet::wheels::WheelState;
use crate::linalg::{rot_z, Vec3};
use crate::model::params::{RobotParams, LEG_COUNT};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodParams {
    pub period: f64,
    pub duty: f64,
    pub swing: f64,
    /// Set when the workspaces asked for less than the minimum period.
    pub clamped: bool,
}

impl PeriodParams {
    /// Largest duty factor and shortest swing compatible with `period`, which
    /// is first clamped into the feasible range.
    pub fn from_period(period: f64, params: &RobotParams) -> Self {
        let t_min = params.period_min();
        let t_mid = params.period_mid();
        let t_max = params.period_max();
        let clamped = period < t_min;
        let period = period.clamp(t_min, t_max);
        let (duty, swing) = if period >= t_mid {
            (
                params.duty_factor_max,
                (1.0 - params.duty_factor_max) * period,
            )
        } else {
            (1.0 - params.swing_time_min / period, params.swing_time_min)
        };
        Self {
            period,
            duty,
            swing,
            clamped,
        }
    }
}

/// Time for a point starting at `p` (clamped into the box) with velocity `v`
/// to leave the axis-aligned box `[lo, hi]`; infinite when it never does.
pub fn exit_time(p: [f64; 2], v: [f64; 2], lo: [f64; 2], hi: [f64; 2]) -> f64 {
    let mut best = f64::INFINITY;
    for k in 0..2 {
        let start = p[k].clamp(lo[k], hi[k]);
        let s = if v[k] > 0.0 {
            (hi[k] - start) / v[k]
        } else if v[k] < 0.0 {
            (lo[k] - start) / v[k]
        } else {
            continue;
        };
        best = best.min(s);
    }
    best
}

/// Remaining time before each wheel, moving at its commanded velocity,
/// leaves its workspace. Stationary wheels give infinity.
pub fn workspace_exit_times(
    wheels: &WheelState,
    yaw: f64,
    params: &RobotParams,
) -> [f64; LEG_COUNT] {
    let to_shadow = rot_z(yaw).transpose();
    core::array::from_fn(|leg| {
        let v: Vec3 = to_shadow * wheels.velocities[leg];
        if v.x() == 0.0 && v.y() == 0.0 {
            return f64::INFINITY;
        }
        let p = wheels.shadow[leg];
        exit_time(
            [p.x(), p.y()],
            [v.x(), v.y()],
            [params.workspace_x_min[leg], params.workspace_y_min[leg]],
            [params.workspace_x_max[leg], params.workspace_y_max[leg]],
        )
    })
}

/// Longest period, starting from the maximum, whose final footholds stay in
/// every workspace when evaluated at phase `t`.
pub fn compute_period(wheels: &WheelState, yaw: f64, t: f64, params: &RobotParams) -> PeriodParams {
    let exits = workspace_exit_times(wheels, yaw, params);
    let mut period = params.period_max();
    for c in exits {
        period = period.min(t + c);
    }
    PeriodParams::from_period(period, params)
}
