//! Phase clock, crawl-gait schedules and lift-off times.

use crate::feet::wheels::WheelState;
use crate::feet::CommandSet;
use crate::model::params::LEG_COUNT;

/// Phases this close to the period count as complete, so that periods that
/// are whole multiples of the sampling time roll over on the right tick.
pub const CLOCK_EPS: f64 = 1e-9;

/// Advances the phase clock by `ts`; returns the new phase and whether the
/// period rolled over.
pub fn clock_tick(t: f64, period: f64, ts: f64) -> (f64, bool) {
    let next = t + ts;
    if next >= period - CLOCK_EPS {
        (0.0, true)
    } else {
        (next, false)
    }
}

/// Crawl-gait lifting orders, one per predominant motion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GaitSchedule {
    Forward,
    Backward,
    Leftward,
    Rightward,
    CounterClockwise,
    Clockwise,
}

impl GaitSchedule {
    pub const ALL: [GaitSchedule; 6] = [
        Self::Forward,
        Self::Backward,
        Self::Leftward,
        Self::Rightward,
        Self::CounterClockwise,
        Self::Clockwise,
    ];

    /// Legs (0 = FL, 1 = FR, 2 = RL, 3 = RR) in lifting order.
    pub const fn order(self) -> [usize; LEG_COUNT] {
        match self {
            Self::Forward => [0, 3, 1, 2],
            Self::Backward => [0, 2, 1, 3],
            Self::Leftward => [0, 3, 2, 1],
            Self::Rightward => [0, 1, 2, 3],
            Self::CounterClockwise => [0, 2, 3, 1],
            Self::Clockwise => [0, 1, 3, 2],
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Self::Forward => "forward",
            Self::Backward => "backward",
            Self::Leftward => "leftward",
            Self::Rightward => "rightward",
            Self::CounterClockwise => "ccw",
            Self::Clockwise => "cw",
        }
    }
}

/// Lift-off time of each leg for the wave gait.
pub fn lift_off_times(schedule: GaitSchedule, period: f64, swing: f64) -> [f64; LEG_COUNT] {
    let slots = [0.0, period / 2.0 - swing, period / 2.0, period - swing];
    let mut out = [0.0; LEG_COUNT];
    for (slot, leg) in schedule.order().into_iter().enumerate() {
        out[leg] = slots[slot];
    }
    out
}

/// Which single-direction motion dominates the command. `None` for a zero
/// command, which leaves the schedule alone.
pub fn predominant_motion(cmds: &CommandSet, wheels: &WheelState) -> Option<GaitSchedule> {
    if cmds.v_fw == 0.0 && cmds.v_lw == 0.0 && cmds.yaw_rate == 0.0 {
        return None;
    }
    let v = &wheels.velocities;
    let front = (v[0] + v[1]) * 0.5;
    let rear = (v[2] + v[3]) * 0.5;
    if front.dot(&rear) <= 0.0 {
        return Some(if cmds.yaw_rate > 0.0 {
            GaitSchedule::CounterClockwise
        } else {
            GaitSchedule::Clockwise
        });
    }
    let alpha = cmds.v_lw.atan2(cmds.v_fw);
    let bearing: [f64; LEG_COUNT] =
        core::array::from_fn(|i| wheels.shadow[i].y().atan2(wheels.shadow[i].x()));
    let within = |lo: f64, hi: f64| lo <= alpha && alpha < hi;
    Some(if within(bearing[1], bearing[0]) {
        GaitSchedule::Forward
    } else if within(bearing[0], bearing[2]) {
        GaitSchedule::Leftward
    } else if within(bearing[3], bearing[1]) {
        GaitSchedule::Rightward
    } else {
        GaitSchedule::Backward
    })
}
