//! Turns velocity commands into foot acceleration commands: imaginary
//! wheels, gait period, phase clock, schedule, swing trajectories and a PD
//! loop per foot.

pub mod gait;
pub mod period;
pub mod trajectory;
pub mod wheels;

pub use gait::{clock_tick, lift_off_times, predominant_motion, GaitSchedule};
pub use period::{compute_period, workspace_exit_times, PeriodParams};
pub use trajectory::{foot_reference, sampled_reference, FootRef, FootRefs};
pub use wheels::{footholds, wheel_commands, Footholds, WheelState};

use crate::linalg::Vec3;
use crate::model::params::{RobotParams, LEG_COUNT};

/// High-level inputs. Velocities are in the shadow frame.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CommandSet {
    pub v_fw: f64,
    pub v_lw: f64,
    pub yaw_rate: f64,
    /// Absolute trunk height (m).
    pub z: f64,
    pub roll: f64,
    pub pitch: f64,
}

impl CommandSet {
    /// Whether the command asks the shadow to move; height and tilt alone do
    /// not.
    pub fn is_moving(&self) -> bool {
        self.v_fw != 0.0 || self.v_lw != 0.0 || self.yaw_rate != 0.0
    }

    pub fn is_finite(&self) -> bool {
        [
            self.v_fw,
            self.v_lw,
            self.yaw_rate,
            self.z,
            self.roll,
            self.pitch,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// `ddof = ddof* + kp (of* − of) + kd (ḋof* − ḋof)`, per foot.
pub fn feet_control(
    refs: &FootRefs,
    of: &[Vec3; LEG_COUNT],
    dof: &[Vec3; LEG_COUNT],
    kp: &[f64; LEG_COUNT],
    kd: &[f64; LEG_COUNT],
) -> [Vec3; LEG_COUNT] {
    core::array::from_fn(|i| {
        let r = &refs.feet[i];
        r.acceleration + (r.position - of[i]) * kp[i] + (r.velocity - dof[i]) * kd[i]
    })
}

/// Progress of one foot through the current period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SwingPhase {
    Pending,
    /// Window latched at lift-off so later period changes cannot move it.
    Swinging {
        lift_off: f64,
        swing: f64,
    },
    /// Landed; the window is kept so the reference settles on the foothold.
    Landed {
        lift_off: f64,
        swing: f64,
    },
    /// Lift-off came too late to finish within the longest period.
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaitState {
    pub period: f64,
    pub duty: f64,
    pub swing: f64,
    pub schedule: GaitSchedule,
    pub lift_off: [f64; LEG_COUNT],
    /// Phase within the period.
    pub t: f64,
    /// Idle gaits keep every foot down.
    pub active: bool,
    /// The workspaces could not be honoured this tick.
    pub clamped: bool,
    pub phases: [SwingPhase; LEG_COUNT],
}

/// What the feet manager hands on each tick.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeetOutput {
    pub wheels: WheelState,
    pub footholds: Footholds,
    pub refs: FootRefs,
    pub accelerations: [Vec3; LEG_COUNT],
    /// Feet inside their swing window.
    pub swinging: [bool; LEG_COUNT],
    pub gait: GaitState,
}

/// Gait bookkeeping that persists across ticks.
#[derive(Clone, Debug)]
pub struct FeetManager {
    gait: GaitState,
    new_period: bool,
}

impl FeetManager {
    pub fn new(params: &RobotParams) -> Self {
        let p = PeriodParams::from_period(params.period_max(), params);
        let schedule = GaitSchedule::Forward;
        Self {
            gait: GaitState {
                period: p.period,
                duty: p.duty,
                swing: p.swing,
                schedule,
                lift_off: lift_off_times(schedule, p.period, p.swing),
                t: 0.0,
                active: false,
                clamped: false,
                phases: [SwingPhase::Pending; LEG_COUNT],
            },
            new_period: true,
        }
    }

    pub fn gait(&self) -> &GaitState {
        &self.gait
    }

    /// One control tick. `shadow_wheels` are the wheel anchors in the shadow
    /// frame, `of`/`dof` the measured contact points.
    #[allow(clippy::too_many_arguments)]
    pub fn step(
        &mut self,
        params: &RobotParams,
        cmds: &CommandSet,
        x: f64,
        y: f64,
        yaw: f64,
        shadow_wheels: &[Vec3; LEG_COUNT],
        of: &[Vec3; LEG_COUNT],
        dof: &[Vec3; LEG_COUNT],
    ) -> FeetOutput {
        let ts = params.sampling_time;
        let wheels = wheel_commands(cmds, x, y, yaw, shadow_wheels);
        let moving = cmds.is_moving();
        let g = &mut self.gait;

        // A standing robot starts walking at once rather than waiting for the
        // idle period to run out.
        if moving && !g.active && !self.new_period {
            g.t = 0.0;
            self.new_period = true;
        }
        if self.new_period {
            g.active = moving;
            if let Some(s) = predominant_motion(cmds, &wheels) {
                g.schedule = s;
            }
            g.phases = [SwingPhase::Pending; LEG_COUNT];
        }
        let t = g.t;

        // Within a period the period may only shrink, so that a fixed command
        // keeps a fixed period.
        let exits = workspace_exit_times(&wheels, yaw, params);
        let mut period = params.period_max();
        for c in exits {
            period = period.min(t + c);
        }
        if !self.new_period {
            period = period.min(g.period);
        }
        let mut pp = PeriodParams::from_period(period, params);
        let running_end = g
            .phases
            .iter()
            .filter_map(|ph| match ph {
                SwingPhase::Swinging { lift_off, swing } => Some(lift_off + swing),
                _ => None,
            })
            .fold(0.0, f64::max);
        if running_end > pp.period {
            pp = PeriodParams {
                clamped: true,
                ..PeriodParams::from_period(running_end, params)
            };
        }
        g.period = pp.period;
        g.duty = pp.duty;
        g.swing = pp.swing;
        g.clamped = pp.clamped;
        g.lift_off = lift_off_times(g.schedule, g.period, g.swing);

        let holds = footholds(&wheels, t, g.period);
        let mut refs = FootRefs::default();
        let mut swinging = [false; LEG_COUNT];
        for leg in 0..LEG_COUNT {
            if g.active {
                if g.phases[leg] == SwingPhase::Pending && t >= g.lift_off[leg] - gait::CLOCK_EPS {
                    let late = t - g.lift_off[leg] >= ts - gait::CLOCK_EPS;
                    let lift_off = if late { t } else { g.lift_off[leg] };
                    g.phases[leg] = if lift_off + g.swing <= params.period_max() + gait::CLOCK_EPS {
                        SwingPhase::Swinging {
                            lift_off,
                            swing: g.swing,
                        }
                    } else {
                        SwingPhase::Skipped
                    };
                }
                if let SwingPhase::Swinging { lift_off, swing } = g.phases[leg] {
                    if t >= lift_off + swing - gait::CLOCK_EPS {
                        g.phases[leg] = SwingPhase::Landed { lift_off, swing };
                    }
                }
            }
            let (start, end) = (holds.start[leg], holds.end[leg]);
            refs.feet[leg] = match g.phases[leg] {
                SwingPhase::Pending => FootRef {
                    position: start,
                    ..Default::default()
                },
                SwingPhase::Skipped => FootRef {
                    position: end,
                    ..Default::default()
                },
                SwingPhase::Swinging { lift_off, swing } => {
                    swinging[leg] = true;
                    sampled_reference(&start, &end, params.step_height, lift_off, swing, t, ts)
                }
                SwingPhase::Landed { lift_off, swing } => {
                    sampled_reference(&start, &end, params.step_height, lift_off, swing, t, ts)
                }
            };
        }
        let accelerations = feet_control(&refs, of, dof, &params.foot_kp, &params.foot_kd);
        let snapshot = *g;

        let (next, rollover) = clock_tick(t, g.period, ts);
        g.t = next;
        self.new_period = rollover;

        FeetOutput {
            wheels,
            footholds: holds,
            refs,
            accelerations,
            swinging,
            gait: snapshot,
        }
    }
}
