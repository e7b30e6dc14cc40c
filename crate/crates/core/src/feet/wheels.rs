//! Imaginary wheels under the trunk and the footholds they imply.

use crate::feet::CommandSet;
use crate::linalg::{rot_z, Vec3};
use crate::model::params::LEG_COUNT;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WheelState {
    /// World frame, on the ground.
    pub positions: [Vec3; LEG_COUNT],
    /// Commanded world-frame velocities.
    pub velocities: [Vec3; LEG_COUNT],
    /// Positions in the shadow frame.
    pub shadow: [Vec3; LEG_COUNT],
}

/// Wheel positions and commanded velocities for a shadow at `(x, y, yaw)`.
pub fn wheel_commands(
    cmds: &CommandSet,
    x: f64,
    y: f64,
    yaw: f64,
    shadow: &[Vec3; LEG_COUNT],
) -> WheelState {
    let rz = rot_z(yaw);
    let origin = Vec3::new(x, y, 0.0);
    let mut out = WheelState {
        shadow: *shadow,
        ..Default::default()
    };
    for leg in 0..LEG_COUNT {
        let kw = Vec3::new(shadow[leg].x(), shadow[leg].y(), 0.0);
        out.positions[leg] = origin + rz * kw;
        let local =
            Vec3::new(cmds.v_fw, cmds.v_lw, 0.0) + Vec3::unit_z().cross(&kw) * cmds.yaw_rate;
        out.velocities[leg] = rz * local;
    }
    out
}

/// Start and end of the step of each foot for phase `t` of a period `period`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Footholds {
    pub start: [Vec3; LEG_COUNT],
    pub end: [Vec3; LEG_COUNT],
}

pub fn footholds(wheels: &WheelState, t: f64, period: f64) -> Footholds {
    let mut out = Footholds::default();
    for leg in 0..LEG_COUNT {
        let p = wheels.positions[leg];
        let v = wheels.velocities[leg];
        out.start[leg] = p - v * t;
        out.end[leg] = p + v * (period - t);
    }
    out
}
