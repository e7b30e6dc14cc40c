//! Pose references: integrated from the velocity commands, then moved so that
//! their ZMP stays inside the support polygon.

use crate::error::{Error, Result};
use crate::feet::CommandSet;
use crate::linalg::{rot_z, Vec3, Vec6};
use crate::model::dynamics::{gravity_force, inertial_wrench};
use crate::model::kinematics::{body_jacobian, body_rotation};
use crate::model::params::RobotParams;
use crate::model::polygon::SupportPolygon;
use crate::model::zmp::{com_from_zmp, zmp};

/// Integrated yaw and position references. Yaw accumulates without wrapping.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ReferenceIntegrator {
    pub yaw: f64,
    pub position: Vec3,
}

impl ReferenceIntegrator {
    pub fn new(position: Vec3, yaw: f64) -> Self {
        Self { yaw, position }
    }

    /// One explicit step; the height is taken as commanded.
    pub fn integrate(&mut self, cmds: &CommandSet, ts: f64) {
        self.yaw += cmds.yaw_rate * ts;
        let step = rot_z(self.yaw) * Vec3::new(cmds.v_fw, cmds.v_lw, 0.0) * ts;
        self.position += step;
        self.position[2] = cmds.z;
    }

    /// World-frame rate of the position reference.
    pub fn velocity(&self, cmds: &CommandSet) -> Vec3 {
        rot_z(self.yaw) * Vec3::new(cmds.v_fw, cmds.v_lw, 0.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BodyRefs {
    /// `(og▲, φ*, θ*, ψ*)`.
    pub pose: Vec6,
    /// `(ȯg*, 0, 0, ψ̇*)`.
    pub rate: Vec6,
    /// Integrated position before the clamp.
    pub raw_position: Vec3,
    /// ZMP of the unclamped reference.
    pub desired_zmp: Vec3,
    /// ZMP after projection onto the polygon.
    pub safe_zmp: Vec3,
    /// No foot on the ground: the reference went through unclamped.
    pub flight: bool,
}

/// Clamps the reference through the ZMP condition. The reference wrench is
/// the steady one of the commanded twist (`V̇* = 0`).
pub fn safe_body_reference(
    params: &RobotParams,
    integ: &ReferenceIntegrator,
    cmds: &CommandSet,
    polygon: &SupportPolygon,
) -> Result<BodyRefs> {
    let og = integ.position;
    let attitude = Vec3::new(cmds.roll, cmds.pitch, integ.yaw);
    let vel = integ.velocity(cmds);
    let rate = Vec6::from_array([vel.x(), vel.y(), 0.0, 0.0, 0.0, cmds.yaw_rate]);
    let twist = body_jacobian(&attitude) * rate;
    let wrench = inertial_wrench(params, &twist, &Vec6::zeros());
    let r = body_rotation(cmds.roll, cmds.pitch, integ.yaw);
    let fg = gravity_force(params, &r);

    let desired = zmp(&og, &r, &wrench, &fg)?;
    let mut refs = BodyRefs {
        pose: Vec6::from_parts(&og, &attitude),
        rate,
        raw_position: og,
        desired_zmp: desired,
        safe_zmp: desired,
        flight: false,
    };
    let clamped = match polygon.closest_point(&desired.xy()) {
        Ok(p) => p,
        Err(Error::EmptyPolygon) => {
            refs.flight = true;
            return Ok(refs);
        }
        Err(e) => return Err(e),
    };
    if clamped == desired.xy() {
        return Ok(refs);
    }
    refs.safe_zmp = Vec3::new(clamped[0], clamped[1], 0.0);
    let safe = com_from_zmp(&refs.safe_zmp, og.z(), &r, &wrench, &fg)?;
    refs.pose.set_segment(0, &safe);
    Ok(refs)
}

/// Forward ZMP of a reference, with the same steady wrench used to clamp it.
pub fn reference_zmp(params: &RobotParams, refs: &BodyRefs) -> Result<Vec3> {
    let att = refs.pose.segment::<3>(3);
    let r = body_rotation(att[0], att[1], att[2]);
    let twist = body_jacobian(&att) * refs.rate;
    let wrench = inertial_wrench(params, &twist, &Vec6::zeros());
    zmp(
        &refs.pose.segment::<3>(0),
        &r,
        &wrench,
        &gravity_force(params, &r),
    )
}
