//! Newton-Euler terms of the single rigid body.

use crate::linalg::{Mat3, Vec12, Vec3, Vec6};
use crate::model::kinematics::contact_map;
use crate::model::params::{RobotParams, LEG_COUNT};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct InertialWrench {
    /// Body frame.
    pub force: Vec3,
    /// Body frame, about the center of mass.
    pub moment: Vec3,
}

impl InertialWrench {
    pub fn from_vec(w: &Vec6) -> Self {
        Self {
            force: w.top(),
            moment: w.bottom(),
        }
    }

    pub fn to_vec(&self) -> Vec6 {
        Vec6::from_parts(&self.force, &self.moment)
    }
}

/// Weight expressed in the body frame.
pub fn gravity_force(params: &RobotParams, rotation: &Mat3) -> Vec3 {
    rotation.tr_mul_vec(&Vec3::new(0.0, 0.0, -params.mass * params.gravity))
}

/// `(F_g, 0)`: the weight acts through the center of mass.
pub fn gravity_wrench(params: &RobotParams, rotation: &Mat3) -> Vec6 {
    Vec6::from_parts(&gravity_force(params, rotation), &Vec3::zeros())
}

/// `[ad* V] w` with `ad* = [[ω×, 0], [v×, ω×]]`.
pub fn coadjoint(twist: &Vec6, w: &Vec6) -> Vec6 {
    let v = twist.top();
    let omega = twist.bottom();
    let f = w.top();
    let m = w.bottom();
    Vec6::from_parts(&omega.cross(&f), &(v.cross(&f) + omega.cross(&m)))
}

/// `M V̇ + [ad* V] M V`.
pub fn inertial_wrench(params: &RobotParams, twist: &Vec6, twist_rate: &Vec6) -> InertialWrench {
    let m = params.mass_matrix();
    InertialWrench::from_vec(&(m * *twist_rate + coadjoint(twist, &(m * *twist))))
}

/// Velocity-product terms: `h_i = ω × (A_i V + 2 dGF_i)` for each foot, and
/// `h_V = W_g − [ad* V] M V` for the body.
pub fn coriolis_terms(
    params: &RobotParams,
    rotation: &Mat3,
    gf: &[Vec3; LEG_COUNT],
    twist: &Vec6,
    foot_rates: &Vec12,
) -> (Vec12, Vec6) {
    let omega = twist.bottom();
    let mut h = Vec12::zeros();
    for leg in 0..LEG_COUNT {
        let rel = contact_map(&gf[leg]) * *twist + foot_rates.foot(leg) * 2.0;
        h.set_foot(leg, &omega.cross(&rel));
    }
    let h_v = gravity_wrench(params, rotation) - coadjoint(twist, &(params.mass_matrix() * *twist));
    (h, h_v)
}
