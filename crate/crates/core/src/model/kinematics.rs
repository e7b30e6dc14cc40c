//! Body attitude maps, leg forward kinematics and foot points.

use crate::error::{Error, Result};
use crate::linalg::{rot_x, rot_y, rot_z, skew, Mat3, Mat6, Matrix, Vec3};
use crate::model::params::{RobotParams, LEG_COUNT};
use crate::model::state::BodyState;

/// Pitch values with `|cos θ|` at or below this are rejected.
pub const GIMBAL_TOL: f64 = 1e-6;
/// Leg Jacobians with `|det|` at or below this are treated as singular.
pub const LEG_SINGULAR_TOL: f64 = 1e-8;

/// `R = Rz(ψ) Ry(θ) Rx(φ)`, body to world.
pub fn body_rotation(roll: f64, pitch: f64, yaw: f64) -> Mat3 {
    rot_z(yaw) * rot_y(pitch) * rot_x(roll)
}

pub fn body_rotation_of(attitude: &Vec3) -> Mat3 {
    body_rotation(attitude[0], attitude[1], attitude[2])
}

/// Maps Euler-angle rates to the body-frame angular velocity.
pub fn angular_map(roll: f64, pitch: f64) -> Mat3 {
    let (sf, cf) = roll.sin_cos();
    let (st, ct) = pitch.sin_cos();
    Mat3::from_rows([[1.0, 0.0, -st], [0.0, cf, sf * ct], [0.0, -sf, cf * ct]])
}

pub fn angular_map_rate(roll: f64, pitch: f64, roll_rate: f64, pitch_rate: f64) -> Mat3 {
    let (sf, cf) = roll.sin_cos();
    let (st, ct) = pitch.sin_cos();
    Mat3::from_rows([
        [0.0, 0.0, -ct * pitch_rate],
        [
            0.0,
            -sf * roll_rate,
            cf * ct * roll_rate - sf * st * pitch_rate,
        ],
        [
            0.0,
            -cf * roll_rate,
            -sf * ct * roll_rate - cf * st * pitch_rate,
        ],
    ])
}

fn gimbal_guard(pitch: f64) -> Result<f64> {
    let ct = pitch.cos();
    if ct.abs() > GIMBAL_TOL {
        Ok(ct)
    } else {
        Err(Error::GimbalSingularity)
    }
}

pub fn angular_map_inverse(roll: f64, pitch: f64) -> Result<Mat3> {
    let ct = gimbal_guard(pitch)?;
    let (sf, cf) = roll.sin_cos();
    let tt = pitch.sin() / ct;
    Ok(Mat3::from_rows([
        [1.0, sf * tt, cf * tt],
        [0.0, cf, -sf],
        [0.0, sf / ct, cf / ct],
    ]))
}

/// `J = blockdiag(Rᵀ, Ω)`: pose rates to twist.
pub fn body_jacobian(attitude: &Vec3) -> Mat6 {
    let r = body_rotation_of(attitude);
    let mut j = Mat6::zeros();
    j.set_block(0, 0, &r.transpose());
    j.set_block(3, 3, &angular_map(attitude[0], attitude[1]));
    j
}

/// Time derivative of [`body_jacobian`] along the Euler-angle rates.
pub fn body_jacobian_rate(attitude: &Vec3, attitude_rate: &Vec3) -> Mat6 {
    let r = body_rotation_of(attitude);
    let omega = angular_map(attitude[0], attitude[1]) * *attitude_rate;
    let mut j = Mat6::zeros();
    j.set_block(0, 0, &(-(skew(&omega) * r.transpose())));
    j.set_block(
        3,
        3,
        &angular_map_rate(attitude[0], attitude[1], attitude_rate[0], attitude_rate[1]),
    );
    j
}

pub fn body_jacobian_inverse(attitude: &Vec3) -> Result<Mat6> {
    let r = body_rotation_of(attitude);
    let mut j = Mat6::zeros();
    j.set_block(0, 0, &r);
    j.set_block(3, 3, &angular_map_inverse(attitude[0], attitude[1])?);
    Ok(j)
}

/// Foot-sphere center relative to the center of mass (body frame) and its
/// Jacobian with respect to the three joint angles of `leg`.
pub fn leg_forward_kinematics(params: &RobotParams, leg: usize, q: &Vec3) -> (Vec3, Mat3) {
    let hip = params.hip_offset[leg];
    let rx = rot_x(q[0]);
    let ry_hip = rot_y(q[1]);
    let ry_knee = rot_y(q[2]);
    let thigh = Vec3::new(0.0, 0.0, -params.thigh_length);
    let shank = Vec3::new(0.0, 0.0, -params.shank_length);
    let abduction = Vec3::new(0.0, params.abduction_offset[leg], 0.0);

    let shank_hip = ry_hip * ry_knee * shank;
    let knee_hip = ry_hip * thigh;
    let foot = hip + rx * (abduction + knee_hip + shank_hip);
    let thigh_joint = hip + rx * abduction;
    let knee_joint = thigh_joint + rx * knee_hip;

    let pitch_axis = rx * Vec3::unit_y();
    let jac = Mat3::from_columns(
        &Vec3::unit_x().cross(&(foot - hip)),
        &pitch_axis.cross(&(foot - thigh_joint)),
        &pitch_axis.cross(&(foot - knee_joint)),
    );
    (foot, jac)
}

pub fn leg_jacobian_inverse(jac: &Mat3, leg: usize) -> Result<Mat3> {
    jac.inverse_with_tol(LEG_SINGULAR_TOL)
        .map_err(|_| Error::LegSingularity { leg })
}

/// Newton iterations allowed per leg IK solve.
pub const IK_ITERATIONS: usize = 12;
pub const IK_TOL: f64 = 1e-11;

/// Joint angles placing the foot-sphere center of `leg` at `target` (body
/// frame), by Newton steps from `start`.
pub fn leg_inverse_kinematics(
    params: &RobotParams,
    leg: usize,
    target: &Vec3,
    start: &Vec3,
) -> Result<Vec3> {
    let mut q = *start;
    for _ in 0..IK_ITERATIONS {
        let (ge, jac) = leg_forward_kinematics(params, leg, &q);
        let err = *target - ge;
        if err.max_abs() <= IK_TOL {
            return Ok(q);
        }
        q += leg_jacobian_inverse(&jac, leg)? * err;
    }
    Err(Error::FootUnreachable { leg })
}

/// `A_i = [I₃, −[gf×]]`: twist to contact-point velocity (body frame).
pub fn contact_map(gf: &Vec3) -> Matrix<3, 6> {
    let mut a = Matrix::<3, 6>::zeros();
    a.set_block(0, 0, &Mat3::identity());
    a.set_block(0, 3, &(-skew(gf)));
    a
}

/// Every kinematic quantity derived from the state for one tick.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FootKinematics {
    pub rotation: Mat3,
    /// Foot-sphere centers, body frame.
    pub ge: [Vec3; LEG_COUNT],
    pub leg_jacobians: [Mat3; LEG_COUNT],
    /// Contact points, body frame.
    pub gf: [Vec3; LEG_COUNT],
    /// Foot-sphere centers, world frame.
    pub oe: [Vec3; LEG_COUNT],
    /// Contact points, world frame.
    pub of: [Vec3; LEG_COUNT],
    /// Contact-point velocities, world frame.
    pub dof: [Vec3; LEG_COUNT],
    /// Wheel anchors projected into the shadow frame (z = 0).
    pub wheels: [Vec3; LEG_COUNT],
}

pub fn foot_points(params: &RobotParams, state: &BodyState) -> FootKinematics {
    let att = state.attitude();
    let rotation = body_rotation_of(&att);
    let og = state.position();
    let down = rotation.transpose() * Vec3::unit_z() * params.foot_radius;
    let tilt = rot_y(att[1]) * rot_x(att[0]);

    let mut out = FootKinematics {
        rotation,
        ge: [Vec3::zeros(); LEG_COUNT],
        leg_jacobians: [Mat3::zeros(); LEG_COUNT],
        gf: [Vec3::zeros(); LEG_COUNT],
        oe: [Vec3::zeros(); LEG_COUNT],
        of: [Vec3::zeros(); LEG_COUNT],
        dof: [Vec3::zeros(); LEG_COUNT],
        wheels: [Vec3::zeros(); LEG_COUNT],
    };
    for leg in 0..LEG_COUNT {
        let (ge, jac) = leg_forward_kinematics(params, leg, &state.joints[leg]);
        let gf = ge - down;
        out.ge[leg] = ge;
        out.leg_jacobians[leg] = jac;
        out.gf[leg] = gf;
        out.oe[leg] = og + rotation * ge;
        out.of[leg] = og + rotation * gf;
        let rel = contact_map(&gf) * state.twist + state.foot_rates.foot(leg);
        out.dof[leg] = rotation * rel;
        let w = tilt * params.wheel_anchor[leg];
        out.wheels[leg] = Vec3::new(w.x(), w.y(), 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Vec12, Vec6};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn close<const R: usize, const C: usize>(a: &Matrix<R, C>, b: &Matrix<R, C>, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol
    }

    #[test]
    fn rotation_basics() {
        assert!(close(&body_rotation(0.0, 0.0, 0.0), &Mat3::identity(), 0.0));
        assert!(close(
            &body_rotation(0.0, 0.0, FRAC_PI_2),
            &rot_z(FRAC_PI_2),
            1e-15
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let r = body_rotation(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            );
            assert!(close(&(r * r.transpose()), &Mat3::identity(), 1e-12));
            assert!((r.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn angular_map_is_rotation_derivative() {
        // Ṙ = R [ω×] with ω = Ω φ̇, checked by central differences.
        let att = Vec3::new(0.3, -0.4, 1.1);
        let rate = Vec3::new(0.7, -0.2, 0.5);
        let eps = 1e-6;
        let dr = (body_rotation_of(&(att + rate * eps)) - body_rotation_of(&(att - rate * eps)))
            .scale(0.5 / eps);
        let omega = angular_map(att[0], att[1]) * rate;
        assert!(close(&dr, &(body_rotation_of(&att) * skew(&omega)), 1e-8));
    }

    #[test]
    fn zero_roll_angular_map_is_identity() {
        let j = body_jacobian(&Vec3::new(0.0, 0.0, 0.8));
        assert!(close(&j.block::<3, 3>(3, 3), &Mat3::identity(), 0.0));
        assert!(close(&j.block::<3, 3>(0, 0), &rot_z(0.8).transpose(), 0.0));
    }

    #[test]
    fn jacobian_rate_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let att = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-3.0..3.0),
            );
            let rate = Vec3::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let eps = 1e-7;
            let fd = (body_jacobian(&(att + rate * eps)) - body_jacobian(&att)).scale(1.0 / eps);
            assert!(close(&fd, &body_jacobian_rate(&att, &rate), 1e-5));
        }
    }

    #[test]
    fn jacobian_inverse_and_gimbal_guard() {
        let att = Vec3::new(0.2, 0.5, -2.0);
        let inv = body_jacobian_inverse(&att).unwrap();
        assert!(close(
            &(inv * body_jacobian(&att)),
            &Mat6::identity(),
            1e-12
        ));
        assert_eq!(
            body_jacobian_inverse(&Vec3::new(0.0, FRAC_PI_2, 0.0)),
            Err(Error::GimbalSingularity)
        );
        assert_eq!(
            body_jacobian_inverse(&Vec3::new(0.0, -FRAC_PI_2, 0.0)),
            Err(Error::GimbalSingularity)
        );
    }

    #[test]
    fn extended_leg() {
        let p = RobotParams::synthetic();
        for leg in 0..LEG_COUNT {
            let (ge, _) = leg_forward_kinematics(&p, leg, &Vec3::zeros());
            let expected = p.hip_offset[leg]
                + Vec3::new(
                    0.0,
                    p.abduction_offset[leg],
                    -(p.thigh_length + p.shank_length),
                );
            assert!((ge - expected).max_abs() < 1e-15);
        }
    }

    #[test]
    fn hip_pitch_quarter_turn_points_leg_backwards() {
        let p = RobotParams::synthetic();
        let (ge, _) = leg_forward_kinematics(&p, 0, &Vec3::new(0.0, FRAC_PI_2, 0.0));
        let expected = p.hip_offset[0]
            + Vec3::new(
                -(p.thigh_length + p.shank_length),
                p.abduction_offset[0],
                0.0,
            );
        assert!((ge - expected).max_abs() < 1e-15);
    }

    #[test]
    fn leg_jacobian_matches_finite_difference() {
        let p = RobotParams::go2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let leg = rng.gen_range(0..4);
            let q = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-2.5..-0.2),
            );
            let (_, jac) = leg_forward_kinematics(&p, leg, &q);
            for k in 0..3 {
                let mut dq = Vec3::zeros();
                dq[k] = 1e-6;
                let fwd = leg_forward_kinematics(&p, leg, &(q + dq)).0;
                let back = leg_forward_kinematics(&p, leg, &(q - dq)).0;
                let fd = (fwd - back) * (0.5e6);
                assert!((fd - jac.column(k)).max_abs() < 1e-5);
            }
        }
    }

    #[test]
    fn straight_knee_is_singular() {
        let p = RobotParams::synthetic();
        let (_, jac) = leg_forward_kinematics(&p, 2, &Vec3::zeros());
        assert_eq!(
            leg_jacobian_inverse(&jac, 2),
            Err(Error::LegSingularity { leg: 2 })
        );
    }

    #[test]
    fn point_feet_and_rest() {
        let mut p = RobotParams::synthetic();
        p.foot_radius = 0.0;
        let s = BodyState::standing(&p);
        let k = foot_points(&p, &s);
        for leg in 0..LEG_COUNT {
            assert_eq!(k.of[leg], k.oe[leg]);
            assert_eq!(k.dof[leg], Vec3::zeros());
            assert!(k.of[leg].z().abs() < 1e-12);
        }
    }

    #[test]
    fn foot_velocity_matches_position_difference() {
        // Move the state along its own rates for a tiny step and difference
        // the world contact points.
        let p = RobotParams::go2();
        let mut s = BodyState::standing(&p);
        s.q0 = Vec6::from_array([0.1, -0.2, 0.31, 0.05, -0.08, 0.6]);
        s.twist = Vec6::from_array([0.2, -0.1, 0.05, 0.3, -0.2, 0.4]);
        let mut rates = Vec12::zeros();
        for (i, r) in [
            0.1, -0.3, 0.2, 0.05, 0.0, -0.1, 0.3, 0.1, 0.2, -0.2, 0.1, 0.0,
        ]
        .iter()
        .enumerate()
        {
            rates[i] = *r;
        }
        s.foot_rates = rates;
        let k = foot_points(&p, &s);
        let att = s.attitude();
        let q0_rate = body_jacobian_inverse(&att).unwrap() * s.twist;
        let down = k.rotation.transpose() * Vec3::unit_z() * p.foot_radius;
        let omega = s.twist.bottom();
        let eps = 1e-6;
        let mut next = s;
        next.q0 = s.q0 + q0_rate * eps;
        for leg in 0..LEG_COUNT {
            let jinv = leg_jacobian_inverse(&k.leg_jacobians[leg], leg).unwrap();
            let qdot = jinv * (s.foot_rates.foot(leg) - omega.cross(&down));
            next.joints[leg] = s.joints[leg] + qdot * eps;
        }
        let k2 = foot_points(&p, &next);
        for leg in 0..LEG_COUNT {
            let fd = (k2.of[leg] - k.of[leg]) * (1.0 / eps);
            assert!(
                (fd - k.dof[leg]).max_abs() < 1e-5,
                "leg {leg}: {fd:?} vs {:?}",
                k.dof[leg]
            );
        }
    }

    #[test]
    fn wheels_live_on_the_ground() {
        let p = RobotParams::go2();
        let mut s = BodyState::standing(&p);
        s.q0[3] = 0.1;
        s.q0[4] = -0.1;
        let k = foot_points(&p, &s);
        for w in k.wheels {
            assert_eq!(w.z(), 0.0);
        }
    }

    #[test]
    fn inverse_kinematics_round_trips() {
        let p = RobotParams::go2();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for leg in 0..LEG_COUNT {
            let start = p.nominal_stance[leg];
            for _ in 0..50 {
                let q = start
                    + Vec3::new(
                        rng.gen_range(-0.2..0.2),
                        rng.gen_range(-0.3..0.3),
                        rng.gen_range(-0.3..0.3),
                    );
                let (target, _) = leg_forward_kinematics(&p, leg, &q);
                let back = leg_inverse_kinematics(&p, leg, &target, &start).unwrap();
                let (ge, _) = leg_forward_kinematics(&p, leg, &back);
                assert!((ge - target).max_abs() <= IK_TOL);
            }
        }
        let far = Vec3::new(0.0, 0.0, -2.0);
        assert_eq!(
            leg_inverse_kinematics(&p, 1, &far, &p.nominal_stance[1]),
            Err(Error::FootUnreachable { leg: 1 })
        );
    }
}
