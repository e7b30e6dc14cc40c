//! Zero moment point on flat ground and its inverse.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::model::dynamics::InertialWrench;

/// Vertical components below this (N) make the ZMP undefined.
pub const MIN_VERTICAL_FORCE: f64 = 1e-6;

/// World-frame inertial force net of gravity, and inertial moment.
fn world_terms(
    rotation: &Mat3,
    wrench: &InertialWrench,
    gravity_force: &Vec3,
) -> Result<(Vec3, Vec3)> {
    let f = *rotation * (wrench.force - *gravity_force);
    let m = *rotation * wrench.moment;
    if !(f.z().abs() > MIN_VERTICAL_FORCE) {
        return Err(Error::DegenerateWrench);
    }
    Ok((f, m))
}

/// `oz = og − (z F − k × M) / (kᵀ F)`; `gravity_force` is the weight in the
/// body frame.
pub fn zmp(
    og: &Vec3,
    rotation: &Mat3,
    wrench: &InertialWrench,
    gravity_force: &Vec3,
) -> Result<Vec3> {
    let (f, m) = world_terms(rotation, wrench, gravity_force)?;
    let offset = (f * og.z() - Vec3::unit_z().cross(&m)) * (1.0 / f.z());
    let mut oz = *og - offset;
    // Exactly on the ground by construction; drop rounding noise.
    oz[2] = 0.0;
    Ok(oz)
}

/// Center-of-mass position at `height` whose ZMP is `oz`.
pub fn com_from_zmp(
    oz: &Vec3,
    height: f64,
    rotation: &Mat3,
    wrench: &InertialWrench,
    gravity_force: &Vec3,
) -> Result<Vec3> {
    let (f, m) = world_terms(rotation, wrench, gravity_force)?;
    let offset = (f * height - Vec3::unit_z().cross(&m)) * (1.0 / f.z());
    let mut og = *oz + offset;
    og[2] = height;
    Ok(og)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::dynamics::gravity_force;
    use crate::model::kinematics::body_rotation;
    use crate::model::params::RobotParams;

    #[test]
    fn static_robot_projects_down() {
        let p = RobotParams::synthetic();
        let r = Mat3::identity();
        let og = Vec3::new(0.0, 0.0, 0.3);
        let oz = zmp(&og, &r, &InertialWrench::default(), &gravity_force(&p, &r)).unwrap();
        assert_eq!(oz, Vec3::zeros());
    }

    #[test]
    fn pitching_moment_shifts_backwards() {
        let p = RobotParams::synthetic();
        let r = Mat3::identity();
        let c = 0.04;
        let wrench = InertialWrench {
            force: Vec3::zeros(),
            moment: Vec3::new(0.0, p.mass * p.gravity * c, 0.0),
        };
        let oz = zmp(
            &Vec3::new(0.1, 0.2, 0.3),
            &r,
            &wrench,
            &gravity_force(&p, &r),
        )
        .unwrap();
        assert!((oz - Vec3::new(0.1 - c, 0.2, 0.0)).max_abs() < 1e-15);
    }

    #[test]
    fn weightless_wrench_is_rejected() {
        let r = Mat3::identity();
        let g = Vec3::new(0.0, 0.0, -98.1);
        let wrench = InertialWrench {
            force: g,
            moment: Vec3::zeros(),
        };
        assert_eq!(
            zmp(&Vec3::zeros(), &r, &wrench, &g),
            Err(Error::DegenerateWrench)
        );
    }

    #[test]
    fn inverse_round_trip() {
        let p = RobotParams::go2();
        let r = body_rotation(0.1, -0.05, 0.7);
        let wrench = InertialWrench {
            force: Vec3::new(3.0, -2.0, 1.0),
            moment: Vec3::new(0.4, 0.3, -0.2),
        };
        let fg = gravity_force(&p, &r);
        let oz = Vec3::new(0.05, -0.02, 0.0);
        let og = com_from_zmp(&oz, 0.3, &r, &wrench, &fg).unwrap();
        assert_eq!(og.z(), 0.3);
        assert!((zmp(&og, &r, &wrench, &fg).unwrap() - oz).max_abs() < 1e-15);
    }
}
