//! Kinematic and dynamic model of the trunk and its four legs.

pub mod constraints;
pub mod dynamics;
pub mod kinematics;
pub mod params;
pub mod polygon;
pub mod state;
pub mod zmp;

pub use constraints::{constraint_matrix, constraint_residual, ConstraintMatrix};
pub use dynamics::{
    coriolis_terms, gravity_force, gravity_wrench, inertial_wrench, InertialWrench,
};
pub use kinematics::{
    body_jacobian, body_jacobian_inverse, body_jacobian_rate, body_rotation, foot_points,
    leg_forward_kinematics, FootKinematics,
};
pub use params::{RobotParams, LEG_COUNT, LEG_NAMES};
pub use polygon::{support_polygon, SupportPolygon};
pub use state::{pose, BodyState, ContactFlags, RANK_BY_CONTACTS};
pub use zmp::{com_from_zmp, zmp};
