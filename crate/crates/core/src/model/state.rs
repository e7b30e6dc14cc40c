use crate::linalg::{Vec12, Vec3, Vec6};
use crate::model::params::{RobotParams, LEG_COUNT};

/// Index of each pose coordinate inside `q0`.
pub mod pose {
    pub const X: usize = 0;
    pub const Y: usize = 1;
    pub const Z: usize = 2;
    pub const ROLL: usize = 3;
    pub const PITCH: usize = 4;
    pub const YAW: usize = 5;
}

/// Full model state: pose, joints, twist and foot-point velocities.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BodyState {
    /// `(x, y, z, roll, pitch, yaw)` of the center of mass in the world frame.
    pub q0: Vec6,
    pub joints: [Vec3; LEG_COUNT],
    /// Linear then angular velocity, both in body coordinates.
    pub twist: Vec6,
    /// Velocities of the foot contact points relative to the body, body frame.
    pub foot_rates: Vec12,
}

impl BodyState {
    pub fn position(&self) -> Vec3 {
        self.q0.top()
    }

    pub fn attitude(&self) -> Vec3 {
        self.q0.bottom()
    }

    pub fn is_finite(&self) -> bool {
        self.q0.is_finite()
            && self.twist.is_finite()
            && self.foot_rates.is_finite()
            && self.joints.iter().all(|q| q.is_finite())
    }

    /// Nominal stance at rest, with the trunk lowered until all four contact
    /// points touch the ground.
    pub fn standing(params: &RobotParams) -> Self {
        let joints = params.nominal_stance;
        let mut height = 0.0;
        for (leg, q) in joints.iter().enumerate() {
            let (ge, _) = crate::model::kinematics::leg_forward_kinematics(params, leg, q);
            height -= ge.z() - params.foot_radius;
        }
        height /= LEG_COUNT as f64;
        Self {
            q0: Vec6::from_array([0.0, 0.0, height, 0.0, 0.0, 0.0]),
            joints,
            twist: Vec6::zeros(),
            foot_rates: Vec12::zeros(),
        }
    }
}

/// Grounded-foot flags plus the derived count and constraint rank.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ContactFlags {
    pub sigma: [bool; LEG_COUNT],
}

/// Rank of the stacked contact constraint for 0..=4 grounded feet.
pub const RANK_BY_CONTACTS: [usize; LEG_COUNT + 1] = [0, 3, 5, 6, 6];

impl ContactFlags {
    pub const fn new(sigma: [bool; LEG_COUNT]) -> Self {
        Self { sigma }
    }

    pub const fn all() -> Self {
        Self {
            sigma: [true; LEG_COUNT],
        }
    }

    pub fn count(&self) -> usize {
        self.sigma.iter().filter(|&&s| s).count()
    }

    pub fn rank(&self) -> usize {
        RANK_BY_CONTACTS[self.count()]
    }

    pub fn is_grounded(&self, leg: usize) -> bool {
        self.sigma[leg]
    }
}
