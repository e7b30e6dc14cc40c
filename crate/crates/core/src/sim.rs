//! Stand-in for the robot: integrates the joint-velocity commands and
//! reports contacts by foot height. The trunk pose is mirrored from the
//! internal model (flat ground, no slipping).

use crate::body::{pose_rate, BodyManager, ControlOutput};
use crate::error::{Error, Result};
use crate::feet::{CommandSet, FeetManager, FeetOutput};
use crate::linalg::{Vec3, Vec6};
use crate::model::kinematics::foot_points;
use crate::model::params::{RobotParams, LEG_COUNT};
use crate::model::polygon::{support_polygon, SupportPolygon};
use crate::model::state::{pose, BodyState, ContactFlags};
use crate::reference::{safe_body_reference, BodyRefs, ReferenceIntegrator};

/// `σ_i = 1` iff the contact point is at most `threshold` above the ground.
pub fn detect_contacts(of: &[Vec3; LEG_COUNT], threshold: f64) -> ContactFlags {
    ContactFlags::new(core::array::from_fn(|i| of[i].z() <= threshold))
}

/// Additive joint-angle disturbance applied after each integration step;
/// receives the tick index.
pub type Perturbation = Box<dyn FnMut(u64, &mut [Vec3; LEG_COUNT]) + Send>;

pub struct Plant {
    pub joints: [Vec3; LEG_COUNT],
    pub pose: Vec6,
    pub contacts: ContactFlags,
    pub of: [Vec3; LEG_COUNT],
    perturbation: Option<Perturbation>,
    tick: u64,
}

impl Plant {
    /// Nominal stance with the feet exactly on the ground.
    pub fn standing(params: &RobotParams) -> Self {
        let s = BodyState::standing(params);
        let mut plant = Self {
            joints: s.joints,
            pose: s.q0,
            contacts: ContactFlags::default(),
            of: [Vec3::zeros(); LEG_COUNT],
            perturbation: None,
            tick: 0,
        };
        plant.update_contacts(params);
        plant
    }

    pub fn set_perturbation(&mut self, p: Option<Perturbation>) {
        self.perturbation = p;
    }

    /// Explicit Euler, `q += q̇ Ts`.
    pub fn integrate_joints(&mut self, rates: &[Vec3; LEG_COUNT], ts: f64) {
        for leg in 0..LEG_COUNT {
            self.joints[leg] += rates[leg] * ts;
        }
        if let Some(p) = self.perturbation.as_mut() {
            p(self.tick, &mut self.joints);
        }
        self.tick += 1;
    }

    pub fn update_contacts(&mut self, params: &RobotParams) {
        let state = BodyState {
            q0: self.pose,
            joints: self.joints,
            ..Default::default()
        };
        self.of = foot_points(params, &state).of;
        self.contacts = detect_contacts(&self.of, params.contact_height);
    }
}

/// What one closed-loop tick saw and produced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TickReport {
    /// Pose and its rate at the start of the tick.
    pub pose: Vec6,
    pub pose_rate: Vec6,
    pub refs: BodyRefs,
    pub contacts: ContactFlags,
    pub polygon: SupportPolygon,
    pub feet: FeetOutput,
    pub control: ControlOutput,
    /// Contact points at the start of the tick, world frame.
    pub of: [Vec3; LEG_COUNT],
}

/// Feet manager, reference integrator, body manager and plant in loop order.
pub struct Controller {
    pub params: RobotParams,
    pub feet: FeetManager,
    pub integrator: ReferenceIntegrator,
    pub body: BodyManager,
    pub plant: Plant,
    tick: u64,
}

impl Controller {
    /// Starts from the nominal stance; references start at the plant pose.
    pub fn new(params: RobotParams) -> Self {
        let plant = Plant::standing(&params);
        let state = BodyState {
            q0: plant.pose,
            joints: plant.joints,
            ..Default::default()
        };
        let integrator = ReferenceIntegrator::new(state.position(), state.q0[pose::YAW]);
        Self {
            feet: FeetManager::new(&params),
            integrator,
            body: BodyManager::new(state),
            plant,
            params,
            tick: 0,
        }
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn step(&mut self, cmds: &CommandSet) -> Result<TickReport> {
        if !cmds.is_finite() {
            return Err(Error::NonFinite("commands"));
        }
        let p = &self.params;
        let ts = p.sampling_time;
        self.body.state.joints = self.plant.joints;
        let contacts = self.plant.contacts;
        let state = self.body.state;
        let kin = foot_points(p, &state);

        let q0 = state.q0;
        let feet = self.feet.step(
            p,
            cmds,
            q0[pose::X],
            q0[pose::Y],
            q0[pose::YAW],
            &kin.wheels,
            &kin.of,
            &kin.dof,
        );

        let polygon = support_polygon(&contacts, &kin.of);
        self.integrator.integrate(cmds, ts);
        let refs = safe_body_reference(p, &self.integrator, cmds, &polygon)?;

        let control = self.body.step(
            p,
            &kin,
            &refs,
            &contacts,
            &feet.swinging,
            &feet.accelerations,
        )?;

        self.plant.integrate_joints(&control.joint_rates, ts);
        self.plant.pose = self.body.state.q0;
        self.plant.update_contacts(p);
        self.tick += 1;

        Ok(TickReport {
            pose: q0,
            pose_rate: pose_rate(&state)?,
            refs,
            contacts,
            polygon,
            feet,
            control,
            of: kin.of,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contact_threshold_is_inclusive() {
        let mut of = [Vec3::zeros(); 4];
        of[0][2] = 0.004;
        of[1][2] = 0.006;
        of[2][2] = 0.005;
        of[3][2] = -0.001;
        assert_eq!(detect_contacts(&of, 0.005).sigma, [true, false, true, true]);
    }

    #[test]
    fn constant_rates_integrate_exactly() {
        let p = RobotParams::go2();
        let mut plant = Plant::standing(&p);
        let q0 = plant.joints;
        for _ in 0..100 {
            plant.integrate_joints(&[Vec3::new(1.0, 1.0, 1.0); 4], 0.01);
        }
        for leg in 0..4 {
            assert!((plant.joints[leg] - q0[leg] - Vec3::new(1.0, 1.0, 1.0)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn euler_is_first_order() {
        // q̇ = cos t integrated to 1 s; halving the step halves the error.
        let err = |ts: f64| {
            let p = RobotParams::go2();
            let mut plant = Plant::standing(&p);
            let start = plant.joints[0][0];
            let n = (1.0 / ts).round() as usize;
            for k in 0..n {
                let r = (k as f64 * ts).cos();
                plant.integrate_joints(&[Vec3::new(r, 0.0, 0.0); 4], ts);
            }
            (plant.joints[0][0] - start - 1f64.sin()).abs()
        };
        let ratio = err(0.01) / err(0.005);
        assert!((ratio - 2.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn standing_start_has_all_feet_down() {
        let p = RobotParams::go2();
        let plant = Plant::standing(&p);
        assert_eq!(plant.contacts, ContactFlags::all());
        assert!(plant.of.iter().all(|f| f.z().abs() < 1e-12));
    }

    #[test]
    fn zero_commands_hold_pose() {
        let p = RobotParams::go2();
        let mut c = Controller::new(p);
        let start = c.plant.pose;
        let cmds = CommandSet {
            z: start[pose::Z],
            ..Default::default()
        };
        for _ in 0..200 {
            let r = c.step(&cmds).unwrap();
            assert!(r.control.joint_rates.iter().all(|q| q.max_abs() < 1e-9));
        }
        assert!((c.plant.pose - start).max_abs() < 1e-9);
    }

    #[test]
    fn perturbation_hook_is_applied() {
        let p = RobotParams::go2();
        let mut plant = Plant::standing(&p);
        let before = plant.joints;
        plant.set_perturbation(Some(Box::new(|_, q: &mut [Vec3; 4]| q[1][2] += 1e-3)));
        plant.integrate_joints(&[Vec3::zeros(); 4], 0.01);
        assert!((plant.joints[1][2] - before[1][2] - 1e-3).abs() < 1e-15);
    }
}
