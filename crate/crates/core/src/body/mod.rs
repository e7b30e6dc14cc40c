//! Body pipeline: constraints, thin LDQ, feedback-linearising controller and
//! the internal model that turns its output into joint velocities.

pub mod decomposition;

pub use decomposition::{refresh_decomposition, DecompositionCache};

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::linalg::{Vec12, Vec3, Vec6};
use crate::model::constraints::constraint_matrix;
use crate::model::dynamics::coriolis_terms;
use crate::model::kinematics::{
    body_jacobian, body_jacobian_inverse, body_jacobian_rate, body_rotation_of, contact_map,
    leg_inverse_kinematics, leg_jacobian_inverse, FootKinematics,
};
use crate::model::params::{RobotParams, LEG_COUNT};
use crate::model::state::{pose, BodyState, ContactFlags};
use crate::reference::BodyRefs;

/// Wraps to `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// `q0* − q0` with the yaw difference wrapped.
pub fn pose_error(reference: &Vec6, q0: &Vec6) -> Vec6 {
    let mut e = *reference - *q0;
    e[pose::YAW] = wrap_angle(e[pose::YAW]);
    e
}

/// `q̇0 = J⁻¹ V`.
pub fn pose_rate(state: &BodyState) -> Result<Vec6> {
    Ok(body_jacobian_inverse(&state.attitude())? * state.twist)
}

/// `u_V = −D (PL)ᵀ (J (kp q̃ + kd q̇̃) + J̇ q̇0 − f_V)`; entries past the rank
/// are zero.
pub fn body_control(
    refs: &BodyRefs,
    state: &BodyState,
    cache: &DecompositionCache,
    kp: f64,
    kd: f64,
) -> Result<Vec6> {
    let att = state.attitude();
    let rate = pose_rate(state)?;
    let e = pose_error(&refs.pose, &state.q0);
    let de = refs.rate - rate;
    let feedback = e * kp + de * kd;
    let inner = body_jacobian(&att) * feedback
        + body_jacobian_rate(&att, &rate.segment::<3>(3)) * rate
        - cache.f_v;
    let projected = cache.pl.tr_mul_vec(&inner);
    let mut u = Vec6::zeros();
    for k in 0..cache.rank {
        u[k] = -cache.ldq.d[k] * projected[k];
    }
    Ok(u)
}

/// `q̇_i = J_ge⁻¹ (dGF_i − ω × ζ Rᵀ k̂)` for every leg.
pub fn joint_velocity_commands(
    params: &RobotParams,
    kin: &FootKinematics,
    twist: &Vec6,
    foot_rates: &Vec12,
) -> Result<[Vec3; LEG_COUNT]> {
    let omega = twist.bottom();
    let down = kin.rotation.tr_mul_vec(&Vec3::unit_z()) * params.foot_radius;
    let spin = omega.cross(&down);
    let mut out = [Vec3::zeros(); LEG_COUNT];
    for leg in 0..LEG_COUNT {
        let inv = leg_jacobian_inverse(&kin.leg_jacobians[leg], leg)?;
        out[leg] = inv * (foot_rates.foot(leg) - spin);
    }
    Ok(out)
}

/// Feet held on the ground by the internal model this tick.
pub fn stance_mask(contacts: &ContactFlags, swinging: &[bool; LEG_COUNT]) -> [bool; LEG_COUNT] {
    core::array::from_fn(|i| contacts.sigma[i] && !swinging[i])
}

/// Sets `dGF_i = −A_i V` for the masked feet.
pub fn hold_feet(state: &mut BodyState, gf: &[Vec3; LEG_COUNT], mask: &[bool; LEG_COUNT]) {
    for leg in 0..LEG_COUNT {
        if mask[leg] {
            let v = contact_map(&gf[leg]) * state.twist;
            state.foot_rates.set_foot(leg, &(-v));
        }
    }
}

/// Largest `|A_i V + dGF_i|` over the masked feet.
pub fn stance_residual(state: &BodyState, gf: &[Vec3; LEG_COUNT], mask: &[bool; LEG_COUNT]) -> f64 {
    (0..LEG_COUNT)
        .filter(|&leg| mask[leg])
        .map(|leg| (contact_map(&gf[leg]) * state.twist + state.foot_rates.foot(leg)).max_abs())
        .fold(0.0, f64::max)
}

/// One step of the internal model. The twist updates first and the pose
/// follows with the new twist (semi-implicit Euler). Contact points move as
/// world-frame double integrators driven by `ddof`, held ones stay where
/// they are, and the joints are solved by leg IK at the stepped pose.
/// Returns the joint velocities `(q_next − q) / Ts`.
#[allow(clippy::too_many_arguments)]
pub fn step_internal_model(
    params: &RobotParams,
    state: &mut BodyState,
    kin: &FootKinematics,
    cache: &DecompositionCache,
    u: &Vec6,
    ddof: &[Vec3; LEG_COUNT],
    held: &[bool; LEG_COUNT],
    ts: f64,
) -> Result<[Vec3; LEG_COUNT]> {
    let twist_rate = cache.f_v + cache.input_map(u);
    let to_pose = body_jacobian_inverse(&state.attitude())?;
    let mut of = kin.of;
    let mut dof = [Vec3::zeros(); LEG_COUNT];
    for leg in 0..LEG_COUNT {
        if !held[leg] {
            dof[leg] = kin.dof[leg] + ddof[leg] * ts;
            of[leg] += dof[leg] * ts;
        }
    }
    state.twist += twist_rate * ts;
    state.q0 += to_pose * state.twist * ts;

    let r = body_rotation_of(&state.attitude());
    let og = state.position();
    let down = r.tr_mul_vec(&Vec3::unit_z()) * params.foot_radius;
    let mut qdot = [Vec3::zeros(); LEG_COUNT];
    for leg in 0..LEG_COUNT {
        let gf = r.tr_mul_vec(&(of[leg] - og));
        let q = leg_inverse_kinematics(params, leg, &(gf + down), &state.joints[leg])?;
        qdot[leg] = (q - state.joints[leg]) * (1.0 / ts);
        state.joints[leg] = q;
        let rate = r.tr_mul_vec(&dof[leg]) - contact_map(&gf) * state.twist;
        state.foot_rates.set_foot(leg, &rate);
    }
    if !state.is_finite() {
        return Err(Error::NonFinite("body state"));
    }
    Ok(qdot)
}

/// Per-tick outputs and health figures of the body pipeline.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ControlOutput {
    /// First `rank` entries used.
    pub u: Vec6,
    pub joint_rates: [Vec3; LEG_COUNT],
    pub rank: usize,
    pub contacts: usize,
    pub iterations: usize,
    /// Constraint residual of feet held on consecutive ticks, before
    /// re-projection.
    pub residual: f64,
    /// `max |Λ|`, expected zero at full rank.
    pub lambda_norm: f64,
}

/// Owner of the internal model state.
#[derive(Clone, Debug)]
pub struct BodyManager {
    pub state: BodyState,
    held: [bool; LEG_COUNT],
}

impl BodyManager {
    pub fn new(state: BodyState) -> Self {
        Self {
            state,
            held: [false; LEG_COUNT],
        }
    }

    /// Runs constraints, decomposition, control and the model step. `kin`
    /// must describe the current state.
    #[allow(clippy::too_many_arguments)]
    pub fn step(
        &mut self,
        params: &RobotParams,
        kin: &FootKinematics,
        refs: &BodyRefs,
        contacts: &ContactFlags,
        swinging: &[bool; LEG_COUNT],
        ddof: &[Vec3; LEG_COUNT],
    ) -> Result<ControlOutput> {
        let held = stance_mask(contacts, swinging);
        // Feet that just touched down carry their landing velocity; only feet
        // held through the previous step measure drift.
        let kept: [bool; LEG_COUNT] = core::array::from_fn(|i| held[i] && self.held[i]);
        let residual = stance_residual(&self.state, &kin.gf, &kept);
        self.held = held;
        hold_feet(&mut self.state, &kin.gf, &held);
        let mut ddof = *ddof;
        for leg in 0..LEG_COUNT {
            if held[leg] {
                ddof[leg] = Vec3::zeros();
            }
        }

        let (a, rank) = constraint_matrix(contacts, &kin.gf);
        let (h, h_v) = coriolis_terms(
            params,
            &kin.rotation,
            &kin.gf,
            &self.state.twist,
            &self.state.foot_rates,
        );
        let cache = refresh_decomposition(&a, rank, &params.mass_matrix_inverse(), &h, &h_v)?;
        let u = body_control(refs, &self.state, &cache, params.body_kp, params.body_kd)?;
        let joint_rates = step_internal_model(
            params,
            &mut self.state,
            kin,
            &cache,
            &u,
            &ddof,
            &held,
            params.sampling_time,
        )?;
        Ok(ControlOutput {
            u,
            joint_rates,
            rank,
            contacts: contacts.count(),
            iterations: cache.iterations,
            residual,
            lambda_norm: cache.lambda.max_abs(),
        })
    }
}
