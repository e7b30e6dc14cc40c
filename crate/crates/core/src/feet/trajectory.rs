//! Cycloidal swing trajectories.

use std::f64::consts::TAU;

use crate::linalg::Vec3;
use crate::model::params::LEG_COUNT;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FootRef {
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FootRefs {
    pub feet: [FootRef; LEG_COUNT],
}

/// Swing phase `η ∈ [0, 2π]` and its first two time derivatives. The
/// smoothstep law makes `η̇` vanish at both ends.
pub fn swing_phase(t: f64, lift_off: f64, swing: f64) -> (f64, f64, f64) {
    let raw = (t - lift_off) / swing;
    if raw < 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if raw > 1.0 {
        return (TAU, 0.0, 0.0);
    }
    let s = raw;
    (
        TAU * (3.0 * s * s - 2.0 * s * s * s),
        TAU * (6.0 * s - 6.0 * s * s) / swing,
        TAU * (6.0 - 12.0 * s) / (swing * swing),
    )
}

/// Cycloid from `start` to `end` with apex `height` above the start, at
/// swing phase `(η, η̇, η̈)`.
pub fn cycloid(start: &Vec3, end: &Vec3, height: f64, phase: (f64, f64, f64)) -> FootRef {
    let (eta, eta_dot, eta_ddot) = phase;
    let stride = *end - *start;
    let lift = Vec3::unit_z() * height;
    let (s, c) = eta.sin_cos();
    let position = *start + stride * ((eta - s) / TAU) + lift * ((1.0 - c) / 2.0);
    let d1 = stride * ((1.0 - c) / TAU) + lift * (s / 2.0);
    let d2 = stride * (s / TAU) + lift * (c / 2.0);
    FootRef {
        position,
        velocity: d1 * eta_dot,
        acceleration: d1 * eta_ddot + d2 * (eta_dot * eta_dot),
    }
}

/// Reference of one foot at phase `t` of the period.
pub fn foot_reference(
    start: &Vec3,
    end: &Vec3,
    height: f64,
    lift_off: f64,
    swing: f64,
    t: f64,
) -> FootRef {
    cycloid(start, end, height, swing_phase(t, lift_off, swing))
}

/// The same swing sampled for a semi-implicit Euler loop at step `ts`:
/// position at `t`, backward-difference velocity and second-difference
/// acceleration. A double integrator `v += a·ts, p += v·ts` driven by this
/// acceleration reproduces the samples exactly, so the loop lands where the
/// curve does.
pub fn sampled_reference(
    start: &Vec3,
    end: &Vec3,
    height: f64,
    lift_off: f64,
    swing: f64,
    t: f64,
    ts: f64,
) -> FootRef {
    let at = |tt: f64| foot_reference(start, end, height, lift_off, swing, tt).position;
    let (prev, now, next) = (at(t - ts), at(t), at(t + ts));
    FootRef {
        position: now,
        velocity: (now - prev) * (1.0 / ts),
        acceleration: (next - now * 2.0 + prev) * (1.0 / (ts * ts)),
    }
}
