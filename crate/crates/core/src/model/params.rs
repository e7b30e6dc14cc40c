//! Robot constants and their line-oriented text format.
//!
//! Each non-empty line is `key = v1 v2 ...`; `#` starts a comment. Keys are
//! the [`RobotParams`] field names. Per-leg fields list the legs in the order
//! FL, FR, RL, RR; 3-vectors per leg are flattened (`x y z` per leg).

use crate::error::ParseError;
use crate::linalg::{Mat3, Mat6, Vec3};

pub const LEG_COUNT: usize = 4;
pub const LEG_NAMES: [&str; LEG_COUNT] = ["FL", "FR", "RL", "RR"];

#[derive(Clone, Debug, PartialEq)]
pub struct RobotParams {
    /// Body mass (kg); legs are massless.
    pub mass: f64,
    /// Inertia tensor about the center of mass, body frame (kg·m²).
    pub inertia: Mat3,
    pub gravity: f64,
    /// Radius of the spherical feet (m).
    pub foot_radius: f64,
    /// Hip (abduction joint) position relative to the center of mass.
    pub hip_offset: [Vec3; LEG_COUNT],
    /// Signed lateral offset from the abduction axis to the thigh.
    pub abduction_offset: [f64; LEG_COUNT],
    pub thigh_length: f64,
    pub shank_length: f64,
    /// Imaginary-wheel anchor points, body frame.
    pub wheel_anchor: [Vec3; LEG_COUNT],
    pub workspace_x_min: [f64; LEG_COUNT],
    pub workspace_x_max: [f64; LEG_COUNT],
    pub workspace_y_min: [f64; LEG_COUNT],
    pub workspace_y_max: [f64; LEG_COUNT],
    pub swing_time_min: f64,
    pub swing_time_max: f64,
    pub duty_factor_min: f64,
    pub duty_factor_max: f64,
    pub step_height: f64,
    pub foot_kp: [f64; LEG_COUNT],
    pub foot_kd: [f64; LEG_COUNT],
    pub body_kp: f64,
    pub body_kd: f64,
    pub sampling_time: f64,
    /// Feet whose contact point is at or below this height count as grounded.
    pub contact_height: f64,
    /// Joint angles of the initial standing pose.
    pub nominal_stance: [Vec3; LEG_COUNT],
}

const GO2_FILE: &str = include_str!("../../../../data/go2.robot");
const SYNTHETIC_FILE: &str = include_str!("../../../../data/synthetic.robot");

impl RobotParams {
    /// Go2-derived reference robot shipped with the crate.
    pub fn go2() -> Self {
        Self::parse(GO2_FILE).expect("bundled go2.robot is valid")
    }

    /// Round-number robot used by oracle tests.
    pub fn synthetic() -> Self {
        Self::parse(SYNTHETIC_FILE).expect("bundled synthetic.robot is valid")
    }

    /// Generalized inertia `diag(m·I₃, I_g)`.
    pub fn mass_matrix(&self) -> Mat6 {
        let mut m = Mat6::zeros();
        m.set_block(0, 0, &Mat3::identity().scale(self.mass));
        m.set_block(3, 3, &self.inertia);
        m
    }

    pub fn mass_matrix_inverse(&self) -> Mat6 {
        let mut m = Mat6::zeros();
        m.set_block(0, 0, &Mat3::identity().scale(1.0 / self.mass));
        m.set_block(
            3,
            3,
            &self.inertia.inverse().expect("inertia validated at parse"),
        );
        m
    }

    pub fn period_min(&self) -> f64 {
        self.swing_time_min / (1.0 - self.duty_factor_min)
    }

    pub fn period_mid(&self) -> f64 {
        self.swing_time_min / (1.0 - self.duty_factor_max)
    }

    pub fn period_max(&self) -> f64 {
        self.swing_time_max / (1.0 - self.duty_factor_max)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut b = Builder::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once('=')
                .ok_or_else(|| ParseError::new(line_no, "expected `key = value(s)`"))?;
            let key = key.trim();
            let values = rest
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| ParseError::new(line_no, format!("bad number `{tok}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            b.set(key, &values, line_no)?;
        }
        let p = b.finish()?;
        p.validate().map_err(|msg| ParseError::new(0, msg))?;
        Ok(p)
    }

    /// Renders the parameters back into the text format.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let flat3 = |v: &[Vec3; 4]| v.iter().flat_map(|p| p.0).collect::<Vec<_>>();
        let inertia: Vec<f64> = self.inertia.rows().iter().flatten().copied().collect();
        let _ = writeln!(s, "mass = {}", self.mass);
        let _ = writeln!(s, "inertia = {}", join(&inertia));
        let _ = writeln!(s, "gravity = {}", self.gravity);
        let _ = writeln!(s, "foot_radius = {}", self.foot_radius);
        let _ = writeln!(s, "hip_offset = {}", join(&flat3(&self.hip_offset)));
        let _ = writeln!(s, "abduction_offset = {}", join(&self.abduction_offset));
        let _ = writeln!(s, "thigh_length = {}", self.thigh_length);
        let _ = writeln!(s, "shank_length = {}", self.shank_length);
        let _ = writeln!(s, "wheel_anchor = {}", join(&flat3(&self.wheel_anchor)));
        let _ = writeln!(s, "workspace_x_min = {}", join(&self.workspace_x_min));
        let _ = writeln!(s, "workspace_x_max = {}", join(&self.workspace_x_max));
        let _ = writeln!(s, "workspace_y_min = {}", join(&self.workspace_y_min));
        let _ = writeln!(s, "workspace_y_max = {}", join(&self.workspace_y_max));
        let _ = writeln!(s, "swing_time_min = {}", self.swing_time_min);
        let _ = writeln!(s, "swing_time_max = {}", self.swing_time_max);
        let _ = writeln!(s, "duty_factor_min = {}", self.duty_factor_min);
        let _ = writeln!(s, "duty_factor_max = {}", self.duty_factor_max);
        let _ = writeln!(s, "step_height = {}", self.step_height);
        let _ = writeln!(s, "foot_kp = {}", join(&self.foot_kp));
        let _ = writeln!(s, "foot_kd = {}", join(&self.foot_kd));
        let _ = writeln!(s, "body_kp = {}", self.body_kp);
        let _ = writeln!(s, "body_kd = {}", self.body_kd);
        let _ = writeln!(s, "sampling_time = {}", self.sampling_time);
        let _ = writeln!(s, "contact_height = {}", self.contact_height);
        let _ = writeln!(s, "nominal_stance = {}", join(&flat3(&self.nominal_stance)));
        s
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.mass > 0.0) {
            return Err("mass must be positive".into());
        }
        if !self.inertia.is_symmetric(1e-12) {
            return Err("inertia must be symmetric".into());
        }
        // Sylvester's criterion on the leading minors.
        let i = &self.inertia;
        let m1 = i[(0, 0)];
        let m2 = i[(0, 0)] * i[(1, 1)] - i[(0, 1)] * i[(1, 0)];
        if !(m1 > 0.0 && m2 > 0.0 && i.determinant() > 0.0) {
            return Err("inertia must be positive definite".into());
        }
        if !(self.gravity > 0.0) {
            return Err("gravity must be positive".into());
        }
        if !(self.foot_radius >= 0.0) {
            return Err("foot_radius must be non-negative".into());
        }
        if !(self.thigh_length > 0.0 && self.shank_length > 0.0) {
            return Err("link lengths must be positive".into());
        }
        if !(0.0 < self.duty_factor_min
            && self.duty_factor_min <= self.duty_factor_max
            && self.duty_factor_max < 1.0)
        {
            return Err("need 0 < duty_factor_min <= duty_factor_max < 1".into());
        }
        if !(0.0 < self.swing_time_min && self.swing_time_min <= self.swing_time_max) {
            return Err("need 0 < swing_time_min <= swing_time_max".into());
        }
        if !(self.sampling_time > 0.0) {
            return Err("sampling_time must be positive".into());
        }
        for leg in 0..LEG_COUNT {
            if !(self.workspace_x_min[leg] < self.workspace_x_max[leg]
                && self.workspace_y_min[leg] < self.workspace_y_max[leg])
            {
                return Err(format!("workspace of leg {} is empty", LEG_NAMES[leg]));
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct Builder {
    fields: Vec<(String, Vec<f64>)>,
}

impl Builder {
    fn set(&mut self, key: &str, values: &[f64], line: usize) -> Result<(), ParseError> {
        let expected = match key {
            "mass" | "gravity" | "foot_radius" | "thigh_length" | "shank_length"
            | "swing_time_min" | "swing_time_max" | "duty_factor_min" | "duty_factor_max"
            | "step_height" | "body_kp" | "body_kd" | "sampling_time" | "contact_height" => 1,
            "abduction_offset" | "workspace_x_min" | "workspace_x_max" | "workspace_y_min"
            | "workspace_y_max" | "foot_kp" | "foot_kd" => 4,
            "inertia" => 9,
            "hip_offset" | "wheel_anchor" | "nominal_stance" => 12,
            _ => return Err(ParseError::new(line, format!("unknown key `{key}`"))),
        };
        if values.len() != expected {
            return Err(ParseError::new(
                line,
                format!("`{key}` takes {expected} value(s), got {}", values.len()),
            ));
        }
        if self.fields.iter().any(|(k, _)| k == key) {
            return Err(ParseError::new(line, format!("duplicate key `{key}`")));
        }
        self.fields.push((key.to_string(), values.to_vec()));
        Ok(())
    }

    fn get(&self, key: &str) -> Result<&[f64], ParseError> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| ParseError::new(0, format!("missing key `{key}`")))
    }

    fn scalar(&self, key: &str) -> Result<f64, ParseError> {
        Ok(self.get(key)?[0])
    }

    fn legs(&self, key: &str) -> Result<[f64; 4], ParseError> {
        let v = self.get(key)?;
        Ok([v[0], v[1], v[2], v[3]])
    }

    fn legs3(&self, key: &str) -> Result<[Vec3; 4], ParseError> {
        let v = self.get(key)?;
        Ok(core::array::from_fn(|i| {
            Vec3::new(v[3 * i], v[3 * i + 1], v[3 * i + 2])
        }))
    }

    fn finish(self) -> Result<RobotParams, ParseError> {
        let gravity = match self.get("gravity") {
            Ok(v) => v[0],
            Err(_) => 9.81,
        };
        let i = self.get("inertia")?;
        Ok(RobotParams {
            mass: self.scalar("mass")?,
            inertia: Mat3::from_rows([[i[0], i[1], i[2]], [i[3], i[4], i[5]], [i[6], i[7], i[8]]]),
            gravity,
            foot_radius: self.scalar("foot_radius")?,
            hip_offset: self.legs3("hip_offset")?,
            abduction_offset: self.legs("abduction_offset")?,
            thigh_length: self.scalar("thigh_length")?,
            shank_length: self.scalar("shank_length")?,
            wheel_anchor: self.legs3("wheel_anchor")?,
            workspace_x_min: self.legs("workspace_x_min")?,
            workspace_x_max: self.legs("workspace_x_max")?,
            workspace_y_min: self.legs("workspace_y_min")?,
            workspace_y_max: self.legs("workspace_y_max")?,
            swing_time_min: self.scalar("swing_time_min")?,
            swing_time_max: self.scalar("swing_time_max")?,
            duty_factor_min: self.scalar("duty_factor_min")?,
            duty_factor_max: self.scalar("duty_factor_max")?,
            step_height: self.scalar("step_height")?,
            foot_kp: self.legs("foot_kp")?,
            foot_kd: self.legs("foot_kd")?,
            body_kp: self.scalar("body_kp")?,
            body_kd: self.scalar("body_kd")?,
            sampling_time: self.scalar("sampling_time")?,
            contact_height: self.scalar("contact_height")?,
            nominal_stance: self.legs3("nominal_stance")?,
        })
    }
}
