//! Shared fixtures for the criterion benches.

use quadloco::feet::CommandSet;
use quadloco::linalg::{Matrix, Vec3};
use quadloco::model::{constraint_matrix, pose, ContactFlags, RobotParams, LEG_COUNT};
use quadloco::sim::Controller;

/// Transposed constraint matrix of the nominal stance for a contact mask,
/// with its rank.
pub fn stance_matrix(mask: [bool; LEG_COUNT]) -> (Matrix<6, 12>, usize) {
    let p = RobotParams::go2();
    let gf: [Vec3; LEG_COUNT] = core::array::from_fn(|i| {
        let a = p.wheel_anchor[i];
        Vec3::new(a.x(), a.y(), -0.3)
    });
    let (a, rank) = constraint_matrix(&ContactFlags::new(mask), &gf);
    (a.transpose(), rank)
}

/// One contact mask per reachable rank: 0, 3, 5 and 6.
pub const MASKS: [[bool; LEG_COUNT]; 4] = [
    [false; LEG_COUNT],
    [true, false, false, false],
    [true, false, false, true],
    [true; LEG_COUNT],
];

pub fn standing() -> (Controller, CommandSet) {
    let mut ctrl = Controller::new(RobotParams::go2());
    let cmds = CommandSet {
        z: ctrl.plant.pose[pose::Z],
        ..Default::default()
    };
    ctrl.step(&cmds).unwrap();
    (ctrl, cmds)
}

/// A controller a couple of periods into a forward walk with a slight turn.
pub fn walking() -> (Controller, CommandSet) {
    let (mut ctrl, stand) = standing();
    let cmds = CommandSet {
        v_fw: 0.4,
        yaw_rate: 0.2,
        ..stand
    };
    for _ in 0..200 {
        ctrl.step(&cmds).unwrap();
    }
    (ctrl, cmds)
}
