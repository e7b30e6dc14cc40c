use crate::linalg::{Matrix, Vec12, Vec3, Vec6};
use crate::model::kinematics::contact_map;
use crate::model::params::LEG_COUNT;
use crate::model::state::ContactFlags;

/// Stacked contact constraint `A` (12×6); rows of airborne feet are zero.
pub type ConstraintMatrix = Matrix<12, 6>;

/// Builds `A` from the contact flags and body-frame contact points. The rank
/// comes from the contact count, not from the numbers.
pub fn constraint_matrix(
    contacts: &ContactFlags,
    gf: &[Vec3; LEG_COUNT],
) -> (ConstraintMatrix, usize) {
    let mut a = ConstraintMatrix::zeros();
    for leg in 0..LEG_COUNT {
        if contacts.sigma[leg] {
            a.set_block(3 * leg, 0, &contact_map(&gf[leg]));
        }
    }
    (a, contacts.rank())
}

/// `A·V + Σ·dGF`: zero while grounded feet stay put.
pub fn constraint_residual(
    contacts: &ContactFlags,
    gf: &[Vec3; LEG_COUNT],
    twist: &Vec6,
    foot_rates: &Vec12,
) -> Vec12 {
    let mut r = Vec12::zeros();
    for leg in 0..LEG_COUNT {
        if contacts.sigma[leg] {
            let v = contact_map(&gf[leg]) * *twist + foot_rates.foot(leg);
            r.set_foot(leg, &v);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> [Vec3; 4] {
        [
            Vec3::new(0.2, 0.15, -0.3),
            Vec3::new(0.2, -0.15, -0.3),
            Vec3::new(-0.2, 0.15, -0.3),
            Vec3::new(-0.2, -0.15, -0.3),
        ]
    }

    #[test]
    fn no_contacts_no_constraint() {
        let (a, r) = constraint_matrix(&ContactFlags::default(), &square());
        assert_eq!(a, ConstraintMatrix::zeros());
        assert_eq!(r, 0);
    }

    #[test]
    fn single_foot_block() {
        let (a, r) = constraint_matrix(&ContactFlags::new([true, false, false, false]), &square());
        assert_eq!(r, 3);
        // Translation passes straight through; yaw moves the foot sideways.
        assert_eq!(a[(0, 0)], 1.0);
        assert!((a[(1, 5)] - 0.2).abs() < 1e-15);
        for row in 3..12 {
            assert_eq!(a.row(row), Vec6::zeros());
        }
    }

    #[test]
    fn residual_vanishes_for_rigid_motion() {
        let gf = square();
        let twist = Vec6::from_array([0.1, 0.2, -0.1, 0.3, 0.1, -0.2]);
        let mut rates = Vec12::zeros();
        for leg in 0..4 {
            rates.set_foot(leg, &(-(contact_map(&gf[leg]) * twist)));
        }
        let res = constraint_residual(&ContactFlags::all(), &gf, &twist, &rates);
        assert!(res.max_abs() < 1e-15);
    }
}
