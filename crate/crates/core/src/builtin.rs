//! Embedded reference families used by tests, benches, and the
//! `reproduce-example` command.

use crate::certificate::SubsystemFamily;
use crate::matrix::SquareMatrix;

/// Two planar subsystems: the first needs three steps to contract, the
/// second contracts immediately. Certifiable at dwell time 2 but not under
/// arbitrary switching.
pub fn nominal_family() -> SubsystemFamily {
    let a1 = SquareMatrix::from_rows(&[vec![0.02, 0.93], vec![-0.53, -0.92]])
        .expect("embedded matrix is well-formed");
    let a2 = SquareMatrix::from_rows(&[vec![0.04, 0.09], vec![0.08, -0.11]])
        .expect("embedded matrix is well-formed");
    SubsystemFamily::new(vec![a1, a2]).expect("two planar subsystems")
}

/// The nominal family with small entry perturbations; still certifiable at
/// dwell time 2, with visibly different scalars.
pub fn perturbed_family() -> SubsystemFamily {
    let a1 = SquareMatrix::from_rows(&[vec![0.05, 0.95], vec![-0.60, -0.92]])
        .expect("embedded matrix is well-formed");
    let a2 = SquareMatrix::from_rows(&[vec![0.04, 0.09], vec![0.10, -0.11]])
        .expect("embedded matrix is well-formed");
    SubsystemFamily::new(vec![a1, a2]).expect("two planar subsystems")
}

/// The nominal family plus a half-identity third subsystem, used by the
/// three-letter rewrite fixtures.
pub fn extended_family() -> SubsystemFamily {
    let mut matrices = nominal_family().matrices().to_vec();
    matrices.push(SquareMatrix::scaled_identity(2, 0.5));
    SubsystemFamily::new(matrices).expect("three planar subsystems")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_well_formed() {
        assert_eq!(nominal_family().len(), 2);
        assert_eq!(perturbed_family().len(), 2);
        let ext = extended_family();
        assert_eq!(ext.len(), 3);
        assert_eq!(ext.dim(), 2);
        assert_eq!(ext.matrix(3).unwrap().get(0, 0), 0.5);
        assert_eq!(ext.matrix(3).unwrap().get(0, 1), 0.0);
    }
}
