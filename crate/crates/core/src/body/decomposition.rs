//! Constrained-dynamics matrices from the thin LDQ of `Aᵀ`.

use crate::error::Result;
use crate::linalg::{
    diagonal_inverse, ldq_decompose, ldu_decompose_leading, Mat6, ThinLdq, Vec12, Vec6,
};
use crate::model::constraints::ConstraintMatrix;

/// Everything the controller and the internal model need from one
/// factorisation. Blocks beyond the rank are zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompositionCache {
    pub ldq: ThinLdq<6, 12>,
    /// `P·L`, 6×r.
    pub pl: Mat6,
    /// `D⁻¹`, r entries.
    pub d_inv: Vec6,
    /// `−((PL)ᵀ M⁻¹ PL)⁻¹`, r×r.
    pub phi: Mat6,
    /// `M⁻¹ PL Φ`, 6×r.
    pub psi: Mat6,
    /// `M⁻¹ (I + PL Ψᵀ)`.
    pub lambda: Mat6,
    /// `Λ h_V + Ψ D⁻¹ Q h`.
    pub f_v: Vec6,
    pub rank: usize,
    /// Pivot candidates evaluated by both factorisations.
    pub iterations: usize,
}

impl DecompositionCache {
    /// `Ψ D⁻¹ u`.
    pub fn input_map(&self, u: &Vec6) -> Vec6 {
        let mut scaled = Vec6::zeros();
        for k in 0..self.rank {
            scaled[k] = self.d_inv[k] * u[k];
        }
        self.psi * scaled
    }
}

/// Factorises `Aᵀ` with the rank implied by the contacts and assembles the
/// constrained dynamics. `h` and `h_v` are the velocity-product terms.
pub fn refresh_decomposition(
    a: &ConstraintMatrix,
    rank: usize,
    mass_inverse: &Mat6,
    h: &Vec12,
    h_v: &Vec6,
) -> Result<DecompositionCache> {
    let ldq = ldq_decompose(&a.transpose(), rank)?;
    let pl = ldq.permuted_l();
    let d_inv = diagonal_inverse(&ldq.d, rank);

    let m_pl = *mass_inverse * pl;
    let s = pl.transpose() * m_pl;
    let f = ldu_decompose_leading(&s, rank, rank)?;
    let phi = -f.inverse()?;
    let psi = m_pl * phi;
    let lambda = *mass_inverse * (Mat6::identity() + pl * psi.transpose());

    let qh = ldq.q * *h;
    let mut cache = DecompositionCache {
        ldq,
        pl,
        d_inv,
        phi,
        psi,
        lambda,
        f_v: Vec6::zeros(),
        rank,
        iterations: ldq.iterations + f.iterations,
    };
    cache.f_v = lambda * *h_v + cache.input_map(&qh);
    Ok(cache)
}
