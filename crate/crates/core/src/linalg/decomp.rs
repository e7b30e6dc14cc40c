//! Pivoted LDU, LDLT and thin LDQ factorisations with a caller-supplied rank.
//!
//! The pivot search is a nested loop whose trip count depends only on the
//! matrix size `n` and the rank `r`: step `k` scans the `n - k` candidate
//! indices that have not been chosen yet, for `n·r − r(r−1)/2` candidate
//! evaluations in total. The count is reported in `iterations` so callers
//! can assert it.

use super::{LinalgError, Matrix, Vector};

/// Pivot magnitude below which the caller's rank claim is considered violated.
pub const RANK_TOL: f64 = 1e-10;

/// Closed-form number of candidate evaluations for an `n`x`n` matrix of rank `r`.
pub const fn pivot_iterations(n: usize, r: usize) -> usize {
    if r == 0 {
        0
    } else {
        n * r - r * (r - 1) / 2
    }
}

/// `S = P·L·D·U·Pᵀ` for a square matrix of known rank.
///
/// `perm[k]` is the original index chosen at step `k` (column `k` of `P` is
/// the canonical vector `e_perm[k]`); the unchosen indices follow in
/// ascending order. `l` is `n`x`r` and `u` is `r`x`n`, both stored in full
/// `N`x`N` arrays with the unused part zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LduFactors<const N: usize> {
    pub perm: [usize; N],
    pub l: Matrix<N, N>,
    pub d: Vector<N>,
    pub u: Matrix<N, N>,
    pub size: usize,
    pub rank: usize,
    pub iterations: usize,
}

/// Thin `X = P·L·D·Q` with `Q·Qᵀ = I_r` and a positive diagonal `D`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThinLdq<const M: usize, const N: usize> {
    pub perm: [usize; M],
    pub l: Matrix<M, M>,
    pub d: Vector<M>,
    pub q: Matrix<M, N>,
    pub rank: usize,
    pub iterations: usize,
}

/// Pivoted LDU of the whole matrix; see [`ldu_decompose_leading`].
pub fn ldu_decompose<const N: usize>(
    s: &Matrix<N, N>,
    rank: usize,
) -> Result<LduFactors<N>, LinalgError> {
    ldu_decompose_leading(s, N, rank)
}

/// Pivoted LDU of the leading `n`x`n` block of `s`, performing exactly `rank`
/// pivot steps.
///
/// At each step every remaining candidate's diagonal `d_c` is evaluated with
/// the Crout recurrences and the one with the largest magnitude wins (lowest
/// original index on ties). Fails with `RankDeficient` if the winning pivot
/// falls below [`RANK_TOL`] before `rank` steps have completed.
pub fn ldu_decompose_leading<const N: usize>(
    s: &Matrix<N, N>,
    n: usize,
    rank: usize,
) -> Result<LduFactors<N>, LinalgError> {
    if n > N || rank > n {
        return Err(LinalgError::Dimension);
    }
    for i in 0..n {
        for j in 0..n {
            if !s[(i, j)].is_finite() {
                return Err(LinalgError::NonFinite);
            }
        }
    }

    // Crout multipliers indexed by original row/column: lrow[c][j] = ℓ_{c,j},
    // ucol[j][c] = u_{j,c}.
    let mut lrow = Matrix::<N, N>::zeros();
    let mut ucol = Matrix::<N, N>::zeros();
    let mut d = Vector::<N>::zeros();
    let mut chosen = [false; N];
    let mut perm = [0usize; N];
    let mut iterations = 0usize;

    for k in 0..rank {
        let mut best: Option<(usize, f64)> = None;
        for c in 0..n {
            if chosen[c] {
                continue;
            }
            iterations += 1;
            if k > 0 {
                // Fold in the previous pivot's row/column multipliers.
                let p = perm[k - 1];
                let dp = d[k - 1];
                let mut lc = s[(c, p)];
                let mut uc = s[(p, c)];
                for i in 0..k - 1 {
                    lc -= lrow[(c, i)] * d[i] * ucol[(i, p)];
                    uc -= lrow[(p, i)] * d[i] * ucol[(i, c)];
                }
                lrow[(c, k - 1)] = lc / dp;
                ucol[(k - 1, c)] = uc / dp;
            }
            let mut dc = s[(c, c)];
            for i in 0..k {
                dc -= lrow[(c, i)] * d[i] * ucol[(i, c)];
            }
            match best {
                Some((_, m)) if dc.abs() <= m.abs() => {}
                _ => best = Some((c, dc)),
            }
        }
        let (p, dp) = best.ok_or(LinalgError::Dimension)?;
        if !(dp.abs() >= RANK_TOL) {
            return Err(LinalgError::RankDeficient {
                step: k,
                expected: rank,
            });
        }
        perm[k] = p;
        d[k] = dp;
        chosen[p] = true;
    }

    let mut next = rank;
    for c in 0..n {
        if !chosen[c] {
            perm[next] = c;
            next += 1;
        }
    }
    for (k, slot) in perm.iter_mut().enumerate().skip(n) {
        *slot = k;
    }

    // Leading r×r blocks.
    let mut l = Matrix::<N, N>::zeros();
    let mut u = Matrix::<N, N>::zeros();
    for a in 0..rank {
        l[(a, a)] = 1.0;
        u[(a, a)] = 1.0;
        for j in 0..a {
            l[(a, j)] = lrow[(perm[a], j)];
            u[(j, a)] = ucol[(j, perm[a])];
        }
    }

    if rank < n {
        // L₊ = P₊ᵀ S P_r U_r⁻¹ D⁻¹ and U₊ = D⁻¹ L_r⁻¹ P_rᵀ S P₊.
        let u_inv = u.unit_upper_inverse(rank);
        let l_inv = l.unit_lower_inverse(rank);
        for a in rank..n {
            for j in 0..rank {
                let mut lv = 0.0;
                let mut uv = 0.0;
                for b in 0..=j {
                    lv += s[(perm[a], perm[b])] * u_inv[(b, j)];
                    uv += l_inv[(j, b)] * s[(perm[b], perm[a])];
                }
                l[(a, j)] = lv / d[j];
                u[(j, a)] = uv / d[j];
            }
        }
    }

    Ok(LduFactors {
        perm,
        l,
        d,
        u,
        size: n,
        rank,
        iterations,
    })
}

impl<const N: usize> LduFactors<N> {
    /// `P·L·D·U·Pᵀ` over the active block.
    pub fn reconstruct(&self) -> Matrix<N, N> {
        let mut out = Matrix::<N, N>::zeros();
        for a in 0..self.size {
            for b in 0..self.size {
                let mut acc = 0.0;
                for j in 0..self.rank {
                    acc += self.l[(a, j)] * self.d[j] * self.u[(j, b)];
                }
                out[(self.perm[a], self.perm[b])] = acc;
            }
        }
        out
    }

    /// `S⁻¹ = P·U⁻¹·D⁻¹·L⁻¹·Pᵀ` over the active block; requires full rank.
    pub fn inverse(&self) -> Result<Matrix<N, N>, LinalgError> {
        let n = self.size;
        if self.rank != n {
            return Err(LinalgError::RankDeficient {
                step: self.rank,
                expected: n,
            });
        }
        let l_inv = self.l.unit_lower_inverse(n);
        let u_inv = self.u.unit_upper_inverse(n);
        let mut out = Matrix::<N, N>::zeros();
        for a in 0..n {
            for b in 0..n {
                let mut acc = 0.0;
                for j in a.max(b)..n {
                    acc += u_inv[(a, j)] * l_inv[(j, b)] / self.d[j];
                }
                out[(self.perm[a], self.perm[b])] = acc;
            }
        }
        Ok(out)
    }
}

/// Thin LDQ of an `M`x`N` matrix of known rank, built on the LDLT of `X·Xᵀ`.
///
/// `Q = D⁻¹ L_r⁻¹ P_rᵀ X`, where `D² = D_S` is the pivot diagonal of `X·Xᵀ`.
pub fn ldq_decompose<const M: usize, const N: usize>(
    x: &Matrix<M, N>,
    rank: usize,
) -> Result<ThinLdq<M, N>, LinalgError> {
    let gram = *x * x.transpose();
    let f = ldu_decompose(&gram, rank)?;

    let mut d = Vector::<M>::zeros();
    for k in 0..rank {
        // X·Xᵀ is positive semidefinite, so a negative pivot means the rank
        // claim is wrong.
        if !(f.d[k] >= RANK_TOL) {
            return Err(LinalgError::RankDeficient {
                step: k,
                expected: rank,
            });
        }
        d[k] = f.d[k].sqrt();
    }

    let l_inv = f.l.unit_lower_inverse(rank);
    let mut q = Matrix::<M, N>::zeros();
    for j in 0..rank {
        for b in 0..=j {
            let coeff = l_inv[(j, b)];
            if coeff == 0.0 {
                continue;
            }
            let src = f.perm[b];
            for c in 0..N {
                q[(j, c)] += coeff * x[(src, c)];
            }
        }
        let inv = 1.0 / d[j];
        for c in 0..N {
            q[(j, c)] *= inv;
        }
    }

    Ok(ThinLdq {
        perm: f.perm,
        l: f.l,
        d,
        q,
        rank,
        iterations: f.iterations,
    })
}

impl<const M: usize, const N: usize> ThinLdq<M, N> {
    /// `P·L·D·Q`.
    pub fn reconstruct(&self) -> Matrix<M, N> {
        let mut out = Matrix::<M, N>::zeros();
        for a in 0..M {
            for j in 0..self.rank {
                let coeff = self.l[(a, j)] * self.d[j];
                for c in 0..N {
                    out[(self.perm[a], c)] += coeff * self.q[(j, c)];
                }
            }
        }
        out
    }

    /// Largest deviation of `Q·Qᵀ` from `I_r`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.rank {
            for b in 0..self.rank {
                let dot: f64 = (0..N).map(|c| self.q[(a, c)] * self.q[(b, c)]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `P·L` as a dense `M`x`M` matrix (columns beyond the rank are zero).
    pub fn permuted_l(&self) -> Matrix<M, M> {
        let mut out = Matrix::<M, M>::zeros();
        for a in 0..M {
            for j in 0..self.rank {
                out[(self.perm[a], j)] = self.l[(a, j)];
            }
        }
        out
    }
}
