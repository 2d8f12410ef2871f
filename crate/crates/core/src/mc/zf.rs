use crate::cxmat::{dot_conj, CMat};
use crate::error::{Error, Result};

/// Rejection threshold for the equivalent-channel condition number
/// (estimated as `sqrt(||G||_F ||G^-1||_F)` on the Gram matrix, an upper
/// proxy for the 2-norm condition of `H_eq`).
pub const CONDITION_CAP: f64 = 1e10;

/// Column-normalized zero-forcing precoder.
#[derive(Debug, Clone)]
pub struct ZfPrecoder {
    /// M x K precoding matrix with unit-norm columns.
    pub w: CMat,
    /// Diagonal of `(H^H H)^-1`; `1/[G^-1]_uu` is user u's beamforming gain.
    pub gram_inv_diag: Vec<f64>,
}

/// Build `W = H (H^H H)^-1 D` with D chosen so every column has unit norm.
///
/// Nulling holds by construction: `h_i^H w_u = 0` for `i != u`, and
/// `|h_u^H w_u|^2 [G^-1]_uu = 1`.
pub fn zf_precoder(h_eq: &CMat) -> Result<ZfPrecoder> {
    let m = h_eq.rows();
    let k = h_eq.cols();
    if k > m {
        return Err(Error::Infeasible(format!(
            "zero-forcing needs at least as many antennas as users, got M = {m}, K = {k}"
        )));
    }
    if !h_eq.is_finite() {
        return Err(Error::Domain("channel matrix must be finite".into()));
    }
    let gram = h_eq.hermitian().mul(h_eq);
    let gram_inv = gram.inverse()?;
    let cond_est = (gram.frobenius_norm() * gram_inv.frobenius_norm()).sqrt();
    if !cond_est.is_finite() || cond_est > CONDITION_CAP {
        return Err(Error::SingularChannel(format!(
            "condition estimate {cond_est:.3e} exceeds cap {CONDITION_CAP:.0e}"
        )));
    }

    let unnormalized = h_eq.mul(&gram_inv); // columns H G^-1 e_u
    let mut w = CMat::zeros(m, k);
    let mut gram_inv_diag = Vec::with_capacity(k);
    for u in 0..k {
        let col = unnormalized.col(u);
        let norm = crate::cxmat::vec_norm(&col);
        if norm == 0.0 {
            return Err(Error::SingularChannel(format!("null precoding column {u}")));
        }
        for r in 0..m {
            w.set(r, u, col[r] / norm);
        }
        gram_inv_diag.push(gram_inv.at(u, u).re);
    }
    Ok(ZfPrecoder { w, gram_inv_diag })
}

/// Residual inter-user interference after ZF, normalized by the intended
/// signal power and averaged over users:
/// `mean_u sum_{i != u} |h_u^H w_i|^2 / |h_u^H w_u|^2`.
pub fn interference_ratio(h_eq: &CMat, w: &CMat) -> f64 {
    let k = h_eq.cols();
    let mut total = 0.0;
    for u in 0..k {
        let h_u = h_eq.col(u);
        let signal = dot_conj(&h_u, &w.col(u)).norm_sqr();
        let mut interference = 0.0;
        for i in 0..k {
            if i != u {
                interference += dot_conj(&h_u, &w.col(i)).norm_sqr();
            }
        }
        total += interference / signal;
    }
    total / k as f64
}
