//! Stochastic channel layer: complex Gaussian segment sampling, isotropic
//! precoders, assembly of the layered end-to-end coefficient, and direct
//! sampling of the equivalent channel.

use crate::cxmat::{dot, vecmat, C64, CMat};
use crate::error::{Error, Result};
use crate::rng::{StreamTag, SubStream, TrialKey};
use crate::scenario::Scenario;
use crate::surface::SurfaceChannel;

/// Matrix with i.i.d. circularly symmetric complex Gaussian entries of the
/// given total per-entry variance.
pub fn complex_gaussian_matrix(rows: usize, cols: usize, variance: f64, rng: &mut SubStream) -> CMat {
    assert!(variance >= 0.0, "variance must be nonnegative");
    CMat::from_fn(rows, cols, |_, _| rng.next_complex_gaussian(variance))
}

fn complex_gaussian_row(len: usize, variance: f64, rng: &mut SubStream) -> Vec<C64> {
    (0..len).map(|_| rng.next_complex_gaussian(variance)).collect()
}

/// Unit-norm vector uniform on the complex sphere (normalized Gaussian).
pub fn isotropic_unit_vector(m: usize, rng: &mut SubStream) -> Vec<C64> {
    assert!(m >= 1);
    loop {
        let v = complex_gaussian_row(m, 1.0, rng);
        let norm = crate::cxmat::vec_norm(&v);
        if norm > 0.0 {
            return v.iter().map(|z| z / norm).collect();
        }
        // exact zero draw has probability zero; redraw
    }
}

/// One draw of every random fading segment. Large-scale gains are already
/// folded in: `h_bs_sur` entries carry variance beta_BS, user rows carry
/// beta_LU,u / beta_DL,u.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// N_s x M BS-to-surface block.
    pub h_bs_sur: CMat,
    /// Per-user 1 x N_L launcher-to-user rows.
    pub h_relay_ue: Vec<Vec<C64>>,
    /// Per-user 1 x M direct rows.
    pub h_dl: Vec<Vec<C64>>,
}

/// Draw all fading segments of the layered model for one trial. Segments use
/// disjoint tagged substreams, users in index order within each segment.
pub fn sample_layered_channel(scn: &Scenario, key: TrialKey) -> Result<ChannelRealization> {
    if scn.surface.is_none() {
        return Err(Error::Config(
            "layered sampling requires a surface spec, not an omega_sw override".into(),
        ));
    }
    let mut bs = key.stream(StreamTag::BsSurface);
    let mut lu = key.stream(StreamTag::RelayUe);
    let mut dl = key.stream(StreamTag::DirectLink);
    let h_bs_sur = complex_gaussian_matrix(scn.n_s, scn.m_antennas, scn.beta_bs, &mut bs);
    let h_relay_ue = (0..scn.k_users)
        .map(|u| complex_gaussian_row(scn.n_l, scn.beta_lu[u], &mut lu))
        .collect();
    let h_dl = (0..scn.k_users)
        .map(|u| complex_gaussian_row(scn.m_antennas, scn.beta_dl[u], &mut dl))
        .collect();
    Ok(ChannelRealization {
        h_bs_sur,
        h_relay_ue,
        h_dl,
    })
}

/// Surface-wave part of the end-to-end coefficient:
/// `h_relay-UE,u W_relay H_sur H_BS-sur w`.
pub(crate) fn surface_wave_coefficient_with(
    real: &ChannelRealization,
    w_relay: &CMat,
    surface_channel: &SurfaceChannel,
    w: &[C64],
    user: usize,
) -> C64 {
    let step1 = vecmat(&real.h_relay_ue[user], w_relay); // 1 x N_s
    let step2 = vecmat(&step1, &surface_channel.h_sur); // 1 x N_s
    let step3 = vecmat(&step2, &real.h_bs_sur); // 1 x M
    dot(&step3, w)
}

/// End-to-end channel coefficient of one user for a given precoder:
/// surface-wave path plus direct path.
pub fn equivalent_coefficient(
    real: &ChannelRealization,
    scn: &Scenario,
    w: &[C64],
    user: usize,
) -> Result<C64> {
    let surface = scn
        .surface
        .as_ref()
        .ok_or_else(|| Error::Config("equivalent coefficient requires a surface spec".into()))?;
    if user >= scn.k_users {
        return Err(Error::Config(format!("user {user} out of range")));
    }
    if w.len() != scn.m_antennas
        || real.h_bs_sur.rows() != scn.n_s
        || real.h_bs_sur.cols() != scn.m_antennas
        || real.h_relay_ue[user].len() != scn.n_l
        || real.h_dl[user].len() != scn.m_antennas
    {
        return Err(Error::DimensionMismatch(
            "realization does not match the scenario dimensions".into(),
        ));
    }
    let channel = surface.surface_channel()?;
    let sw = surface_wave_coefficient_with(real, &surface.relay.w_relay(), &channel, w, user);
    let direct = dot(&real.h_dl[user], w);
    Ok(sw + direct)
}

/// Equivalent BS-to-user channel matrix, columns independent per user.
#[derive(Debug, Clone)]
pub struct EquivalentChannelMatrix {
    /// M x K; column u is user u's channel vector.
    pub h_eq: CMat,
    pub omega_eq: Vec<f64>,
}

/// Draw the equivalent channel matrix directly: column u has i.i.d.
/// CN(0, omega_eq[u]) entries. Columns are drawn in user order.
pub fn sample_equivalent_matrix(
    scn: &Scenario,
    omega_eq: &[f64],
    rng: &mut SubStream,
) -> EquivalentChannelMatrix {
    assert_eq!(omega_eq.len(), scn.k_users, "one variance per user");
    let m = scn.m_antennas;
    let mut h_eq = CMat::zeros(m, scn.k_users);
    for (u, &var) in omega_eq.iter().enumerate() {
        for r in 0..m {
            h_eq.set(r, u, rng.next_complex_gaussian(var));
        }
    }
    EquivalentChannelMatrix {
        h_eq,
        omega_eq: omega_eq.to_vec(),
    }
}
