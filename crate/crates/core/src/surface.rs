//! Deterministic electromagnetic layer: surface-wave propagation constant,
//! guided-wave envelope, the surface channel matrix, launcher/relay
//! processing, and the average gains derived from them.
//!
//! Everything here is a pure function of the geometry and material
//! parameters; all randomness lives in [`crate::channel`].

use num_complex::Complex64;

use crate::cxmat::{C64, CMat};
use crate::error::{Error, Result};

/// Free-space permeability (H/m).
pub const VACUUM_PERMEABILITY: f64 = 4.0e-7 * std::f64::consts::PI;
/// Free-space permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.8541878128e-12;

/// Surface impedance and operating frequency for the propagation constant.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceImpedanceSpec {
    /// Surface impedance (ohms).
    pub z_sur: C64,
    /// Angular frequency (rad/s).
    pub omega: f64,
    /// Permeability (H/m).
    pub mu0: f64,
    /// Permittivity (F/m).
    pub eps0: f64,
}

impl SurfaceImpedanceSpec {
    /// Spec with the vacuum constants.
    pub fn new(z_sur: C64, omega: f64) -> Self {
        SurfaceImpedanceSpec {
            z_sur,
            omega,
            mu0: VACUUM_PERMEABILITY,
            eps0: VACUUM_PERMITTIVITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::Domain(format!("omega must be positive, got {}", self.omega)));
        }
        if !(self.mu0 > 0.0) || !(self.eps0 > 0.0) {
            return Err(Error::Domain("mu0 and eps0 must be positive".into()));
        }
        if !self.z_sur.re.is_finite() || !self.z_sur.im.is_finite() {
            return Err(Error::Domain("surface impedance must be finite".into()));
        }
        Ok(())
    }

    /// Free-space wavenumber `omega * sqrt(mu0 eps0)` (rad/m).
    pub fn k0(&self) -> f64 {
        self.omega * (self.mu0 * self.eps0).sqrt()
    }
}

/// Surface-wave propagation constant
/// `gamma = sqrt(-omega^2 mu0 eps0 - (-j omega eps0 Z_sur)^2)`.
///
/// The square root is taken on the branch with `Re(gamma) >= 0` (decaying,
/// passive wave); ties at `Re = 0` resolve to `Im(gamma) >= 0`.
pub fn propagation_constant(spec: &SurfaceImpedanceSpec) -> Result<C64> {
    spec.validate()?;
    let w = spec.omega;
    let term = Complex64::new(0.0, -1.0) * w * spec.eps0 * spec.z_sur;
    let mut radicand = Complex64::new(-w * w * spec.mu0 * spec.eps0, 0.0) - term * term;
    if radicand.im == 0.0 {
        radicand.im = 0.0; // normalize -0.0 so the lossless branch lands on +j beta
    }
    let mut gamma = radicand.sqrt();
    if gamma.re < 0.0 || (gamma.re == 0.0 && gamma.im < 0.0) {
        gamma = -gamma;
    }
    if !gamma.re.is_finite() || !gamma.im.is_finite() {
        return Err(Error::Numerical(format!(
            "propagation constant overflowed at omega = {w:e}"
        )));
    }
    Ok(gamma)
}

/// Propagation constant, coupling amplitude, and path length of one guided
/// route. Attenuation and phase constants are the real and imaginary parts
/// of `gamma`, exposed as [`alpha`](SurfaceWaveParams::alpha) and
/// [`beta`](SurfaceWaveParams::beta).
#[derive(Debug, Clone, Copy)]
pub struct SurfaceWaveParams {
    gamma: C64,
    a0: C64,
    d: f64,
}

impl SurfaceWaveParams {
    pub fn new(gamma: C64, a0: C64, d: f64) -> Result<Self> {
        if gamma.re < 0.0 {
            return Err(Error::Domain(format!(
                "attenuation constant must be nonnegative, got {}",
                gamma.re
            )));
        }
        if !(d >= 0.0) {
            return Err(Error::Domain(format!("path length must be nonnegative, got {d}")));
        }
        if !gamma.is_finite() || !a0.is_finite() {
            return Err(Error::Domain("gamma and a0 must be finite".into()));
        }
        Ok(SurfaceWaveParams { gamma, a0, d })
    }

    pub fn from_impedance(spec: &SurfaceImpedanceSpec, a0: C64, d: f64) -> Result<Self> {
        SurfaceWaveParams::new(propagation_constant(spec)?, a0, d)
    }

    pub fn gamma(&self) -> C64 {
        self.gamma
    }

    /// Attenuation constant (Np/m).
    pub fn alpha(&self) -> f64 {
        self.gamma.re
    }

    /// Phase constant (rad/m).
    pub fn beta(&self) -> f64 {
        self.gamma.im
    }

    pub fn a0(&self) -> C64 {
        self.a0
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

/// Guided-wave envelope `A0 e^(-alpha d) e^(-j beta d)`.
pub fn surface_wave_envelope(params: &SurfaceWaveParams) -> C64 {
    params.a0 * (-params.gamma * params.d).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayKind {
    Unitary,
    Selection,
}

/// Launcher processing `W_relay = alpha_r * U`.
#[derive(Debug, Clone)]
pub struct RelaySpec {
    alpha_r: C64,
    u: CMat,
    kind: RelayKind,
}

const UNITARY_TOL: f64 = 1e-12;

impl RelaySpec {
    pub fn new(alpha_r: C64, u: CMat, kind: RelayKind) -> Result<Self> {
        if !alpha_r.is_finite() || !u.is_finite() {
            return Err(Error::Domain("relay parameters must be finite".into()));
        }
        match kind {
            RelayKind::Unitary => {
                let uuh = u.mul(&u.hermitian());
                let uhu = u.hermitian().mul(&u);
                let dev_left = deviation_from_identity(&uuh);
                let dev_right = deviation_from_identity(&uhu);
                if dev_left > UNITARY_TOL || dev_right > UNITARY_TOL {
                    return Err(Error::Config(format!(
                        "relay matrix is not unitary (deviation {:.3e} / {:.3e})",
                        dev_left, dev_right
                    )));
                }
            }
            RelayKind::Selection => {
                let mut row_ones = vec![0usize; u.rows()];
                let mut col_ones = vec![0usize; u.cols()];
                for r in 0..u.rows() {
                    for c in 0..u.cols() {
                        let z = u.at(r, c);
                        if z.im != 0.0 || (z.re != 0.0 && z.re != 1.0) {
                            return Err(Error::Config(format!(
                                "selection matrix entries must be 0 or 1, got {z} at ({r},{c})"
                            )));
                        }
                        if z.re == 1.0 {
                            row_ones[r] += 1;
                            col_ones[c] += 1;
                        }
                    }
                }
                if row_ones.iter().any(|&n| n > 1) || col_ones.iter().any(|&n| n > 1) {
                    return Err(Error::Config(
                        "selection matrix must have at most one 1 per row and per column".into(),
                    ));
                }
            }
        }
        Ok(RelaySpec { alpha_r, u, kind })
    }

    /// Identity launcher over `n` ports with amplification `alpha_r`.
    pub fn identity(n: usize, alpha_r: C64) -> Self {
        RelaySpec {
            alpha_r,
            u: CMat::identity(n),
            kind: RelayKind::Unitary,
        }
    }

    pub fn alpha_r(&self) -> C64 {
        self.alpha_r
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    pub fn kind(&self) -> RelayKind {
        self.kind
    }

    /// The processing matrix `alpha_r * U`.
    pub fn w_relay(&self) -> CMat {
        self.u.scale(self.alpha_r)
    }

    pub fn launcher_ports(&self) -> usize {
        self.u.rows()
    }

    pub fn surface_ports(&self) -> usize {
        self.u.cols()
    }
}

fn deviation_from_identity(m: &CMat) -> f64 {
    let mut dev = 0.0;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let expect = if r == c { 1.0 } else { 0.0 };
            dev += (m.at(r, c) - C64::new(expect, 0.0)).norm_sqr();
        }
    }
    dev.sqrt()
}

/// Deterministic surface channel `H_sur = H_sw(d) * G_path`.
#[derive(Debug, Clone)]
pub struct SurfaceChannel {
    pub h_sur: CMat,
    pub g_path: CMat,
    pub h_sw_scalar: C64,
}

pub fn build_surface_channel(params: &SurfaceWaveParams, g_path: &CMat) -> Result<SurfaceChannel> {
    if !g_path.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "routing matrix must be square, got {}x{}",
            g_path.rows(),
            g_path.cols()
        )));
    }
    if !g_path.is_finite() {
        return Err(Error::Domain("routing matrix must be finite".into()));
    }
    let envelope = surface_wave_envelope(params);
    Ok(SurfaceChannel {
        h_sur: g_path.scale(envelope),
        g_path: g_path.clone(),
        h_sw_scalar: envelope,
    })
}

/// Convention for the surface-wave-assisted average gain.
///
/// `Total` keeps the full trace `beta_BS beta_LU tr(H^H W^H W H)`;
/// `AntennaAveraged` divides it by the BS antenna count M. The layered-model
/// Monte-Carlo probe ([`crate::mc::sw_normalization_probe`]) validates
/// `Total`, which is the project default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwGainNormalization {
    #[default]
    Total,
    AntennaAveraged,
}

/// Surface-wave-assisted average channel gain.
pub fn omega_sw(
    beta_bs: f64,
    beta_lu: f64,
    h_sur: &CMat,
    relay: &RelaySpec,
    m_antennas: usize,
    normalization: SwGainNormalization,
) -> Result<f64> {
    if beta_bs < 0.0 || beta_lu < 0.0 {
        return Err(Error::Domain(format!(
            "large-scale gains must be nonnegative, got beta_bs = {beta_bs}, beta_lu = {beta_lu}"
        )));
    }
    if m_antennas == 0 {
        return Err(Error::Domain("antenna count must be positive".into()));
    }
    if !h_sur.is_square() || relay.surface_ports() != h_sur.rows() {
        return Err(Error::DimensionMismatch(format!(
            "relay is {}x{} but surface channel is {}x{}",
            relay.launcher_ports(),
            relay.surface_ports(),
            h_sur.rows(),
            h_sur.cols()
        )));
    }
    // tr(H^H W^H W H) equals ||W H||_F^2, which is real and nonnegative by
    // construction (no imaginary residue to discard).
    let trace = relay.w_relay().mul(h_sur).frobenius_norm_sq();
    let scale = match normalization {
        SwGainNormalization::Total => 1.0,
        SwGainNormalization::AntennaAveraged => 1.0 / m_antennas as f64,
    };
    Ok(beta_bs * beta_lu * trace * scale)
}

/// Equivalent end-to-end channel variance `Omega_eq = Omega_sw + beta_DL`.
pub fn omega_eq(omega_sw: f64, beta_dl: f64) -> Result<f64> {
    if omega_sw < 0.0 || beta_dl < 0.0 {
        return Err(Error::Domain(format!(
            "variances must be nonnegative, got omega_sw = {omega_sw}, beta_dl = {beta_dl}"
        )));
    }
    if omega_sw == 0.0 && beta_dl == 0.0 {
        return Err(Error::DegenerateChannel(
            "both the surface-wave and direct gains are zero".into(),
        ));
    }
    Ok(omega_sw + beta_dl)
}

/// Receiver noise plus relay-injected noise averaged over launcher-to-user
/// fading: `sigma^2 + sigma_r^2 beta_LU tr(W W^H)`.
pub fn effective_noise_variance(
    sigma2: f64,
    sigma_r2: f64,
    beta_lu: f64,
    relay: &RelaySpec,
) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(Error::Domain(format!("sigma^2 must be positive, got {sigma2}")));
    }
    if sigma_r2 < 0.0 || beta_lu < 0.0 {
        return Err(Error::Domain(
            "relay noise variance and beta_LU must be nonnegative".into(),
        ));
    }
    Ok(sigma2 + sigma_r2 * beta_lu * relay.w_relay().frobenius_norm_sq())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{StreamTag, SubStream};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    const F30GHZ_OMEGA: f64 = 2.0 * std::f64::consts::PI * 30.0e9;

    #[test]
    fn zero_impedance_reduces_to_free_space() {
        let spec = SurfaceImpedanceSpec::new(c(0.0, 0.0), F30GHZ_OMEGA);
        let gamma = propagation_constant(&spec).unwrap();
        let k0 = spec.k0();
        assert!((k0 - 628.7535064143518).abs() < 1e-9);
        assert!(gamma.re.abs() < 1e-12 * gamma.norm(), "alpha = {}", gamma.re);
        assert!((gamma.im - k0).abs() < 1e-12 * k0);
    }

    #[test]
    fn reactive_impedance_slows_the_wave() {
        // Purely imaginary Z: alpha = 0 and beta = k0 sqrt(1 + (X/eta0)^2)
        let spec = SurfaceImpedanceSpec::new(c(0.0, 100.0), F30GHZ_OMEGA);
        let gamma = propagation_constant(&spec).unwrap();
        let k0 = spec.k0();
        assert!(gamma.re.abs() < 1e-12 * gamma.norm());
        assert!((gamma.im / k0 - 1.0346300729601652).abs() < 1e-12);
        assert!(gamma.im >= k0);
    }

    #[test]
    fn lossy_impedance_golden_values() {
        // Frozen from a 50-digit oracle evaluation of the radicand.
        let spec = SurfaceImpedanceSpec::new(c(100.0, 100.0), F30GHZ_OMEGA);
        let gamma = propagation_constant(&spec).unwrap();
        assert!((gamma.re - 44.192563371916602).abs() < 1e-9 * gamma.norm());
        assert!((gamma.im - 630.30465212127635).abs() < 1e-9 * gamma.norm());
        assert!(gamma.re > 0.0 && gamma.im > spec.k0());
    }

    #[test]
    fn gamma_squared_reproduces_radicand() {
        let mut rng = SubStream::new(11, 0, StreamTag::Generic);
        for _ in 0..200 {
            let z = c(200.0 * rng.next_f64(), 400.0 * (rng.next_f64() - 0.5));
            let w = 2.0 * std::f64::consts::PI * (1.0e9 + 99.0e9 * rng.next_f64());
            let spec = SurfaceImpedanceSpec::new(z, w);
            let gamma = propagation_constant(&spec).unwrap();
            let term = c(0.0, -1.0) * w * spec.eps0 * z;
            let radicand = c(-w * w * spec.mu0 * spec.eps0, 0.0) - term * term;
            let err = (gamma * gamma - radicand).norm() / radicand.norm();
            assert!(err <= 1e-12, "radicand reproduction error {err:e}");
            assert!(gamma.re >= 0.0);
        }
    }

    #[test]
    fn envelope_cases() {
        let p = SurfaceWaveParams::new(c(0.0, 0.0), c(0.7, -0.2), 0.0).unwrap();
        assert_eq!(surface_wave_envelope(&p), c(0.7, -0.2));

        let p = SurfaceWaveParams::new(c(0.1, 0.0), c(1.0, 0.0), 10.0).unwrap();
        let e = surface_wave_envelope(&p);
        assert!((e.re - (-1.0f64).exp()).abs() < 1e-15);
        assert!(e.im.abs() < 1e-15);

        let p = SurfaceWaveParams::new(c(0.0, std::f64::consts::PI), c(1.0, 0.0), 1.0).unwrap();
        let e = surface_wave_envelope(&p);
        assert!((e.re + 1.0).abs() < 1e-14 && e.im.abs() < 1e-14);

        // magnitude only sees the attenuation
        let p = SurfaceWaveParams::new(c(0.3, 5.0), c(2.0, 0.0), 4.0).unwrap();
        assert!((surface_wave_envelope(&p).norm() - 2.0 * (-1.2f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn params_reject_growing_wave() {
        assert!(SurfaceWaveParams::new(c(-0.1, 1.0), c(1.0, 0.0), 1.0).is_err());
        assert!(SurfaceWaveParams::new(c(0.1, 1.0), c(1.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn surface_channel_cases() {
        let unit = SurfaceWaveParams::new(c(0.0, 0.0), c(1.0, 0.0), 0.0).unwrap();
        let sc = build_surface_channel(&unit, &CMat::identity(4)).unwrap();
        assert_eq!(sc.h_sur, CMat::identity(4));
        assert_eq!(sc.h_sw_scalar, c(1.0, 0.0));

        // envelope 0.5 e^{-j pi/2} = -0.5j
        let p = SurfaceWaveParams::new(
            c((2.0f64).ln() / 2.0, std::f64::consts::FRAC_PI_2 / 2.0),
            c(1.0, 0.0),
            2.0,
        )
        .unwrap();
        let sc = build_surface_channel(&p, &CMat::identity(4)).unwrap();
        for i in 0..4 {
            assert!((sc.h_sur.at(i, i) - c(0.0, -0.5)).norm() < 1e-14);
        }

        // permutation routing preserves the Frobenius norm
        let perm = CMat::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        let sc = build_surface_channel(&p, &perm).unwrap();
        let expect = sc.h_sw_scalar.norm() * 3.0f64.sqrt();
        assert!((sc.h_sur.frobenius_norm() - expect).abs() < 1e-13);

        let rect = CMat::zeros(2, 3);
        assert!(build_surface_channel(&p, &rect).is_err());
    }

    #[test]
    fn relay_validation() {
        assert!(RelaySpec::new(c(1.0, 0.0), CMat::identity(4), RelayKind::Unitary).is_ok());
        let mut not_unitary = CMat::identity(4);
        not_unitary.set(0, 0, c(2.0, 0.0));
        assert!(RelaySpec::new(c(1.0, 0.0), not_unitary, RelayKind::Unitary).is_err());

        let mut sel = CMat::zeros(2, 3);
        sel.set(0, 1, c(1.0, 0.0));
        sel.set(1, 2, c(1.0, 0.0));
        assert!(RelaySpec::new(c(0.5, 0.5), sel.clone(), RelayKind::Selection).is_ok());
        sel.set(0, 2, c(1.0, 0.0)); // two ones in one row
        assert!(RelaySpec::new(c(0.5, 0.5), sel, RelayKind::Selection).is_err());
    }

    #[test]
    fn omega_sw_identity_configuration() {
        // All-identity configuration: trace = N_s = 8
        let relay = RelaySpec::identity(8, c(1.0, 0.0));
        let h_sur = CMat::identity(8);
        let avg = omega_sw(1.0, 1.0, &h_sur, &relay, 4, SwGainNormalization::AntennaAveraged).unwrap();
        let tot = omega_sw(1.0, 1.0, &h_sur, &relay, 4, SwGainNormalization::Total).unwrap();
        assert!((avg - 2.0).abs() < 1e-14);
        assert!((tot - 8.0).abs() < 1e-14);
    }

    #[test]
    fn omega_sw_zero_and_scalar_cases() {
        let relay = RelaySpec::identity(8, c(1.0, 0.0));
        let zero = CMat::zeros(8, 8);
        for norm in [SwGainNormalization::Total, SwGainNormalization::AntennaAveraged] {
            assert_eq!(omega_sw(1.0, 1.0, &zero, &relay, 4, norm).unwrap(), 0.0);
        }

        // W = alpha_r I, H_sur = A0 e^{-alpha d} e^{-j beta d} I:
        // antenna-averaged value is |alpha_r|^2 |A0|^2 e^{-2 alpha d} N_s / M
        let n_s = 6;
        let m = 4;
        let alpha_r = c(0.8, -0.6);
        let relay = RelaySpec::identity(n_s, alpha_r);
        let params = SurfaceWaveParams::new(c(0.25, 3.0), c(1.5, 0.5), 2.0).unwrap();
        let sc = build_surface_channel(&params, &CMat::identity(n_s)).unwrap();
        let got = omega_sw(1.0, 1.0, &sc.h_sur, &relay, m, SwGainNormalization::AntennaAveraged).unwrap();
        let expect = alpha_r.norm_sqr() * params.a0().norm_sqr() * (-2.0 * 0.25 * 2.0f64).exp()
            * n_s as f64
            / m as f64;
        assert!((got - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn omega_sw_unitary_invariance_and_linearity() {
        let n = 6;
        let mut rng = SubStream::new(5, 0, StreamTag::Generic);
        let h_sur = CMat::from_fn(n, n, |_, _| rng.next_complex_gaussian(1.0));
        let relay = RelaySpec::identity(n, c(0.9, 0.3));
        let base = omega_sw(1.3, 0.7, &h_sur, &relay, 4, SwGainNormalization::Total).unwrap();

        for _ in 0..5 {
            let q = random_unitary(n, &mut rng);
            let rotated = q.mul(&h_sur);
            let v = omega_sw(1.3, 0.7, &rotated, &relay, 4, SwGainNormalization::Total).unwrap();
            assert!(
                ((v - base) / base).abs() < 1e-10,
                "unitary invariance violated: {v} vs {base}"
            );
        }

        // linear in beta_bs, beta_lu, |alpha_r|^2
        let v2 = omega_sw(2.6, 0.7, &h_sur, &relay, 4, SwGainNormalization::Total).unwrap();
        assert!((v2 / base - 2.0).abs() < 1e-12);
        let v3 = omega_sw(1.3, 2.1, &h_sur, &relay, 4, SwGainNormalization::Total).unwrap();
        assert!((v3 / base - 3.0).abs() < 1e-12);
        let relay2 = RelaySpec::identity(n, c(1.8, 0.6)); // |alpha_r|^2 doubles... (0.9,0.3)*2
        let v4 = omega_sw(1.3, 0.7, &h_sur, &relay2, 4, SwGainNormalization::Total).unwrap();
        assert!((v4 / base - 4.0).abs() < 1e-12);

        // negative gain rejected
        assert!(omega_sw(-1.0, 0.7, &h_sur, &relay, 4, SwGainNormalization::Total).is_err());
        // dimension mismatch rejected
        let relay_small = RelaySpec::identity(n - 1, c(1.0, 0.0));
        assert!(omega_sw(1.0, 1.0, &h_sur, &relay_small, 4, SwGainNormalization::Total).is_err());
    }

    fn random_unitary(n: usize, rng: &mut SubStream) -> CMat {
        // Gram-Schmidt on a Gaussian matrix
        let mut cols: Vec<Vec<C64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.next_complex_gaussian(1.0)).collect())
            .collect();
        for j in 0..n {
            for i in 0..j {
                let proj = crate::cxmat::dot_conj(&cols[i], &cols[j]);
                for r in 0..n {
                    let v = cols[j][r] - proj * cols[i][r];
                    cols[j][r] = v;
                }
            }
            let norm = crate::cxmat::vec_norm(&cols[j]);
            for r in 0..n {
                cols[j][r] /= norm;
            }
        }
        CMat::from_fn(n, n, |r, c| cols[c][r])
    }

    #[test]
    fn omega_eq_cases() {
        assert!((omega_eq(5.0, 0.01).unwrap() - 5.01).abs() < 1e-15);
        assert!((omega_eq(0.0, 0.01).unwrap() - 0.01).abs() < 1e-18);
        assert_eq!(omega_eq(3.5, 0.0).unwrap(), 3.5);
        assert!(matches!(omega_eq(0.0, 0.0), Err(Error::DegenerateChannel(_))));
        assert!(omega_eq(-1.0, 0.5).is_err());
    }

    #[test]
    fn effective_noise_cases() {
        let relay4 = RelaySpec::identity(4, c(1.0, 0.0));
        assert!((effective_noise_variance(1.0, 0.1, 1.0, &relay4).unwrap() - 1.4).abs() < 1e-15);
        assert_eq!(effective_noise_variance(1.0, 0.0, 1.0, &relay4).unwrap(), 1.0);

        let relay8 = RelaySpec::identity(8, c(2.0, 0.0));
        let v = effective_noise_variance(1.0, 0.05, 2.0, &relay8).unwrap();
        assert!((v - 4.2).abs() < 1e-14);

        // never below the thermal floor
        let mut rng = SubStream::new(9, 0, StreamTag::Generic);
        for _ in 0..50 {
            let s2 = 0.1 + rng.next_f64();
            let sr2 = rng.next_f64();
            let blu = 2.0 * rng.next_f64();
            assert!(effective_noise_variance(s2, sr2, blu, &relay4).unwrap() >= s2);
        }
        assert!(effective_noise_variance(0.0, 0.1, 1.0, &relay4).is_err());
    }
}
