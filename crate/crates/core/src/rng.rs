//! Deterministic random substreams for trial-parallel Monte-Carlo runs.
//!
//! Every random draw in the engine comes from a [`SubStream`] keyed by
//! `(master seed, trial index, segment tag)`. The key is mixed through
//! splitmix64 into the state of a xoshiro256** generator, so any worker can
//! reconstruct any trial's streams independently of scheduling or worker
//! count, and changing how many values one segment consumes never shifts the
//! draws of another segment.
//!
//! Normal variates use the Box-Muller transform (one transform yields the
//! real and imaginary parts of one complex Gaussian sample). This choice is
//! fixed: golden CSVs depend on it.

/// Segment labels that keep the per-trial streams disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamTag {
    /// BS-to-surface fading block.
    BsSurface = 1,
    /// Launcher-to-user fading rows.
    RelayUe = 2,
    /// Direct BS-to-user fading rows.
    DirectLink = 3,
    /// Isotropic precoding vector.
    Precoder = 4,
    /// Direct draw of the equivalent channel (bypasses the layered model).
    Equivalent = 5,
    /// Anything that is not tied to a channel segment (test drivers etc.).
    Generic = 6,
}

/// Identifies one Monte-Carlo trial; hands out the per-segment streams.
#[derive(Debug, Clone, Copy)]
pub struct TrialKey {
    pub seed: u64,
    pub trial: u64,
}

impl TrialKey {
    pub fn new(seed: u64, trial: u64) -> Self {
        TrialKey { seed, trial }
    }

    pub fn stream(&self, tag: StreamTag) -> SubStream {
        SubStream::new(self.seed, self.trial, tag)
    }
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Independent master seed for a named sub-experiment (grid point, repeat,
/// check); pure function of the inputs.
pub fn derive_seed(master: u64, salt: u64) -> u64 {
    mix64(mix64(master ^ GOLDEN) ^ salt.wrapping_mul(0xff51_afd7_ed55_8ccd))
}

/// splitmix64 finalizer.
#[inline]
fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// One deterministic random stream (xoshiro256**).
#[derive(Debug, Clone)]
pub struct SubStream {
    s: [u64; 4],
}

impl SubStream {
    pub fn new(master_seed: u64, trial: u64, tag: StreamTag) -> Self {
        let mut z = mix64(master_seed ^ GOLDEN);
        z = mix64(z ^ trial.wrapping_mul(0xff51_afd7_ed55_8ccd));
        z = mix64(z ^ (tag as u64).wrapping_mul(0xc4ce_b9fe_1a85_ec53));
        let mut s = [0u64; 4];
        for slot in &mut s {
            z = z.wrapping_add(GOLDEN);
            *slot = mix64(z);
        }
        if s == [0; 4] {
            s[0] = 1; // xoshiro forbids the all-zero state
        }
        SubStream { s }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform in [0, 1) with 53 significant bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Pair of independent standard normals (Box-Muller).
    pub fn next_normal_pair(&mut self) -> (f64, f64) {
        loop {
            let u1 = self.next_f64();
            let u2 = self.next_f64();
            if u1 > 1e-300 {
                let r = (-2.0 * u1.ln()).sqrt();
                let theta = 2.0 * std::f64::consts::PI * u2;
                return (r * theta.cos(), r * theta.sin());
            }
        }
    }

    /// Circularly symmetric complex Gaussian with total variance `variance`
    /// (each component carries half of it).
    #[inline]
    pub fn next_complex_gaussian(&mut self, variance: f64) -> num_complex::Complex64 {
        let (a, b) = self.next_normal_pair();
        let s = (variance * 0.5).sqrt();
        num_complex::Complex64::new(a * s, b * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = SubStream::new(7, 42, StreamTag::BsSurface);
        let mut b = SubStream::new(7, 42, StreamTag::BsSurface);
        for _ in 0..64 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn keys_separate_streams() {
        let mut base = SubStream::new(7, 42, StreamTag::BsSurface);
        let mut other_trial = SubStream::new(7, 43, StreamTag::BsSurface);
        let mut other_tag = SubStream::new(7, 42, StreamTag::RelayUe);
        let mut other_seed = SubStream::new(8, 42, StreamTag::BsSurface);
        let x = base.next_u64();
        assert_ne!(x, other_trial.next_u64());
        assert_ne!(x, other_tag.next_u64());
        assert_ne!(x, other_seed.next_u64());
    }

    #[test]
    fn uniform_range_and_mean() {
        let mut rng = SubStream::new(1, 0, StreamTag::Generic);
        let n = 200_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
            sum += u;
        }
        let mean = sum / n as f64;
        // std err of the mean is 1/sqrt(12 n) ~ 6.5e-4
        assert!((mean - 0.5).abs() < 4e-3, "uniform mean {mean}");
    }

    #[test]
    fn normal_pair_moments() {
        let mut rng = SubStream::new(2, 0, StreamTag::Generic);
        let n = 500_000;
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..n {
            let (a, b) = rng.next_normal_pair();
            sum += a + b;
            sum_sq += a * a + b * b;
        }
        let m = sum / (2 * n) as f64;
        let v = sum_sq / (2 * n) as f64;
        assert!(m.abs() < 5e-3, "normal mean {m}");
        assert!((v - 1.0).abs() < 1e-2, "normal variance {v}");
    }

    #[test]
    fn complex_gaussian_variance_split() {
        let mut rng = SubStream::new(3, 0, StreamTag::Generic);
        let n = 1_000_000;
        let variance = 2.0;
        let (mut p_re, mut p_im) = (0.0, 0.0);
        for _ in 0..n {
            let z = rng.next_complex_gaussian(variance);
            p_re += z.re * z.re;
            p_im += z.im * z.im;
        }
        let vre = p_re / n as f64;
        let vim = p_im / n as f64;
        assert!((vre - 1.0).abs() < 0.01, "re variance {vre}");
        assert!((vim - 1.0).abs() < 0.01, "im variance {vim}");
    }
}
