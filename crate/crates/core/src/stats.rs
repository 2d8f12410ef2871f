//! Empirical distribution machinery: ECDF, histogram densities, the
//! Kolmogorov-Smirnov statistic, and normal-approximation confidence
//! intervals.

use crate::error::{Error, Result};
use crate::mc::MonteCarloEstimate;
use crate::special::regularized_lower_gamma;

/// Empirical CDF over a sorted sample vector.
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Config("ECDF needs at least one sample".into()));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::Domain("ECDF samples must not contain NaN".into()));
        }
        samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Ecdf { sorted: samples })
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x` (right-continuous step function).
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.sorted.partition_point(|&s| s <= x);
        idx as f64 / self.sorted.len() as f64
    }
}

/// Kolmogorov-Smirnov statistic of a sample against a reference CDF:
/// `sup_i max(|i/n - F(x_(i))|, |F(x_(i)) - (i-1)/n|)`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Config("KS statistic needs at least one sample".into()));
    }
    let mut sorted = samples.to_vec();
    if sorted.iter().any(|x| x.is_nan()) {
        return Err(Error::Domain("KS samples must not contain NaN".into()));
    }
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let upper = ((i + 1) as f64 / n - f).abs();
        let lower = (f - i as f64 / n).abs();
        d = d.max(upper).max(lower);
    }
    Ok(d)
}

/// Asymptotic KS critical value `c / sqrt(n)`; `c = 1.36` at roughly the 5%
/// level and `c = 1.63` at roughly 1%.
pub fn ks_critical(n: usize, c: f64) -> f64 {
    c / (n as f64).sqrt()
}

/// Equal-width normalized histogram.
#[derive(Debug, Clone)]
pub struct HistogramDensity {
    /// Ascending edges, length `bins + 1`.
    pub bin_edges: Vec<f64>,
    /// Densities normalized so that `sum(density * width) = 1`.
    pub densities: Vec<f64>,
}

impl HistogramDensity {
    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }
}

pub fn histogram_density(samples: &[f64], bins: usize) -> Result<HistogramDensity> {
    if bins == 0 || samples.len() < bins {
        return Err(Error::Config(format!(
            "histogram needs at least as many samples as bins, got {} samples for {bins} bins",
            samples.len()
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("histogram samples must be finite".into()));
    }
    let min = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        // all samples identical: single unit-width bin around the value
        return Ok(HistogramDensity {
            bin_edges: vec![min - 0.5, min + 0.5],
            densities: vec![1.0],
        });
    }
    let width = (max - min) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in samples {
        let idx = (((x - min) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let n = samples.len() as f64;
    let densities = counts.iter().map(|&c| c as f64 / (n * width)).collect();
    let bin_edges = (0..=bins).map(|i| min + i as f64 * width).collect();
    Ok(HistogramDensity { bin_edges, densities })
}

/// Normal-approximation interval `mean +/- z * std_err`.
pub fn mean_confidence_interval(samples: &[f64], confidence: f64) -> Result<MonteCarloEstimate> {
    if samples.len() < 2 {
        return Err(Error::Config("confidence interval needs at least two samples".into()));
    }
    MonteCarloEstimate::from_values(samples, confidence)
}

/// Standard normal CDF, expressed through the regularized lower incomplete
/// gamma function: `Phi(x) = 1/2 +/- P(1/2, x^2/2) / 2`.
pub fn normal_cdf(x: f64) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    let p = regularized_lower_gamma(0.5, 0.5 * x * x).expect("valid arguments");
    if x > 0.0 {
        0.5 + 0.5 * p
    } else {
        0.5 - 0.5 * p
    }
}

/// Inverse standard normal CDF (Acklam's rational approximation,
/// |relative error| < 1.2e-9 over (0, 1)).
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("quantile requires p in (0,1), got {p}")));
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{StreamTag, SubStream};

    #[test]
    fn ecdf_basic_cases() {
        let e = Ecdf::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert!((e.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(3.0), 1.0);
        assert_eq!(e.eval(10.0), 1.0);
        assert!(Ecdf::new(vec![]).is_err());
    }

    #[test]
    fn ecdf_monotone() {
        let mut rng = SubStream::new(41, 0, StreamTag::Generic);
        let samples: Vec<f64> = (0..500).map(|_| rng.next_f64() * 10.0 - 5.0).collect();
        let e = Ecdf::new(samples).unwrap();
        let mut last = 0.0;
        for i in -60..60 {
            let v = e.eval(0.1 * i as f64);
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn ecdf_matches_exponential() {
        let mut rng = SubStream::new(42, 0, StreamTag::Generic);
        let n = 100_000;
        let samples: Vec<f64> = (0..n).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
        let e = Ecdf::new(samples).unwrap();
        let expect = 1.0 - (-1.0f64).exp();
        assert!((e.eval(1.0) - expect).abs() < 0.005);
    }

    #[test]
    fn ks_single_sample() {
        let d = ks_statistic(&[0.5], |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_self_draw_is_small() {
        let mut rng = SubStream::new(43, 0, StreamTag::Generic);
        let n = 100_000;
        let samples: Vec<f64> = (0..n).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
        let d = ks_statistic(&samples, |x| 1.0 - (-x).exp()).unwrap();
        assert!(d < ks_critical(n, 1.36) * 1.5, "D = {d}");
    }

    #[test]
    fn ks_detects_wrong_scale() {
        // Exp(mean 1) against the Exp(mean 2) CDF: the CDF sup-gap is exactly
        // 1/4 (attained at x = 2 ln 2), so D should sit near 0.25.
        let mut rng = SubStream::new(44, 0, StreamTag::Generic);
        let n = 10_000;
        let samples: Vec<f64> = (0..n).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
        let d = ks_statistic(&samples, |x| 1.0 - (-x / 2.0).exp()).unwrap();
        assert!((d - 0.25).abs() < 0.05, "D = {d}");
        assert!(d > 0.15);
    }

    #[test]
    fn ks_invariant_under_increasing_transform() {
        let mut rng = SubStream::new(45, 0, StreamTag::Generic);
        let samples: Vec<f64> = (0..5000).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
        let d1 = ks_statistic(&samples, |x| 1.0 - (-x).exp()).unwrap();
        // x -> x^2 jointly with the CDF pullback
        let transformed: Vec<f64> = samples.iter().map(|&x| x * x).collect();
        let d2 = ks_statistic(&transformed, |y| {
            if y <= 0.0 {
                0.0
            } else {
                1.0 - (-y.sqrt()).exp()
            }
        })
        .unwrap();
        assert!((d1 - d2).abs() < 1e-12, "{d1} vs {d2}");
    }

    #[test]
    fn histogram_normalizes() {
        let mut rng = SubStream::new(46, 0, StreamTag::Generic);
        let samples: Vec<f64> = (0..20_000).map(|_| rng.next_f64() * 3.0 - 1.0).collect();
        let h = histogram_density(&samples, 25).unwrap();
        let width = h.bin_edges[1] - h.bin_edges[0];
        let mass: f64 = h.densities.iter().map(|d| d * width).sum();
        assert!((mass - 1.0).abs() < 1e-9, "mass {mass}");
    }

    #[test]
    fn histogram_uniform_is_flat() {
        let mut rng = SubStream::new(47, 0, StreamTag::Generic);
        let samples: Vec<f64> = (0..1_000_000).map(|_| rng.next_f64()).collect();
        let h = histogram_density(&samples, 20).unwrap();
        let max = h.densities.iter().cloned().fold(0.0, f64::max);
        let min = h.densities.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 1.1, "max/min = {}", max / min);
    }

    #[test]
    fn histogram_tracks_gamma_density() {
        // 1e6 draws of Gamma(13, 12.525) (sum of 13 exponentials, scaled):
        // the 100-bin density stays within 0.002 of the analytic pdf
        use crate::analytic::{gamma_pdf, GammaParams};
        let gp = GammaParams::new(13, 12.525).unwrap();
        let mut rng = SubStream::new(50, 0, StreamTag::Generic);
        let n = 1_000_000;
        let mut samples = Vec::with_capacity(n);
        for _ in 0..n {
            let mut acc = 0.0;
            for _ in 0..13 {
                acc -= (1.0 - rng.next_f64()).ln();
            }
            samples.push(12.525 * acc);
        }
        let h = histogram_density(&samples, 100).unwrap();
        let mut worst = 0.0f64;
        for (i, &center) in h.bin_centers().iter().enumerate() {
            worst = worst.max((h.densities[i] - gamma_pdf(center, &gp)).abs());
        }
        assert!(worst < 0.002, "worst density deviation {worst}");
    }

    #[test]
    fn histogram_degenerate_single_bin() {
        let h = histogram_density(&[2.0; 50], 10).unwrap();
        assert_eq!(h.densities, vec![1.0]);
        assert_eq!(h.bin_edges, vec![1.5, 2.5]);
    }

    #[test]
    fn confidence_interval_cases() {
        let e = mean_confidence_interval(&[3.0; 100], 0.95).unwrap();
        assert_eq!(e.mean, 3.0);
        assert_eq!(e.std_err, 0.0);
        assert_eq!(e.ci_low, e.ci_high);

        let mut rng = SubStream::new(48, 0, StreamTag::Generic);
        let n = 10_000;
        let samples: Vec<f64> = (0..n / 2)
            .flat_map(|_| {
                let (a, b) = rng.next_normal_pair();
                [a, b]
            })
            .collect();
        let e = mean_confidence_interval(&samples, 0.95).unwrap();
        let width = e.ci_high - e.ci_low;
        // 2 * 1.96 / sqrt(10^4) = 0.0392, and sample std fluctuates ~1%
        assert!((width - 0.0392).abs() < 0.002, "width {width}");
        assert!(e.ci_low <= e.mean && e.mean <= e.ci_high);
        assert!(mean_confidence_interval(&[1.0], 0.95).is_err());
    }

    #[test]
    fn confidence_interval_coverage() {
        // ~95% of intervals over repeated draws should contain the true mean
        let mut covered = 0;
        let reps = 1000;
        for rep in 0..reps {
            let mut rng = SubStream::new(49, rep, StreamTag::Generic);
            let samples: Vec<f64> = (0..500)
                .flat_map(|_| {
                    let (a, b) = rng.next_normal_pair();
                    [a, b]
                })
                .collect();
            let e = mean_confidence_interval(&samples, 0.95).unwrap();
            if e.ci_low <= 0.0 && 0.0 <= e.ci_high {
                covered += 1;
            }
        }
        let rate = covered as f64 / reps as f64;
        // binomial 3 sigma around 0.95 at 1000 reps is about +/- 0.021
        assert!((rate - 0.95).abs() < 0.025, "coverage {rate}");
    }

    #[test]
    fn normal_cdf_and_quantile_agree() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-12);
        assert!((normal_cdf(-1.959963984540054) - 0.025).abs() < 1e-12);
        for &p in &[0.001, 0.025, 0.3, 0.5, 0.7, 0.975, 0.999] {
            let z = normal_quantile(p).unwrap();
            assert!((normal_cdf(z) - p).abs() < 1e-8, "roundtrip at {p}");
        }
        assert!((normal_quantile(0.975).unwrap() - 1.9599639845400545).abs() < 1e-7);
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
    }
}
