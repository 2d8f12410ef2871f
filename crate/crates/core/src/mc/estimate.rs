use crate::error::{Error, Result};

/// Mergeable Monte-Carlo estimator: mean, standard error, and a
/// normal-approximation confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl MonteCarloEstimate {
    /// Reduce per-trial values (in trial-index order) to an estimate.
    ///
    /// Two sequential passes keep the reduction independent of worker count
    /// and batch size: the values arrive indexed by trial, and the folds
    /// below always run in that order.
    pub fn from_values(values: &[f64], confidence: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Config(format!(
                "estimator needs at least two values, got {}",
                values.len()
            )));
        }
        if !(confidence > 0.0 && confidence < 1.0) {
            return Err(Error::Config(format!(
                "confidence must be in (0,1), got {confidence}"
            )));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
        let std_err = (ss / (n - 1.0) / n).sqrt();
        let z = crate::stats::normal_quantile(0.5 + confidence / 2.0)?;
        Ok(MonteCarloEstimate {
            mean,
            std_err,
            n: values.len() as u64,
            ci_low: mean - z * std_err,
            ci_high: mean + z * std_err,
        })
    }

    /// |mean - reference| measured in standard errors.
    pub fn z_score(&self, reference: f64) -> f64 {
        if self.std_err == 0.0 {
            if self.mean == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - reference).abs() / self.std_err
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values_have_zero_width() {
        let e = MonteCarloEstimate::from_values(&[2.5; 10], 0.95).unwrap();
        assert_eq!(e.mean, 2.5);
        assert_eq!(e.std_err, 0.0);
        assert_eq!(e.ci_low, 2.5);
        assert_eq!(e.ci_high, 2.5);
        assert_eq!(e.n, 10);
    }

    #[test]
    fn simple_two_point_case() {
        let e = MonteCarloEstimate::from_values(&[0.0, 1.0], 0.95).unwrap();
        assert_eq!(e.mean, 0.5);
        // sample std = 1/sqrt(2), std_err = 0.5
        assert!((e.std_err - 0.5).abs() < 1e-15);
        assert!(e.ci_low <= e.mean && e.mean <= e.ci_high);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(MonteCarloEstimate::from_values(&[1.0], 0.95).is_err());
        assert!(MonteCarloEstimate::from_values(&[1.0, 2.0], 1.0).is_err());
    }
}
