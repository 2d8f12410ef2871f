//! Flat key=value run configuration with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use efas_core::cxmat::C64;
use efas_core::surface::SwGainNormalization;
use efas_core::{Error, Result};

use crate::args::Cli;

/// Fully resolved run configuration (defaults <- file <- flags).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    /// Single-user trial count; multiuser operations use a tenth of it
    /// (at least 1000).
    pub trials: u64,
    pub workers: usize,
    pub confidence: f64,
    pub out_dir: PathBuf,

    pub m: usize,
    pub k: usize,
    pub sigma2: f64,
    pub r0: f64,
    pub beta_dl: f64,
    pub snr_db_grid: Vec<f64>,
    pub omega_sw_grid: Vec<f64>,
    /// Operating surface-wave gain for the single-point figures.
    pub omega_sw_fixed: f64,
    /// Operating SNR for the SINR-distribution figure.
    pub snr_db_fixed: f64,
    /// Operating SNR for the sum-rate sweep over antenna counts.
    pub sumrate_snr_db_fixed: f64,
    pub k_grid: Vec<usize>,
    pub m_grid: Vec<usize>,
    pub normalization: SwGainNormalization,

    // physical-omega pipeline
    pub phys_z_sur: C64,
    pub phys_freq_ghz: f64,
    pub phys_a0: C64,
    pub phys_d_grid: Vec<f64>,
    pub phys_ports: usize,
    pub phys_alpha_r: C64,
    pub phys_beta_bs: f64,
    pub phys_beta_lu: f64,
    pub phys_beta_dl: f64,
    pub phys_sigma_r2: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            trials: 1_000_000,
            workers: 0,
            confidence: 0.95,
            out_dir: PathBuf::from("out"),
            m: 16,
            k: 4,
            sigma2: 1.0,
            r0: 1.0,
            beta_dl: 0.01,
            snr_db_grid: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            omega_sw_grid: vec![0.0, 1.0, 5.0, 10.0],
            omega_sw_fixed: 5.0,
            snr_db_fixed: 10.0,
            sumrate_snr_db_fixed: 5.0,
            k_grid: (1..=16).collect(),
            m_grid: vec![16, 20, 24, 28],
            normalization: SwGainNormalization::Total,
            phys_z_sur: C64::new(100.0, 100.0),
            phys_freq_ghz: 30.0,
            phys_a0: C64::new(1.0, 0.0),
            phys_d_grid: (0..=10).map(|i| i as f64 * 0.5).collect(),
            phys_ports: 8,
            phys_alpha_r: C64::new(1.0, 0.0),
            phys_beta_bs: 1.0,
            phys_beta_lu: 1.0,
            phys_beta_dl: 0.01,
            phys_sigma_r2: 0.01,
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "seed",
    "trials",
    "workers",
    "confidence",
    "out_dir",
    "m",
    "k",
    "sigma2",
    "r0",
    "beta_dl",
    "snr_db",
    "omega_sw",
    "omega_sw_fixed",
    "snr_db_fixed",
    "sumrate_snr_db_fixed",
    "k_grid",
    "m_grid",
    "normalization",
    "phys_z_sur",
    "phys_freq_ghz",
    "phys_a0",
    "phys_d",
    "phys_ports",
    "phys_alpha_r",
    "phys_beta_bs",
    "phys_beta_lu",
    "phys_beta_dl",
    "phys_sigma_r2",
];

fn parse_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "{}:{}: unknown key {key:?}",
                path.display(),
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str, into: &mut T) -> Result<()> {
    if let Some(raw) = map.get(key) {
        *into = raw
            .parse()
            .map_err(|_| Error::Config(format!("bad value for {key}: {raw:?}")))?;
    }
    Ok(())
}

fn parse_list_f64(map: &BTreeMap<String, String>, key: &str, into: &mut Vec<f64>) -> Result<()> {
    if let Some(raw) = map.get(key) {
        *into = raw
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Config(format!("bad list for {key}: {raw:?}")))?;
        if into.is_empty() {
            return Err(Error::Config(format!("{key} must not be empty")));
        }
    }
    Ok(())
}

fn parse_list_usize(map: &BTreeMap<String, String>, key: &str, into: &mut Vec<usize>) -> Result<()> {
    if let Some(raw) = map.get(key) {
        *into = raw
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Config(format!("bad list for {key}: {raw:?}")))?;
        if into.is_empty() {
            return Err(Error::Config(format!("{key} must not be empty")));
        }
    }
    Ok(())
}

fn parse_complex(map: &BTreeMap<String, String>, key: &str, into: &mut C64) -> Result<()> {
    if let Some(raw) = map.get(key) {
        let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::Config(format!("{key} expects re,im — got {raw:?}")));
        }
        let re = parts[0]
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad real part for {key}: {raw:?}")))?;
        let im = parts[1]
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad imaginary part for {key}: {raw:?}")))?;
        *into = C64::new(re, im);
    }
    Ok(())
}

impl RunConfig {
    /// Defaults, overridden by the config file, overridden by flags.
    pub fn resolve(cli: &Cli) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &cli.config {
            let map = parse_file(path)?;
            parse(&map, "seed", &mut cfg.seed)?;
            parse(&map, "trials", &mut cfg.trials)?;
            parse(&map, "workers", &mut cfg.workers)?;
            parse(&map, "confidence", &mut cfg.confidence)?;
            if let Some(dir) = map.get("out_dir") {
                cfg.out_dir = PathBuf::from(dir);
            }
            parse(&map, "m", &mut cfg.m)?;
            parse(&map, "k", &mut cfg.k)?;
            parse(&map, "sigma2", &mut cfg.sigma2)?;
            parse(&map, "r0", &mut cfg.r0)?;
            parse(&map, "beta_dl", &mut cfg.beta_dl)?;
            parse_list_f64(&map, "snr_db", &mut cfg.snr_db_grid)?;
            parse_list_f64(&map, "omega_sw", &mut cfg.omega_sw_grid)?;
            parse(&map, "omega_sw_fixed", &mut cfg.omega_sw_fixed)?;
            parse(&map, "snr_db_fixed", &mut cfg.snr_db_fixed)?;
            parse(&map, "sumrate_snr_db_fixed", &mut cfg.sumrate_snr_db_fixed)?;
            parse_list_usize(&map, "k_grid", &mut cfg.k_grid)?;
            parse_list_usize(&map, "m_grid", &mut cfg.m_grid)?;
            if let Some(raw) = map.get("normalization") {
                cfg.normalization = match raw.as_str() {
                    "total" => SwGainNormalization::Total,
                    "antenna-averaged" => SwGainNormalization::AntennaAveraged,
                    _ => {
                        return Err(Error::Config(format!(
                            "normalization must be 'total' or 'antenna-averaged', got {raw:?}"
                        )))
                    }
                };
            }
            parse_complex(&map, "phys_z_sur", &mut cfg.phys_z_sur)?;
            parse(&map, "phys_freq_ghz", &mut cfg.phys_freq_ghz)?;
            parse_complex(&map, "phys_a0", &mut cfg.phys_a0)?;
            parse_list_f64(&map, "phys_d", &mut cfg.phys_d_grid)?;
            parse(&map, "phys_ports", &mut cfg.phys_ports)?;
            parse_complex(&map, "phys_alpha_r", &mut cfg.phys_alpha_r)?;
            parse(&map, "phys_beta_bs", &mut cfg.phys_beta_bs)?;
            parse(&map, "phys_beta_lu", &mut cfg.phys_beta_lu)?;
            parse(&map, "phys_beta_dl", &mut cfg.phys_beta_dl)?;
            parse(&map, "phys_sigma_r2", &mut cfg.phys_sigma_r2)?;
        }
        if let Some(seed) = cli.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = cli.trials {
            cfg.trials = trials;
        }
        if let Some(workers) = cli.workers {
            cfg.workers = workers;
        }
        if let Some(confidence) = cli.confidence {
            cfg.confidence = confidence;
        }
        if let Some(out) = &cli.out {
            cfg.out_dir = out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 2 {
            return Err(Error::Config("trials must be at least 2".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Config(format!(
                "confidence must be in (0,1), got {}",
                self.confidence
            )));
        }
        if self.m == 0 || self.k == 0 {
            return Err(Error::Config("m and k must be positive".into()));
        }
        if self.sigma2 <= 0.0 || self.sigma2.is_nan() || self.r0 <= 0.0 || self.r0.is_nan() || self.beta_dl < 0.0 {
            return Err(Error::Config(
                "need sigma2 > 0, r0 > 0, beta_dl >= 0".into(),
            ));
        }
        if self.omega_sw_grid.iter().any(|&o| o < 0.0) || self.omega_sw_fixed < 0.0 {
            return Err(Error::Config("omega_sw values must be nonnegative".into()));
        }
        if self.snr_db_grid.is_empty()
            || self.omega_sw_grid.is_empty()
            || self.k_grid.is_empty()
            || self.m_grid.is_empty()
            || self.phys_d_grid.is_empty()
        {
            return Err(Error::Config("grids must not be empty".into()));
        }
        if self.k_grid.contains(&0) || self.m_grid.contains(&0) {
            return Err(Error::Config("grid entries must be positive".into()));
        }
        if self.phys_d_grid.iter().any(|&d| d < 0.0) {
            return Err(Error::Config("path lengths must be nonnegative".into()));
        }
        if self.phys_ports == 0 {
            return Err(Error::Config("phys_ports must be positive".into()));
        }
        if self.phys_freq_ghz <= 0.0 || self.phys_freq_ghz.is_nan() {
            return Err(Error::Config("phys_freq_ghz must be positive".into()));
        }
        Ok(())
    }

    /// Multiuser trial count: a tenth of the single-user count, at least
    /// 1000.
    pub fn trials_multi(&self) -> u64 {
        (self.trials / 10).max(1000)
    }

    pub fn normalization_name(&self) -> &'static str {
        match self.normalization {
            SwGainNormalization::Total => "total",
            SwGainNormalization::AntennaAveraged => "antenna-averaged",
        }
    }

    /// dB to linear power ratio.
    pub fn snr_linear(snr_db: f64) -> f64 {
        10f64.powf(snr_db / 10.0)
    }

    /// One sorted `key=value` line with everything that affects results
    /// (worker count deliberately excluded: results are worker-independent).
    pub fn metadata_line(&self) -> String {
        fn join_f64(v: &[f64]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        fn join_usize(v: &[usize]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        let pairs: Vec<(String, String)> = vec![
            ("beta_dl".into(), self.beta_dl.to_string()),
            ("confidence".into(), self.confidence.to_string()),
            ("k".into(), self.k.to_string()),
            ("k_grid".into(), join_usize(&self.k_grid)),
            ("m".into(), self.m.to_string()),
            ("m_grid".into(), join_usize(&self.m_grid)),
            ("normalization".into(), self.normalization_name().into()),
            ("omega_sw".into(), join_f64(&self.omega_sw_grid)),
            ("omega_sw_fixed".into(), self.omega_sw_fixed.to_string()),
            (
                "phys_a0".into(),
                format!("{},{}", self.phys_a0.re, self.phys_a0.im),
            ),
            (
                "phys_alpha_r".into(),
                format!("{},{}", self.phys_alpha_r.re, self.phys_alpha_r.im),
            ),
            ("phys_beta_bs".into(), self.phys_beta_bs.to_string()),
            ("phys_beta_dl".into(), self.phys_beta_dl.to_string()),
            ("phys_beta_lu".into(), self.phys_beta_lu.to_string()),
            ("phys_d".into(), join_f64(&self.phys_d_grid)),
            ("phys_freq_ghz".into(), self.phys_freq_ghz.to_string()),
            ("phys_ports".into(), self.phys_ports.to_string()),
            ("phys_sigma_r2".into(), self.phys_sigma_r2.to_string()),
            (
                "phys_z_sur".into(),
                format!("{},{}", self.phys_z_sur.re, self.phys_z_sur.im),
            ),
            ("r0".into(), self.r0.to_string()),
            ("sigma2".into(), self.sigma2.to_string()),
            ("snr_db".into(), join_f64(&self.snr_db_grid)),
            ("snr_db_fixed".into(), self.snr_db_fixed.to_string()),
            (
                "sumrate_snr_db_fixed".into(),
                self.sumrate_snr_db_fixed.to_string(),
            ),
            ("trials".into(), self.trials.to_string()),
        ];
        pairs
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Command;
    use clap::Parser;

    fn cli(extra: &[&str]) -> Cli {
        let mut argv = vec!["efas-sim"];
        argv.extend_from_slice(extra);
        argv.push("validate");
        Cli::parse_from(argv)
    }

    #[test]
    fn defaults_resolve() {
        let cfg = RunConfig::resolve(&cli(&[])).unwrap();
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.m, 16);
        assert_eq!(cfg.snr_db_grid.len(), 7);
        assert_eq!(cfg.omega_sw_grid.len(), 4);
        assert_eq!(cfg.trials_multi(), 100_000);
        assert!(matches!(cli(&[]).command, Command::Validate));
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("efas-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("a.cfg");
        std::fs::write(&path, "seed=7\ntrials=5000\nm=8\n# comment\nomega_sw = 1,2\n").unwrap();
        let path_s = path.to_str().unwrap().to_string();
        let cfg = RunConfig::resolve(&cli(&["--config", &path_s, "--seed", "9"])).unwrap();
        assert_eq!(cfg.seed, 9); // flag wins
        assert_eq!(cfg.trials, 5000);
        assert_eq!(cfg.m, 8);
        assert_eq!(cfg.omega_sw_grid, vec![1.0, 2.0]);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn unknown_key_rejected() {
        let dir = std::env::temp_dir().join(format!("efas-cfg-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.cfg");
        std::fs::write(&path, "sneaky=1\n").unwrap();
        let path_s = path.to_str().unwrap().to_string();
        assert!(RunConfig::resolve(&cli(&["--config", &path_s])).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn metadata_is_stable() {
        let cfg = RunConfig::resolve(&cli(&[])).unwrap();
        let a = cfg.metadata_line();
        let b = cfg.metadata_line();
        assert_eq!(a, b);
        assert!(a.contains("m=16"));
        assert!(!a.contains("workers"), "workers must not enter output metadata");
    }
}
