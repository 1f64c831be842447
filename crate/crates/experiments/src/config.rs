use std::collections::BTreeMap;
use std::path::PathBuf;

use qaoa_mps::{EdgeOrder, ObjectiveBackend, OptimizerConfig};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Optimizer settings shared by every sample; the per-sample seed is derived.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSettings {
    pub tol: f64,
    pub rhobeg: f64,
    pub max_evals: usize,
    pub restarts: usize,
    pub backend: ObjectiveBackend,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        let d = OptimizerConfig::default();
        OptimizerSettings { tol: d.tol, rhobeg: d.rhobeg, max_evals: d.max_evals, restarts: d.restarts, backend: d.backend }
    }
}

/// One experiment campaign. Loaded from JSON; every field has a default.
///
/// ```json
/// { "n_list": [8, 10], "chi_list": { "8": [2, 4] }, "samples": 100, "p": 1,
///   "seed": 0, "opt_seed": 0, "jobs": 1, "unnormalized_ee": false,
///   "edge_order": { "kind": "lexicographic" },
///   "optimizer": { "tol": 1e-13, "rhobeg": 1.0, "max_evals": 1000, "restarts": 1, "backend": "statevector" },
///   "out_dir": "results" }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Qubit counts (even).
    pub n_list: Vec<usize>,
    /// Bond-dimension caps per qubit count; missing entries default to
    /// `{2, 4, …, 2^(N/2)}`.
    pub chi_list: BTreeMap<usize, Vec<usize>>,
    pub samples: usize,
    pub p: usize,
    /// Instance (edge weight) seed.
    pub seed: u64,
    /// Optimizer starting-point seed.
    pub opt_seed: u64,
    pub optimizer: OptimizerSettings,
    pub edge_order: EdgeOrder,
    /// Also report entropies of the truncated spectra without renormalization.
    pub unnormalized_ee: bool,
    pub jobs: usize,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_list: vec![8],
            chi_list: BTreeMap::new(),
            samples: 100,
            p: 1,
            seed: 0,
            opt_seed: 0,
            optimizer: OptimizerSettings::default(),
            edge_order: EdgeOrder::Lexicographic,
            unnormalized_ee: false,
            jobs: 1,
            out_dir: None,
        }
    }
}

/// Largest qubit count accepted by the campaign runner.
pub const MAX_QUBITS: usize = 20;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError::new("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_list.is_empty() {
            return Err(ConfigError::new("n_list", "at least one qubit count is required"));
        }
        for &n in &self.n_list {
            if n < 4 || n % 2 != 0 || n > MAX_QUBITS {
                return Err(ConfigError::new("n_list", format!("N = {n} must be even and between 4 and {MAX_QUBITS}")));
            }
        }
        for (&n, chis) in &self.chi_list {
            if !self.n_list.contains(&n) {
                return Err(ConfigError::new(format!("chi_list.{n}"), "no such N in n_list"));
            }
            if chis.is_empty() {
                return Err(ConfigError::new(format!("chi_list.{n}"), "empty bond-dimension list"));
            }
            let full = 1usize << (n / 2);
            for &chi in chis {
                if chi < 2 || chi > full {
                    return Err(ConfigError::new(
                        format!("chi_list.{n}"),
                        format!("chi = {chi} must lie in [2, 2^(N/2) = {full}]"),
                    ));
                }
            }
        }
        if self.samples == 0 {
            return Err(ConfigError::new("samples", "must be at least 1"));
        }
        if self.p == 0 {
            return Err(ConfigError::new("p", "must be at least 1"));
        }
        if self.jobs == 0 {
            return Err(ConfigError::new("jobs", "must be at least 1"));
        }
        let o = &self.optimizer;
        if !(o.tol > 0.0 && o.tol.is_finite()) {
            return Err(ConfigError::new("optimizer.tol", "must be positive and finite"));
        }
        if !(o.rhobeg > 0.0 && o.rhobeg.is_finite()) {
            return Err(ConfigError::new("optimizer.rhobeg", "must be positive and finite"));
        }
        if o.max_evals == 0 {
            return Err(ConfigError::new("optimizer.max_evals", "must be at least 1"));
        }
        if o.restarts == 0 {
            return Err(ConfigError::new("optimizer.restarts", "must be at least 1"));
        }
        Ok(())
    }

    /// Bond-dimension caps used for `n`, sorted and deduplicated.
    pub fn chi_grid(&self, n: usize) -> Vec<usize> {
        let mut chis = self.chi_list.get(&n).cloned().unwrap_or_else(|| default_chi_grid(n));
        chis.sort_unstable();
        chis.dedup();
        chis
    }

    /// True for depths other than one, which the reference halves and alpha figures assume.
    pub fn off_protocol(&self) -> bool {
        self.p != 1
    }

    /// Optimizer configuration for one sample.
    pub fn optimizer_config(&self, opt_seed: u64) -> OptimizerConfig {
        let o = &self.optimizer;
        OptimizerConfig {
            tol: o.tol,
            rhobeg: o.rhobeg,
            max_evals: o.max_evals,
            restarts: o.restarts,
            seed: opt_seed,
            backend: o.backend,
            edge_order: self.edge_order.clone(),
        }
    }
}

/// `{2, 4, …, 2^(n/2)}`.
pub fn default_chi_grid(n: usize) -> Vec<usize> {
    (1..=n / 2).map(|k| 1usize << k).collect()
}

/// Mixes a base seed with the qubit count and sample index.
pub fn sample_seed(base: u64, n: usize, sample: usize) -> u64 {
    let mut x = base;
    for word in [n as u64, sample as u64] {
        x = splitmix64(x ^ splitmix64(word));
    }
    x
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default().validate().unwrap();
        assert_eq!(default_chi_grid(8), vec![2, 4, 8, 16]);
    }

    #[test]
    fn field_level_errors() {
        let cfg = ExperimentConfig { n_list: vec![8], chi_list: [(8, vec![32])].into(), ..Default::default() };
        let e = cfg.validate().unwrap_err();
        assert_eq!(e.field, "chi_list.8");
        let e = ExperimentConfig { n_list: vec![7], ..Default::default() }.validate().unwrap_err();
        assert_eq!(e.field, "n_list");
        let e = ExperimentConfig { samples: 0, ..Default::default() }.validate().unwrap_err();
        assert_eq!(e.field, "samples");
        let e = ExperimentConfig::from_json(r#"{"samples": 3, "bogus": 1}"#).unwrap_err();
        assert!(e.message.contains("bogus"));
    }

    #[test]
    fn json_round_trip() {
        let cfg = ExperimentConfig { n_list: vec![6, 8], chi_list: [(6, vec![2, 8])].into(), samples: 7, ..Default::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn sample_seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for n in [6, 8, 10] {
            for k in 0..200 {
                assert!(seen.insert(sample_seed(0, n, k)));
            }
        }
        assert_ne!(sample_seed(0, 8, 1), sample_seed(1, 8, 1));
    }
}
