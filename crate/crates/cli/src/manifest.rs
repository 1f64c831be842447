use std::fs;
use std::path::Path;

use qaoa_mps_experiments::ExperimentConfig;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStatus {
    Pending,
    Done,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleEntry {
    pub n: usize,
    pub sample: usize,
    pub status: SampleStatus,
    /// Raw archive, relative to the output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archive: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Record of one `run` invocation, stored next to its outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub code_version: String,
    pub config: ExperimentConfig,
    pub off_protocol: bool,
    pub samples: Vec<SampleEntry>,
    /// Result files, relative to the output directory.
    pub outputs: Vec<String>,
    pub simulated: usize,
    pub reused: usize,
}

impl RunManifest {
    pub fn new(experiment: &str, config: &ExperimentConfig) -> Self {
        let mut ns = config.n_list.clone();
        ns.sort_unstable();
        ns.dedup();
        let samples = ns
            .iter()
            .flat_map(|&n| {
                (0..config.samples).map(move |sample| SampleEntry {
                    n,
                    sample,
                    status: SampleStatus::Pending,
                    archive: None,
                    error: None,
                })
            })
            .collect();
        RunManifest {
            experiment: experiment.into(),
            code_version: env!("CARGO_PKG_VERSION").into(),
            config: config.clone(),
            off_protocol: config.off_protocol(),
            samples,
            outputs: Vec::new(),
            simulated: 0,
            reused: 0,
        }
    }

    #[cfg(test)]
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<(), String> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text + "\n").map_err(|e| format!("{}: {e}", tmp.display()))?;
        fs::rename(&tmp, path).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn failed(&self) -> usize {
        self.samples.iter().filter(|s| s.status == SampleStatus::Failed).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig { n_list: vec![8, 6], samples: 2, ..Default::default() };
        let mut m = RunManifest::new("halves", &cfg);
        m.samples[1].status = SampleStatus::Failed;
        m.samples[1].error = Some("boom".into());
        m.samples[0].status = SampleStatus::Done;
        m.samples[0].archive = Some("raw/N6/sample_0000.jsonl".into());
        m.outputs.push("halves/halves.csv".into());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        m.save(&path).unwrap();
        assert_eq!(RunManifest::load(&path).unwrap(), m);
        assert_eq!(m.samples.len(), 4);
        assert_eq!((m.samples[0].n, m.samples[2].n), (6, 8));
        assert_eq!(m.failed(), 1);
    }
}
