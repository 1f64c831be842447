//! Per-sample simulation and the campaign runner.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use qaoa_mps::{
    build_qaoa_circuit, energy_expectation, generate_complete_graph, optimize, run_circuit, EdgeOrder, EeSnapshot64,
    MpsState64, QaoaParams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{sample_seed, ExperimentConfig};
use crate::error::{ExperimentError, Result};

/// Snapshot stream and final energy of one circuit execution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// `None` for the untruncated run.
    pub chi: Option<usize>,
    pub snapshots: Vec<EeSnapshot64>,
    pub final_energy: f64,
}

impl RunRecord {
    /// Sum over snapshots of the per-snapshot bond-entropy sums.
    pub fn space_time_sum(&self, unnormalized: bool) -> f64 {
        self.snapshots
            .iter()
            .map(|s| if unnormalized { s.unnormalized_space_sum() } else { s.space_sum })
            .sum()
    }

    pub fn space_sums(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.space_sum).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiEnergy {
    pub chi: usize,
    pub energy: f64,
}

/// Everything the aggregators need from one random instance.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleOutcome {
    pub n: usize,
    pub sample: usize,
    pub instance_seed: u64,
    pub opt_seed: u64,
    pub params: QaoaParams,
    pub optimized_energy: f64,
    pub initial_energy: f64,
    pub converged: bool,
    pub evaluations: usize,
    pub untruncated: RunRecord,
    /// One evolve-with-cap run per χ, ascending.
    pub truncated: Vec<RunRecord>,
    /// Energy of the untruncated final state compressed to each χ, ascending.
    pub compressed: Vec<ChiEnergy>,
}

impl SampleOutcome {
    pub fn truncated(&self, chi: usize) -> Option<&RunRecord> {
        self.truncated.iter().find(|r| r.chi == Some(chi))
    }

    pub fn compressed_energy(&self, chi: usize) -> Option<f64> {
        self.compressed.iter().find(|c| c.chi == chi).map(|c| c.energy)
    }
}

/// Optimizes one instance, then runs the circuit untruncated and once per χ.
pub fn simulate_sample(config: &ExperimentConfig, n: usize, sample: usize) -> Result<SampleOutcome> {
    let instance_seed = sample_seed(config.seed, n, sample);
    let opt_seed = sample_seed(config.opt_seed, n, sample);
    let graph = generate_complete_graph(n, instance_seed)?;
    let opt = optimize(&graph, config.p, &config.optimizer_config(opt_seed))?;
    let circuit = build_qaoa_circuit(&graph, &opt.params, &config.edge_order);

    let (final_state, snapshots) = run_circuit(MpsState64::plus_state(n)?, &circuit, None, true)?;
    let untruncated = RunRecord { chi: None, snapshots, final_energy: energy_expectation(&final_state, &graph)? };

    let mut truncated = Vec::new();
    let mut compressed = Vec::new();
    for chi in config.chi_grid(n) {
        let (state, snapshots) = run_circuit(MpsState64::plus_state(n)?, &circuit, Some(chi), true)?;
        truncated.push(RunRecord { chi: Some(chi), snapshots, final_energy: energy_expectation(&state, &graph)? });
        let energy = energy_expectation(&final_state.compress(chi)?, &graph)?;
        compressed.push(ChiEnergy { chi, energy });
    }

    Ok(SampleOutcome {
        n,
        sample,
        instance_seed,
        opt_seed,
        params: opt.params,
        optimized_energy: opt.energy,
        initial_energy: opt.initial_energy,
        converged: opt.converged,
        evaluations: opt.trace.len(),
        untruncated,
        truncated,
        compressed,
    })
}

/// How bond entropies are stored in raw archives.
pub const NORMALIZATION: &str =
    "bond_entropies use renormalized spectra; unnormalized entropy = w*(S - log2 w) with w = retained_weight";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveHeader {
    pub n: usize,
    pub sample: usize,
    pub instance_seed: u64,
    pub opt_seed: u64,
    pub seed: u64,
    pub base_opt_seed: u64,
    pub p: usize,
    pub off_protocol: bool,
    pub params: QaoaParams,
    pub edge_order: EdgeOrder,
    pub normalization: String,
    pub optimized_energy: f64,
    pub initial_energy: f64,
    pub converged: bool,
    pub evaluations: usize,
    pub untruncated_energy: f64,
    pub truncated_energies: Vec<ChiEnergy>,
    pub compressed_energies: Vec<ChiEnergy>,
    pub fingerprint: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveSnapshot {
    pub chi: Option<usize>,
    pub snapshot_id: usize,
    pub bond_entropies: Vec<f64>,
    pub bond_dims: Vec<usize>,
    pub retained_weight: f64,
}

/// One line of a raw archive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum ArchiveLine {
    Header(ArchiveHeader),
    Snapshot(ArchiveSnapshot),
}

/// Identifies every input that changes a sample's result.
pub fn fingerprint(config: &ExperimentConfig, n: usize, sample: usize) -> String {
    serde_json::json!({
        "n": n,
        "sample": sample,
        "seed": config.seed,
        "opt_seed": config.opt_seed,
        "p": config.p,
        "optimizer": config.optimizer,
        "edge_order": config.edge_order,
        "chi_grid": config.chi_grid(n),
    })
    .to_string()
}

pub fn archive_path(dir: &Path, n: usize, sample: usize) -> PathBuf {
    dir.join(format!("N{n}")).join(format!("sample_{sample:04}.jsonl"))
}

pub fn write_archive(path: &Path, config: &ExperimentConfig, s: &SampleOutcome) -> Result<()> {
    let header = ArchiveHeader {
        n: s.n,
        sample: s.sample,
        instance_seed: s.instance_seed,
        opt_seed: s.opt_seed,
        seed: config.seed,
        base_opt_seed: config.opt_seed,
        p: config.p,
        off_protocol: config.off_protocol(),
        params: s.params.clone(),
        edge_order: config.edge_order.clone(),
        normalization: NORMALIZATION.into(),
        optimized_energy: s.optimized_energy,
        initial_energy: s.initial_energy,
        converged: s.converged,
        evaluations: s.evaluations,
        untruncated_energy: s.untruncated.final_energy,
        truncated_energies: s
            .truncated
            .iter()
            .map(|r| ChiEnergy { chi: r.chi.expect("truncated run has a cap"), energy: r.final_energy })
            .collect(),
        compressed_energies: s.compressed.clone(),
        fingerprint: fingerprint(config, s.n, s.sample),
    };
    let mut text = serde_json::to_string(&ArchiveLine::Header(header)).expect("header serializes");
    text.push('\n');
    for run in std::iter::once(&s.untruncated).chain(&s.truncated) {
        for snap in &run.snapshots {
            let line = ArchiveLine::Snapshot(ArchiveSnapshot {
                chi: run.chi,
                snapshot_id: snap.snapshot_id,
                bond_entropies: snap.bond_entropies.clone(),
                bond_dims: snap.bond_dims.clone(),
                retained_weight: snap.retained_weight,
            });
            text.push_str(&serde_json::to_string(&line).expect("snapshot serializes"));
            text.push('\n');
        }
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
    }
    let tmp = path.with_extension("jsonl.tmp");
    let mut file = fs::File::create(&tmp).map_err(|e| ExperimentError::io(&tmp, e))?;
    file.write_all(text.as_bytes()).map_err(|e| ExperimentError::io(&tmp, e))?;
    file.sync_all().map_err(|e| ExperimentError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| ExperimentError::io(path, e))
}

/// Parses a raw archive back into the header and the sample it describes.
pub fn read_archive(path: &Path) -> Result<(ArchiveHeader, SampleOutcome)> {
    let file = fs::File::open(path).map_err(|e| ExperimentError::io(path, e))?;
    let mut header: Option<ArchiveHeader> = None;
    let mut runs: BTreeMap<Option<usize>, Vec<EeSnapshot64>> = BTreeMap::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| ExperimentError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: ArchiveLine =
            serde_json::from_str(&line).map_err(|e| ExperimentError::format(path, format!("line {}: {e}", lineno + 1)))?;
        match (parsed, &header) {
            (ArchiveLine::Header(h), None) if lineno == 0 => header = Some(h),
            (ArchiveLine::Snapshot(s), Some(_)) => {
                if s.bond_entropies.len() != s.bond_dims.len() {
                    return Err(ExperimentError::format(path, format!("line {}: ragged snapshot", lineno + 1)));
                }
                runs.entry(s.chi).or_default().push(EeSnapshot64::new(
                    s.snapshot_id,
                    s.bond_entropies,
                    s.bond_dims,
                    s.retained_weight,
                ));
            }
            _ => return Err(ExperimentError::format(path, format!("line {}: expected header first", lineno + 1))),
        }
    }
    let header = header.ok_or_else(|| ExperimentError::format(path, "empty archive"))?;
    let untruncated = RunRecord {
        chi: None,
        snapshots: runs.remove(&None).unwrap_or_default(),
        final_energy: header.untruncated_energy,
    };
    let mut truncated = Vec::new();
    for te in &header.truncated_energies {
        let snapshots = runs
            .remove(&Some(te.chi))
            .ok_or_else(|| ExperimentError::format(path, format!("no snapshots for chi = {}", te.chi)))?;
        truncated.push(RunRecord { chi: Some(te.chi), snapshots, final_energy: te.energy });
    }
    if let Some((chi, _)) = runs.into_iter().next() {
        return Err(ExperimentError::format(path, format!("snapshots for unlisted chi {chi:?}")));
    }
    let outcome = SampleOutcome {
        n: header.n,
        sample: header.sample,
        instance_seed: header.instance_seed,
        opt_seed: header.opt_seed,
        params: header.params.clone(),
        optimized_energy: header.optimized_energy,
        initial_energy: header.initial_energy,
        converged: header.converged,
        evaluations: header.evaluations,
        untruncated,
        truncated,
        compressed: header.compressed_energies.clone(),
    };
    Ok((header, outcome))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleFailure {
    pub n: usize,
    pub sample: usize,
    pub error: String,
}

/// All samples of a campaign, grouped by qubit count and sorted by sample id.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub config: ExperimentConfig,
    pub samples: BTreeMap<usize, Vec<SampleOutcome>>,
    pub failures: Vec<SampleFailure>,
    /// Archive file per `(N, sample)` when an archive directory was used.
    pub archives: BTreeMap<(usize, usize), PathBuf>,
    pub simulated: usize,
    pub reused: usize,
}

impl Campaign {
    pub fn samples(&self, n: usize) -> &[SampleOutcome] {
        self.samples.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn n_values(&self) -> impl Iterator<Item = usize> + '_ {
        self.samples.keys().copied()
    }
}

/// Runs (or, with an archive directory, resumes) every `(N, sample)` job.
/// Aggregation order is independent of `config.jobs`.
pub fn run_campaign(config: &ExperimentConfig, archive_dir: Option<&Path>) -> Result<Campaign> {
    config.validate()?;
    let ns: BTreeSet<usize> = config.n_list.iter().copied().collect();
    let tasks: Vec<(usize, usize)> = ns.iter().flat_map(|&n| (0..config.samples).map(move |k| (n, k))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| ExperimentError::Invalid(format!("cannot start worker pool: {e}")))?;

    let run_one = |&(n, k): &(usize, usize)| -> (Result<SampleOutcome>, bool) {
        let Some(dir) = archive_dir else {
            return (simulate_sample(config, n, k), false);
        };
        let path = archive_path(dir, n, k);
        if let Ok((header, outcome)) = read_archive(&path) {
            if header.fingerprint == fingerprint(config, n, k) {
                return (Ok(outcome), true);
            }
        }
        let result = simulate_sample(config, n, k).and_then(|s| write_archive(&path, config, &s).map(|_| s));
        (result, false)
    };
    let results: Vec<(Result<SampleOutcome>, bool)> = pool.install(|| tasks.par_iter().map(run_one).collect());

    let mut campaign = Campaign {
        config: config.clone(),
        samples: ns.iter().map(|&n| (n, Vec::new())).collect(),
        failures: Vec::new(),
        archives: BTreeMap::new(),
        simulated: 0,
        reused: 0,
    };
    for (&(n, k), (result, reused)) in tasks.iter().zip(results) {
        if reused {
            campaign.reused += 1;
        } else {
            campaign.simulated += 1;
        }
        match result {
            Ok(s) => {
                if let Some(dir) = archive_dir {
                    campaign.archives.insert((n, k), archive_path(dir, n, k));
                }
                campaign.samples.get_mut(&n).expect("n registered").push(s);
            }
            Err(e) => campaign.failures.push(SampleFailure { n, sample: k, error: e.to_string() }),
        }
    }
    Ok(campaign)
}
