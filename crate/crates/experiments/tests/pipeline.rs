use std::collections::BTreeMap;
use std::fs;

use nalgebra::DMatrix;
use num_complex::Complex64;
use qaoa_mps::{build_qaoa_circuit, dense_run, generate_complete_graph, run_circuit, MpsState64};
use qaoa_mps_experiments::experiments::{ee_ratio, energy_ratio, single_bond_ratio};
use qaoa_mps_experiments::sample::{archive_path, read_archive};
use qaoa_mps_experiments::{
    ee_scaling_points, halves_reports, run_campaign, simulate_sample, split_index, time_series_reports,
    ExperimentConfig,
};

fn config(n: usize, chis: Vec<usize>, samples: usize) -> ExperimentConfig {
    ExperimentConfig { n_list: vec![n], chi_list: BTreeMap::from([(n, chis)]), samples, ..Default::default() }
}

fn central_entropy(amps: &[Complex64], n: usize) -> f64 {
    let half = 1usize << (n / 2);
    let m = DMatrix::from_fn(half, half, |r, c| amps[r * half + c]);
    m.singular_values().iter().map(|s| s * s).filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

/// Sums every `bond_entropies` entry of the archive by walking the raw JSON.
fn resum_archive(text: &str) -> BTreeMap<Option<u64>, f64> {
    let mut sums = BTreeMap::new();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if v["record"] != "snapshot" {
            continue;
        }
        let chi = v["chi"].as_u64();
        let total: f64 = v["bond_entropies"].as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).sum();
        *sums.entry(chi).or_insert(0.0) += total;
    }
    sums
}

#[test]
fn ratio_is_recovered_from_raw_archive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(6, vec![2], 2);
    let campaign = run_campaign(&cfg, Some(dir.path())).unwrap();
    let sample = &campaign.samples(6)[1];
    let pipeline = ee_ratio(sample, 2, false).unwrap();

    let text = fs::read_to_string(archive_path(dir.path(), 6, 1)).unwrap();
    let sums = resum_archive(&text);
    let recomputed = sums[&Some(2)] / sums[&None];
    assert!((pipeline - recomputed).abs() <= 1e-10, "{pipeline} vs {recomputed}");

    let (_, restored) = read_archive(&archive_path(dir.path(), 6, 1)).unwrap();
    assert_eq!(ee_ratio(&restored, 2, false).unwrap(), pipeline);
    assert_eq!(&restored, sample);
}

#[test]
fn single_bond_ratio_matches_dense_cut() {
    let cfg = config(8, vec![4], 1);
    let s = simulate_sample(&cfg, 8, 0).unwrap();
    let graph = generate_complete_graph(8, s.instance_seed).unwrap();
    let circuit = build_qaoa_circuit(&graph, &s.params, &cfg.edge_order);
    let exact = dense_run::<f64>(&circuit, 8).unwrap();
    let (capped, _) = run_circuit(MpsState64::plus_state(8).unwrap(), &circuit, Some(4), false).unwrap();
    let expected = central_entropy(&capped.to_amplitudes(), 8) / central_entropy(exact.amplitudes(), 8);
    let got = single_bond_ratio(&s, 4).unwrap();
    assert!((got - expected).abs() < 1e-6, "{got} vs {expected}");
}

#[test]
fn product_state_compression_energy_matches_dense() {
    // a cap of one is outside the configurable grid, so compress the final state directly
    let cfg = config(6, vec![8], 3);
    for k in 0..3 {
        let s = simulate_sample(&cfg, 6, k).unwrap();
        let graph = generate_complete_graph(6, s.instance_seed).unwrap();
        let circuit = build_qaoa_circuit(&graph, &s.params, &cfg.edge_order);
        let (state, _) = run_circuit(MpsState64::plus_state(6).unwrap(), &circuit, None, false).unwrap();
        let product = state.compress(1).unwrap();
        assert_eq!(product.bond_dims(), vec![1; 5]);
        let mps_energy = qaoa_mps::energy_expectation(&product, &graph).unwrap();
        let dense_product = qaoa_mps::DenseState64::from_amplitudes(6, product.to_amplitudes()).unwrap();
        let dense_exact = dense_run::<f64>(&circuit, 6).unwrap();
        let expected = qaoa_mps::dense_energy(&dense_product, &graph).unwrap()
            / qaoa_mps::dense_energy(&dense_exact, &graph).unwrap();
        let got = mps_energy / s.untruncated.final_energy;
        assert!((got - expected).abs() < 1e-6, "{got} vs {expected}");
        assert!((energy_ratio(&s, 8).unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn untruncated_cap_gives_exact_unit_ratios() {
    let cfg = config(6, vec![2, 8], 4);
    let campaign = run_campaign(&cfg, None).unwrap();
    for s in campaign.samples(6) {
        assert!((ee_ratio(s, 8, false).unwrap() - 1.0).abs() < 1e-9);
        assert!((energy_ratio(s, 8).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(single_bond_ratio(s, 8).unwrap(), 1.0);
        let r = ee_ratio(s, 2, false).unwrap();
        assert!(r > 0.0 && r <= 1.0 + 1e-9);
    }
    let points = ee_scaling_points(&campaign).unwrap();
    assert_eq!(points.len(), 2);
    assert!(points.iter().all(|p| p.x > 0.0 && p.x <= 1.0 && p.ratio_std >= 0.0));
}

#[test]
fn jobs_do_not_change_results() {
    let mut cfg = config(6, vec![2, 4], 4);
    let serial = run_campaign(&cfg, None).unwrap();
    cfg.jobs = 2;
    let parallel = run_campaign(&cfg, None).unwrap();
    assert_eq!(serial.samples, parallel.samples);
}

#[test]
fn time_series_stays_under_maximum() {
    let cfg = config(6, vec![2, 4], 3);
    let campaign = run_campaign(&cfg, None).unwrap();
    for ts in time_series_reports(&campaign).unwrap() {
        assert_eq!(ts.mean.len(), 30);
        assert!(ts.mean[0] <= 1.0 + 1e-12);
        assert!(ts.mean.iter().all(|&v| v <= ts.max_line + 1e-9));
        assert_eq!(ts.split_index, split_index(6, 1, ts.chi));
    }
    let halves = halves_reports(&campaign, false).unwrap();
    assert_eq!(halves[0].split_index, 15);
    assert!(halves[0].ratio_mean > 0.0);
}

#[test]
fn config_validation_names_fields() {
    let bad = [
        (r#"{"n_list": [7]}"#, "n_list"),
        (r#"{"n_list": [8], "chi_list": {"8": [1]}}"#, "chi_list.8"),
        (r#"{"n_list": [8], "chi_list": {"6": [2]}}"#, "chi_list.6"),
        (r#"{"samples": 0}"#, "samples"),
        (r#"{"p": 0}"#, "p"),
        (r#"{"optimizer": {"tol": -1.0}}"#, "optimizer.tol"),
    ];
    for (json, field) in bad {
        let err = ExperimentConfig::from_json(json).unwrap_err();
        assert_eq!(err.field, field, "{json}");
    }
    assert!(ExperimentConfig::from_json(r#"{"n_lst": [8]}"#).is_err());
    let ok = ExperimentConfig::from_json(r#"{"n_list": [6, 8], "chi_list": {"8": [4, 2]}}"#).unwrap();
    assert_eq!(ok.chi_grid(8), vec![2, 4]);
    assert_eq!(ok.chi_grid(6), vec![2, 4, 8]);
}
