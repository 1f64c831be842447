//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use qaoa_mps::{classical_ground_energy, generate_complete_graph};
use qaoa_mps_experiments::experiments::{ee_ratio, energy_ratio};
use qaoa_mps_experiments::stats::{interpolate, ls_slope};
use qaoa_mps_experiments::*;

const SAMPLES: usize = 100;

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn within(value: f64, center: f64, half_width: f64) -> bool {
    (value - center).abs() <= half_width
}

fn c1_oracle() -> Outcome {
    let start = Instant::now();
    let checks = run_verify(&VerifyOptions::default()).expect("verify suite runs");
    let elapsed = start.elapsed();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let worst = |suffix: &str| checks.iter().filter(|c| c.name.ends_with(suffix)).map(|c| c.worst).fold(0.0, f64::max);
    Outcome {
        id: "C1",
        title: "oracle equivalence N in {4,6,8}",
        passed: failed.is_empty() && elapsed < Duration::from_secs(120),
        detail: format!(
            "amp {:.1e}, energy {:.1e}, entropy {:.1e}, {:.1?}{}",
            worst("amplitudes"),
            worst("energy"),
            worst("bond entropies"),
            elapsed,
            if failed.is_empty() { String::new() } else { format!(", failing: {}", failed.join(", ")) }
        ),
    }
}

fn c2_entropy_bounds(c: &Campaign, elapsed: Duration) -> Outcome {
    let (mut bond_excess, mut sum_full, mut sum_chi4) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut snapshots = 0;
    for s in c.samples(8) {
        for run in std::iter::once(&s.untruncated).chain(&s.truncated) {
            for snap in &run.snapshots {
                snapshots += 1;
                for (e, &d) in snap.bond_entropies.iter().zip(&snap.bond_dims) {
                    bond_excess = bond_excess.max(e - (d as f64).log2());
                }
            }
        }
        sum_full = s.untruncated.snapshots.iter().map(|x| x.space_sum).fold(sum_full, f64::max);
        sum_chi4 = s.truncated(4).expect("chi 4 run").snapshots.iter().map(|x| x.space_sum).fold(sum_chi4, f64::max);
    }
    let passed = bond_excess <= 1e-9
        && sum_full <= 16.0 + 1e-9
        && sum_chi4 <= 12.0 + 1e-9
        && c.samples(8).len() == SAMPLES
        && elapsed < Duration::from_secs(600);
    Outcome {
        id: "C2",
        title: "entropy bounds N=8",
        passed,
        detail: format!(
            "{snapshots} snapshots, max S-log2(dim) {bond_excess:.2e}, max space sum {sum_full:.4} (<=16), chi=4 {sum_chi4:.4} (<=12), {elapsed:.1?}"
        ),
    }
}

fn c3_endpoints(campaigns: &BTreeMap<usize, Campaign>) -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in [6usize, 8, 10] {
        let full = 1usize << (n / 2);
        for s in campaigns[&n].samples(n) {
            worst = worst.max((ee_ratio(s, full, false).unwrap() - 1.0).abs());
            worst = worst.max((energy_ratio(s, full).unwrap() - 1.0).abs());
            count += 1;
        }
    }
    Outcome {
        id: "C3",
        title: "scaling endpoints at chi = 2^(N/2)",
        passed: worst <= 1e-9 && count == 3 * SAMPLES,
        detail: format!("{count} samples, max |ratio - 1| = {worst:.2e}"),
    }
}

fn band_check(label: String, value: f64, std: f64, center: f64, half: f64, out: &mut Vec<String>) -> bool {
    let ok = within(value, center, half);
    out.push(format!("{label} {value:.4}±{std:.4} in {center}±{half}: {}", if ok { "ok" } else { "OUT" }));
    ok
}

fn c4_table1(campaigns: &BTreeMap<usize, Campaign>) -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for (n, center, half) in [(8usize, 0.4166, 0.079), (10, 0.4296, 0.053), (12, 0.4361, 0.045)] {
        let r = &halves_reports(&campaigns[&n], false).unwrap()[0];
        passed &= band_check(format!("N={n}"), r.ratio_mean, r.ratio_std, center, half, &mut parts);
    }
    Outcome { id: "C4", title: "first/second halves, untruncated", passed, detail: parts.join("; ") }
}

fn truncated_halves(c: &Campaign, chi: usize) -> HalvesReport {
    halves_reports(c, true).unwrap().into_iter().find(|r| r.chi == Some(chi)).expect("chi in grid")
}

fn c5_table2(campaigns: &BTreeMap<usize, Campaign>) -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for (n, chi, center, half) in [(8usize, 4usize, 0.5118, 0.146), (8, 8, 0.4598, 0.088), (10, 16, 0.4633, 0.057)] {
        let r = truncated_halves(&campaigns[&n], chi);
        passed &= band_check(format!("N={n} chi={chi}"), r.ratio_mean, r.ratio_std, center, half, &mut parts);
    }
    Outcome { id: "C5", title: "first/second halves, truncated", passed, detail: parts.join("; ") }
}

fn c6_table3(campaigns: &BTreeMap<usize, Campaign>) -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for (n, chi, center, half) in [(8usize, 8usize, 1.0309, 0.054), (10, 2, 0.8438, 0.299)] {
        let r = alpha_reports(&campaigns[&n]).unwrap().into_iter().find(|r| r.chi == chi).expect("chi in grid");
        passed &= band_check(format!("N={n} chi={chi}"), r.ratio_mean, r.ratio_std, center, half, &mut parts);
    }
    Outcome { id: "C6", title: "alpha quotient", passed, detail: parts.join("; ") }
}

/// `(x, mean)` per N, sorted by x.
fn curves(points: &[ScalingPoint]) -> BTreeMap<usize, (Vec<f64>, Vec<f64>)> {
    let mut out: BTreeMap<usize, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let mut sorted: Vec<&ScalingPoint> = points.iter().collect();
    sorted.sort_by(|a, b| (a.n, a.x).partial_cmp(&(b.n, b.x)).unwrap());
    for p in sorted {
        let e = out.entry(p.n).or_default();
        e.0.push(p.x);
        e.1.push(p.ratio_mean);
    }
    out
}

fn c7_collapse(ee: &[ScalingPoint], single: &[ScalingPoint]) -> Outcome {
    let ee_curves = curves(ee);
    let lower = ee_curves.values().map(|(xs, _)| xs[0]).fold(0.3f64, f64::max);
    let mut grid: Vec<f64> = ee.iter().map(|p| p.x).filter(|&x| x >= lower - 1e-12).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut max_dev = 0.0f64;
    let mut at = 0.0;
    for &x in &grid {
        let values: Vec<f64> = ee_curves.values().map(|(xs, ys)| interpolate(xs, ys, x).expect("x inside every curve")).collect();
        let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - values.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread > max_dev {
            max_dev = spread;
            at = x;
        }
    }

    let sb_curves = curves(single);
    let x_star = sb_curves.values().map(|(xs, _)| xs[0]).fold(f64::NEG_INFINITY, f64::max);
    let at_star: Vec<(usize, f64)> =
        sb_curves.iter().map(|(&n, (xs, ys))| (n, interpolate(xs, ys, x_star).expect("x inside every curve"))).collect();
    let decreasing = at_star.windows(2).all(|w| w[1].1 < w[0].1);

    Outcome {
        id: "C7",
        title: "collapse vs single-bond non-collapse",
        passed: max_dev <= 0.1 && decreasing && grid.len() >= 2,
        detail: format!(
            "space-time ratio max pairwise deviation {max_dev:.4} at x={at:.3} over {} grid points; single bond at x={x_star:.3}: {}",
            grid.len(),
            at_star.iter().map(|(n, v)| format!("N={n} {v:.4}")).collect::<Vec<_>>().join(" > ")
        ),
    }
}

fn c8_theory(ee: &[ScalingPoint]) -> Outcome {
    let h1 = theory_curve(1.0).unwrap() == 1.0;
    let grid: Vec<f64> = (1..=1000).map(|k| k as f64 / 1001.0).collect();
    let h: Vec<f64> = grid.iter().map(|&x| theory_curve(x).unwrap()).collect();
    let strictly = h.windows(2).all(|w| w[1] > w[0]);

    let mut lines = Vec::new();
    let mut numeric_monotone = true;
    for (n, (xs, ys)) in curves(ee) {
        numeric_monotone &= ys.windows(2).all(|w| w[1] >= w[0] - 0.05);
        for (x, y) in xs.iter().zip(&ys) {
            let d = y - theory_curve(*x).unwrap();
            lines.push(format!("N={n} x={x:.3} {d:+.4}"));
        }
    }
    println!("      numeric - H(x): {}", lines.join(", "));
    Outcome {
        id: "C8",
        title: "theory curve",
        passed: h1 && strictly && numeric_monotone,
        detail: format!("H(1)=1 {h1}, H strictly increasing {strictly}, numeric curves nondecreasing within 0.05 {numeric_monotone}"),
    }
}

fn c9_plateau(c: &Campaign) -> Outcome {
    let series = time_series_reports(c).unwrap();
    let mut parts = Vec::new();
    let mut passed = true;
    for chi in [None, Some(4usize), Some(8)] {
        let t = series.iter().find(|t| t.chi == chi).expect("series present");
        let xs: Vec<f64> = (0..t.mean.len()).map(|j| j as f64).collect();
        let s = t.split_index;
        let first = ls_slope(&xs[..s], &t.mean[..s]).unwrap();
        let second = ls_slope(&xs[s..], &t.mean[s..]).unwrap();
        let peak = t.mean.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let ok = second <= 0.25 * first && peak <= t.max_line + 1e-9;
        passed &= ok;
        let label = chi.map_or("untruncated".to_string(), |c| format!("chi={c}"));
        parts.push(format!(
            "{label} slopes {first:.4}/{second:.4} (ratio {:.3}), peak {peak:.3} <= {}: {}",
            second / first,
            t.max_line,
            if ok { "ok" } else { "OUT" }
        ));
    }
    Outcome { id: "C9", title: "space-sum plateau N=8", passed, detail: parts.join("; ") }
}

fn c10_optimizer(c: &Campaign) -> Outcome {
    let mut bad = Vec::new();
    let samples = &c.samples(8)[..50];
    for s in samples {
        let graph = generate_complete_graph(8, s.instance_seed).unwrap();
        let (ground, _) = classical_ground_energy(&graph).unwrap();
        let e = s.optimized_energy;
        if !(e >= ground - 1e-12 && e <= 0.0 && e <= s.initial_energy) {
            bad.push(format!("sample {}: E={e} ground={ground} initial={}", s.sample, s.initial_energy));
        }
    }
    Outcome {
        id: "C10",
        title: "optimizer sanity N=8",
        passed: bad.is_empty() && samples.len() == 50,
        detail: if bad.is_empty() { format!("{} instances in [ground, 0] and <= initial", samples.len()) } else { bad.join("; ") },
    }
}

fn main() {
    // Respect libtest's filter argument so `cargo test <name>` skips this suite.
    if let Some(filter) = std::env::args().skip(1).find(|a| !a.starts_with('-')) {
        if !"acceptance".contains(filter.as_str()) {
            return;
        }
    }
    if std::env::args().any(|a| a == "--list") {
        return;
    }

    let start = Instant::now();
    let mut outcomes = vec![c1_oracle()];

    let mut campaigns = BTreeMap::new();
    let mut times = BTreeMap::new();
    for n in [6usize, 8, 10, 12] {
        let cfg = ExperimentConfig { n_list: vec![n], samples: SAMPLES, ..Default::default() };
        let t = Instant::now();
        let campaign = run_campaign(&cfg, None).expect("campaign runs");
        assert!(campaign.failures.is_empty(), "sample failures: {:?}", campaign.failures);
        times.insert(n, t.elapsed());
        campaigns.insert(n, campaign);
    }

    let mut ee = Vec::new();
    let mut single = Vec::new();
    for c in campaigns.values() {
        ee.extend(ee_scaling_points(c).unwrap());
        single.extend(single_bond_points(c).unwrap());
    }

    outcomes.push(c2_entropy_bounds(&campaigns[&8], times[&8]));
    outcomes.push(c3_endpoints(&campaigns));
    outcomes.push(c4_table1(&campaigns));
    outcomes.push(c5_table2(&campaigns));
    outcomes.push(c6_table3(&campaigns));
    outcomes.push(c7_collapse(&ee, &single));
    outcomes.push(c8_theory(&ee));
    outcomes.push(c9_plateau(&campaigns[&8]));
    outcomes.push(c10_optimizer(&campaigns[&8]));

    println!();
    for o in &outcomes {
        println!("{} {:<4} {:<38} {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("\nacceptance: {} passed, {failed} failed in {:.1?}", outcomes.len() - failed, start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
