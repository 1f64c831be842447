//! Aggregators turning a [`Campaign`] into scaling points and tables.

use qaoa_mps::{floor_log2, max_space_sum, max_space_sum_truncated};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::sample::{run_campaign, Campaign, SampleOutcome};
use crate::stats::{mean, mean_std};
use crate::theory::x_of;

/// Experiment labels used in the results CSV.
pub const EE_SCALING: &str = "ee-scaling";
pub const EE_SCALING_UNNORMALIZED: &str = "ee-scaling-unnormalized";
pub const ENERGY_SCALING: &str = "energy-scaling";
pub const SINGLE_BOND: &str = "single-bond";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub experiment: String,
    pub n: usize,
    pub chi: usize,
    /// `2·log2(χ)/N`.
    pub x: f64,
    pub ratio_mean: f64,
    pub ratio_std: f64,
    pub n_samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalvesReport {
    pub n: usize,
    /// `None` for the untruncated run.
    pub chi: Option<usize>,
    /// Number of snapshots in the first part.
    pub split_index: usize,
    pub first_mean: f64,
    pub second_mean: f64,
    pub ratio_mean: f64,
    pub ratio_std: f64,
    pub n_samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub n: usize,
    pub chi: usize,
    pub alpha_untruncated: f64,
    pub alpha_truncated: f64,
    /// Mean over samples of `alpha_truncated / alpha_untruncated`.
    pub ratio_mean: f64,
    pub ratio_std: f64,
    pub n_samples: usize,
}

/// Sample-averaged space sum against snapshot index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub n: usize,
    pub chi: Option<usize>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// Upper bound on any single space sum.
    pub max_line: f64,
    pub split_index: usize,
    pub n_samples: usize,
}

fn ratio(num: f64, den: f64, what: &str, s: &SampleOutcome) -> Result<f64> {
    if den == 0.0 {
        if num == 0.0 {
            return Ok(1.0);
        }
        return Err(ExperimentError::Invalid(format!(
            "{what}: zero denominator for N = {}, sample {}",
            s.n, s.sample
        )));
    }
    Ok(num / den)
}

fn truncated_run(s: &SampleOutcome, chi: usize) -> Result<&crate::sample::RunRecord> {
    s.truncated(chi)
        .ok_or_else(|| ExperimentError::Invalid(format!("sample {} of N = {} lacks a chi = {chi} run", s.sample, s.n)))
}

fn point(experiment: &str, n: usize, chi: usize, ratios: &[f64]) -> ScalingPoint {
    let (ratio_mean, ratio_std) = mean_std(ratios);
    ScalingPoint { experiment: experiment.into(), n, chi, x: x_of(n, chi), ratio_mean, ratio_std, n_samples: ratios.len() }
}

/// Space-time entropy sum of the capped run over that of the untruncated run.
pub fn ee_ratio(s: &SampleOutcome, chi: usize, unnormalized: bool) -> Result<f64> {
    let num = truncated_run(s, chi)?.space_time_sum(unnormalized);
    ratio(num, s.untruncated.space_time_sum(unnormalized), "entropy ratio", s)
}

pub fn energy_ratio(s: &SampleOutcome, chi: usize) -> Result<f64> {
    let num = s
        .compressed_energy(chi)
        .ok_or_else(|| ExperimentError::Invalid(format!("sample {} lacks compressed energy at chi = {chi}", s.sample)))?;
    ratio(num, s.untruncated.final_energy, "energy ratio", s)
}

/// Central-bond entropy after the last CNOT, capped over untruncated.
pub fn single_bond_ratio(s: &SampleOutcome, chi: usize) -> Result<f64> {
    if !s.n.is_multiple_of(2) {
        return Err(ExperimentError::Invalid(format!("single-bond ratio needs even N, got {}", s.n)));
    }
    let bond = s.n / 2 - 1;
    let last = |r: &crate::sample::RunRecord| -> Result<f64> {
        r.snapshots
            .last()
            .map(|snap| snap.bond_entropies[bond])
            .ok_or_else(|| ExperimentError::Invalid("circuit has no CNOT snapshots".into()))
    };
    ratio(last(truncated_run(s, chi)?)?, last(&s.untruncated)?, "single-bond ratio", s)
}

fn scaling_points(
    campaign: &Campaign,
    experiment: &str,
    f: impl Fn(&SampleOutcome, usize) -> Result<f64>,
) -> Result<Vec<ScalingPoint>> {
    let mut out = Vec::new();
    for n in campaign.n_values() {
        for chi in campaign.config.chi_grid(n) {
            let ratios = campaign.samples(n).iter().map(|s| f(s, chi)).collect::<Result<Vec<_>>>()?;
            if !ratios.is_empty() {
                out.push(point(experiment, n, chi, &ratios));
            }
        }
    }
    Ok(out)
}

/// Renormalized-convention points, followed by unnormalized ones when the
/// campaign asks for them.
pub fn ee_scaling_points(campaign: &Campaign) -> Result<Vec<ScalingPoint>> {
    let mut out = scaling_points(campaign, EE_SCALING, |s, chi| ee_ratio(s, chi, false))?;
    if campaign.config.unnormalized_ee {
        out.extend(scaling_points(campaign, EE_SCALING_UNNORMALIZED, |s, chi| ee_ratio(s, chi, true))?);
    }
    Ok(out)
}

pub fn energy_scaling_points(campaign: &Campaign) -> Result<Vec<ScalingPoint>> {
    scaling_points(campaign, ENERGY_SCALING, energy_ratio)
}

pub fn single_bond_points(campaign: &Campaign) -> Result<Vec<ScalingPoint>> {
    scaling_points(campaign, SINGLE_BOND, single_bond_ratio)
}

/// Number of snapshots in the first part: `p·N(N−1)/2` untruncated,
/// `2⌊log2 χ⌋(N−⌊log2 χ⌋)` truncated.
pub fn split_index(n: usize, p: usize, chi: Option<usize>) -> usize {
    match chi {
        None => p * n * (n - 1) / 2,
        Some(chi) => {
            let f = floor_log2(chi);
            2 * f * n.saturating_sub(f)
        }
    }
}

/// Means of the space sums before and after `split`.
pub fn halves_means(space_sums: &[f64], split: usize) -> Result<(f64, f64)> {
    if split == 0 || split >= space_sums.len() {
        return Err(ExperimentError::Invalid(format!(
            "split index {split} leaves an empty part of a {}-snapshot trace",
            space_sums.len()
        )));
    }
    Ok((mean(&space_sums[..split]), mean(&space_sums[split..])))
}

fn require_depth_one(config: &ExperimentConfig, what: &str) -> Result<()> {
    if config.p != 1 {
        return Err(ExperimentError::Invalid(format!("{what} is defined for p = 1 only, got p = {}", config.p)));
    }
    Ok(())
}

fn halves_report(campaign: &Campaign, n: usize, chi: Option<usize>) -> Result<Option<HalvesReport>> {
    let split = split_index(n, campaign.config.p, chi);
    let (mut firsts, mut seconds, mut ratios) = (Vec::new(), Vec::new(), Vec::new());
    for s in campaign.samples(n) {
        let run = match chi {
            None => &s.untruncated,
            Some(c) => truncated_run(s, c)?,
        };
        let (a, b) = halves_means(&run.space_sums(), split)?;
        firsts.push(a);
        seconds.push(b);
        ratios.push(ratio(a, b, "halves ratio", s)?);
    }
    if ratios.is_empty() {
        return Ok(None);
    }
    let (ratio_mean, ratio_std) = mean_std(&ratios);
    Ok(Some(HalvesReport {
        n,
        chi,
        split_index: split,
        first_mean: mean(&firsts),
        second_mean: mean(&seconds),
        ratio_mean,
        ratio_std,
        n_samples: ratios.len(),
    }))
}

/// First-part over second-part mean space sum. Untruncated gives one report
/// per N; truncated one per `(N, χ)`.
pub fn halves_reports(campaign: &Campaign, truncated: bool) -> Result<Vec<HalvesReport>> {
    require_depth_one(&campaign.config, "halves ratio")?;
    let mut out = Vec::new();
    for n in campaign.n_values() {
        if truncated {
            for chi in campaign.config.chi_grid(n) {
                out.extend(halves_report(campaign, n, Some(chi))?);
            }
        } else {
            out.extend(halves_report(campaign, n, None)?);
        }
    }
    Ok(out)
}

/// Second-part mean space sum relative to its maximum, capped over untruncated.
pub fn alpha_reports(campaign: &Campaign) -> Result<Vec<AlphaReport>> {
    require_depth_one(&campaign.config, "alpha ratio")?;
    let mut out = Vec::new();
    for n in campaign.n_values() {
        let full_split = split_index(n, 1, None);
        let max_full = max_space_sum(n)?;
        for chi in campaign.config.chi_grid(n) {
            let split = split_index(n, 1, Some(chi));
            let max_chi = max_space_sum_truncated(n, chi)?;
            let (mut au, mut at, mut ratios) = (Vec::new(), Vec::new(), Vec::new());
            for s in campaign.samples(n) {
                let u = halves_means(&s.untruncated.space_sums(), full_split)?.1 / max_full;
                let t = halves_means(&truncated_run(s, chi)?.space_sums(), split)?.1 / max_chi;
                ratios.push(ratio(t, u, "alpha ratio", s)?);
                au.push(u);
                at.push(t);
            }
            if ratios.is_empty() {
                continue;
            }
            let (ratio_mean, ratio_std) = mean_std(&ratios);
            out.push(AlphaReport {
                n,
                chi,
                alpha_untruncated: mean(&au),
                alpha_truncated: mean(&at),
                ratio_mean,
                ratio_std,
                n_samples: ratios.len(),
            });
        }
    }
    Ok(out)
}

fn time_series(campaign: &Campaign, n: usize, chi: Option<usize>) -> Result<Option<TimeSeries>> {
    let traces = campaign
        .samples(n)
        .iter()
        .map(|s| match chi {
            None => Ok(s.untruncated.space_sums()),
            Some(c) => truncated_run(s, c).map(|r| r.space_sums()),
        })
        .collect::<Result<Vec<_>>>()?;
    let Some(len) = traces.first().map(Vec::len) else {
        return Ok(None);
    };
    if traces.iter().any(|t| t.len() != len) {
        return Err(ExperimentError::Invalid(format!("ragged snapshot traces for N = {n}")));
    }
    let (mut means, mut stds) = (Vec::with_capacity(len), Vec::with_capacity(len));
    for j in 0..len {
        let column: Vec<f64> = traces.iter().map(|t| t[j]).collect();
        let (m, s) = mean_std(&column);
        means.push(m);
        stds.push(s);
    }
    let max_line = match chi {
        None => max_space_sum(n)?,
        Some(c) => max_space_sum_truncated(n, c)?,
    };
    Ok(Some(TimeSeries {
        n,
        chi,
        mean: means,
        std: stds,
        max_line,
        split_index: split_index(n, campaign.config.p, chi),
        n_samples: traces.len(),
    }))
}

/// Untruncated trace, then one per χ, for every N.
pub fn time_series_reports(campaign: &Campaign) -> Result<Vec<TimeSeries>> {
    let mut out = Vec::new();
    for n in campaign.n_values() {
        out.extend(time_series(campaign, n, None)?);
        for chi in campaign.config.chi_grid(n) {
            out.extend(time_series(campaign, n, Some(chi))?);
        }
    }
    Ok(out)
}

pub fn run_ee_scaling(config: &ExperimentConfig) -> Result<Vec<ScalingPoint>> {
    ee_scaling_points(&run_campaign(config, None)?)
}

pub fn run_energy_scaling(config: &ExperimentConfig) -> Result<Vec<ScalingPoint>> {
    energy_scaling_points(&run_campaign(config, None)?)
}

pub fn run_single_bond_ratio(config: &ExperimentConfig) -> Result<Vec<ScalingPoint>> {
    single_bond_points(&run_campaign(config, None)?)
}

pub fn halves_ratio(config: &ExperimentConfig, truncated: bool) -> Result<Vec<HalvesReport>> {
    require_depth_one(config, "halves ratio")?;
    halves_reports(&run_campaign(config, None)?, truncated)
}

pub fn alpha_ratio(config: &ExperimentConfig) -> Result<Vec<AlphaReport>> {
    require_depth_one(config, "alpha ratio")?;
    alpha_reports(&run_campaign(config, None)?)
}

pub fn ee_time_series(config: &ExperimentConfig) -> Result<Vec<TimeSeries>> {
    time_series_reports(&run_campaign(config, None)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_indices() {
        assert_eq!(split_index(8, 1, None), 28);
        assert_eq!(split_index(8, 1, Some(4)), 24);
        assert_eq!(split_index(8, 1, Some(8)), 30);
        assert_eq!(split_index(10, 1, Some(16)), 48);
        assert_eq!(split_index(10, 1, Some(2)), 18);
        for n in (4..=16).step_by(2) {
            for f in 1..=n / 2 {
                assert!(split_index(n, 1, Some(1 << f)) <= n * (n - 1));
            }
        }
    }

    #[test]
    fn flat_profile_gives_unit_ratio() {
        let sums = vec![2.5; 56];
        let (a, b) = halves_means(&sums, 28).unwrap();
        assert_eq!(a / b, 1.0);
        assert!(halves_means(&sums, 0).is_err());
        assert!(halves_means(&sums, 56).is_err());
    }
}
