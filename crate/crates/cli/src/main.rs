//! `qaoa-mps`: run, resume, plot and verify the scaling experiments.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 runtime
//! failure, 3 verification failure.

mod manifest;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qaoa_mps_experiments::csvio::{self, CsvKind};
use qaoa_mps_experiments::verify::format_table;
use qaoa_mps_experiments::{plot, ExperimentConfig, ExperimentError, VerifyOptions};

use manifest::{RunManifest, SampleStatus};

#[derive(Parser, Debug)]
#[command(name = "qaoa-mps", version, about = "Truncated-MPS QAOA scaling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run (or resume) one experiment and write CSVs, raw archives and a manifest.
    Run(RunArgs),
    /// Render SVG figures from result CSVs.
    Plot(PlotArgs),
    /// Check the MPS simulator against the state-vector oracle.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Experiment {
    EeScaling,
    EnergyScaling,
    SingleBond,
    Halves,
    Alpha,
    Timeseries,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::EeScaling => "ee-scaling",
            Experiment::EnergyScaling => "energy-scaling",
            Experiment::SingleBond => "single-bond",
            Experiment::Halves => "halves",
            Experiment::Alpha => "alpha",
            Experiment::Timeseries => "timeseries",
        }
    }
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    experiment: Experiment,
    /// JSON configuration file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Qubit counts, comma separated.
    #[arg(long = "N", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Bond-dimension caps applied to every N, comma separated.
    #[arg(long, value_delimiter = ',')]
    chi: Option<Vec<usize>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Instance seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Optimizer seed.
    #[arg(long = "opt-seed")]
    opt_seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory [default: config `out_dir`, else ./results].
    #[arg(long, env = "QML_OUT")]
    out: Option<PathBuf>,
    /// Also report entropies of unrenormalized truncated spectra.
    #[arg(long = "unnormalized-ee")]
    unnormalized_ee: bool,
}

#[derive(clap::Args, Debug)]
struct PlotArgs {
    /// CSV files written by `run`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Overlay the closed-form scaling curve on ratio plots.
    #[arg(long = "overlay-theory")]
    overlay_theory: bool,
    /// Directory for the SVG files [default: next to each CSV].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Smaller suite (N in {4, 6}, 3 instances each).
    #[arg(long)]
    quick: bool,
    /// Override the singular-value cutoff of the simulated MPS.
    #[arg(long = "svd-cutoff")]
    svd_cutoff: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Config(String),
    Runtime(String),
    Verification,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Runtime(_) => 2,
            Failure::Verification => 3,
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config(_) | ExperimentError::MissingColumn { .. } | ExperimentError::Format { .. } => {
                Failure::Config(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(n) = &args.n {
        cfg.n_list = n.clone();
        cfg.chi_list.retain(|k, _| n.contains(k));
    }
    if let Some(chi) = &args.chi {
        cfg.chi_list = cfg.n_list.iter().map(|&n| (n, chi.clone())).collect::<BTreeMap<_, _>>();
    }
    if let Some(v) = args.samples {
        cfg.samples = v;
    }
    if let Some(v) = args.p {
        cfg.p = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.opt_seed {
        cfg.opt_seed = v;
    }
    if let Some(v) = args.jobs {
        cfg.jobs = v;
    }
    if args.unnormalized_ee {
        cfg.unnormalized_ee = true;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = Some(out.clone());
    }
    cfg.validate().map_err(|e| Failure::Config(e.to_string()))?;
    if matches!(args.experiment, Experiment::Halves | Experiment::Alpha) && cfg.p != 1 {
        return Err(Failure::Config(format!("invalid config field `p`: {} needs p = 1", args.experiment.name())));
    }
    Ok(cfg)
}

fn relative(path: &Path, base: &Path) -> String {
    path.strip_prefix(base).unwrap_or(path).to_string_lossy().replace('\\', "/")
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let cfg = load_config(&args)?;
    let out = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("results"));
    let name = args.experiment.name();
    let exp_dir = out.join(name);
    let raw_dir = out.join("raw");
    fs::create_dir_all(&exp_dir).map_err(|e| Failure::Runtime(format!("{}: {e}", exp_dir.display())))?;
    let manifest_path = exp_dir.join("manifest.json");

    let mut manifest = RunManifest::new(name, &cfg);
    manifest.save(&manifest_path).map_err(Failure::Runtime)?;

    if cfg.off_protocol() {
        eprintln!("note: p = {} differs from the depth-one reference runs", cfg.p);
    }
    let campaign = qaoa_mps_experiments::run_campaign(&cfg, Some(&raw_dir))?;
    for entry in &mut manifest.samples {
        if let Some(path) = campaign.archives.get(&(entry.n, entry.sample)) {
            entry.status = SampleStatus::Done;
            entry.archive = Some(relative(path, &out));
        } else if let Some(f) = campaign.failures.iter().find(|f| f.n == entry.n && f.sample == entry.sample) {
            entry.status = SampleStatus::Failed;
            entry.error = Some(f.error.clone());
        }
    }
    manifest.simulated = campaign.simulated;
    manifest.reused = campaign.reused;

    use qaoa_mps_experiments as x;
    let written = match args.experiment {
        Experiment::EeScaling | Experiment::EnergyScaling | Experiment::SingleBond => {
            let points = match args.experiment {
                Experiment::EeScaling => x::ee_scaling_points(&campaign)?,
                Experiment::EnergyScaling => x::energy_scaling_points(&campaign)?,
                _ => x::single_bond_points(&campaign)?,
            };
            let path = exp_dir.join("results.csv");
            csvio::write_scaling_csv(&path, &points)?;
            path
        }
        Experiment::Halves => {
            let mut reports = x::halves_reports(&campaign, false)?;
            reports.extend(x::halves_reports(&campaign, true)?);
            let path = exp_dir.join("halves.csv");
            csvio::write_halves_csv(&path, &reports)?;
            path
        }
        Experiment::Alpha => {
            let path = exp_dir.join("alpha.csv");
            csvio::write_alpha_csv(&path, &x::alpha_reports(&campaign)?)?;
            path
        }
        Experiment::Timeseries => {
            let path = exp_dir.join("timeseries.csv");
            csvio::write_timeseries_csv(&path, &x::time_series_reports(&campaign)?)?;
            path
        }
    };
    manifest.outputs.push(relative(&written, &out));
    manifest.save(&manifest_path).map_err(Failure::Runtime)?;

    println!(
        "{name}: {} samples ({} simulated, {} reused, {} failed) -> {}",
        manifest.samples.len(),
        campaign.simulated,
        campaign.reused,
        manifest.failed(),
        written.display()
    );
    if manifest.failed() > 0 {
        for f in &campaign.failures {
            eprintln!("sample N={} #{} failed: {}", f.n, f.sample, f.error);
        }
        return Err(Failure::Runtime(format!("{} samples failed; see {}", manifest.failed(), manifest_path.display())));
    }
    Ok(())
}

fn svg_path(csv: &Path, out: Option<&Path>, suffix: &str) -> PathBuf {
    let mut stem = csv.file_stem().map_or_else(|| "figure".to_string(), |s| s.to_string_lossy().into_owned());
    // every scaling run writes results.csv, so name it after its run directory
    if stem == "results" {
        if let Some(dir) = csv.parent().and_then(Path::file_name) {
            stem = dir.to_string_lossy().into_owned();
        }
    }
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| csv.parent().map(Path::to_path_buf).unwrap_or_default());
    dir.join(format!("{stem}{suffix}.svg"))
}

fn cmd_plot(args: PlotArgs) -> Result<(), Failure> {
    let out = args.out.as_deref();
    for csv in &args.inputs {
        let mut written = Vec::new();
        match csvio::detect_kind(csv)? {
            CsvKind::Scaling => {
                let points = csvio::read_scaling_csv(csv)?;
                let mut groups: BTreeMap<String, Vec<_>> = BTreeMap::new();
                for p in points {
                    groups.entry(p.experiment.clone()).or_default().push(p);
                }
                if groups.is_empty() {
                    let path = svg_path(csv, out, "");
                    plot::plot_scaling(&path, &[], "no data", args.overlay_theory)?;
                    written.push(path);
                }
                let single = groups.len() == 1;
                for (experiment, pts) in groups {
                    let path = svg_path(csv, out, &if single { String::new() } else { format!("-{experiment}") });
                    plot::plot_scaling(&path, &pts, &experiment, args.overlay_theory)?;
                    written.push(path);
                }
            }
            CsvKind::Halves => {
                let path = svg_path(csv, out, "");
                plot::plot_halves(&path, &csvio::read_halves_csv(csv)?)?;
                written.push(path);
            }
            CsvKind::Alpha => {
                let path = svg_path(csv, out, "");
                plot::plot_alpha(&path, &csvio::read_alpha_csv(csv)?)?;
                written.push(path);
            }
            CsvKind::TimeSeries => {
                for series in csvio::read_timeseries_csv(csv)? {
                    let suffix = match series.chi {
                        None => format!("-N{}-full", series.n),
                        Some(c) => format!("-N{}-chi{c}", series.n),
                    };
                    let path = svg_path(csv, out, &suffix);
                    plot::plot_timeseries(&path, &series)?;
                    written.push(path);
                }
            }
        }
        for path in written {
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    if let Some(c) = args.svd_cutoff {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Failure::Config(format!("invalid --svd-cutoff {c}")));
        }
    }
    let opts = VerifyOptions { quick: args.quick, svd_cutoff: args.svd_cutoff, seed: args.seed };
    let checks = qaoa_mps_experiments::run_verify(&opts)?;
    print!("{}", format_table(&checks));
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        println!("{failed} of {} checks failed", checks.len());
        return Err(Failure::Verification);
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Plot(a) => cmd_plot(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(m) | Failure::Runtime(m) => eprintln!("error: {m}"),
                Failure::Verification => {}
            }
            ExitCode::from(f.code())
        }
    }
}
