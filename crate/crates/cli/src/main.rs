use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fuzzy_cocomo::builder::{DEFAULT_ARTIFICIAL_COUNT, DEFAULT_SEED};
use fuzzy_cocomo::dataset::DEFAULT_SIZE_RANGE;
use fuzzy_cocomo::eval::{
    self, cocomo_reports, fuzzy_reports, summary_text, DataTable, Estimator, OutputMeta,
};
use fuzzy_cocomo::fisfile;
use fuzzy_cocomo::inference::DEFAULT_RESOLUTION;
use fuzzy_cocomo::{
    filter_by_size, load_dataset, run_experiment, DriverId, DriverRatings, Error, ExperimentConfig,
    FuzzyEstimator, Level, Mode, NominalFisConfig, PartitionShape, SampleSource, Universe,
};

/// Rule strengths and multiplier offsets below this are not printed.
const SHOWN: f64 = 5e-5;

type CliResult<T> = std::result::Result<T, Error>;

/// Fuzzy-logic software effort estimation over intermediate COCOMO-81.
#[derive(Debug, Parser)]
#[command(name = "fuzzy-cocomo", version)]
struct Cli {
    /// Seed for artificial rule-generation data.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Points in the defuzzification grid (at least 101).
    #[arg(long, global = true)]
    defuzz_resolution: Option<usize>,

    /// Size range in KDSI as lo:hi. Sets the size universe and the dataset filter.
    #[arg(long, global = true, value_parser = parse_range)]
    range: Option<(f64, f64)>,

    /// Output file (estimate) or directory (build-fis, evaluate, replicate).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate effort for one project.
    Estimate(EstimateArgs),
    /// Build the nominal and cost-driver systems and write them as TOML.
    BuildFis(BuildArgs),
    /// Evaluate one fuzzy estimator and COCOMO on a dataset.
    Evaluate(EvaluateArgs),
    /// Run the full triangular/Gaussian x 3/5/7 comparison on a dataset.
    Replicate(ReplicateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Source {
    Grid,
    Artificial,
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Load systems from a directory written by build-fis instead of building them.
    #[arg(long)]
    fis: Option<PathBuf>,

    /// Number of size membership functions.
    #[arg(long, default_value_t = 7)]
    mf_count: usize,

    /// Shape of the size membership functions.
    #[arg(long, default_value = "gaussian", value_parser = parse_shape)]
    shape: PartitionShape,

    /// Where nominal rule consequents come from.
    #[arg(long, value_enum, default_value_t = Source::Artificial)]
    source: Source,

    /// Artificial projects used for rule generation.
    #[arg(long, default_value_t = DEFAULT_ARTIFICIAL_COUNT)]
    samples: usize,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Size in KDSI.
    #[arg(long)]
    size: f64,

    /// Mode name (organic, semidetached, embedded) or a B value in [1.0, 1.25].
    #[arg(long)]
    mode: String,

    /// Driver setting ID=LEVEL (e.g. rely=h) or ID=VALUE on the driver's axis (e.g. stor=75).
    #[arg(long = "driver", value_name = "ID=VALUE")]
    drivers: Vec<String>,

    /// Print the rules that fired and their strengths.
    #[arg(long)]
    explain: bool,

    #[command(flatten)]
    system: SystemArgs,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    system: SystemArgs,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Project dataset (CSV).
    #[arg(long)]
    dataset: PathBuf,

    #[command(flatten)]
    system: SystemArgs,
}

#[derive(Debug, Args)]
struct ReplicateArgs {
    /// Project dataset (CSV).
    #[arg(long)]
    dataset: PathBuf,

    #[arg(long, value_enum, default_value_t = Source::Artificial)]
    source: Source,

    #[arg(long, default_value_t = DEFAULT_ARTIFICIAL_COUNT)]
    samples: usize,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound `{hi}`"))?;
    if !(lo > 0.0 && lo < hi) {
        return Err(format!("need 0 < lo < hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_shape(s: &str) -> Result<PartitionShape, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Globals {
    seed: u64,
    resolution: Option<usize>,
    range: (f64, f64),
    out: Option<PathBuf>,
}

impl Globals {
    fn meta(&self, config: String) -> OutputMeta {
        OutputMeta {
            seed: self.seed,
            config,
        }
    }
}

fn sample_source(source: Source, samples: usize, seed: u64) -> SampleSource {
    match source {
        Source::Grid => SampleSource::AnalyticGrid,
        Source::Artificial => SampleSource::Artificial {
            count: samples,
            seed,
        },
    }
}

fn nominal_config(sys: &SystemArgs, g: &Globals) -> CliResult<NominalFisConfig> {
    Ok(NominalFisConfig {
        size_universe: Universe::new(g.range.0, g.range.1)?,
        source: sample_source(sys.source, sys.samples, g.seed),
        resolution: g.resolution.unwrap_or(DEFAULT_RESOLUTION),
        ..NominalFisConfig::new(sys.mf_count, sys.shape)
    })
}

fn describe_config(cfg: &NominalFisConfig) -> String {
    format!(
        "{} source={} size_universe={} resolution={}",
        cfg.label(),
        cfg.source.describe(),
        cfg.size_universe,
        cfg.resolution
    )
}

/// Loads or builds the estimator, returning it with a tag and a description.
fn estimator(sys: &SystemArgs, g: &Globals) -> CliResult<(FuzzyEstimator, Estimator, String)> {
    match &sys.fis {
        Some(dir) => {
            let mut est = fisfile::load_bundle(dir)?;
            if let Some(r) = g.resolution {
                let nominal = est.nominal().with_resolution(r)?;
                let drivers = est
                    .drivers()
                    .iter()
                    .map(|d| d.with_resolution(r))
                    .collect::<CliResult<Vec<_>>>()?;
                est = FuzzyEstimator::new(nominal, drivers)?;
            }
            let p = est.nominal().provenance();
            let tag = match (
                p.get("shape")
                    .and_then(|s| s.parse::<PartitionShape>().ok()),
                p.get("mf_count").and_then(|s| s.parse::<usize>().ok()),
            ) {
                (Some(shape), Some(mf_count)) => Estimator::Fis { shape, mf_count },
                _ => Estimator::Named("FIS".into()),
            };
            Ok((est, tag, format!("fis={}", dir.display())))
        }
        None => {
            let cfg = nominal_config(sys, g)?;
            let est = FuzzyEstimator::build(&cfg)?;
            let tag = Estimator::Fis {
                shape: cfg.shape,
                mf_count: cfg.mf_count,
            };
            Ok((est, tag, describe_config(&cfg)))
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

enum DriverSetting {
    Level(Level),
    Value(f64),
}

fn parse_driver(s: &str) -> CliResult<(DriverId, DriverSetting)> {
    let (id, value) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("driver setting `{s}` is not ID=VALUE")))?;
    let id: DriverId = id.parse()?;
    let setting = match value.trim().parse::<f64>() {
        Ok(v) => DriverSetting::Value(v),
        Err(_) => DriverSetting::Level(value.parse()?),
    };
    Ok((id, setting))
}

fn cmd_estimate(args: &EstimateArgs, g: &Globals) -> CliResult<String> {
    let (mode_value, crisp_mode) = match args.mode.parse::<Mode>() {
        Ok(m) => (m.b(), Some(m)),
        Err(_) => {
            let b: f64 = args
                .mode
                .parse()
                .map_err(|_| Error::Domain(format!("unknown mode `{}`", args.mode)))?;
            (b, Mode::ALL.into_iter().find(|m| m.b() == b))
        }
    };
    let (est, tag, _) = estimator(&args.system, g)?;
    let mut inputs = est.nominal_inputs(mode_value, args.size)?;
    let mut ratings = Some(DriverRatings::nominal());
    for s in &args.drivers {
        let (id, setting) = parse_driver(s)?;
        let d = est.driver(id);
        inputs.drivers[id.index()] = match setting {
            DriverSetting::Level(level) => {
                if let Some(r) = ratings.as_mut() {
                    r.set(id, level);
                }
                d.anchor(level)?
            }
            DriverSetting::Value(v) => {
                ratings = None;
                v
            }
        };
    }
    let e = est.estimate(&inputs)?;

    let mut out = String::new();
    let mode_label =
        crisp_mode.map_or_else(|| "between modes".to_string(), |m| m.token().to_string());
    let _ = writeln!(out, "estimator: {tag}");
    let _ = writeln!(out, "mode: {mode_label} (B = {mode_value})");
    let _ = writeln!(out, "size: {} KDSI", args.size);
    let _ = writeln!(out, "fuzzy nominal effort: {:.2} PM", e.nominal);
    let _ = writeln!(out, "fuzzy EAF: {:.4}", e.eaf);
    let _ = writeln!(out, "fuzzy total effort: {:.2} PM", e.total);
    match crisp_mode {
        Some(m) => {
            let nominal = fuzzy_cocomo::nominal_effort(m, args.size)?;
            let _ = writeln!(out, "COCOMO nominal effort: {nominal:.2} PM");
            match ratings {
                Some(r) => {
                    let eaf = fuzzy_cocomo::eaf(&r)?;
                    let _ = writeln!(out, "COCOMO EAF: {eaf:.4}");
                    let _ = writeln!(out, "COCOMO total effort: {:.2} PM", nominal * eaf);
                }
                None => {
                    let _ = writeln!(out, "COCOMO EAF: n/a (a driver was given as a measurement)");
                }
            }
        }
        None => {
            let _ = writeln!(out, "COCOMO: n/a (B value between modes)");
        }
    }
    let changed: Vec<String> = est
        .drivers()
        .iter()
        .filter(|d| (e.multipliers[d.driver().index()] - 1.0).abs() >= SHOWN)
        .map(|d| format!("{}={:.4}", d.driver(), e.multipliers[d.driver().index()]))
        .collect();
    if !changed.is_empty() {
        let _ = writeln!(out, "multipliers: {}", changed.join(" "));
    }

    if args.explain {
        let fis = est.nominal().fis();
        let positional: Vec<f64> = fis
            .inputs()
            .iter()
            .map(|v| {
                if v.name() == "mode" {
                    mode_value
                } else {
                    args.size
                }
            })
            .collect();
        let _ = writeln!(out, "\nnominal rules fired:");
        for a in fis
            .explain(&positional)?
            .into_iter()
            .filter(|a| a.strength >= SHOWN)
        {
            let _ = writeln!(
                out,
                "  {:.4}  {}",
                a.strength,
                a.rule.describe(fis.output().name())
            );
        }
        let _ = writeln!(out, "\ncost-driver rules fired:");
        for d in est.drivers() {
            let x = inputs.drivers[d.driver().index()];
            for a in d
                .fis()
                .explain(&[x])?
                .into_iter()
                .filter(|a| a.strength >= SHOWN)
            {
                let _ = writeln!(
                    out,
                    "  {:<5} {:.4}  {}",
                    d.driver().to_string(),
                    a.strength,
                    a.rule.describe(d.fis().output().name())
                );
            }
        }
    }
    if let Some(path) = &g.out {
        write_file(path, &out)?;
    }
    Ok(out)
}

fn cmd_build(args: &BuildArgs, g: &Globals) -> CliResult<String> {
    if args.system.fis.is_some() {
        return Err(Error::Config("build-fis does not take --fis".into()));
    }
    let cfg = nominal_config(&args.system, g)?;
    let est = FuzzyEstimator::build(&cfg)?;
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("fis"));
    let written = fisfile::save_bundle(&dir, &est)?;
    Ok(format!(
        "wrote {} files to {} ({} nominal rules, {})\n",
        written.len(),
        dir.display(),
        est.nominal().rule_count(),
        describe_config(&cfg)
    ))
}

fn predictions_table(
    records: &[fuzzy_cocomo::ProjectRecord],
    reports: [&eval::EvaluationReport; 4],
) -> DataTable {
    let [cn, ct, fnom, ftot] = reports;
    let rows = records
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let f = |x: f64| format!("{x:.4}");
            vec![
                r.id.clone(),
                f(r.kdsi),
                r.mode.token().to_string(),
                f(r.actual_pm),
                f(cn.pairs[k].actual),
                f(cn.pairs[k].predicted),
                f(ct.pairs[k].predicted),
                f(fnom.pairs[k].predicted),
                f(ftot.pairs[k].predicted),
                f(100.0 * ftot.mres[k]),
            ]
        })
        .collect();
    DataTable {
        name: "predictions".into(),
        title: "Per-project predictions".into(),
        columns: [
            "id",
            "kdsi",
            "mode",
            "actual_pm",
            "actual_nominal_pm",
            "cocomo_nominal_pm",
            "cocomo_total_pm",
            "fis_nominal_pm",
            "fis_total_pm",
            "fis_total_mre_pct",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    }
}

fn warn_dataset(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn cmd_evaluate(args: &EvaluateArgs, g: &Globals) -> CliResult<String> {
    let data = load_dataset(&args.dataset)?;
    warn_dataset(&data.warnings);
    let (lo, hi) = g.range;
    let mut kept = filter_by_size(&data.records, lo, hi);
    if kept.is_empty() {
        return Err(Error::Domain(format!(
            "no projects in {} with size in [{lo}, {hi}] KDSI",
            args.dataset.display()
        )));
    }
    kept.sort_by(|a, b| a.kdsi.total_cmp(&b.kdsi).then_with(|| a.id.cmp(&b.id)));
    let (est, tag, description) = estimator(&args.system, g)?;
    let (cn, ct) = cocomo_reports(&kept)?;
    let (fnom, ftot) = fuzzy_reports(&kept, &est, tag)?;
    let band = ExperimentConfig::default().deviation_band;
    let mut summary = format!(
        "dataset: {} ({} projects, {} outside the size range)\n",
        args.dataset.display(),
        data.len(),
        data.len() - kept.len()
    );
    summary.push_str(&summary_text(g.range, &[&cn, &ct, &fnom, &ftot], band));
    if let Some(dir) = &g.out {
        let meta = g.meta(format!("{description} range=[{lo}, {hi}]"));
        eval::write_tables(
            dir,
            &meta,
            &[predictions_table(&kept, [&cn, &ct, &fnom, &ftot])],
        )?;
        write_file(&dir.join("summary.txt"), &(meta.header() + &summary))?;
    }
    Ok(summary)
}

fn cmd_replicate(args: &ReplicateArgs, g: &Globals) -> CliResult<String> {
    let data = load_dataset(&args.dataset)?;
    warn_dataset(&data.warnings);
    let config = ExperimentConfig {
        artificial_count: match args.source {
            Source::Grid => None,
            Source::Artificial => Some(args.samples),
        },
        seed: g.seed,
        size_range: g.range,
        resolution: g.resolution.unwrap_or(DEFAULT_RESOLUTION),
        ..ExperimentConfig::default()
    };
    let out = run_experiment(&data.records, &config)?;
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("replicate"));
    let meta = g.meta(config.describe());
    let tables = out.tables()?;
    eval::write_tables(&dir, &meta, &tables)?;
    let summary = out.summary();
    write_file(&dir.join("summary.txt"), &(meta.header() + &summary))?;
    Ok(format!(
        "{summary}\nwrote {} tables and summary.txt to {}\n",
        tables.len(),
        dir.display()
    ))
}

fn run(cli: Cli) -> CliResult<String> {
    let g = Globals {
        seed: cli.seed,
        resolution: cli.defuzz_resolution,
        range: cli.range.unwrap_or(DEFAULT_SIZE_RANGE),
        out: cli.out,
    };
    match &cli.command {
        Command::Estimate(a) => cmd_estimate(a, &g),
        Command::BuildFis(a) => cmd_build(a, &g),
        Command::Evaluate(a) => cmd_evaluate(a, &g),
        Command::Replicate(a) => cmd_replicate(a, &g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("1:100").unwrap(), (1.0, 100.0));
        assert!(parse_range("100:1").is_err());
        assert!(parse_range("0:5").is_err());
        assert!(parse_range("5").is_err());
    }

    #[test]
    fn driver_settings() {
        assert!(
            matches!(parse_driver("stor=75"), Ok((DriverId::Stor, DriverSetting::Value(v))) if v == 75.0)
        );
        assert!(matches!(
            parse_driver("RELY=vh"),
            Ok((DriverId::Rely, DriverSetting::Level(Level::VeryHigh)))
        ));
        assert!(parse_driver("nope=h").is_err());
        assert!(parse_driver("stor").is_err());
    }
}
