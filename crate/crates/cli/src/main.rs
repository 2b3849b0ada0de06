//! `binselect`: run binary sine cosine feature selection experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or runtime error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use binselect::experiment::{
    self, baseline, friedman_mean_ranks, friedman_statistic, render_comparison, render_table, Direction,
    ExperimentConfig, Metric, PreparedData, SummaryRow, TableFormat,
};
use binselect::{Manifest, TransferKind};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "binselect", version, about = "Binary sine cosine wrapper feature selection")]
struct Cli {
    /// Dataset manifest (falls back to $BINSELECT_MANIFEST, then ./datasets.toml)
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    /// Worker threads for independent runs (default: available parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Repeated runs of one variant on one dataset
    Run(RunArgs),
    /// Both variants over several datasets, compared with the reference algorithms
    Bench(BenchArgs),
    /// Friedman mean ranks of a datasets x algorithms score table
    Rank(RankArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    S,
    V,
}

impl From<Variant> for TransferKind {
    fn from(v: Variant) -> Self {
        match v {
            Variant::S => TransferKind::SShaped,
            Variant::V => TransferKind::VShaped,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => TableFormat::Text,
            Format::Csv => TableFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Higher,
    Lower,
}

/// Options shared by `run` and `bench`; anything unset falls back to the
/// config file, then to the built-in defaults.
#[derive(Debug, Args)]
struct Overrides {
    /// TOML file with experiment settings
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Base seed; run i uses seed + i
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    split_seed: Option<u64>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    #[command(flatten)]
    overrides: Overrides,
    /// Write the summary row as CSV
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for per-run convergence traces
    #[arg(long)]
    traces: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated dataset ids or names (default: every manifest entry)
    #[arg(long, value_delimiter = ',')]
    datasets: Option<Vec<String>>,
    #[command(flatten)]
    overrides: Overrides,
    /// Recompute rank rows from the reference tables without optimizing
    #[arg(long)]
    rank_only: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Directory for accuracy.csv, features.csv and summary.csv
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RankArgs {
    /// CSV with header dataset,<alg>,<alg>,... and one row per dataset
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    direction: DirectionArg,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<binselect::Error> for Failure {
    fn from(e: binselect::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage_error(msg: impl Into<String>, subcommand: &str) -> Failure {
    let mut cmd = Cli::command();
    cmd.build();
    let usage = cmd
        .find_subcommand_mut(subcommand)
        .map(|c| c.render_usage().to_string())
        .unwrap_or_default();
    Failure::Usage(format!("error: {}\n\n{usage}", msg.into()))
}

fn build_config(base: ExperimentConfig, o: &Overrides) -> CliResult<ExperimentConfig> {
    let mut c = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_toml(&text)?
        }
        None => base,
    };
    if let Some(v) = o.runs {
        c.runs = v;
    }
    if let Some(v) = o.pop {
        c.population = v;
    }
    if let Some(v) = o.iters {
        c.iterations = v;
    }
    if let Some(v) = o.k {
        c.k = v;
    }
    if let Some(v) = o.alpha {
        c.alpha = v;
    }
    if let Some(v) = o.seed {
        c.base_seed = v;
    }
    if let Some(v) = o.split_seed {
        c.split_seed = v;
    }
    Ok(c)
}

fn load_manifest(explicit: Option<&Path>) -> CliResult<Manifest> {
    let path = Manifest::resolve_path(explicit);
    Ok(Manifest::load(&path)?)
}

fn prepare(manifest: &Manifest, dataset: &str, config: &ExperimentConfig) -> CliResult<(String, PreparedData)> {
    let entry = manifest.get(dataset)?;
    let file = manifest.file_path(entry);
    if !file.exists() {
        return Err(Failure::Runtime(format!(
            "dataset file {} for {:?} not found",
            file.display(),
            entry.id
        )));
    }
    let ds = manifest.load_dataset(dataset)?;
    let data = PreparedData::new(&ds, config.test_fraction, config.split_seed)?;
    Ok((entry.display_name().to_owned(), data))
}

fn cmd_run(args: RunArgs, manifest: Option<&Path>) -> CliResult<()> {
    let mut config = build_config(ExperimentConfig::default(), &args.overrides)?;
    if let Some(d) = args.dataset {
        config.dataset = d;
    }
    if let Some(v) = args.variant {
        config.variant = v.into();
    }
    if config.dataset.is_empty() {
        return Err(usage_error("the following required argument was not provided: --dataset <DATASET>", "run"));
    }
    config.validate()?;
    let manifest = load_manifest(manifest)?;
    let (name, data) = prepare(&manifest, &config.dataset, &config)?;

    let started = Instant::now();
    let records = experiment::run_prepared(&data, &config)?;
    eprintln!("{} runs in {:.1?}", records.len(), started.elapsed());

    if let Some(dir) = &args.traces {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", dir.display())))?;
        for (i, r) in records.iter().enumerate() {
            let file = dir.join(format!("{}_{}_run{:02}.csv", slug(&name), config.variant, i));
            experiment::write_trace(file, r)?;
        }
    }
    let row = experiment::summarize(&name, config.variant.algorithm(), &records)?;
    if let Some(out) = &args.out {
        experiment::write_text(out, &render_table(std::slice::from_ref(&row), None, TableFormat::Csv))?;
    }
    print!("{}", render_table(&[row], None, TableFormat::Text));
    Ok(())
}

fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect()
}

fn print_tables(rows: &[SummaryRow], format: TableFormat, out_dir: Option<&Path>) -> CliResult<()> {
    let mut outputs = Vec::new();
    for (metric, title, file) in [
        (Metric::Accuracy, "Average classification accuracy", "accuracy.csv"),
        (Metric::Features, "Average number of selected features", "features.csv"),
    ] {
        let ranks = match experiment::rank_rows(rows, metric) {
            Ok(r) => Some(r),
            Err(e) => {
                eprintln!("warning: no rank row for {title}: {e}");
                None
            }
        };
        if format == TableFormat::Text {
            println!("{title}");
        }
        print!("{}", render_comparison(rows, metric, ranks.as_ref(), format));
        if let Some(r) = &ranks {
            let s = friedman_statistic(r);
            eprintln!(
                "{title}: chi-square {:.4} (df {}), p = {:.4}",
                s.chi_square, s.degrees_of_freedom, s.p_value
            );
        }
        println!();
        outputs.push((file, render_comparison(rows, metric, ranks.as_ref(), TableFormat::Csv)));
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", dir.display())))?;
        for (file, text) in outputs {
            experiment::write_text(dir.join(file), &text)?;
        }
        experiment::write_text(dir.join("summary.csv"), &render_table(rows, None, TableFormat::Csv))?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs, manifest: Option<&Path>) -> CliResult<()> {
    let format = TableFormat::from(args.format);
    if args.rank_only {
        return print_tables(&baseline::reference_rows(), format, args.out_dir.as_deref());
    }
    let config = build_config(ExperimentConfig::default(), &args.overrides)?;
    config.validate()?;
    let manifest = load_manifest(manifest)?;
    let names: Vec<String> = match args.datasets {
        Some(list) => list,
        None => manifest.entries().iter().map(|e| e.id.clone()).collect(),
    };
    let mut rows = Vec::new();
    for dataset in &names {
        let (name, data) = prepare(&manifest, dataset, &config)?;
        for alg in baseline::COMPARISON_ALGORITHMS {
            if let Some(r) = baseline::reference_row(&name, alg) {
                rows.push(r);
            }
        }
        for kind in [TransferKind::SShaped, TransferKind::VShaped] {
            let cfg = ExperimentConfig { dataset: dataset.clone(), variant: kind, ..config.clone() };
            let started = Instant::now();
            let records = experiment::run_prepared(&data, &cfg)?;
            eprintln!("{name} {}: {} runs in {:.1?}", kind.algorithm(), records.len(), started.elapsed());
            rows.push(experiment::summarize(&name, kind.algorithm(), &records)?);
        }
    }
    print_tables(&rows, format, args.out_dir.as_deref())
}

fn cmd_rank(args: RankArgs) -> CliResult<()> {
    let table = experiment::read_scores(&args.input)?;
    let direction = match args.direction {
        DirectionArg::Higher => Direction::Higher,
        DirectionArg::Lower => Direction::Lower,
    };
    let ranks = friedman_mean_ranks(&table.scores, &table.algorithms, direction)?;
    let width = ranks.algorithms.iter().map(String::len).max().unwrap_or(0).max(9);
    println!("{:<width$}  mean_rank", "algorithm");
    for (a, r) in ranks.algorithms.iter().zip(&ranks.mean_ranks) {
        println!("{a:<width$}  {r:.2}");
    }
    let s = friedman_statistic(&ranks);
    println!(
        "datasets={} chi_square={:.4} df={} p_value={:.4}",
        ranks.datasets_used, s.chi_square, s.degrees_of_freedom, s.p_value
    );
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let manifest = cli.manifest.as_deref();
    match cli.command {
        Command::Run(a) => cmd_run(a, manifest),
        Command::Bench(a) => cmd_bench(a, manifest),
        Command::Rank(a) => cmd_rank(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| dispatch(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
