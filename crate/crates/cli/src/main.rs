use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use duelbias::config::AnalysisConfig;
use duelbias::error::{Error, Result};
use duelbias::input::{self, Input, ItemCatalog};
use duelbias::mapping::ColumnMapping;
use duelbias::output::{self, OutputDir, Report};
use duelbias::pipeline;
use duelbias_core::bias::BiasScale;
use duelbias_core::bootstrap::ResampleUnit;

/// Bias between two item populations, measured from pairwise duels.
#[derive(Debug, Parser)]
#[command(name = "duelbias", version)]
struct Cli {
    /// TOML analysis config; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: config `output_dir`, then $DUELBIAS_OUT_DIR, then ./duelbias-out].
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// TOML column mapping for CSV layouts that differ from the canonical headers.
    #[arg(long, global = true)]
    mapping: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank recovery of a balanced design versus comparison budget.
    Simulate(SimulateArgs),
    /// Balanced A-vs-B duel schedule for each category of a catalog.
    Design(DesignArgs),
    /// Bradley-Terry scores for every (category, dimension) tournament.
    Fit(FitArgs),
    /// Score-, rank- and outcome-level bias with bootstrap intervals.
    Bias(BiasArgs),
    /// Win fractions, binomial tests and per-rater statistics; no fitting.
    Duelstats(DuelstatsArgs),
    /// Tags most distinctive of each group.
    Tags(TagsArgs),
    /// Category frequencies of both groups and their rank correlation.
    Freq(FreqArgs),
    /// Every analysis in one report bundle.
    Run(RunArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Total number of items, split evenly between the groups.
    #[arg(long, default_value_t = 100)]
    items: usize,
    /// Comparison budgets (total duels).
    #[arg(long, value_delimiter = ',', default_value = "100,200,500,1000,2000")]
    budgets: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    replicates: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct DesignArgs {
    #[arg(long)]
    items: PathBuf,
    #[arg(long)]
    duels_per_item: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Never pair the same two items twice.
    #[arg(long)]
    distinct: bool,
    #[arg(long)]
    category: Vec<String>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    items: PathBuf,
    #[arg(long)]
    duels: PathBuf,
    #[arg(long)]
    category: Vec<String>,
    #[arg(long)]
    dimension: Vec<String>,
    /// Pseudo-count against the virtual reference item.
    #[arg(long)]
    regularization: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Unit {
    Duel,
    Item,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scale {
    Log,
    Raw,
}

#[derive(Debug, Args)]
struct BiasFlags {
    /// Bootstrap replicates.
    #[arg(long)]
    bootstrap: Option<usize>,
    #[arg(long, value_enum)]
    unit: Option<Unit>,
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long, value_enum)]
    scale: Option<Scale>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    category: Vec<String>,
}

#[derive(Debug, Args)]
struct BiasArgs {
    #[arg(long)]
    items: PathBuf,
    #[arg(long)]
    duels: PathBuf,
    #[command(flatten)]
    flags: BiasFlags,
}

#[derive(Debug, Args)]
struct DuelstatsArgs {
    #[arg(long)]
    duels: PathBuf,
    /// Catalog to validate against; without it `item_a` is taken as group A.
    #[arg(long)]
    items: Option<PathBuf>,
    #[arg(long)]
    category: Vec<String>,
}

#[derive(Debug, Args)]
struct TagFlags {
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long)]
    min_count: Option<u64>,
    /// Yates continuity correction in the chi-square tests.
    #[arg(long)]
    yates: bool,
}

#[derive(Debug, Args)]
struct TagsArgs {
    #[arg(long)]
    tags: PathBuf,
    #[arg(long)]
    items: PathBuf,
    #[command(flatten)]
    flags: TagFlags,
    #[arg(long)]
    category: Vec<String>,
}

#[derive(Debug, Args)]
struct FreqArgs {
    #[arg(long)]
    items: PathBuf,
    #[arg(long)]
    category: Vec<String>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    items: PathBuf,
    #[arg(long)]
    duels: PathBuf,
    #[arg(long)]
    tags: Option<PathBuf>,
    #[command(flatten)]
    bias: BiasFlags,
    #[command(flatten)]
    tag_flags: TagFlags,
}

impl BiasFlags {
    fn apply(&self, config: &mut AnalysisConfig) {
        if let Some(b) = self.bootstrap {
            config.bootstrap.replicates = b;
        }
        if let Some(u) = self.unit {
            config.bootstrap.unit = match u {
                Unit::Duel => ResampleUnit::Duel,
                Unit::Item => ResampleUnit::Item,
            };
        }
        if let Some(c) = self.confidence {
            config.bootstrap.confidence = c;
        }
        if let Some(s) = self.scale {
            config.scale = match s {
                Scale::Log => BiasScale::Log,
                Scale::Raw => BiasScale::Raw,
            };
        }
        override_seed(config, self.seed);
        override_categories(config, &self.category);
    }
}

impl TagFlags {
    fn apply(&self, config: &mut AnalysisConfig) {
        if let Some(k) = self.top_k {
            config.tags.top_k = k;
        }
        if let Some(m) = self.min_count {
            config.tags.min_count = m;
        }
        if self.yates {
            config.tags.yates = true;
        }
    }
}

fn override_seed(config: &mut AnalysisConfig, seed: Option<u64>) {
    if seed.is_some() {
        config.seed = seed;
    }
}

fn override_categories(config: &mut AnalysisConfig, categories: &[String]) {
    if !categories.is_empty() {
        config.categories = categories.to_vec();
    }
}

struct Session {
    config: AnalysisConfig,
    mapping: ColumnMapping,
    out: PathBuf,
}

impl Session {
    fn open(&self) -> Result<OutputDir> {
        OutputDir::create(&self.out)
    }

    fn catalog(&self, path: &Path) -> Result<(Input, ItemCatalog)> {
        let input = Input::read(path)?;
        let catalog = input::parse_items(&input, &self.mapping)?;
        Ok((input, catalog))
    }

    fn duels(&self, path: &Path, catalog: &ItemCatalog) -> Result<(Input, Vec<duelbias_core::bias::DuelRecord>)> {
        let input = Input::read(path)?;
        let duels = input::parse_duels(&input, catalog, &self.config.dimensions, &self.mapping)?;
        Ok((input, duels))
    }
}

fn announce(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn simulate(s: Session, args: SimulateArgs) -> Result<()> {
    let mut config = s.config.clone();
    override_seed(&mut config, args.seed);
    let seed = config.require_seed()?;
    if args.items < 2 || args.items % 2 != 0 {
        return Err(Error::Validation(format!("--items must be an even number of at least 2, got {}", args.items)));
    }
    let curve = pipeline::simulate(args.items / 2, &args.budgets, args.replicates, seed, &config.fit)?;
    for (b, (m, sd)) in curve.budgets.iter().zip(curve.mean_tau.iter().zip(&curve.std_tau)) {
        println!("budget {b:>7}  tau {m:.4} (sd {sd:.4})");
    }
    let out = s.open()?;
    announce(&[
        out.write_csv("recovery_curve.csv", output::recovery_rows(&curve))?,
        out.write_json("simulate.json", &Report::new("simulate", &config, &[], &curve))?,
    ]);
    Ok(())
}

fn design(mut s: Session, args: DesignArgs) -> Result<()> {
    override_seed(&mut s.config, args.seed);
    override_categories(&mut s.config, &args.category);
    let (items_in, catalog) = s.catalog(&args.items)?;
    let plans = pipeline::design(&catalog, &s.config, args.duels_per_item, args.distinct)?;
    for (category, plan) in &plans {
        println!("{category}: {} duels", plan.pairs.len());
    }
    let out = s.open()?;
    let report = Report::new("design", &s.config, &[("items", &items_in)], &plans);
    announce(&[
        out.write_csv("schedule.csv", output::schedule_rows(&plans))?,
        out.write_json("design.json", &report)?,
    ]);
    Ok(())
}

fn fit(mut s: Session, args: FitArgs) -> Result<()> {
    override_categories(&mut s.config, &args.category);
    if let Some(r) = args.regularization {
        s.config.fit.regularization = r;
    }
    s.config.fit.validate()?;
    let (items_in, catalog) = s.catalog(&args.items)?;
    let (duels_in, duels) = s.duels(&args.duels, &catalog)?;
    let mut grouped = pipeline::tournaments(&s.config, &catalog, &duels)?;
    if !args.dimension.is_empty() {
        grouped.retain(|d, _| args.dimension.contains(d));
    }
    let entries = pipeline::fit_all(&grouped, &s.config.fit)?;
    for e in &entries {
        println!(
            "{} / {}: {} items, {} iterations{}",
            e.category,
            e.dimension,
            e.table.len(),
            e.table.iterations,
            if e.table.converged { "" } else { " (not converged)" }
        );
    }
    let out = s.open()?;
    let report = Report::new("fit", &s.config, &[("items", &items_in), ("duels", &duels_in)], &entries);
    announce(&[
        out.write_csv("score_tables.csv", output::score_rows(&entries, &catalog))?,
        out.write_json("fit.json", &report)?,
    ]);
    Ok(())
}

fn bias(mut s: Session, args: BiasArgs) -> Result<()> {
    args.flags.apply(&mut s.config);
    let bias_config = s.config.bias_config()?;
    let (items_in, catalog) = s.catalog(&args.items)?;
    let (duels_in, duels) = s.duels(&args.duels, &catalog)?;
    let grouped = pipeline::tournaments(&s.config, &catalog, &duels)?;
    let mut reports = Vec::new();
    for (dimension, list) in &grouped {
        let (report, _) = pipeline::analyze_dimension(dimension, list, &bias_config)?;
        let b = &report.score_bias;
        println!(
            "{dimension}: bias {:.3} [{:.3}, {:.3}], median percentile {:.1} [{:.1}, {:.1}], B wins {:.2}%",
            b.point,
            b.low,
            b.high,
            report.median_percentile.point,
            report.median_percentile.low,
            report.median_percentile.high,
            100.0 * report.win_fraction.fraction
        );
        reports.push(report);
    }
    let out = s.open()?;
    let report = Report::new("bias", &s.config, &[("items", &items_in), ("duels", &duels_in)], &reports);
    announce(&[
        out.write_csv("bias_summary.csv", output::bias_rows(&reports))?,
        out.write_csv("rank_curves.csv", output::curve_rows(&reports))?,
        out.write_json("bias.json", &report)?,
    ]);
    Ok(())
}

fn duelstats(mut s: Session, args: DuelstatsArgs) -> Result<()> {
    override_categories(&mut s.config, &args.category);
    let (mut inputs, catalog) = match &args.items {
        Some(path) => {
            let (input, catalog) = s.catalog(path)?;
            (vec![("items", input)], catalog)
        }
        None => (Vec::new(), input::infer_catalog(&Input::read(&args.duels)?, &s.mapping)?),
    };
    let (duels_in, duels) = s.duels(&args.duels, &catalog)?;
    pipeline::check_references(&catalog, &duels)?;
    let stats = pipeline::duel_stats(&duels, &s.config.categories)?;
    for d in &stats {
        println!(
            "{}: B wins {}/{} = {:.2}% (p {}), rater macro mean {:.2}%",
            d.dimension,
            d.win_fraction.wins,
            d.win_fraction.n,
            100.0 * d.win_fraction.fraction,
            d.win_fraction.p,
            100.0 * d.raters.macro_mean
        );
    }
    inputs.push(("duels", duels_in));
    let refs: Vec<(&str, &Input)> = inputs.iter().map(|(r, i)| (*r, i)).collect();
    let out = s.open()?;
    let report = Report::new("duelstats", &s.config, &refs, &stats);
    announce(&[
        out.write_csv("rater_histogram.csv", output::histogram_rows(&stats))?,
        out.write_json("duelstats.json", &report)?,
    ]);
    Ok(())
}

fn tags(mut s: Session, args: TagsArgs) -> Result<()> {
    args.flags.apply(&mut s.config);
    override_categories(&mut s.config, &args.category);
    let normalizer = s.config.normalizer()?;
    let (items_in, catalog) = s.catalog(&args.items)?;
    let tags_in = Input::read(&args.tags)?;
    let records = input::parse_tags(&tags_in, &catalog, &s.mapping)?;
    let report = pipeline::tag_analysis(&records, &catalog, &normalizer, &s.config)?;
    for (group, list) in [("A", &report.a), ("B", &report.b)] {
        let top: Vec<String> = list.iter().take(5).map(|t| format!("{}{}", t.tag, t.stars)).collect();
        println!("typical of {group}: {}", top.join(", "));
    }
    let out = s.open()?;
    let envelope = Report::new("tags", &s.config, &[("items", &items_in), ("tags", &tags_in)], &report);
    announce(&[
        out.write_csv("tag_rankings.csv", output::tag_rows(&report))?,
        out.write_json("tags.json", &envelope)?,
    ]);
    Ok(())
}

fn freq(mut s: Session, args: FreqArgs) -> Result<()> {
    override_categories(&mut s.config, &args.category);
    let (items_in, catalog) = s.catalog(&args.items)?;
    let comparison = pipeline::frequency(&catalog, &s.config)?;
    match &comparison.spearman {
        Some(c) => println!("spearman rho {:.3} (p {})", c.coefficient, c.p),
        None => println!("spearman rho undefined (constant column or fewer than three categories)"),
    }
    let out = s.open()?;
    let report = Report::new("freq", &s.config, &[("items", &items_in)], &comparison);
    announce(&[
        out.write_csv("frequency.csv", output::frequency_rows(&comparison))?,
        out.write_json("frequency.json", &report)?,
    ]);
    Ok(())
}

fn run(mut s: Session, args: RunArgs) -> Result<()> {
    args.bias.apply(&mut s.config);
    args.tag_flags.apply(&mut s.config);
    s.config.bias_config()?;
    let (items_in, catalog) = s.catalog(&args.items)?;
    let (duels_in, duels) = s.duels(&args.duels, &catalog)?;
    let tags = args
        .tags
        .as_ref()
        .map(|p| -> Result<_> {
            let input = Input::read(p)?;
            let records = input::parse_tags(&input, &catalog, &s.mapping)?;
            Ok((input, records))
        })
        .transpose()?;
    let bundle = pipeline::run_pipeline(&s.config, &catalog, &duels, tags.as_ref().map(|(_, r)| r.as_slice()))?;
    let mut inputs = vec![("items", &items_in), ("duels", &duels_in)];
    if let Some((input, _)) = &tags {
        inputs.push(("tags", input));
    }
    let out = s.open()?;
    let mut written = vec![
        out.write_csv("score_tables.csv", output::score_rows(&bundle.score_tables, &catalog))?,
        out.write_csv("bias_summary.csv", output::bias_rows(&bundle.bias))?,
        out.write_csv("rank_curves.csv", output::curve_rows(&bundle.bias))?,
        out.write_csv("rater_histogram.csv", output::histogram_rows(&bundle.duel_stats))?,
    ];
    if let Some(f) = &bundle.frequency {
        written.push(out.write_csv("frequency.csv", output::frequency_rows(f))?);
    }
    if let Some(t) = &bundle.tags {
        written.push(out.write_csv("tag_rankings.csv", output::tag_rows(t))?);
    }
    written.push(out.write_json("report.json", &Report::new("run", &s.config, &inputs, &bundle))?);
    println!(
        "{} tournaments, {} dimensions, {} duels",
        bundle.score_tables.len(),
        bundle.bias.len(),
        duels.len()
    );
    announce(&written);
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    let config = AnalysisConfig::load_or_default(cli.config.as_deref())?;
    let mapping = match &cli.mapping {
        Some(p) => ColumnMapping::load(p)?,
        None => ColumnMapping::default(),
    };
    let out = config.output_dir(cli.out_dir.as_deref());
    let s = Session { config, mapping, out };
    match cli.command {
        Command::Simulate(a) => simulate(s, a),
        Command::Design(a) => design(s, a),
        Command::Fit(a) => fit(s, a),
        Command::Bias(a) => bias(s, a),
        Command::Duelstats(a) => duelstats(s, a),
        Command::Tags(a) => tags(s, a),
        Command::Freq(a) => freq(s, a),
        Command::Run(a) => run(s, a),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
