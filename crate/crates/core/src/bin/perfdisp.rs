use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use perfdisp::corpus::{self, CorpusPaths};
use perfdisp::pipeline::{self, IndicatorSelection, Outputs, RunConfig};
use perfdisp::{Error, Result, SynthConfig, WeightScheme};

#[derive(Parser)]
#[command(
    name = "perfdisp",
    version,
    about = "Research performance concentration and dispersion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Inputs {
    /// Directory holding researchers.csv, publications.csv, author_links.csv and scheme.json.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    researchers: Option<PathBuf>,
    #[arg(long)]
    publications: Option<PathBuf>,
    #[arg(long)]
    links: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<PathBuf>,
}

impl Inputs {
    fn resolve(&self) -> Result<CorpusPaths> {
        let pick = |flag: &Option<PathBuf>, file: &str, name: &str| {
            flag.clone()
                .or_else(|| self.corpus.as_ref().map(|d| d.join(file)))
                .ok_or_else(|| Error::Config(format!("missing --{name} (or --corpus)")))
        };
        Ok(CorpusPaths {
            researchers: pick(&self.researchers, corpus::RESEARCHERS_FILE, "researchers")?,
            publications: pick(
                &self.publications,
                corpus::PUBLICATIONS_FILE,
                "publications",
            )?,
            links: pick(&self.links, corpus::LINKS_FILE, "links")?,
            scheme: pick(&self.scheme, corpus::SCHEME_FILE, "scheme")?,
        })
    }
}

#[derive(Args, Clone)]
struct Analysis {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, env = "PERFDISP_OUT", default_value = "perfdisp-out")]
    out: PathBuf,
    /// Minimum fraction of publishing researchers for an SDS to be kept.
    #[arg(long, default_value_t = 0.5)]
    active_threshold: f64,
    /// Minimum researchers for a university population to be analysed.
    #[arg(long, default_value_t = 5)]
    min_staff: usize,
    /// Author share scheme: uniform or positional.
    #[arg(long, default_value = "uniform")]
    weights: WeightScheme,
    /// P, SS or both.
    #[arg(long, default_value = "both")]
    indicator: IndicatorSelection,
    #[arg(long, default_value_t = perfdisp::dispersion::DEFAULT_PERMUTATIONS)]
    permutations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Analysis {
    fn config(&self) -> Result<RunConfig> {
        let mut c = RunConfig::new(self.inputs.resolve()?, &self.out);
        c.active_threshold = self.active_threshold;
        c.min_staff = self.min_staff;
        c.weights = self.weights;
        c.indicators = self.indicator;
        c.permutations = self.permutations;
        c.seed = self.seed;
        Ok(c)
    }
}

#[derive(Args)]
struct SynthArgs {
    /// JSON generator configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, env = "PERFDISP_OUT", default_value = "perfdisp-out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    universities: Option<usize>,
    #[arg(long)]
    sds: Option<usize>,
    #[arg(long)]
    uda: Option<usize>,
    #[arg(long)]
    skew: Option<f64>,
    #[arg(long)]
    sorting_strength: Option<f64>,
    #[arg(long)]
    citation_dispersion: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a corpus, write dataset and SDS-filter summaries.
    Validate(Analysis),
    /// Generate a synthetic corpus.
    Synth(SynthArgs),
    /// Researcher, SDS, UDA and university scores.
    Score(Analysis),
    /// Gini, Lorenz and bottom/top ratios at every level.
    Concentration(Analysis),
    /// Coefficients of variation, rank correlations and the permutation test.
    Dispersion(Analysis),
    /// Reallocation scenario and divergence tables.
    Counterfactual(Analysis),
    /// Every stage end to end.
    Run(Analysis),
    /// Descriptive rollups of the per-UDA Gini and CV distributions.
    Report(Analysis),
}

fn stage(
    a: &Analysis,
    f: impl FnOnce(&pipeline::Prepared, &RunConfig) -> Result<Outputs>,
) -> Result<()> {
    let config = a.config()?;
    let prepared = pipeline::prepare(&config)?;
    let outputs = f(&prepared, &config)?;
    let manifest = pipeline::write_outputs(&config, &outputs)?;
    println!(
        "wrote {} files to {}",
        manifest.files.len() + 1,
        config.out_dir.display()
    );
    Ok(())
}

fn synth(args: &SynthArgs) -> Result<()> {
    let mut c = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Output {
                path: path.clone(),
                source,
            })?;
            serde_json::from_str::<SynthConfig>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => SynthConfig::default(),
    };
    c.seed = args.seed.unwrap_or(c.seed);
    c.n_universities = args.universities.unwrap_or(c.n_universities);
    c.n_sds = args.sds.unwrap_or(c.n_sds);
    c.n_uda = args.uda.unwrap_or(c.n_uda);
    c.skew = args.skew.unwrap_or(c.skew);
    c.sorting_strength = args.sorting_strength.unwrap_or(c.sorting_strength);
    c.citation_dispersion = args.citation_dispersion.unwrap_or(c.citation_dispersion);
    let corpus = perfdisp::synth::generate(&c)?;
    std::fs::create_dir_all(&args.out).map_err(|source| Error::Output {
        path: args.out.clone(),
        source,
    })?;
    corpus::write_corpus(&corpus, &CorpusPaths::in_dir(&args.out)).map_err(|source| {
        Error::Output {
            path: args.out.clone(),
            source,
        }
    })?;
    println!(
        "{} researchers, {} publications written to {}",
        corpus.researcher_count(),
        corpus.publication_count(),
        args.out.display()
    );
    Ok(())
}

fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Validate(a) => stage(a, |p, _| {
            println!(
                "{} researchers, {} publications, {} SDS kept, {} dropped",
                p.corpus.researcher_count(),
                p.corpus.publication_count(),
                p.activity.sds.iter().filter(|s| s.kept).count(),
                p.activity.dropped().count()
            );
            Ok(pipeline::validate_outputs(p))
        }),
        Command::Synth(args) => synth(args),
        Command::Score(a) => stage(a, |p, _| Ok(pipeline::score_outputs(p))),
        Command::Concentration(a) => stage(a, |p, c| {
            let reports = pipeline::concentration_reports(p, c)?;
            Ok(pipeline::concentration_outputs(p, &reports))
        }),
        Command::Dispersion(a) => stage(a, |p, c| {
            let reports = pipeline::concentration_reports(p, c)?;
            pipeline::dispersion_outputs(p, &reports, c)
        }),
        Command::Counterfactual(a) => stage(a, |p, c| {
            let reports = pipeline::concentration_reports(p, c)?;
            pipeline::counterfactual_outputs(p, &reports, c)
        }),
        Command::Run(a) => {
            let config = a.config()?;
            let manifest = pipeline::run_pipeline(&config)?;
            println!(
                "wrote {} files to {}",
                manifest.files.len() + 1,
                config.out_dir.display()
            );
            Ok(())
        }
        Command::Report(a) => stage(a, pipeline::report_outputs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
