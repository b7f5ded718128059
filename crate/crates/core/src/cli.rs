use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

use eventgraph::entities::EntityCatalog;
use eventgraph::interlink::{build_index, interlink};
use eventgraph::lexicon::Lexicon;
use eventgraph::model::{validate_data_model, DataModelDescriptor, FrameRegistry, TripleSet};
use eventgraph::pipeline::{extract, Extractor, PipelineConfig};
use eventgraph::query::{run_query, QueryFilter};
use eventgraph::triplify::{parse_ntriples, serialize_ntriples, serialize_turtle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FATAL: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "eventgraph", version, about = "Build an RDF graph of interlinked events from news headlines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract events from a headline file into events.nt
    Extract(ExtractArgs),
    /// Compute sameAs / related links between extracted events
    Interlink(InterlinkArgs),
    /// Check a data-model descriptor against the four modeling requirements
    Validate(ValidateArgs),
    /// Filter the events of a graph
    Query(QueryArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Tab-separated records: id, publisher, date, text
    #[arg(long)]
    pub input: PathBuf,
    /// Verb lexicon (defaults to the shipped one)
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Entity catalog (defaults to the shipped one)
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also write events.ttl
    #[arg(long)]
    pub turtle: bool,
}

#[derive(Debug, Args)]
pub struct InterlinkArgs {
    #[arg(long)]
    pub events: PathBuf,
    /// Output path (defaults to links.nt next to the events file)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub same_window_hours: Option<f64>,
    #[arg(long)]
    pub same_jaccard: Option<f64>,
    #[arg(long)]
    pub related_horizon_days: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub descriptor: PathBuf,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub events: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Repeatable or comma-separated; matches any
    #[arg(long, value_delimiter = ',')]
    pub publisher: Vec<String>,
    #[arg(long)]
    pub class: Option<String>,
    /// Inclusive, YYYY-MM-DD
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Inclusive, YYYY-MM-DD
    #[arg(long)]
    pub to: Option<NaiveDate>,
    #[arg(long)]
    pub location: Option<String>,
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Extract(a) => cmd_extract(&a),
        Command::Interlink(a) => cmd_interlink(&a),
        Command::Validate(a) => cmd_validate(&a),
        Command::Query(a) => cmd_query(&a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        EXIT_FATAL
    })
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::load(p).with_context(|| format!("loading config {}", p.display())),
        None => Ok(PipelineConfig::default()),
    }
}

fn load_graph(path: &Path) -> Result<TripleSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_ntriples(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_extract(a: &ExtractArgs) -> Result<i32> {
    // everything is loaded before any output file is created
    let config = load_config(a.config.as_deref())?;
    let lexicon = match &a.lexicon {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading lexicon {}", p.display()))?;
            Lexicon::parse(&text, &FrameRegistry::default()).with_context(|| format!("lexicon {}", p.display()))?
        }
        None => Lexicon::builtin(),
    };
    let catalog = match &a.catalog {
        Some(p) => EntityCatalog::load(p)?,
        None => EntityCatalog::builtin(),
    };
    let input = fs::read_to_string(&a.input).with_context(|| format!("reading input {}", a.input.display()))?;
    log::info!("lexicon {} with {} lemmas, catalog with {} entities", lexicon.version(), lexicon.len(), catalog.len());

    let ex = Extractor::new(lexicon, catalog, config);
    let out = extract(&ex, &input);

    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let write = |name: &str, body: String| -> Result<()> {
        let path = a.out_dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
    };
    write("events.nt", serialize_ntriples(&out.graph))?;
    write("skipped.tsv", out.skip_log())?;
    write("audit.log", out.audit_log())?;
    if a.turtle {
        write("events.ttl", serialize_turtle(&out.graph, &ex.config.iri))?;
    }
    println!("{}", out.summary());
    Ok(if out.skipped.is_empty() { EXIT_OK } else { EXIT_PARTIAL })
}

fn cmd_interlink(a: &InterlinkArgs) -> Result<i32> {
    let mut config = load_config(a.config.as_deref())?;
    let link = &mut config.interlink;
    if let Some(v) = a.same_window_hours {
        link.same_window_hours = v;
    }
    if let Some(v) = a.same_jaccard {
        link.same_jaccard = v;
    }
    if let Some(v) = a.related_horizon_days {
        link.related_horizon_days = v;
    }
    // thresholds above 1 are accepted here; they simply never match
    if !(link.same_window_hours.is_finite() && link.same_window_hours >= 0.0)
        || !(link.related_horizon_days.is_finite() && link.related_horizon_days >= 0.0)
        || link.same_jaccard.is_nan()
    {
        anyhow::bail!("window and horizon must be finite and non-negative");
    }
    let graph = load_graph(&a.events)?;
    let entries = build_index(&graph, &config.iri)?;
    let links = interlink(&entries, &config.interlink);
    let out = a.out.clone().unwrap_or_else(|| a.events.with_file_name("links.nt"));
    fs::write(&out, serialize_ntriples(&links.triples())).with_context(|| format!("writing {}", out.display()))?;
    println!("sameas={} related={}", links.same.len(), links.related.len());
    Ok(EXIT_OK)
}

fn cmd_validate(a: &ValidateArgs) -> Result<i32> {
    let descriptor = DataModelDescriptor::load(&a.descriptor)?;
    let report = validate_data_model(&descriptor);
    print!("{report}");
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_PARTIAL })
}

fn cmd_query(a: &QueryArgs) -> Result<i32> {
    let config = load_config(a.config.as_deref())?;
    let graph = load_graph(&a.events)?;
    let filter = QueryFilter {
        publishers: a.publisher.iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect(),
        class: a.class.clone(),
        from: a.from,
        to: a.to,
        location: a.location.clone(),
    };
    for row in run_query(&graph, &config.iri, &filter)? {
        println!("{}", row.to_tsv());
    }
    Ok(EXIT_OK)
}
