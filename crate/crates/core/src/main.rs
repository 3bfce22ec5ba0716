use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ldp::catalog::{read_catalog, verify_record, Catalog, ClassificationTable, Query};
use ldp::invariants::invariant_set;
use ldp::polygon::parse_points;
use ldp::{canonical, Error, Polygon, Requirement};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "ldp", version, about = "Classify LDP-polygons up to GL(2,Z) equivalence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify by index or by maximal local index and write a catalog.
    Classify(ClassifyArgs),
    /// Print the invariants of a polygon as JSON.
    Invariants(PolygonArg),
    /// Print the canonical vertex list of a polygon.
    NormalForm(PolygonArg),
    /// Print class and triangle counts for every index up to a maximum.
    Table {
        #[arg(long)]
        max_index: i64,
        /// Print only the JSON form.
        #[arg(long)]
        json: bool,
    },
    /// Recompute and bound-check every record of a catalog.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Brute-force reference enumeration.
    #[command(hide = true)]
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    Classify {
        #[arg(long)]
        index: i64,
        #[arg(long = "box")]
        box_size: i64,
    },
}

#[derive(Args)]
struct PolygonArg {
    /// Vertices as a JSON list, e.g. '[[1,0],[0,1],[-1,-1]]'.
    #[arg(long)]
    polygon: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Classify LDP-polygons of exactly this index.
    #[arg(long, group = "query")]
    index: Option<i64>,
    /// Classify LDP-polygons with every local index at most this value.
    #[arg(long, group = "query")]
    max_local_index: Option<i64>,
    /// Order bound for a direct order/volume search (requires --volume).
    #[arg(long, group = "query", requires = "volume", hide_short_help = true)]
    order: Option<i64>,
    /// Volume bound for a direct order/volume search.
    #[arg(long, requires = "order", hide_short_help = true)]
    volume: Option<i64>,
    /// Worker threads (default: all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::ResourceLimit(_)) { EXIT_RESOURCE } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_polygon(text: &str) -> Result<Polygon, Failure> {
    Ok(Polygon::new(&parse_points(text)?, Requirement::Ip)?)
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Classify(args) => classify(args),
        Command::Invariants(p) => {
            let inv = invariant_set(&parse_polygon(&p.polygon)?)?;
            println!("{}", serde_json::to_string(&inv).expect("serialisable"));
            Ok(0)
        }
        Command::NormalForm(p) => {
            println!("{}", canonical(&parse_polygon(&p.polygon)?)?);
            Ok(0)
        }
        Command::Table { max_index, json } => {
            let table = ClassificationTable::compute(max_index)?;
            if !json {
                print!("{table}");
            }
            println!("{}", table.to_json());
            Ok(0)
        }
        Command::Verify { input } => verify(input),
        Command::Oracle { command: OracleCommand::Classify { index, box_size } } => {
            let start = Instant::now();
            let classes = ldp::oracle::brute_force_classify(index, box_size)?;
            for c in &classes {
                println!("{c}");
            }
            eprintln!(
                "index={index} classes={} triangles={} elapsed={:.3?}",
                classes.len(),
                classes.iter().filter(|c| c.num_vertices() == 3).count(),
                start.elapsed()
            );
            Ok(0)
        }
    }
}

fn classify(args: ClassifyArgs) -> Result<u8, Failure> {
    let query = match (args.index, args.max_local_index, args.order, args.volume) {
        (Some(ell), None, None, None) => Query::Index(ell),
        (None, Some(k), None, None) => Query::MaxLocalIndex(k),
        (None, None, Some(order), Some(volume)) => Query::OrderVolume { order, volume },
        _ => {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "give exactly one of --index, --max-local-index or --order/--volume".into(),
            })
        }
    };
    let start = Instant::now();
    let catalog = Catalog::build(query, args.jobs)?;
    let elapsed = start.elapsed();
    let out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match args.format {
        Format::Jsonl => catalog.write_jsonl(out)?,
        Format::Csv => catalog.write_csv(out).map_err(|e| Failure { code: EXIT_USAGE, message: e.to_string() })?,
    }
    eprintln!(
        "{} classes={} triangles={} elapsed={:.3?}",
        query.label(),
        catalog.records.len(),
        catalog.triangles(),
        elapsed
    );
    Ok(0)
}

fn verify(input: PathBuf) -> Result<u8, Failure> {
    let file = read_catalog(BufReader::new(File::open(&input)?))?;
    if file.records.is_empty() {
        log::warn!("{}: no records", input.display());
        eprintln!("warning: {} contains no records", input.display());
    }
    let mut failed = 0usize;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (i, record) in file.records.iter().enumerate() {
        let check = verify_record(i + 1, record);
        failed += usize::from(!check.ok);
        writeln!(out, "{check}")?;
    }
    out.flush()?;
    if failed > 0 {
        eprintln!("{failed} of {} records failed verification", file.records.len());
        Ok(EXIT_VERIFY)
    } else {
        Ok(0)
    }
}
