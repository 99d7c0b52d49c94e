use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rcms::birkhoff::birkhoff_report;
use rcms::burnside::burnside_class_count;
use rcms::enumerate::{class_representatives, class_representatives_with, count_total};
use rcms::matrix::QUARTIC_MARGIN;
use rcms::verify::{order_records, verify_order, VerifyOptions};
use rcms::{RcMatrix, RcmsError, Result, SCHEMA_VERSION};

#[derive(Parser)]
#[command(
    name = "rcms",
    version,
    about = "Vacuum graphs of phi^4 theory from RC-magic squares"
)]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List class representatives with class sizes.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = QUARTIC_MARGIN)]
        margin: u8,
        /// Stage checkpoint file; resumed if present. Defaults to a file in
        /// $RCMS_CHECKPOINT_DIR when that is set.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Table of graphs with M_T, M_K and symmetry factors.
    Graphs {
        #[arg(long)]
        order: usize,
        /// Write one DOT file per graph into this directory.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        connected_only: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Decompositions into permutation matrices (JSON).
    Decompose {
        /// Matrix file: header `m d`, then one row per line.
        #[arg(long, conflicts_with_all = ["order", "class"])]
        matrix: Vec<PathBuf>,
        #[arg(long, requires = "class")]
        order: Option<usize>,
        /// Zero-based class index, repeatable.
        #[arg(long, requires = "order")]
        class: Vec<usize>,
    },
    /// Check the published tables for one order; exit 0 iff all pass.
    Verify {
        #[arg(long)]
        order: usize,
        /// Compare against the pairing oracle (orders 1 to 4).
        #[arg(long)]
        oracle: bool,
        /// Allow the oracle at order 5 (several hundred million pairings).
        #[arg(long, requires = "oracle")]
        slow_oracle: bool,
    },
    /// Number of squares and of classes.
    Count {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = QUARTIC_MARGIN)]
        margin: u8,
    },
}

#[derive(Serialize)]
struct ClassRow {
    index: usize,
    rows: Vec<Vec<u8>>,
    orbit_size: u64,
    mult_factor: u64,
}

#[derive(Serialize)]
struct EnumerateReport {
    schema_version: u32,
    order: usize,
    margin: u8,
    classes: Vec<ClassRow>,
}

#[derive(Serialize)]
struct GraphRow {
    order: usize,
    graph_id: usize,
    canonical_adjacency: String,
    m_total: String,
    m_kleinert: String,
    sym_factor: u64,
    connected: bool,
}

#[derive(Serialize)]
struct GraphReport {
    schema_version: u32,
    order: usize,
    graphs: Vec<GraphRow>,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn default_checkpoint(order: usize, margin: u8) -> Option<PathBuf> {
    std::env::var_os("RCMS_CHECKPOINT_DIR")
        .map(|dir| Path::new(&dir).join(format!("rcms-m{order}-d{margin}.ckpt")))
}

fn enumerate(order: usize, margin: u8, checkpoint: Option<PathBuf>, format: Format) -> Result<()> {
    let checkpoint = checkpoint.or_else(|| default_checkpoint(order, margin));
    let reps = class_representatives_with(order, margin, checkpoint.as_deref(), |rows, n| {
        eprintln!("stage {rows}: {n} representatives");
    })?;
    match format {
        Format::Json => print_json(&EnumerateReport {
            schema_version: SCHEMA_VERSION,
            order,
            margin,
            classes: reps
                .into_iter()
                .enumerate()
                .map(|(index, c)| ClassRow {
                    index,
                    rows: c.rep.to_rows(),
                    orbit_size: c.orbit_size,
                    mult_factor: c.mult_factor,
                })
                .collect(),
        }),
        Format::Csv => {
            let mut out = io::stdout().lock();
            writeln!(out, "index,matrix,orbit_size,mult_factor")?;
            for (i, c) in reps.iter().enumerate() {
                let rows: Vec<String> = c
                    .rep
                    .rows()
                    .map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(" "))
                    .collect();
                writeln!(
                    out,
                    "{i},{},{},{}",
                    rows.join(";"),
                    c.orbit_size,
                    c.mult_factor
                )?;
            }
            Ok(())
        }
    }
}

fn graphs(order: usize, dot: Option<PathBuf>, connected_only: bool, format: Format) -> Result<()> {
    let records: Vec<_> = order_records(order)?
        .into_iter()
        .filter(|r| r.connected || !connected_only)
        .collect();
    if let Some(dir) = &dot {
        fs::create_dir_all(dir)?;
        for (i, r) in records.iter().enumerate() {
            let name = format!("g{order}_{i}");
            fs::write(dir.join(format!("{name}.dot")), r.graph.to_dot(&name))?;
        }
    }
    let rows: Vec<GraphRow> = records
        .iter()
        .enumerate()
        .map(|(i, r)| GraphRow {
            order,
            graph_id: i,
            canonical_adjacency: r.graph.adjacency_string(),
            m_total: r.m_total.to_string(),
            m_kleinert: r.m_kleinert.to_string(),
            sym_factor: r.sym_factor,
            connected: r.connected,
        })
        .collect();
    match format {
        Format::Json => print_json(&GraphReport {
            schema_version: SCHEMA_VERSION,
            order,
            graphs: rows,
        }),
        Format::Csv => {
            let mut out = io::stdout().lock();
            writeln!(
                out,
                "order,graph_id,canonical_adjacency,M_T,M_K,s,connected"
            )?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.order,
                    r.graph_id,
                    r.canonical_adjacency,
                    r.m_total,
                    r.m_kleinert,
                    r.sym_factor,
                    r.connected
                )?;
            }
            Ok(())
        }
    }
}

fn decompose(files: Vec<PathBuf>, order: Option<usize>, classes: Vec<usize>) -> Result<()> {
    let mut matrices = Vec::new();
    for path in files {
        let text = fs::read_to_string(&path)?;
        let a = RcMatrix::parse_text(&text).map_err(|e| match e {
            RcmsError::Parse { line, message } => RcmsError::Parse {
                line,
                message: format!("{}: {message}", path.display()),
            },
            e => e,
        })?;
        matrices.push((path.display().to_string(), a));
    }
    if let Some(m) = order {
        let reps = class_representatives(m, QUARTIC_MARGIN)?;
        for k in classes {
            let c = reps.get(k).ok_or_else(|| {
                RcmsError::InvalidMatrix(format!(
                    "class {k} out of range; order {m} has {}",
                    reps.len()
                ))
            })?;
            matrices.push((format!("order {m} class {k}"), c.rep.clone()));
        }
    }
    if matrices.is_empty() {
        return Err(RcmsError::InvalidMatrix(
            "give --matrix or --order with --class".into(),
        ));
    }
    print_json(&birkhoff_report(&matrices)?)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Enumerate {
            order,
            margin,
            checkpoint,
            format,
        } => enumerate(order, margin, checkpoint, format)?,
        Command::Graphs {
            order,
            dot,
            connected_only,
            format,
        } => graphs(order, dot, connected_only, format)?,
        Command::Decompose {
            matrix,
            order,
            class,
        } => decompose(matrix, order, class)?,
        Command::Verify {
            order,
            oracle,
            slow_oracle,
        } => {
            let report = verify_order(
                order,
                &VerifyOptions {
                    oracle,
                    slow_oracle,
                },
            )?;
            print_json(&report)?;
            for c in report.failures() {
                eprintln!(
                    "FAIL {}: expected {}, found {}",
                    c.name, c.expected, c.found
                );
            }
            return Ok(report.passed);
        }
        Command::Count { order, margin } => {
            println!("N={}", count_total(order, margin)?);
            println!("classes={}", burnside_class_count(order, margin)?);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(RcmsError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
