use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sylow_d4::config::Config;
use sylow_d4::export::{float_value, Format, TableDoc, ValueMode};
use sylow_d4::verify::{self, Check, Mode};
use sylow_d4_core::characters::enumerate_chars;
use sylow_d4_core::classes::enumerate_class_reps;
use sylow_d4_core::group::{format_element, Group};
use sylow_d4_core::table::CharTable;

/// Generic character table of the Sylow p-subgroup of D4(q).
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: Option<u32>,
    /// Degree of F_q over F_p.
    #[arg(long)]
    a: Option<u32>,
    /// Monic defining polynomial, constant term first, e.g. 1,1,1.
    #[arg(long, value_delimiter = ',')]
    poly: Option<Vec<u32>>,
    /// TOML file with p, a, poly, seed, pairs.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl FieldArgs {
    fn config(&self) -> Result<Config> {
        let cli = Config { p: self.p, a: self.a, poly: self.poly.clone(), ..Config::default() };
        Ok(match &self.config {
            Some(path) => cli.or(Config::load(path)?),
            None => cli,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the table and export it.
    Build {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "exact")]
        values: ValueMode,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run checks; exits non-zero unless all pass.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "counts,orthogonality")]
        checks: Vec<Check>,
        #[arg(long, value_enum, default_value = "sampled")]
        mode: Mode,
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate one character at one element.
    Eval {
        #[command(flatten)]
        field: FieldArgs,
        /// e.g. F11[a11=1,b5=0,b6=2,b7=0,b3=1]
        #[arg(long = "char")]
        character: String,
        /// e.g. x3(1)*x8(2)
        #[arg(long)]
        elem: String,
    },
    /// List class representatives.
    Classes {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// List character labels and degrees.
    Chars {
        #[command(flatten)]
        field: FieldArgs,
    },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build { field, format, values, out } => {
            let field = field.config()?.field()?;
            let t = CharTable::build(field, true)?;
            let doc = TableDoc::from_table(&t, values)?;
            let mut w = output(&out)?;
            match format {
                Format::Json => writeln!(w, "{}", doc.to_json()?)?,
                Format::Csv => doc.write_csv(&mut w)?,
                Format::Latex => doc.write_latex(&mut w)?,
            }
            w.flush()?;
            Ok(true)
        }
        Command::Verify { field, checks, mode, pairs, seed } => {
            let mut cfg = field.config()?;
            cfg.pairs = pairs.or(cfg.pairs);
            cfg.seed = seed.or(cfg.seed);
            let f = cfg.field()?;
            let materialize = mode == Mode::Full || checks.contains(&Check::Oracle);
            let t = CharTable::build(f, materialize)?;
            let report = verify::run(&t, &checks, mode, cfg.pairs(), cfg.seed())?;
            print_json(&report)?;
            Ok(report.passed())
        }
        Command::Eval { field, character, elem } => {
            let f = field.config()?.field()?;
            let chars = enumerate_chars(&f)?;
            let label = chars.parse(&f, &character)?;
            let x = Group::new(&f).parse(&elem)?;
            let v = chars.value_expr(&f, &label, &x)?;
            let exact = v.evaluate(&f);
            let out = json!({
                "char": chars.label(&label),
                "elem": format_element(&x),
                "degree": chars.degree(f.q() as u128, &label).to_string(),
                "value": exact.to_string(),
                "coeffs": exact.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "expr": v.describe(),
                "float": float_value(&exact),
            });
            print_json(&out)?;
            Ok(true)
        }
        Command::Classes { field } => {
            let f = field.config()?.field()?;
            let list = enumerate_class_reps(&f)?;
            let q = f.q() as u128;
            let reps: Vec<_> = list
                .reps
                .iter()
                .map(|r| {
                    json!({
                        "label": list.label(r),
                        "representative": format_element(&r.rep),
                        "size": list.class_size(q, r).to_string(),
                        "centralizer": list.centralizer_order(q, r).to_string(),
                    })
                })
                .collect();
            print_json(&json!({ "q": q, "count": reps.len(), "classes": reps }))?;
            Ok(true)
        }
        Command::Chars { field } => {
            let f = field.config()?.field()?;
            let list = enumerate_chars(&f)?;
            let q = f.q() as u128;
            let rows: Vec<_> = list
                .labels
                .iter()
                .map(|l| json!({ "label": list.label(l), "degree": list.degree(q, l).to_string() }))
                .collect();
            print_json(&json!({ "q": q, "count": rows.len(), "characters": rows }))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>().is_some_and(|j| j.io_error_kind() == Some(io::ErrorKind::BrokenPipe))
    })
}
