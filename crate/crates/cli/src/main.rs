//! `whq`: checks, constructions and round trips on structure files.
//!
//! Exit codes: 0 when every check passes, 1 on a failed verification, 2 on an
//! input error (unreadable file, syntax, typing).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use whq::format::{read_tables, regular_document, StructureFile};
use whq::gen::{
    chein_double, cyclic, group_algebra, groupoid_algebra, loop_algebra, loopoid_algebra,
    symmetric3, CayleyTable, GroupoidPresentation,
};
use whq::pipeline::{
    error_report, run_check, run_cleft, run_eval, run_galois, run_roundtrip, Direction, RunReport,
};
use whq::{Error, FieldSpec, Result, Whq};

#[derive(Parser)]
#[command(name = "whq", version, about = "Exact checks for weak Hopf quasigroups and their Galois and cleft extensions")]
struct Cli {
    /// Print the machine-readable report instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Evaluate large identities on all cores.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Axioms, derived identities, classification and the H_L monoid.
    Check { file: PathBuf },
    /// Write a structure file for a generated example.
    Gen {
        family: Family,
        /// Group or loop to build from: S3, C<n>, or chein(<base>).
        #[arg(long)]
        base: Option<String>,
        /// File with a [cayley] table or a [groupoid] presentation.
        #[arg(long, value_name = "FILE")]
        table: Option<PathBuf>,
        /// Number of objects for pair groupoids and loopoids.
        #[arg(long)]
        objects: Option<usize>,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Coinvariants, the canonical morphism and its inverse, normal basis.
    Galois { file: PathBuf },
    /// Cleft conditions for the bound h and h_inv.
    Cleft { file: PathBuf },
    /// Cleft to Galois to cleft, or the reverse.
    Roundtrip {
        file: PathBuf,
        #[arg(long, value_enum)]
        from: Start,
    },
    /// Compare two morphism expressions.
    Eval {
        file: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Group,
    Loop,
    Chein,
    Groupoid,
    PairGroupoid,
    Loopoid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Cleft,
    Galois,
}

fn parse_base(s: &str) -> Result<CayleyTable> {
    let s = s.trim();
    if s == "S3" {
        return Ok(symmetric3());
    }
    if let Some(n) = s.strip_prefix('C') {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Format(format!("bad cyclic order in {s:?}")))?;
        if n == 0 {
            return Err(Error::Format("C0 is not a group".into()));
        }
        return Ok(cyclic(n));
    }
    if let Some(inner) = s.strip_prefix("chein(").and_then(|r| r.strip_suffix(')')) {
        return chein_double(&parse_base(inner)?);
    }
    Err(Error::Format(format!("unknown base {s:?}; use S3, C<n> or chein(...)")))
}

struct GenRequest<'a> {
    family: Family,
    base: Option<&'a str>,
    table: Option<&'a Path>,
    objects: Option<usize>,
    field: FieldSpec,
}

fn read_table_file(path: &Path) -> Result<(Option<CayleyTable>, Option<GroupoidPresentation>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_tables(&text)
}

fn generate(req: &GenRequest) -> Result<(Whq, Vec<(String, toml::Value)>)> {
    let table = |default: &str| -> Result<(CayleyTable, String)> {
        if let Some(p) = req.table {
            let (t, _) = read_table_file(p)?;
            let t = t.ok_or_else(|| {
                Error::Format(format!("{} has no [cayley] table", p.display()))
            })?;
            return Ok((t, p.display().to_string()));
        }
        let b = req.base.unwrap_or(default);
        Ok((parse_base(b)?, b.to_string()))
    };
    let mut meta: Vec<(String, toml::Value)> = Vec::new();
    let mut put = |k: &str, v: toml::Value| meta.push((k.to_string(), v));
    let f = req.field;
    let w = match req.family {
        Family::Group => {
            let (t, b) = table("S3")?;
            put("family", "group".into());
            put("base", b.into());
            group_algebra(f, &t)?
        }
        Family::Loop => {
            let (t, b) = table("chein(S3)")?;
            put("family", "loop".into());
            put("base", b.into());
            loop_algebra(f, &t)?
        }
        Family::Chein => {
            let (t, b) = table("S3")?;
            put("family", "chein".into());
            put("base", b.into());
            loop_algebra(f, &chein_double(&t)?)?
        }
        Family::Groupoid => {
            let path = req
                .table
                .ok_or_else(|| Error::Format("groupoid needs --table with a [groupoid] section".into()))?;
            let (_, g) = read_table_file(path)?;
            let g = g.ok_or_else(|| {
                Error::Format(format!("{} has no [groupoid] section", path.display()))
            })?;
            put("family", "groupoid".into());
            put("base", path.display().to_string().into());
            groupoid_algebra(f, &g)?
        }
        Family::PairGroupoid => {
            let n = req.objects.unwrap_or(3);
            put("family", "pair-groupoid".into());
            put("objects", toml::Value::Integer(n as i64));
            groupoid_algebra(f, &GroupoidPresentation::pair(n))?
        }
        Family::Loopoid => {
            let n = req.objects.unwrap_or(2);
            let (t, b) = table("chein(S3)")?;
            put("family", "loopoid".into());
            put("objects", toml::Value::Integer(n as i64));
            put("base", b.into());
            loopoid_algebra(f, n, &t)?
        }
    };
    Ok((w, meta))
}

fn run_gen(req: &GenRequest, output: Option<&Path>) -> Result<(RunReport, String)> {
    let (w, meta) = generate(req)?;
    let text = regular_document(&w, meta).render();
    let mut rep = RunReport::new("gen");
    rep.note("dim", w.dim());
    rep.note("classification", w.classify()?.kind);
    if let Some(p) = output {
        std::fs::write(p, &text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        rep.note("output", p.display());
    }
    Ok((rep.finish(), text))
}

fn load(path: &Path) -> Result<StructureFile> {
    StructureFile::load(path)
}

fn execute(cli: &Cli) -> Result<(RunReport, Option<String>)> {
    match &cli.command {
        Command::Check { file } => Ok((run_check(&load(file)?)?, None)),
        Command::Galois { file } => Ok((run_galois(&load(file)?)?, None)),
        Command::Cleft { file } => Ok((run_cleft(&load(file)?)?, None)),
        Command::Roundtrip { file, from } => {
            let d = match from {
                Start::Cleft => Direction::Cleft,
                Start::Galois => Direction::Galois,
            };
            Ok((run_roundtrip(&load(file)?, d)?, None))
        }
        Command::Eval { file, lhs, rhs } => Ok((run_eval(&load(file)?, lhs, rhs)?, None)),
        Command::Gen {
            family,
            base,
            table,
            objects,
            field,
            output,
        } => {
            let req = GenRequest {
                family: *family,
                base: base.as_deref(),
                table: table.as_deref(),
                objects: *objects,
                field: field.parse()?,
            };
            let (rep, text) = run_gen(&req, output.as_deref())?;
            Ok((rep, output.is_none().then_some(text)))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Gen { .. } => "gen",
        Command::Galois { .. } => "galois",
        Command::Cleft { .. } => "cleft",
        Command::Roundtrip { .. } => "roundtrip",
        Command::Eval { .. } => "eval",
    }
}

fn emit(cli: &Cli, rep: &RunReport) -> std::result::Result<(), String> {
    let json = serde_json::to_string_pretty(rep).map_err(|e| e.to_string())?;
    if let Some(p) = &cli.report {
        std::fs::write(p, format!("{json}\n")).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    if cli.json {
        println!("{json}");
    } else {
        print!("{}", rep.render_text());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !cli.parallel {
        // single-threaded unless asked
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    let rep = match execute(&cli) {
        Ok((rep, generated)) => {
            if let Some(text) = generated {
                print!("{text}");
                return ExitCode::from(if rep.passed { 0 } else { 1 });
            }
            rep
        }
        Err(e) if e.is_input_error() => {
            eprintln!("whq: {e}");
            return ExitCode::from(2);
        }
        Err(e) => error_report(command_name(&cli.command), &e),
    };
    if let Err(e) = emit(&cli, &rep) {
        eprintln!("whq: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(if rep.passed { 0 } else { 1 })
}
