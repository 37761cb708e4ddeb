//! Command-line front end. Every report line is `key=value` pairs separated
//! by spaces; errors go to the error stream with exit code 3.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{self, Method, SweepMode, DEFAULT_CLOSURE_MAX_ORDER};
use crate::gensets::{verify_proof_identities, GenSet, SetName};
use crate::gf::{Field, FieldElement};
use crate::paige::{count_loop, enumerate_loop, LoopContext};
use crate::psl2::{verify_family, Family, PslVerdict};

pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "paige",
    version,
    about = "Finite simple Moufang loops M*(q): enumeration, generating sets, identity checks",
    after_help = "Exit codes: 0 success / GENERATES / PASS, 1 PROPER-SUBLOOP or a failed check, \
                  2 INCONCLUSIVE-ORBIT, 3 usage or input error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the parameters of GF(q): `q=.. p=.. r=.. [modulus=c0,..,cr] [primitive=<index>]`.
    Field {
        #[arg(long)]
        q: u32,
        /// Include the modulus coefficients, constant term first.
        #[arg(long)]
        show_modulus: bool,
        /// Include the least-index primitive element.
        #[arg(long)]
        show_primitive: bool,
    },
    /// Enumerate M*(q). Table format: `q=<q> n=<order>` then one `[a|..|b]` per line, sorted by key.
    Enumerate {
        #[arg(long)]
        q: u32,
        /// Only count the elements (works for every supported q).
        #[arg(long)]
        count_only: bool,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the Cayley table of M*(q), q <= 3: header, element list, then n rows of product indices.
    Cayley {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// PSL(2,q) / SL(2,q) generator families.
    Psl {
        #[command(subcommand)]
        command: PslCommand,
    },
    /// Generating-set catalog.
    Gensets {
        #[command(subcommand)]
        command: GensetsCommand,
    },
    /// Decide whether a set generates M*(q). Exit 0 GENERATES, 1 PROPER-SUBLOOP, 2 INCONCLUSIVE-ORBIT.
    Verify(VerifyArgs),
    /// Evaluate the proof identities over GF(q); exit 0 iff all pass.
    Identities {
        #[arg(long)]
        q: u32,
        /// Primitive element to use, by index.
        #[arg(long)]
        lambda: Option<u32>,
    },
    /// Check the Moufang identity x(y(xz)) = ((xy)x)z.
    Moufang {
        #[arg(long)]
        q: u32,
        #[arg(long, conflicts_with_all = ["samples", "seed"], required_unless_present = "samples")]
        exhaustive: bool,
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
        /// Worker threads; the report does not depend on this.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Check that seeded random pairs generate associative subloops.
    Diassoc {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        pairs: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_MAX_ORDER)]
        closure_max_q: u32,
    },
}

#[derive(Subcommand, Debug)]
enum PslCommand {
    /// Close a family's generators: `family=.. q=.. closure=.. expected=.. verdict=..`.
    Verify {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        q: u32,
    },
}

#[derive(Subcommand, Debug)]
enum GensetsCommand {
    /// Emit a catalogued set in generator-file format.
    Emit {
        #[arg(long)]
        set: SetName,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        lambda: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Catalogued set name.
    #[arg(
        long,
        required_unless_present = "file",
        conflicts_with = "file",
        requires = "q"
    )]
    set: Option<SetName>,
    /// Generator file to verify instead of a catalogued set.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long)]
    lambda: Option<u32>,
    /// Largest q for exact closure.
    #[arg(long, default_value_t = DEFAULT_CLOSURE_MAX_ORDER)]
    closure_max_q: u32,
    /// Append the elapsed time to the report.
    #[arg(long)]
    timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Auto,
    Orbit,
    Closure,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Orbit => Method::Orbit,
            MethodArg::Closure => Method::Closure,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Tsv,
}

type CmdResult = Result<i32, String>;

fn field(q: u32) -> Result<&'static Field, String> {
    Field::with_order(q).map_err(|e| format!("unsupported q: {e}"))
}

fn lambda_of(f: &Field, lambda: Option<u32>) -> Result<Option<FieldElement>, String> {
    lambda
        .map(|i| f.element(i).map_err(|e| e.to_string()))
        .transpose()
}

fn write_or_print(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn table_text(ctx: &LoopContext) -> String {
    let mut text = format!("q={} n={}\n", ctx.field().order(), ctx.order());
    for x in ctx.elements().expect("enumerated") {
        text.push_str(&x.to_string());
        text.push('\n');
    }
    text
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn say(out: &mut dyn Write, line: String) -> Result<(), String> {
    writeln!(out, "{line}").map_err(|e| e.to_string())
}

fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Field {
            q,
            show_modulus,
            show_primitive,
        } => {
            let f = field(q)?;
            let mut line = format!("q={} p={} r={}", f.order(), f.characteristic(), f.degree());
            if show_modulus {
                let coeffs: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
                line.push_str(&format!(" modulus={}", coeffs.join(",")));
            }
            if show_primitive {
                line.push_str(&format!(" primitive={}", f.primitive_element()));
            }
            say(out, line)?;
            Ok(0)
        }
        Command::Enumerate {
            q,
            count_only,
            out: path,
        } => {
            let f = field(q)?;
            if count_only {
                say(out, format!("q={q} n={}", count_loop(f)))?;
                return Ok(0);
            }
            let ctx = enumerate_loop(f).map_err(|e| e.to_string())?;
            let text = table_text(&ctx);
            match path {
                Some(p) => {
                    write_or_print(&mut std::io::sink(), Some(&p), &text)?;
                    say(out, format!("q={q} n={}", ctx.order()))?;
                }
                None => say(out, text.trim_end().to_string())?,
            }
            Ok(0)
        }
        Command::Cayley {
            q,
            out: path,
            format,
        } => {
            if q > 3 {
                return Err(format!("cayley tables are limited to q <= 3, got q = {q}"));
            }
            let ctx = enumerate_loop(field(q)?).map_err(|e| e.to_string())?;
            let n = ctx.order() as usize;
            let table = ctx.cayley_table().expect("enumerated");
            let sep = if format == Format::Tsv { "\t" } else { " " };
            let mut text = table_text(&ctx);
            for row in table.chunks(n) {
                let cells: Vec<String> = row.iter().map(u32::to_string).collect();
                text.push_str(&cells.join(sep));
                text.push('\n');
            }
            write_or_print(&mut std::io::sink(), Some(&path), &text)?;
            say(out, format!("q={q} n={n}"))?;
            Ok(0)
        }
        Command::Psl {
            command: PslCommand::Verify { family, q },
        } => {
            let f = field(q)?;
            match verify_family(family, f) {
                Ok(report) => {
                    say(out, report.to_string())?;
                    Ok(if report.verdict == PslVerdict::Generates {
                        0
                    } else {
                        1
                    })
                }
                Err(e) => {
                    say(out, format!("family={family} q={q} verdict=ERROR"))?;
                    Err(e.to_string())
                }
            }
        }
        Command::Gensets {
            command:
                GensetsCommand::Emit {
                    set,
                    q,
                    lambda,
                    out: path,
                },
        } => {
            let f = field(q)?;
            let genset = GenSet::build(set, f, lambda_of(f, lambda)?).map_err(|e| e.to_string())?;
            write_or_print(out, path.as_ref(), &genset.to_file_string())?;
            Ok(0)
        }
        Command::Verify(args) => {
            let genset = match (&args.set, &args.file) {
                (Some(name), _) => {
                    let f = field(args.q.expect("clap requires --q with --set"))?;
                    GenSet::build(*name, f, lambda_of(f, args.lambda)?)
                        .map_err(|e| e.to_string())?
                }
                (None, Some(path)) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                    let set = GenSet::parse_file(&text).map_err(|e| e.to_string())?;
                    if let Some(q) = args.q.filter(|&q| q != set.q) {
                        return Err(format!(
                            "--q {q} disagrees with the file header q={}",
                            set.q
                        ));
                    }
                    set
                }
                (None, None) => unreachable!("clap requires --set or --file"),
            };
            let report = engine::verify_set(&genset, args.method.into(), args.closure_max_q)
                .map_err(|e| e.to_string())?;
            let mut line = report.to_string();
            if args.timing {
                line.push_str(&format!(" elapsed_ms={}", report.elapsed.as_millis()));
            }
            say(out, line)?;
            Ok(report.verdict.exit_code())
        }
        Command::Identities { q, lambda } => {
            let f = field(q)?;
            let report =
                verify_proof_identities(f, lambda_of(f, lambda)?).map_err(|e| e.to_string())?;
            say(out, report.to_string())?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Moufang {
            q,
            exhaustive,
            samples,
            seed,
            threads,
        } => {
            let ctx = enumerate_loop(field(q)?).map_err(|e| e.to_string())?;
            let mode = match (exhaustive, samples, seed) {
                (true, _, _) => SweepMode::Exhaustive,
                (false, Some(n), Some(seed)) => SweepMode::Sample { n, seed },
                _ => return Err("give --exhaustive or --samples N --seed S".into()),
            };
            let result = engine::moufang_check(&ctx, mode, threads).map_err(|e| e.to_string())?;
            let mode_text = match mode {
                SweepMode::Exhaustive => "mode=exhaustive".to_string(),
                SweepMode::Sample { n, seed } => format!("mode=sample samples={n} seed={seed}"),
            };
            let witness = match &result.witness {
                Some((x, y, z)) => format!("{x},{y},{z}"),
                None => "none".into(),
            };
            let verdict = if result.passed() { "PASS" } else { "FAIL" };
            say(
                out,
                format!(
                    "q={q} order={} {mode_text} checked={} witness={witness} verdict={verdict}",
                    ctx.order(),
                    result.checked
                ),
            )?;
            Ok(if result.passed() { 0 } else { 1 })
        }
        Command::Diassoc {
            q,
            pairs,
            seed,
            closure_max_q,
        } => {
            let f = field(q)?;
            let results = engine::diassociativity_sweep(f, pairs, seed, closure_max_q)
                .map_err(|e| e.to_string())?;
            for (i, (x, y, r)) in results.iter().enumerate() {
                say(
                    out,
                    format!(
                        "pair={i} x={x} y={y} size={} associative={}",
                        r.size, r.associative
                    ),
                )?;
            }
            let ok = results.iter().all(|(_, _, r)| r.associative);
            say(
                out,
                format!(
                    "q={q} pairs={pairs} seed={seed} verdict={}",
                    if ok { "PASS" } else { "FAIL" }
                ),
            )?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}
