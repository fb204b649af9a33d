//! `qbb`: command-line front end for the qbb library.
//!
//! Exit codes: 0 ok, 1 property failure, 2 invalid datum, 3 parse error,
//! 4 resource cap.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qbb::binf::{build_binf, build_crystal_lambda};
use qbb::cartan::{parse_datum, parse_lambda};
use qbb::freealg::{parse_element, FormKind, Forms};
use qbb::graphio::{path_labels, to_dot, to_text, GraphDoc};
use qbb::lattice::CrystalGraph;
use qbb::perfect::{basis_from_json, space_from_json, verify_lower_perfect, verify_upper_perfect, Mode};
use qbb::strings::StringModule;
use qbb::suites::{run_suite, SuiteConfig, Workbench, KNOWN_RED, SUITES};
use qbb::uqminus::UqMinus;
use qbb::{BorcherdsCartanDatum, Error};

#[derive(Parser, Debug)]
#[command(name = "qbb", version, about = "Crystal, global and perfect bases for quantum Borcherds-Bozec algebras")]
struct Cli {
    /// Largest height of root degrees to compute.
    #[arg(long, global = true, default_value_t = 4)]
    max_height: u32,
    /// Most words allowed in one weight space.
    #[arg(long, global = true, env = "QBB_WORD_CAP", default_value_t = 5000)]
    word_cap: usize,
    /// Dominant weight as `i:m,i:m` (vertex ids).
    #[arg(long, global = true)]
    lambda: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized parts of `verify`.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a datum file; prints one line per violation.
    Validate { datum: PathBuf },
    /// Crystal graph of B(∞) or of B(λ) (needs --lambda).
    Crystal { kind: Kind, datum: PathBuf },
    /// Lusztig (L) or Kashiwara (K) form of two elements of U^-.
    Form {
        datum: PathBuf,
        x: String,
        y: String,
        #[arg(value_enum, default_value_t = Which::L)]
        which: Which,
    },
    /// Whether an element of the free algebra lies in the radical of the form.
    Radical { datum: PathBuf, x: String },
    /// Lower global basis element of a crystal node (B(λ) with --lambda).
    Global { datum: PathBuf, node: usize },
    /// Verify a candidate perfect basis given as JSON.
    Perfect {
        space: PathBuf,
        basis: PathBuf,
        /// Defaults to the mode recorded in the space file.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Run one acceptance suite, or `all`.
    Verify { suite: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Binf,
    Hw,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dot,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    #[value(name = "L")]
    L,
    #[value(name = "K")]
    K,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Lower,
    Upper,
}

/// Failure with its exit code; the message is printed to stderr.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::InvalidDatum(_) => 2,
            Error::Parse { .. } | Error::UnknownVertex(_) | Error::Domain(_) => 3,
            Error::Cap(_) => 4,
            Error::NotRegular(_) | Error::Internal(_) => 1,
        };
        Fail(code, e.to_string())
    }
}

/// Text for stdout and the exit code that goes with it.
type Run = Result<(u8, String), Fail>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((code, out)) => {
            print!("{}", out);
            ExitCode::from(code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("{}", msg.trim_end());
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Validate { datum } => validate(datum),
        Command::Crystal { kind, datum } => crystal(cli, *kind, datum),
        Command::Form { datum, x, y, which } => form(cli, datum, x, y, *which),
        Command::Radical { datum, x } => radical(cli, datum, x),
        Command::Global { datum, node } => global(cli, datum, *node),
        Command::Perfect { space, basis, mode } => perfect(space, basis, *mode),
        Command::Verify { suite } => verify(cli, suite),
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail(3, format!("cannot read {}: {}", path.display(), e)))
}

fn validate(path: &Path) -> Run {
    let parsed = parse_datum(&read(path)?)?;
    if parsed.report.is_valid() {
        return Ok((0, format!("valid datum with {} vertices\n", parsed.datum.n())));
    }
    let lines: Vec<String> = parsed.report.violations.iter().map(|v| v.to_string()).collect();
    Err(Fail(2, lines.join("\n")))
}

/// Parses and validates; any violation is fatal with exit 2.
fn load_datum(path: &Path) -> Result<BorcherdsCartanDatum, Fail> {
    let parsed = parse_datum(&read(path)?)?;
    if !parsed.report.is_valid() {
        let lines: Vec<String> = parsed.report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Fail(2, format!("invalid datum:\n{}", lines.join("\n"))));
    }
    Ok(parsed.datum)
}

fn render_graph(g: &CrystalGraph, name: &str, format: Format) -> String {
    match format {
        Format::Dot => to_dot(g, name),
        Format::Json => GraphDoc::from_graph(g).to_json() + "\n",
        Format::Text => to_text(g),
    }
}

fn crystal(cli: &Cli, kind: Kind, path: &Path) -> Run {
    let d = load_datum(path)?;
    match kind {
        Kind::Binf => {
            let b = build_binf(d, cli.max_height, cli.word_cap)?;
            Ok((0, render_graph(&b.graph, "binf", cli.format)))
        }
        Kind::Hw => {
            let spec = cli.lambda.as_deref().ok_or_else(|| Fail(3, "crystal hw needs --lambda".into()))?;
            let lambda = parse_lambda(&d, spec)?;
            let b = build_crystal_lambda(d, lambda, cli.max_height, cli.word_cap)?;
            Ok((0, render_graph(&b.graph, "hw", cli.format)))
        }
    }
}

fn form(cli: &Cli, path: &Path, x: &str, y: &str, which: Which) -> Run {
    let d = load_datum(path)?;
    let (x, y) = (parse_element(&d, x)?, parse_element(&d, y)?);
    let u = UqMinus::new(d, cli.word_cap);
    let kind = match which {
        Which::L => FormKind::Lusztig,
        Which::K => FormKind::Kashiwara,
    };
    let forms: &Forms = u.forms();
    Ok((0, format!("{}\n", forms.pair(kind, &x, &y))))
}

fn radical(cli: &Cli, path: &Path, x: &str) -> Run {
    let d = load_datum(path)?;
    let x = parse_element(&d, x)?;
    let u = UqMinus::new(d, cli.word_cap);
    Ok((0, format!("{}\n", u.is_in_radical(&x)?)))
}

fn global(cli: &Cli, path: &Path, node: usize) -> Run {
    let d = load_datum(path)?;
    let height_error =
        |n: usize| Fail(3, format!("node {} not in the crystal up to height {} ({} nodes)", node, cli.max_height, n));
    match &cli.lambda {
        None => {
            let b = build_binf(d.clone(), cli.max_height, cli.word_cap)?;
            if node >= b.graph.len() {
                return Err(height_error(b.graph.len()));
            }
            let p = b.module().representative(&b.global(node)?)?;
            Ok((0, format!("G(#{}) [{}] = {}\n", node, path_labels(&b.graph)[node], p.render(&d))))
        }
        Some(spec) => {
            let lambda = parse_lambda(&d, spec)?;
            let b = build_crystal_lambda(d.clone(), lambda, cli.max_height, cli.word_cap)?;
            if node >= b.graph.len() {
                return Err(height_error(b.graph.len()));
            }
            let p = b.module().representative(&b.global(node)?)?;
            Ok((0, format!("G(#{}) [{}] = ({}) v\n", node, path_labels(&b.graph)[node], p.render(&d))))
        }
    }
}

fn perfect(space: &Path, basis: &Path, mode: Option<ModeArg>) -> Run {
    let space = space_from_json(&read(space)?)?;
    let basis = basis_from_json(&read(basis)?)?;
    let mode = match mode {
        None => space.mode,
        Some(ModeArg::Lower) => Mode::Lower,
        Some(ModeArg::Upper) => Mode::Upper,
    };
    let rep = match mode {
        Mode::Lower => verify_lower_perfect(&space, &basis)?,
        Mode::Upper => verify_upper_perfect(&space, &basis)?,
    };
    let d = &space.datum;
    let (dname, mname) = match mode {
        Mode::Lower => ("d", "f"),
        Mode::Upper => ("d^", "e"),
    };
    let mut out = format!("{:?} perfect basis check: {} elements\n", mode, rep.len());
    for b in 0..rep.len() {
        let mut parts = Vec::new();
        for &g in &space.gens {
            let dv = rep.d.get(&(b, g)).map_or("-".to_string(), |v| v.to_string());
            let target = match rep.maps.get(&(b, g)) {
                Some(Some(t)) => rep.labels[*t].clone(),
                Some(None) => "0".into(),
                None => "-".into(),
            };
            parts.push(format!("{}{}={} {}{}->{}", dname, d.fmt_gen(g), dv, mname, d.fmt_gen(g), target));
        }
        out.push_str(&format!("{} {:?} {}\n", rep.labels[b], rep.degrees[b].0, parts.join(" ")));
    }
    for v in &rep.violations {
        out.push_str(&format!("violation: {}\n", v));
    }
    out.push_str(if rep.passed { "result: perfect\n" } else { "result: not perfect\n" });
    Ok((if rep.passed { 0 } else { 1 }, out))
}

fn verify(cli: &Cli, suite: &str) -> Run {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Fail(3, format!("unknown suite `{}`; one of: all, {}", suite, SUITES.join(", "))));
    };
    let wb = Workbench::new(SuiteConfig { max_height: cli.max_height, word_cap: cli.word_cap, seed: cli.seed });
    let mut out = String::new();
    let mut red = false;
    for name in names {
        let o = run_suite(name, &wb)?;
        out.push_str(&o.line());
        out.push('\n');
        for f in &o.failures {
            out.push_str(&format!("    failure: {}\n", f));
        }
        for n in &o.notes {
            out.push_str(&format!("    note: {}\n", n));
        }
        if !o.passed {
            red = true;
            if let Some((_, why)) = KNOWN_RED.iter().find(|(id, _)| *id == o.id) {
                out.push_str(&format!("    analysis: {}\n", why));
            }
        }
    }
    Ok((if red { 1 } else { 0 }, out))
}
