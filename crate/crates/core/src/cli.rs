//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::analysis::{analyze, dualize, Answer, Direction, Query, Report, TimeDomain, Variation};
use crate::error::{Error, Result};
use crate::pattern::{parse_pattern, Pattern};
use crate::selftest;
use crate::sgraph::graph_of;

#[derive(Debug, Parser)]
#[command(
    name = "strongctl",
    version,
    about = "Strong structural controllability and observability of nonzero patterns"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether every system of a pattern pair is controllable or observable.
    Analyze(AnalyzeArgs),
    /// Reproduce the worked examples and run the oracle suites.
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, clap::Args)]
#[command(group(ArgGroup::new("second").required(true).args(["b", "c"])))]
pub struct AnalyzeArgs {
    /// State pattern file.
    #[arg(long, value_name = "PATH")]
    pub a: PathBuf,
    /// Input pattern file (controllability).
    #[arg(long, value_name = "PATH")]
    pub b: Option<PathBuf>,
    /// Output pattern file (observability).
    #[arg(long, value_name = "PATH")]
    pub c: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    #[arg(long, value_enum)]
    pub variation: VariationArg,
    /// Window length `t1 - t0` of a discrete-time question.
    #[arg(long, value_name = "N")]
    pub horizon: Option<usize>,
    #[arg(long, value_enum)]
    pub direction: DirectionArg,
    #[arg(long, value_enum, default_value_t = OutputArg::Json)]
    pub output: OutputArg,
    /// Include reduction traces in JSON output.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Discrete,
    Continuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariationArg {
    Lti,
    Tv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Controllability,
    Observability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    Json,
    Text,
}

pub const EXIT_GUARANTEED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_GUARANTEED: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

pub fn exit_code(answer: Answer) -> i32 {
    match answer {
        Answer::Guaranteed => EXIT_GUARANTEED,
        Answer::NotGuaranteed => EXIT_NOT_GUARANTEED,
        Answer::Undecided => EXIT_UNDECIDED,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_GUARANTEED
            };
        }
    };
    match cli.command {
        Command::Analyze(args) => match run_analyze(&args) {
            Ok((report, rendered)) => {
                let _ = writeln!(out, "{rendered}");
                exit_code(report.answer)
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_ERROR
            }
        },
        Command::Selftest { seed } => run_selftest(seed, out),
    }
}

fn read_pattern(path: &Path) -> Result<Pattern> {
    let wrap = |source: Error| Error::File {
        path: path.to_path_buf(),
        source: Box::new(source),
    };
    let text = fs::read_to_string(path).map_err(|e| wrap(e.into()))?;
    parse_pattern(&text).map_err(wrap)
}

/// Runs one analysis and renders it in the requested format.
pub fn run_analyze(args: &AnalyzeArgs) -> Result<(Report, String)> {
    let direction = match args.direction {
        DirectionArg::Controllability => Direction::Controllability,
        DirectionArg::Observability => Direction::Observability,
    };
    let (other_path, flag) = match (direction, &args.b, &args.c) {
        (Direction::Controllability, Some(b), None) => (b, "--b"),
        (Direction::Observability, None, Some(c)) => (c, "--c"),
        (Direction::Controllability, _, _) => {
            return Err(Error::InvalidQuery(
                "controllability needs an input pattern given with --b".into(),
            ))
        }
        (Direction::Observability, _, _) => {
            return Err(Error::InvalidQuery(
                "observability needs an output pattern given with --c".into(),
            ))
        }
    };
    let query = Query::new(
        match args.domain {
            DomainArg::Discrete => TimeDomain::Discrete,
            DomainArg::Continuous => TimeDomain::Continuous,
        },
        match args.variation {
            VariationArg::Lti => Variation::TimeInvariant,
            VariationArg::Tv => Variation::TimeVarying,
        },
        direction,
        args.horizon,
    )?;
    let a = read_pattern(&args.a)?;
    let other = read_pattern(other_path)?;
    let traced = args.verbose || args.output == OutputArg::Text;
    let report = analyze(&a, &other, &query, traced).map_err(|e| match e {
        Error::Dimension(msg) => Error::Dimension(format!(
            "{} (--a) and {} ({flag}): {msg}",
            args.a.display(),
            other_path.display()
        )),
        e => e,
    })?;
    let rendered = match args.output {
        OutputArg::Json => report.to_json(),
        OutputArg::Text => render_text(&report, &a, &other)?,
    };
    Ok((report, rendered))
}

fn render_text(report: &Report, a: &Pattern, other: &Pattern) -> Result<String> {
    use std::fmt::Write as _;

    let q = &report.query;
    let (a, b, label) = match q.direction {
        Direction::Controllability => (a.clone(), other.clone(), "(A, B)"),
        Direction::Observability => {
            let (a, b) = dualize(a, other)?;
            (a, b, "(A', C')")
        }
    };
    let g = graph_of(&a, &b)?;
    let mut s = String::new();
    let domain = match q.time_domain {
        TimeDomain::Discrete => "discrete",
        TimeDomain::Continuous => "continuous",
    };
    let variation = match q.variation {
        Variation::TimeInvariant => "time-invariant",
        Variation::TimeVarying => "time-varying",
    };
    let direction = match q.direction {
        Direction::Controllability => "controllability",
        Direction::Observability => "observability",
    };
    let _ = write!(s, "query: {domain} {variation} {direction}");
    if let Some(t) = q.horizon {
        let _ = write!(s, ", horizon {t}");
    }
    let _ = writeln!(s, "\nanswer: {}", report.answer);
    let _ = writeln!(
        s,
        "graph of {label}: {} states, {} inputs, {} edges",
        g.state_count(),
        g.input_count(),
        g.edge_count()
    );
    for line in g.edge_list().lines() {
        let _ = writeln!(s, "  {line}");
    }
    for v in &report.verdicts {
        let _ = write!(s, "{}", v.condition);
        if let Some(t) = v.horizon {
            let _ = write!(s, " (T = {t})");
        }
        let _ = write!(s, ": {}", if v.holds { "holds" } else { "fails" });
        if let Some(w) = &v.witness {
            let _ = write!(s, ", witness {w}");
        }
        let _ = writeln!(s);
        for step in v.trace.iter().flatten() {
            let _ = writeln!(s, "  {step}");
        }
    }
    let _ = writeln!(s, "notes:");
    for note in &report.notes {
        let _ = writeln!(s, "  - {note}");
    }
    Ok(s.trim_end().to_string())
}

fn run_selftest(seed: u64, out: &mut dyn Write) -> i32 {
    let outcomes = selftest::run_all(seed);
    for o in &outcomes {
        let _ = writeln!(out, "{o}");
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let _ = writeln!(
        out,
        "{passed}/{} criteria passed (seed {seed})",
        outcomes.len()
    );
    if passed == outcomes.len() {
        EXIT_GUARANTEED
    } else {
        EXIT_ERROR
    }
}
