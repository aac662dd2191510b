//! The `nofbench` command line. Each command parses its inputs, calls one
//! library operation and prints the result; `--out` also writes a JSON report.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bits::ceil_log2;
use crate::cylinder::{self, CoverLimits, EntrySet};
use crate::discrepancy::{self, BoundValue, Rational, TrendOptions};
use crate::error::{Error, Result};
use crate::function::{self, BaseFunction, LiftKind};
use crate::help::{self, CostMode, EvaluatorInputs, HarnessLimits, PartLimits, Verdict};
use crate::report::{self, Report};
use crate::stars::{self, ChiLimits, ChiOutcome};

#[derive(Debug, Parser, Serialize)]
#[command(name = "nofbench", version, about = "Exact micro-scale NOF graph-function workbench")]
pub struct Cli {
    /// Worker threads (results never depend on it).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Also write a JSON report here (`gen` writes the function file instead).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Generate a base function.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Lift a base function to a boolean function and print its fibers.
    Lift(LiftArgs),
    /// Enumerate A-stars.
    Stars(StarsArgs),
    /// Star-free colorings.
    #[command(subcommand)]
    Color(ColorCommand),
    /// Run the peeling procedure on a star-free coloring.
    Peel(PeelArgs),
    /// Minimum monochromatic rectangle cover.
    Cover(CoverArgs),
    /// Multicolor discrepancy over rectangles.
    Disc(DiscArgs),
    /// Closed-form bounds.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Cheapest help-bit partition.
    Partition(PartitionArgs),
    /// Trace-function discrepancy trend.
    Trend(TrendArgs),
    /// Compute every measure and check the harness relations.
    Verify(VerifyArgs),
    /// Inspect a report file.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenCommand {
    Random {
        #[arg(long, default_value_t = 2)]
        dims: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "colors", visible_alias = "N")]
        colors: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Latin {
        #[arg(long)]
        n: usize,
    },
    Trace {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct Input {
    /// Function file in `noffn` format.
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KindArg {
    Unary,
    Binary,
    Gt,
}

#[derive(Debug, Args, Serialize)]
pub struct LiftArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: Input,
    #[arg(long, value_enum, default_value = "unary")]
    pub kind: KindArg,
}

#[derive(Debug, Args, Serialize)]
pub struct StarsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: Input,
    /// Print every star.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorCommand {
    Greedy {
        #[command(flatten)]
        #[serde(flatten)]
        input: Input,
        /// Save the coloring in `nofcol` format.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    Exact {
        #[command(flatten)]
        #[serde(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        max_colors: u32,
        #[arg(long, default_value_t = 50_000_000)]
        max_nodes: u64,
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct PeelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: Input,
    /// Coloring in `nofcol` format; the greedy coloring when absent.
    #[arg(long)]
    pub coloring: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CoverArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: Input,
    /// Restrict the scope to entries with these values (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<u32>>,
    #[arg(long, default_value_t = 6)]
    pub max_exact_side: usize,
    #[arg(long, default_value_t = 20_000_000)]
    pub cover_nodes: u64,
    /// Save the cover in `nofcover` format.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DiscArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: Input,
    /// Exact over all rectangles (the default).
    #[arg(long, conflicts_with = "samples")]
    pub exact: bool,
    /// Sample this many random rectangles instead.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCommand {
    /// log2((1 - 2^b / N) / disc)
    Bhk {
        /// Discrepancy as `num/den`.
        #[arg(long)]
        disc: String,
        #[arg(long, default_value_t = 0)]
        b: u32,
        #[arg(long = "colors", visible_alias = "N")]
        colors: u64,
    },
    /// (k - 1) 2^c_n + c_n
    Detsim {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        cn: u32,
    },
    /// Pad a help string to exactly b bits.
    Pad {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        b: u32,
    },
    /// Evaluate every closed-form bound whose inputs are given.
    Evaluators {
        #[arg(long)]
        k: f64,
        #[arg(long = "colors", visible_alias = "N")]
        colors: f64,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long)]
        dh: Option<f64>,
        #[arg(long)]
        nh: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Det,
    Nondet,
}

#[derive(Debug, Args, Serialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 1)]
    pub b: u32,
    #[arg(long, value_enum, default_value = "det")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 32)]
    pub depth_limit: u32,
    #[arg(long, default_value_t = 20_000_000)]
    pub cover_nodes: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct TrendArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub q: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub d: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 4)]
    pub max_side: usize,
    /// Check 5 compares b against b + 1 help bits.
    #[arg(long, default_value_t = 0)]
    pub b: u32,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportCommand {
    Show {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// What a command produced: text for standard output and the `results`
/// value of its report.
struct Outcome {
    text: String,
    results: serde_json::Value,
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("records are always encodable")
}

fn read_function(input: &Input) -> Result<BaseFunction> {
    let text = std::fs::read_to_string(&input.input)
        .map_err(|e| Error::Io(format!("{}: {e}", input.input.display())))?;
    function::parse(&text)
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("`{s}` is not a rational `num/den`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<u64>().map_err(|_| bad())?, d.trim().parse::<u64>().map_err(|_| bad())?),
        None => (s.trim().parse::<u64>().map_err(|_| bad())?, 1),
    };
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn bound_text(v: &BoundValue) -> String {
    match v {
        BoundValue::Bits(b) => format!("{b}"),
        BoundValue::Inapplicable(why) => format!("inapplicable ({why})"),
    }
}

fn run_gen(cmd: &GenCommand, file: Option<&PathBuf>) -> Result<Outcome> {
    let a = match cmd {
        GenCommand::Random {
            dims,
            n,
            colors,
            seed,
        } => function::gen_random(*dims, *n, *colors, *seed)?,
        GenCommand::Latin { n } => function::gen_latin(*n)?,
        GenCommand::Trace { q, d, k } => function::gen_trace(*q, *d, *k)?,
    };
    let body = function::serialize(&a);
    let text = match file {
        Some(path) => {
            write_file(path, &body)?;
            format!(
                "wrote {} (dims {}, side {}, colors {})\n",
                path.display(),
                a.dims(),
                a.side(),
                a.colors()
            )
        }
        None => body,
    };
    Ok(Outcome {
        text,
        results: json(&a),
    })
}

fn run_lift(args: &LiftArgs) -> Result<Outcome> {
    let a = read_function(&args.input)?;
    let kind = match args.kind {
        KindArg::Unary => LiftKind::Unary,
        KindArg::Binary => LiftKind::Binary,
        KindArg::Gt => LiftKind::GreaterThan,
    };
    let f = function::lift(&a, kind)?;
    let mut text = format!("lift {:?}: {} fibers of width {}\n", kind, a.len(), f.last_dim());
    for i in 0..a.len() {
        let bits: String = f.fiber(i).iter().map(|&b| if b { '1' } else { '0' }).collect();
        let _ = writeln!(text, "{:?} {bits}", a.point_of(i));
    }
    Ok(Outcome {
        text,
        results: json(&f),
    })
}

fn run_stars(args: &StarsArgs) -> Result<Outcome> {
    let a = read_function(&args.input)?;
    let all = stars::enumerate_stars(&a)?;
    let mut text = format!("stars: {}\n", all.len());
    if args.list {
        for s in &all {
            let _ = writeln!(
                text,
                "{:?} {:?} {:?} z={} z'={}",
                s.base, s.row_partner, s.col_partner, s.shared_value, s.base_value
            );
        }
    }
    Ok(Outcome {
        text,
        results: serde_json::json!({ "count": all.len(), "stars": all }),
    })
}

fn coloring_text(c: &stars::Coloring) -> String {
    let n = c.side();
    let mut text = String::new();
    for x in 0..n {
        let row: Vec<String> = (0..n).map(|y| c.at(x, y).to_string()).collect();
        let _ = writeln!(text, "  {}", row.join(" "));
    }
    text
}

fn run_color(cmd: &ColorCommand) -> Result<Outcome> {
    match cmd {
        ColorCommand::Greedy { input, save } => {
            let a = read_function(input)?;
            let c = stars::color_greedy(&a)?;
            if let Some(path) = save {
                write_file(path, &stars::serialize_coloring(&c))?;
            }
            Ok(Outcome {
                text: format!("greedy colors: {}\n{}", c.colors_used(), coloring_text(&c)),
                results: json(&c),
            })
        }
        ColorCommand::Exact {
            input,
            max_colors,
            max_nodes,
            save,
        } => {
            let a = read_function(input)?;
            let limits = ChiLimits {
                max_colors: *max_colors,
                max_nodes: *max_nodes,
            };
            match stars::chi_star_exact(&a, limits)? {
                ChiOutcome::Exact { colors, witness } => {
                    if let Some(path) = save {
                        write_file(path, &stars::serialize_coloring(&witness))?;
                    }
                    Ok(Outcome {
                        text: format!("chi_star: {colors}\n{}", coloring_text(&witness)),
                        results: json(&ChiOutcome::Exact { colors, witness }),
                    })
                }
                ChiOutcome::AboveColorLimit { max_colors } => Err(Error::LimitExceeded(format!(
                    "no star-free coloring with at most {max_colors} colors (--max-colors)"
                ))),
                ChiOutcome::NodeBudgetExhausted { nodes } => Err(Error::LimitExceeded(format!(
                    "search stopped after {nodes} nodes (--max-nodes)"
                ))),
            }
        }
    }
}

fn run_peel(args: &PeelArgs) -> Result<Outcome> {
    let a = read_function(&args.input)?;
    let coloring = match &args.coloring {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            stars::parse_coloring(&text)?
        }
        None => stars::color_greedy(&a)?,
    };
    let trace = stars::peel(&a, &coloring)?;
    let mut text = format!(
        "peel: {} iterations with {} colors\n",
        trace.len(),
        trace.colors_used
    );
    for (i, it) in trace.iterations.iter().enumerate() {
        let _ = writeln!(
            text,
            "  {}: E={:#x}x{:#x} v={} c={} |S|={} S̄={:#x}x{:#x} ratio={:.4}",
            i + 1,
            it.rows,
            it.cols,
            it.value,
            it.color,
            it.witness.len(),
            it.enclosing_rows,
            it.enclosing_cols,
            it.density_ratio
        );
    }
    Ok(Outcome {
        text,
        results: json(&trace),
    })
}

fn run_cover(args: &CoverArgs) -> Result<Outcome> {
    let a = read_function(&args.input)?;
    let scope = match &args.values {
        Some(vals) => EntrySet::with_values(&a, vals)?,
        None => EntrySet::full(a.side())?,
    };
    let limits = CoverLimits {
        max_exact_side: args.max_exact_side,
        max_nodes: args.cover_nodes,
    };
    let out = cylinder::min_mono_cover(&a, &scope, limits)?;
    let cover = out.cover();
    let file = cylinder::serialize_cover(cover);
    if let Some(path) = &args.save {
        write_file(path, &file)?;
    }
    let mut text = format!(
        "chi = {}{}\ncover_cc = {}\n",
        cover.chi(),
        if out.is_exact() { "" } else { " (greedy, not minimum)" },
        cylinder::cover_cc(cover)?
    );
    text.push_str(&file);
    Ok(Outcome {
        text,
        results: json(&out),
    })
}

fn run_disc(args: &DiscArgs) -> Result<Outcome> {
    let a = read_function(&args.input)?;
    let r = match args.samples {
        Some(samples) => discrepancy::disc_rect_sampled(&a, samples, args.seed)?,
        None => discrepancy::disc_rect_exact(&a)?,
    };
    let mode = if r.is_exact() { "exact" } else { "sampled lower bound" };
    Ok(Outcome {
        text: format!(
            "disc = {} ({mode})\nwitness rows={:#x} cols={:#x} value={}\n",
            r.value, r.witness.rows, r.witness.cols, r.witness_color
        ),
        results: json(&r),
    })
}

fn run_bound(cmd: &BoundCommand) -> Result<Outcome> {
    match cmd {
        BoundCommand::Bhk { disc, b, colors } => {
            let d = parse_rational(disc)?;
            let v = discrepancy::bhk_bound(&d, *b, *colors);
            Ok(Outcome {
                text: format!("bhk = {}\n", bound_text(&v)),
                results: json(&v),
            })
        }
        BoundCommand::Detsim { k, cn } => {
            let v = cylinder::det_sim_bound(*k, *cn)?;
            Ok(Outcome {
                text: format!("detsim = {v}\n"),
                results: json(&v),
            })
        }
        BoundCommand::Pad { h, c, b } => {
            let (h2, c2) = help::pad_help_bits(*h, *c, *b)?;
            Ok(Outcome {
                text: format!("padded: h = {h2}, c = {c2}\n"),
                results: serde_json::json!({ "h": h2, "c": c2 }),
            })
        }
        BoundCommand::Evaluators {
            k,
            colors,
            b,
            dh,
            nh,
            c,
        } => {
            let named = help::bound_evaluators(&EvaluatorInputs {
                k: *k,
                colors: *colors,
                b: *b,
                dh: *dh,
                nh: *nh,
                c: *c,
            });
            let mut text = String::new();
            for nb in &named {
                let _ = writeln!(text, "{} = {}   [{}]", nb.name, bound_text(&nb.value), nb.formula);
            }
            Ok(Outcome {
                text,
                results: json(&named),
            })
        }
    }
}

fn run_partition(args: &PartitionArgs) -> Result<Outcome> {
    let a = read_function(&args.input)?;
    let mode = match args.mode {
        ModeArg::Det => CostMode::Det,
        ModeArg::Nondet => CostMode::Nondet,
    };
    let limits = PartLimits {
        depth_limit: args.depth_limit,
        cover: CoverLimits {
            max_nodes: args.cover_nodes,
            ..CoverLimits::default()
        },
    };
    let best = help::best_partition_micro(&a, args.b, mode, &limits)?;
    let mut text = format!(
        "partition cost = {} with {} parts ({})\n",
        best.cost,
        best.partition.parts().len(),
        if best.exhaustive { "exhaustive" } else { "heuristic family" }
    );
    for (i, p) in best.partition.parts().iter().enumerate() {
        let entries: Vec<String> = p.entries().map(|(x, y)| format!("({x},{y})")).collect();
        let _ = writeln!(text, "  part {i}: {}", entries.join(" "));
    }
    Ok(Outcome {
        text,
        results: json(&best),
    })
}

fn run_trend(args: &TrendArgs) -> Result<Outcome> {
    let rows = discrepancy::tmp_trend(
        &args.q,
        &args.d,
        args.k,
        TrendOptions {
            samples: args.samples,
            seed: args.seed,
            ..TrendOptions::default()
        },
    )?;
    Ok(Outcome {
        text: discrepancy::format_trend_table(&rows),
        results: json(&rows),
    })
}

fn fmt_num(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x}"))
}

fn run_verify(args: &VerifyArgs) -> Result<Outcome> {
    let a = read_function(&args.input)?;
    let limits = HarnessLimits {
        max_exact_side: args.max_side,
        help_bits: args.b,
        ..HarnessLimits::default()
    };
    let r = help::harness_verify(&a, &limits)?;
    let opt = |v: Option<u32>| v.map_or_else(|| "-".into(), |x| x.to_string());
    let mut text = format!(
        "chi_star = {}  greedy = {}  peel = {}  chi = {}  cover_cc = {}  disc = {}  det_cc = {}\n",
        opt(r.chi_star),
        r.greedy_colors,
        r.peel_iterations,
        r.cover_chi.map_or_else(|| "-".into(), |c| c.to_string()),
        opt(r.cover_chi.map(|c| ceil_log2(c as u64))),
        r.disc.as_ref().map_or_else(|| "-".into(), |d| d.value.to_string()),
        opt(r.det_cc)
    );
    for c in &r.checks {
        let verdict = match &c.verdict {
            Verdict::Pass => "PASS".to_string(),
            Verdict::Fail => "FAIL".to_string(),
            Verdict::Skipped(why) => format!("SKIP ({why})"),
        };
        let _ = writeln!(
            text,
            "check {}: {} <= {}  [{}]  {verdict}",
            c.name,
            fmt_num(c.lhs),
            fmt_num(c.rhs),
            c.relation
        );
    }
    if r.checks.iter().any(|c| c.failed()) {
        return Err(Error::InternalInvariant {
            iteration: 0,
            detail: format!("harness relation failed\n{text}"),
        });
    }
    Ok(Outcome {
        text,
        results: json(&r),
    })
}

fn run_report(cmd: &ReportCommand) -> Result<Outcome> {
    let ReportCommand::Show { input } = cmd;
    let r = report::load_report(input)?;
    let mut text = format!(
        "tool_version: {}\nformat_version: {}\nconfig: {}\n",
        r.tool_version, r.format_version, r.config
    );
    let pretty = serde_json::to_string_pretty(&r.results).expect("json value");
    let _ = writeln!(text, "results: {pretty}");
    Ok(Outcome {
        text,
        results: r.results,
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gen(c) => run_gen(c, cli.out.as_ref()),
        Command::Lift(a) => run_lift(a),
        Command::Stars(a) => run_stars(a),
        Command::Color(c) => run_color(c),
        Command::Peel(a) => run_peel(a),
        Command::Cover(a) => run_cover(a),
        Command::Disc(a) => run_disc(a),
        Command::Bound(c) => run_bound(c),
        Command::Partition(a) => run_partition(a),
        Command::Trend(a) => run_trend(a),
        Command::Verify(a) => run_verify(a),
        Command::Report(c) => run_report(c),
    }
}

/// Exit status for usage errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for domain errors (limits, malformed inputs, failed checks).
pub const EXIT_DOMAIN: i32 = 1;

/// Run one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let run = || -> Result<Outcome> {
        match cli.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("--threads: {e}")))?
                .install(|| dispatch(&cli)),
            None => dispatch(&cli),
        }
    };
    match run().and_then(|outcome| {
        let gen = matches!(cli.command, Command::Gen(_));
        if let (Some(path), false) = (&cli.out, gen) {
            let rep = Report::new(&cli, &outcome.results)?;
            report::write_report(&rep, path)?;
        }
        Ok(outcome)
    }) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DOMAIN
        }
    }
}
