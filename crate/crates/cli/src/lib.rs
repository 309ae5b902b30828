//! The `cprop` command line.
//!
//! [`run`] parses arguments, executes one command and returns the rendered
//! report with its exit code: 0 for success or a true answer, 1 for a false
//! answer or an unsolvable lifting problem, 2 for bad input.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use cprop::format::render_value;
use cprop::Error;
use serde_json::{Map, Value};

mod commands;
mod selfcheck;

#[derive(Parser, Debug)]
#[command(name = "cprop", version, about = "Colored PROPs, their algebras and the operad bridge over the rationals")]
struct Cli {
    /// Directory that file arguments and nested references are relative to.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    /// Vertex bound for graph enumeration.
    #[arg(long, global = true, default_value_t = 3)]
    max_vertices: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    /// Signature or presentation for expression arguments (default: the A∞ signature).
    #[arg(long, global = true)]
    signature: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum TransferDirection {
    /// The map is an acyclic fibration; the structure is given on its target.
    Fibration,
    /// The map is an acyclic cofibration; the structure is given on its source.
    Cofibration,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and validate any document.
    Check { file: String },
    /// Canonical graph of an expression.
    Normalize { expr: String },
    /// Whether two expressions denote the same element of the free PROP.
    Eq { lhs: String, rhs: String },
    /// Dimension of a free PROP component, counted up to K vertices.
    DimFree { sig: String, out: String, input: String, k: Option<usize> },
    /// Vertical product of two bimodules.
    BoxV { p: String, q: String },
    /// Horizontal product of two bimodules.
    BoxH { p: String, q: String },
    /// Homology dimensions of a complex.
    Homology { x: String },
    /// Model-structure class of a degree-0 chain map.
    Classify { f: String },
    /// Path object of a complex, with its contract checked.
    PathObject { x: String },
    /// Check the identities of an algebra structure.
    AlgebraCheck { a: String },
    /// Whether a family map is a morphism between two structures.
    MorphismCheck { f: String, ax: String, ay: String },
    /// Transfer a structure along an acyclic (co)fibration.
    Transfer {
        p: String,
        f: String,
        #[arg(value_enum)]
        dir: TransferDirection,
        src: String,
    },
    /// Structure on the middle of a factorization of an algebra morphism.
    Factor { g: String, i: String, p: String, b: String },
    /// Components of the PROP generated by an operad, truncated at K outputs.
    OperadToProp { o: String, k: usize },
    /// Round trip of an operad algebra through the generated PROP.
    RoundTrip {
        o: String,
        x: String,
        l: String,
        /// Composites of each kind to test.
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
    /// Randomized consistency checks.
    Selfcheck {
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Status {
    Ok,
    False,
    Unsolvable,
    Error,
}

impl Status {
    fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::False | Status::Unsolvable => 1,
            Status::Error => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::False => "false",
            Status::Unsolvable => "unsolvable",
            Status::Error => "error",
        }
    }
}

/// The outcome of one command. `body` is printed verbatim in text mode when
/// the command produces a document.
pub(crate) struct Report {
    pub status: Status,
    pub fields: Map<String, Value>,
    pub lines: Vec<String>,
    pub body: Option<Value>,
}

impl Report {
    pub fn new(status: Status) -> Self {
        Report { status, fields: Map::new(), lines: Vec::new(), body: None }
    }

    pub fn verdict(holds: bool) -> Self {
        Report::new(if holds { Status::Ok } else { Status::False })
    }

    pub fn field(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), v.into());
        self
    }

    pub fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    pub fn document(mut self, v: Value) -> Self {
        self.body = Some(v);
        self
    }

    fn from_error(e: &Error) -> Self {
        let status = if matches!(e, Error::Unsolvable(_)) { Status::Unsolvable } else { Status::Error };
        let msg = e.to_string();
        let text = if status == Status::Unsolvable { format!("UNSOLVABLE: {}", msg.trim_start_matches("unsolvable: ")) } else { format!("error: {msg}") };
        Report::new(status).field("message", msg).line(text)
    }

    fn render(self, command: &str, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut obj = self.fields;
                obj.insert("kind".into(), "report".into());
                obj.insert("command".into(), command.into());
                obj.insert("status".into(), self.status.name().into());
                if let Some(b) = self.body {
                    obj.insert("result".into(), b);
                }
                render_value(&Value::Object(obj))
            }
            ReportFormat::Text => {
                let mut out = String::new();
                if let Some(b) = &self.body {
                    out.push_str(&render_value(b));
                }
                for l in &self.lines {
                    out.push_str(l);
                    out.push('\n');
                }
                out
            }
        }
    }
}

pub(crate) struct Context {
    pub loader: cprop::format::Loader,
    pub max_vertices: usize,
    pub seed: u64,
    pub signature: Option<String>,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Normalize { .. } => "normalize",
        Command::Eq { .. } => "eq",
        Command::DimFree { .. } => "dim-free",
        Command::BoxV { .. } => "box-v",
        Command::BoxH { .. } => "box-h",
        Command::Homology { .. } => "homology",
        Command::Classify { .. } => "classify",
        Command::PathObject { .. } => "path-object",
        Command::AlgebraCheck { .. } => "algebra-check",
        Command::MorphismCheck { .. } => "morphism-check",
        Command::Transfer { .. } => "transfer",
        Command::Factor { .. } => "factor",
        Command::OperadToProp { .. } => "operad-to-prop",
        Command::RoundTrip { .. } => "round-trip",
        Command::Selfcheck { .. } => "selfcheck",
    }
}

fn dispatch(ctx: &Context, c: &Command) -> cprop::Result<Report> {
    use commands as c_;
    match c {
        Command::Check { file } => c_::check(ctx, file),
        Command::Normalize { expr } => c_::normalize(ctx, expr),
        Command::Eq { lhs, rhs } => c_::eq(ctx, lhs, rhs),
        Command::DimFree { sig, out, input, k } => c_::dim_free(ctx, sig, out, input, k.unwrap_or(ctx.max_vertices)),
        Command::BoxV { p, q } => c_::boxes(ctx, p, q, true),
        Command::BoxH { p, q } => c_::boxes(ctx, p, q, false),
        Command::Homology { x } => c_::homology(ctx, x),
        Command::Classify { f } => c_::classify(ctx, f),
        Command::PathObject { x } => c_::path_object(ctx, x),
        Command::AlgebraCheck { a } => c_::algebra_check(ctx, a),
        Command::MorphismCheck { f, ax, ay } => c_::morphism_check(ctx, f, ax, ay),
        Command::Transfer { p, f, dir, src } => c_::transfer(ctx, p, f, *dir, src),
        Command::Factor { g, i, p, b } => c_::factor(ctx, g, i, p, b),
        Command::OperadToProp { o, k } => c_::operad_to_prop(ctx, o, *k),
        Command::RoundTrip { o, x, l, limit } => c_::round_trip(ctx, o, x, l, *limit),
        Command::Selfcheck { trials } => selfcheck::run(ctx.seed, *trials),
    }
}

/// Runs one command line (without the program name) and returns the
/// rendered report and exit code.
pub fn run<I, S>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("cprop")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (e.render().to_string(), code);
        }
    };
    let ctx = Context {
        loader: cprop::format::Loader::new(cli.workspace.clone()),
        max_vertices: cli.max_vertices,
        seed: cli.seed,
        signature: cli.signature.clone(),
    };
    let report = dispatch(&ctx, &cli.command).unwrap_or_else(|e| Report::from_error(&e));
    let code = report.status.code();
    (report.render(command_name(&cli.command), cli.report), code)
}
