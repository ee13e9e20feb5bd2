//! Command-line front end for the watershed library.
//!
//! [`run`] parses arguments, executes one command and returns the exit code
//! together with the text written to stdout and stderr, so the binary is a
//! thin wrapper and tests can drive commands in-process.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use mwshed::forest::{build_facet_graph, verify_msf_theorem, watershed_forest};
use mwshed::io::{self, Completion};
use mwshed::morse::{classify, random_morse_stack_with};
use mwshed::watershed::verify_result;
use mwshed::{fixtures, morse_watershed, validate, watershed_collapse, Error, Stack, WatershedResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "mwshed",
    version,
    about = "Watersheds of stacks on simplicial pseudomanifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Algo {
    #[default]
    Collapse,
    Morse,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Complete {
    #[default]
    None,
    Max,
}

impl From<Complete> for Completion {
    fn from(c: Complete) -> Self {
        match c {
            Complete::None => Completion::None,
            Complete::Max => Completion::Max,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Labels,
    Dot,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Shape {
    Cycle,
    Sphere,
    Octahedron,
    Torus,
    Wedge,
    Branch,
    /// The six-cycle Morse stack with two minima.
    Cyc6,
    /// A stack on a branching 1-complex whose collapse merges minima.
    Branching,
}

#[derive(clap::Args, Debug)]
struct StackInput {
    /// Stack file (`face : value` per line).
    file: PathBuf,
    /// Fill faces without a value from their cofaces.
    #[arg(long, value_enum, default_value_t = Complete::None)]
    complete: Complete,
}

#[derive(clap::Args, Debug)]
struct WatershedArgs {
    #[arg(long, value_enum, default_value_t = Algo::Collapse)]
    algo: Algo,
    /// Seed for the collapse order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report pseudomanifold and normality checks of a complex.
    Validate {
        /// Complex file (one face per line).
        file: PathBuf,
    },
    /// Load a stack and report its basic properties.
    CheckStack(StackInput),
    /// List the minima of a stack.
    Minima(StackInput),
    /// List the critical faces of a Morse stack.
    Critical(StackInput),
    /// Compute and verify a watershed.
    Watershed {
        #[command(flatten)]
        input: StackInput,
        #[command(flatten)]
        ws: WatershedArgs,
    },
    /// Watershed forest of a Morse stack.
    Msf {
        #[command(flatten)]
        input: StackInput,
        /// Check that it is the unique minimum spanning forest.
        #[arg(long)]
        verify: bool,
        /// Print the dual graph in DOT instead.
        #[arg(long)]
        dot: bool,
    },
    /// Print a named complex, or a random Morse stack on it when a seed is
    /// given.
    Gen {
        #[arg(value_enum)]
        shape: Shape,
        /// Size: cycle length, sphere dimension + 1, torus rows.
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Torus columns (defaults to `n`).
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Probability of a critical facet at each peeling step.
        #[arg(long, default_value_t = 0.0)]
        critical_rate: f64,
    },
    /// Export a watershed as labels, DOT or OFF.
    Export {
        #[command(flatten)]
        input: StackInput,
        #[command(flatten)]
        ws: WatershedArgs,
        #[arg(long, value_enum, default_value_t = Format::Labels)]
        format: Format,
        /// Vertex coordinates (`id x y [z]` per line), needed for OFF.
        #[arg(long)]
        coords: Option<PathBuf>,
    },
}

/// Result of one command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        Output {
            code,
            stdout: String::new(),
            stderr: stderr.into(),
        }
    }
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidSimplex(_) => EXIT_PARSE,
            Error::InvalidArgument(_) => EXIT_USAGE,
            _ => EXIT_VALIDATION,
        };
        Failure(code, e.to_string())
    }
}

type CmdResult = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn load_stack(input: &StackInput) -> Result<Stack, Failure> {
    Ok(io::parse_stack(&read(&input.file)?, input.complete.into())?)
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output::fail(EXIT_USAGE, text)
            } else {
                Output::ok(text)
            };
        }
    };
    let result = match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::CheckStack(input) => cmd_check_stack(&input),
        Command::Minima(input) => cmd_minima(&input),
        Command::Critical(input) => cmd_critical(&input),
        Command::Watershed { input, ws } => cmd_watershed(&input, &ws),
        Command::Msf { input, verify, dot } => cmd_msf(&input, verify, dot),
        Command::Gen {
            shape,
            n,
            m,
            seed,
            critical_rate,
        } => cmd_gen(shape, n, m.unwrap_or(n), seed, critical_rate),
        Command::Export {
            input,
            ws,
            format,
            coords,
        } => cmd_export(&input, &ws, format, coords.as_deref()),
    };
    match result {
        Ok(stdout) => Output::ok(stdout),
        Err(Failure(code, msg)) => Output::fail(code, format!("error: {msg}\n")),
    }
}

fn cmd_validate(file: &Path) -> CmdResult {
    let complex = io::parse_complex(&read(file)?)?;
    let report = validate(&complex);
    Ok(format!("faces={}\n{report}", complex.len()))
}

fn cmd_check_stack(input: &StackInput) -> CmdResult {
    let f = load_stack(input)?;
    let mut out = String::new();
    writeln!(out, "is_stack=true").unwrap();
    writeln!(out, "faces={}", f.host().len()).unwrap();
    writeln!(out, "dim={}", f.host().dim()).unwrap();
    writeln!(out, "lambda_min={}", f.lambda_min()).unwrap();
    writeln!(out, "lambda_max={}", f.lambda_max()).unwrap();
    writeln!(out, "is_morse={}", mwshed::is_morse(&f)).unwrap();
    writeln!(out, "minima={}", f.minima().len()).unwrap();
    writeln!(out, "normal_host={}", mwshed::is_normal_pseudomanifold(f.host())).unwrap();
    Ok(out)
}

fn cmd_minima(input: &StackInput) -> CmdResult {
    let f = load_stack(input)?;
    let m = f.minima();
    let mut out = String::new();
    writeln!(out, "minima={}", m.len()).unwrap();
    writeln!(out, "divide={}", m.divide.len()).unwrap();
    for (i, min) in m.minima.iter().enumerate() {
        writeln!(
            out,
            "minimum={} altitude={} faces={}",
            i + 1,
            min.altitude,
            min.faces.len()
        )
        .unwrap();
    }
    for (i, min) in m.minima.iter().enumerate() {
        for &x in &min.faces {
            writeln!(out, "{} : {}", f.host().face(x), i + 1).unwrap();
        }
    }
    Ok(out)
}

fn cmd_critical(input: &StackInput) -> CmdResult {
    let f = load_stack(input)?;
    let report = classify(&f)?;
    let mut out = String::new();
    for (p, faces) in report.critical.iter().enumerate() {
        writeln!(out, "critical.{p}={}", faces.len()).unwrap();
    }
    writeln!(
        out,
        "gradient_pairs={}",
        report.regular.iter().map(Vec::len).sum::<usize>() / 2
    )
    .unwrap();
    for faces in &report.critical {
        for &x in faces {
            writeln!(out, "{} : critical", f.host().face(x)).unwrap();
        }
    }
    Ok(out)
}

fn compute(f: &Stack, ws: &WatershedArgs) -> Result<WatershedResult, Failure> {
    let r = match ws.algo {
        Algo::Collapse => watershed_collapse(f, ws.seed)?,
        Algo::Morse => morse_watershed(f)?,
    };
    if !verify_result(f, &r)? {
        return Err(Failure(EXIT_VERIFICATION, "computed cut failed verification".into()));
    }
    Ok(r)
}

fn cmd_watershed(input: &StackInput, ws: &WatershedArgs) -> CmdResult {
    let f = load_stack(input)?;
    let r = compute(&f, ws)?;
    let mut out = String::new();
    if let Some(seed) = r.seed() {
        writeln!(out, "# seed={seed}").unwrap();
    }
    out.push_str(&io::write_labels(f.host(), r.labels()));
    Ok(out)
}

fn cmd_msf(input: &StackInput, verify: bool, dot: bool) -> CmdResult {
    let f = load_stack(input)?;
    let (graph, forest) = watershed_forest(&f)?;
    if verify {
        let v = verify_msf_theorem(&f)?;
        if !v.passed() {
            return Err(Failure(
                EXIT_VERIFICATION,
                format!("forest is not the unique minimum forest: {v:?}"),
            ));
        }
    }
    if dot {
        return Ok(io::facet_graph_dot(f.host(), &graph, Some(&forest)));
    }
    let host = f.host();
    let mut out = String::new();
    for &e in &forest.edges {
        let ge = graph.edges()[e];
        writeln!(
            out,
            "{} | {} : {}",
            host.face(graph.faces()[ge.a]),
            host.face(graph.faces()[ge.b]),
            ge.weight
        )
        .unwrap();
    }
    writeln!(out, "weight={}", forest.weight(&graph)).unwrap();
    if verify {
        writeln!(out, "verified=true").unwrap();
    }
    Ok(out)
}

fn cmd_gen(shape: Shape, n: u32, m: u32, seed: Option<u64>, rate: f64) -> CmdResult {
    let bad = |what: &str| Failure(EXIT_USAGE, what.to_string());
    let complex = match shape {
        Shape::Cyc6 => return Ok(io::write_stack(&fixtures::cyc6_stack())),
        Shape::Branching => return Ok(io::write_stack(&fixtures::branching_stack())),
        Shape::Cycle if n < 3 => return Err(bad("a cycle needs --n >= 3")),
        Shape::Cycle => fixtures::cycle(n),
        Shape::Sphere if n < 2 => return Err(bad("a sphere needs --n >= 2")),
        Shape::Sphere => fixtures::simplex_boundary(n),
        Shape::Octahedron => fixtures::octahedron(),
        Shape::Torus => mwshed::manifold::generate_torus(n, m)?,
        Shape::Wedge => fixtures::wedge(),
        Shape::Branch => fixtures::branch(),
    };
    if !(0.0..=1.0).contains(&rate) {
        return Err(bad("--critical-rate must lie in [0, 1]"));
    }
    Ok(match seed {
        Some(s) => io::write_stack(&random_morse_stack_with(Arc::new(complex), s, rate)),
        None => io::write_complex(&complex),
    })
}

fn cmd_export(input: &StackInput, ws: &WatershedArgs, format: Format, coords: Option<&Path>) -> CmdResult {
    let f = load_stack(input)?;
    let r = compute(&f, ws)?;
    Ok(match format {
        Format::Labels => io::write_labels(f.host(), r.labels()),
        Format::Dot => io::watershed_dot(&r, &build_facet_graph(&f)?),
        Format::Off => {
            let path = coords.ok_or_else(|| Failure(EXIT_USAGE, "OFF export needs --coords".into()))?;
            let coords = io::parse_coords(&read(path)?)?;
            io::watershed_off(&r, &coords)?
        }
    })
}
