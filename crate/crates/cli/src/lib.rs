//! The `moments` command line.
//!
//! Exit status: 0 on success, 1 when an input document has errors (or a
//! computation on valid input fails), 2 on usage errors such as unknown
//! flags, unreadable paths or unknown tracks.

use std::fmt::Write as _;
use std::io::{self, IsTerminal, Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use story_moments::analyze::{compare_labelled, CompareOptions};
use story_moments::colorchart::{render_grayscale_strip, render_strip, RescaleScope, StripMode, StripOptions};
use story_moments::curves::{CurveFn, Grid, DEFAULT_ALIGN_OFFSET};
use story_moments::ingest::{
    parse_session_with, write_accumulated, ClarityRule, Diagnostic, Severity, Strictness, ValidationMode,
};
use story_moments::render::{export_curve3d, plot_track};
use story_moments::{Session, Track, Weights};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "moments", version, about = "Story and discourse moment tracks: validate, plot, chart and compare")]
pub struct Cli {
    /// Print diagnostics to stderr as JSON lines.
    #[arg(long, global = true)]
    pub json_diagnostics: bool,

    /// Treat positive story clarity as an error instead of a warning.
    #[arg(long, global = true)]
    pub strict: bool,

    /// Clarity rule for story tracks.
    #[arg(long, global = true, value_enum, default_value_t = ClarityArg::ConfusionOnly)]
    pub clarity: ClarityArg,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClarityArg {
    ConfusionOnly,
    Free,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check session documents and report every diagnostic.
    Validate {
        /// Session documents; "-" reads standard input.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Plot one track's functions as SVG.
    Plot(PlotArgs),
    /// Render tracks as a color-chart strip (PPM, PGM or PNG).
    Strip(StripArgs),
    /// Write the accumulated (prefix-sum) document of a session.
    Accumulate {
        input: PathBuf,
        #[arg(long, short, default_value = "-")]
        out: PathBuf,
    },
    /// Align tracks at a common start and compare their attraction curves.
    Compare(CompareArgs),
    /// Export the 3D parametric curve of a track as CSV rows t,x,y,z.
    Export3d(Export3dArgs),
    /// Serve live annotation sessions over HTTP.
    Serve(ServeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// Barycentric weights a0,a1,a2 (each in [0,1], summing to 1).
    #[arg(long, value_parser = parse_weights, default_value = "0.3333333333333333,0.3333333333333333,0.3333333333333333")]
    pub weights: Weights,
    /// Sampling step in seconds of film time.
    #[arg(long, default_value_t = Grid::DEFAULT_STEP_SECONDS)]
    pub step: f64,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    pub input: PathBuf,
    /// Subject of the track to plot.
    #[arg(long)]
    pub track: String,
    /// Plot F (prefix sums) instead of f.
    #[arg(long)]
    pub accumulated: bool,
    /// Plot the single combined curve instead of three axes.
    #[arg(long)]
    pub combined: bool,
    /// B-spline degree; 1 is the piecewise-linear curve.
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, short, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImageFormat {
    Ppm,
    Pgm,
    Png,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Instant,
    Clamp,
    Rescale,
}

#[derive(Args, Debug)]
pub struct StripArgs {
    pub input: PathBuf,
    /// Subjects to include, in order; all tracks when omitted.
    #[arg(long)]
    pub track: Vec<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Instant)]
    pub mode: ModeArg,
    /// Rescale each component over its own range instead of one global range.
    #[arg(long)]
    pub per_component: bool,
    /// Seconds of film time per pixel column.
    #[arg(long, default_value_t = 1.0)]
    pub spp: f64,
    #[arg(long, default_value_t = 24)]
    pub row_height: u32,
    /// Left edge in minutes.
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    /// Right edge in minutes; the latest moment when omitted.
    #[arg(long)]
    pub end: Option<f64>,
    /// Grayscale strip of the weighted combination.
    #[arg(long)]
    pub gray: bool,
    #[arg(long, value_parser = parse_weights, default_value = "0.3333333333333333,0.3333333333333333,0.3333333333333333")]
    pub weights: Weights,
    #[arg(long, value_enum, default_value_t = ImageFormat::Ppm)]
    pub format: ImageFormat,
    #[arg(long, short, default_value = "-")]
    pub out: PathBuf,
    /// Also write a JSON sidecar describing rows and parameters.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Session documents, each optionally suffixed "#subject" to pick one track.
    #[arg(required = true)]
    pub inputs: Vec<String>,
    /// Minute at which every aligned track starts.
    #[arg(long, default_value_t = DEFAULT_ALIGN_OFFSET)]
    pub offset: f64,
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Emit the JSON report instead of a table.
    #[arg(long)]
    pub json: bool,
    #[arg(long, short, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct Export3dArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub track: String,
    #[arg(long)]
    pub accumulated: bool,
    #[arg(long, default_value_t = Grid::DEFAULT_STEP_SECONDS)]
    pub step: f64,
    #[arg(long, short, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    #[arg(long, default_value_t = story_moments_server::DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    /// Directory for session journals; in-memory only when omitted.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Static files served under /ui.
    #[arg(long)]
    pub ui_dir: Option<PathBuf>,
}

fn parse_weights(s: &str) -> Result<Weights, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [a, b, c] => Weights::new(*a, *b, *c).map_err(|e| e.to_string()),
        _ => Err("expected three comma-separated numbers".into()),
    }
}

/// Failure of a command, mapped to an exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<story_moments::MomentError> for Failure {
    fn from(e: story_moments::MomentError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Reporter {
    json: bool,
    color: bool,
}

impl Reporter {
    fn new(json: bool) -> Self {
        let color = std::env::var_os("MOMENTS_NO_COLOR").is_none() && io::stderr().is_terminal();
        Reporter { json, color }
    }

    fn report(&self, source: &str, diagnostics: &[Diagnostic]) {
        let errors = diagnostics.iter().filter(|d| d.is_error()).count();
        let warnings = diagnostics.len() - errors;
        let mut err = io::stderr().lock();
        if self.json {
            let line = serde_json::json!({
                "source": source,
                "errors": errors,
                "warnings": warnings,
                "diagnostics": diagnostics,
            });
            let _ = writeln!(err, "{line}");
            return;
        }
        for d in diagnostics {
            let text = d.to_string();
            if self.color {
                let code = match d.severity {
                    Severity::Error => "31",
                    Severity::Warning => "33",
                };
                let _ = writeln!(err, "{source}: \x1b[{code}m{text}\x1b[0m");
            } else {
                let _ = writeln!(err, "{source}: {text}");
            }
        }
    }
}

fn display(path: &Path) -> String {
    if path == Path::new("-") {
        "<stdin>".to_string()
    } else {
        path.display().to_string()
    }
}

/// Checks that every input exists before any work starts.
fn check_inputs<'a>(paths: impl IntoIterator<Item = &'a Path>) -> Outcome {
    for p in paths {
        if p != Path::new("-") && !p.is_file() {
            return Err(Failure::Usage(format!("cannot read {}", p.display())));
        }
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Outcome {
    if path == Path::new("-") {
        let mut out = io::stdout().lock();
        match out.write_all(bytes).and_then(|()| out.flush()) {
            // a closed pipe (`| head`) is not a failure
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
            other => other?,
        }
    } else {
        std::fs::write(path, bytes)?;
    }
    Ok(())
}

struct Context {
    mode: ValidationMode,
    reporter: Reporter,
}

impl Context {
    fn load(&self, path: &Path) -> Result<Session, Failure> {
        let text = read_input(path)?;
        let source = display(path);
        match parse_session_with(&text, self.mode) {
            Ok(parsed) => {
                if !parsed.diagnostics.is_empty() {
                    self.reporter.report(&source, &parsed.diagnostics);
                }
                Ok(parsed.value)
            }
            Err(rejected) => {
                self.reporter.report(&source, &rejected.diagnostics);
                Err(Failure::Invalid(format!("{source}: {rejected}")))
            }
        }
    }
}

fn find_track<'a>(session: &'a Session, subject: &str, source: &str) -> Result<&'a Track, Failure> {
    session.track(subject).ok_or_else(|| {
        let known: Vec<&str> = session.tracks().iter().map(Track::subject).collect();
        Failure::Usage(format!("{source} has no track {subject:?} (tracks: {})", known.join(", ")))
    })
}

fn validate(ctx: &Context, inputs: &[PathBuf]) -> Outcome {
    check_inputs(inputs.iter().map(PathBuf::as_path))?;
    let mut failed = 0;
    let mut summary = String::new();
    for path in inputs {
        let text = read_input(path)?;
        let source = display(path);
        let diagnostics = match parse_session_with(&text, ctx.mode) {
            Ok(p) => p.diagnostics,
            Err(r) => r.diagnostics,
        };
        ctx.reporter.report(&source, &diagnostics);
        let errors = diagnostics.iter().filter(|d| d.is_error()).count();
        let warnings = diagnostics.len() - errors;
        if errors > 0 {
            failed += 1;
        }
        let _ = writeln!(summary, "{source}: {errors} errors, {warnings} warnings");
    }
    write_output(Path::new("-"), summary.as_bytes())?;
    if failed > 0 {
        Err(Failure::Invalid(format!("{failed} document(s) rejected")))
    } else {
        Ok(())
    }
}

fn plot(ctx: &Context, args: &PlotArgs) -> Outcome {
    check_inputs([args.input.as_path()])?;
    let session = ctx.load(&args.input)?;
    let track = find_track(&session, &args.track, &display(&args.input))?;
    let function = match (args.degree, args.accumulated, args.combined) {
        (0, ..) => return Err(Failure::Usage("degree must be at least 1".into())),
        (1, false, false) => CurveFn::Instant,
        (1, false, true) => CurveFn::Combined,
        (1, true, false) => CurveFn::Accumulated,
        (1, true, true) => CurveFn::AccumulatedCombined,
        (_, _, true) => return Err(Failure::Usage("--combined needs --degree 1".into())),
        (p, false, false) => CurveFn::Smooth { degree: p },
        (p, true, false) => CurveFn::SmoothAccumulated { degree: p },
    };
    let grid = Grid::Step {
        seconds: args.curve.step,
    };
    let svg = plot_track(track, function, &args.curve.weights, &grid)?;
    write_output(&args.out, svg.as_bytes())
}

fn strip(ctx: &Context, args: &StripArgs) -> Outcome {
    check_inputs([args.input.as_path()])?;
    let session = ctx.load(&args.input)?;
    let source = display(&args.input);
    let tracks: Vec<Track> = if args.track.is_empty() {
        session.tracks().iter().filter(|t| !t.is_empty()).cloned().collect()
    } else {
        args.track
            .iter()
            .map(|s| find_track(&session, s, &source).cloned())
            .collect::<Result<_, _>>()?
    };
    let opts = StripOptions {
        mode: match args.mode {
            ModeArg::Instant => StripMode::Instant,
            ModeArg::Clamp => StripMode::AccumulatedClamped,
            ModeArg::Rescale => StripMode::AccumulatedRescaled,
        },
        seconds_per_pixel: args.spp,
        row_height: args.row_height,
        start_minute: args.start,
        end_minute: args.end,
        scope: if args.per_component {
            RescaleScope::PerComponent
        } else {
            RescaleScope::Global
        },
    };
    let image = if args.gray {
        render_grayscale_strip(&tracks, &args.weights, &opts)?
    } else {
        render_strip(&tracks, &opts)?
    };
    let bytes = match args.format {
        ImageFormat::Ppm => image.to_ppm(),
        ImageFormat::Pgm if image.is_gray() => image.to_pgm(),
        ImageFormat::Pgm => return Err(Failure::Usage("--format pgm needs --gray".into())),
        ImageFormat::Png => image.to_png(),
    };
    if let Some(path) = &args.sidecar {
        write_output(path, image.sidecar_json().as_bytes())?;
    }
    write_output(&args.out, &bytes)
}

fn compare(ctx: &Context, args: &CompareArgs) -> Outcome {
    let specs: Vec<(PathBuf, Option<String>)> = args
        .inputs
        .iter()
        .map(|s| match s.rsplit_once('#') {
            Some((p, subject)) => (PathBuf::from(p), Some(subject.to_string())),
            None => (PathBuf::from(s), None),
        })
        .collect();
    check_inputs(specs.iter().map(|(p, _)| p.as_path()))?;
    let mut picked: Vec<(String, Track)> = Vec::new();
    for (path, subject) in &specs {
        let session = ctx.load(path)?;
        let source = display(path);
        let stem = path.file_stem().map_or(source.clone(), |s| s.to_string_lossy().into_owned());
        match subject {
            Some(s) => picked.push((format!("{stem}#{s}"), find_track(&session, s, &source)?.clone())),
            None => picked.extend(
                session
                    .tracks()
                    .iter()
                    .filter(|t| !t.is_empty())
                    .map(|t| (format!("{stem}#{}", t.subject()), t.clone())),
            ),
        }
    }
    if picked.len() < 2 {
        return Err(Failure::Usage(format!("compare needs at least two tracks, found {}", picked.len())));
    }
    let opts = CompareOptions {
        weights: args.curve.weights,
        offset_minutes: args.offset,
        step_seconds: args.curve.step,
    };
    let report = compare_labelled(&picked, &opts)?;
    let text = if args.json { report.to_json() } else { report.to_table() };
    write_output(&args.out, text.as_bytes())
}

fn export3d(ctx: &Context, args: &Export3dArgs) -> Outcome {
    check_inputs([args.input.as_path()])?;
    let session = ctx.load(&args.input)?;
    let track = find_track(&session, &args.track, &display(&args.input))?;
    let csv = export_curve3d(track, args.accumulated, &Grid::Step { seconds: args.step })?;
    write_output(&args.out, csv.as_bytes())
}

fn serve(args: &ServeArgs) -> Outcome {
    let config = story_moments_server::ServerConfig {
        addr: SocketAddr::new(args.host, args.port),
        data_dir: args.data_dir.clone(),
        ui_dir: args.ui_dir.clone(),
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(story_moments_server::serve(config))?;
    Ok(())
}

fn execute(cli: &Cli) -> Outcome {
    let ctx = Context {
        mode: ValidationMode {
            strictness: if cli.strict {
                Strictness::Strict
            } else {
                Strictness::Lenient
            },
            clarity: match cli.clarity {
                ClarityArg::ConfusionOnly => ClarityRule::ConfusionOnly,
                ClarityArg::Free => ClarityRule::Free,
            },
        },
        reporter: Reporter::new(cli.json_diagnostics),
    };
    match &cli.command {
        Command::Validate { inputs } => validate(&ctx, inputs),
        Command::Plot(a) => plot(&ctx, a),
        Command::Strip(a) => strip(&ctx, a),
        Command::Accumulate { input, out } => {
            check_inputs([input.as_path()])?;
            let session = ctx.load(input)?;
            write_output(out, write_accumulated(&session).as_bytes())
        }
        Command::Compare(a) => compare(&ctx, a),
        Command::Export3d(a) => export3d(&ctx, a),
        Command::Serve(a) => serve(a),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("moments: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("moments: {msg}");
            EXIT_INVALID
        }
    }
}
