//! `polyberg`: verification, codec, frame scans and sample dumps.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage or input
//! error, 3 numeric or invariant error.

mod bridge;
mod config;
mod failure;
mod range;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polyberg_core::frames::{frame_lattice, frame_ratio, necessary_condition};
use polyberg_core::halfplane::{read_field_csv, write_field_csv, HalfPlaneGrid, HalfPlanePoint, Measure};
use polyberg_core::multiplex::{channel_errors, decode_coefficients, encode, DecodeMethod, MuxField, SampledDecoder};
use polyberg_core::polyspace::{basis_e_normalized, kernel_true_columns, KernelSpec, KERNEL_MODES};
use polyberg_core::transforms::ChannelSet;
use polyberg_core::verification::run_suite;

use config::{CliConfig, GridOverrides};
use failure::Failure;

const VERSION: &str = env!("CARGO_PKG_VERSION");
const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "polyberg", version, about = "Polyanalytic Bergman transforms, multiplexing and frame analysis")]
struct Cli {
    /// JSON config (grid, M, tolerances, seed, out); flags override it
    #[arg(long, global = true, value_name = "JSON")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    grid: GridFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GridFlags {
    /// Grid half-width in x
    #[arg(long = "grid.x", global = true, value_name = "X")]
    grid_x: Option<f64>,
    #[arg(long = "grid.nx", global = true, value_name = "N")]
    grid_nx: Option<usize>,
    #[arg(long = "grid.smin", global = true, value_name = "S")]
    grid_smin: Option<f64>,
    #[arg(long = "grid.smax", global = true, value_name = "S")]
    grid_smax: Option<f64>,
    #[arg(long = "grid.ns", global = true, value_name = "N")]
    grid_ns: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Galerkin,
    Plain,
}

impl From<Method> for DecodeMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Galerkin => DecodeMethod::Galerkin,
            Method::Plain => DecodeMethod::Plain,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suite and calibration ledger; prints a JSON report
    Verify,
    /// Encode a ChannelSet JSON into a MuxField JSON
    Mux {
        input: PathBuf,
        /// Also sample the field on the grid and write it as CSV
        #[arg(long, value_name = "CSV")]
        render: Option<PathBuf>,
    },
    /// Recover the channels from a MuxField JSON or a sampled field CSV
    Demux {
        input: PathBuf,
        /// Channel count (required for CSV input)
        #[arg(long)]
        n: Option<usize>,
        /// Mode cutoff (defaults to the field's, or the config M for CSV)
        #[arg(long = "modes", visible_alias = "M")]
        modes: Option<usize>,
        #[arg(long, value_enum, default_value = "galerkin")]
        method: Method,
        /// ChannelSet JSON to measure the decoded channels against
        #[arg(long, value_name = "JSON")]
        reference: Option<PathBuf>,
    },
    /// Frame-bound estimates and the density condition over an (a, b) scan
    FrameScan {
        /// Dilation values: `2`, `1.5,2,3`, `2..4` or `2..4:9`
        #[arg(long, default_value = "2")]
        a: String,
        /// Translation values, same forms as --a
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Weight exponent of the condition threshold
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long = "modes", visible_alias = "M")]
        modes: Option<usize>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Sample the normalized basis function e_{n,m} on the grid (CSV)
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Sample the true-polyanalytic kernel K^n(w, z) over grid nodes w (CSV)
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        s: f64,
        /// Basis-sum cutoff; 0 selects the closed form
        #[arg(long = "modes", default_value_t = KERNEL_MODES)]
        modes: usize,
    },
    /// Convert a uniformly sampled time signal (CSV t,value or t,re,im) to
    /// Laguerre coefficients of its positive-frequency spectrum
    ImportTimeSignal {
        input: PathBuf,
        #[arg(long = "modes", visible_alias = "M")]
        modes: Option<usize>,
    },
}

struct Context {
    config: CliConfig,
    grid: GridOverrides,
    seed: u64,
    out: Option<PathBuf>,
}

impl Context {
    fn build_grid(&self) -> Result<HalfPlaneGrid<f64>, Failure> {
        Ok(self.grid.spec().build(Measure::Plain)?)
    }

    fn modes(&self, flag: Option<usize>) -> usize {
        flag.unwrap_or_else(|| self.config.modes())
    }

    fn header(&self, what: &str) -> String {
        format!("# polyberg {VERSION} {what} seed={}\n", self.seed)
    }
}

pub(crate) fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_to(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let result = match path {
        Some(p) => fs::write(p, bytes),
        None => io::stdout().lock().write_all(bytes),
    };
    result.map_err(|e| Failure::Usage(format!("{}: {e}", path.map_or("stdout".into(), |p| p.display().to_string()))))
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut text = serde_json::to_vec_pretty(value).map_err(|e| Failure::Numeric(e.to_string()))?;
    text.push(b'\n');
    Ok(text)
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn field_csv(header: String, points: &[HalfPlanePoint<f64>], values: &[num_complex::Complex64]) -> Result<Vec<u8>, Failure> {
    let mut buf = header.into_bytes();
    write_field_csv(&mut buf, points, values).map_err(|e| Failure::Numeric(e.to_string()))?;
    Ok(buf)
}

fn verify(ctx: &Context) -> Result<(), Failure> {
    let report = run_suite(ctx.grid.spec(), &ctx.config.tolerances, ctx.seed)?;
    write_to(ctx.out.as_deref(), &json(&report)?)?;
    if report.passed {
        return Ok(());
    }
    for c in report.failures() {
        let measured = c.measured.map_or("error".into(), |v| format!("{v:e}"));
        eprintln!("FAIL {}: measured {measured}, tolerance {:e}; {}", c.name, c.tolerance, c.detail);
    }
    Err(Failure::Verification(format!("{} of {} checks failed", report.failures().count(), report.checks.len())))
}

fn mux(ctx: &Context, input: &Path, render: Option<&Path>) -> Result<(), Failure> {
    let channels: ChannelSet<f64> = parse_json(input)?;
    let mut field = encode(&channels).map_err(Failure::invariant)?;
    if let Some(path) = render {
        let grid = ctx.build_grid()?;
        let samples = field.render(&grid)?.to_vec();
        let header = ctx.header(&format!("field n={} M={}", field.n, field.modes));
        write_to(Some(path), &field_csv(header, &grid.nodes, &samples)?)?;
    }
    write_to(ctx.out.as_deref(), &json(&field)?)
}

/// `n=` and `M=` tokens of a `# polyberg ...` header line.
fn csv_header_shape(text: &str) -> (Option<usize>, Option<usize>) {
    let mut shape = (None, None);
    for token in text.lines().take_while(|l| l.starts_with('#')).flat_map(str::split_whitespace) {
        if let Some(v) = token.strip_prefix("n=") {
            shape.0 = v.parse().ok();
        } else if let Some(v) = token.strip_prefix("M=") {
            shape.1 = v.parse().ok();
        }
    }
    shape
}

fn demux(
    ctx: &Context,
    input: &Path,
    n: Option<usize>,
    modes: Option<usize>,
    method: Method,
    reference: Option<&Path>,
) -> Result<(), Failure> {
    let text = read_input(input)?;
    let mismatch = |what: &str, declared: usize, found: usize| {
        Failure::Usage(format!("{}: {what} = {found} in the file, {declared} requested", input.display()))
    };
    let decoded = if text.trim_start().starts_with('{') {
        let field: MuxField<f64> =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
        field.validate().map_err(Failure::invariant)?;
        if let Some(n) = n.filter(|&n| n != field.n) {
            return Err(mismatch("n", n, field.n));
        }
        if let Some(m) = modes.filter(|&m| m != field.modes) {
            return Err(mismatch("M", m, field.modes));
        }
        decode_coefficients(&field, field.n, field.modes).map_err(Failure::invariant)?
    } else {
        let (file_n, file_m) = csv_header_shape(&text);
        let n = match (n, file_n) {
            (Some(n), Some(f)) if n != f => return Err(mismatch("n", n, f)),
            (Some(n), _) | (None, Some(n)) => n,
            (None, None) => return Err(Failure::Usage("sampled input needs --n".into())),
        };
        let modes = match (modes, file_m) {
            (Some(m), Some(f)) if m != f => return Err(mismatch("M", m, f)),
            (Some(m), _) | (None, Some(m)) => m,
            (None, None) => ctx.config.modes(),
        };
        let (points, values) = read_field_csv(&text).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
        let grid = ctx.build_grid()?;
        grid.check_nodes(&points, 1e-12)
            .map_err(|e| Failure::Usage(format!("{}: {e}; pass the grid flags used to render it", input.display())))?;
        let decoder = SampledDecoder::new(&grid, n, modes, method.into())?;
        if let Some((cond, dev)) = decoder.conditioning() {
            eprintln!("grid Gram condition {cond:.6e}, max |G - I| {dev:.6e}");
        }
        decoder.decode(&grid, &values)?
    };
    if let Some(path) = reference {
        let want: ChannelSet<f64> = parse_json(path)?;
        for (k, e) in channel_errors(&decoded, &want)?.iter().enumerate() {
            eprintln!("channel {k}: relative error {e:.6e}");
        }
    }
    write_to(ctx.out.as_deref(), &json(&decoded)?)
}

fn frame_scan(ctx: &Context, a: &str, b: &str, n: usize, alpha: f64, modes: usize, trials: usize) -> Result<(), Failure> {
    let (a_values, b_values) = (range::parse_range(a)?, range::parse_range(b)?);
    let mut out = ctx.header(&format!("frame-scan n={n} alpha={alpha} M={modes} trials={trials}")).into_bytes();
    out.extend_from_slice(b"a,b,n,density_value,threshold,lower_est,upper_est,satisfied\n");
    for &a in &a_values {
        for &b in &b_values {
            let condition = necessary_condition(a, b, n, alpha)?;
            let report = frame_ratio(n, &frame_lattice(a, b)?, modes, trials, ctx.seed)?;
            writeln!(
                out,
                "{a},{b},{n},{:e},{:e},{:e},{:e},{}",
                condition.value, condition.threshold, report.lower_est, report.upper_est, condition.satisfied
            )
            .map_err(|e| Failure::Numeric(e.to_string()))?;
        }
    }
    write_to(ctx.out.as_deref(), &out)
}

fn basis(ctx: &Context, n: usize, m: usize) -> Result<(), Failure> {
    let grid = ctx.build_grid()?;
    let samples = grid.sample(|p| basis_e_normalized(n, m, p))?;
    write_to(ctx.out.as_deref(), &field_csv(ctx.header(&format!("basis n={n} m={m}")), &grid.nodes, &samples)?)
}

fn kernel(ctx: &Context, n: usize, x: f64, s: f64, modes: usize) -> Result<(), Failure> {
    let z = HalfPlanePoint::new(x, s)?;
    let spec = if modes == 0 { KernelSpec::rodrigues(n) } else { KernelSpec::basis_sum(n, modes)? };
    let grid = ctx.build_grid()?;
    let column = kernel_true_columns(spec, &grid.nodes, &[z])?.remove(0);
    let header = ctx.header(&format!("kernel n={n} z=({x},{s}) modes={modes}"));
    write_to(ctx.out.as_deref(), &field_csv(header, &grid.nodes, &column)?)
}

fn import_time_signal(ctx: &Context, input: &Path, modes: usize) -> Result<(), Failure> {
    let (t, values) = bridge::read_time_csv(&read_input(input)?)?;
    let imported = bridge::import(&t, &values, modes)?;
    eprintln!(
        "{} samples; negative-frequency energy share {:.3e} (dropped)",
        imported.samples, imported.negative_energy
    );
    write_to(ctx.out.as_deref(), &json(&imported.coeffs)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(path) => CliConfig::load(path)?,
        None => CliConfig::default(),
    };
    let flags = GridOverrides {
        x_half_width: cli.grid.grid_x,
        n_x: cli.grid.grid_nx,
        s_min: cli.grid.grid_smin,
        s_max: cli.grid.grid_smax,
        n_s: cli.grid.grid_ns,
    };
    let ctx = Context {
        grid: config.grid.merged(&flags),
        seed: cli.seed.or(config.seed).unwrap_or(DEFAULT_SEED),
        out: cli.out.or_else(|| config.out.clone()),
        config,
    };
    match cli.command {
        Command::Verify => verify(&ctx),
        Command::Mux { input, render } => mux(&ctx, &input, render.as_deref()),
        Command::Demux { input, n, modes, method, reference } => demux(&ctx, &input, n, modes, method, reference.as_deref()),
        Command::FrameScan { a, b, n, alpha, modes, trials } => frame_scan(&ctx, &a, &b, n, alpha, ctx.modes(modes), trials),
        Command::Basis { n, m } => basis(&ctx, n, m),
        Command::Kernel { n, x, s, modes } => kernel(&ctx, n, x, s, modes),
        Command::ImportTimeSignal { input, modes } => import_time_signal(&ctx, &input, ctx.modes(modes)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("polyberg: {f}");
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn header_shape_tokens() {
        let text = "# polyberg 0.1.0 field n=3 M=16 seed=0\nx,s,re,im\n";
        assert_eq!(csv_header_shape(text), (Some(3), Some(16)));
        assert_eq!(csv_header_shape("x,s,re,im\n"), (None, None));
    }
}
