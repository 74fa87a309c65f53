//! `legwave` command-line front end. Every subcommand reads and writes
//! files (or stdout when `--out` is omitted); outputs are written atomically.
//!
//! Exit codes: 0 ok, 2 usage/validation, 3 resource limit, 4 I/O.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{error_norms, orthogonality_defect, roundtrip_error};
use crate::analysis::{OrthogonalityReport, ReconstructionReport};
use crate::cascade::{cascade_scaling, cascade_wavelet, DyadicGridFunction};
use crate::error::{Error, Result};
use crate::filterbank::{freq_response, uniform_grid, FilterBank, SignConvention};
use crate::io::{self, Decomposition1DFile, Decomposition2DFile, PacketTreeFile};
use crate::legendre::LegendreOrder;
use crate::transform::{dwt1d, dwt2d, idwt1d, idwt2d, wp_decompose, wp_functions, Boundary};

#[derive(Debug, Parser)]
#[command(
    name = "legwave",
    version,
    about = "Legendre wavelet filters, shapes and transforms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Phi,
    Psi,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// Wavelet name, e.g. `legd2`.
    #[arg(value_name = "FAMILY")]
    name: Option<String>,
    /// Wavelet name, e.g. `legd2` (same as the positional argument).
    #[arg(long)]
    family: Option<String>,
    /// Odd Legendre degree instead of a family name.
    #[arg(long = "v", allow_hyphen_values = true)]
    degree: Option<i64>,
    /// `suppressed` (positive taps) or `paper` (leading minus).
    #[arg(long, default_value = "suppressed")]
    sign: String,
}

impl FamilyArgs {
    fn order(&self) -> Result<LegendreOrder> {
        let named = match (&self.name, &self.family) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Parse(format!(
                    "conflicting family names `{a}` and `{b}`"
                )))
            }
            (a, b) => a.as_ref().or(b.as_ref()),
        };
        match (named, self.degree) {
            (Some(_), Some(_)) => Err(Error::Parse(
                "give either a family name or --v, not both".into(),
            )),
            (Some(name), None) => parse_family(name),
            (None, Some(v)) => LegendreOrder::new(v),
            (None, None) => Err(Error::Parse(
                "missing wavelet: give `legdN` or --v <odd>".into(),
            )),
        }
    }

    fn filter(&self) -> Result<FilterBank> {
        FilterBank::new(self.order()?, self.sign.parse::<SignConvention>()?)
    }
}

/// `legdN` → order `v = 2N − 1`.
pub fn parse_family(name: &str) -> Result<LegendreOrder> {
    let n = name
        .strip_prefix("legd")
        .and_then(|n| n.parse::<i64>().ok())
        .ok_or_else(|| Error::Parse(format!("`{name}` is not a legdN family name")))?;
    LegendreOrder::from_family_index(n)
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output path; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Low-pass and high-pass filter taps.
    Filters {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Low-pass transfer function sampled over [−π, π].
    Response {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Number of frequency samples, endpoints included.
        #[arg(long, default_value_t = 1025)]
        grid: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Scaling function, wavelet, or wavelet-packet functions by the cascade.
    Wavefun {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output file, or output directory with --wp.
        #[command(flatten)]
        out: OutArgs,
        #[arg(long, default_value_t = 8)]
        iter: usize,
        #[arg(long, value_enum, default_value = "phi")]
        kind: Kind,
        /// Packet index or inclusive range, e.g. `0..9`.
        #[arg(long)]
        wp: Option<String>,
    },
    /// Multi-level 1D transform of a CSV signal.
    Dwt {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, default_value = "periodic")]
        boundary: String,
    },
    /// Inverse of `dwt`; the wavelet is read from the dump.
    Idwt {
        #[command(flatten)]
        out: OutArgs,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value = "suppressed")]
        sign: String,
    },
    /// Separable 2D transform of a PGM image.
    Dwt2 {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, default_value = "periodic")]
        boundary: String,
    },
    /// Inverse of `dwt2`, written as PGM.
    Idwt2 {
        #[command(flatten)]
        out: OutArgs,
        #[arg(short, long)]
        input: PathBuf,
        /// Original image; reports round-trip error before quantisation.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Write ASCII (P2) instead of binary (P5).
        #[arg(long)]
        ascii: bool,
        #[arg(long, default_value = "suppressed")]
        sign: String,
    },
    /// Full wavelet-packet tree of a CSV signal.
    Wp {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value = "periodic")]
        boundary: String,
    },
    /// Orthogonality and reconstruction report.
    Analyze {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long, default_value_t = 16)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Serialize)]
struct AnalysisOutput {
    family: String,
    orthogonality: OrthogonalityReport,
    reconstruction: ReconstructionReport,
}

#[derive(Debug, Serialize)]
struct ResponseJson {
    omega: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    mag: Vec<f64>,
}

fn emit(out: &OutArgs, bytes: &[u8]) -> Result<()> {
    match &out.out {
        Some(path) => io::write_atomic(path, bytes),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory");
    buf
}

fn shape_bytes(func: &DyadicGridFunction) -> Vec<u8> {
    csv_bytes(|b| func.write_csv(b))
}

fn parse_wp_range(spec: &str) -> Result<(usize, usize)> {
    let bad = || {
        Error::Parse(format!(
            "bad packet range `{spec}` (expected `a..b` or `n`)"
        ))
    };
    let (lo, hi) = match spec.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| bad())?,
        ),
        None => {
            let n = spec.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn filter_for(order: LegendreOrder, sign: &str) -> Result<FilterBank> {
    FilterBank::new(order, sign.parse()?)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Filters {
            family,
            out,
            format,
        } => {
            let filter = family.filter()?;
            let bytes = match format {
                Format::Json => io::to_json(&filter.export())?,
                Format::Csv => csv_bytes(|b| {
                    writeln!(b, "k,h,g")?;
                    for (k, (h, g)) in filter.h().iter().zip(filter.g()).enumerate() {
                        writeln!(b, "{k},{h:?},{g:?}")?;
                    }
                    Ok(())
                }),
            };
            emit(&out, &bytes)
        }
        Command::Response {
            family,
            out,
            grid,
            format,
        } => {
            if grid < 2 {
                return Err(Error::Parse(format!(
                    "--grid must be at least 2, got {grid}"
                )));
            }
            let filter = family.filter()?;
            let omega = uniform_grid(-PI, PI, grid);
            let resp = freq_response(filter.h(), &omega);
            let bytes = match format {
                Format::Csv => csv_bytes(|b| {
                    writeln!(b, "omega,re,im,mag")?;
                    for (w, z) in resp.omega.iter().zip(&resp.values) {
                        writeln!(b, "{w:?},{:?},{:?},{:?}", z.re, z.im, z.norm())?;
                    }
                    Ok(())
                }),
                Format::Json => io::to_json(&ResponseJson {
                    re: resp.values.iter().map(|z| z.re).collect(),
                    im: resp.values.iter().map(|z| z.im).collect(),
                    mag: resp.magnitudes(),
                    omega: resp.omega,
                })?,
            };
            emit(&out, &bytes)
        }
        Command::Wavefun {
            family,
            out,
            iter,
            kind,
            wp,
        } => {
            let filter = family.filter()?;
            match wp {
                Some(spec) => {
                    let (lo, hi) = parse_wp_range(&spec)?;
                    let dir = out
                        .out
                        .as_deref()
                        .ok_or_else(|| Error::Parse("--wp needs --out <directory>".into()))?;
                    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                    let funcs = wp_functions(&filter, hi.max(1), iter)?;
                    for (n, func) in funcs.iter().enumerate().take(hi + 1).skip(lo) {
                        io::write_atomic(&dir.join(format!("wp_{n}.csv")), &shape_bytes(func))?;
                    }
                    Ok(())
                }
                None => {
                    let phi = cascade_scaling(&filter, iter)?;
                    let func = match kind {
                        Kind::Phi => phi,
                        Kind::Psi => cascade_wavelet(&filter, &phi)?,
                    };
                    emit(&out, &shape_bytes(&func))
                }
            }
        }
        Command::Dwt {
            family,
            out,
            input,
            levels,
            boundary,
        } => {
            let boundary: Boundary = boundary.parse()?;
            let filter = family.filter()?;
            let signal = io::read_signal_csv(&input)?;
            let d = dwt1d(&signal, &filter, levels, boundary)?;
            emit(&out, &io::to_json(&Decomposition1DFile::from(&d))?)
        }
        Command::Idwt { out, input, sign } => {
            let file: Decomposition1DFile = io::from_json(&io::read_bytes(&input)?)?;
            let d = file.into_result()?;
            let filter = filter_for(d.order, &sign)?;
            let x = idwt1d(&d, &filter)?;
            emit(&out, io::format_signal_csv(&x).as_bytes())
        }
        Command::Dwt2 {
            family,
            out,
            input,
            levels,
            boundary,
        } => {
            let boundary: Boundary = boundary.parse()?;
            let filter = family.filter()?;
            let image = io::read_pgm(&input)?;
            let s = dwt2d(&image, &filter, levels, boundary)?;
            let back = idwt2d(&s, &filter)?;
            report_roundtrip(&image, &back);
            emit(&out, &io::to_json(&Decomposition2DFile::from(&s))?)
        }
        Command::Idwt2 {
            out,
            input,
            reference,
            ascii,
            sign,
        } => {
            let file: Decomposition2DFile = io::from_json(&io::read_bytes(&input)?)?;
            let s = file.into_subbands()?;
            let filter = filter_for(s.order, &sign)?;
            let image = idwt2d(&s, &filter)?;
            if let Some(reference) = reference {
                let original = io::read_pgm(&reference)?;
                if original.shape() != image.shape() {
                    return Err(Error::ShapeMismatch(format!(
                        "reference is {:?}, reconstruction is {:?}",
                        original.shape(),
                        image.shape()
                    )));
                }
                report_roundtrip(&original, &image);
            }
            emit(&out, &io::encode_pgm(&image, !ascii))
        }
        Command::Wp {
            family,
            out,
            input,
            depth,
            boundary,
        } => {
            let boundary: Boundary = boundary.parse()?;
            let filter = family.filter()?;
            let signal = io::read_signal_csv(&input)?;
            let tree = wp_decompose(&signal, &filter, depth, boundary)?;
            emit(&out, &io::to_json(&PacketTreeFile::from(&tree))?)
        }
        Command::Analyze {
            family,
            out,
            length,
            levels,
            trials,
            seed,
        } => {
            let filter = family.filter()?;
            let report = AnalysisOutput {
                family: filter.order().name(),
                orthogonality: orthogonality_defect(&filter),
                reconstruction: roundtrip_error(length, levels, filter.order(), trials, seed)?,
            };
            emit(&out, &io::to_json(&report)?)
        }
    }
}

fn report_roundtrip(original: &nalgebra::DMatrix<f64>, back: &nalgebra::DMatrix<f64>) {
    let (max_abs, rel) = error_norms(original.as_slice(), back.as_slice());
    eprintln!("round trip: max_abs_error={max_abs:?} relative_l2_error={rel:?}");
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("legwave: {e}");
            e.exit_code()
        }
    }
}
