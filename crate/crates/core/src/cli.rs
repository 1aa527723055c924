//! Command-line front end: simulation sweeps, construction and single-frame
//! decoding.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::channel::ChannelModel;
use crate::construct::{mc_construct, read_frozen, write_frozen};
use crate::error::{Error, Result};
use crate::gf::{FieldTable, Symbol};
use crate::osd::{self, LlrTable, OsdParams};
use crate::polar::{Kernel, PolarCode, ScParams};
use crate::rs::RsCode;
use crate::sim::{simulate, write_csv, PolarDecoder, PolarSimulator, RsSimulator, SimConfig};
use crate::OpCounter;

#[derive(Debug, Parser)]
#[command(
    name = "rspolar",
    version,
    about = "Reed-Solomon OSD and RS-kernel polar code simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// FER/SER and complexity sweep of a Reed-Solomon code over BPSK/AWGN.
    SimRs(SimRsArgs),
    /// FER/SER and complexity sweep of a polar code with RS kernel.
    SimPolar(SimPolarArgs),
    /// Monte-Carlo construction of a frozen set.
    Construct(ConstructArgs),
    /// Decodes one frame given as a file of symbol metrics.
    Decode(DecodeArgs),
}

#[derive(Debug, Args)]
pub struct RsCodeArgs {
    /// Field size, a power of two up to 256.
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Evaluation code with the zero locator (length up to q) instead of
    /// the cyclic code of length q - 1.
    #[arg(long)]
    pub extended: bool,
    /// First consecutive root exponent of the cyclic code.
    #[arg(short = 'b', long = "b", default_value_t = 1)]
    pub b: u32,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated Eb/N0 values in dB.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub snr: Vec<f64>,
    /// Frames per SNR point.
    #[arg(long, default_value_t = 10_000)]
    pub frames: u64,
    /// Stop a point after this many frame errors.
    #[arg(long, default_value_t = 100)]
    pub max_errors: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimRsArgs {
    #[command(flatten)]
    pub code: RsCodeArgs,
    /// Reprocessing order.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Control band size; n - k when absent.
    #[arg(long)]
    pub s: Option<usize>,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderKind {
    Approx,
    Exact,
}

#[derive(Debug, Args)]
pub struct PolarCodeArgs {
    /// Kernel size.
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub q: usize,
    /// Number of kernel levels; the length is l^m.
    #[arg(long)]
    pub m: u32,
    /// Frozen-set file, one index per line.
    #[arg(long)]
    pub frozen: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScArgs {
    /// Reprocessing order of the coset decoder.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Control band size, clamped to the redundancy of each phase code.
    #[arg(long)]
    pub s: Option<usize>,
    /// Run the coset decoder on fully frozen sub-blocks too.
    #[arg(long)]
    pub no_skip_frozen: bool,
}

impl ScArgs {
    fn params(&self, l: usize) -> ScParams {
        let mut p = ScParams::new(OsdParams::new(self.t, self.s.unwrap_or(l)));
        p.skip_frozen = !self.no_skip_frozen;
        p
    }
}

#[derive(Debug, Args)]
pub struct SimPolarArgs {
    #[command(flatten)]
    pub code: PolarCodeArgs,
    #[command(flatten)]
    pub sc: ScArgs,
    #[arg(long, value_enum, default_value_t = DecoderKind::Approx)]
    pub decoder: DecoderKind,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub m: u32,
    /// Number of information symbols.
    #[arg(long)]
    pub k: usize,
    /// Design Eb/N0 in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub design_snr: f64,
    #[arg(long, default_value_t = 100_000)]
    pub frames: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub sc: ScArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeFamily {
    Rs,
    Polar,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long, value_enum)]
    pub code: CodeFamily,
    /// Field size.
    #[arg(long)]
    pub q: usize,
    /// RS length.
    #[arg(long)]
    pub n: Option<usize>,
    /// RS dimension.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub extended: bool,
    #[arg(short = 'b', long = "b", default_value_t = 1)]
    pub b: u32,
    /// Polar kernel size.
    #[arg(long)]
    pub l: Option<usize>,
    /// Polar kernel levels.
    #[arg(long)]
    pub m: Option<u32>,
    /// Polar frozen-set file.
    #[arg(long)]
    pub frozen: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long, value_enum, default_value_t = DecoderKind::Approx)]
    pub decoder: DecoderKind,
    /// Metric file: one position per line, q non-negative values each.
    #[arg(long)]
    pub input: PathBuf,
}

fn field(q: usize) -> Result<Arc<FieldTable>> {
    if !q.is_power_of_two() || q < 2 {
        return Err(Error::InvalidParameters(format!(
            "field size {q} is not a power of two"
        )));
    }
    Ok(Arc::new(FieldTable::new(q.trailing_zeros())?))
}

/// Cyclic code when `n = q - 1` without `--extended`, otherwise the
/// evaluation code of length `n ≤ q` with the zero locator.
pub fn rs_code(q: usize, n: usize, k: usize, extended: bool, b: u32) -> Result<RsCode> {
    let f = field(q)?;
    if extended {
        RsCode::evaluation(f, n, k)
    } else if n == q - 1 {
        RsCode::cyclic(f, k, b)
    } else {
        Err(Error::InvalidCode(format!(
            "cyclic codes have length {}, use --extended for n={n}",
            q - 1
        )))
    }
}

fn read_frozen_file(path: &Path) -> Result<Vec<usize>> {
    read_frozen(BufReader::new(File::open(path)?))
}

fn polar_code(q: usize, l: usize, m: u32, frozen: &[usize]) -> Result<PolarCode> {
    let kernel = Arc::new(Kernel::reed_solomon(field(q)?, l)?);
    PolarCode::new(kernel, m, frozen)
}

/// Parses a metric file; blank lines and `#` comments are skipped.
pub fn read_metrics(r: impl BufRead, q: usize) -> Result<LlrTable> {
    let mut rows = Vec::new();
    for (no, line) in r.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: no + 1, msg };
        let row = text
            .split_whitespace()
            .map(|tok| match tok.parse::<f64>() {
                Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
                Ok(v) => Err(err(format!("metric {v} must be finite and non-negative"))),
                Err(e) => Err(err(format!("{e}: {tok:?}"))),
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != q {
            return Err(err(format!("expected {q} values, got {}", row.len())));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no positions".into(),
        });
    }
    LlrTable::from_metrics(&rows)
}

fn open_out<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn join(v: &[Symbol]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_ops(w: &mut dyn Write, ops: &OpCounter) -> Result<()> {
    writeln!(w, "additions: {}", ops.additions)?;
    writeln!(w, "comparisons: {}", ops.comparisons)?;
    writeln!(w, "multiplications: {}", ops.multiplications)?;
    writeln!(w, "candidates: {}", ops.candidates)?;
    writeln!(w, "reencodings: {}", ops.reencodings)?;
    Ok(())
}

/// Executes a parsed command; `stdout` receives everything not sent to an
/// `--out` file.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::SimRs(a) => {
            let c = &a.code;
            let code = rs_code(c.q, c.n, c.k, c.extended, c.b)?;
            let s = a.s.unwrap_or(code.n() - code.k());
            let sim = RsSimulator::new(code, OsdParams::new(a.t, s))?;
            let cfg = SimConfig::new(
                a.sweep.snr.clone(),
                a.sweep.frames,
                a.sweep.max_errors,
                a.sweep.seed,
            );
            let points = simulate(&sim, &cfg)?;
            let mut out = open_out(&a.sweep.out, stdout)?;
            write_csv(&mut out, &points, None)?;
            out.flush()?;
        }
        Command::SimPolar(a) => {
            let c = &a.code;
            let code = polar_code(c.q, c.l, c.m, &read_frozen_file(&c.frozen)?)?;
            let decoder = match a.decoder {
                DecoderKind::Approx => PolarDecoder::Approx(a.sc.params(c.l)),
                DecoderKind::Exact => PolarDecoder::Exact,
            };
            let sim = PolarSimulator::new(code, decoder)?;
            let cfg = SimConfig::new(
                a.sweep.snr.clone(),
                a.sweep.frames,
                a.sweep.max_errors,
                a.sweep.seed,
            );
            let points = simulate(&sim, &cfg)?;
            let mut out = open_out(&a.sweep.out, stdout)?;
            write_csv(&mut out, &points, Some(decoder.tag()))?;
            out.flush()?;
        }
        Command::Construct(a) => {
            let kernel = Arc::new(Kernel::reed_solomon(field(a.q)?, a.l)?);
            let n = a.l.checked_pow(a.m).unwrap_or(usize::MAX);
            let rate = a.k as f64 / n as f64;
            let channel = ChannelModel::awgn(a.design_snr, rate, a.q.trailing_zeros(), a.seed)?;
            let res = mc_construct(kernel, a.m, a.k, &channel, a.frames, a.sc.params(a.l))?;
            let mut out = open_out(&a.out, stdout)?;
            writeln!(
                out,
                "# l={} q={} m={} k={} design_snr={} frames={} seed={} t={} s={}",
                a.l,
                a.q,
                a.m,
                a.k,
                a.design_snr,
                a.frames,
                a.seed,
                a.sc.t,
                a.sc.s.unwrap_or(a.l)
            )?;
            write_frozen(&mut out, &res.frozen)?;
            out.flush()?;
        }
        Command::Decode(a) => decode(&a, stdout)?,
    }
    Ok(())
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameters(format!("--{name} is required")))
}

fn decode(a: &DecodeArgs, out: &mut dyn Write) -> Result<()> {
    let table = read_metrics(BufReader::new(File::open(&a.input)?), a.q)?;
    match a.code {
        CodeFamily::Rs => {
            let code = rs_code(a.q, require(a.n, "n")?, require(a.k, "k")?, a.extended, a.b)?;
            let s = a.s.unwrap_or(code.n() - code.k());
            let res = osd::decode(&table, &code, OsdParams::new(a.t, s))?;
            writeln!(out, "codeword: {}", join(&res.codeword))?;
            writeln!(out, "ew: {}", res.ew)?;
            writeln!(out, "proven_ml: {}", res.proven_ml)?;
            write_ops(out, &res.ops)?;
        }
        CodeFamily::Polar => {
            let l = require(a.l, "l")?;
            let frozen_path = a
                .frozen
                .as_ref()
                .ok_or_else(|| Error::InvalidParameters("--frozen is required".into()))?;
            let code = polar_code(a.q, l, require(a.m, "m")?, &read_frozen_file(frozen_path)?)?;
            let (u, ops) = match a.decoder {
                DecoderKind::Approx => {
                    let params = ScParams::new(OsdParams::new(a.t, a.s.unwrap_or(l)));
                    let res = code.sc_decode_approx(&table, params)?;
                    (res.u_hat, res.ops)
                }
                DecoderKind::Exact => (code.sc_decode_exact(&table)?.u_hat, OpCounter::new()),
            };
            let codeword = code.transform(&u);
            writeln!(out, "u: {}", join(&u))?;
            writeln!(out, "codeword: {}", join(&codeword))?;
            writeln!(out, "ew: {}", table.ellipsoidal_weight(&codeword))?;
            write_ops(out, &ops)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_selection() {
        assert_eq!(rs_code(8, 7, 5, false, 1).unwrap().n(), 7);
        assert!(rs_code(8, 8, 4, true, 1).unwrap().is_extended());
        assert_eq!(rs_code(8, 6, 3, true, 1).unwrap().n(), 6);
        assert!(rs_code(8, 6, 3, false, 1).is_err());
        assert!(rs_code(6, 5, 3, false, 1).is_err());
    }

    #[test]
    fn metric_files() {
        let t = read_metrics(&b"# frame\n0 1 2 3\n\n3 0 1 1\n"[..], 4).unwrap();
        assert_eq!(t.hard_decisions(), &[0, 1]);
        assert!(matches!(
            read_metrics(&b"0 1 2\n"[..], 4),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_metrics(&b"0 1 2 3\n0 -1 2 3\n"[..], 4),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn sweep_flags_parse() {
        let cli = Cli::try_parse_from([
            "rspolar",
            "sim-rs",
            "--q",
            "8",
            "--n",
            "8",
            "--k",
            "4",
            "--extended",
            "--snr",
            "-1,2.5",
            "--frames",
            "0",
        ])
        .unwrap();
        let Command::SimRs(a) = cli.command else {
            panic!()
        };
        assert_eq!(a.sweep.snr, vec![-1.0, 2.5]);
        assert_eq!(a.s, None);
    }
}
