//! Monte-Carlo frame-error simulation with reproducible CSV output.
//!
//! Frames are simulated in parallel batches. Results are folded in frame
//! order and the run stops at the frame that completes `max_errors` frame
//! errors, so the output does not depend on the number of workers.

use std::fmt::Write as _;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{frame_rng, ChannelModel};
use crate::error::Result;
use crate::gf::Symbol;
use crate::ops::OpCounter;
use crate::osd::{self, OsdParams};
use crate::polar::{PolarCode, ScParams};
use crate::rs::RsCode;

/// Salt separating the data stream of a frame from its noise stream.
const DATA_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Random stream used to draw the transmitted data of a frame.
pub fn data_rng(seed: u64, frame: u64) -> rand_chacha::ChaCha12Rng {
    frame_rng(seed ^ DATA_SALT, frame)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameOutcome {
    pub frame_error: bool,
    pub symbol_errors: u64,
    pub ops: OpCounter,
}

/// A code, its decoder and the way symbol errors are counted.
pub trait FrameSimulator: Sync {
    fn rate(&self) -> f64;
    /// Bits per symbol.
    fn bits_per_symbol(&self) -> u32;
    /// Symbols compared per frame when counting symbol errors.
    fn symbols_per_frame(&self) -> usize;
    fn run_frame(&self, channel: &ChannelModel, seed: u64, frame: u64) -> FrameOutcome;
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub snrs_db: Vec<f64>,
    pub frames: u64,
    pub max_errors: u64,
    pub seed: u64,
    pub batch: u64,
}

impl SimConfig {
    pub fn new(snrs_db: Vec<f64>, frames: u64, max_errors: u64, seed: u64) -> Self {
        Self {
            snrs_db,
            frames,
            max_errors,
            seed,
            batch: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimPoint {
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub symbol_errors: u64,
    pub symbols_per_frame: usize,
    pub ops: OpCounter,
}

impl SimPoint {
    pub fn fer(&self) -> f64 {
        ratio(self.frame_errors, self.frames)
    }

    pub fn ser(&self) -> f64 {
        ratio(
            self.symbol_errors,
            self.frames * self.symbols_per_frame as u64,
        )
    }

    pub fn avg_sum_ops(&self) -> f64 {
        ratio(self.ops.additions, self.frames)
    }

    pub fn avg_cmp_ops(&self) -> f64 {
        ratio(self.ops.comparisons, self.frames)
    }

    pub fn avg_candidates(&self) -> f64 {
        ratio(self.ops.candidates, self.frames)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Simulates every SNR point of `config`; no rows when no frames are
/// requested.
pub fn simulate(sim: &dyn FrameSimulator, config: &SimConfig) -> Result<Vec<SimPoint>> {
    if config.frames == 0 {
        return Ok(Vec::new());
    }
    config
        .snrs_db
        .iter()
        .map(|&snr| simulate_point(sim, config, snr))
        .collect()
}

/// Channel seeds differ between SNR points so that points are independent.
fn point_seed(seed: u64, snr_db: f64) -> u64 {
    seed ^ snr_db.to_bits().rotate_left(17)
}

pub fn simulate_point(
    sim: &dyn FrameSimulator,
    config: &SimConfig,
    snr_db: f64,
) -> Result<SimPoint> {
    let seed = point_seed(config.seed, snr_db);
    let channel = ChannelModel::awgn(snr_db, sim.rate(), sim.bits_per_symbol(), seed)?;
    let mut point = SimPoint {
        snr_db,
        frames: 0,
        frame_errors: 0,
        symbol_errors: 0,
        symbols_per_frame: sim.symbols_per_frame(),
        ops: OpCounter::new(),
    };
    let batch = config.batch.max(1);
    let mut next = 0;
    'outer: while next < config.frames && point.frame_errors < config.max_errors {
        let end = (next + batch).min(config.frames);
        let outcomes: Vec<FrameOutcome> = (next..end)
            .into_par_iter()
            .map(|frame| sim.run_frame(&channel, seed, frame))
            .collect();
        for outcome in outcomes {
            point.frames += 1;
            point.frame_errors += outcome.frame_error as u64;
            point.symbol_errors += outcome.symbol_errors;
            point.ops += outcome.ops;
            if point.frame_errors >= config.max_errors {
                break 'outer;
            }
        }
        next = end;
    }
    Ok(point)
}

fn random_symbols(len: usize, q: usize, rng: &mut impl Rng) -> Vec<Symbol> {
    (0..len).map(|_| rng.random_range(0..q) as Symbol).collect()
}

/// Reed-Solomon code decoded by order statistics.
pub struct RsSimulator {
    pub code: RsCode,
    pub params: OsdParams,
}

impl RsSimulator {
    pub fn new(code: RsCode, params: OsdParams) -> Result<Self> {
        params.validate(&code)?;
        Ok(Self { code, params })
    }
}

impl FrameSimulator for RsSimulator {
    fn rate(&self) -> f64 {
        self.code.k() as f64 / self.code.n() as f64
    }

    fn bits_per_symbol(&self) -> u32 {
        self.code.field().m()
    }

    fn symbols_per_frame(&self) -> usize {
        self.code.n()
    }

    fn run_frame(&self, channel: &ChannelModel, seed: u64, frame: u64) -> FrameOutcome {
        let q = self.code.field().q();
        let msg = random_symbols(self.code.k(), q, &mut data_rng(seed, frame));
        let cw = self.code.encode(&msg).expect("message has length k");
        let table = channel
            .symbol_llrs(&channel.transmit(&cw, frame))
            .expect("AWGN observations have finite metrics");
        let res = osd::decode(&table, &self.code, self.params).expect("parameters were validated");
        let symbol_errors = res.codeword.iter().zip(&cw).filter(|(a, b)| a != b).count() as u64;
        FrameOutcome {
            frame_error: symbol_errors > 0,
            symbol_errors,
            ops: res.ops,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarDecoder {
    Approx(ScParams),
    Exact,
}

impl PolarDecoder {
    pub fn tag(&self) -> &'static str {
        match self {
            PolarDecoder::Approx(_) => "approx",
            PolarDecoder::Exact => "exact",
        }
    }
}

/// Polar code with SC decoding; symbol errors count information symbols.
pub struct PolarSimulator {
    pub code: PolarCode,
    pub decoder: PolarDecoder,
    info: Vec<usize>,
}

impl PolarSimulator {
    pub fn new(code: PolarCode, decoder: PolarDecoder) -> Result<Self> {
        if decoder == PolarDecoder::Exact {
            let needed = code.exact_work();
            if needed > crate::polar::EXACT_WORK_LIMIT {
                return Err(crate::Error::ResourceGuard {
                    needed,
                    limit: crate::polar::EXACT_WORK_LIMIT,
                });
            }
        }
        let info = code.info_set();
        Ok(Self {
            code,
            decoder,
            info,
        })
    }
}

impl FrameSimulator for PolarSimulator {
    fn rate(&self) -> f64 {
        self.code.rate()
    }

    fn bits_per_symbol(&self) -> u32 {
        self.code.kernel().field().m()
    }

    fn symbols_per_frame(&self) -> usize {
        self.info.len()
    }

    fn run_frame(&self, channel: &ChannelModel, seed: u64, frame: u64) -> FrameOutcome {
        let q = self.code.kernel().field().q();
        let info = random_symbols(self.info.len(), q, &mut data_rng(seed, frame));
        let u = self.code.embed(&info).expect("info has length k");
        let cw = self.code.encode(&u).expect("frozen inputs are zero");
        let table = channel
            .symbol_llrs(&channel.transmit(&cw, frame))
            .expect("AWGN observations have finite metrics");
        let (u_hat, ops) = match self.decoder {
            PolarDecoder::Approx(params) => {
                let out = self
                    .code
                    .sc_decode_approx(&table, params)
                    .expect("table matches the code");
                (out.u_hat, out.ops)
            }
            PolarDecoder::Exact => {
                let out = self.code.sc_decode_exact(&table).expect("guard checked");
                (out.u_hat, OpCounter::new())
            }
        };
        let symbol_errors = self.info.iter().filter(|&&i| u_hat[i] != u[i]).count() as u64;
        FrameOutcome {
            frame_error: symbol_errors > 0,
            symbol_errors,
            ops,
        }
    }
}

/// `printf("%.6g")`.
pub fn format_g(x: f64) -> String {
    const PRECISION: i32 = 6;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_HEADER: &str =
    "snr_db,frames,frame_errors,symbol_errors,fer,ser,avg_sum_ops,avg_cmp_ops,avg_candidates";

/// CSV text of a sweep; `decoder` adds a trailing tag column.
pub fn to_csv(points: &[SimPoint], decoder: Option<&str>) -> String {
    let mut out = String::from(CSV_HEADER);
    if decoder.is_some() {
        out.push_str(",decoder");
    }
    out.push('\n');
    for p in points {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_g(p.snr_db),
            p.frames,
            p.frame_errors,
            p.symbol_errors,
            format_g(p.fer()),
            format_g(p.ser()),
            format_g(p.avg_sum_ops()),
            format_g(p.avg_cmp_ops()),
            format_g(p.avg_candidates()),
        );
        if let Some(tag) = decoder {
            let _ = write!(out, ",{tag}");
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(mut w: impl Write, points: &[SimPoint], decoder: Option<&str>) -> Result<()> {
    w.write_all(to_csv(points, decoder).as_bytes())?;
    Ok(())
}
