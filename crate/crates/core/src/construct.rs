//! Monte-Carlo construction of polar codes: genie-aided SC decoding of
//! random inputs estimates how often each input is decided wrongly, and the
//! least reliable inputs are frozen.

use std::io::{BufRead, Write};
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::gf::Symbol;
use crate::polar::{Kernel, PolarCode, ScParams};
use crate::sim::data_rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub frames: u64,
    /// Number of frames in which the genie-aided decision on each input was
    /// wrong.
    pub error_counts: Vec<u64>,
    /// Frozen indices, ascending.
    pub frozen: Vec<usize>,
}

/// The `n_frozen` indices with the largest counts, ties toward larger
/// indices, in ascending order.
pub fn select_frozen(counts: &[u64], n_frozen: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..counts.len()).collect();
    idx.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(b.cmp(&a)));
    let mut frozen: Vec<usize> = idx.into_iter().take(n_frozen).collect();
    frozen.sort_unstable();
    frozen
}

fn argmin(row: &[f64]) -> Symbol {
    let mut best = 0;
    for (z, &v) in row.iter().enumerate() {
        if v < row[best] {
            best = z;
        }
    }
    best as Symbol
}

/// Estimates per-input error counts over `frames` transmissions of
/// uniformly random inputs through `channel` and freezes `n - k` inputs.
pub fn mc_construct(
    kernel: Arc<Kernel>,
    m: u32,
    k: usize,
    channel: &ChannelModel,
    frames: u64,
    params: ScParams,
) -> Result<Construction> {
    if frames == 0 {
        return Err(Error::InvalidParameters(
            "construction needs at least one frame".into(),
        ));
    }
    let code = PolarCode::new(kernel, m, &[])?;
    let n = code.n();
    if k > n {
        return Err(Error::InvalidParameters(format!("k={k} exceeds n={n}")));
    }
    let q = code.kernel().field().q();
    let seed = channel.seed();
    let error_counts = (0..frames)
        .into_par_iter()
        .map(|frame| -> Result<Vec<u64>> {
            let mut rng = data_rng(seed, frame);
            let u: Vec<Symbol> = (0..n).map(|_| rng.random_range(0..q) as Symbol).collect();
            let cw = code.transform(&u);
            let table = channel.symbol_llrs(&channel.transmit(&cw, frame))?;
            let out = code.sc_decode_genie(&table, &u, params)?;
            Ok(out
                .phase_tables
                .iter()
                .zip(&u)
                .map(|(row, &x)| {
                    let row = row.as_ref().expect("genie decoding visits every input");
                    (argmin(row) != x) as u64
                })
                .collect::<Vec<u64>>())
        })
        .try_reduce(
            || vec![0; n],
            |mut acc, v| {
                acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                Ok(acc)
            },
        )?;
    let frozen = select_frozen(&error_counts, n - k);
    Ok(Construction {
        frames,
        error_counts,
        frozen,
    })
}

/// Writes one index per line.
pub fn write_frozen(mut w: impl Write, frozen: &[usize]) -> Result<()> {
    for i in frozen {
        writeln!(w, "{i}")?;
    }
    Ok(())
}

/// Reads a strictly ascending list of indices, one per line. Blank lines
/// and lines starting with `#` are ignored.
pub fn read_frozen(r: impl BufRead) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    for (no, line) in r.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let v: usize = text.parse().map_err(|e| Error::Parse {
            line: no + 1,
            msg: format!("{e}: {text:?}"),
        })?;
        if out.last().is_some_and(|&prev| prev >= v) {
            return Err(Error::Parse {
                line: no + 1,
                msg: "indices must be strictly ascending".into(),
            });
        }
        out.push(v);
    }
    Ok(out)
}
