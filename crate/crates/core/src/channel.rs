//! Channel models: BPSK over AWGN of the binary image of field symbols,
//! plus q-ary erasure and symmetric channels.
//!
//! Every frame draws from its own ChaCha stream derived from
//! `(seed, frame index)`, so frames can be simulated in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::gf::Symbol;
use crate::osd::LlrTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    /// Binary image, LSB first, bit 0 → +1, bit 1 → −1, noise variance σ².
    AwgnBpsk { sigma2: f64 },
    /// Each symbol erased with probability `p`.
    QaryErasure { p: f64 },
    /// Each symbol replaced by a uniformly chosen different one with
    /// probability `p`.
    QarySymmetric { p: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    /// `m` real samples per symbol.
    Soft(Vec<f64>),
    /// Received symbols, `None` for erasures.
    Symbols(Vec<Option<Symbol>>),
}

#[derive(Debug, Clone)]
pub struct ChannelModel {
    kind: ChannelKind,
    m: u32,
    seed: u64,
}

/// Noise variance per real dimension for a given `Eb/N0` and code rate
/// (unit-energy BPSK).
pub fn snr_to_sigma2(eb_n0_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(eb_n0_db / 10.0))
}

/// Random stream of one frame.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

impl ChannelModel {
    pub fn new(kind: ChannelKind, m: u32, seed: u64) -> Result<Self> {
        match kind {
            ChannelKind::AwgnBpsk { sigma2 } if !(sigma2 > 0.0 && sigma2.is_finite()) => {
                return Err(Error::InvalidChannel(format!("noise variance {sigma2}")));
            }
            ChannelKind::QaryErasure { p } | ChannelKind::QarySymmetric { p }
                if !(0.0..=1.0).contains(&p) =>
            {
                return Err(Error::InvalidChannel(format!("probability {p}")));
            }
            _ => {}
        }
        if m == 0 || m > 8 {
            return Err(Error::UnsupportedField(m));
        }
        Ok(Self { kind, m, seed })
    }

    /// BPSK/AWGN channel for a target `Eb/N0` and code rate.
    pub fn awgn(eb_n0_db: f64, rate: f64, m: u32, seed: u64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidChannel(format!("rate {rate}")));
        }
        Self::new(
            ChannelKind::AwgnBpsk {
                sigma2: snr_to_sigma2(eb_n0_db, rate),
            },
            m,
            seed,
        )
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Transmits a codeword as frame number `frame`.
    pub fn transmit(&self, codeword: &[Symbol], frame: u64) -> Observation {
        let mut rng = frame_rng(self.seed, frame);
        self.transmit_with(codeword, &mut rng)
    }

    /// Transmits with a caller-owned random stream.
    pub fn transmit_with<R: Rng>(&self, codeword: &[Symbol], rng: &mut R) -> Observation {
        let q = 1usize << self.m;
        match self.kind {
            ChannelKind::AwgnBpsk { sigma2 } => {
                let noise = Normal::new(0.0, sigma2.sqrt()).expect("positive variance");
                let mut out = Vec::with_capacity(codeword.len() * self.m as usize);
                for &c in codeword {
                    for b in 0..self.m {
                        let x = if (c >> b) & 1 == 0 { 1.0 } else { -1.0 };
                        out.push(x + noise.sample(rng));
                    }
                }
                Observation::Soft(out)
            }
            ChannelKind::QaryErasure { p } => Observation::Symbols(
                codeword
                    .iter()
                    .map(|&c| {
                        if rng.random::<f64>() < p {
                            None
                        } else {
                            Some(c)
                        }
                    })
                    .collect(),
            ),
            ChannelKind::QarySymmetric { p } => Observation::Symbols(
                codeword
                    .iter()
                    .map(|&c| {
                        if rng.random::<f64>() < p {
                            let other = rng.random_range(1..q) as Symbol;
                            Some(c ^ other)
                        } else {
                            Some(c)
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Per-position symbol penalty rows `L_i[z]`, flattened row-major.
    pub fn symbol_metrics(&self, obs: &Observation) -> Result<Vec<f64>> {
        let q = 1usize << self.m;
        let m = self.m as usize;
        match (self.kind, obs) {
            (ChannelKind::AwgnBpsk { sigma2 }, Observation::Soft(y)) => {
                if y.len() % m != 0 {
                    return Err(Error::LengthMismatch {
                        expected: y.len().div_ceil(m) * m,
                        actual: y.len(),
                    });
                }
                let mut out = Vec::with_capacity(y.len() / m * q);
                for bits in y.chunks(m) {
                    let mut hard = 0usize;
                    let mags: Vec<f64> = bits
                        .iter()
                        .enumerate()
                        .map(|(b, &v)| {
                            if v < 0.0 {
                                hard |= 1 << b;
                            }
                            (2.0 * v / sigma2).abs()
                        })
                        .collect();
                    for z in 0..q {
                        let diff = z ^ hard;
                        out.push(
                            mags.iter()
                                .enumerate()
                                .filter(|(b, _)| diff >> b & 1 == 1)
                                .map(|(_, &v)| v)
                                .sum(),
                        );
                    }
                }
                Ok(out)
            }
            (ChannelKind::QarySymmetric { p }, Observation::Symbols(rx)) => {
                if p <= 0.0 || p >= 1.0 {
                    return Err(Error::InvalidChannel(format!(
                        "symmetric channel with p={p} has unbounded likelihood ratios"
                    )));
                }
                let penalty = ((1.0 - p) * (q - 1) as f64 / p).ln();
                let mut out = Vec::with_capacity(rx.len() * q);
                for &r in rx {
                    let r = r.ok_or_else(|| {
                        Error::InvalidChannel("erasure on symmetric channel".into())
                    })?;
                    // a negative penalty means the received symbol is the least likely one
                    let (hit, miss) = if penalty >= 0.0 {
                        (0.0, penalty)
                    } else {
                        (-penalty, 0.0)
                    };
                    out.extend((0..q).map(|z| if z as Symbol == r { hit } else { miss }));
                }
                Ok(out)
            }
            _ => Err(Error::InvalidChannel(
                "no finite symbol metrics for this channel and observation".into(),
            )),
        }
    }

    /// Symbol LLR table of an observation.
    pub fn symbol_llrs(&self, obs: &Observation) -> Result<LlrTable> {
        LlrTable::from_flat(1 << self.m, self.symbol_metrics(obs)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_conversion() {
        assert!((snr_to_sigma2(0.0, 1.0) - 0.5).abs() < 1e-12);
        assert!((snr_to_sigma2(3.0103, 0.5) - 0.5).abs() < 1e-5);
        assert!(snr_to_sigma2(1.0, 0.5) > snr_to_sigma2(2.0, 0.5));
    }

    #[test]
    fn gf4_symbol_llrs() {
        let ch = ChannelModel::new(ChannelKind::AwgnBpsk { sigma2: 1.0 }, 2, 0).unwrap();
        let t = ch.symbol_llrs(&Observation::Soft(vec![0.5, -1.0])).unwrap();
        assert_eq!(t.hard_decisions(), &[2]);
        assert_eq!(t.row(0), &[2.0, 3.0, 0.0, 1.0]);
    }

    #[test]
    fn binary_field_llr() {
        let ch = ChannelModel::new(ChannelKind::AwgnBpsk { sigma2: 0.5 }, 1, 0).unwrap();
        let t = ch.symbol_llrs(&Observation::Soft(vec![-0.3])).unwrap();
        assert_eq!(t.hard_decisions(), &[1]);
        assert!((t.llr(0, 0) - 1.2).abs() < 1e-12);
    }

    #[test]
    fn transmit_is_deterministic() {
        let ch = ChannelModel::awgn(2.0, 0.5, 3, 77).unwrap();
        let cw = [0, 5, 7, 1];
        assert_eq!(ch.transmit(&cw, 3), ch.transmit(&cw, 3));
        assert_ne!(ch.transmit(&cw, 3), ch.transmit(&cw, 4));
    }

    #[test]
    fn tiny_noise_gives_modulated_bits() {
        let ch = ChannelModel::new(ChannelKind::AwgnBpsk { sigma2: 1e-20 }, 3, 1).unwrap();
        let Observation::Soft(y) = ch.transmit(&[0, 6], 0) else {
            panic!("soft output expected")
        };
        let expect = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0];
        for (a, b) in y.iter().zip(expect) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn invalid_models() {
        assert!(ChannelModel::new(ChannelKind::AwgnBpsk { sigma2: 0.0 }, 3, 0).is_err());
        assert!(ChannelModel::new(ChannelKind::QaryErasure { p: 1.5 }, 3, 0).is_err());
        let er = ChannelModel::new(ChannelKind::QaryErasure { p: 0.2 }, 3, 0).unwrap();
        let obs = er.transmit(&[1, 2, 3], 0);
        assert!(er.symbol_llrs(&obs).is_err());
    }

    #[test]
    fn symmetric_channel_llrs() {
        let ch = ChannelModel::new(ChannelKind::QarySymmetric { p: 0.1 }, 2, 0).unwrap();
        let t = ch
            .symbol_llrs(&Observation::Symbols(vec![Some(3)]))
            .unwrap();
        assert_eq!(t.hard_decisions(), &[3]);
        let expect = (0.9f64 * 3.0 / 0.1).ln();
        assert!((t.llr(0, 1) - expect).abs() < 1e-12);
    }
}
