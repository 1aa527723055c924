mod common;

use common::*;
use rspolar::channel::{ChannelKind, ChannelModel};
use rspolar::construct::mc_construct;
use rspolar::polar::{Kernel, ScParams};
use rspolar::Symbol;

fn digits(mut idx: usize, q: usize, len: usize) -> Vec<Symbol> {
    (0..len)
        .map(|_| {
            let d = (idx % q) as Symbol;
            idx /= q;
            d
        })
        .collect()
}

/// Exact genie-aided decision error probability of every phase of a single
/// kernel over a q-ary symmetric channel, by enumerating all inputs and all
/// received words. Decisions minimize the Hamming distance to the best
/// codeword of each coset, smallest symbol on ties.
fn exact_phase_errors(kernel: &Kernel, p: f64) -> Vec<f64> {
    let l = kernel.l();
    let q = kernel.field().q();
    let words = q.pow(l as u32);
    let images: Vec<Vec<Symbol>> = (0..words)
        .map(|i| kernel.field().vec_mat(&digits(i, q, l), kernel.rows()))
        .collect();
    let mut err = vec![0.0; l];
    for ui in 0..words {
        let u = digits(ui, q, l);
        let c = &images[ui];
        for yi in 0..words {
            let y = digits(yi, q, l);
            let flips = c.iter().zip(&y).filter(|(a, b)| a != b).count() as i32;
            let prob = (p / (q - 1) as f64).powi(flips) * (1.0 - p).powi(l as i32 - flips);
            for a in 0..l {
                let mut best = vec![usize::MAX; q];
                for (vi, img) in images.iter().enumerate() {
                    let v = digits(vi, q, l);
                    if v[..a] != u[..a] {
                        continue;
                    }
                    let dist = img.iter().zip(&y).filter(|(x, z)| x != z).count();
                    let s = v[a] as usize;
                    best[s] = best[s].min(dist);
                }
                let mut decision = 0;
                for (s, &d) in best.iter().enumerate() {
                    if d < best[decision] {
                        decision = s;
                    }
                }
                if decision != u[a] as usize {
                    err[a] += prob;
                }
            }
        }
    }
    err.iter().map(|e| e / words as f64).collect()
}

#[test]
fn noiseless_construction_freezes_last_indices() {
    let ch = ChannelModel::awgn(40.0, 0.5, 2, 1).unwrap();
    let res = mc_construct(kernel(2, 4), 2, 8, &ch, 200, ScParams::order(1, 4)).unwrap();
    assert!(res.error_counts.iter().all(|&c| c == 0));
    assert_eq!(res.frozen, (8..16).collect::<Vec<_>>());
}

#[test]
fn construction_is_deterministic() {
    let ch = ChannelModel::awgn(1.0, 0.5, 2, 42).unwrap();
    let a = mc_construct(kernel(2, 4), 2, 8, &ch, 500, ScParams::order(1, 4)).unwrap();
    let b = mc_construct(kernel(2, 4), 2, 8, &ch, 500, ScParams::order(1, 4)).unwrap();
    assert_eq!(a, b);
    let other = ChannelModel::awgn(1.0, 0.5, 2, 43).unwrap();
    let c = mc_construct(kernel(2, 4), 2, 8, &other, 500, ScParams::order(1, 4)).unwrap();
    assert_ne!(a.error_counts, c.error_counts);
}

#[test]
fn rejects_degenerate_requests() {
    let ch = ChannelModel::awgn(1.0, 0.5, 2, 42).unwrap();
    assert!(mc_construct(kernel(2, 4), 1, 2, &ch, 0, ScParams::exhaustive(4)).is_err());
    assert!(mc_construct(kernel(2, 4), 1, 5, &ch, 10, ScParams::exhaustive(4)).is_err());
}

#[test]
fn estimates_match_exact_enumeration_on_symmetric_channel() {
    let p = 0.05;
    let frames = 40_000;
    let kern = kernel(2, 4);
    let exact = exact_phase_errors(&kern, p);
    let ch = ChannelModel::new(ChannelKind::QarySymmetric { p }, 2, 7).unwrap();
    let res = mc_construct(kern, 1, 2, &ch, frames, ScParams::exhaustive(4)).unwrap();
    for (a, (&count, &pe)) in res.error_counts.iter().zip(&exact).enumerate() {
        let est = count as f64 / frames as f64;
        let se = (pe * (1.0 - pe) / frames as f64).sqrt();
        assert!(
            (est - pe).abs() <= 4.0 * se + 1e-12,
            "phase {a}: {est} vs {pe}"
        );
    }
    assert!(exact[0] > exact[2] && exact[1] > exact[3] && exact[1] > exact[2]);
    assert_eq!(res.frozen, vec![0, 1]);
}

#[test]
fn estimates_do_not_increase_with_snr() {
    let frames = 4000;
    let params = ScParams::order(1, 4);
    let lo = ChannelModel::awgn(0.0, 0.5, 2, 9).unwrap();
    let hi = ChannelModel::awgn(3.0, 0.5, 2, 9).unwrap();
    let a = mc_construct(kernel(2, 4), 2, 8, &lo, frames, params).unwrap();
    let b = mc_construct(kernel(2, 4), 2, 8, &hi, frames, params).unwrap();
    for (&x, &y) in a.error_counts.iter().zip(&b.error_counts) {
        let (px, py) = (x as f64 / frames as f64, y as f64 / frames as f64);
        let se = ((px * (1.0 - px) + py * (1.0 - py)) / frames as f64).sqrt();
        assert!(
            py <= px + 3.0 * se,
            "{:?} vs {:?}",
            a.error_counts,
            b.error_counts
        );
    }
}
