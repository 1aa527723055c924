mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rspolar::osd::{
    self, candidate_bound, coset_decode_all, enumeration_size, CosetProblem, LlrTable, OsdParams,
};
use rspolar::polar::rs_kernel;
use rspolar::{OpCounter, RsCode, Symbol};

fn test_codes() -> Vec<RsCode> {
    vec![
        RsCode::extended(field(3), 4).unwrap(),
        RsCode::cyclic(field(3), 5, 1).unwrap(),
    ]
}

#[test]
fn order0_reencodes_hard_mris_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let code = RsCode::extended(field(3), 4).unwrap();
    let all = all_codewords(&code);
    for _ in 0..200 {
        let table = random_table(8, 8, &mut rng);
        let res = osd::order0(&table, &code).unwrap();
        let mris = &table.reliability_order()[..4];
        let hard = table.hard_decisions();
        let matching: Vec<_> = all
            .iter()
            .filter(|c| mris.iter().all(|&p| c[p] == hard[p]))
            .collect();
        assert_eq!(matching.len(), 1);
        assert_eq!(&res.codeword, matching[0]);
        let floor: f64 = (0..8)
            .filter(|&i| res.codeword[i] != hard[i])
            .map(|i| table.reliabilities()[i])
            .sum();
        assert!(res.ew >= floor - 1e-12);
    }
}

#[test]
fn decode_improves_on_order0_and_grows_with_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for code in test_codes() {
        let r = code.n() - code.k();
        for _ in 0..300 {
            let table = random_table(code.n(), 8, &mut rng);
            let base = osd::order0(&table, &code).unwrap().ew;
            let mut prev = base;
            for t in 0..=r.min(3) {
                let res = osd::decode(&table, &code, OsdParams::new(t, r)).unwrap();
                assert!(code.is_codeword(&res.codeword));
                assert!((table.ellipsoidal_weight(&res.codeword) - res.ew).abs() < 1e-12);
                assert!(res.ew <= prev + 1e-12);
                prev = res.ew;
            }
        }
    }
}

#[test]
fn unverified_matches_make_weight_monotone_in_band() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let code = RsCode::extended(field(3), 4).unwrap();
    for _ in 0..300 {
        let table = random_table(8, 8, &mut rng);
        for t in 1..=2 {
            let mut prev = f64::INFINITY;
            for s in t..=4 {
                let p = OsdParams::new(t, s).without_band_check();
                let ew = osd::decode(&table, &code, p).unwrap().ew;
                assert!(ew <= prev + 1e-12);
                prev = ew;
            }
        }
    }
}

#[test]
fn proven_ml_results_are_maximum_likelihood() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for code in test_codes() {
        let all = all_codewords(&code);
        let mut proven = 0;
        for frame in 0..300 {
            let table = if frame % 2 == 0 {
                random_table(code.n(), 8, &mut rng)
            } else {
                awgn_frame(&code, 3.0, 4, frame).1
            };
            let (_, ml_ew) = ml_decode(&table, &all);
            let res = osd::decode(&table, &code, OsdParams::new(1, code.n() - code.k())).unwrap();
            assert!(res.ew >= ml_ew - 1e-12);
            if res.proven_ml {
                proven += 1;
                assert!((res.ew - ml_ew).abs() < 1e-9);
            }
        }
        assert!(proven > 0);
    }
}

#[test]
fn exhaustive_order_is_maximum_likelihood() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let code = RsCode::extended(field(2), 2).unwrap();
    let all = all_codewords(&code);
    for _ in 0..300 {
        let table = random_table(4, 4, &mut rng);
        let res = osd::decode(&table, &code, OsdParams::new(2, 2)).unwrap();
        assert!(res.proven_ml);
        assert!((res.ew - ml_decode(&table, &all).1).abs() < 1e-12);
    }
}

#[test]
fn pruning_never_changes_the_decision() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for code in test_codes() {
        let r = code.n() - code.k();
        for frame in 0..300 {
            let table = if frame % 2 == 0 {
                random_table(code.n(), 8, &mut rng)
            } else {
                awgn_frame(&code, 2.0, 6, frame).1
            };
            for (t, s) in [(1, r), (2, r), (1, 1), (2, 2)] {
                let p = OsdParams::new(t, s);
                let a = osd::decode(&table, &code, p).unwrap();
                let b = osd::decode(&table, &code, p.without_pruning()).unwrap();
                assert_eq!(a.codeword, b.codeword);
                assert!(a.ops.candidates <= b.ops.candidates);
            }
        }
    }
}

#[test]
fn first_order_candidates_stay_within_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let code = RsCode::extended(field(3), 4).unwrap();
    for _ in 0..500 {
        let table = random_table(8, 8, &mut rng);
        let res = osd::decode(&table, &code, OsdParams::new(1, 4).without_pruning()).unwrap();
        assert!(res.ops.candidates as u128 <= candidate_bound(4, 1, 4, 8));
        for (t, s) in [(1, 1), (1, 4), (2, 2), (2, 4)] {
            let p = OsdParams::new(t, s).without_pruning();
            let res = osd::decode(&table, &code, p).unwrap();
            assert!(res.ops.reencodings as u128 <= enumeration_size(4, t, s, 8));
        }
    }
}

#[test]
fn rejects_invalid_parameters() {
    let code = RsCode::extended(field(3), 4).unwrap();
    let table = LlrTable::from_flat(8, vec![0.0; 64]).unwrap();
    assert!(osd::decode(&table, &code, OsdParams::new(1, 0)).is_err());
    assert!(osd::decode(&table, &code, OsdParams::new(5, 5)).is_err());
    let short = LlrTable::from_flat(8, vec![0.0; 56]).unwrap();
    assert!(osd::decode(&short, &code, OsdParams::new(1, 4)).is_err());
}

/// Brute-force minimum weight over `prefix ‖ v ‖ suffix` for every `v`.
fn coset_oracle(table: &LlrTable, rows: &[Vec<Symbol>], prefix: &[Symbol], q: usize) -> Vec<f64> {
    let l = rows.len();
    let f = field(q.trailing_zeros());
    let free = l - prefix.len() - 1;
    let mut best = vec![f64::INFINITY; q];
    for (v, slot) in best.iter_mut().enumerate() {
        for idx in 0..q.pow(free as u32) {
            let mut u = prefix.to_vec();
            u.push(v as Symbol);
            let mut rest = idx;
            for _ in 0..free {
                u.push((rest % q) as Symbol);
                rest /= q;
            }
            let c = f.vec_mat(&u, rows);
            *slot = slot.min(table.ellipsoidal_weight(&c));
        }
    }
    let min = best.iter().copied().fold(f64::INFINITY, f64::min);
    best.iter().map(|b| b - min).collect()
}

fn coset_tables(table: &LlrTable, prefix: &[Symbol], t: usize, l: usize, m: u32) -> Vec<f64> {
    let kernel = rs_kernel(field(m), l).unwrap();
    let a = prefix.len();
    let code = kernel.phase_code(a);
    let order = table.reliability_order();
    let generator = code.mris_generator_matrix(&order[..code.k()]).unwrap();
    let sub = (a + 1 < l).then(|| {
        kernel
            .phase_code(a + 1)
            .mris_generator_matrix(&order[..code.k() - 1])
            .unwrap()
    });
    let mut padded = prefix.to_vec();
    padded.resize(l, 0);
    let offset = kernel.apply(&padded);
    let problem = CosetProblem {
        code,
        generator: &generator,
        sub_generator: sub.as_ref(),
        coset_row: kernel.row(a),
        inverse_column: kernel.inverse_column(a),
        offset: &offset,
    };
    let tuples = table.tuples();
    coset_decode_all(
        table,
        &tuples,
        &problem,
        OsdParams::new(t, l),
        &mut OpCounter::new(),
    )
}

#[test]
fn exhaustive_coset_decoding_matches_suffix_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let kernel = rs_kernel(field(2), 4).unwrap();
    for _ in 0..300 {
        let table = random_table(4, 4, &mut rng);
        for a in 0..4 {
            let prefix: Vec<Symbol> = (0..a).map(|_| rng.random_range(0..4)).collect();
            let got = coset_tables(&table, &prefix, 4, 4, 2);
            let want = coset_oracle(&table, kernel.rows(), &prefix, 4);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-9, "phase {a}: {got:?} vs {want:?}");
            }
        }
    }
}

#[test]
fn coset_tables_are_finite_and_normalized_at_low_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let kernel = rs_kernel(field(3), 8).unwrap();
    for _ in 0..100 {
        let table = random_table(8, 8, &mut rng);
        for a in 0..8 {
            let prefix: Vec<Symbol> = (0..a).map(|_| rng.random_range(0..8)).collect();
            let got = coset_tables(&table, &prefix, 0, 8, 3);
            assert!(got.iter().all(|v| v.is_finite() && *v >= 0.0));
            assert_eq!(got.iter().copied().fold(f64::INFINITY, f64::min), 0.0);
            if a == 7 {
                // dimension-one coset: every entry is a single codeword
                let want = coset_oracle(&table, kernel.rows(), &prefix, 8);
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn noiseless_coset_decoding_favours_the_true_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let kernel = rs_kernel(field(3), 8).unwrap();
    for _ in 0..50 {
        let u: Vec<Symbol> = (0..8).map(|_| rng.random_range(0..8)).collect();
        let c = kernel.apply(&u);
        let raw: Vec<Vec<f64>> = c
            .iter()
            .map(|&x| {
                (0..8)
                    .map(|z| if z == x as usize { 0.0 } else { 5.0 })
                    .collect()
            })
            .collect();
        let table = LlrTable::from_metrics(&raw).unwrap();
        for a in 0..8 {
            let got = coset_tables(&table, &u[..a], 1, 8, 3);
            assert_eq!(got[u[a] as usize], 0.0);
        }
    }
}
