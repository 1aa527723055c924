mod common;

use std::sync::Arc;

use common::*;
use rspolar::osd::OsdParams;
use rspolar::polar::{rs_kernel, PolarCode, ScParams};
use rspolar::sim::{
    simulate, to_csv, PolarDecoder, PolarSimulator, RsSimulator, SimConfig, CSV_HEADER,
};
use rspolar::RsCode;

fn rs_sim(t: usize, s: usize) -> RsSimulator {
    RsSimulator::new(RsCode::extended(field(3), 4).unwrap(), OsdParams::new(t, s)).unwrap()
}

#[test]
fn identical_seeds_give_identical_csv() {
    let sim = rs_sim(1, 4);
    let cfg = SimConfig::new(vec![2.0, 3.0], 3000, 40, 17);
    let a = to_csv(&simulate(&sim, &cfg).unwrap(), None);
    let b = to_csv(&simulate(&sim, &cfg).unwrap(), None);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 3);
    let other = SimConfig { seed: 18, ..cfg };
    assert_ne!(a, to_csv(&simulate(&sim, &other).unwrap(), None));
}

#[test]
fn batch_size_does_not_change_results() {
    let sim = rs_sim(1, 4);
    let mut cfg = SimConfig::new(vec![2.0], 5000, 25, 3);
    let a = simulate(&sim, &cfg).unwrap();
    cfg.batch = 7;
    let b = simulate(&sim, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0].frame_errors, 25);
}

#[test]
fn zero_frames_give_header_only() {
    let sim = rs_sim(1, 4);
    let cfg = SimConfig::new(vec![1.0, 2.0], 0, 10, 1);
    let points = simulate(&sim, &cfg).unwrap();
    assert_eq!(to_csv(&points, None), format!("{CSV_HEADER}\n"));
}

#[test]
fn decoding_work_falls_with_snr() {
    let sim = rs_sim(1, 4);
    let cfg = SimConfig::new(vec![2.0, 6.0], 4000, u64::MAX, 5);
    let points = simulate(&sim, &cfg).unwrap();
    let ops = |i: usize| points[i].avg_sum_ops() + points[i].avg_cmp_ops();
    assert!(ops(1) < ops(0), "{} vs {}", ops(1), ops(0));
    assert!(points[1].fer() < points[0].fer());
}

#[test]
fn invalid_rs_parameters_are_rejected() {
    let code = RsCode::extended(field(3), 4).unwrap();
    assert!(RsSimulator::new(code.clone(), OsdParams::new(5, 4)).is_err());
    assert!(RsSimulator::new(code.clone(), OsdParams::new(1, 5)).is_err());
    assert!(RsSimulator::new(code, OsdParams::new(2, 1)).is_err());
}

#[test]
fn polar_sweep_tags_decoder_and_guards_exact() {
    let kernel = Arc::new(rs_kernel(field(2), 4).unwrap());
    let code = PolarCode::new(kernel.clone(), 2, &[0, 1, 2, 4, 5, 8, 9, 12]).unwrap();
    let sim = PolarSimulator::new(code, PolarDecoder::Approx(ScParams::order(1, 4))).unwrap();
    let cfg = SimConfig::new(vec![2.0], 500, 100, 1);
    let csv = to_csv(&simulate(&sim, &cfg).unwrap(), Some("approx"));
    assert!(csv.lines().next().unwrap().ends_with(",decoder"));
    assert!(csv.lines().nth(1).unwrap().ends_with(",approx"));

    let big = Arc::new(rs_kernel(field(3), 8).unwrap());
    let code = PolarCode::new(big, 3, &[]).unwrap();
    assert!(PolarSimulator::new(code, PolarDecoder::Exact).is_err());
}
