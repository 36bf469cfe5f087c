use std::f64::consts::PI;

use itosym::model::{catalog, JumpLaw, Truncation};
use itosym::simulate::dump::{read_dump, write_header, write_path, DumpHeader};
use itosym::simulate::{simulate_path, simulate_stopped, PathSample, RecordMode, SimConfig};
use itosym::stats::{ks_critical, ks_one_sample};
use statrs::distribution::{ContinuousCDF, Normal};

const N: u64 = 2000;

fn endpoints(model: &itosym::model::ProcessModel, step: f64, seed: u64) -> Vec<f64> {
    (0..N)
        .map(|i| {
            let mut cfg = SimConfig::new(step, 1.0, seed);
            cfg.stream = i;
            cfg.record = RecordMode::EndpointAndSup;
            let p = simulate_path(model, 0.0, &[0.0], &cfg).unwrap();
            p.states.last().unwrap()[0]
        })
        .collect()
}

#[test]
fn brownian_endpoint_is_standard_normal() {
    let m = catalog::additive_bm(1, vec![0.0, 1.0]);
    let xs = endpoints(&m, 0.05, 11);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let d = ks_one_sample(&xs, |x| normal.cdf(x));
    assert!(d < ks_critical(0.01, N as f64), "KS distance {d}");
}

#[test]
fn time_changed_brownian_endpoint() {
    // σ²(t) = t + t², so X_1 ~ N(0, 2)
    let m = catalog::additive_bm(1, vec![0.0, 1.0, 1.0]);
    let xs = endpoints(&m, 0.01, 12);
    let normal = Normal::new(0.0, 2f64.sqrt()).unwrap();
    let d = ks_one_sample(&xs, |x| normal.cdf(x));
    assert!(d < ks_critical(0.01, N as f64), "KS distance {d}");
}

#[test]
fn cauchy_endpoint() {
    let m = catalog::alpha_stable(1, 1.0, 1.0);
    let xs = endpoints(&m, 0.05, 13);
    let d = ks_one_sample(&xs, |x| 0.5 + x.atan() / PI);
    assert!(d < ks_critical(0.01, N as f64), "KS distance {d}");
}

#[test]
fn runs_are_deterministic_and_streams_differ() {
    let m = catalog::jump_diffusion(
        vec![0.2],
        0.5,
        2.0,
        JumpLaw::Gaussian {
            mean: 0.0,
            std: 0.5,
        },
    );
    let mut cfg = SimConfig::new(0.01, 1.0, 5);
    cfg.exit_radii = vec![0.5, 1.0];
    let a = simulate_path(&m, 0.0, &[0.0], &cfg).unwrap();
    let b = simulate_path(&m, 0.0, &[0.0], &cfg).unwrap();
    assert_eq!(a, b);
    cfg.stream = 1;
    let c = simulate_path(&m, 0.0, &[0.0], &cfg).unwrap();
    assert_ne!(a.states, c.states);
}

#[test]
fn neighbouring_streams_are_uncorrelated() {
    let m = catalog::additive_bm(1, vec![0.0, 1.0]);
    let xs = endpoints(&m, 0.1, 21);
    let n = (N / 2) as usize;
    let (a, b): (Vec<f64>, Vec<f64>) = (0..n).map(|i| (xs[2 * i], xs[2 * i + 1])).unzip();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (ma, mb) = (mean(&a), mean(&b));
    let cov: f64 = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - ma) * (y - mb))
        .sum::<f64>()
        / n as f64;
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum::<f64>() / n as f64;
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum::<f64>() / n as f64;
    let rho = cov / (va * vb).sqrt();
    assert!(rho.abs() < 3.0 / (n as f64).sqrt(), "correlation {rho}");
}

#[test]
fn unbounded_stop_matches_the_free_path() {
    let m = catalog::compound_poisson(
        1,
        3.0,
        JumpLaw::TwoPoint { size: 0.4 },
        Truncation::default(),
    );
    let lag = 0.64;
    for stream in 0..20 {
        let mut cfg = SimConfig::new(lag / 64.0, lag, 8);
        cfg.stream = stream;
        let free = simulate_path(&m, 0.5, &[1.0], &cfg).unwrap();
        let stopped = simulate_stopped(&m, 0.5, &[1.0], f64::INFINITY, lag, &cfg).unwrap();
        assert!(!stopped.exited);
        assert_eq!(&stopped.state, free.states.last().unwrap());
    }
}

#[test]
fn stopped_state_lies_at_the_exit() {
    let m = catalog::pure_drift(vec![1.0]);
    let cfg = SimConfig::new(0.01, 1.0, 1);
    let s = simulate_stopped(&m, 0.0, &[0.0], 0.25, 1.0, &cfg).unwrap();
    assert!(s.exited);
    let t = s.exit_time.unwrap();
    assert!((t - 0.25).abs() <= 1.0 / 64.0 + 1e-12, "exit at {t}");
    assert!((s.state[0] - t).abs() < 1e-12);
}

#[test]
fn dump_round_trip() {
    let m = catalog::jump_diffusion(vec![0.0], 0.3, 4.0, JumpLaw::TwoPoint { size: 0.5 });
    let mut cfg = SimConfig::new(0.05, 1.0, 3);
    cfg.exit_radii = vec![0.25, 100.0];
    let paths: Vec<(u64, PathSample)> = (0..3)
        .map(|i| {
            let mut c = cfg.clone();
            c.stream = i;
            (i, simulate_path(&m, 0.0, &[0.0], &c).unwrap())
        })
        .collect();
    let mut buf = Vec::new();
    write_header(&mut buf, &DumpHeader::new(&m, &cfg, paths.len() as u64)).unwrap();
    for (i, p) in &paths {
        write_path(&mut buf, *i, p).unwrap();
    }
    let (header, back) = read_dump(buf.as_slice()).unwrap();
    assert_eq!(header, DumpHeader::new(&m, &cfg, 3));
    assert_eq!(back, paths);
}
