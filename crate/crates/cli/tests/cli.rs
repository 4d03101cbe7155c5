//! End-to-end tests of the `losmimo` binary: scenario execution, CSV
//! determinism, and the exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_losmimo"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("losmimo_test_{}_{name}", std::process::id()));
    p
}

fn write_cfg(name: &str, body: &str) -> PathBuf {
    let path = tmp(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(csv: &str) -> Vec<String> {
    csv.lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect()
}

#[test]
fn kappa_sweep_is_byte_deterministic() {
    let cfg = write_cfg(
        "det.cfg",
        "scenario = kappa-sweep\nantennas.m = 16\nsweep.points = 7\n",
    );
    let a = tmp("det_a.csv");
    let b = tmp("det_b.csv");
    run_ok(&["run", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]);
    run_ok(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--threads",
        "2",
        "--out",
        b.to_str().unwrap(),
    ]);
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "reruns must be byte-identical");
    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.contains("# config_hash: "));
    assert_eq!(header(&text), vec!["kappa", "capacity_dual", "capacity_single"]);
    assert_eq!(data_rows(&text).len(), 7);
}

#[test]
fn spacing_sweep_peaks_at_optimal_spacing() {
    let cfg = write_cfg(
        "sweep.cfg",
        "scenario = spacing-sweep\nlink.wavelength_m = 0.01\nlink.distance_m = 100\n\
         array.m_h = 4\narray.m_v = 4\nxpd.kappa_list = 0\n\
         sweep.start_m = 0.3\nsweep.stop_m = 0.7\nsweep.points = 21\n",
    );
    let out = tmp("sweep.csv");
    run_ok(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        header(&text),
        vec![
            "delta_m",
            "capacity_exact_dual_kappa0",
            "capacity_fresnel_dual_kappa0",
            "capacity_exact_single"
        ]
    );
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 21);
    let best = rows
        .iter()
        .max_by(|a, b| {
            let ca: f64 = a[1].parse().unwrap();
            let cb: f64 = b[1].parse().unwrap();
            ca.partial_cmp(&cb).unwrap()
        })
        .unwrap();
    let delta: f64 = best[0].parse().unwrap();
    // Optimal spacing for 4x4 at lambda*d = 1 is 0.5 m.
    assert!((delta - 0.5).abs() < 0.021, "peak at {delta}");
    // Dual-polarized beats single-polarized at the peak.
    let dual: f64 = best[1].parse().unwrap();
    let single: f64 = best[3].parse().unwrap();
    assert!(dual > 1.5 * single);
}

#[test]
fn geometry_oracle_agrees_with_closed_form() {
    let out = tmp("geom.csv");
    run_ok(&[
        "geometry",
        "--antennas",
        "16",
        "--wavelength-m",
        "0.01",
        "--distance-m",
        "100",
        "--alpha-steps",
        "11",
        "--gamma-steps",
        "11",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 4);
    // (objective, source, m_h, m_v) and matching objective values per pair.
    assert_eq!(rows[0][..4], ["length", "closed_form", "4", "4"]);
    assert_eq!(rows[1][..4], ["length", "grid_oracle", "4", "4"]);
    assert_eq!(rows[2][..4], ["area", "closed_form", "16", "1"]);
    assert_eq!(rows[3][..4], ["area", "grid_oracle", "16", "1"]);
    for pair in [(0, 1), (2, 3)] {
        let a: f64 = rows[pair.0][6].parse().unwrap();
        let b: f64 = rows[pair.1][6].parse().unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs());
    }
}

#[test]
fn antennas_vs_frequency_count_consistency() {
    let cfg = write_cfg(
        "counts.cfg",
        "scenario = antennas-vs-frequency\nsweep.start_hz = 3e9\nsweep.stop_hz = 300e9\nsweep.points = 9\n",
    );
    let out = tmp("counts.csv");
    run_ok(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        header(&text),
        vec!["f_hz", "lambda_m", "m_exact", "m_approx", "m_int"]
    );
    for row in data_rows(&text) {
        let m_exact: f64 = row[2].parse().unwrap();
        let m_int: u64 = row[4].parse().unwrap();
        let side = m_exact.sqrt().floor() as u64;
        assert_eq!(m_int, side * side, "deployable count at f = {}", row[0]);
        assert!(m_int as f64 <= m_exact * (1.0 + 1e-12));
    }
}

#[test]
fn vc_example_capacity_invariant_across_splits() {
    let cfg = write_cfg(
        "vc.cfg",
        "scenario = vc-example\nsplit.alpha_list = 0.5, 0.01\narray.m_h = 4\narray.m_v = 4\n",
    );
    let out = tmp("vc.csv");
    run_ok(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    let c0: f64 = rows[0][5].parse().unwrap();
    let c1: f64 = rows[1][5].parse().unwrap();
    assert!((c0 - c1).abs() < 1e-9 * c0, "capacity varies: {c0} vs {c1}");
    // The alpha = 0.01 transmit array is much sparser than the receiver.
    let tx_area: f64 = rows[1][3].parse().unwrap();
    let rx_area: f64 = rows[1][4].parse().unwrap();
    assert!(tx_area > 100.0 * rx_area);
}

#[test]
fn realistic_respects_location_cap() {
    let cfg = write_cfg(
        "realcap.cfg",
        "scenario = realistic\nsweep.start_hz = 10e9\nsweep.stop_hz = 20e9\nsweep.points = 2\n\
         realistic.max_locations = 10\n",
    );
    let out = tmp("realcap.csv");
    run_ok(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows = data_rows(&text);
    // 10 GHz fits 9 locations; 20 GHz needs 36 and is skipped with a notice.
    assert_eq!(rows.len(), 1);
    assert!(text.contains("# notice: skipped"));
    let ratio: f64 = rows[0][5].parse().unwrap();
    assert!((ratio - 1.0).abs() < 0.1, "realistic/ideal ratio {ratio}");
}

#[test]
fn freq_sweep_orders_gain_designs() {
    let cfg = write_cfg(
        "fs.cfg",
        "scenario = freq-sweep\nsweep.start_hz = 1e11\nsweep.stop_hz = 1e12\nsweep.points = 3\n",
    );
    let out = tmp("fs.csv");
    run_ok(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        header(&text),
        vec![
            "f_hz",
            "lambda_m",
            "m_exact",
            "m_int",
            "capacity_isotropic_bps",
            "capacity_directive_rx_bps",
            "capacity_directive_both_bps"
        ]
    );
    // Above 100 GHz the directive designs dominate and stack in order.
    for row in data_rows(&text) {
        let iso: f64 = row[4].parse().unwrap();
        let rx: f64 = row[5].parse().unwrap();
        let both: f64 = row[6].parse().unwrap();
        assert!(iso < rx && rx < both, "ordering broken at f = {}", row[0]);
    }
}

#[test]
fn design_reports_near_field_regime() {
    let out = run_ok(&[
        "design",
        "--frequency-hz",
        "30e9",
        "--distance-m",
        "100",
        "--m-h",
        "8",
        "--m-v",
        "8",
        "--c-approx",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("spacing_h_m = 0.3535533905932738"));
    assert!(text.contains("fraunhofer_array_distance_m = 3200"));
    assert!(text.contains("finite_depth_beamforming = true"));
}

#[test]
fn exit_codes_follow_error_classes() {
    // Unknown scenario: config error.
    let cfg = write_cfg("unknown.cfg", "scenario = does-not-exist\n");
    let out = bin()
        .args(["run", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Unrecognized parameter: config error naming the key.
    let cfg = write_cfg("typo.cfg", "scenario = kappa-sweep\nantenas.m = 8\n");
    let out = bin()
        .args(["run", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("antenas.m"));

    // Domain violation: exit 3.
    let cfg = write_cfg("domain.cfg", "scenario = capacity\nxpd.kappa = 1.5\n");
    let out = bin()
        .args(["run", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kappa"));

    // Missing config file: config error.
    let out = bin()
        .args(["run", "--config", "/definitely/not/here.cfg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capacity_one_shot_matches_closed_form() {
    let out = run_ok(&[
        "capacity",
        "--wavelength-m",
        "0.01",
        "--distance-m",
        "100",
        "--m-h",
        "8",
        "--m-v",
        "8",
        "--model",
        "two-level",
        "--snr-db",
        "25",
        "--bandwidth-hz",
        "90e6",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let cap_line = text
        .lines()
        .find(|l| l.trim_start().starts_with("capacity_bits_per_use"))
        .unwrap();
    let value: f64 = cap_line.split('=').nth(1).unwrap().trim().parse().unwrap();
    let want = 128.0 * (1.0 + 10f64.powf(2.5) / 2.0).log2();
    assert!((value - want).abs() < 1e-9 * want, "{value} vs {want}");
    assert!(text.contains("capacity_bps"));
}
