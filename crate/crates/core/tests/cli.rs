use std::f64::consts::PI;
use std::process::Command as Proc;

use lebp::cli::{execute, Command, Domain, KernelArgs, RunManifest};

const GOLDEN: &str = include_str!("golden/kernel_strip_5x5.csv");

fn grid_angles() -> Vec<f64> {
    (1..=5).map(|k| k as f64 * PI / 6.0).collect()
}

fn golden_manifest() -> RunManifest {
    RunManifest::new(Command::Kernel(KernelArgs {
        domain: Domain::Strip,
        n: 3,
        x: vec![1.0],
        theta: grid_angles(),
        xp: vec![2.0],
        thetap: grid_angles(),
    }))
}

fn parse(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

fn run(m: &RunManifest) -> String {
    let mut buf = Vec::new();
    assert!(execute(m, &mut buf).unwrap());
    String::from_utf8(buf).unwrap()
}

#[test]
fn kernel_grid_matches_golden_file() {
    let out = run(&golden_manifest());
    assert_eq!(out.lines().next(), GOLDEN.lines().next());
    let (got, want) = (parse(&out), parse(GOLDEN));
    assert_eq!(got.len(), 25);
    for (g, w) in got.iter().zip(&want) {
        for (a, b) in g.iter().zip(w) {
            assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0), "{a} vs {b}");
        }
    }
}

#[test]
fn golden_values_are_the_finite_sine_sum() {
    // x ≤ x′: (2/π) Σ_{n≤3} sinh(nx′)/sinh(nx) sin(nθ) sin(nθ′)
    for row in parse(GOLDEN) {
        let (x, t, xp, tp, v) = (row[0], row[1], row[2], row[3], row[4]);
        let direct: f64 = (1..=3)
            .map(|n| {
                let n = n as f64;
                (n * xp).sinh() / (n * x).sinh() * (n * t).sin() * (n * tp).sin()
            })
            .sum::<f64>()
            * 2.0
            / PI;
        assert!((v - direct).abs() < 1e-12 * direct.abs().max(1.0), "{v} vs {direct}");
        assert_eq!(row[5], 0.0);
    }
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let m = golden_manifest();
    m.save(&path).unwrap();
    let back = RunManifest::load(&path).unwrap();
    assert_eq!(back, m);
    assert_eq!(run(&back), run(&m));
}

fn lebp(args: &[&str]) -> (i32, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_lebp"))
        .args(args)
        .env("LEBP_THREADS", "2")
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn binary_exit_codes() {
    let (code, out) = lebp(&["density", "--N", "3", "--x", "2", "--theta", "pi/2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    // r < 1 lies inside the removed half disk
    assert_eq!(lebp(&["density", "--N", "3", "--x", "0.5", "--theta", "pi/2"]).0, 2);
    assert_eq!(lebp(&["kernel", "--N", "3"]).0, 2);
    assert_eq!(lebp(&["--help"]).0, 0);
}

#[test]
fn sequential_and_parallel_output_agree() {
    let args = ["two-point", "--N", "4", "--r", "2", "--theta", "pi/2", "--rp", "1.5,3", "--thetap", "0.3,1,2"];
    let (c1, par) = lebp(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let (c2, seq) = lebp(&seq_args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(par, seq);
}

#[test]
fn validate_suite_reports_json() {
    let (code, out) = lebp(&["validate", "--suite", "fomin"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v[0]["checks"].as_array().is_some_and(|c| !c.is_empty()));
}
