mod common;

use std::path::Path;

use common::*;
use tempfile::TempDir;
use tomoforge::analysis::{reconstruct, relative_error, DEFAULT_THRESHOLD};
use tomoforge::io::{fmt_sig, parse_density, parse_readings};
use tomoforge::model::{design_from_readings, DensityParams};

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn simulate(dir: &TempDir, readouts: &str, noise: &str, seed: &str) -> String {
    let out = dir.path().join(format!("readings_{seed}.csv"));
    let r = run_cli(
        &[
            "simulate",
            "--density",
            &data_arg("rho_th_exact.txt"),
            "--readouts",
            readouts,
            "--noise",
            noise,
            "--seed",
            seed,
            "--out",
            path_str(&out),
        ],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    out.display().to_string()
}

#[test]
fn compare_printed_states() {
    let r = run_cli(
        &[
            "compare",
            "--a",
            &data_arg("rho_all.txt"),
            "--b",
            &data_arg("rho_th.txt"),
        ],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let value: f64 = r
        .stdout
        .trim()
        .strip_prefix("delta (spectral): ")
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 0.165).abs() < 0.001, "{value}");
}

#[test]
fn non_hermitian_input_needs_a_looser_tolerance() {
    let args = [
        "compare",
        "--a",
        &data_arg("rho_6.txt"),
        "--b",
        &data_arg("rho_th.txt"),
    ];
    assert_eq!(run_cli(&args, &[]).code, 2);
    let mut loose = args.to_vec();
    loose.extend(["--hermitian-tol", "0.1"]);
    let r = run_cli(&loose, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn bad_inputs_exit_with_validation_code() {
    assert_eq!(run_cli(&["analyze", "--readouts", "0,1"], &[]).code, 2);
    assert_eq!(run_cli(&["analyze", "--readouts", "19"], &[]).code, 2);
    assert_eq!(run_cli(&["analyze", "--readouts", "1,1,2"], &[]).code, 2);
    assert_eq!(run_cli(&["enumerate", "--size", "0"], &[]).code, 2);
    assert_eq!(
        run_cli(&["analyze", "--readouts", "all", "--threshold", "-1"], &[]).code,
        2
    );
    let missing = run_cli(
        &[
            "reconstruct",
            "--readings",
            "/nonexistent/readings.csv",
            "--out",
            "/tmp/x",
        ],
        &[],
    );
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.starts_with("error:"));
}

#[test]
fn nothing_determinable_is_a_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let readings = simulate(&dir, "all", "0", "1");
    let out = dir.path().join("rho.txt");
    let r = run_cli(
        &[
            "reconstruct",
            "--readings",
            &readings,
            "--threshold",
            "1e9",
            "--out",
            path_str(&out),
        ],
        &[],
    );
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert!(!out.exists());
}

#[test]
fn threshold_env_applies_and_flag_wins() {
    let dir = TempDir::new().unwrap();
    let readings = simulate(&dir, "1,2,6,12,13", "0", "1");
    let out = dir.path().join("rho.txt");
    let base = [
        "reconstruct",
        "--readings",
        &readings,
        "--out",
        path_str(&out),
    ];
    let env = [("TOMOFORGE_THRESHOLD", "1e9")];
    assert_eq!(run_cli(&base, &env).code, 1);

    let mut with_flag = base.to_vec();
    with_flag.extend(["--threshold", "0.001"]);
    let r = run_cli(&with_flag, &env);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(
        r.stdout.contains("threshold: 1.000000000e-3"),
        "{}",
        r.stdout
    );

    let r = run_cli(
        &["analyze", "--readouts", "all"],
        &[("TOMOFORGE_THRESHOLD", "3.5")],
    );
    assert_eq!(r.code, 0);
    assert!(
        r.stdout.contains("threshold: 3.500000000e0"),
        "{}",
        r.stdout
    );
    assert!(
        r.stdout.contains("ill-determined directions: 3"),
        "{}",
        r.stdout
    );
}

#[test]
fn enumerate_reports_empty_diff() {
    let r = run_cli(&["enumerate", "--size", "5"], &[]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("size 5: 72 full-rank sets"));
    assert!(r
        .stdout
        .contains("published minimal sets: 0 missing, 0 extra"));

    let csv = run_cli(&["enumerate", "--size", "5", "--format", "csv"], &[]);
    let lines: Vec<&str> = csv.stdout.lines().collect();
    assert_eq!(lines[0], "ids,rank,min_eigenvalue");
    assert_eq!(lines[1].split(',').next().unwrap(), "1 2 6 12 13");
    assert_eq!(lines.len(), 74);
    assert_eq!(lines[73], "# published diff: missing=0 extra=0");

    let four = run_cli(&["enumerate", "--size", "4"], &[]);
    assert!(four.stdout.starts_with("size 4: 0 full-rank sets"));
}

#[test]
fn noiseless_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let readings = simulate(&dir, "all", "0", "3");
    let out = dir.path().join("rho.txt");
    let r = run_cli(
        &[
            "reconstruct",
            "--readings",
            &readings,
            "--out",
            path_str(&out),
        ],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("truncated directions: 0"));

    let truth = density("rho_th_exact.txt");
    let rec = parse_density(&std::fs::read_to_string(&out).unwrap(), 1e-9)
        .unwrap()
        .matrix;
    assert!(relative_error(&rec, &truth).unwrap() < 1e-8);
}

#[test]
fn reconstruct_output_matches_library() {
    let dir = TempDir::new().unwrap();
    let readings = simulate(&dir, "1,5,6,11,13", "0.01", "42");
    let out = dir.path().join("rho.txt");
    let r = run_cli(
        &[
            "reconstruct",
            "--readings",
            &readings,
            "--out",
            path_str(&out),
        ],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);

    let file = parse_readings(&std::fs::read_to_string(&readings).unwrap()).unwrap();
    assert_eq!(file.metadata.seed, Some(42));
    assert_eq!(file.metadata.noise_sigma, Some(0.01));
    let d = design_from_readings(&file.readings, true).unwrap();
    let lib = reconstruct(&d, DEFAULT_THRESHOLD, &DensityParams::maximally_mixed()).unwrap();
    let cli = parse_density(&std::fs::read_to_string(&out).unwrap(), 1e-9)
        .unwrap()
        .matrix;
    assert_eq!(cli, lib.matrix());
    assert!(r.stdout.contains(&format!("chi2: {}", fmt_sig(lib.chi2))));
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let a = std::fs::read_to_string(simulate(&dir, "all", "0.01", "9")).unwrap();
    let again = std::fs::read_to_string(simulate(&dir, "all", "0.01", "9")).unwrap();
    assert_eq!(a, again);
    let other = std::fs::read_to_string(simulate(&dir, "all", "0.01", "10")).unwrap();
    assert_ne!(a, other);
}

#[test]
fn psd_projection_flag() {
    let dir = TempDir::new().unwrap();
    let readings = simulate(&dir, "1,2,6,12,13", "0.05", "4");
    let out = dir.path().join("rho.txt");
    let r = run_cli(
        &[
            "reconstruct",
            "--readings",
            &readings,
            "--psd-project",
            "--out",
            path_str(&out),
        ],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("psd projection: applied"));
    let rec = parse_density(&std::fs::read_to_string(&out).unwrap(), 1e-9)
        .unwrap()
        .matrix;
    let eig = tomoforge::linalg::sym_eigen(&rec.real_embedding()).unwrap();
    assert!(eig.eigenvalues.iter().all(|&l| l > -1e-12));
}
