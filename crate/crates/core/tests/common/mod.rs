#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tomoforge::io::parse_density;
use tomoforge::linalg::{ComplexMatrix, RealMatrix};
use tomoforge::model::{params_to_matrix, DensityParams, ReadoutId};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Loads a fixture density file, accepting the rounding of printed values.
pub fn density(name: &str) -> ComplexMatrix {
    let text = std::fs::read_to_string(data_path(name)).unwrap();
    parse_density(&text, 0.1).unwrap().matrix
}

pub fn ids(raw: &[i64]) -> Vec<ReadoutId> {
    raw.iter().map(|&i| ReadoutId::new(i).unwrap()).collect()
}

pub fn all_ids() -> Vec<ReadoutId> {
    ReadoutId::all().collect()
}

/// 6-read-out set: II, IX, IY, XX on H and II, IX on P.
pub const SIX_SET: [i64; 6] = [1, 2, 3, 5, 10, 11];

fn eighths(rows: [[i32; 16]; 16]) -> RealMatrix {
    RealMatrix::from_fn(16, 16, |i, j| rows[i][j] as f64 / 8.0)
}

/// Normal matrix of the full 18-read-out design with trace row, as
/// printed, in units of 1/8.
pub fn printed_full_c() -> RealMatrix {
    eighths([
        [24, 0, 0, 0, 4, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 40, 0, 0, 0, 0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 40, 0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 32, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [4, 0, 0, 0, 24, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 32, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 8, 0, 0, 0, 40, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [4, 0, 0, 0, 0, 0, 0, 24, 0, 4, 0, 0, 0, 0, 0, 0],
        [0, 8, 0, 0, 0, 0, 0, 0, 40, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 4, 0, 0, 4, 0, 24, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 40, 0, 0, 0, 0, 8],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 40, 0, 0, 8, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 32, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 32, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 8, 0, 0, 40, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 8, 0, 0, 0, 0, 40],
    ])
}

/// Normal matrix of the 6-read-out design with trace row, verbatim as
/// printed (entry (8,8) reads 3/8), in units of 1/8.
pub fn printed_six_c() -> RealMatrix {
    eighths([
        [11, 0, 0, 0, 7, 0, 0, 7, 0, 7, 0, 0, 0, 0, 0, 0],
        [0, 16, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 20, 0, 0, 0, 12, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [7, 0, 0, 0, 11, 0, 0, 7, 0, 7, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 12, 0, 0, 0, 20, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [7, 0, 0, 0, 7, 0, 0, 3, 0, 7, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 16, 0, 0, 0, 0, 0, 0, 0],
        [7, 0, 0, 0, 7, 0, 0, 7, 0, 11, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 12, 0, 0, 0, 0, -4],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 16, 0, 0, 8, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 12, -4, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -4, 12, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 8, 0, 0, 16, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -4, 0, 0, 0, 0, 12],
    ])
}

/// Printed eigenvalues of the full-set normal matrix, in y order.
pub const FULL_EIGENVALUES: [f64; 16] = [
    4.0, 4.0, 4.0, 4.0, 4.0, 6.0, 6.0, 3.0, 3.0, 2.0, 6.0, 4.0, 4.0, 4.0, 4.0, 6.0,
];

/// Printed eigenvalues of the 6-read-out normal matrix, in y order.
pub const SIX_EIGENVALUES: [f64; 16] = [
    1.0, 2.0, 1.0, 0.5, 0.5, 1.0, 4.0, 2.0, 4.0, 0.5, 1.0, 3.0, 1.0, 2.0, 1.0, 2.0,
];

pub type Combination = &'static [(usize, f64)];

/// Printed y-combinations for the full set, `(k, coefficient of x_k)`.
pub const FULL_COMBINATIONS: [Combination; 16] = [
    &[(3, -0.37), (4, 0.82), (6, -0.24)],
    &[
        (1, -0.19),
        (2, 0.41),
        (3, -0.17),
        (4, -0.32),
        (5, -0.19),
        (6, -0.59),
        (7, 0.17),
        (8, -0.19),
        (9, -0.41),
        (10, -0.19),
    ],
    &[
        (1, -0.0087),
        (2, -0.093),
        (3, -0.57),
        (4, -0.39),
        (5, -0.0087),
        (6, 0.42),
        (7, 0.57),
        (8, -0.0087),
        (9, 0.093),
        (10, -0.0087),
    ],
    &[
        (1, 0.30),
        (2, -0.30),
        (3, -0.093),
        (4, -0.26),
        (5, 0.30),
        (6, -0.61),
        (7, 0.093),
        (8, 0.30),
        (9, 0.30),
        (10, 0.30),
    ],
    &[
        (1, -0.35),
        (2, -0.48),
        (3, 0.027),
        (4, -0.035),
        (5, -0.35),
        (6, -0.20),
        (7, -0.027),
        (8, -0.35),
        (9, 0.48),
        (10, -0.35),
    ],
    &[(2, -0.55), (3, 0.44), (7, 0.44), (9, -0.55)],
    &[(2, -0.44), (3, -0.55), (7, -0.55), (9, -0.44)],
    &[(5, 0.71), (8, -0.71)],
    &[(1, -0.71), (10, 0.71)],
    &[(1, 0.50), (5, -0.50), (8, -0.50), (10, 0.50)],
    &[(12, 0.71), (15, 0.71)],
    // printed with a malformed subscript `x{12}`
    &[(12, -0.71), (15, 0.71)],
    &[(13, 1.0)],
    &[(14, 1.0)],
    &[(11, 0.71), (16, -0.71)],
    &[(11, 0.71), (16, 0.71)],
];

/// Printed y-combinations for the 6-read-out set.
pub const SIX_COMBINATIONS: [Combination; 16] = [
    &[(6, -1.0)],
    &[(2, 1.0)],
    &[(4, 1.0)],
    &[(1, -0.79), (5, 0.21), (8, 0.58)],
    &[(1, -0.21), (5, 0.79), (8, -0.58)],
    &[(3, 0.71), (7, -0.71)],
    &[(3, 0.71), (7, 0.71)],
    &[(9, 1.0)],
    &[(1, -0.50), (5, -0.50), (8, -0.50), (10, -0.50)],
    &[(1, -0.29), (5, -0.29), (8, -0.29), (10, 0.87)],
    &[(12, -0.71), (15, 0.71)],
    &[(12, 0.71), (15, 0.71)],
    &[(13, -0.71), (14, -0.71)],
    &[(13, -0.71), (14, 0.71)],
    &[(11, -0.71), (16, -0.71)],
    &[(11, -0.71), (16, 0.71)],
];

pub fn dense(c: Combination) -> Vec<f64> {
    let mut v = vec![0.0; 16];
    for &(k, x) in c {
        v[k - 1] = x;
    }
    v
}

/// Residual `‖v̂ − P v̂‖` of the normalised vector after projection.
pub fn projection_residual(projector: &RealMatrix, v: &[f64]) -> f64 {
    let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let unit: Vec<f64> = v.iter().map(|x| x / n).collect();
    let p = projector.mul_vec(&unit).unwrap();
    unit.iter()
        .zip(&p)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Random trace-1 Hermitian matrix (not necessarily positive).
pub fn random_trace_one(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut x = [0.0; 16];
    for v in x.iter_mut() {
        *v = rng.random_range(-0.5..0.5);
    }
    let shift = (1.0 - (x[0] + x[4] + x[7] + x[9])) / 4.0;
    for i in [0, 4, 7, 9] {
        x[i] += shift;
    }
    params_to_matrix(&DensityParams::new(x))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Multiset equality of two eigenvalue lists within `tol`.
pub fn same_multiset(a: &[f64], b: &[f64], tol: f64) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the `tomoforge` binary with `TOMOFORGE_THRESHOLD` cleared unless
/// given in `env`.
pub fn run_cli(args: &[&str], env: &[(&str, &str)]) -> CliOutput {
    let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_tomoforge"));
    cmd.args(args).env_remove("TOMOFORGE_THRESHOLD");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    CliOutput {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn data_arg(name: &str) -> String {
    data_path(name).display().to_string()
}
