//! Read-out forward model for 2-qubit NMR tomography.
//!
//! A read-out applies one of nine rotations to the state and then records
//! the spectrum of one spin. The two peaks of that spectrum are the complex
//! elements of the rotated density matrix at fixed positions, so every
//! read-out contributes four real linear equations in the 16 density
//! parameters.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, RealMatrix};

/// Number of real parameters of a 4×4 Hermitian matrix.
pub const NUM_PARAMS: usize = 16;
pub const NUM_READOUTS: u8 = 18;

const HERMITIAN_TOL: f64 = 1e-9;
const TRACE_TOL: f64 = 1e-9;

/// Rotation applied before acquisition. The first letter acts on the H
/// spin, the second on the P spin; `X`/`Y` are 90° pulses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rotation {
    II,
    IX,
    IY,
    XI,
    XX,
    XY,
    YI,
    YX,
    YY,
}

impl Rotation {
    pub const ALL: [Rotation; 9] = [
        Rotation::II,
        Rotation::IX,
        Rotation::IY,
        Rotation::XI,
        Rotation::XX,
        Rotation::XY,
        Rotation::YI,
        Rotation::YX,
        Rotation::YY,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Rotation::II => "II",
            Rotation::IX => "IX",
            Rotation::IY => "IY",
            Rotation::XI => "XI",
            Rotation::XX => "XX",
            Rotation::XY => "XY",
            Rotation::YI => "YI",
            Rotation::YX => "YX",
            Rotation::YY => "YY",
        }
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rotation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Rotation::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown rotation {s:?}"))
    }
}

/// The spin whose spectrum is recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    H,
    P,
}

/// One of the 18 acquisitions: ids 1–9 are the rotations in
/// [`Rotation::ALL`] order with H acquisition, 10–18 the same with P.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReadoutId(u8);

impl ReadoutId {
    pub fn new(id: i64) -> Result<Self> {
        if (1..=NUM_READOUTS as i64).contains(&id) {
            Ok(ReadoutId(id as u8))
        } else {
            Err(Error::InvalidReadout(id))
        }
    }

    pub fn from_parts(rotation: Rotation, spin: Spin) -> Self {
        let base = match spin {
            Spin::H => 1,
            Spin::P => 10,
        };
        ReadoutId(base + rotation.index() as u8)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn rotation(self) -> Rotation {
        Rotation::ALL[((self.0 - 1) % 9) as usize]
    }

    pub fn spin(self) -> Spin {
        if self.0 <= 9 {
            Spin::H
        } else {
            Spin::P
        }
    }

    /// The same rotation observed on the other spin.
    pub fn mirror(self) -> Self {
        if self.0 <= 9 {
            ReadoutId(self.0 + 9)
        } else {
            ReadoutId(self.0 - 9)
        }
    }

    pub fn all() -> impl Iterator<Item = ReadoutId> {
        (1..=NUM_READOUTS).map(ReadoutId)
    }
}

impl fmt::Display for ReadoutId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Converts a list of raw ids, rejecting out-of-range values.
pub fn readout_ids(ids: &[i64]) -> Result<Vec<ReadoutId>> {
    ids.iter().map(|&i| ReadoutId::new(i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Peak {
    Left,
    Right,
}

impl Peak {
    pub const BOTH: [Peak; 2] = [Peak::Left, Peak::Right];

    pub fn name(self) -> &'static str {
        match self {
            Peak::Left => "left",
            Peak::Right => "right",
        }
    }
}

impl fmt::Display for Peak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Peak {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "left" => Ok(Peak::Left),
            "right" => Ok(Peak::Right),
            _ => Err(format!("peak must be `left` or `right`, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Re,
    Im,
}

/// Normalised integrated area of one spectral peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reading {
    pub readout: ReadoutId,
    pub peak: Peak,
    pub value: Complex64,
}

/// The 16 real unknowns `x₁…x₁₆` of a 4×4 Hermitian matrix.
///
/// Diagonal: x₁, x₅, x₈, x₁₀. Upper off-diagonal (1,2), (1,3), (1,4), (2,3),
/// (2,4), (3,4): real parts x₂, x₃, x₄, x₆, x₇, x₉ and imaginary parts
/// x₁₁…x₁₆ in the same order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityParams([f64; NUM_PARAMS]);

/// `(row, col, part)` of each parameter, 0-based, upper triangle.
const PARAM_LAYOUT: [(usize, usize, Part); NUM_PARAMS] = [
    (0, 0, Part::Re),
    (0, 1, Part::Re),
    (0, 2, Part::Re),
    (0, 3, Part::Re),
    (1, 1, Part::Re),
    (1, 2, Part::Re),
    (1, 3, Part::Re),
    (2, 2, Part::Re),
    (2, 3, Part::Re),
    (3, 3, Part::Re),
    (0, 1, Part::Im),
    (0, 2, Part::Im),
    (0, 3, Part::Im),
    (1, 2, Part::Im),
    (1, 3, Part::Im),
    (2, 3, Part::Im),
];

/// 0-based indices of the diagonal parameters x₁, x₅, x₈, x₁₀.
pub const DIAGONAL_PARAMS: [usize; 4] = [0, 4, 7, 9];

impl DensityParams {
    pub fn new(x: [f64; NUM_PARAMS]) -> Self {
        DensityParams(x)
    }

    pub fn from_slice(x: &[f64]) -> Result<Self> {
        let arr: [f64; NUM_PARAMS] = x
            .try_into()
            .map_err(|_| Error::Shape(format!("{} parameters, expected {NUM_PARAMS}", x.len())))?;
        Ok(DensityParams(arr))
    }

    pub fn zeros() -> Self {
        DensityParams([0.0; NUM_PARAMS])
    }

    /// I/4.
    pub fn maximally_mixed() -> Self {
        let mut x = [0.0; NUM_PARAMS];
        for i in DIAGONAL_PARAMS {
            x[i] = 0.25;
        }
        DensityParams(x)
    }

    /// 1-based access, `x(1)` … `x(16)`.
    pub fn x(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    pub fn as_array(&self) -> &[f64; NUM_PARAMS] {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        DIAGONAL_PARAMS.iter().map(|&i| self.0[i]).sum()
    }

    pub fn is_trace_normalized(&self) -> bool {
        (self.trace() - 1.0).abs() <= TRACE_TOL
    }
}

/// Builds the Hermitian matrix of a parameter vector.
pub fn params_to_matrix(p: &DensityParams) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (k, &(i, j, part)) in PARAM_LAYOUT.iter().enumerate() {
        let x = p.0[k];
        match part {
            Part::Re => {
                m[(i, j)].re = x;
                m[(j, i)].re = x;
            }
            Part::Im => {
                m[(i, j)].im = x;
                m[(j, i)].im = -x;
            }
        }
    }
    m
}

/// Inverse of [`params_to_matrix`]; requires Hermiticity within 1e-9.
pub fn matrix_to_params(m: &ComplexMatrix) -> Result<DensityParams> {
    matrix_to_params_with_tol(m, HERMITIAN_TOL)
}

/// Like [`matrix_to_params`] with an explicit Hermiticity tolerance. Only
/// the upper triangle and the real part of the diagonal are read.
pub fn matrix_to_params_with_tol(m: &ComplexMatrix, tol: f64) -> Result<DensityParams> {
    if m.shape() != (4, 4) {
        return Err(Error::Shape(format!(
            "density matrix must be 4x4, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    m.check_hermitian(tol)?;
    let mut x = [0.0; NUM_PARAMS];
    for (k, &(i, j, part)) in PARAM_LAYOUT.iter().enumerate() {
        x[k] = match part {
            Part::Re => m[(i, j)].re,
            Part::Im => m[(i, j)].im,
        };
    }
    Ok(DensityParams(x))
}

fn single_qubit(letter: char) -> [[Complex64; 2]; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let r = |x: f64| Complex64::new(x, 0.0);
    let i = |x: f64| Complex64::new(0.0, x);
    match letter {
        'I' => [[r(1.0), r(0.0)], [r(0.0), r(1.0)]],
        'X' => [[r(s), i(-s)], [i(-s), r(s)]],
        'Y' => [[r(s), r(s)], [r(-s), r(s)]],
        _ => unreachable!(),
    }
}

/// The 4×4 unitary of a rotation, `A ⊗ B` for label `AB` with the H spin
/// as the more significant index. X = exp(-iπσx/4), Y = exp(+iπσy/4).
pub fn rotation_matrix(rotation: Rotation) -> ComplexMatrix {
    let mut letters = rotation.name().chars();
    let a = single_qubit(letters.next().unwrap());
    let b = single_qubit(letters.next().unwrap());
    ComplexMatrix::from_fn(4, 4, |i, j| a[i / 2][j / 2] * b[i % 2][j % 2])
}

/// `R·ρ·Rᴴ`.
pub fn apply_rotation(rho: &ComplexMatrix, rotation: Rotation) -> Result<ComplexMatrix> {
    if rho.shape() != (4, 4) {
        return Err(Error::Shape(format!(
            "density matrix must be 4x4, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let r = rotation_matrix(rotation);
    r.matmul(rho)?.matmul(&r.adjoint())
}

/// 1-based `(row, col)` of the left and right peak in the rotated matrix:
/// H spectra show elements (1,3) and (2,4), P spectra (1,2) and (3,4).
pub fn observable_positions(readout: ReadoutId) -> [(usize, usize); 2] {
    match readout.spin() {
        Spin::H => [(1, 3), (2, 4)],
        Spin::P => [(1, 2), (3, 4)],
    }
}

fn peak_position(readout: ReadoutId, peak: Peak) -> (usize, usize) {
    let pos = observable_positions(readout);
    let (i, j) = match peak {
        Peak::Left => pos[0],
        Peak::Right => pos[1],
    };
    (i - 1, j - 1)
}

/// Identifies one equation of a [`DesignSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowLabel {
    Readout {
        readout: ReadoutId,
        peak: Peak,
        part: Part,
    },
    Trace,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowLabel::Readout {
                readout,
                peak,
                part,
            } => {
                let part = match part {
                    Part::Re => "re",
                    Part::Im => "im",
                };
                write!(f, "{readout}:{peak}:{part}")
            }
            RowLabel::Trace => f.write_str("trace"),
        }
    }
}

pub type DesignRow = (RowLabel, [f64; NUM_PARAMS]);

/// The four equations contributed by one read-out: left re, left im,
/// right re, right im. Coefficient of `x_m` is the observed element of
/// `R·E_m·Rᴴ` where `E_m` is the basis matrix of parameter `m`.
pub fn readout_rows(readout: ReadoutId) -> [DesignRow; 4] {
    static TABLE: OnceLock<Vec<[DesignRow; 4]>> = OnceLock::new();
    let table = TABLE.get_or_init(|| ReadoutId::all().map(compute_readout_rows).collect());
    table[(readout.get() - 1) as usize]
}

fn compute_readout_rows(readout: ReadoutId) -> [DesignRow; 4] {
    let r = rotation_matrix(readout.rotation());
    let rh = r.adjoint();
    let rotated_basis: Vec<ComplexMatrix> = (0..NUM_PARAMS)
        .map(|m| {
            let mut x = [0.0; NUM_PARAMS];
            x[m] = 1.0;
            let e = params_to_matrix(&DensityParams(x));
            r.matmul(&e)
                .and_then(|t| t.matmul(&rh))
                .expect("4x4 shapes")
        })
        .collect();

    let mut rows = [(RowLabel::Trace, [0.0; NUM_PARAMS]); 4];
    let mut k = 0;
    for peak in Peak::BOTH {
        let (i, j) = peak_position(readout, peak);
        for part in [Part::Re, Part::Im] {
            let mut coeffs = [0.0; NUM_PARAMS];
            for (m, rb) in rotated_basis.iter().enumerate() {
                let z = rb[(i, j)];
                coeffs[m] = match part {
                    Part::Re => z.re,
                    Part::Im => z.im,
                };
            }
            rows[k] = (
                RowLabel::Readout {
                    readout,
                    peak,
                    part,
                },
                coeffs,
            );
            k += 1;
        }
    }
    rows
}

/// `x₁ + x₅ + x₈ + x₁₀ = 1`.
pub fn trace_row() -> [f64; NUM_PARAMS] {
    let mut row = [0.0; NUM_PARAMS];
    for i in DIAGONAL_PARAMS {
        row[i] = 1.0;
    }
    row
}

/// Stacked real linear system `A·x = B`.
#[derive(Debug, Clone)]
pub struct DesignSystem {
    pub a: RealMatrix,
    pub b: Vec<f64>,
    pub labels: Vec<RowLabel>,
    /// Ascending.
    pub readouts: Vec<ReadoutId>,
    pub has_trace: bool,
    /// False in design-only mode, where `b` is zero apart from the trace row.
    pub has_readings: bool,
}

impl DesignSystem {
    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }
}

/// Assembles the design system for a read-out set.
///
/// Rows are ordered by ascending read-out id, left peak before right, real
/// part before imaginary, with the trace row last. Without `readings` the
/// right-hand side is zero except for the trace row.
pub fn assemble_design(
    readouts: &[ReadoutId],
    include_trace: bool,
    readings: Option<&[Reading]>,
) -> Result<DesignSystem> {
    if readouts.is_empty() {
        return Err(Error::NoReadouts);
    }
    let mut ids = readouts.to_vec();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateReadout(w[0].get()));
    }

    let values = match readings {
        Some(readings) => Some(index_readings(&ids, readings)?),
        None => None,
    };

    let n_rows = 4 * ids.len() + usize::from(include_trace);
    let mut data = Vec::with_capacity(n_rows * NUM_PARAMS);
    let mut b = Vec::with_capacity(n_rows);
    let mut labels = Vec::with_capacity(n_rows);
    for (slot, &id) in ids.iter().enumerate() {
        for (label, coeffs) in readout_rows(id) {
            data.extend_from_slice(&coeffs);
            let rhs = match (&values, label) {
                (Some(v), RowLabel::Readout { peak, part, .. }) => {
                    let z = v[slot][peak as usize];
                    match part {
                        Part::Re => z.re,
                        Part::Im => z.im,
                    }
                }
                _ => 0.0,
            };
            b.push(rhs);
            labels.push(label);
        }
    }
    if include_trace {
        data.extend_from_slice(&trace_row());
        b.push(1.0);
        labels.push(RowLabel::Trace);
    }
    Ok(DesignSystem {
        a: RealMatrix::from_vec(n_rows, NUM_PARAMS, data)?,
        b,
        labels,
        readouts: ids,
        has_trace: include_trace,
        has_readings: readings.is_some(),
    })
}

/// Design system over exactly the read-outs present in `readings`.
pub fn design_from_readings(readings: &[Reading], include_trace: bool) -> Result<DesignSystem> {
    let mut ids: Vec<ReadoutId> = readings.iter().map(|r| r.readout).collect();
    ids.sort_unstable();
    ids.dedup();
    assemble_design(&ids, include_trace, Some(readings))
}

/// Peak values per sorted id, checking the readings cover exactly `ids`.
fn index_readings(ids: &[ReadoutId], readings: &[Reading]) -> Result<Vec<[Complex64; 2]>> {
    let mut slots: Vec<[Option<Complex64>; 2]> = vec![[None, None]; ids.len()];
    for r in readings {
        let slot = ids.binary_search(&r.readout).map_err(|_| {
            Error::ReadingsMismatch(format!(
                "reading for read-out {} not in the requested set",
                r.readout
            ))
        })?;
        let cell = &mut slots[slot][r.peak as usize];
        if cell.is_some() {
            return Err(Error::ReadingsMismatch(format!(
                "duplicate reading for read-out {} {} peak",
                r.readout, r.peak
            )));
        }
        *cell = Some(r.value);
    }
    ids.iter()
        .zip(slots)
        .map(|(id, [l, r])| match (l, r) {
            (Some(l), Some(r)) => Ok([l, r]),
            _ => Err(Error::ReadingsMismatch(format!(
                "read-out {id} is missing a peak"
            ))),
        })
        .collect()
}

/// Readings of `rho` for each read-out with i.i.d. Gaussian noise of
/// standard deviation `noise_sigma` on every real and imaginary part.
///
/// Output order matches [`assemble_design`]; a fixed seed gives
/// bit-identical output.
pub fn simulate_readings(
    rho: &ComplexMatrix,
    readouts: &[ReadoutId],
    noise_sigma: f64,
    seed: u64,
) -> Result<Vec<Reading>> {
    if noise_sigma.is_nan() || noise_sigma < 0.0 {
        return Err(Error::NegativeNoise(noise_sigma));
    }
    if readouts.is_empty() {
        return Err(Error::NoReadouts);
    }
    if rho.shape() != (4, 4) {
        return Err(Error::Shape(format!(
            "density matrix must be 4x4, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    rho.check_hermitian(HERMITIAN_TOL)?;
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
        return Err(Error::TraceNotUnit(trace.re));
    }
    let mut ids = readouts.to_vec();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateReadout(w[0].get()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise_sigma).map_err(|_| Error::NegativeNoise(noise_sigma))?;
    let mut out = Vec::with_capacity(2 * ids.len());
    for id in ids {
        let rotated = apply_rotation(rho, id.rotation())?;
        for peak in Peak::BOTH {
            let (i, j) = peak_position(id, peak);
            let mut value = rotated[(i, j)];
            if noise_sigma > 0.0 {
                value.re += normal.sample(&mut rng);
                value.im += normal.sample(&mut rng);
            }
            out.push(Reading {
                readout: id,
                peak,
                value,
            });
        }
    }
    Ok(out)
}
