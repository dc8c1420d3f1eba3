use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;

use tomoforge::analysis::{
    error_matrix_analysis, normal_system, project_psd, reconstruct, relative_error_with,
    Determination, MatrixNorm, DEFAULT_THRESHOLD,
};
use tomoforge::io::{
    fmt_sig, parse_density, parse_readings, write_density, write_readings, ParsedDensity,
    ReadingsFile, ReadingsMetadata, DEFAULT_HERMITIAN_TOL,
};
use tomoforge::linalg::{matrix_rank, ComplexMatrix, RANK_TOL};
use tomoforge::model::{
    assemble_design, design_from_readings, matrix_to_params_with_tol, simulate_readings,
    DensityParams, ReadoutId, NUM_PARAMS,
};
use tomoforge::search::{
    diff_sets, enumerate_minimal_sets, rank_sets_by_conditioning, reference_five_sets,
};
use tomoforge::{Error, Result};

/// Density-matrix reconstruction and read-out design analysis for 2-qubit
/// NMR state tomography.
///
/// Read-out ids: 1=II 2=IX 3=IY 4=XI 5=XX 6=XY 7=YI 8=YX 9=YY with H signal
/// acquisition, 10..18 the same rotations with P acquisition.
#[derive(Parser)]
#[command(name = "tomoforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Spectral,
    Frobenius,
}

impl From<NormArg> for MatrixNorm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Spectral => MatrixNorm::Spectral,
            NormArg::Frobenius => MatrixNorm::Frobenius,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Conditioning analysis of a read-out set: design shape, rank, normal
    /// matrix, eigenvalues and parameter combinations.
    Analyze {
        /// Comma-separated ids (1..18) or `all`.
        #[arg(long, value_parser = parse_readout_list)]
        readouts: Readouts,
        /// Leave out the trace-normalisation equation.
        #[arg(long)]
        no_trace: bool,
        #[arg(long, env = "TOMOFORGE_THRESHOLD", default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List all full-rank read-out sets of a given size.
    Enumerate {
        #[arg(long)]
        size: usize,
        /// Order by descending smallest eigenvalue instead of by ids.
        #[arg(long)]
        rank_by_conditioning: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Simulate peak readings of a density matrix.
    Simulate {
        #[arg(long)]
        density: PathBuf,
        #[arg(long, value_parser = parse_readout_list)]
        readouts: Readouts,
        #[arg(long)]
        noise: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Divide the density matrix by its trace first.
        #[arg(long)]
        normalize: bool,
        #[arg(long, default_value_t = DEFAULT_HERMITIAN_TOL)]
        hermitian_tol: f64,
    },
    /// Reconstruct a density matrix from a readings file.
    Reconstruct {
        #[arg(long)]
        readings: PathBuf,
        #[arg(long, env = "TOMOFORGE_THRESHOLD", default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// `mixed` (I/4) or a density file holding ill-determined directions.
        #[arg(long, default_value = "mixed")]
        prior: String,
        /// Clip negative eigenvalues and renormalise the result.
        #[arg(long)]
        psd_project: bool,
        #[arg(long)]
        no_trace: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HERMITIAN_TOL)]
        hermitian_tol: f64,
    },
    /// Relative error ‖a − b‖ / ‖a‖ between two density files.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum, default_value = "spectral")]
        norm: NormArg,
        #[arg(long, default_value_t = DEFAULT_HERMITIAN_TOL)]
        hermitian_tol: f64,
    },
}

#[derive(Clone)]
struct Readouts(Vec<ReadoutId>);

fn parse_readout_list(s: &str) -> std::result::Result<Readouts, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Readouts(ReadoutId::all().collect()));
    }
    s.split(',')
        .map(|t| {
            let id: i64 = t
                .trim()
                .parse()
                .map_err(|_| format!("invalid read-out id {t:?}"))?;
            ReadoutId::new(id).map_err(|e| e.to_string())
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Readouts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Analyze {
            readouts,
            no_trace,
            threshold,
            format,
        } => analyze(&readouts.0, !no_trace, threshold, format),
        Command::Enumerate {
            size,
            rank_by_conditioning,
            format,
        } => enumerate(size, rank_by_conditioning, format),
        Command::Simulate {
            density,
            readouts,
            noise,
            seed,
            out,
            normalize,
            hermitian_tol,
        } => {
            let mut rho = read_density(&density, hermitian_tol)?.matrix;
            if normalize {
                let tr = rho.trace();
                rho = ComplexMatrix::from_fn(4, 4, |i, j| rho[(i, j)] / tr);
            }
            let readings = simulate_readings(&rho, &readouts.0, noise, seed)?;
            let file = ReadingsFile {
                metadata: ReadingsMetadata {
                    noise_sigma: Some(noise),
                    seed: Some(seed),
                    source: Some(density.display().to_string()),
                },
                readings,
            };
            fs::write(&out, write_readings(&file))?;
            println!(
                "wrote {} readings to {}",
                file.readings.len(),
                out.display()
            );
            Ok(())
        }
        Command::Reconstruct {
            readings,
            threshold,
            prior,
            psd_project,
            no_trace,
            out,
            hermitian_tol,
        } => {
            let file = parse_readings(&fs::read_to_string(&readings)?)?;
            if file.readings.is_empty() {
                return Err(Error::NoReadouts);
            }
            let prior = if prior == "mixed" {
                DensityParams::maximally_mixed()
            } else {
                let parsed = read_density(Path::new(&prior), hermitian_tol)?;
                matrix_to_params_with_tol(&parsed.matrix, hermitian_tol.max(1e-2))?
            };
            let design = design_from_readings(&file.readings, !no_trace)?;
            let result = reconstruct(&design, threshold, &prior)?;
            let mut rho = result.matrix();
            if psd_project {
                rho = project_psd(&rho)?;
            }
            fs::write(&out, write_density(&rho))?;

            println!("read-outs: {}", design.readouts.iter().join(","));
            println!("design: {} x {}", design.a.rows(), design.a.cols());
            println!("threshold: {}", fmt_sig(threshold));
            println!("chi2: {}", fmt_sig(result.chi2));
            println!(
                "truncated directions: {}",
                result.truncated_directions.len()
            );
            for t in &result.truncated_directions {
                println!(
                    "  eigenvalue {}: {}",
                    fmt_sig(t.eigenvalue),
                    format_combination(&t.combination)
                );
            }
            println!("trace: {}", fmt_sig(rho.trace().re));
            if psd_project {
                println!("psd projection: applied");
            }
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Compare {
            a,
            b,
            norm,
            hermitian_tol,
        } => {
            let a = read_density(&a, hermitian_tol)?.matrix;
            let b = read_density(&b, hermitian_tol)?.matrix;
            let norm = MatrixNorm::from(norm);
            let delta = relative_error_with(&a, &b, norm)?;
            let name = match norm {
                MatrixNorm::Spectral => "spectral",
                MatrixNorm::Frobenius => "frobenius",
            };
            println!("delta ({name}): {}", fmt_sig(delta));
            Ok(())
        }
    }
}

fn read_density(path: &Path, tol: f64) -> Result<ParsedDensity> {
    let parsed = parse_density(&fs::read_to_string(path)?, tol)?;
    if let Some(w) = &parsed.warning {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed)
}

fn format_combination(coeffs: &[f64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > 1e-9)
        .map(|(k, c)| format!("{:+.4} x{}", c, k + 1))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ")
    }
}

fn analyze(readouts: &[ReadoutId], trace: bool, threshold: f64, format: Format) -> Result<()> {
    let design = assemble_design(readouts, trace, None)?;
    let rank = matrix_rank(&design.a, RANK_TOL)?;
    let ns = normal_system(&design);
    let report = error_matrix_analysis(&ns, threshold)?;
    let (rows, cols) = design.a.shape();

    match format {
        Format::Text => {
            println!("read-outs: {}", design.readouts.iter().join(","));
            println!("trace row: {}", if trace { "yes" } else { "no" });
            println!("design: {rows} x {cols}");
            println!("rank: {rank}");
            println!("threshold: {}", fmt_sig(threshold));
            println!("normal matrix C:");
            for i in 0..NUM_PARAMS {
                let line =
                    ns.c.row(i)
                        .iter()
                        // keep roundoff from printing as -0.000
                        .map(|&v| format!("{:7.3}", if v.abs() < 5e-4 { 0.0 } else { v }))
                        .join(" ");
                println!("  {line}");
            }
            println!("eigenvalues and combinations:");
            for i in 0..NUM_PARAMS {
                println!(
                    "  y{:<2} {:>12.8}  {:<15}  {}",
                    i + 1,
                    report.eigenvalues[i],
                    report.flags[i].to_string(),
                    format_combination(report.combination(i))
                );
            }
            println!(
                "ill-determined directions: {}",
                report.ill_determined().count()
            );
        }
        Format::Csv => {
            println!(
                "# rows={rows},cols={cols},rank={rank},trace={trace},threshold={}",
                fmt_sig(threshold)
            );
            let xs = (1..=NUM_PARAMS).map(|k| format!("x{k}")).join(",");
            println!("kind,index,eigenvalue,determination,{xs}");
            for i in 0..NUM_PARAMS {
                println!(
                    "C,{},,,{}",
                    i + 1,
                    ns.c.row(i).iter().map(|&v| fmt_sig(v)).join(",")
                );
            }
            for i in 0..NUM_PARAMS {
                let flag = match report.flags[i] {
                    Determination::Well => "well",
                    Determination::Ill => "ill",
                };
                println!(
                    "y,{},{},{flag},{}",
                    i + 1,
                    fmt_sig(report.eigenvalues[i]),
                    report.combination(i).iter().map(|&v| fmt_sig(v)).join(",")
                );
            }
        }
    }
    Ok(())
}

fn enumerate(size: usize, by_conditioning: bool, format: Format) -> Result<()> {
    let mut reports = enumerate_minimal_sets(size)?;
    if by_conditioning {
        reports = rank_sets_by_conditioning(&reports, None);
    }
    let diff = (size == 5).then(|| {
        let found: Vec<_> = reports.iter().map(|r| r.set.clone()).collect();
        diff_sets(&found, &reference_five_sets())
    });

    match format {
        Format::Text => {
            println!("size {size}: {} full-rank sets", reports.len());
            for r in &reports {
                println!(
                    "  {:<24} min eigenvalue {:.6}",
                    r.set.to_string(),
                    r.min_eigenvalue
                );
            }
            if let Some(d) = &diff {
                println!(
                    "published minimal sets: {} missing, {} extra",
                    d.missing.len(),
                    d.extra.len()
                );
                for s in &d.missing {
                    println!("  missing {s}");
                }
                for s in &d.extra {
                    println!("  extra {s}");
                }
            }
        }
        Format::Csv => {
            println!("ids,rank,min_eigenvalue");
            for r in &reports {
                println!(
                    "{},{},{}",
                    r.set.raw().iter().join(" "),
                    r.rank,
                    fmt_sig(r.min_eigenvalue)
                );
            }
            if let Some(d) = &diff {
                println!(
                    "# published diff: missing={} extra={}",
                    d.missing.len(),
                    d.extra.len()
                );
                for s in &d.missing {
                    println!("# missing {}", s.raw().iter().join(" "));
                }
                for s in &d.extra {
                    println!("# extra {}", s.raw().iter().join(" "));
                }
            }
        }
    }
    Ok(())
}
