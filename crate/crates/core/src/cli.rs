//! Command-line front end.
//!
//! Every command reads numeric CSV, prints a short numeric summary on
//! stdout, optionally writes transformed data (`--out`) and a fitted model
//! (`--model`). Exit codes: 0 success, 2 argument error, 3 data error,
//! 4 numeric or capacity error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::apps::{autoencoder_fit, lupi_features, mean_squared_error};
use crate::bounds::{
    oracle_cap_from_env, run_sweep, write_sweep_csv, BoundKind, BoundVariant, SweepConfig,
    SweepParam,
};
use crate::components::{rcca_fit, rdc, rlda_fit, rpca_fit, spectral_cluster};
use crate::error::{Error, Result};
use crate::io::{load_model, read_idx, read_labels, read_matrix, save_model, write_csv, Model};
use crate::kernel::{
    median_bandwidth, sample_fourier_with, sample_nystrom, FeatureMap, KernelSpec, ScaleConvention,
    DEFAULT_MEDIAN_PAIRS,
};
use crate::linalg::Matrix;
use crate::rng::derive_seed;

const NYSTROM_FLOOR: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "rnca",
    version,
    about = "Randomized nonlinear component analysis"
)]
struct Cli {
    /// Base random seed; every random draw derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (outputs do not depend on it).
    #[arg(long, global = true, value_parser = parse_count)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Randomized PCA.
    Pca(PcaArgs),
    /// Randomized CCA between two views.
    Cca(CcaArgs),
    /// Randomized LDA (RCCA against class indicators).
    Lda(LdaArgs),
    /// Randomized Dependence Coefficient.
    Rdc(RdcArgs),
    /// Spectral clustering on random features.
    Cluster(ClusterArgs),
    /// Empirical error versus closed-form bound sweep.
    Bounds(BoundsArgs),
    /// Randomized autoencoder.
    Autoencode(AutoencodeArgs),
    /// Semi-privileged features from privileged training columns.
    Lupi(LupiArgs),
    /// Applies a saved model to new data.
    Transform(TransformArgs),
    /// Converts an uncompressed IDX file to CSV.
    ConvertIdx(ConvertIdxArgs),
}

#[derive(Debug, Clone, Copy)]
enum Bandwidth {
    Median,
    Fixed(f64),
}

impl FromStr for Bandwidth {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "median" {
            return Ok(Bandwidth::Median);
        }
        let v = parse_positive(s)?;
        Ok(Bandwidth::Fixed(v))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MapKind {
    Fourier,
    Nystrom,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    Unbiased,
    PaperLiteral,
}

impl From<ConventionArg> for ScaleConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Unbiased => ScaleConvention::Unbiased,
            ConventionArg::PaperLiteral => ScaleConvention::PaperLiteral,
        }
    }
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// Random feature options shared by the fitting commands.
#[derive(Debug, Args)]
struct FeatureArgs {
    /// Number of random features.
    #[arg(long, default_value_t = 1000, value_parser = parse_count)]
    m: usize,
    /// Kernel scale `s` in exp(−s‖x−y‖²), or `median` for the median heuristic.
    #[arg(long, default_value = "median")]
    bandwidth: Bandwidth,
    #[arg(long, value_enum, default_value_t = MapKind::Fourier)]
    map: MapKind,
    /// Fourier feature scaling.
    #[arg(long, value_enum, default_value_t = ConventionArg::Unbiased)]
    convention: ConventionArg,
}

#[derive(Debug, Args)]
struct Outputs {
    /// Output CSV for transformed data.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to save the fitted model.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PcaArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long, default_value_t = 2, value_parser = parse_count)]
    r: usize,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Debug, Args)]
struct CcaArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
    #[arg(long, default_value_t = 2, value_parser = parse_count)]
    r: usize,
    /// Regularizer for both views.
    #[arg(long, default_value_t = 1e-3, value_parser = parse_positive)]
    gamma: f64,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Debug, Args)]
struct LdaArgs {
    #[arg(long)]
    x: PathBuf,
    /// Single-column CSV of class labels 0..k−1.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, value_parser = parse_count)]
    r: Option<usize>,
    #[arg(long, default_value_t = 1e-3, value_parser = parse_positive)]
    gamma: f64,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Debug, Args)]
struct RdcArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
    #[arg(long, default_value_t = 200, value_parser = parse_count)]
    m: usize,
    #[arg(long, default_value_t = 1e-3, value_parser = parse_positive)]
    gamma: f64,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long, value_parser = parse_count)]
    k: usize,
    #[command(flatten)]
    features: FeatureArgs,
    /// Output CSV for labels (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Pca,
    Cca,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VaryArg {
    N,
    M,
    Gamma,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Paper,
    Corrected,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Pca)]
    kind: KindArg,
    #[arg(long, value_enum)]
    vary: VaryArg,
    /// Comma-separated increasing grid values.
    #[arg(long, value_delimiter = ',', value_parser = parse_positive, required = true)]
    grid: Vec<f64>,
    #[arg(long, default_value_t = 256, value_parser = parse_count)]
    n: usize,
    #[arg(long, default_value_t = 1000, value_parser = parse_count)]
    m: usize,
    #[arg(long, default_value_t = 1e-3, value_parser = parse_positive)]
    gamma: f64,
    /// Columns of each synthetic view.
    #[arg(long, default_value_t = 10, value_parser = parse_count)]
    dims: usize,
    #[arg(long, default_value_t = 25, value_parser = parse_count)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Paper)]
    variant: VariantArg,
    #[arg(long, value_enum, default_value_t = ConventionArg::Unbiased)]
    convention: ConventionArg,
    /// Sweep CSV (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AutoencodeArgs {
    #[arg(long)]
    x: PathBuf,
    /// Held-out rows to reconstruct and score.
    #[arg(long)]
    test: Option<PathBuf>,
    #[arg(long, default_value_t = 1000, value_parser = parse_count)]
    m: usize,
    #[arg(long, default_value_t = 20, value_parser = parse_count)]
    d: usize,
    #[arg(long, default_value_t = 1e-3, value_parser = parse_positive)]
    lambda: f64,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Debug, Args)]
struct LupiArgs {
    #[arg(long)]
    x: PathBuf,
    /// Privileged training columns.
    #[arg(long)]
    x_star: PathBuf,
    /// Single-column numeric labels.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, default_value_t = 1000, value_parser = parse_count)]
    m: usize,
    #[arg(long, default_value_t = 1e-8, value_parser = parse_positive)]
    gamma: f64,
    #[arg(long, default_value_t = 5, value_parser = parse_count)]
    per_attr: usize,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    x: PathBuf,
    /// Second view for CCA models.
    #[arg(long)]
    y: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvertIdxArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Keep raw byte values instead of dividing by 255.
    #[arg(long)]
    raw: bool,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    // Output is buffered so the command can run inside a worker pool.
    let mut buffer = Vec::new();
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut buffer)),
            Err(e) => Err(Error::Argument(format!("cannot start {t} threads: {e}"))),
        },
        None => dispatch(&cli, &mut buffer),
    };
    let result = result.and_then(|()| Ok(out.write_all(&buffer)?));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let seed = cli.seed;
    match &cli.command {
        Command::Pca(a) => cmd_pca(a, seed, out),
        Command::Cca(a) => cmd_cca(a, seed, out),
        Command::Lda(a) => cmd_lda(a, seed, out),
        Command::Rdc(a) => {
            let x = read_matrix(&a.x)?;
            let y = read_matrix(&a.y)?;
            let res = rdc(&x, &y, a.m, a.gamma, seed)?;
            writeln!(out, "{:.16e}", res.value)?;
            Ok(())
        }
        Command::Cluster(a) => cmd_cluster(a, seed, out),
        Command::Bounds(a) => cmd_bounds(a, seed, out),
        Command::Autoencode(a) => cmd_autoencode(a, seed, out),
        Command::Lupi(a) => cmd_lupi(a, seed, out),
        Command::Transform(a) => cmd_transform(a, out),
        Command::ConvertIdx(a) => {
            let data = read_idx(&a.input, !a.raw)?;
            write_data(Some(&a.out), &data.values, None, out)?;
            writeln!(out, "{} {}", data.values.nrows(), data.values.ncols())?;
            Ok(())
        }
    }
}

/// Builds the feature map for one view; `stream` separates the draws of
/// different views under the same seed.
fn build_map(x: &Matrix, f: &FeatureArgs, seed: u64, stream: u64) -> Result<FeatureMap> {
    let spec = match f.bandwidth {
        Bandwidth::Median => {
            median_bandwidth(x, DEFAULT_MEDIAN_PAIRS, derive_seed(seed, 2 * stream))?.spec
        }
        Bandwidth::Fixed(s) => KernelSpec::new(s)?,
    };
    let map_seed = derive_seed(seed, 2 * stream + 1);
    match f.map {
        MapKind::Fourier => {
            sample_fourier_with(x.ncols(), f.m, spec, f.convention.into(), map_seed)
        }
        MapKind::Nystrom => sample_nystrom(x, f.m, spec, map_seed, NYSTROM_FLOOR),
    }
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

fn write_data(
    path: Option<&Path>,
    m: &Matrix,
    header: Option<&[String]>,
    out: &mut dyn Write,
) -> Result<()> {
    match path {
        Some(p) => crate::io::write_matrix(p, m, header),
        None => Ok(write_csv(m, header, out)?),
    }
}

fn write_values(out: &mut dyn Write, values: &[f64]) -> Result<()> {
    for v in values {
        writeln!(out, "{v:.16e}")?;
    }
    Ok(())
}

fn maybe_save(path: &Option<PathBuf>, model: Model) -> Result<()> {
    if let Some(p) = path {
        save_model(&model, p)?;
    }
    Ok(())
}

fn hstack(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.columns_mut(0, a.ncols()).copy_from(a);
    m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    m
}

fn cmd_pca(a: &PcaArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let x = read_matrix(&a.x)?;
    let map = build_map(&x, &a.features, seed, 0)?;
    let model = rpca_fit(&x, &map, a.r)?;
    write_values(out, model.eigenvalues())?;
    if let Some(p) = &a.outputs.out {
        crate::io::write_matrix(p, &model.transform(&x)?, Some(&names("pc", a.r)))?;
    }
    maybe_save(&a.outputs.model, Model::Rpca(model))
}

fn cmd_cca(a: &CcaArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let x = read_matrix(&a.x)?;
    let y = read_matrix(&a.y)?;
    let mx = build_map(&x, &a.features, seed, 0)?;
    let my = build_map(&y, &a.features, seed, 1)?;
    let model = rcca_fit(&x, &y, &mx, &my, a.gamma, a.gamma, a.r)?;
    write_values(out, model.correlations())?;
    if let Some(p) = &a.outputs.out {
        let (u, v) = model.transform(&x, &y)?;
        let header = [names("u", a.r), names("v", a.r)].concat();
        crate::io::write_matrix(p, &hstack(&u, &v), Some(&header))?;
    }
    maybe_save(&a.outputs.model, Model::Rcca(model))
}

fn cmd_lda(a: &LdaArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let x = read_matrix(&a.x)?;
    let labels = read_labels(&a.labels)?;
    let classes = labels.iter().max().map_or(0, |&c| c + 1);
    let r = a.r.unwrap_or(classes.saturating_sub(1).max(1));
    let map = build_map(&x, &a.features, seed, 0)?;
    let model = rlda_fit(&x, &labels, &map, a.gamma, r)?;
    write_values(out, model.correlations())?;
    if let Some(p) = &a.outputs.out {
        crate::io::write_matrix(p, &model.transform_x(&x)?, Some(&names("ld", r)))?;
    }
    maybe_save(&a.outputs.model, Model::Rcca(model))
}

fn cmd_cluster(a: &ClusterArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let x = read_matrix(&a.x)?;
    let map = build_map(&x, &a.features, seed, 0)?;
    let labels = spectral_cluster(&x, a.k, &map, derive_seed(seed, 100))?;
    let col = Matrix::from_iterator(labels.len(), 1, labels.iter().map(|&l| l as f64));
    match &a.out {
        Some(p) => crate::io::write_matrix(p, &col, Some(&["label".to_string()])),
        None => {
            for l in labels {
                writeln!(out, "{l}")?;
            }
            Ok(())
        }
    }
}

fn cmd_bounds(a: &BoundsArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let kind = match a.kind {
        KindArg::Pca => BoundKind::Pca,
        KindArg::Cca => BoundKind::Cca,
    };
    let varying = match a.vary {
        VaryArg::N => SweepParam::N,
        VaryArg::M => SweepParam::M,
        VaryArg::Gamma => SweepParam::Gamma,
    };
    let mut config = SweepConfig::new(kind, varying, a.grid.clone());
    config.base_n = a.n;
    config.base_m = a.m;
    config.base_gamma = a.gamma;
    config.dims = a.dims;
    config.trials = a.trials;
    config.seed = seed;
    config.convention = a.convention.into();
    config.bound_variant = match a.variant {
        VariantArg::Paper => BoundVariant::Paper,
        VariantArg::Corrected => BoundVariant::Corrected,
    };
    config.oracle_cap = oracle_cap_from_env()?;
    let report = run_sweep(&config)?;
    match &a.out {
        Some(p) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(p)?);
            write_sweep_csv(&report.records, &mut f)?;
            f.flush()?;
            writeln!(out, "slope {:.16e}", report.log_log_slope)?;
        }
        None => write_sweep_csv(&report.records, &mut *out)?,
    }
    Ok(())
}

fn cmd_autoencode(a: &AutoencodeArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let x = read_matrix(&a.x)?;
    let model = autoencoder_fit(&x, a.m, a.d, a.lambda, seed)?;
    let train = model.reconstruct(&x)?;
    writeln!(out, "train_mse {:.16e}", mean_squared_error(&train, &x))?;
    let recon = match &a.test {
        Some(p) => {
            let t = read_matrix(p)?;
            let rec = model.reconstruct(&t)?;
            writeln!(out, "test_mse {:.16e}", mean_squared_error(&rec, &t))?;
            rec
        }
        None => train,
    };
    if let Some(p) = &a.outputs.out {
        crate::io::write_matrix(p, &recon, None)?;
    }
    maybe_save(&a.outputs.model, Model::Autoencoder(model))
}

fn cmd_lupi(a: &LupiArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let x = read_matrix(&a.x)?;
    let x_star = read_matrix(&a.x_star)?;
    let labels = read_matrix(&a.labels)?;
    if labels.ncols() != 1 {
        return Err(Error::Format(format!(
            "label file has {} columns, expected 1",
            labels.ncols()
        )));
    }
    let y: Vec<f64> = labels.iter().copied().collect();
    let (model, feats) = lupi_features(&x, &x_star, &y, a.m, a.gamma, a.per_attr, seed)?;
    writeln!(out, "{} {}", model.fitted_count(), model.width())?;
    if let Some(p) = &a.outputs.out {
        crate::io::write_matrix(p, &feats, None)?;
    }
    maybe_save(&a.outputs.model, Model::Lupi(model))
}

fn cmd_transform(a: &TransformArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&a.model)?;
    let x = read_matrix(&a.x)?;
    let result = match &model {
        Model::Rpca(m) => m.transform(&x)?,
        Model::Ridge(m) => m.predict(&x)?,
        Model::Autoencoder(m) => m.reconstruct(&x)?,
        Model::Lupi(m) => m.transform(&x)?,
        Model::Rcca(m) => {
            let u = m.transform_x(&x)?;
            match &a.y {
                Some(p) => {
                    let y = read_matrix(p)?;
                    if y.nrows() != x.nrows() {
                        return Err(Error::Pairing(format!(
                            "views have {} and {} rows",
                            x.nrows(),
                            y.nrows()
                        )));
                    }
                    hstack(&u, &m.transform_y(&y)?)
                }
                None => u,
            }
        }
    };
    write_data(a.out.as_deref(), &result, None, out)
}
