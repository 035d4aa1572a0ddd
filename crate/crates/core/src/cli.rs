//! Method dispatch and file-level commands behind the `docbin` binary.

use crate::bench::{run_bench, BenchError, BenchReport};
use crate::bernsen::{self, bernsen_modified, bernsen_original, BernsenError};
use crate::cooccur::{self, cooccurrence_threshold, CooccurError};
use crate::degrade::{generate_dataset, DegradeError, Source};
use crate::image::{BinaryImage, GrayImage, ImageError};
use crate::otsu::{binarize_global, binarize_otsu, local_otsu_thresholds, make_grid, OtsuError};
use crate::pnm::{load_pbm, load_pgm, save_pbm, save_pgm, PnmError};
use crate::sauvola::{binarize_sauvola_fast, binarize_sauvola_naive, SauvolaError, SauvolaParams};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Decode { path: PathBuf, source: PnmError },
    #[error("invalid grid {0:?}, expected ROWSxCOLS")]
    BadGrid(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Sauvola(#[from] SauvolaError),
    #[error(transparent)]
    Otsu(#[from] OtsuError),
    #[error(transparent)]
    Bernsen(#[from] BernsenError),
    #[error(transparent)]
    Cooccur(#[from] CooccurError),
    #[error(transparent)]
    Degrade(#[from] DegradeError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Image(#[from] ImageError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Otsu,
    OtsuLocal,
    Sauvola,
    SauvolaFast,
    Bernsen,
    BernsenMod,
    Cooccur,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Otsu,
        Method::OtsuLocal,
        Method::Sauvola,
        Method::SauvolaFast,
        Method::Bernsen,
        Method::BernsenMod,
        Method::Cooccur,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Otsu => "otsu",
            Method::OtsuLocal => "otsu-local",
            Method::Sauvola => "sauvola",
            Method::SauvolaFast => "sauvola-fast",
            Method::Bernsen => "bernsen",
            Method::BernsenMod => "bernsen-mod",
            Method::Cooccur => "cooccur",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CliError::Params(format!("unknown method {s:?}")))
    }
}

/// `ROWSxCOLS`, e.g. `3x3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridShape {
    pub rows: usize,
    pub cols: usize,
}

impl Default for GridShape {
    fn default() -> Self {
        GridShape { rows: 3, cols: 3 }
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl FromStr for GridShape {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::BadGrid(s.to_string());
        let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let rows: usize = r.parse().map_err(|_| bad())?;
        let cols: usize = c.parse().map_err(|_| bad())?;
        if rows == 0 || cols == 0 {
            return Err(bad());
        }
        Ok(GridShape { rows, cols })
    }
}

/// A method plus its parameters. `window: None` picks the method default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodSpec {
    pub method: Method,
    pub window: Option<usize>,
    pub k: f64,
    pub r: f64,
    pub grid: GridShape,
    pub d: usize,
}

impl MethodSpec {
    pub fn new(method: Method) -> Self {
        MethodSpec {
            method,
            window: None,
            k: SauvolaParams::DEFAULT_K,
            r: SauvolaParams::DEFAULT_R,
            grid: GridShape::default(),
            d: cooccur::DEFAULT_SPACING,
        }
    }

    pub fn window(&self) -> usize {
        self.window.unwrap_or(match self.method {
            Method::Bernsen | Method::BernsenMod => bernsen::DEFAULT_WINDOW,
            _ => SauvolaParams::DEFAULT_WINDOW,
        })
    }

    pub fn sauvola_params(&self) -> Result<SauvolaParams, SauvolaError> {
        SauvolaParams::new(self.window(), self.k, self.r)
    }

    /// Checks parameters that do not depend on the image.
    pub fn validate(&self) -> Result<(), CliError> {
        match self.method {
            Method::Sauvola | Method::SauvolaFast => {
                self.sauvola_params()?;
            }
            Method::Bernsen | Method::BernsenMod => {
                SauvolaParams::with_window(self.window())?;
            }
            Method::Cooccur if self.d == 0 => return Err(CooccurError::ZeroSpacing.into()),
            _ => {}
        }
        Ok(())
    }
}

/// A binarization and the threshold text reported for it.
#[derive(Debug, Clone, PartialEq)]
pub struct Binarized {
    pub image: BinaryImage,
    /// Threshold summary: one number for global methods, one per grid cell
    /// (row-major, space separated) for grid methods, empty for per-pixel ones.
    pub thresholds: String,
}

pub fn run_method(img: &GrayImage, spec: &MethodSpec) -> Result<Binarized, CliError> {
    spec.validate()?;
    let (image, thresholds) = match spec.method {
        Method::Otsu => {
            let (bin, r) = binarize_otsu(img);
            (bin, r.threshold.to_string())
        }
        Method::OtsuLocal => {
            let grid = make_grid(img.width(), img.height(), spec.grid.rows, spec.grid.cols)?;
            let ts = local_otsu_thresholds(img, &grid)?;
            let bin = crate::otsu::binarize_otsu_local(img, &grid)?;
            let text = ts.iter().map(|t| t.threshold.to_string()).collect::<Vec<_>>().join(" ");
            (bin, text)
        }
        Method::Sauvola => (binarize_sauvola_naive(img, spec.sauvola_params()?).0, String::new()),
        Method::SauvolaFast => (binarize_sauvola_fast(img, spec.sauvola_params()?).0, String::new()),
        Method::Bernsen => {
            let (bin, t) = bernsen_original(img, spec.window())?;
            (bin, format!("{},{}", t.c_star, t.f_star))
        }
        Method::BernsenMod => {
            let grid = make_grid(img.width(), img.height(), spec.grid.rows, spec.grid.cols)?;
            let (bin, ts) = bernsen_modified(img, spec.window(), &grid)?;
            let text = ts
                .iter()
                .map(|t| format!("{},{}", t.c_star, t.f_star))
                .collect::<Vec<_>>()
                .join(" ");
            (bin, text)
        }
        Method::Cooccur => {
            let t = cooccurrence_threshold(img, spec.d)?;
            (binarize_global(img, t.threshold), t.threshold.to_string())
        }
    };
    Ok(Binarized { image, thresholds })
}

pub fn read_pgm(path: &Path) -> Result<GrayImage, CliError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    load_pgm(&bytes).map_err(|source| CliError::Decode {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_pbm(path: &Path) -> Result<BinaryImage, CliError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    load_pbm(&bytes).map_err(|source| CliError::Decode {
        path: path.to_path_buf(),
        source,
    })
}

/// Binarizes `input` into a PBM at `output`. Nothing is written on failure.
pub fn cmd_binarize(input: &Path, spec: &MethodSpec, output: &Path) -> Result<Binarized, CliError> {
    spec.validate()?;
    let img = read_pgm(input)?;
    let out = run_method(&img, spec)?;
    fs::write(output, save_pbm(&out.image)).map_err(io_err(output))?;
    Ok(out)
}

/// Fraction of agreeing pixels between two PBMs.
pub fn cmd_compare(a: &Path, b: &Path) -> Result<f64, CliError> {
    let a = read_pbm(a)?;
    let b = read_pbm(b)?;
    Ok(a.agreement(&b)?)
}

pub const MANIFEST_NAME: &str = "manifest.txt";

fn is_pgm(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

/// Builds the degraded corpus from every `.pgm` in `input_dir` (sorted by file
/// name). All sources are decoded before anything is written.
pub fn cmd_degrade(input_dir: &Path, output_dir: &Path, seed: u64, density: f64) -> Result<usize, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(input_dir)
        .map_err(io_err(input_dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && is_pgm(p))
        .collect();
    paths.sort();
    let sources = paths
        .iter()
        .map(|p| {
            Ok(Source {
                name: p
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                image: read_pgm(p)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let dataset = generate_dataset(&sources, seed, density)?;

    fs::create_dir_all(output_dir).map_err(io_err(output_dir))?;
    for (name, img) in &dataset.images {
        let path = output_dir.join(name);
        fs::write(&path, save_pgm(img)).map_err(io_err(&path))?;
    }
    let manifest = output_dir.join(MANIFEST_NAME);
    fs::write(&manifest, dataset.manifest.to_text()).map_err(io_err(&manifest))?;
    Ok(dataset.images.len())
}

pub fn cmd_bench(input: &Path, windows: &[usize], reps: usize) -> Result<BenchReport, CliError> {
    let img = read_pgm(input)?;
    Ok(run_bench(&img, windows, reps)?)
}
