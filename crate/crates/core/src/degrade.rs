//! Synthetic degradations and the 170-image evaluation corpus.
//!
//! Blur is a 3x3 box filter and sharpen is the unsharp mask `2f - blur(f)`,
//! both with edge replication. Salt-and-pepper noise draws one 64-bit word
//! per pixel from a ChaCha8 stream seeded by the recipe seed. Word `2i` of
//! the stream belongs to pixel `i`, so the result depends only on
//! `(seed, pixel index)` and not on traversal order.

use crate::image::GrayImage;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const DEFAULT_DENSITY: f64 = 0.05;
pub const MIN_SOURCES: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DegradeError {
    #[error("noise density must lie in [0, 1], got {0}")]
    BadDensity(f64),
    #[error("need at least {required} distinct source images, found {found}")]
    InsufficientSources { found: usize, required: usize },
    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },
    #[error("unknown degradation {0:?}")]
    UnknownOp(String),
}

/// Sum of the clamped 3x3 neighbourhood of every pixel.
fn box_sums(img: &GrayImage) -> Vec<u32> {
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut s = 0u32;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    s += u32::from(img.get_clamped(x + dx, y + dy));
                }
            }
            out.push(s);
        }
    }
    out
}

/// 3x3 box blur, rounded to the nearest level.
pub fn blur(img: &GrayImage) -> GrayImage {
    // A ninth is never exactly half, so (s + 4) / 9 rounds to nearest.
    let pixels = box_sums(img).into_iter().map(|s| ((s + 4) / 9) as u8).collect();
    GrayImage::new(img.width(), img.height(), pixels).expect("same dimensions")
}

/// Unsharp mask `2f - mean3x3(f)`, rounded and clamped to `0..=255`.
pub fn sharpen(img: &GrayImage) -> GrayImage {
    let pixels = img
        .pixels()
        .iter()
        .zip(box_sums(img))
        .map(|(&f, s)| {
            let scaled = 18 * i64::from(f) - i64::from(s);
            // round(scaled / 9); never a tie.
            let v = (scaled + if scaled >= 0 { 4 } else { -4 }) / 9;
            v.clamp(0, 255) as u8
        })
        .collect();
    GrayImage::new(img.width(), img.height(), pixels).expect("same dimensions")
}

#[inline]
fn unit_interval(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Each pixel independently becomes 0 with probability `p/2`, 255 with
/// probability `p/2`, and is otherwise kept.
pub fn salt_pepper(img: &GrayImage, p: f64, seed: u64) -> Result<GrayImage, DegradeError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DegradeError::BadDensity(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = p / 2.0;
    let pixels = img
        .pixels()
        .iter()
        .map(|&v| {
            let u = unit_interval(rng.next_u64());
            if u < half {
                0
            } else if u < p {
                255
            } else {
                v
            }
        })
        .collect();
    Ok(GrayImage::new(img.width(), img.height(), pixels).expect("same dimensions"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegradeOp {
    Blur,
    Sharpen,
    Noise(f64),
}

impl fmt::Display for DegradeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegradeOp::Blur => f.write_str("blur"),
            DegradeOp::Sharpen => f.write_str("sharpen"),
            DegradeOp::Noise(p) => write!(f, "noise({p})"),
        }
    }
}

impl FromStr for DegradeOp {
    type Err = DegradeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "blur" => Ok(DegradeOp::Blur),
            "sharpen" => Ok(DegradeOp::Sharpen),
            _ => {
                let p = s
                    .strip_prefix("noise(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .and_then(|num| num.parse::<f64>().ok())
                    .ok_or_else(|| DegradeError::UnknownOp(s.to_string()))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(DegradeError::BadDensity(p));
                }
                Ok(DegradeOp::Noise(p))
            }
        }
    }
}

/// An ordered list of degradations plus the seed for any noise step.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradeRecipe {
    pub ops: Vec<DegradeOp>,
    pub seed: u64,
}

impl DegradeRecipe {
    pub fn apply(&self, img: &GrayImage) -> Result<GrayImage, DegradeError> {
        let mut cur = img.clone();
        for op in &self.ops {
            cur = match *op {
                DegradeOp::Blur => blur(&cur),
                DegradeOp::Sharpen => sharpen(&cur),
                DegradeOp::Noise(p) => salt_pepper(&cur, p, self.seed)?,
            };
        }
        Ok(cur)
    }

    /// `+`-joined op names, or `original` for the empty recipe.
    pub fn label(&self) -> String {
        if self.ops.is_empty() {
            return "original".to_string();
        }
        self.ops.iter().map(ToString::to_string).collect::<Vec<_>>().join("+")
    }

    fn parse_label(label: &str, seed: u64) -> Result<Self, DegradeError> {
        let ops = if label == "original" {
            Vec::new()
        } else {
            label.split('+').map(str::parse).collect::<Result<_, _>>()?
        };
        Ok(DegradeRecipe { ops, seed })
    }

    pub fn category(&self) -> Option<Category> {
        let shape: Vec<u8> = self
            .ops
            .iter()
            .map(|op| match op {
                DegradeOp::Blur => b'b',
                DegradeOp::Sharpen => b's',
                DegradeOp::Noise(_) => b'n',
            })
            .collect();
        Category::ALL.into_iter().find(|c| c.shape() == shape.as_slice())
    }
}

/// The seven corpus classes and their sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Original,
    Blur,
    Sharpen,
    Noise,
    BlurNoise,
    SharpenNoise,
    BlurNoiseSharpen,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Original,
        Category::Blur,
        Category::Sharpen,
        Category::Noise,
        Category::BlurNoise,
        Category::SharpenNoise,
        Category::BlurNoiseSharpen,
    ];

    pub fn count(self) -> usize {
        match self {
            Category::BlurNoise | Category::SharpenNoise => 40,
            Category::BlurNoiseSharpen => 10,
            _ => 20,
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            Category::Original => "original",
            Category::Blur => "blur",
            Category::Sharpen => "sharpen",
            Category::Noise => "noise",
            Category::BlurNoise => "blur-noise",
            Category::SharpenNoise => "sharpen-noise",
            Category::BlurNoiseSharpen => "blur-noise-sharpen",
        }
    }

    fn shape(self) -> &'static [u8] {
        match self {
            Category::Original => b"",
            Category::Blur => b"b",
            Category::Sharpen => b"s",
            Category::Noise => b"n",
            Category::BlurNoise => b"bn",
            Category::SharpenNoise => b"sn",
            Category::BlurNoiseSharpen => b"bns",
        }
    }

    pub fn ops(self, density: f64) -> Vec<DegradeOp> {
        self.shape()
            .iter()
            .map(|c| match c {
                b'b' => DegradeOp::Blur,
                b's' => DegradeOp::Sharpen,
                _ => DegradeOp::Noise(density),
            })
            .collect()
    }
}

pub const CORPUS_SIZE: usize = 170;

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub output: String,
    pub source: String,
    pub recipe: DegradeRecipe,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Entries per category; recipes that match no category are not counted.
    pub fn category_counts(&self) -> Vec<(Category, usize)> {
        Category::ALL
            .into_iter()
            .map(|c| {
                let n = self
                    .entries
                    .iter()
                    .filter(|e| e.recipe.category() == Some(c))
                    .count();
                (c, n)
            })
            .collect()
    }

    /// One `output \t source \t recipe \t seed` line per entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                e.output,
                e.source,
                e.recipe.label(),
                e.recipe.seed
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, DegradeError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let bad = |reason: &str| DegradeError::Manifest {
                line: line_no,
                reason: reason.to_string(),
            };
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [output, source, label, seed] = fields[..] else {
                return Err(bad("expected 4 tab-separated fields"));
            };
            let seed = seed.parse::<u64>().map_err(|_| bad("seed is not an unsigned integer"))?;
            let recipe = DegradeRecipe::parse_label(label, seed).map_err(|e| bad(&e.to_string()))?;
            entries.push(ManifestEntry {
                output: output.to_string(),
                source: source.to_string(),
                recipe,
            });
        }
        Ok(DatasetManifest { entries })
    }
}

#[derive(Debug, Clone)]
pub struct Source {
    pub name: String,
    pub image: GrayImage,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    /// `(output name, image)` in manifest order.
    pub images: Vec<(String, GrayImage)>,
    pub manifest: DatasetManifest,
}

/// Builds the corpus: 20 originals, 20 blurred, 20 sharpened, 20 noisy,
/// 40 blurred then noisy, 40 sharpened then noisy, and 10 blurred, noisy,
/// then sharpened.
///
/// Within each category, image `i` uses source `i mod n`. Entry number `e`
/// (0-based, across the whole corpus) is seeded with `seed + e`.
pub fn generate_dataset(sources: &[Source], seed: u64, density: f64) -> Result<Dataset, DegradeError> {
    if !(0.0..=1.0).contains(&density) {
        return Err(DegradeError::BadDensity(density));
    }
    let distinct: HashSet<&GrayImage> = sources.iter().map(|s| &s.image).collect();
    if distinct.len() < MIN_SOURCES {
        return Err(DegradeError::InsufficientSources {
            found: distinct.len(),
            required: MIN_SOURCES,
        });
    }
    let mut images = Vec::with_capacity(CORPUS_SIZE);
    let mut entries = Vec::with_capacity(CORPUS_SIZE);
    for category in Category::ALL {
        for i in 0..category.count() {
            let index = entries.len();
            let source = &sources[i % sources.len()];
            let recipe = DegradeRecipe {
                ops: category.ops(density),
                seed: seed.wrapping_add(index as u64),
            };
            let output = format!("{:03}_{}.pgm", index, category.slug());
            images.push((output.clone(), recipe.apply(&source.image)?));
            entries.push(ManifestEntry {
                output,
                source: source.name.clone(),
                recipe,
            });
        }
    }
    Ok(Dataset {
        images,
        manifest: DatasetManifest { entries },
    })
}
