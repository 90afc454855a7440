//! Contrast perturbations for exercising order invariance.
//!
//! A table that is strictly increasing on all 256 levels and stays inside
//! `[0, 255]` can only be the identity, so strictness is tracked relative to a
//! *domain*: the set of input levels on which the table is guaranteed to be
//! strictly increasing. Invariance checks are admissible only when every level
//! present in the image belongs to a set on which the table is strict.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::census::census_transform;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::liot::liot_transform;

/// Subset of the 256 gray levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelSet([bool; 256]);

impl LevelSet {
    pub fn empty() -> Self {
        LevelSet([false; 256])
    }

    pub fn all() -> Self {
        LevelSet([true; 256])
    }

    pub fn from_levels(levels: impl IntoIterator<Item = u8>) -> Self {
        let mut set = Self::empty();
        for v in levels {
            set.0[v as usize] = true;
        }
        set
    }

    /// Levels occurring in `img`.
    pub fn of(img: &GrayImage) -> Self {
        Self::from_levels(img.data().iter().copied())
    }

    pub fn contains(&self, v: u8) -> bool {
        self.0[v as usize]
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &LevelSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(&a, &b)| !a || b)
    }

    /// Ascending list of member levels.
    pub fn levels(&self) -> Vec<u8> {
        (0..=255u8).filter(|&v| self.contains(v)).collect()
    }
}

/// 256-entry gray-level lookup table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneLut {
    table: [u8; 256],
    domain: LevelSet,
}

impl MonotoneLut {
    /// A table whose strictness is judged over all 256 levels.
    pub fn from_table(table: [u8; 256]) -> Self {
        Self { table, domain: LevelSet::all() }
    }

    pub fn identity() -> Self {
        Self::from_table(std::array::from_fn(|i| i as u8))
    }

    /// Identity with levels `a` and `b` exchanged. Not monotone unless `a == b`;
    /// used as a negative control.
    pub fn swap(a: u8, b: u8) -> Self {
        let mut lut = Self::identity();
        lut.table.swap(a as usize, b as usize);
        lut
    }

    pub fn table(&self) -> &[u8; 256] {
        &self.table
    }

    /// Levels on which this table is claimed strictly increasing.
    pub fn domain(&self) -> &LevelSet {
        &self.domain
    }

    pub fn apply(&self, v: u8) -> u8 {
        self.table[v as usize]
    }

    /// Strictly increasing across the whole table.
    pub fn is_globally_strict(&self) -> bool {
        self.is_strict_on(&LevelSet::all())
    }

    /// Strictly increasing on the table's own domain.
    pub fn is_strict(&self) -> bool {
        self.is_strict_on(&self.domain)
    }

    pub fn is_strict_on(&self, levels: &LevelSet) -> bool {
        let mapped: Vec<u8> = levels.levels().into_iter().map(|v| self.apply(v)).collect();
        mapped.windows(2).all(|w| w[0] < w[1])
    }

    /// Non-decreasing across the whole table.
    pub fn is_monotone(&self) -> bool {
        self.table.windows(2).all(|w| w[0] <= w[1])
    }

    /// One decimal value per line, 256 lines.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(256 * 4);
        for v in self.table {
            writeln!(s, "{v}").expect("writing to a String");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table = [0u8; 256];
        let mut n = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if n == 256 {
                return Err(Error::Lut("more than 256 entries".into()));
            }
            table[n] = line
                .parse()
                .map_err(|_| Error::Lut(format!("line {}: `{line}` is not in 0..=255", lineno + 1)))?;
            n += 1;
        }
        if n != 256 {
            return Err(Error::Lut(format!("expected 256 entries, found {n}")));
        }
        Ok(Self::from_table(table))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// `table[i] = round(255 * (i / 255)^gamma)`. Rounding may merge neighbouring
/// levels; check [`MonotoneLut::is_strict`] or [`MonotoneLut::is_strict_on`].
pub fn gamma_lut(gamma: f64) -> Result<MonotoneLut> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::NonPositiveGamma(gamma));
    }
    let table = std::array::from_fn(|i| {
        let v = 255.0 * (i as f64 / 255.0).powf(gamma);
        (v + 0.5).floor().clamp(0.0, 255.0) as u8
    });
    Ok(MonotoneLut::from_table(table))
}

/// Random table that is strictly increasing on a random domain of 2..=256
/// levels. Deterministic in `seed`.
pub fn random_strict_lut(seed: u64) -> MonotoneLut {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(2..=256usize);
    let domain = LevelSet::from_levels(sample(&mut rng, 256, k).into_iter().map(|v| v as u8));
    strict_lut_from(&domain, &mut rng)
}

/// Random table that is strictly increasing on exactly `levels`, e.g. the
/// levels present in a given image.
pub fn random_strict_lut_on(levels: &LevelSet, seed: u64) -> MonotoneLut {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    strict_lut_from(levels, &mut rng)
}

fn strict_lut_from(domain: &LevelSet, rng: &mut impl Rng) -> MonotoneLut {
    let inputs = domain.levels();
    let mut outputs: Vec<u8> = sample(rng, 256, inputs.len()).into_iter().map(|v| v as u8).collect();
    outputs.sort_unstable();
    // step function through the (input, output) pairs, non-decreasing everywhere
    let mut table = [0u8; 256];
    let mut j = 0usize;
    let mut current = outputs.first().copied().unwrap_or(0);
    for (v, slot) in table.iter_mut().enumerate() {
        if j < inputs.len() && inputs[j] as usize == v {
            current = outputs[j];
            j += 1;
        }
        *slot = current;
    }
    MonotoneLut { table, domain: *domain }
}

pub fn apply_lut(img: &GrayImage, lut: &MonotoneLut) -> GrayImage {
    let data = img.data().iter().map(|&v| lut.apply(v)).collect();
    GrayImage::new(img.width(), img.height(), data).expect("same dimensions as a valid image")
}

/// Random image whose pixels are drawn uniformly from `levels`.
pub fn random_image_on(levels: &LevelSet, width: usize, height: usize, rng: &mut impl Rng) -> Result<GrayImage> {
    let palette = levels.levels();
    if palette.is_empty() {
        return Err(Error::Lut("cannot draw pixels from an empty level set".into()));
    }
    GrayImage::from_fn(width, height, |_, _| palette[rng.random_range(0..palette.len())])
}

pub fn random_image(width: usize, height: usize, seed: u64) -> Result<GrayImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_image_on(&LevelSet::all(), width, height, &mut rng)
}

/// Order-based transform under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderTransform {
    Liot,
    Census,
}

/// Outcome of one invariance trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariance {
    Pass,
    /// Number of output bytes that changed.
    Fail { mismatched: usize },
    /// The table is not strictly increasing on the levels present in the
    /// image, so equality is not expected.
    Inadmissible,
}

/// Compares the transform of `img` with the transform of `lut(img)`.
///
/// With `require_strict` set, tables that merge or reorder levels present in
/// the image are reported as [`Invariance::Inadmissible`] instead of compared.
pub fn check_invariance(img: &GrayImage, lut: &MonotoneLut, transform: OrderTransform, require_strict: bool) -> Invariance {
    if require_strict && !lut.is_strict_on(&LevelSet::of(img)) {
        return Invariance::Inadmissible;
    }
    let remapped = apply_lut(img, lut);
    let mismatched = match transform {
        OrderTransform::Liot => {
            let a = liot_transform(img);
            let b = liot_transform(&remapped);
            a.planes()
                .iter()
                .zip(b.planes().iter())
                .map(|(p, q)| p.iter().zip(q).filter(|(x, y)| x != y).count())
                .sum()
        }
        OrderTransform::Census => {
            let a = census_transform(img);
            let b = census_transform(&remapped);
            a.data().iter().zip(b.data()).filter(|(x, y)| x != y).count()
        }
    };
    if mismatched == 0 {
        Invariance::Pass
    } else {
        Invariance::Fail { mismatched }
    }
}
