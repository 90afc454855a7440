//! Dataset preparation for the retinal vessel (DRIVE, STARE, CHASEDB1) and
//! pavement crack (CrackTree) benchmarks.
//!
//! Each preset expects `<root>/images`, `<root>/gt` and, for DRIVE,
//! `<root>/fov`; files pair up by their shared stem. Per sample the pipeline is:
//! load, resize (bilinear for images, nearest for masks), gray reduction,
//! optional inversion, ground-truth binarization (`> 127`), then optional disk
//! dilation of the ground truth.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::image::{BinaryMask, GrayImage, GrayMode, Resize};
use crate::io::{self, LoadedImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DatasetName {
    Drive,
    Stare,
    Chasedb1,
    CrackTree,
    Custom,
}

impl std::str::FromStr for DatasetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "drive" => Ok(DatasetName::Drive),
            "stare" => Ok(DatasetName::Stare),
            "chasedb1" | "chase_db1" | "chase" => Ok(DatasetName::Chasedb1),
            "cracktree" => Ok(DatasetName::CrackTree),
            "custom" => Ok(DatasetName::Custom),
            other => Err(Error::UnknownDataset(other.to_string())),
        }
    }
}

/// Train/test split by lexicographic id order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitRule {
    pub train: usize,
    pub test: usize,
    /// The first `test` ids form the test set (DRIVE numbers its test images
    /// 01-20 and training images 21-40).
    pub test_first: bool,
}

impl DatasetName {
    pub fn default_split(self) -> Option<SplitRule> {
        match self {
            DatasetName::Drive => Some(SplitRule { train: 20, test: 20, test_first: true }),
            DatasetName::Stare => Some(SplitRule { train: 10, test: 10, test_first: false }),
            DatasetName::Chasedb1 => Some(SplitRule { train: 20, test: 8, test_first: false }),
            DatasetName::CrackTree => Some(SplitRule { train: 160, test: 46, test_first: false }),
            DatasetName::Custom => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub name: DatasetName,
    pub image_dir: PathBuf,
    pub gt_dir: PathBuf,
    pub fov_dir: Option<PathBuf>,
    pub resize_target: Option<(usize, usize)>,
    pub gray_mode: GrayMode,
    pub invert: bool,
    /// Disk radius in pixels; 0 leaves the ground truth as is.
    pub gt_dilation_radius: usize,
}

/// Preset preprocessing for a known dataset rooted at `root`.
pub fn builtin_spec(name: &str, root: impl AsRef<Path>) -> Result<DatasetSpec> {
    let name: DatasetName = name.parse()?;
    let root = root.as_ref();
    let mut spec = DatasetSpec {
        name,
        image_dir: root.join("images"),
        gt_dir: root.join("gt"),
        fov_dir: None,
        resize_target: None,
        gray_mode: GrayMode::Green,
        invert: false,
        gt_dilation_radius: 0,
    };
    match name {
        DatasetName::Drive => spec.fov_dir = Some(root.join("fov")),
        DatasetName::Stare => spec.resize_target = Some((554, 479)),
        DatasetName::Chasedb1 => spec.resize_target = Some((584, 561)),
        DatasetName::CrackTree => {
            spec.resize_target = Some((512, 512));
            spec.gray_mode = GrayMode::Luma;
            spec.gt_dilation_radius = 4;
        }
        DatasetName::Custom => return Err(Error::UnknownDataset("custom datasets need a config file".into())),
    }
    Ok(spec)
}

impl DatasetSpec {
    /// Parses the flat `key = value` config format. Relative paths are resolved
    /// against `base`. When `name` is a preset its settings are the defaults.
    ///
    /// Keys: `name`, `image_dir`, `gt_dir`, `fov_dir`, `resize` (`WxH` or
    /// `none`), `gray` (`green`/`luma`), `invert`, `gt_dilation_radius`.
    /// Blank lines and `#` comments are ignored.
    pub fn from_config(text: &str, base: &Path) -> Result<DatasetSpec> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
            let k = k.trim().to_string();
            if entries.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("duplicate key `{k}`")));
            }
        }
        let take = |entries: &mut BTreeMap<String, String>, k: &str| entries.remove(k);
        let name: DatasetName = match take(&mut entries, "name") {
            Some(n) => n.parse().map_err(|_| Error::Config(format!("unknown dataset name `{n}`")))?,
            None => DatasetName::Custom,
        };
        let path = |v: String| {
            let p = PathBuf::from(v);
            if p.is_absolute() { p } else { base.join(p) }
        };
        let image_dir = take(&mut entries, "image_dir").ok_or_else(|| Error::Config("missing image_dir".into()))?;
        let gt_dir = take(&mut entries, "gt_dir").ok_or_else(|| Error::Config("missing gt_dir".into()))?;
        let mut spec = match name {
            DatasetName::Custom => DatasetSpec {
                name,
                image_dir: PathBuf::new(),
                gt_dir: PathBuf::new(),
                fov_dir: None,
                resize_target: None,
                gray_mode: GrayMode::Green,
                invert: false,
                gt_dilation_radius: 0,
            },
            preset => {
                let mut s = builtin_spec(&format!("{preset:?}"), base)?;
                s.fov_dir = None;
                s
            }
        };
        spec.image_dir = path(image_dir);
        spec.gt_dir = path(gt_dir);
        if let Some(v) = take(&mut entries, "fov_dir") {
            spec.fov_dir = Some(path(v));
        }
        if let Some(v) = take(&mut entries, "resize") {
            spec.resize_target = parse_size(&v)?;
        }
        if let Some(v) = take(&mut entries, "gray") {
            spec.gray_mode = v.parse()?;
        }
        if let Some(v) = take(&mut entries, "invert") {
            spec.invert = parse_bool(&v)?;
        }
        if let Some(v) = take(&mut entries, "gt_dilation_radius") {
            spec.gt_dilation_radius =
                v.parse().map_err(|_| Error::Config(format!("gt_dilation_radius `{v}` is not a non-negative integer")))?;
        }
        if let Some(k) = entries.keys().next() {
            return Err(Error::Config(format!("unknown key `{k}`")));
        }
        Ok(spec)
    }

    pub fn from_config_file(path: impl AsRef<Path>) -> Result<DatasetSpec> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_config(&text, base)
    }
}

/// Parses `WxH`; `none` means no resizing.
pub fn parse_size(v: &str) -> Result<Option<(usize, usize)>> {
    let v = v.trim();
    if v.eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    let bad = || Error::Config(format!("size `{v}` is not WxH with positive integers"));
    let (w, h) = v.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: usize = w.trim().parse().map_err(|_| bad())?;
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok(Some((w, h)))
}

fn parse_bool(v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("`{v}` is not a boolean"))),
    }
}

/// Euclidean disk dilation: a pixel becomes foreground if some foreground
/// pixel lies within `dx^2 + dy^2 <= radius^2` of it.
pub fn dilate(mask: &BinaryMask, radius: usize) -> BinaryMask {
    if radius == 0 {
        return mask.clone();
    }
    let (w, h) = mask.dimensions();
    let r = radius as isize;
    // half-width of the disk on each row offset
    let spans: Vec<(isize, isize)> = (-r..=r)
        .map(|dy| {
            let rem = (r * r - dy * dy) as usize;
            (dy, rem.isqrt() as isize)
        })
        .collect();
    let mut out = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) {
                continue;
            }
            for &(dy, half) in &spans {
                let ny = y as isize + dy;
                if ny < 0 || ny >= h as isize {
                    continue;
                }
                let lo = (x as isize - half).max(0) as usize;
                let hi = ((x as isize + half) as usize).min(w - 1);
                let row = ny as usize * w;
                out[row + lo..=row + hi].fill(true);
            }
        }
    }
    BinaryMask::new(w, h, out).expect("same dimensions as the input mask")
}

/// One preprocessed sample; image, ground truth and FOV share dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePair {
    pub id: String,
    pub image: GrayImage,
    pub gt: BinaryMask,
    pub fov: Option<BinaryMask>,
}

const IMAGE_EXTENSIONS: &[&str] = &["png", "pgm", "ppm", "pnm", "gif", "tif", "tiff"];

fn list_by_stem(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if !path.is_file() || !ext.is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.as_str())) {
            continue;
        }
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            if out.insert(stem.to_string(), path.clone()).is_some() {
                return Err(Error::Config(format!("two files share the stem `{stem}` in {}", dir.display())));
            }
        }
    }
    Ok(out)
}

struct PendingSample {
    id: String,
    image: PathBuf,
    gt: PathBuf,
    fov: Option<PathBuf>,
}

fn pair_files(spec: &DatasetSpec) -> Result<Vec<PendingSample>> {
    let images = list_by_stem(&spec.image_dir)?;
    let gts = list_by_stem(&spec.gt_dir)?;
    let fovs = spec.fov_dir.as_deref().map(list_by_stem).transpose()?;
    images
        .into_iter()
        .map(|(id, image)| {
            let gt = gts.get(&id).cloned().ok_or_else(|| Error::MissingPair(id.clone()))?;
            let fov = match &fovs {
                Some(f) => Some(f.get(&id).cloned().ok_or_else(|| Error::MissingPair(format!("{id} (fov)")))?),
                None => None,
            };
            Ok(PendingSample { id, image, gt, fov })
        })
        .collect()
}

fn load_mask_resized(path: &Path, target: Option<(usize, usize)>) -> Result<BinaryMask> {
    let mask = io::load_mask(path)?;
    match target {
        Some((w, h)) => mask.resize(w, h),
        None => Ok(mask),
    }
}

fn process(spec: &DatasetSpec, pending: &PendingSample) -> Result<SamplePair> {
    let loaded = io::load_image(&pending.image)?;
    let loaded = match (spec.resize_target, loaded) {
        (None, l) => l,
        (Some((w, h)), LoadedImage::Gray(g)) => LoadedImage::Gray(g.resize(w, h)?),
        (Some((w, h)), LoadedImage::Color(c)) => LoadedImage::Color(c.resize(w, h)?),
    };
    let image = loaded.into_gray(spec.gray_mode);
    let image = if spec.invert { image.invert() } else { image };
    let gt = load_mask_resized(&pending.gt, spec.resize_target)?;
    let gt = dilate(&gt, spec.gt_dilation_radius);
    let fov = pending.fov.as_deref().map(|p| load_mask_resized(p, spec.resize_target)).transpose()?;
    crate::image::ensure_same_dims(image.dimensions(), gt.dimensions())?;
    if let Some(f) = &fov {
        crate::image::ensure_same_dims(image.dimensions(), f.dimensions())?;
    }
    Ok(SamplePair { id: pending.id.clone(), image, gt, fov })
}

/// Lazily prepares samples one at a time in lexicographic id order.
pub fn prepare_iter(spec: &DatasetSpec) -> Result<impl Iterator<Item = Result<SamplePair>> + '_> {
    let pending = pair_files(spec)?;
    Ok(pending.into_iter().map(move |p| process(spec, &p)))
}

/// Prepares every sample, in lexicographic id order. Samples are processed on
/// the worker pool when the `parallel` feature is enabled.
pub fn prepare(spec: &DatasetSpec) -> Result<Vec<SamplePair>> {
    let pending = pair_files(spec)?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pending.par_iter().map(|p| process(spec, p)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    pending.iter().map(|p| process(spec, p)).collect()
}

/// Ids split by `rule`, or `None` when the sample count does not match it.
pub fn split_ids(ids: &[String], rule: SplitRule) -> Option<(&[String], &[String])> {
    if ids.len() != rule.train + rule.test {
        return None;
    }
    Some(if rule.test_first {
        let (test, train) = ids.split_at(rule.test);
        (train, test)
    } else {
        ids.split_at(rule.train)
    })
}

fn id_list(ids: &[String]) -> String {
    let mut s = String::new();
    for id in ids {
        writeln!(s, "{id}").expect("writing to a String");
    }
    s
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `images/`, `gt/`, `fov/` PNGs plus `manifest.txt` (one id per line)
/// under `out`. When the sample count matches the dataset's default split,
/// `train.txt` and `test.txt` are written as well.
pub fn write_prepared(samples: &[SamplePair], name: DatasetName, out: &Path) -> Result<()> {
    for sub in ["images", "gt"] {
        let dir = out.join(sub);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    if samples.iter().any(|s| s.fov.is_some()) {
        let dir = out.join("fov");
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    for s in samples {
        io::save_gray(out.join("images").join(format!("{}.png", s.id)), &s.image)?;
        io::save_mask(out.join("gt").join(format!("{}.png", s.id)), &s.gt)?;
        if let Some(f) = &s.fov {
            io::save_mask(out.join("fov").join(format!("{}.png", s.id)), f)?;
        }
    }
    let ids: Vec<String> = samples.iter().map(|s| s.id.clone()).collect();
    write_text(&out.join("manifest.txt"), &id_list(&ids))?;
    if let Some(rule) = name.default_split() {
        match split_ids(&ids, rule) {
            Some((train, test)) => {
                write_text(&out.join("train.txt"), &id_list(train))?;
                write_text(&out.join("test.txt"), &id_list(test))?;
            }
            None => log::warn!(
                "{} samples do not match the default {}/{} split; no split files written",
                ids.len(),
                rule.train,
                rule.test
            ),
        }
    }
    Ok(())
}
