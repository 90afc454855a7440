//! Raster containers shared by every other module.
//!
//! All rasters are row-major with the origin at the top-left corner: `x` grows
//! rightward, `y` grows downward, so "top" means decreasing `y`.

use crate::error::{Error, Result};

fn check_dims(width: usize, height: usize, channels: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension);
    }
    let expected = width * height * channels;
    if expected != len {
        return Err(Error::BufferLength { expected, got: len });
    }
    Ok(())
}

/// Single-channel 8-bit image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(width, height, 1, data.len())?;
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Maps every value `v` to `255 - v`. Used when the structures of interest
    /// are brighter than their surroundings.
    pub fn invert(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| 255 - v).collect(),
        }
    }

    pub fn flip_horizontal(&self) -> GrayImage {
        let mut data = Vec::with_capacity(self.data.len());
        for row in self.data.chunks_exact(self.width) {
            data.extend(row.iter().rev());
        }
        GrayImage { width: self.width, height: self.height, data }
    }

    pub fn flip_vertical(&self) -> GrayImage {
        let mut data = Vec::with_capacity(self.data.len());
        for row in self.data.chunks_exact(self.width).rev() {
            data.extend_from_slice(row);
        }
        GrayImage { width: self.width, height: self.height, data }
    }
}

/// Interleaved 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ColorImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(width, height, 3, data.len())?;
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn to_gray(&self, mode: GrayMode) -> GrayImage {
        let data = self
            .data
            .chunks_exact(3)
            .map(|px| match mode {
                GrayMode::Green => px[1],
                GrayMode::Luma => luma(px[0], px[1], px[2]),
            })
            .collect();
        GrayImage { width: self.width, height: self.height, data }
    }
}

/// Rec. 601 luma, rounded half-up.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let v = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// How a color image is reduced to one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GrayMode {
    /// Copy the G plane. Retinal images have the best vessel contrast there.
    #[default]
    Green,
    /// `round(0.299 R + 0.587 G + 0.114 B)`.
    Luma,
}

impl std::str::FromStr for GrayMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "green" | "green-channel" => Ok(GrayMode::Green),
            "luma" => Ok(GrayMode::Luma),
            other => Err(Error::Config(format!("unknown gray mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for GrayMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GrayMode::Green => "green",
            GrayMode::Luma => "luma",
        })
    }
}

/// Boolean raster: ground truth, segmentation or field of view.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        check_dims(width, height, 1, data.len())?;
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Pixels strictly above `threshold` become foreground.
    pub fn from_gray(img: &GrayImage, threshold: u8) -> BinaryMask {
        BinaryMask {
            width: img.width,
            height: img.height,
            data: img.data.iter().map(|&v| v > threshold).collect(),
        }
    }

    /// `{false, true}` rendered as `{0, 255}`.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&b| if b { 255 } else { 0 }).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn and(&self, other: &BinaryMask) -> Result<BinaryMask> {
        ensure_same_dims(self.dimensions(), other.dimensions())?;
        Ok(BinaryMask {
            width: self.width,
            height: self.height,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a && b).collect(),
        })
    }
}

pub(crate) fn ensure_same_dims(left: (usize, usize), right: (usize, usize)) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Resampling to a new raster size.
///
/// Intensity images use bilinear interpolation with pixel-center alignment
/// (source coordinate `(dst + 0.5) * scale - 0.5`, clamped to the image) and
/// round-half-up. Masks use nearest neighbour so they stay strictly boolean.
pub trait Resize: Sized {
    fn resize(&self, width: usize, height: usize) -> Result<Self>;
}

impl Resize for GrayImage {
    fn resize(&self, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        let data = bilinear(&self.data, self.width, self.height, 1, width, height);
        Ok(GrayImage { width, height, data })
    }
}

impl Resize for ColorImage {
    fn resize(&self, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        let data = bilinear(&self.data, self.width, self.height, 3, width, height);
        Ok(ColorImage { width, height, data })
    }
}

impl Resize for BinaryMask {
    fn resize(&self, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        let xs: Vec<usize> = (0..width).map(|x| nearest_index(x, self.width, width)).collect();
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            let sy = nearest_index(y, self.height, height);
            let row = &self.data[sy * self.width..(sy + 1) * self.width];
            data.extend(xs.iter().map(|&sx| row[sx]));
        }
        Ok(BinaryMask { width, height, data })
    }
}

/// `floor((dst + 0.5) * src_len / dst_len)`, in exact integer arithmetic.
fn nearest_index(dst: usize, src_len: usize, dst_len: usize) -> usize {
    (((2 * dst + 1) * src_len) / (2 * dst_len)).min(src_len - 1)
}

struct Tap {
    lo: usize,
    hi: usize,
    frac: f64,
}

fn taps(src_len: usize, dst_len: usize) -> Vec<Tap> {
    let scale = src_len as f64 / dst_len as f64;
    let max = (src_len - 1) as f64;
    (0..dst_len)
        .map(|d| {
            let s = ((d as f64 + 0.5) * scale - 0.5).clamp(0.0, max);
            let lo = s.floor() as usize;
            let hi = (lo + 1).min(src_len - 1);
            Tap { lo, hi, frac: s - lo as f64 }
        })
        .collect()
}

fn bilinear(src: &[u8], sw: usize, sh: usize, channels: usize, dw: usize, dh: usize) -> Vec<u8> {
    let xt = taps(sw, dw);
    let yt = taps(sh, dh);
    let mut out = Vec::with_capacity(dw * dh * channels);
    for ty in &yt {
        let r0 = &src[ty.lo * sw * channels..(ty.lo + 1) * sw * channels];
        let r1 = &src[ty.hi * sw * channels..(ty.hi + 1) * sw * channels];
        for tx in &xt {
            for c in 0..channels {
                let p00 = f64::from(r0[tx.lo * channels + c]);
                let p01 = f64::from(r0[tx.hi * channels + c]);
                let p10 = f64::from(r1[tx.lo * channels + c]);
                let p11 = f64::from(r1[tx.hi * channels + c]);
                let top = p00 + (p01 - p00) * tx.frac;
                let bottom = p10 + (p11 - p10) * tx.frac;
                let v = top + (bottom - top) * ty.frac;
                out.push((v + 0.5).floor().clamp(0.0, 255.0) as u8);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_buffers() {
        assert!(matches!(GrayImage::new(0, 3, vec![]), Err(Error::ZeroDimension)));
        assert!(matches!(
            GrayImage::new(2, 2, vec![0; 3]),
            Err(Error::BufferLength { expected: 4, got: 3 })
        ));
        assert!(ColorImage::new(1, 1, vec![1, 2]).is_err());
    }

    #[test]
    fn gray_reduction() {
        let c = ColorImage::new(1, 1, vec![10, 20, 30]).unwrap();
        assert_eq!(c.to_gray(GrayMode::Green).data(), &[20]);
        // 2.99 + 11.74 + 3.42 = 18.15
        assert_eq!(c.to_gray(GrayMode::Luma).data(), &[18]);
        let black = ColorImage::new(1, 1, vec![0, 0, 0]).unwrap();
        assert_eq!(black.to_gray(GrayMode::Green).data(), &[0]);
        assert_eq!(black.to_gray(GrayMode::Luma).data(), &[0]);
        assert_eq!(luma(255, 255, 255), 255);
    }

    #[test]
    fn invert_examples() {
        let img = GrayImage::new(3, 1, vec![0, 255, 20]).unwrap();
        assert_eq!(img.invert().data(), &[255, 0, 235]);
        let flat = GrayImage::filled(4, 3, 128).unwrap();
        assert_eq!(flat.invert(), GrayImage::filled(4, 3, 127).unwrap());
    }

    #[test]
    fn resize_dataset_targets() {
        let stare = GrayImage::filled(700, 605, 7).unwrap().resize(554, 479).unwrap();
        assert_eq!(stare.dimensions(), (554, 479));
        assert!(stare.data().iter().all(|&v| v == 7));
        let chase = ColorImage::new(999, 960, vec![1; 999 * 960 * 3]).unwrap();
        assert_eq!(chase.resize(584, 561).unwrap().dimensions(), (584, 561));
        assert!(matches!(stare.resize(0, 4), Err(Error::ZeroDimension)));
    }

    #[test]
    fn mask_identity_resize() {
        let m = BinaryMask::new(2, 2, vec![true, false, false, true]).unwrap();
        assert_eq!(m.resize(2, 2).unwrap(), m);
    }

    #[test]
    fn bilinear_midpoint() {
        // 2x1 -> 4x1: source coords -0.25(clamped 0), 0.25, 0.75, 1.25(clamped 1)
        let img = GrayImage::new(2, 1, vec![0, 100]).unwrap();
        assert_eq!(img.resize(4, 1).unwrap().data(), &[0, 25, 75, 100]);
        // 4x1 -> 2x1: source coords 0.5, 2.5
        let img = GrayImage::new(4, 1, vec![0, 10, 20, 31]).unwrap();
        assert_eq!(img.resize(2, 1).unwrap().data(), &[5, 26]);
    }

    #[test]
    fn flips() {
        let img = GrayImage::new(3, 2, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(img.flip_horizontal().data(), &[3, 2, 1, 6, 5, 4]);
        assert_eq!(img.flip_vertical().data(), &[4, 5, 6, 1, 2, 3]);
    }

    fn arb_color() -> impl Strategy<Value = ColorImage> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h * 3)
                .prop_map(move |d| ColorImage::new(w, h, d).unwrap())
        })
    }

    fn arb_gray() -> impl Strategy<Value = GrayImage> {
        (1usize..16, 1usize..16).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |d| GrayImage::new(w, h, d).unwrap())
        })
    }

    fn arb_mask() -> impl Strategy<Value = BinaryMask> {
        (1usize..16, 1usize..16).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<bool>(), w * h)
                .prop_map(move |d| BinaryMask::new(w, h, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn green_is_g_plane(c in arb_color()) {
            let g = c.to_gray(GrayMode::Green);
            let plane: Vec<u8> = c.data().chunks_exact(3).map(|p| p[1]).collect();
            prop_assert_eq!(g.data(), &plane[..]);
        }

        #[test]
        fn invert_is_involution(img in arb_gray()) {
            prop_assert_eq!(img.invert().invert(), img);
        }

        #[test]
        fn same_size_resize_is_identity(img in arb_gray(), m in arb_mask()) {
            let (w, h) = img.dimensions();
            prop_assert_eq!(img.resize(w, h).unwrap(), img);
            let (w, h) = m.dimensions();
            prop_assert_eq!(m.resize(w, h).unwrap(), m);
        }

        #[test]
        fn mask_resize_keeps_only_source_values(m in arb_mask(), w in 1usize..40, h in 1usize..40) {
            let r = m.resize(w, h).unwrap();
            prop_assert_eq!(r.dimensions(), (w, h));
            // nearest neighbour never invents foreground in an empty mask
            if m.count() == 0 {
                prop_assert_eq!(r.count(), 0);
            }
            if m.count() == m.data().len() {
                prop_assert_eq!(r.count(), w * h);
            }
        }
    }
}
