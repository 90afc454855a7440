//! Raster file I/O: PNG, binary PGM/PPM, plus GIF and TIFF inputs as found in
//! the public retinal datasets. Only 8-bit gray or RGB content is accepted.

use std::path::Path;

use image::{DynamicImage, ImageFormat, ImageReader};

use crate::error::{Error, Result};
use crate::image::{BinaryMask, ColorImage, GrayImage, GrayMode};

/// A decoded raster with its native channel count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadedImage {
    Gray(GrayImage),
    Color(ColorImage),
}

impl LoadedImage {
    pub fn dimensions(&self) -> (usize, usize) {
        match self {
            LoadedImage::Gray(g) => g.dimensions(),
            LoadedImage::Color(c) => c.dimensions(),
        }
    }

    /// Gray images pass through untouched; color ones are reduced with `mode`.
    pub fn into_gray(self, mode: GrayMode) -> GrayImage {
        match self {
            LoadedImage::Gray(g) => g,
            LoadedImage::Color(c) => c.to_gray(mode),
        }
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<LoadedImage> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    let decoded = reader
        .decode()
        .map_err(|e| Error::UnsupportedFormat(format!("{}: {e}", path.display())))?;
    from_dynamic(decoded, path)
}

fn from_dynamic(img: DynamicImage, path: &Path) -> Result<LoadedImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img {
        DynamicImage::ImageLuma8(buf) => Ok(LoadedImage::Gray(GrayImage::new(w, h, buf.into_raw())?)),
        DynamicImage::ImageRgb8(buf) => Ok(LoadedImage::Color(ColorImage::new(w, h, buf.into_raw())?)),
        // GIF decodes to RGBA; accept it when the alpha channel carries nothing.
        DynamicImage::ImageRgba8(buf) => {
            let raw = buf.into_raw();
            if raw.chunks_exact(4).any(|px| px[3] != 255) {
                return Err(unsupported(path, "translucent alpha channel"));
            }
            let rgb = raw.chunks_exact(4).flat_map(|px| [px[0], px[1], px[2]]).collect();
            Ok(LoadedImage::Color(ColorImage::new(w, h, rgb)?))
        }
        DynamicImage::ImageLumaA8(buf) => {
            let raw = buf.into_raw();
            if raw.chunks_exact(2).any(|px| px[1] != 255) {
                return Err(unsupported(path, "translucent alpha channel"));
            }
            let gray = raw.chunks_exact(2).map(|px| px[0]).collect();
            Ok(LoadedImage::Gray(GrayImage::new(w, h, gray)?))
        }
        other => Err(unsupported(path, &format!("{:?} samples are not 8-bit gray/RGB", other.color()))),
    }
}

fn unsupported(path: &Path, why: &str) -> Error {
    Error::UnsupportedFormat(format!("{}: {why}", path.display()))
}

pub fn load_gray(path: impl AsRef<Path>, mode: GrayMode) -> Result<GrayImage> {
    Ok(load_image(path)?.into_gray(mode))
}

/// Loads an annotation raster; pixels above 127 are foreground.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let gray = load_gray(path, GrayMode::Luma)?;
    Ok(BinaryMask::from_gray(&gray, 127))
}

fn format_for(path: &Path) -> Result<ImageFormat> {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("png") => Ok(ImageFormat::Png),
        Some("pgm" | "ppm" | "pnm") => Ok(ImageFormat::Pnm),
        _ => Err(unsupported(path, "output must be .png, .pgm or .ppm")),
    }
}

fn write(path: &Path, data: &[u8], w: usize, h: usize, color: image::ExtendedColorType) -> Result<()> {
    let format = format_for(path)?;
    image::save_buffer_with_format(path, data, w as u32, h as u32, color, format).map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::UnsupportedFormat(format!("{}: {other}", path.display())),
    })
}

pub fn save_gray(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    write(path.as_ref(), img.data(), img.width(), img.height(), image::ExtendedColorType::L8)
}

pub fn save_color(path: impl AsRef<Path>, img: &ColorImage) -> Result<()> {
    write(path.as_ref(), img.data(), img.width(), img.height(), image::ExtendedColorType::Rgb8)
}

/// Masks are stored as 8-bit gray with values `{0, 255}`.
pub fn save_mask(path: impl AsRef<Path>, mask: &BinaryMask) -> Result<()> {
    save_gray(path, &mask.to_gray())
}
