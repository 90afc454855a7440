//! Local intensity order transform.
//!
//! Every pixel `p` is compared against the eight pixels that lie 1..=8 steps
//! away from it on each axis-aligned side. For side `s` the output byte is
//!
//! ```text
//! code_s(p) = sum over i in 1..=8 of [f(p) > f(neighbor_s(p, i))] << (i - 1)
//! ```
//!
//! so bit 0 (LSB) encodes the nearest neighbour. Comparisons are strict, and a
//! neighbour that falls outside the image contributes a zero bit. The result
//! depends only on the relative order of intensities, which makes it invariant
//! to any strictly increasing remapping of the gray levels.

use crate::image::GrayImage;
use crate::io::LoadedImage;
use crate::par::{for_each_row4, Execution};
use crate::GrayMode;

/// Number of neighbours examined per side; one bit each.
pub const MAX_DISTANCE: usize = 8;

/// One of the four comparison directions. The discriminant is the plane index
/// in a [`LiotImage`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left = 0,
    Right = 1,
    Top = 2,
    Bottom = 3,
}

impl Side {
    /// Plane order of a [`LiotImage`].
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Top, Side::Bottom];

    /// Unit step `(dx, dy)` towards this side, `y` pointing down.
    pub fn step(self) -> (isize, isize) {
        match self {
            Side::Left => (-1, 0),
            Side::Right => (1, 0),
            Side::Top => (0, -1),
            Side::Bottom => (0, 1),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Side::Left => "l",
            Side::Right => "r",
            Side::Top => "t",
            Side::Bottom => "b",
        }
    }
}

/// Four directional code planes in the fixed order left, right, top, bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiotImage {
    width: usize,
    height: usize,
    planes: [Vec<u8>; 4],
}

impl LiotImage {
    pub fn from_planes(width: usize, height: usize, planes: [Vec<u8>; 4]) -> crate::Result<Self> {
        if width == 0 || height == 0 {
            return Err(crate::Error::ZeroDimension);
        }
        for p in &planes {
            if p.len() != width * height {
                return Err(crate::Error::BufferLength { expected: width * height, got: p.len() });
            }
        }
        Ok(Self { width, height, planes })
    }

    fn zeroed(width: usize, height: usize) -> Self {
        let n = width * height;
        Self { width, height, planes: [vec![0; n], vec![0; n], vec![0; n], vec![0; n]] }
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

    pub fn plane(&self, side: Side) -> &[u8] {
        &self.planes[side as usize]
    }

    pub fn planes(&self) -> &[Vec<u8>; 4] {
        &self.planes
    }

    pub fn into_planes(self) -> [Vec<u8>; 4] {
        self.planes
    }

    pub fn plane_image(&self, side: Side) -> GrayImage {
        GrayImage::new(self.width, self.height, self.planes[side as usize].clone())
            .expect("plane length checked at construction")
    }

    /// Plane-major `(4, height, width)` byte layout.
    pub fn to_channel_first(&self) -> Vec<u8> {
        self.planes.concat()
    }
}

/// Fast transform; rows are distributed over the worker pool when the
/// `parallel` feature is on.
pub fn liot_transform(img: &GrayImage) -> LiotImage {
    liot_transform_with(img, Execution::Parallel)
}

pub fn liot_transform_with(img: &GrayImage, exec: Execution) -> LiotImage {
    let (w, h) = img.dimensions();
    let mut out = LiotImage::zeroed(w, h);
    let [l, r, t, b] = &mut out.planes;
    for_each_row4(exec, [l, r, t, b], w, |y, [l, r, t, b]| {
        let row = img.row(y);
        for d in 1..=MAX_DISTANCE.min(w - 1) {
            let shift = d - 1;
            // left: row[x] vs row[x - d]
            for (o, (&c, &n)) in l[d..].iter_mut().zip(row[d..].iter().zip(&row[..w - d])) {
                *o |= u8::from(c > n) << shift;
            }
            // right: row[x] vs row[x + d]
            for (o, (&c, &n)) in r[..w - d].iter_mut().zip(row[..w - d].iter().zip(&row[d..])) {
                *o |= u8::from(c > n) << shift;
            }
        }
        for d in 1..=MAX_DISTANCE {
            let shift = d - 1;
            if y >= d {
                for (o, (&c, &n)) in t.iter_mut().zip(row.iter().zip(img.row(y - d))) {
                    *o |= u8::from(c > n) << shift;
                }
            }
            if y + d < h {
                for (o, (&c, &n)) in b.iter_mut().zip(row.iter().zip(img.row(y + d))) {
                    *o |= u8::from(c > n) << shift;
                }
            }
        }
    });
    out
}

/// Literal per-pixel, per-side, per-distance evaluation of the code formula.
/// Slow on purpose; it is the reference the fast path is checked against.
pub fn liot_transform_naive(img: &GrayImage) -> LiotImage {
    let (w, h) = img.dimensions();
    let mut out = LiotImage::zeroed(w, h);
    for y in 0..h {
        for x in 0..w {
            let center = img.get(x, y);
            for side in Side::ALL {
                let (dx, dy) = side.step();
                let mut code = 0u32;
                for i in 1..=MAX_DISTANCE {
                    let nx = x as isize + dx * i as isize;
                    let ny = y as isize + dy * i as isize;
                    let inside = nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h;
                    if inside && center > img.get(nx as usize, ny as usize) {
                        code += 1 << (i - 1);
                    }
                }
                out.planes[side as usize][y * w + x] = code as u8;
            }
        }
    }
    out
}

/// Gray reduction (for color input), optional inversion for bright
/// structures, then [`liot_transform`].
pub fn prepare_and_transform(img: &LoadedImage, mode: GrayMode, invert: bool) -> LiotImage {
    let gray = match img {
        LoadedImage::Gray(g) => g.clone(),
        LoadedImage::Color(c) => c.to_gray(mode),
    };
    let gray = if invert { gray.invert() } else { gray };
    liot_transform(&gray)
}
