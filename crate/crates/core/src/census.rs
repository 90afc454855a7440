//! Classical 3x3 census transform.
//!
//! The eight neighbours are visited in raster order (NW, N, NE, W, E, SW, S,
//! SE); bit `k` (LSB first) is set iff the center is strictly greater than the
//! `k`-th neighbour. Neighbours outside the image contribute a zero bit.

use crate::image::GrayImage;
use crate::par::{for_each_row, Execution};

/// Neighbour offsets `(dx, dy)` in bit order.
pub const NEIGHBORS: [(isize, isize); 8] =
    [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

/// Single-plane census codes, same dimensions as the source.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CensusImage(GrayImage);

impl CensusImage {
    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn height(&self) -> usize {
        self.0.height()
    }

    pub fn data(&self) -> &[u8] {
        self.0.data()
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.0.get(x, y)
    }

    pub fn as_gray(&self) -> &GrayImage {
        &self.0
    }
}

pub fn census_transform(img: &GrayImage) -> CensusImage {
    census_transform_with(img, Execution::Parallel)
}

pub fn census_transform_with(img: &GrayImage, exec: Execution) -> CensusImage {
    let (w, h) = img.dimensions();
    let mut data = vec![0u8; w * h];
    for_each_row(exec, &mut data, w, |y, out| {
        let row = img.row(y);
        for (bit, &(dx, dy)) in NEIGHBORS.iter().enumerate() {
            let ny = y as isize + dy;
            if ny < 0 || ny as usize >= h {
                continue;
            }
            let nrow = img.row(ny as usize);
            // x range for which x + dx stays inside
            let (lo, hi) = match dx {
                -1 => (1, w),
                1 => (0, w.saturating_sub(1)),
                _ => (0, w),
            };
            for x in lo..hi {
                let nx = (x as isize + dx) as usize;
                out[x] |= u8::from(row[x] > nrow[nx]) << bit;
            }
        }
    });
    CensusImage(GrayImage::new(w, h, data).expect("dimensions come from a valid image"))
}
