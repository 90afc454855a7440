//! `LIOT1` on-disk container: the ASCII magic `LIOT`, version byte `0x01`,
//! width and height as little-endian `u32`, then the l, r, t, b planes as raw
//! row-major bytes. Total size is `13 + 4 * width * height`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::liot::LiotImage;

pub const MAGIC: &[u8; 4] = b"LIOT";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 13;

pub fn container_len(width: usize, height: usize) -> usize {
    HEADER_LEN + 4 * width * height
}

pub fn encode(img: &LiotImage) -> Vec<u8> {
    let (w, h) = img.dimensions();
    let mut out = Vec::with_capacity(container_len(w, h));
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(w as u32).to_le_bytes());
    out.extend_from_slice(&(h as u32).to_le_bytes());
    for plane in img.planes() {
        out.extend_from_slice(plane);
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<LiotImage> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Container(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Container("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Container(format!("unsupported version {}", bytes[4])));
    }
    let w = u32::from_le_bytes(bytes[5..9].try_into().expect("4 bytes")) as usize;
    let h = u32::from_le_bytes(bytes[9..13].try_into().expect("4 bytes")) as usize;
    let expected = container_len(w, h);
    if bytes.len() != expected {
        return Err(Error::Container(format!("expected {expected} bytes for {w}x{h}, found {}", bytes.len())));
    }
    let n = w * h;
    let body = &bytes[HEADER_LEN..];
    let planes = std::array::from_fn(|i| body[i * n..(i + 1) * n].to_vec());
    LiotImage::from_planes(w, h, planes)
}

pub fn write_container(path: impl AsRef<Path>, img: &LiotImage) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode(img)).map_err(|e| Error::io(path, e))
}

pub fn read_container(path: impl AsRef<Path>) -> Result<LiotImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}
