//! Order-based image encodings for thin curvilinear structures (vessels,
//! cracks), the census-transform baseline, contrast perturbation generators
//! and the evaluation protocol used to score segmentations.
//!
//! The central operation is [`liot_transform`], which turns a gray image into
//! four 8-bit planes of directional "brighter than" codes. Its output depends
//! only on the relative order of pixel values, so any strictly increasing
//! contrast change leaves it untouched.

pub mod census;
pub mod container;
pub mod datasets;
mod error;
pub mod image;
pub mod io;
pub mod liot;
pub mod metrics;
mod par;
pub mod perturb;

pub use census::{census_transform, census_transform_with, CensusImage};
pub use error::{Error, Result};
pub use image::{BinaryMask, ColorImage, GrayImage, GrayMode, Resize};
pub use io::LoadedImage;
pub use liot::{liot_transform, liot_transform_naive, liot_transform_with, prepare_and_transform, LiotImage, Side};
pub use par::Execution;

/// Library version, for pinning behaviour in downstream pipelines.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
