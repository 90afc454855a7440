//! Segmentation evaluation: confusion counts inside an optional field of view,
//! sensitivity/specificity/accuracy/F1, exact AUC, the component-count
//! connectivity score and F1-optimal thresholding of probability maps.

mod auc;
mod components;
mod report;

pub use auc::{auc, auc_from_scores};
pub use components::{connected_components, connectivity, connectivity_from_counts, Connectivity, Labels};
pub use report::{best_threshold_by_f1, binary_report, Degenerate, MetricsReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::{ensure_same_dims, BinaryMask, GrayImage};

/// Per-pixel foreground scores in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ProbabilityMap {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        if data.len() != width * height {
            return Err(Error::BufferLength { expected: width * height, got: data.len() });
        }
        if let Some(&bad) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidProbability(bad));
        }
        Ok(Self { width, height, data })
    }

    /// 8-bit map scaled by `1/255`.
    pub fn from_gray(img: &GrayImage) -> Self {
        Self {
            width: img.width(),
            height: img.height(),
            data: img.data().iter().map(|&v| f64::from(v) / 255.0).collect(),
        }
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Foreground where `score >= threshold`.
    pub fn binarize(&self, threshold: f64) -> BinaryMask {
        BinaryMask::new(self.width, self.height, self.data.iter().map(|&p| p >= threshold).collect())
            .expect("dimensions already validated")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    fn add(self, o: Self) -> Self {
        Self { tp: self.tp + o.tp, fp: self.fp + o.fp, fn_: self.fn_ + o.fn_, tn: self.tn + o.tn }
    }

    fn tally(&mut self, pred: bool, truth: bool) {
        match (pred, truth) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }
}

pub(crate) fn check_region(gt: &BinaryMask, others: &[Option<(usize, usize)>]) -> Result<()> {
    for dims in others.iter().flatten() {
        ensure_same_dims(gt.dimensions(), *dims)?;
    }
    Ok(())
}

const CHUNK: usize = 1 << 14;

/// Confusion counts over pixels where `fov` is set (everywhere without one).
pub fn confusion(pred: &BinaryMask, gt: &BinaryMask, fov: Option<&BinaryMask>) -> Result<ConfusionCounts> {
    check_region(gt, &[Some(pred.dimensions()), fov.map(BinaryMask::dimensions)])?;
    let count = |start: usize| {
        let end = (start + CHUNK).min(gt.data().len());
        let mut c = ConfusionCounts::default();
        for i in start..end {
            if fov.is_none_or(|f| f.data()[i]) {
                c.tally(pred.data()[i], gt.data()[i]);
            }
        }
        c
    };
    let starts = (0..gt.data().len()).step_by(CHUNK);
    #[cfg(feature = "parallel")]
    let counts = {
        use rayon::prelude::*;
        starts.collect::<Vec<_>>().into_par_iter().map(count).reduce(ConfusionCounts::default, ConfusionCounts::add)
    };
    #[cfg(not(feature = "parallel"))]
    let counts = starts.map(count).fold(ConfusionCounts::default(), ConfusionCounts::add);
    Ok(counts)
}

/// Sensitivity, specificity, accuracy and F1 for a set of counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarMetrics {
    pub se: f64,
    pub sp: f64,
    pub acc: f64,
    pub f1: f64,
    /// Metrics whose denominator was zero; they are reported as 0.
    pub degenerate: Vec<Degenerate>,
}

fn ratio(num: u64, den: u64, flag: Degenerate, flags: &mut Vec<Degenerate>) -> f64 {
    if den == 0 {
        flags.push(flag);
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn scalar_metrics(c: &ConfusionCounts) -> Result<ScalarMetrics> {
    let total = c.total();
    if total == 0 {
        return Err(Error::EmptyEvaluationRegion);
    }
    let mut degenerate = Vec::new();
    let se = ratio(c.tp, c.tp + c.fn_, Degenerate::Se, &mut degenerate);
    let sp = ratio(c.tn, c.tn + c.fp, Degenerate::Sp, &mut degenerate);
    let acc = (c.tp + c.tn) as f64 / total as f64;
    let f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn_, Degenerate::F1, &mut degenerate);
    Ok(ScalarMetrics { se, sp, acc, f1, degenerate })
}
