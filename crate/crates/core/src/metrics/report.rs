use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::image::BinaryMask;

use super::{auc_from_scores, check_region, confusion, connectivity, scalar_metrics, Connectivity, ConfusionCounts, ProbabilityMap};

/// Quantities that could not be computed normally and were reported as 0 (or,
/// for the threshold, taken from a single-valued sweep).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Degenerate {
    Se,
    Sp,
    F1,
    Threshold,
    Connectivity,
}

/// Full evaluation record at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub threshold: f64,
    #[serde(flatten)]
    pub counts: ConfusionCounts,
    pub se: f64,
    pub sp: f64,
    pub acc: f64,
    /// Absent when the prediction is already binary.
    pub auc: Option<f64>,
    pub f1: f64,
    pub connectivity: f64,
    pub degenerate_flags: Vec<Degenerate>,
}

impl MetricsReport {
    /// Single-line JSON record.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report is always serializable")
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.counts;
        writeln!(f, "{:<14}{:.6}", "threshold", self.threshold)?;
        writeln!(f, "{:<14}tp={} fp={} fn={} tn={}", "counts", c.tp, c.fp, c.fn_, c.tn)?;
        writeln!(f, "{:<14}{:.6}", "se", self.se)?;
        writeln!(f, "{:<14}{:.6}", "sp", self.sp)?;
        writeln!(f, "{:<14}{:.6}", "acc", self.acc)?;
        match self.auc {
            Some(a) => writeln!(f, "{:<14}{:.6}", "auc", a)?,
            None => writeln!(f, "{:<14}-", "auc")?,
        }
        writeln!(f, "{:<14}{:.6}", "f1", self.f1)?;
        writeln!(f, "{:<14}{:.6}", "connectivity", self.connectivity)?;
        let flags: Vec<String> = self.degenerate_flags.iter().map(|d| format!("{d:?}").to_lowercase()).collect();
        write!(f, "{:<14}{}", "degenerate", if flags.is_empty() { "-".to_string() } else { flags.join(",") })
    }
}

fn restricted(mask: &BinaryMask, fov: Option<&BinaryMask>) -> Result<BinaryMask> {
    match fov {
        Some(f) => mask.and(f),
        None => Ok(mask.clone()),
    }
}

/// Connectivity inside the evaluated region; an empty ground truth there is
/// flagged instead of failing the whole report.
fn region_connectivity(
    pred: &BinaryMask,
    gt: &BinaryMask,
    fov: Option<&BinaryMask>,
    adjacency: Connectivity,
    flags: &mut Vec<Degenerate>,
) -> Result<f64> {
    let pred = restricted(pred, fov)?;
    let gt = restricted(gt, fov)?;
    if gt.count() == 0 {
        flags.push(Degenerate::Connectivity);
        return Ok(0.0);
    }
    connectivity(&pred, &gt, adjacency)
}

fn assemble(
    threshold: f64,
    pred: &BinaryMask,
    gt: &BinaryMask,
    fov: Option<&BinaryMask>,
    auc: Option<f64>,
    adjacency: Connectivity,
    mut flags: Vec<Degenerate>,
) -> Result<MetricsReport> {
    let counts = confusion(pred, gt, fov)?;
    let m = scalar_metrics(&counts)?;
    flags.extend(m.degenerate);
    let connectivity = region_connectivity(pred, gt, fov, adjacency, &mut flags)?;
    Ok(MetricsReport { threshold, counts, se: m.se, sp: m.sp, acc: m.acc, auc, f1: m.f1, connectivity, degenerate_flags: flags })
}

/// Report for an already-binary segmentation; `auc` is left empty and the
/// nominal threshold is 0.5.
pub fn binary_report(
    pred: &BinaryMask,
    gt: &BinaryMask,
    fov: Option<&BinaryMask>,
    adjacency: Connectivity,
) -> Result<MetricsReport> {
    assemble(0.5, pred, gt, fov, None, adjacency, Vec::new())
}

/// Sweeps thresholds at the midpoints between consecutive distinct scores in
/// the evaluated region (foreground iff `score >= threshold`) and reports the
/// one with the highest F1; ties go to the lower threshold. A region holding a
/// single distinct score yields that score as the only candidate and the
/// `threshold` degeneracy flag.
pub fn best_threshold_by_f1(
    pred: &ProbabilityMap,
    gt: &BinaryMask,
    fov: Option<&BinaryMask>,
    adjacency: Connectivity,
) -> Result<MetricsReport> {
    check_region(gt, &[Some(pred.dimensions()), fov.map(BinaryMask::dimensions)])?;
    let mut samples: Vec<(f64, bool)> = pred
        .data()
        .iter()
        .zip(gt.data())
        .enumerate()
        .filter(|(i, _)| fov.is_none_or(|f| f.data()[*i]))
        .map(|(_, (&p, &g))| (p, g))
        .collect();
    let auc = auc_from_scores(&samples)?;
    samples.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    // (value, positives, negatives) per distinct score, ascending
    let mut groups: Vec<(f64, u64, u64)> = Vec::new();
    for &(v, label) in &samples {
        match groups.last_mut() {
            Some(g) if g.0 == v => {
                if label { g.1 += 1 } else { g.2 += 1 }
            }
            _ => groups.push((v, u64::from(label), u64::from(!label))),
        }
    }
    let total_pos: u64 = groups.iter().map(|g| g.1).sum();

    let mut flags = Vec::new();
    let threshold = if groups.len() == 1 {
        flags.push(Degenerate::Threshold);
        groups[0].0
    } else {
        // predicted-positive counts for thresholds just above groups[k]
        let mut above_pos: u64 = total_pos;
        let mut above_neg: u64 = groups.iter().map(|g| g.2).sum();
        let mut best: Option<(usize, u64, u64)> = None; // (k, f1 numerator, f1 denominator)
        for k in 0..groups.len() - 1 {
            above_pos -= groups[k].1;
            above_neg -= groups[k].2;
            let num = 2 * above_pos;
            let den = above_pos + above_neg + total_pos;
            let better = match best {
                None => true,
                Some((_, bn, bd)) => compare_ratio(num, den, bn, bd) == Ordering::Greater,
            };
            if better {
                best = Some((k, num, den));
            }
        }
        let k = best.expect("at least two groups").0;
        midpoint(groups[k].0, groups[k + 1].0)
    };
    let binary = pred.binarize(threshold);
    assemble(threshold, &binary, gt, fov, Some(auc), adjacency, flags)
}

/// Orders `a/b` against `c/d`; a zero denominator counts as the value 0.
fn compare_ratio(a: u64, b: u64, c: u64, d: u64) -> Ordering {
    let (a, b) = if b == 0 { (0, 1) } else { (a, b) };
    let (c, d) = if d == 0 { (0, 1) } else { (c, d) };
    (u128::from(a) * u128::from(d)).cmp(&(u128::from(c) * u128::from(b)))
}

/// Midpoint strictly above `lo`, so `score >= t` selects exactly the scores > `lo`.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo + (hi - lo) / 2.0;
    if m > lo { m } else { hi }
}
