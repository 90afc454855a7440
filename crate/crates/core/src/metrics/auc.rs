use crate::error::{Error, Result};
use crate::image::BinaryMask;

use super::{check_region, ProbabilityMap};

/// Exact ROC AUC over the evaluated region via the Mann-Whitney statistic with
/// average ranks for tied scores. Equal to the trapezoidal ROC area over every
/// distinct threshold.
pub fn auc(pred: &ProbabilityMap, gt: &BinaryMask, fov: Option<&BinaryMask>) -> Result<f64> {
    check_region(gt, &[Some(pred.dimensions()), fov.map(BinaryMask::dimensions)])?;
    let samples: Vec<(f64, bool)> = pred
        .data()
        .iter()
        .zip(gt.data())
        .enumerate()
        .filter(|(i, _)| fov.is_none_or(|f| f.data()[*i]))
        .map(|(_, (&p, &g))| (p, g))
        .collect();
    auc_from_scores(&samples)
}

/// AUC for `(score, is_positive)` pairs.
pub fn auc_from_scores(samples: &[(f64, bool)]) -> Result<f64> {
    let positives = samples.iter().filter(|s| s.1).count() as u64;
    let negatives = samples.len() as u64 - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::DegenerateLabels { positives, negatives });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    // Twice the positive rank sum, kept integral: a tie group spanning ranks
    // start+1..=end has average rank (start + end + 1) / 2.
    let mut twice_rank_sum: u128 = 0;
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len() && sorted[end].0 == sorted[start].0 {
            end += 1;
        }
        let pos_in_group = sorted[start..end].iter().filter(|s| s.1).count() as u128;
        twice_rank_sum += pos_in_group * (start + end + 1) as u128;
        start = end;
    }
    let p = positives as u128;
    // 2U = 2R - P(P+1)
    let twice_u = twice_rank_sum - p * (p + 1);
    Ok(twice_u as f64 / (2 * p * negatives as u128) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_example() {
        let s = [(0.1, false), (0.4, false), (0.35, true), (0.8, true)];
        assert_eq!(auc_from_scores(&s).unwrap(), 0.75);
    }

    #[test]
    fn separated_and_tied() {
        assert_eq!(auc_from_scores(&[(0.1, false), (0.2, false), (0.9, true)]).unwrap(), 1.0);
        assert_eq!(auc_from_scores(&[(0.9, false), (0.1, true)]).unwrap(), 0.0);
        assert_eq!(auc_from_scores(&[(0.5, false), (0.5, true), (0.5, true)]).unwrap(), 0.5);
    }

    #[test]
    fn single_class_is_an_error() {
        assert!(matches!(
            auc_from_scores(&[(0.1, true), (0.3, true)]),
            Err(Error::DegenerateLabels { positives: 2, negatives: 0 })
        ));
        assert!(auc_from_scores(&[]).is_err());
    }

    #[test]
    fn fov_restricts_samples() {
        let pred = ProbabilityMap::new(4, 1, vec![0.1, 0.4, 0.35, 0.8]).unwrap();
        let gt = BinaryMask::new(4, 1, vec![false, false, true, true]).unwrap();
        assert_eq!(auc(&pred, &gt, None).unwrap(), 0.75);
        // dropping the 0.4 negative leaves a perfect ranking
        let fov = BinaryMask::new(4, 1, vec![true, false, true, true]).unwrap();
        assert_eq!(auc(&pred, &gt, Some(&fov)).unwrap(), 1.0);
    }
}
