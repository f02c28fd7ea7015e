//! Two-sample Wilcoxon rank-sum (Mann-Whitney) test.

use serde::{Deserialize, Serialize};

/// Samples at or below this size on both sides get the exact null distribution.
pub const EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankSumResult {
    /// Mann-Whitney U of the first sample.
    pub u: f64,
    /// Normal score of U (tie-corrected, no continuity correction).
    pub z: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("both samples must be non-empty")]
    Empty,
    #[error("samples contain a non-finite value")]
    NonFinite,
}

/// Average ranks (1-based) with ties sharing their mean rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

pub fn rank_sum_test(a: &[f64], b: &[f64]) -> Result<RankSumResult, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::Empty);
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let n = n1 + n2;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let r1: f64 = ranks[..a.len()].iter().sum();
    let u = r1 - n1 * (n1 + 1.0) / 2.0;
    let mean = n1 * n2 / 2.0;

    let mut tie_term = 0.0;
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    for group in sorted.chunk_by(|x, y| x == y) {
        let t = group.len() as f64;
        tie_term += t * t * t - t;
    }
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let z = if var > 0.0 { (u - mean) / var.sqrt() } else { 0.0 };

    if a.len() <= EXACT_LIMIT && b.len() <= EXACT_LIMIT {
        let p = exact_p(&ranks, a.len(), r1);
        return Ok(RankSumResult { u, z, p_value: p, exact: true });
    }
    let p = if var > 0.0 {
        let corrected = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
        libm::erfc(corrected / std::f64::consts::SQRT_2).min(1.0)
    } else {
        1.0
    };
    Ok(RankSumResult { u, z, p_value: p, exact: false })
}

/// Two-sided exact p-value: the share of all size-`n1` subsets of the pooled
/// ranks whose rank sum lies at least as far from its mean as `r1`.
fn exact_p(ranks: &[f64], n1: usize, r1: f64) -> f64 {
    // doubled mid-ranks are integers
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    let mut counts = vec![vec![0.0f64; max_sum + 1]; n1 + 1];
    counts[0][0] = 1.0;
    for &r in &doubled {
        for k in (1..=n1).rev() {
            let (lower, upper) = counts.split_at_mut(k);
            let (prev, cur) = (&lower[k - 1], &mut upper[0]);
            for s in (r..=max_sum).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let total: f64 = counts[n1].iter().sum();
    let centre = n1 as f64 * (ranks.len() as f64 + 1.0);
    let observed = (2.0 * r1 - centre).abs();
    let extreme: f64 = counts[n1].iter().enumerate().filter(|(s, _)| (*s as f64 - centre).abs() >= observed - 1e-9).map(|(_, c)| c).sum();
    (extreme / total).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_share_mean_rank() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn identical_samples_are_not_significant() {
        let a: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let r = rank_sum_test(&a, &a).unwrap();
        assert!(r.p_value > 0.95, "{r:?}");
    }

    #[test]
    fn complete_separation_is_highly_significant() {
        let r = rank_sum_test(&[1.0; 100], &[-1.0; 100]).unwrap();
        assert!(r.p_value < 1e-6, "{r:?}");
        assert_eq!(r.u, 100.0 * 100.0);
    }

    #[test]
    fn smallest_exact_case() {
        // 2 vs 2, fully separated: 2 of the 6 splits are as extreme
        let r = rank_sum_test(&[3.0, 4.0], &[1.0, 2.0]).unwrap();
        assert!(r.exact);
        assert!((r.p_value - 2.0 / 6.0).abs() < 1e-12);
    }
}
