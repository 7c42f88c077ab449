use serde::Serialize;
use statrs::distribution::ContinuousCDF;

use super::rank::tie_sizes;
use super::{average_ranks, check_finite, standard_normal, Method, StatsError, TestOutcome};

/// Up to this many non-zero differences the p-value is computed exactly.
pub const EXACT_WILCOXON_MAX_N: usize = 12;

/// Intermediate quantities of a signed-rank test, for diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignedRankDetail {
    /// Non-zero differences `a - b`, in input order.
    pub differences: Vec<f64>,
    /// Average ranks of `|d|`, aligned with `differences`.
    pub ranks: Vec<f64>,
    pub w_plus: f64,
    pub w_minus: f64,
    pub zeros_dropped: usize,
    pub tie_sizes: Vec<usize>,
}

pub fn signed_rank_detail(a: &[f64], b: &[f64]) -> Result<SignedRankDetail, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    check_finite(a)?;
    check_finite(b)?;
    let all: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let differences: Vec<f64> = all.iter().copied().filter(|d| *d != 0.0).collect();
    if differences.is_empty() {
        return Err(StatsError::AllZeroDifferences);
    }
    let magnitudes: Vec<f64> = differences.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&magnitudes);
    let (mut w_plus, mut w_minus) = (0.0, 0.0);
    for (d, r) in differences.iter().zip(&ranks) {
        if *d > 0.0 {
            w_plus += r;
        } else {
            w_minus += r;
        }
    }
    Ok(SignedRankDetail {
        zeros_dropped: all.len() - differences.len(),
        tie_sizes: tie_sizes(&magnitudes),
        differences,
        ranks,
        w_plus,
        w_minus,
    })
}

/// Two-sided Wilcoxon signed-rank test for paired samples.
///
/// Zero differences are dropped and `W = min(W+, W-)`. With at most
/// [`EXACT_WILCOXON_MAX_N`] remaining pairs the p-value is the exact
/// permutation probability over all 2^n sign assignments of the observed
/// (average) ranks; otherwise a normal approximation with tie and continuity
/// correction is used.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<TestOutcome, StatsError> {
    let detail = signed_rank_detail(a, b)?;
    let n = detail.differences.len();
    let w = detail.w_plus.min(detail.w_minus);
    if n <= EXACT_WILCOXON_MAX_N {
        Ok(TestOutcome::new(w, exact_p(&detail.ranks, w), Method::Exact))
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let tie_term: f64 = detail
            .tie_sizes
            .iter()
            .map(|&t| {
                let t = t as f64;
                t * t * t - t
            })
            .sum::<f64>()
            / 48.0;
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
        let dev = ((w - mean).abs() - 0.5).max(0.0);
        let p = if var <= 0.0 {
            1.0
        } else {
            2.0 * standard_normal().sf(dev / var.sqrt())
        };
        Ok(TestOutcome::new(w, p, Method::NormalApprox))
    }
}

/// P(min(W+, W-) <= w) under random signs. Ranks are multiples of ½, so the
/// distribution of doubled W+ is built by an integer subset-sum count.
fn exact_p(ranks: &[f64], w: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    for &r in &doubled {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let w2 = (w * 2.0).round() as usize;
    let hits: u64 = counts
        .iter()
        .enumerate()
        .filter(|(s, _)| (*s).min(total - s) <= w2)
        .map(|(_, c)| c)
        .sum();
    hits as f64 / (1u64 << ranks.len()) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_are_untestable() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(wilcoxon_signed_rank(&a, &a), Err(StatsError::AllZeroDifferences));
    }

    #[test]
    fn shift_by_one_is_exactly_two_over_64() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let b: Vec<f64> = a.iter().map(|x| x + 1.0).collect();
        let out = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(out.statistic, 0.0);
        assert_eq!(out.method, Method::Exact);
        assert!((out.p_value - 0.03125).abs() < 1e-15);
        assert_eq!(wilcoxon_signed_rank(&b, &a).unwrap(), out);
    }

    #[test]
    fn zeros_are_dropped() {
        let d = signed_rank_detail(&[1.0, 5.0, 3.0], &[1.0, 2.0, 4.0]).unwrap();
        assert_eq!(d.zeros_dropped, 1);
        assert_eq!(d.differences, vec![3.0, -1.0]);
        assert_eq!(d.w_plus, 2.0);
        assert_eq!(d.w_minus, 1.0);
    }

    #[test]
    fn normal_approximation_matches_reference() {
        // 15 pairs, no ties: d = 1..15 with signs; scipy.stats.wilcoxon(d,
        // method="approx", correction=True) -> statistic 31.0, p = 0.10551371528970126
        let d: Vec<f64> = (1..=15)
            .map(|i| if [2, 5, 9, 15].contains(&i) { -(i as f64) } else { i as f64 })
            .collect();
        let zeros = vec![0.0; d.len()];
        let out = wilcoxon_signed_rank(&d, &zeros).unwrap();
        assert_eq!(out.method, Method::NormalApprox);
        assert_eq!(out.statistic, 31.0);
        assert!((out.p_value - REF_P).abs() < 1e-9, "p = {}", out.p_value);
    }

    const REF_P: f64 = 0.10551371528970126;
}
