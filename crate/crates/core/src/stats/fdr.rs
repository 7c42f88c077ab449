use serde::{Deserialize, Serialize};

use super::StatsError;

pub const DEFAULT_ALPHA: f64 = 0.05;

/// A p-value after Benjamini–Hochberg adjustment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdjustedOutcome {
    pub raw_p: f64,
    pub q_value: f64,
    /// 1-based position in ascending p order (ties by input position).
    pub rank_index: usize,
    pub rejected: bool,
}

/// Benjamini–Hochberg step-up adjustment; output is in input order.
///
/// With ascending `p_(1) <= .. <= p_(m)`, `q_(i) = min_{j >= i} min(m p_(j) / j, 1)`
/// and the hypotheses `1..=k` are rejected for the largest `k` with
/// `p_(k) <= k α / m`.
pub fn bh_adjust(p_values: &[f64], alpha: f64) -> Result<Vec<AdjustedOutcome>, StatsError> {
    if p_values.is_empty() {
        return Err(StatsError::Empty);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::OutOfRangeAlpha(alpha));
    }
    if let Some(&bad) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(StatsError::OutOfRangeP(bad));
    }

    let m = p_values.len();
    let mf = m as f64;
    let mut order: Vec<usize> = (0..m).collect();
    // stable: equal p keep input order
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));

    let mut q_sorted = vec![0.0; m];
    let mut running = 1.0f64;
    for pos in (0..m).rev() {
        let i = (pos + 1) as f64;
        let candidate = (mf * p_values[order[pos]] / i).min(1.0);
        running = running.min(candidate);
        q_sorted[pos] = running;
    }

    // `p·m <= k·α` with a relative slack of 1e-12 so that decimal boundary
    // cases such as p = kα/m are not lost to rounding.
    let k = (0..m)
        .rev()
        .find(|&pos| p_values[order[pos]] * mf <= (pos + 1) as f64 * alpha * (1.0 + 1e-12))
        .map_or(0, |pos| pos + 1);

    let mut out = vec![
        AdjustedOutcome {
            raw_p: 0.0,
            q_value: 0.0,
            rank_index: 0,
            rejected: false,
        };
        m
    ];
    for (pos, &idx) in order.iter().enumerate() {
        out[idx] = AdjustedOutcome {
            raw_p: p_values[idx],
            q_value: q_sorted[pos],
            rank_index: pos + 1,
            rejected: pos < k,
        };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn all_rejected_at_boundary() {
        let out = bh_adjust(&[0.01, 0.02, 0.03, 0.04, 0.05], 0.05).unwrap();
        for o in &out {
            assert!((o.q_value - 0.05).abs() < 1e-15);
            assert!(o.rejected);
        }
    }

    #[test]
    fn single_unrejected() {
        let out = bh_adjust(&[1.0], 0.05).unwrap();
        assert_eq!(out[0].q_value, 1.0);
        assert!(!out[0].rejected);
    }

    #[test]
    fn raw_below_alpha_but_nothing_rejected() {
        let out = bh_adjust(&[0.04, 0.9], 0.05).unwrap();
        assert!((out[0].q_value - 0.08).abs() < 1e-15);
        assert_eq!(out[1].q_value, 0.9);
        assert!(out.iter().all(|o| !o.rejected));
    }

    #[test]
    fn input_order_and_rank_ties() {
        let out = bh_adjust(&[0.3, 0.1, 0.1], 0.05).unwrap();
        assert_eq!(out[1].rank_index, 1);
        assert_eq!(out[2].rank_index, 2);
        assert_eq!(out[0].rank_index, 3);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(bh_adjust(&[], 0.05), Err(StatsError::Empty));
        assert_eq!(bh_adjust(&[1.2], 0.05), Err(StatsError::OutOfRangeP(1.2)));
        assert!(matches!(bh_adjust(&[f64::NAN], 0.05), Err(StatsError::OutOfRangeP(_))));
        assert_eq!(bh_adjust(&[0.5], 1.0), Err(StatsError::OutOfRangeAlpha(1.0)));
        assert_eq!(bh_adjust(&[0.5], 0.0), Err(StatsError::OutOfRangeAlpha(0.0)));
    }

    proptest! {
        #[test]
        fn adjustment_invariants(ps in prop::collection::vec(0.0f64..=1.0, 1..60), a in 0.001f64..0.3, extra in 0.0f64..0.3) {
            let out = bh_adjust(&ps, a).unwrap();
            let mut by_p: Vec<&AdjustedOutcome> = out.iter().collect();
            by_p.sort_by_key(|o| o.rank_index);
            for o in &out {
                prop_assert!(o.q_value >= o.raw_p - 1e-15);
                prop_assert!(o.q_value <= 1.0);
                if o.rejected {
                    prop_assert!(o.q_value <= a * (1.0 + 1e-9));
                } else {
                    prop_assert!(o.q_value > a * (1.0 - 1e-9));
                }
            }
            for w in by_p.windows(2) {
                prop_assert!(w[0].q_value <= w[1].q_value);
                // rejections form a prefix of the ascending order
                prop_assert!(w[0].rejected || !w[1].rejected);
            }
            let looser = (a + extra).min(0.999);
            let n_strict = out.iter().filter(|o| o.rejected).count();
            let n_loose = bh_adjust(&ps, looser).unwrap().iter().filter(|o| o.rejected).count();
            prop_assert!(n_loose >= n_strict);
        }
    }
}
