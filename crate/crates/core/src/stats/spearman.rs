use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{average_ranks, check_finite, Method, StatsError, TestOutcome};

const MIN_N: usize = 3;
/// Largest sample the exact permutation p-value accepts (10! orderings).
pub const EXACT_SPEARMAN_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SpearmanMethod {
    /// Student t approximation on n − 2 degrees of freedom.
    #[default]
    TApprox,
    /// Exact two-sided p-value over all n! orderings of `y`.
    ExactPermutation,
}

/// Spearman's ρ with a t-approximation p-value. The statistic is ρ.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<TestOutcome, StatsError> {
    spearman_rho_with(x, y, SpearmanMethod::TApprox)
}

/// Spearman's ρ as the Pearson correlation of average ranks.
pub fn spearman_rho_with(x: &[f64], y: &[f64], method: SpearmanMethod) -> Result<TestOutcome, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < MIN_N {
        return Err(StatsError::TooShort { needed: MIN_N, got: n });
    }
    check_finite(x)?;
    check_finite(y)?;

    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let rho = pearson(&rx, &ry).ok_or(StatsError::ConstantInput)?;

    match method {
        SpearmanMethod::TApprox => {
            let df = (n - 2) as f64;
            let p = if rho.abs() >= 1.0 {
                0.0
            } else {
                let t = rho * (df / (1.0 - rho * rho)).sqrt();
                let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
                2.0 * dist.sf(t.abs())
            };
            Ok(TestOutcome::new(rho, p, Method::TApprox))
        }
        SpearmanMethod::ExactPermutation => {
            if n > EXACT_SPEARMAN_MAX_N {
                return Err(StatsError::TooLongForExact {
                    max: EXACT_SPEARMAN_MAX_N,
                    got: n,
                });
            }
            Ok(TestOutcome::new(rho, permutation_p(&rx, &ry), Method::Permutation))
        }
    }
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Two-sided permutation p-value. Ranks are multiples of ½, so doubled ranks
/// are integers and the cross-product sum is compared exactly.
fn permutation_p(rx: &[f64], ry: &[f64]) -> f64 {
    let n = rx.len();
    let dx: Vec<i64> = rx.iter().map(|r| (r * 2.0).round() as i64).collect();
    let mut dy: Vec<i64> = ry.iter().map(|r| (r * 2.0).round() as i64).collect();
    let sum_x: i64 = dx.iter().sum();
    let sum_y: i64 = dy.iter().sum();
    // deviation of n·Σxy from Σx·Σy is proportional to ρ's numerator
    let centered = |ys: &[i64]| -> i64 {
        let sxy: i64 = dx.iter().zip(ys).map(|(a, b)| a * b).sum();
        n as i64 * sxy - sum_x * sum_y
    };
    let observed = centered(&dy).abs();

    let mut extreme: u64 = 0;
    let mut total: u64 = 0;
    // Heap's algorithm, iterative form
    let mut c = vec![0usize; n];
    let mut visit = |ys: &[i64]| {
        total += 1;
        if centered(ys).abs() >= observed {
            extreme += 1;
        }
    };
    visit(&dy);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                dy.swap(0, i);
            } else {
                dy.swap(c[i], i);
            }
            visit(&dy);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    extreme as f64 / total as f64
}
