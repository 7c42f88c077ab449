use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Bucket, PrioritizeError, RankedWarning, Ranker};
use crate::analysis::{run_battery, Battery};

/// Inspection-effort cutoffs, percent of the ranking.
pub const CUTOFFS: [u32; 10] = [10, 20, 30, 40, 50, 60, 70, 80, 90, 100];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutoffMode {
    /// `ceil(x * n / 100)` entries.
    #[default]
    Ceiling,
    /// `floor(x * n / 100)` entries.
    Floor,
}

impl CutoffMode {
    pub fn cutoff(self, x: u32, n: usize) -> usize {
        let scaled = x as usize * n;
        match self {
            CutoffMode::Ceiling => scaled.div_ceil(100),
            CutoffMode::Floor => scaled / 100,
        }
    }
}

impl FromStr for CutoffMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ceiling" | "ceil" => Ok(CutoffMode::Ceiling),
            "floor" => Ok(CutoffMode::Floor),
            other => Err(format!("unknown cutoff mode `{other}` (ceiling or floor)")),
        }
    }
}

impl fmt::Display for CutoffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutoffMode::Ceiling => "ceiling",
            CutoffMode::Floor => "floor",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: u32,
    pub cutoff: usize,
    pub medium: u64,
    pub high: u64,
    pub critical: u64,
}

impl CurvePoint {
    pub fn count(&self, bucket: Bucket) -> u64 {
        match bucket {
            Bucket::Medium => self.medium,
            Bucket::High => self.high,
            Bucket::Critical => self.critical,
            Bucket::None => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffortCurve {
    pub ranker: Ranker,
    pub n: usize,
    pub mode: CutoffMode,
    pub points: Vec<CurvePoint>,
}

impl EffortCurve {
    pub fn last(&self) -> &CurvePoint {
        self.points.last().expect("curves have ten points")
    }
}

/// Smell-prone warnings of each bucket among the first entries at every
/// cutoff.
pub fn effort_curve(ranker: Ranker, ranking: &[RankedWarning], mode: CutoffMode) -> Result<EffortCurve, PrioritizeError> {
    if ranking.is_empty() {
        return Err(PrioritizeError::EmptyRanking);
    }
    let n = ranking.len();
    let mut prefix = vec![[0u64; 4]; n + 1];
    for (k, w) in ranking.iter().enumerate() {
        prefix[k + 1] = prefix[k];
        prefix[k + 1][w.bucket as usize] += 1;
    }
    let points = CUTOFFS
        .iter()
        .map(|&x| {
            let cutoff = mode.cutoff(x, n);
            let c = prefix[cutoff];
            CurvePoint {
                x,
                cutoff,
                medium: c[Bucket::Medium as usize],
                high: c[Bucket::High as usize],
                critical: c[Bucket::Critical as usize],
            }
        })
        .collect();
    Ok(EffortCurve {
        ranker,
        n,
        mode,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketWeights {
    pub medium: u64,
    pub high: u64,
    pub critical: u64,
}

impl Default for BucketWeights {
    fn default() -> Self {
        BucketWeights {
            medium: 5,
            high: 7,
            critical: 9,
        }
    }
}

impl BucketWeights {
    pub fn weight(&self, bucket: Bucket) -> u64 {
        match bucket {
            Bucket::None => 0,
            Bucket::Medium => self.medium,
            Bucket::High => self.high,
            Bucket::Critical => self.critical,
        }
    }
}

/// Cumulative severity weight captured by the first `k` entries, `k = 1..=n`.
pub fn capture_profile(ranking: &[RankedWarning], weights: &BucketWeights) -> Vec<u64> {
    ranking
        .iter()
        .scan(0u64, |acc, w| {
            *acc += weights.weight(w.bucket);
            Some(*acc)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Popt {
    pub value: f64,
    /// Every entry carries the same weight, so all orderings tie and the
    /// value is 1 by convention.
    pub degenerate: bool,
}

pub fn popt_area(ranking: &[RankedWarning]) -> Result<Popt, PrioritizeError> {
    popt_area_weighted(ranking, &BucketWeights::default())
}

/// `1 - (A_opt - A) / (A_opt - A_worst)`, where each area is the sum of the
/// cumulative capture profile and the optimal and worst orderings sort the
/// weights descending and ascending.
pub fn popt_area_weighted(ranking: &[RankedWarning], weights: &BucketWeights) -> Result<Popt, PrioritizeError> {
    if ranking.is_empty() {
        return Err(PrioritizeError::EmptyRanking);
    }
    let area = |ws: &[u64]| -> u128 {
        ws.iter()
            .scan(0u128, |acc, &w| {
                *acc += w as u128;
                Some(*acc)
            })
            .sum()
    };
    let mut ws: Vec<u64> = ranking.iter().map(|w| weights.weight(w.bucket)).collect();
    let actual = area(&ws);
    ws.sort_unstable();
    let worst = area(&ws);
    ws.reverse();
    let best = area(&ws);
    if best == worst {
        return Ok(Popt {
            value: 1.0,
            degenerate: true,
        });
    }
    Ok(Popt {
        value: 1.0 - (best - actual) as f64 / (best - worst) as f64,
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct H4Key {
    pub ranker_a: Ranker,
    pub ranker_b: Ranker,
    pub bucket: Bucket,
}

impl fmt::Display for H4Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vs {} ({})", self.ranker_a, self.ranker_b, self.bucket)
    }
}

/// Signed-rank test of every curve pair and bucket over the ten paired
/// cutoff captures, adjusted as one family.
pub fn compare_rankers(curves: &[EffortCurve], alpha: f64) -> Result<Battery<H4Key>, PrioritizeError> {
    if curves.len() < 2 {
        return Err(PrioritizeError::InsufficientData(format!(
            "comparing rankers needs at least 2 curves, got {}",
            curves.len()
        )));
    }
    let first = &curves[0];
    if let Some(odd) = curves
        .iter()
        .find(|c| c.n != first.n || c.last() != first.last() || c.mode != first.mode)
    {
        return Err(PrioritizeError::InsufficientData(format!(
            "curves {} and {} do not rank the same warnings",
            first.ranker, odd.ranker
        )));
    }
    let mut items = Vec::new();
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            for bucket in Bucket::SCORED {
                let series = |c: &EffortCurve| c.points.iter().map(|p| p.count(bucket) as f64).collect();
                let key = H4Key {
                    ranker_a: a.ranker.clone(),
                    ranker_b: b.ranker.clone(),
                    bucket,
                };
                items.push((key, Ok((series(a), series(b)))));
            }
        }
    }
    Ok(run_battery(items, alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::TestStatus;
    use crate::ingest::SourceTool;

    fn ranking(buckets: &[Bucket]) -> Vec<RankedWarning> {
        buckets
            .iter()
            .enumerate()
            .map(|(i, &bucket)| RankedWarning {
                tool: SourceTool::Pmd,
                rule_id: format!("r{i}"),
                package: None,
                key: 0.0,
                bucket,
            })
            .collect()
    }

    #[test]
    fn cutoffs() {
        assert_eq!(CutoffMode::Ceiling.cutoff(10, 7), 1);
        assert_eq!(CutoffMode::Floor.cutoff(10, 7), 0);
        assert_eq!(CutoffMode::Ceiling.cutoff(30, 10), 3);
        assert_eq!(CutoffMode::Ceiling.cutoff(100, 7), 7);
        assert_eq!(CutoffMode::Floor.cutoff(100, 7), 7);
    }

    #[test]
    fn curve_examples() {
        let mut buckets = vec![Bucket::Critical];
        buckets.extend([Bucket::None; 9]);
        let curve = effort_curve(Ranker::Optimal, &ranking(&buckets), CutoffMode::Ceiling).unwrap();
        assert_eq!(curve.points[0].critical, 1);
        assert_eq!(curve.points.len(), 10);
        let mixed = [Bucket::None, Bucket::High, Bucket::Medium, Bucket::Medium, Bucket::Critical];
        let curve = effort_curve(Ranker::Severity, &ranking(&mixed), CutoffMode::Ceiling).unwrap();
        assert_eq!((curve.last().medium, curve.last().high, curve.last().critical), (2, 1, 1));
        assert_eq!(curve.points[0].cutoff, 1);
        assert_eq!(
            effort_curve(Ranker::Severity, &[], CutoffMode::Ceiling),
            Err(PrioritizeError::EmptyRanking)
        );
    }

    #[test]
    fn popt_examples() {
        let best = [Bucket::Critical, Bucket::High, Bucket::Medium, Bucket::None];
        assert_eq!(popt_area(&ranking(&best)).unwrap().value, 1.0);
        let mut worst = best;
        worst.reverse();
        assert_eq!(popt_area(&ranking(&worst)).unwrap().value, 0.0);
        let flat = popt_area(&ranking(&[Bucket::High; 5])).unwrap();
        assert!(flat.degenerate);
        assert_eq!(flat.value, 1.0);
        assert_eq!(popt_area(&[]), Err(PrioritizeError::EmptyRanking));
    }

    #[test]
    fn h4_examples() {
        let mut buckets = vec![Bucket::Critical; 30];
        buckets.extend([Bucket::Medium; 10]);
        buckets.extend([Bucket::None; 60]);
        let opt = effort_curve(Ranker::Optimal, &ranking(&buckets), CutoffMode::Ceiling).unwrap();
        buckets.reverse();
        let rev = effort_curve(Ranker::Named("reverse".into()), &ranking(&buckets), CutoffMode::Ceiling).unwrap();

        let same = compare_rankers(&[opt.clone(), opt.clone()], 0.05).unwrap();
        assert!(same.entries.iter().all(|e| e.status == TestStatus::NotTestable));

        let battery = compare_rankers(&[opt.clone(), rev], 0.05).unwrap();
        let critical = battery.entries.iter().find(|e| e.key.bucket == Bucket::Critical).unwrap();
        assert!(critical.rejected());
        assert_eq!(critical.outcome.unwrap().p_value, 2.0 / 512.0);

        assert!(matches!(
            compare_rankers(&[opt], 0.05),
            Err(PrioritizeError::InsufficientData(_))
        ));
    }
}
