use serde::{Deserialize, Serialize};

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

/// Quartiles by linear interpolation between order statistics (the inclusive
/// method: position `(n - 1) p` in the sorted sample).
pub fn quartiles(values: &[f64]) -> Result<Quartiles, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    super::check_finite(values)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let at = |p: f64| {
        let h = (sorted.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    };
    Ok(Quartiles {
        q1: at(0.25),
        q2: at(0.5),
        q3: at(0.75),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RhoBand {
    None,
    Weak,
    Moderate,
    Strong,
    Perfect,
}

impl RhoBand {
    pub const ALL: [RhoBand; 5] = [
        RhoBand::None,
        RhoBand::Weak,
        RhoBand::Moderate,
        RhoBand::Strong,
        RhoBand::Perfect,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RhoBand::None => "none",
            RhoBand::Weak => "weak",
            RhoBand::Moderate => "moderate",
            RhoBand::Strong => "strong",
            RhoBand::Perfect => "perfect",
        }
    }
}

/// Lower bounds (on |ρ|) of the moderate and strong bands. `|ρ| = 0` is
/// `none` and `|ρ| = 1` is `perfect` regardless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RhoBands {
    pub moderate: f64,
    pub strong: f64,
}

impl Default for RhoBands {
    fn default() -> Self {
        RhoBands {
            moderate: 0.4,
            strong: 0.7,
        }
    }
}

impl RhoBands {
    pub fn is_valid(&self) -> bool {
        0.0 < self.moderate && self.moderate <= self.strong && self.strong < 1.0
    }
}

pub fn interpret_rho(rho: f64, bands: &RhoBands) -> Result<RhoBand, StatsError> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(StatsError::OutOfRangeRho(rho));
    }
    let r = rho.abs();
    Ok(if r == 0.0 {
        RhoBand::None
    } else if r == 1.0 {
        RhoBand::Perfect
    } else if r < bands.moderate {
        RhoBand::Weak
    } else if r < bands.strong {
        RhoBand::Moderate
    } else {
        RhoBand::Strong
    })
}
