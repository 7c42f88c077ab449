use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SmellKind;

/// A subset of {CD, UD, HL}. The empty subset is the non-co-occurring
/// category (NCO).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SmellCombo(u8);

impl SmellCombo {
    pub const NCO: SmellCombo = SmellCombo(0);
    pub const FULL: SmellCombo = SmellCombo(7);

    /// All eight combos in display order: NCO, singletons, pairs, full.
    pub const ALL: [SmellCombo; 8] = [
        SmellCombo(0),
        SmellCombo(1),
        SmellCombo(2),
        SmellCombo(4),
        SmellCombo(3),
        SmellCombo(5),
        SmellCombo(6),
        SmellCombo(7),
    ];

    pub fn from_kinds<I: IntoIterator<Item = SmellKind>>(kinds: I) -> Self {
        SmellCombo(kinds.into_iter().fold(0, |acc, k| acc | k.bit()))
    }

    pub fn is_nco(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, kind: SmellKind) -> bool {
        self.0 & kind.bit() != 0
    }

    pub fn kinds(self) -> impl Iterator<Item = SmellKind> {
        SmellKind::ALL.into_iter().filter(move |k| self.contains(*k))
    }

    pub fn kind_set(self) -> BTreeSet<SmellKind> {
        self.kinds().collect()
    }

    /// Position in [`SmellCombo::ALL`].
    pub fn index(self) -> usize {
        SmellCombo::ALL
            .iter()
            .position(|c| *c == self)
            .expect("every 3-bit value is listed")
    }

    pub fn label(self) -> String {
        if self.is_nco() {
            "NCO".to_string()
        } else {
            self.kinds().map(SmellKind::as_str).collect::<Vec<_>>().join("+")
        }
    }
}

impl fmt::Display for SmellCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for SmellCombo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("nco") {
            return Ok(SmellCombo::NCO);
        }
        let kinds = s
            .split('+')
            .map(|part| part.parse::<SmellKind>().map_err(|_| format!("unknown smell combo `{s}`")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SmellCombo::from_kinds(kinds))
    }
}

impl From<SmellCombo> for String {
    fn from(c: SmellCombo) -> String {
        c.label()
    }
}

impl TryFrom<String> for SmellCombo {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}
