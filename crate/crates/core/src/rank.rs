//! Extended natural numbers used for ranks and play values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A value in ℕ ∪ {∞}.
///
/// The derived ordering places every finite value below [`Rank::Infinity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u64),
    Infinity,
}

/// A total map from (product) vertices to ranks, indexed densely.
pub type Ranking = Vec<Rank>;

impl Rank {
    pub const ZERO: Rank = Rank::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Rank::Infinity)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Rank::Finite(n) => Some(n),
            Rank::Infinity => None,
        }
    }

    /// Adds an edge weight, saturating at infinity.
    ///
    /// Panics if the finite sum overflows `u64`. Inputs are rejected at load
    /// time when the largest reachable value would not fit, so an overflow here
    /// is a broken invariant rather than a recoverable condition.
    pub fn add_weight(self, weight: u64) -> Rank {
        match self {
            Rank::Finite(n) => Rank::Finite(
                n.checked_add(weight)
                    .expect("rank arithmetic overflowed the finite representation"),
            ),
            Rank::Infinity => Rank::Infinity,
        }
    }

    pub fn checked_add_weight(self, weight: u64) -> Option<Rank> {
        match self {
            Rank::Finite(n) => n.checked_add(weight).map(Rank::Finite),
            Rank::Infinity => Some(Rank::Infinity),
        }
    }
}

/// `r + w` with `∞ + w = ∞`.
pub fn rank_add(r: Rank, w: u64) -> Rank {
    r.add_weight(w)
}

impl From<u64> for Rank {
    fn from(n: u64) -> Self {
        Rank::Finite(n)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Rank {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "INF" | "infinity" | "∞" => Ok(Rank::Infinity),
            _ => s.parse().map(Rank::Finite),
        }
    }
}

// JSON: finite ranks are numbers, infinity is the string "inf".
impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(n) => serializer.serialize_u64(*n),
            Rank::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(n) => Ok(Rank::Finite(n)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
