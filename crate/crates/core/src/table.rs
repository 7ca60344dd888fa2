//! Per-level dimension tables with their certification status.

use std::fmt;

use serde::{Deserialize, Serialize};

/// How a level's dimension is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelStatus {
    /// The level is zero and the computation contains a containment proof.
    ExactZero,
    /// An exact count from a computation whose truncation is provably complete.
    ExactGraded,
    /// The value stopped moving over `window` consecutive widenings; it is an
    /// upper bound on the true dimension.
    StabilizedUpperBound { window: usize },
    /// A count that was produced without its supporting certificate (for
    /// instance a rewriting system that failed its confluence check).
    Uncertified,
}

impl LevelStatus {
    pub fn is_exact(self) -> bool {
        matches!(self, LevelStatus::ExactZero | LevelStatus::ExactGraded)
    }
}

impl fmt::Display for LevelStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelStatus::ExactZero => write!(f, "exact-zero"),
            LevelStatus::ExactGraded => write!(f, "exact-graded"),
            LevelStatus::StabilizedUpperBound { window } => write!(f, "stabilized-upper-bound({window})"),
            LevelStatus::Uncertified => write!(f, "uncertified"),
        }
    }
}

impl Serialize for LevelStatus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LevelStatus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "exact-zero" => Ok(LevelStatus::ExactZero),
            "exact-graded" => Ok(LevelStatus::ExactGraded),
            "uncertified" => Ok(LevelStatus::Uncertified),
            other => other
                .strip_prefix("stabilized-upper-bound(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|w| w.parse().ok())
                .map(|window| LevelStatus::StabilizedUpperBound { window })
                .ok_or_else(|| serde::de::Error::custom(format!("unknown status `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub m: usize,
    pub dim: usize,
    pub status: LevelStatus,
}

/// Cumulative dimensions `d_m` of a filtered space, one row per level `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationTable {
    /// The defining polynomial, in canonical text form.
    pub f: String,
    /// Which space was measured, e.g. `ext1-self` or `ext1(delta:2)`.
    pub kind: String,
    pub levels: Vec<Level>,
}

impl TruncationTable {
    pub fn new(f: impl Into<String>, kind: impl Into<String>) -> Self {
        TruncationTable { f: f.into(), kind: kind.into(), levels: Vec::new() }
    }

    pub fn push(&mut self, m: usize, dim: usize, status: LevelStatus) {
        self.levels.push(Level { m, dim, status });
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim).collect()
    }

    /// Dimension added at each level: `d_m − d_{m−1}`.
    pub fn per_degree(&self) -> Vec<usize> {
        let d = self.dims();
        (0..d.len()).map(|i| if i == 0 { d[0] } else { d[i].saturating_sub(d[i - 1]) }).collect()
    }

    pub fn all_zero(&self) -> bool {
        self.levels.iter().all(|l| l.dim == 0)
    }

    pub fn all_exact(&self) -> bool {
        self.levels.iter().all(|l| l.status.is_exact())
    }

    /// Aligned three-column text rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {} for f = {}\n", self.kind, self.f);
        out.push_str(&format!("{:>4}  {:>8}  {}\n", "m", "dim", "status"));
        for l in &self.levels {
            out.push_str(&format!("{:>4}  {:>8}  {}\n", l.m, l.dim, l.status));
        }
        out
    }

    /// CSV with header `degree,dim,status`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,dim,status\n");
        for l in &self.levels {
            out.push_str(&format!("{},{},{}\n", l.m, l.dim, l.status));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_strings_round_trip() {
        for s in [
            LevelStatus::ExactZero,
            LevelStatus::ExactGraded,
            LevelStatus::StabilizedUpperBound { window: 3 },
            LevelStatus::Uncertified,
        ] {
            let j = serde_json::to_string(&s).unwrap();
            let back: LevelStatus = serde_json::from_str(&j).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn json_shape() {
        let mut t = TruncationTable::new("x*y", "ext1-self");
        t.push(0, 1, LevelStatus::StabilizedUpperBound { window: 3 });
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["f"], "x*y");
        assert_eq!(v["levels"][0]["m"], 0);
        assert_eq!(v["levels"][0]["dim"], 1);
        assert_eq!(v["levels"][0]["status"], "stabilized-upper-bound(3)");
        assert_eq!(t.per_degree(), vec![1]);
    }
}
