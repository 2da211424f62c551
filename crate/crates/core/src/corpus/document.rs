use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Binary class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Pos,
    Neg,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Pos => 1.0,
            Label::Neg => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Pos => 1,
            Label::Neg => -1,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Pos => Label::Neg,
            Label::Neg => Label::Pos,
        }
    }

    /// `sign(value)` with zero mapped to the positive class.
    pub fn from_decision(value: f64) -> Label {
        if value >= 0.0 {
            Label::Pos
        } else {
            Label::Neg
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Pos => "+1",
            Label::Neg => "-1",
        })
    }
}

impl FromStr for Label {
    type Err = String;

    /// Accepts `+1`, `1`, `-1` and `−1` (U+2212).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "+1" | "1" => Ok(Label::Pos),
            "-1" | "\u{2212}1" => Ok(Label::Neg),
            other => Err(format!("unparseable label `{other}`")),
        }
    }
}

/// A labeled document as a sequence of (lowercased) feature tokens.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub label: Label,
    pub tokens: Vec<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, label: Label, tokens: Vec<String>) -> Self {
        Document {
            id: id.into(),
            label,
            tokens,
        }
    }

    /// Documents without tokens are admitted but flagged by the pipeline.
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}
