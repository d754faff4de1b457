use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::DbError;

/// Rules carry all compliance information in the source code; directives
/// also depend on process and design artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuidelineKind {
    // Declaration order gives the "directives before rules" ordering.
    Directive,
    Rule,
}

impl GuidelineKind {
    pub fn prefix(self) -> char {
        match self {
            GuidelineKind::Directive => 'D',
            GuidelineKind::Rule => 'R',
        }
    }
}

/// Typed guideline identifier such as `R9.1` or `D4.6`.
///
/// Ordering is directives first, then rules, each by `(series, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GuidelineId {
    kind: GuidelineKind,
    series: u16,
    index: u16,
}

impl GuidelineId {
    pub fn new(kind: GuidelineKind, series: u16, index: u16) -> Result<Self, DbError> {
        if series == 0 || index == 0 {
            return Err(DbError::MalformedId(format!(
                "{}{series}.{index}",
                kind.prefix()
            )));
        }
        Ok(Self {
            kind,
            series,
            index,
        })
    }

    pub const fn rule(series: u16, index: u16) -> Self {
        Self {
            kind: GuidelineKind::Rule,
            series,
            index,
        }
    }

    pub const fn directive(series: u16, index: u16) -> Self {
        Self {
            kind: GuidelineKind::Directive,
            series,
            index,
        }
    }

    pub fn kind(&self) -> GuidelineKind {
        self.kind
    }

    pub fn series(&self) -> u16 {
        self.series
    }

    pub fn index(&self) -> u16 {
        self.index
    }

    pub fn is_directive(&self) -> bool {
        self.kind == GuidelineKind::Directive
    }

    /// Accepts `R9.1`, `D4.6`, `Rule 9.1`, `Dir 4.6` and `Directive 4.6`,
    /// with a case-insensitive prefix.
    pub fn parse(text: &str) -> Result<Self, DbError> {
        let malformed = || DbError::MalformedId(text.to_string());
        let trimmed = text.trim();
        let split = trimmed
            .find(|c: char| c.is_ascii_digit() || c.is_whitespace())
            .ok_or_else(malformed)?;
        let (prefix, rest) = trimmed.split_at(split);
        let kind = match prefix.to_ascii_lowercase().as_str() {
            "r" | "rule" => GuidelineKind::Rule,
            "d" | "dir" | "directive" => GuidelineKind::Directive,
            _ => return Err(malformed()),
        };
        let rest = rest.trim_start();
        // The short form never has a space between prefix and number.
        if rest.len() != trimmed.len() - prefix.len() && prefix.len() == 1 {
            return Err(malformed());
        }
        let (series, index) = rest.split_once('.').ok_or_else(malformed)?;
        let number = |s: &str| -> Result<u16, DbError> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            s.parse().map_err(|_| malformed())
        };
        Self::new(kind, number(series)?, number(index)?).map_err(|_| malformed())
    }
}

impl fmt::Display for GuidelineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}.{}", self.kind.prefix(), self.series, self.index)
    }
}

impl FromStr for GuidelineId {
    type Err = DbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for GuidelineId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GuidelineId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Self::parse(&text).map_err(serde::de::Error::custom)
    }
}
