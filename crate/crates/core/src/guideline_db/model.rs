use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GuidelineId;
use crate::error::DbError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Mandatory,
    Required,
    Advisory,
    Unknown,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Mandatory => "mandatory",
            Category::Required => "required",
            Category::Advisory => "advisory",
            Category::Unknown => "unknown",
        }
    }

    /// Category used for deviation rules. Unknown is handled as Required.
    pub fn for_deviation(self) -> Category {
        match self {
            Category::Unknown => Category::Required,
            other => other,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mandatory" => Ok(Category::Mandatory),
            "required" => Ok(Category::Required),
            "advisory" => Ok(Category::Advisory),
            "unknown" | "?" => Ok(Category::Unknown),
            _ => Err(format!("unknown category `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decidability {
    Decidable,
    Undecidable,
    NotApplicable,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    SingleTranslationUnit,
    System,
    Unknown,
}

macro_rules! rationale_sets {
    ($($variant:ident => $long:literal,)*) => {
        /// One of the sixteen rationale-based guideline sets.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum RationaleSet {
            $($variant,)*
        }

        impl RationaleSet {
            pub const ALL: [RationaleSet; 16] = [$(RationaleSet::$variant,)*];

            pub fn code(self) -> &'static str {
                match self {
                    $(RationaleSet::$variant => stringify!($variant),)*
                }
            }

            pub fn long_name(self) -> &'static str {
                match self {
                    $(RationaleSet::$variant => $long,)*
                }
            }
        }

        impl FromStr for RationaleSet {
            type Err = DbError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $(stringify!($variant) => Ok(RationaleSet::$variant),)*
                    _ => Err(DbError::UnknownSet(s.trim().to_string())),
                }
            }
        }
    };
}

rationale_sets! {
    LTLM => "Language/Toolchain/Library Misuse",
    DEVM => "Developer Misreading/Mistyping",
    CTIS => "Compile-Time Issues",
    RTIS => "Run-Time Issues",
    DOCU => "Documentation",
    ENMO => "Encapsulation/Modularization",
    HTDR => "Hard To Do Right",
    EAPI => "Emergent APIs",
    BAPI => "Badly-designed/Obsolete APIs",
    PORT => "Portability",
    CTIL => "Compile-Time Information Loss",
    RTIL => "Run-Time Information Loss",
    TNTI => "Tainted Input",
    IRRC => "Irrelevant Code",
    TYPM => "Types Misuse",
    CSTR => "Code Structuring",
}

impl fmt::Display for RationaleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Parses a comma separated list of set codes. Empty input yields no sets.
pub fn parse_set_list(text: &str) -> Result<Vec<RationaleSet>, DbError> {
    let mut sets = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let set: RationaleSet = part.parse()?;
        if !sets.contains(&set) {
            sets.push(set);
        }
    }
    Ok(sets)
}

/// Classification record for one guideline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guideline {
    pub id: GuidelineId,
    pub kind: super::GuidelineKind,
    /// Effective category: the dataset value unless a recategorization applies.
    pub category: Category,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub recategorized_from: Option<Category>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub disapplied: bool,
    pub decidability: Decidability,
    pub scope: Scope,
    /// One or two sets; for dual members the primary set comes first.
    pub rationale_sets: Vec<RationaleSet>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Guideline {
    pub fn new(
        id: GuidelineId,
        category: Category,
        decidability: Decidability,
        scope: Scope,
        rationale_sets: Vec<RationaleSet>,
    ) -> Self {
        Self {
            id,
            kind: id.kind(),
            category,
            recategorized_from: None,
            disapplied: false,
            decidability,
            scope,
            rationale_sets,
            note: None,
        }
    }

    pub fn in_set(&self, set: RationaleSet) -> bool {
        self.rationale_sets.contains(&set)
    }
}
