use thiserror::Error;

use crate::ingest::Term;

/// An ordered qualitative scale, least severe level first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scale {
    name: String,
    levels: Vec<String>,
}

impl Scale {
    pub fn new<I, S>(name: impl Into<String>, levels: I) -> Scale
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Scale {
            name: name.into(),
            levels: levels.into_iter().map(Into::into).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    /// Position of `level` on the scale; higher is more severe.
    pub fn rank(&self, level: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == level)
    }

    /// `{ok, mild, moderate, severe}`
    pub fn severity() -> Scale {
        Scale::new("severity", ["ok", "mild", "moderate", "severe"])
    }

    /// `{absent, mild, moderate, severe}`
    pub fn disability() -> Scale {
        Scale::new("disability", ["absent", "mild", "moderate", "severe"])
    }

    /// `{ok, needy, dependent}`
    pub fn dependency() -> Scale {
        Scale::new("dependency", ["ok", "needy", "dependent"])
    }

    /// Values produced by the night-activity rules.
    pub fn sleep() -> Scale {
        Scale::new("sleep", ["ok", "mild", "moderate", "consistent"])
    }

    pub fn builtin(name: &str) -> Option<Scale> {
        match name {
            "severity" => Some(Scale::severity()),
            "disability" => Some(Scale::disability()),
            "dependency" => Some(Scale::dependency()),
            "sleep" => Some(Scale::sleep()),
            _ => None,
        }
    }
}

/// The admissible values of a node and their severity ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueDomain {
    Scale(Scale),
    /// Integer range; `higher_is_worse` fixes which direction is a worsening.
    Range { low: i64, high: i64, higher_is_worse: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("value `{value}` is outside domain {domain}")]
pub struct DomainError {
    pub value: String,
    pub domain: String,
}

impl ValueDomain {
    /// Severity rank of a value: larger means worse.
    pub fn severity(&self, value: &Term) -> Result<i64, DomainError> {
        let rank = match (self, value) {
            (ValueDomain::Scale(scale), Term::Sym(level)) => scale.rank(level).map(|r| r as i64),
            (
                ValueDomain::Range {
                    low,
                    high,
                    higher_is_worse,
                },
                Term::Int(v),
            ) if (low..=high).contains(&v) => Some(if *higher_is_worse { *v } else { -*v }),
            _ => None,
        };
        rank.ok_or_else(|| DomainError {
            value: value.to_string(),
            domain: self.describe(),
        })
    }

    pub fn describe(&self) -> String {
        match self {
            ValueDomain::Scale(scale) => format!("{}{{{}}}", scale.name(), scale.levels().join(",")),
            ValueDomain::Range { low, high, .. } => format!("{{{low}..{high}}}"),
        }
    }
}
