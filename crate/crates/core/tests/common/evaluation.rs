//! The item evaluation rules applied as written.

use healthgraph::evaluation::Provenance;
use healthgraph::Sign;

/// What the facts say about one indicator (or the item itself).
#[derive(Debug, Clone, Copy)]
pub enum Reading {
    Absent,
    /// Only the current value is known.
    Fresh,
    Better,
    Worse,
    Same,
}

impl Reading {
    pub const ALL: [Reading; 5] = [
        Reading::Absent,
        Reading::Fresh,
        Reading::Better,
        Reading::Worse,
        Reading::Same,
    ];

    pub fn sign(self) -> Option<Sign> {
        match self {
            Reading::Absent => None,
            Reading::Fresh => Some(Sign::Unknown),
            Reading::Better => Some(Sign::Plus),
            Reading::Worse => Some(Sign::Minus),
            Reading::Same => Some(Sign::Zero),
        }
    }

    /// `(previous, current)` severity words that produce this reading.
    pub fn values(self) -> (Option<&'static str>, Option<&'static str>) {
        match self {
            Reading::Absent => (None, None),
            Reading::Fresh => (None, Some("mild")),
            Reading::Better => (Some("moderate"), Some("mild")),
            Reading::Worse => (Some("ok"), Some("severe")),
            Reading::Same => (Some("mild"), Some("mild")),
        }
    }
}

/// Rules (a) to (e) applied as written. `None` means the item is left to
/// be guessed.
pub fn rules(direct: Option<Sign>, effects: &[Sign]) -> Option<(Sign, Provenance)> {
    // (a) a direct differential is used as is
    if let Some(sign) = direct.filter(|s| *s != Sign::Unknown) {
        return Some((sign, Provenance::Observed));
    }
    let any = |s: Sign| effects.contains(&s);
    // (b) "+" prevails when nothing gives "-" or "?"
    if any(Sign::Plus) && !any(Sign::Minus) && !any(Sign::Unknown) {
        return Some((Sign::Plus, Provenance::Inferred));
    }
    // (c) "-" prevails when nothing gives "+" or "?"
    if any(Sign::Minus) && !any(Sign::Plus) && !any(Sign::Unknown) {
        return Some((Sign::Minus, Provenance::Inferred));
    }
    // (d) "=" prevails when it is the only sign produced
    if any(Sign::Zero) && effects.iter().all(|&s| s == Sign::Zero) {
        return Some((Sign::Zero, Provenance::Inferred));
    }
    // (e) further reasoning is needed
    None
}

pub fn push_values(facts: &mut String, predicate: &str, node: &str, reading: Reading) {
    let (previous, current) = reading.values();
    if let Some(v) = current {
        facts.push_str(&format!("{predicate}({node},{v},0).\n"));
    }
    if let Some(v) = previous {
        facts.push_str(&format!("{predicate}({node},{v},1).\n"));
    }
}
