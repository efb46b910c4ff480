//! Differential signs and the single-arc influence function.

use std::fmt;
use std::str::FromStr;

use crate::error::UnknownToken;

/// Outcome of a differential evaluation.
///
/// The derived `Ord` gives `Unknown < Minus < Zero < Plus`, which is the
/// tie-break order used when comparing labelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Unknown,
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub const ALL: [Sign; 4] = [Sign::Plus, Sign::Minus, Sign::Zero, Sign::Unknown];
    /// The three signs a guessed item may take, in enumeration order.
    pub const DETERMINATE: [Sign; 3] = [Sign::Minus, Sign::Zero, Sign::Plus];

    pub fn is_determinate(self) -> bool {
        self != Sign::Unknown
    }

    /// Numeric encoding used in emitted facts: `+1`, `0`, `-1`.
    pub fn as_int(self) -> Option<i64> {
        match self {
            Sign::Plus => Some(1),
            Sign::Zero => Some(0),
            Sign::Minus => Some(-1),
            Sign::Unknown => None,
        }
    }

    pub fn from_int(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            0 => Some(Sign::Zero),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Symbolic differential value: `better`, `worse`, `equal`, `undefined`.
    pub fn as_word(self) -> &'static str {
        match self {
            Sign::Plus => "better",
            Sign::Minus => "worse",
            Sign::Zero => "equal",
            Sign::Unknown => "undefined",
        }
    }

    pub fn from_word(word: &str) -> Option<Sign> {
        match word {
            "better" => Some(Sign::Plus),
            "worse" => Some(Sign::Minus),
            "equal" => Some(Sign::Zero),
            "undefined" => Some(Sign::Unknown),
            _ => None,
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            other => other,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Zero => "=",
            Sign::Unknown => "?",
        })
    }
}

/// Qualitative label of a dependency arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcType {
    Pos,
    Neg,
    InvP,
    InvN,
    Dir,
    Inv,
}

impl ArcType {
    pub const ALL: [ArcType; 6] = [
        ArcType::Pos,
        ArcType::Neg,
        ArcType::InvP,
        ArcType::InvN,
        ArcType::Dir,
        ArcType::Inv,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ArcType::Pos => "pos",
            ArcType::Neg => "neg",
            ArcType::InvP => "invP",
            ArcType::InvN => "invN",
            ArcType::Dir => "dir",
            ArcType::Inv => "inv",
        }
    }
}

impl fmt::Display for ArcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ArcType {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ArcType::ALL
            .into_iter()
            .find(|kind| kind.as_str() == s)
            .ok_or_else(|| UnknownToken::new("arc type", s))
    }
}

/// Sign transferred to the target of a single arc whose source changed by
/// `source`.
///
/// `pos`/`neg` only carry improvements/worsenings in the same direction,
/// `invP`/`invN` only carry them inverted, `dir`/`inv` carry both. A stable
/// source always yields a stable target and an undefined source always yields
/// an undefined target.
pub fn arc_effect(source: Sign, kind: ArcType) -> Sign {
    use ArcType::*;
    use Sign::*;
    match (source, kind) {
        (Zero, _) => Zero,
        (Unknown, _) => Unknown,
        (Plus, Pos | Dir) => Plus,
        (Plus, InvP | Inv) => Minus,
        (Plus, Neg | InvN) => Unknown,
        (Minus, Neg | Dir) => Minus,
        (Minus, InvN | Inv) => Plus,
        (Minus, Pos | InvP) => Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ArcType::*;
    use Sign::*;

    // Rows +, -, =, ? against columns pos, neg, invP, invN, dir, inv.
    const TABLE: [(Sign, [Sign; 6]); 4] = [
        (Plus, [Plus, Unknown, Minus, Unknown, Plus, Minus]),
        (Minus, [Unknown, Minus, Unknown, Plus, Minus, Plus]),
        (Zero, [Zero, Zero, Zero, Zero, Zero, Zero]),
        (Unknown, [Unknown, Unknown, Unknown, Unknown, Unknown, Unknown]),
    ];

    #[test]
    fn matches_influence_table() {
        for (source, row) in TABLE {
            for (kind, expected) in ArcType::ALL.into_iter().zip(row) {
                assert_eq!(arc_effect(source, kind), expected, "({source}, {kind})");
            }
        }
    }

    #[test]
    fn spot_values() {
        assert_eq!(arc_effect(Plus, Pos), Plus);
        assert_eq!(arc_effect(Plus, Neg), Unknown);
        assert_eq!(arc_effect(Zero, Inv), Zero);
        assert_eq!(arc_effect(Unknown, Dir), Unknown);
    }

    #[test]
    fn inverse_kinds_negate_direct_ones() {
        for source in [Plus, Minus] {
            assert_eq!(arc_effect(source, Inv), arc_effect(source, Dir).negate());
            assert_eq!(arc_effect(source.negate(), Inv), arc_effect(source, Dir));
        }
        assert_eq!(arc_effect(Plus, Dir), Plus);
        assert_eq!(arc_effect(Minus, Inv), Plus);
    }

    #[test]
    fn arc_type_tokens_round_trip() {
        for kind in ArcType::ALL {
            assert_eq!(kind.as_str().parse::<ArcType>().unwrap(), kind);
        }
        assert!("Pos".parse::<ArcType>().is_err());
    }

    #[test]
    fn numeric_encoding() {
        for sign in Sign::DETERMINATE {
            assert_eq!(Sign::from_int(sign.as_int().unwrap()), Some(sign));
        }
        assert_eq!(Unknown.as_int(), None);
        assert_eq!(Sign::from_int(2), None);
    }
}
