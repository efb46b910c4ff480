use thiserror::Error;

/// A symbol that does not belong to a closed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {what} `{token}`")]
pub struct UnknownToken {
    pub what: &'static str,
    pub token: String,
}

impl UnknownToken {
    pub(crate) fn new(what: &'static str, token: impl Into<String>) -> Self {
        UnknownToken {
            what,
            token: token.into(),
        }
    }
}

/// A position in a text input, both components 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}
