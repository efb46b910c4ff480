use thiserror::Error;

use super::fact::{is_known_predicate, Fact, FactBase, Term};
use crate::error::Position;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{position}: {message}")]
pub struct ParseError {
    pub position: Position,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: Position, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

/// Non-fatal diagnostics produced while reading facts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IngestWarning {
    UnknownPredicate {
        position: Position,
        predicate: String,
        arity: usize,
    },
}

impl std::fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IngestWarning::UnknownPredicate {
                position,
                predicate,
                arity,
            } => write!(f, "{position}: unknown predicate {predicate}/{arity}"),
        }
    }
}

/// Character cursor with line/column tracking and `%` line comments.
#[derive(Clone)]
pub(crate) struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    position: Position,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            position: Position { line: 1, column: 1 },
        }
    }

    pub(crate) fn position(&self) -> Position {
        self.position
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.position.line += 1;
            self.position.column = 1;
        } else {
            self.position.column += 1;
        }
        Some(c)
    }

    pub(crate) fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    pub(crate) fn eat(&mut self, expected: char) -> bool {
        self.skip_trivia();
        if self.peek() == Some(expected) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, expected: char) -> Result<(), ParseError> {
        if self.eat(expected) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{expected}`")))
        }
    }

    pub(crate) fn unexpected(&mut self, wanted: &str) -> ParseError {
        self.skip_trivia();
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        ParseError::new(self.position, format!("expected {wanted}, found {found}"))
    }

    /// `[a-zA-Z][a-zA-Z0-9_]*`, after skipping trivia.
    pub(crate) fn identifier(&mut self) -> Option<String> {
        self.skip_trivia();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return None,
        }
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                name.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Some(name)
    }

    /// Optionally signed decimal integer, after skipping trivia.
    pub(crate) fn integer(&mut self) -> Result<Option<i64>, ParseError> {
        self.skip_trivia();
        let start = self.position;
        let negative = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some(c) if c.is_ascii_digit() => false,
            _ => return Ok(None),
        };
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(ParseError::new(start, "expected digits after `-`"));
        }
        let text = if negative { format!("-{digits}") } else { digits };
        text.parse::<i64>()
            .map(Some)
            .map_err(|_| ParseError::new(start, format!("integer `{text}` out of range")))
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.peek().is_none()
    }
}

fn term(cursor: &mut Cursor<'_>) -> Result<Term, ParseError> {
    if let Some(value) = cursor.integer()? {
        return Ok(Term::Int(value));
    }
    let Some(name) = cursor.identifier() else {
        return Err(cursor.unexpected("a term"));
    };
    if cursor.eat('(') {
        let args = arguments(cursor)?;
        Ok(Term::Compound(name, args))
    } else {
        Ok(Term::Sym(name))
    }
}

// After the opening parenthesis.
fn arguments(cursor: &mut Cursor<'_>) -> Result<Vec<Term>, ParseError> {
    let mut args = vec![term(cursor)?];
    loop {
        if cursor.eat(',') {
            args.push(term(cursor)?);
        } else if cursor.eat(')') {
            return Ok(args);
        } else {
            return Err(cursor.unexpected("`,` or `)`"));
        }
    }
}

/// Parses one `pred(args).` statement; `None` at end of input.
pub(crate) fn statement(cursor: &mut Cursor<'_>) -> Result<Option<(Position, Fact)>, ParseError> {
    if cursor.at_end() {
        return Ok(None);
    }
    let start = cursor.position();
    let Some(predicate) = cursor.identifier() else {
        return Err(cursor.unexpected("a predicate name"));
    };
    let args = if cursor.eat('(') { arguments(cursor)? } else { Vec::new() };
    cursor.expect('.')?;
    Ok(Some((start, Fact { predicate, args })))
}

/// Parses facts and reports predicates outside the known vocabulary.
pub fn parse_facts_with_warnings(text: &str) -> Result<(FactBase, Vec<IngestWarning>), ParseError> {
    let mut cursor = Cursor::new(text);
    let mut base = FactBase::new();
    let mut warnings = Vec::new();
    while let Some((position, fact)) = statement(&mut cursor)? {
        if !is_known_predicate(&fact.predicate, fact.arity()) {
            warnings.push(IngestWarning::UnknownPredicate {
                position,
                predicate: fact.predicate.clone(),
                arity: fact.arity(),
            });
        }
        base.insert(fact);
    }
    Ok((base, warnings))
}

/// Parses a `.facts` document: one ground fact per `pred(args).` statement.
pub fn parse_facts(text: &str) -> Result<FactBase, ParseError> {
    parse_facts_with_warnings(text).map(|(base, _)| base)
}

/// Like [`parse_facts`] but over raw bytes; invalid UTF-8 is a positioned error.
pub fn parse_facts_bytes(bytes: &[u8]) -> Result<FactBase, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_facts(text),
        Err(err) => {
            let valid = std::str::from_utf8(&bytes[..err.valid_up_to()]).unwrap_or_default();
            let line = valid.matches('\n').count() + 1;
            let column = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(ParseError::new(Position { line, column }, "invalid UTF-8"))
        }
    }
}

/// Serializes facts one per line; `parse_facts` reads the output back exactly.
pub fn emit_facts(base: &FactBase) -> String {
    let mut out = String::new();
    for fact in base.iter() {
        out.push_str(&fact.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_observation() {
        let base = parse_facts("obsInd(wgt,72,0).").unwrap();
        assert_eq!(base.len(), 1);
        let fact = &base.facts()[0];
        assert_eq!(fact.predicate, "obsInd");
        assert_eq!(fact.arity(), 3);
        assert_eq!(fact.int(1), Some(72));
    }

    #[test]
    fn empty_input() {
        assert!(parse_facts("").unwrap().is_empty());
        assert!(parse_facts("  % only a comment\n\n").unwrap().is_empty());
        assert_eq!(emit_facts(&FactBase::new()), "");
    }

    #[test]
    fn unbalanced_statement_is_positioned() {
        let err = parse_facts("in(3,4,17").unwrap_err();
        assert_eq!(err.position.line, 1);
        assert!(err.message.contains("end of input"), "{err}");
    }

    #[test]
    fn missing_period_reports_following_line() {
        let err = parse_facts("wall(1,1).\nwall(1,2)\nwall(1,3).").unwrap_err();
        assert_eq!(err.position.line, 3);
    }

    #[test]
    fn comments_negatives_and_compounds() {
        let text = "% header\nilab(item_3,-1). % trailing\nat(loc(3,4),17).\nnight.\n";
        let base = parse_facts(text).unwrap();
        assert_eq!(base.len(), 3);
        assert_eq!(base.facts()[0].int(1), Some(-1));
        assert_eq!(emit_facts(&base), "ilab(item_3,-1).\nat(loc(3,4),17).\nnight.\n");
    }

    #[test]
    fn unknown_predicates_are_warnings() {
        let (base, warnings) = parse_facts_with_warnings("mood(eve,happy).\nhour(3).").unwrap();
        assert_eq!(base.len(), 2);
        assert_eq!(warnings.len(), 1);
        assert!(matches!(&warnings[0], IngestWarning::UnknownPredicate { predicate, arity: 2, .. } if predicate == "mood"));
    }

    #[test]
    fn overflow_and_bad_utf8() {
        assert!(parse_facts("x(99999999999999999999).").is_err());
        let err = parse_facts_bytes(b"a(1).\nb(\xff).").unwrap_err();
        assert_eq!(err.position, Position { line: 2, column: 3 });
    }
}
