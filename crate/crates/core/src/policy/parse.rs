//! Reader for `.policy` files.
//!
//! ```text
//! output <name> forms {S, A, ...} action <id> [channel audio|video] [reactions {a, b}];
//! trigger <output> as <form> when <condition>;
//! prefer <form> over <form> [for <output>] [unless <condition>];
//! on <event> [if <condition>] do <action> at immediate|endOfDay;
//! conflict <action> with <action>;
//! order AA > A > R > N > S;
//! ```

use std::collections::BTreeSet;

use super::{
    ArgPattern, Channel, Comparison, Condition, Conflict, Eca, Event, FeedbackForm, FeedbackOutput, Literal, Pattern,
    PolicyError, PolicySet, Preference, PromptTime, RuleId, Trigger,
};
use crate::ingest::{Cursor, ParseError, Term};

pub fn parse_policy(text: &str) -> Result<PolicySet, PolicyError> {
    let mut cursor = Cursor::new(text);
    let mut policy = PolicySet::default();
    let mut index = 0;
    while !cursor.at_end() {
        index += 1;
        let id = RuleId {
            index,
            position: cursor.position(),
        };
        let Some(keyword) = cursor.identifier() else {
            return Err(cursor.unexpected("a statement keyword").into());
        };
        match keyword.as_str() {
            "output" => {
                let output = output(&mut cursor, id)?;
                if policy.outputs.contains_key(&output.name) {
                    return Err(PolicyError::DuplicateOutput {
                        position: id.position,
                        name: output.name,
                    });
                }
                policy.outputs.insert(output.name.clone(), output);
            }
            "trigger" => {
                let output = name(&mut cursor, "an output name")?;
                keyword_expected(&mut cursor, "as")?;
                let form = form(&mut cursor)?;
                keyword_expected(&mut cursor, "when")?;
                let when = condition(&mut cursor)?;
                policy.triggers.push(Trigger { id, output, form, when });
            }
            "prefer" => {
                let better = form(&mut cursor)?;
                keyword_expected(&mut cursor, "over")?;
                let worse = form(&mut cursor)?;
                let mut preference = Preference {
                    id,
                    better,
                    worse,
                    output: None,
                    unless: None,
                };
                loop {
                    match peek_keyword(&mut cursor).as_deref() {
                        Some("for") if preference.output.is_none() => {
                            cursor.identifier();
                            preference.output = Some(name(&mut cursor, "an output name")?);
                        }
                        Some("unless") if preference.unless.is_none() => {
                            cursor.identifier();
                            preference.unless = Some(condition(&mut cursor)?);
                        }
                        _ => break,
                    }
                }
                policy.preferences.push(preference);
            }
            "on" => {
                let event = event(&mut cursor)?;
                let mut when = Condition::default();
                if peek_keyword(&mut cursor).as_deref() == Some("if") {
                    cursor.identifier();
                    when = condition(&mut cursor)?;
                }
                keyword_expected(&mut cursor, "do")?;
                let action = name(&mut cursor, "an action name")?;
                keyword_expected(&mut cursor, "at")?;
                let time = prompt_time(&mut cursor)?;
                policy.ecas.push(Eca {
                    id,
                    event,
                    when,
                    action,
                    time,
                });
            }
            "conflict" => {
                let first = name(&mut cursor, "an action name")?;
                keyword_expected(&mut cursor, "with")?;
                let second = name(&mut cursor, "an action name")?;
                policy.conflicts.push(Conflict { id, first, second });
            }
            "order" => {
                let mut forms = vec![form(&mut cursor)?];
                while cursor.eat('>') {
                    forms.push(form(&mut cursor)?);
                }
                let distinct: BTreeSet<FeedbackForm> = forms.iter().copied().collect();
                if forms.len() != FeedbackForm::ALL.len() || distinct.len() != forms.len() {
                    return Err(PolicyError::BadOrder { position: id.position });
                }
                policy.order = forms;
            }
            other => {
                return Err(ParseError::new(id.position, format!("unknown statement `{other}`")).into());
            }
        }
        cursor.expect(';')?;
    }
    policy.check()?;
    Ok(policy)
}

fn peek_keyword(cursor: &mut Cursor<'_>) -> Option<String> {
    let mut probe = cursor.clone();
    probe.identifier()
}

fn keyword_expected(cursor: &mut Cursor<'_>, keyword: &str) -> Result<(), ParseError> {
    let mut probe = cursor.clone();
    match probe.identifier() {
        Some(word) if word == keyword => {
            *cursor = probe;
            Ok(())
        }
        _ => Err(cursor.unexpected(&format!("`{keyword}`"))),
    }
}

fn name(cursor: &mut Cursor<'_>, wanted: &str) -> Result<String, ParseError> {
    cursor.identifier().ok_or_else(|| cursor.unexpected(wanted))
}

fn form(cursor: &mut Cursor<'_>) -> Result<FeedbackForm, PolicyError> {
    cursor.skip_trivia();
    let position = cursor.position();
    let code = name(cursor, "a feedback form")?;
    FeedbackForm::from_code(&code).ok_or(PolicyError::UnknownForm { position, code })
}

fn wildcard(cursor: &mut Cursor<'_>) -> bool {
    cursor.skip_trivia();
    let mut probe = cursor.clone();
    if probe.bump() == Some('_') && !probe.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
        *cursor = probe;
        true
    } else {
        false
    }
}

fn output(cursor: &mut Cursor<'_>, id: RuleId) -> Result<FeedbackOutput, PolicyError> {
    let name = name(cursor, "an output name")?;
    keyword_expected(cursor, "forms")?;
    cursor.expect('{')?;
    let mut forms = BTreeSet::from([form(cursor)?]);
    while cursor.eat(',') {
        forms.insert(form(cursor)?);
    }
    cursor.expect('}')?;
    keyword_expected(cursor, "action")?;
    let action = self::name(cursor, "an action name")?;
    let mut output = FeedbackOutput {
        name,
        forms,
        action,
        channel: Channel::Audio,
        reactions: BTreeSet::new(),
        declared: id,
    };
    loop {
        match peek_keyword(cursor).as_deref() {
            Some("channel") => {
                cursor.identifier();
                let word = self::name(cursor, "`audio` or `video`")?;
                output.channel = match word.as_str() {
                    "audio" => Channel::Audio,
                    "video" => Channel::Video,
                    _ => return Err(ParseError::new(cursor.position(), format!("unknown channel `{word}`")).into()),
                };
            }
            Some("reactions") => {
                cursor.identifier();
                cursor.expect('{')?;
                output.reactions.insert(self::name(cursor, "a reaction name")?);
                while cursor.eat(',') {
                    output.reactions.insert(self::name(cursor, "a reaction name")?);
                }
                cursor.expect('}')?;
            }
            _ => break,
        }
    }
    Ok(output)
}

fn prompt_time(cursor: &mut Cursor<'_>) -> Result<PromptTime, ParseError> {
    match cursor.identifier().as_deref() {
        Some("immediate") => Ok(PromptTime::Immediate),
        Some("endOfDay") => Ok(PromptTime::EndOfDay),
        _ => Err(ParseError::new(cursor.position(), "expected `immediate` or `endOfDay`")),
    }
}

fn event(cursor: &mut Cursor<'_>) -> Result<Event, PolicyError> {
    cursor.skip_trivia();
    let position = cursor.position();
    let kind = name(cursor, "`feedback_form` or `action_observed`")?;
    cursor.expect('(')?;
    let event = match kind.as_str() {
        "feedback_form" => {
            let output = if wildcard(cursor) { None } else { Some(name(cursor, "an output name")?) };
            cursor.expect(',')?;
            let form = if wildcard(cursor) { None } else { Some(form(cursor)?) };
            Event::Feedback { output, form }
        }
        "action_observed" => {
            let action = if wildcard(cursor) { None } else { Some(name(cursor, "an action name")?) };
            cursor.expect(',')?;
            if !wildcard(cursor) && cursor.integer()?.is_none() {
                return Err(cursor.unexpected("`_` or a time").into());
            }
            Event::Observed { action }
        }
        _ => {
            return Err(ParseError::new(position, format!("unknown event `{kind}`")).into());
        }
    };
    cursor.expect(')')?;
    Ok(event)
}

fn condition(cursor: &mut Cursor<'_>) -> Result<Condition, ParseError> {
    if peek_keyword(cursor).as_deref() == Some("true") {
        cursor.identifier();
        return Ok(Condition::default());
    }
    let mut literals = vec![literal(cursor)?];
    while cursor.eat(',') {
        literals.push(literal(cursor)?);
    }
    Ok(Condition(literals))
}

fn literal(cursor: &mut Cursor<'_>) -> Result<Literal, ParseError> {
    let negated = peek_keyword(cursor).as_deref() == Some("not");
    if negated {
        cursor.identifier();
    }
    cursor.skip_trivia();
    let position = cursor.position();
    let predicate = name(cursor, "a fact pattern")?;
    let mut args = Vec::new();
    if cursor.eat('(') {
        args.push(argument(cursor)?);
        while cursor.eat(',') {
            args.push(argument(cursor)?);
        }
        cursor.expect(')')?;
    }
    Ok(Literal {
        negated,
        pattern: Pattern {
            predicate,
            args,
            position,
        },
    })
}

fn argument(cursor: &mut Cursor<'_>) -> Result<ArgPattern, ParseError> {
    if wildcard(cursor) {
        return Ok(ArgPattern::Any);
    }
    cursor.skip_trivia();
    let comparison = match cursor.peek() {
        Some('>') => {
            cursor.bump();
            Some(if cursor.eat('=') { Comparison::AtLeast } else { Comparison::Above })
        }
        Some('<') => {
            cursor.bump();
            Some(if cursor.eat('=') { Comparison::AtMost } else { Comparison::Below })
        }
        Some('!') => {
            cursor.bump();
            cursor.expect('=')?;
            Some(Comparison::Differs)
        }
        _ => None,
    };
    let value = match cursor.integer()? {
        Some(v) => Term::Int(v),
        None => Term::Sym(name(cursor, "a constant")?),
    };
    Ok(match comparison {
        Some(op) => ArgPattern::Compare(op, value),
        None => ArgPattern::Equal(value),
    })
}
