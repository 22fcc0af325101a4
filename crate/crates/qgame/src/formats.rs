//! Text and JSON file formats.
//!
//! All text formats are line oriented: blank lines and anything after `#`
//! are ignored, and every other line holds a name or index followed by one
//! exact rational written as an integer or `num/den`.
//!
//! ```text
//! # game file
//! alpha 7
//! beta 9
//! delta 4
//! epsilon 1
//! theta 5
//! omega 3
//! ```
//!
//! A distribution file holds `index value` lines for indices 1..=64; omitted
//! indices are zero. A completion file holds the ten named independents
//! `p1 p3 p5 p6 p13 p15 p18 p20 p22 p27`. The JSON form of a distribution is
//! `{"p": ["num/den", ...]}` with 64 strings.

use std::str::FromStr;

use qgame_core::epr::{CompletionInput, INDEPENDENT_INDICES};
use qgame_core::game::GameParams;
use qgame_core::joint::{JointDistribution, ENTRIES};
use qgame_core::Rational;
use serde_json::{json, Value};

pub const GAME_FIELDS: [&str; 6] = ["alpha", "beta", "delta", "epsilon", "theta", "omega"];

/// Malformed input, located by 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

/// A significant line split into `key value` with the column of each token.
struct Record<'a> {
    line: usize,
    key: (&'a str, usize),
    value: (&'a str, usize),
}

fn records(text: &str) -> Result<Vec<Record<'_>>, ParseError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut rest = body;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            let column = body.len() - rest.len() + start;
            tokens.push((&tail[..len], raw[..column].chars().count() + 1));
            rest = &tail[len..];
        }
        match tokens.as_slice() {
            [] => {}
            [key, value] => out.push(Record { line, key: *key, value: *value }),
            [key] => {
                return Err(ParseError::at(line, key.1 + key.0.chars().count(), "expected a value after the name"))
            }
            [_, _, extra, ..] => return Err(ParseError::at(line, extra.1, format!("unexpected token '{}'", extra.0))),
        }
    }
    Ok(out)
}

pub fn parse_rational(token: &str) -> Result<Rational, String> {
    if token.starts_with('+') || token.contains("/+") || token.contains("/-") {
        return Err(format!("'{token}' is not an exact rational"));
    }
    Rational::from_str(token).map_err(|e| format!("'{token}' is not an exact rational ({e})"))
}

fn value_of(r: &Record) -> Result<Rational, ParseError> {
    parse_rational(r.value.0).map_err(|m| ParseError::at(r.line, r.value.1, m))
}

/// Fills `names.len()` slots from `name value` records; each name exactly once.
fn named_values(text: &str, names: &[&str], what: &str) -> Result<Vec<Rational>, ParseError> {
    let mut slots: Vec<Option<Rational>> = vec![None; names.len()];
    let mut last_line = 0;
    for r in records(text)? {
        last_line = r.line;
        let Some(k) = names.iter().position(|n| *n == r.key.0) else {
            return Err(ParseError::at(
                r.line,
                r.key.1,
                format!("unknown {what} field '{}' (expected one of {})", r.key.0, names.join(", ")),
            ));
        };
        if slots[k].is_some() {
            return Err(ParseError::at(r.line, r.key.1, format!("duplicate field '{}'", r.key.0)));
        }
        slots[k] = Some(value_of(&r)?);
    }
    let missing: Vec<&str> = names.iter().zip(&slots).filter(|(_, s)| s.is_none()).map(|(n, _)| *n).collect();
    if !missing.is_empty() {
        return Err(ParseError::at(last_line.max(1), 1, format!("missing {what} fields: {}", missing.join(", "))));
    }
    Ok(slots.into_iter().flatten().collect())
}

pub fn parse_game(text: &str) -> Result<GameParams, ParseError> {
    let v = named_values(text, &GAME_FIELDS, "game")?;
    let [a, b, d, e, t, w]: [Rational; 6] = v.try_into().expect("six fields");
    Ok(GameParams::new(a, b, d, e, t, w))
}

pub fn write_game(p: &GameParams) -> String {
    GAME_FIELDS.iter().zip(p.as_array()).map(|(n, v)| format!("{n} {v}\n")).collect()
}

/// Parses the text format, or the JSON form when the first significant
/// character is `{`.
pub fn parse_distribution(text: &str) -> Result<JointDistribution, ParseError> {
    if text.trim_start().starts_with('{') {
        return parse_json_distribution(text);
    }
    let mut entries: Vec<Option<Rational>> = vec![None; ENTRIES];
    for r in records(text)? {
        let index = r
            .key
            .0
            .parse::<usize>()
            .ok()
            .filter(|i| (1..=ENTRIES).contains(i))
            .ok_or_else(|| ParseError::at(r.line, r.key.1, format!("index '{}' is not in 1..=64", r.key.0)))?;
        if entries[index - 1].is_some() {
            return Err(ParseError::at(r.line, r.key.1, format!("duplicate index {index}")));
        }
        entries[index - 1] = Some(value_of(&r)?);
    }
    let entries = entries.into_iter().map(Option::unwrap_or_default).collect();
    Ok(JointDistribution::from_entries(entries).expect("64 entries"))
}

pub fn write_distribution(d: &JointDistribution) -> String {
    d.entries().iter().enumerate().map(|(i, v)| format!("{} {v}\n", i + 1)).collect()
}

pub fn completion_names() -> [String; 10] {
    INDEPENDENT_INDICES.map(|i| format!("p{i}"))
}

/// Values are returned unchecked; range checks happen in [`CompletionInput::new`].
pub fn parse_completion_values(text: &str) -> Result<[Rational; 10], ParseError> {
    let names = completion_names();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let v = named_values(text, &names, "completion")?;
    Ok(v.try_into().expect("ten fields"))
}

pub fn write_completion(input: &CompletionInput) -> String {
    completion_names().iter().zip(input.values()).map(|(n, v)| format!("{n} {v}\n")).collect()
}

pub fn distribution_json(d: &JointDistribution) -> Value {
    json!({ "p": d.entries().iter().map(ToString::to_string).collect::<Vec<_>>() })
}

pub fn parse_json_distribution(text: &str) -> Result<JointDistribution, ParseError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| ParseError::at(e.line().max(1), e.column().max(1), e.to_string()))?;
    distribution_from_json(&value).map_err(|m| ParseError::at(1, 1, m))
}

pub fn distribution_from_json(value: &Value) -> Result<JointDistribution, String> {
    let list = value
        .get("p")
        .and_then(Value::as_array)
        .ok_or("expected an object with a \"p\" array")?;
    if list.len() != ENTRIES {
        return Err(format!("\"p\" holds {} entries, expected 64", list.len()));
    }
    let entries = list
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let s = v.as_str().ok_or_else(|| format!("p[{i}] is not a string"))?;
            parse_rational(s).map_err(|m| format!("p[{i}]: {m}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(JointDistribution::from_entries(entries).expect("64 entries"))
}

/// A [`ParseError`] tagged with the file it came from.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {error}")]
pub struct Located {
    pub path: String,
    pub error: ParseError,
}
