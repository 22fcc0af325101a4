//! Report rendering: ordered key/value documents printed as text or JSON.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use qgame_core::joint::JointDistribution;
use qgame_core::Rational;
use serde_json::{Map, Value as Json};

use crate::formats::{distribution_json, write_distribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberStyle {
    #[default]
    Exact,
    /// Six significant digits.
    Decimal,
}

impl NumberStyle {
    pub fn render(self, q: &Rational) -> String {
        match self {
            NumberStyle::Exact => q.to_string(),
            NumberStyle::Decimal => significant(q, 6),
        }
    }
}

/// `q` rounded half away from zero to `digits` significant digits, in plain
/// positional notation.
pub fn significant(q: &Rational, digits: u32) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let a = q.abs();
    // Smallest e with a < 10^(e+1); then 10^e <= a.
    let mut e: i32 = 0;
    while a >= pow10(e + 1) {
        e += 1;
    }
    while a < pow10(e) {
        e -= 1;
    }
    let shift = digits as i32 - 1 - e;
    let mut n = (&a * pow10(shift)).round().to_integer();
    let mut shift = shift;
    if Rational::from_integer(n.clone()) >= pow10(digits as i32) {
        n /= 10;
        shift -= 1;
    }
    let mut s = n.to_string();
    let body = if shift <= 0 {
        s.push_str(&"0".repeat((-shift) as usize));
        s
    } else {
        let shift = shift as usize;
        if s.len() <= shift {
            s = "0".repeat(shift - s.len() + 1) + &s;
        }
        let (int, frac) = s.split_at(s.len() - shift);
        format!("{int}.{frac}")
    };
    if q.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

fn pow10(e: i32) -> Rational {
    let p = Rational::from_integer(BigInt::from(10).pow(e.unsigned_abs()));
    if e >= 0 {
        p
    } else {
        Rational::one() / p
    }
}

/// `q` cut (not rounded) to three decimals, the form used in published
/// tables of these margins.
pub fn three_decimals_truncated(q: &Rational) -> String {
    let thousand = Rational::from_integer(BigInt::from(1000));
    let n = (q * &thousand).trunc().to_integer();
    let sign = if n.is_negative() || (n.is_zero() && q.is_negative()) { "-" } else { "" };
    let n = n.abs();
    format!("{sign}{}.{:03}", &n / 1000, &n % 1000)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    Flag(bool),
    Number(Rational),
    Float(f64),
    Numbers(Vec<Rational>),
    Floats(Vec<f64>),
    Integers(Vec<u64>),
    Table(JointDistribution),
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.into())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Flag(b)
    }
}

impl From<Rational> for Value {
    fn from(q: Rational) -> Self {
        Value::Number(q)
    }
}

impl From<&Rational> for Value {
    fn from(q: &Rational) -> Self {
        Value::Number(q.clone())
    }
}

impl<const N: usize> From<[Rational; N]> for Value {
    fn from(v: [Rational; N]) -> Self {
        Value::Numbers(v.into())
    }
}

/// Key/value lines in insertion order. Tables print after the scalar keys,
/// each under a `[key]` header in the distribution file format.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render_text(&self, style: NumberStyle) -> String {
        let mut out = String::new();
        let mut tables = Vec::new();
        for (k, v) in &self.entries {
            let text = match v {
                Value::Text(s) => s.clone(),
                Value::Flag(b) => b.to_string(),
                Value::Number(q) => style.render(q),
                Value::Float(f) => float(*f),
                Value::Numbers(v) => v.iter().map(|q| style.render(q)).collect::<Vec<_>>().join(" "),
                Value::Floats(v) => v.iter().map(|f| float(*f)).collect::<Vec<_>>().join(" "),
                Value::Integers(v) => v.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
                Value::Table(d) => {
                    tables.push((k, d));
                    continue;
                }
            };
            out.push_str(&format!("{k}: {text}\n"));
        }
        for (k, d) in tables {
            out.push_str(&format!("[{k}]\n{}", write_distribution(d)));
        }
        out
    }

    /// Numbers are strings so that exact values survive; tables use the
    /// distribution JSON form and are always exact.
    pub fn to_json(&self, style: NumberStyle) -> Json {
        let num = |q: &Rational| Json::String(style.render(q));
        let mut map = Map::new();
        for (k, v) in &self.entries {
            let j = match v {
                Value::Text(s) => Json::String(s.clone()),
                Value::Flag(b) => Json::Bool(*b),
                Value::Number(q) => num(q),
                Value::Float(f) => Json::from(*f),
                Value::Numbers(v) => Json::Array(v.iter().map(num).collect()),
                Value::Floats(v) => Json::Array(v.iter().map(|f| Json::from(*f)).collect()),
                Value::Integers(v) => Json::Array(v.iter().map(|n| Json::from(*n)).collect()),
                Value::Table(d) => distribution_json(d),
            };
            map.insert(k.clone(), j);
        }
        Json::Object(map)
    }

    pub fn render_json(&self, style: NumberStyle) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json(style)).expect("serializable");
        s.push('\n');
        s
    }
}

fn float(f: f64) -> String {
    format!("{f:.6}")
}
