//! String rewriting systems as text and JSON.
//!
//! ```text
//! letters: a b
//! rule: aa -> 1
//! rule: ba -> ab
//! ```
//!
//! `1` is the empty word. With one-character letters a word may be written
//! without spaces; otherwise letters are separated by whitespace. Blank
//! lines and lines starting with `#` are ignored.

use polyhom_core::{Rule, StringRewritingSystem, Word};
use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SrsJson {
    pub letters: Vec<String>,
    pub rules: Vec<RuleJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleJson {
    pub lhs: String,
    pub rhs: String,
}

fn parse_word(letters: &[String], s: &str) -> Result<Word, Error> {
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    let find = |l: &str| {
        letters
            .iter()
            .position(|a| a == l)
            .ok_or_else(|| Error::invalid(format!("unknown letter `{l}` in word `{s}`")))
    };
    if s.contains(char::is_whitespace) {
        return s.split_whitespace().map(find).collect();
    }
    if let Ok(i) = find(s) {
        return Ok(vec![i]);
    }
    if letters.iter().all(|a| a.chars().count() == 1) {
        let mut buf = [0u8; 4];
        return s.chars().map(|c| find(c.encode_utf8(&mut buf))).collect();
    }
    find(s).map(|i| vec![i])
}

fn check_letters(letters: &[String]) -> Result<(), Error> {
    if let Some(bad) = letters.iter().find(|l| l.as_str() == "1" || l.is_empty() || l.contains(char::is_whitespace)) {
        return Err(Error::invalid(format!("`{bad}` cannot be a letter")));
    }
    Ok(())
}

impl SrsJson {
    pub fn build(&self) -> Result<StringRewritingSystem, Error> {
        check_letters(&self.letters)?;
        let rules = self
            .rules
            .iter()
            .map(|r| Ok(Rule { lhs: parse_word(&self.letters, &r.lhs)?, rhs: parse_word(&self.letters, &r.rhs)? }))
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(StringRewritingSystem::new(self.letters.clone(), rules)?)
    }

    pub fn from_system(srs: &StringRewritingSystem) -> Self {
        SrsJson {
            letters: srs.alphabet().to_vec(),
            rules: srs
                .rules()
                .iter()
                .map(|r| RuleJson { lhs: srs.word_string(&r.lhs), rhs: srs.word_string(&r.rhs) })
                .collect(),
        }
    }
}

/// Parses the line-based text format.
pub fn parse_srs_text(text: &str) -> Result<StringRewritingSystem, Error> {
    let mut letters = None;
    let mut rules = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |msg: &str| Error::parse(format!("line {}: {msg}", n + 1));
        if let Some(rest) = line.strip_prefix("letters:") {
            if letters.is_some() {
                return Err(at("second `letters:` line"));
            }
            letters = Some(rest.split_whitespace().map(str::to_string).collect::<Vec<_>>());
        } else if let Some(rest) = line.strip_prefix("rule:") {
            if letters.is_none() {
                return Err(at("`rule:` before `letters:`"));
            }
            let (lhs, rhs) = rest.split_once("->").ok_or_else(|| at("expected `lhs -> rhs`"))?;
            rules.push(RuleJson { lhs: lhs.trim().to_string(), rhs: rhs.trim().to_string() });
        } else {
            return Err(at("expected `letters:` or `rule:`"));
        }
    }
    let letters = letters.ok_or_else(|| Error::parse("missing `letters:` line"))?;
    SrsJson { letters, rules }.build()
}

pub fn write_srs_text(srs: &StringRewritingSystem) -> String {
    let mut out = format!("letters: {}\n", srs.alphabet().join(" "));
    for i in 0..srs.rules().len() {
        out.push_str(&format!("rule: {}\n", srs.rule_string(i)));
    }
    out
}
