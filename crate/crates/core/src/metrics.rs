//! Halstead counts for controlled-English queries and QL text.
//!
//! English counting works on the surface tokens of a query that parses:
//! identifiers and literals are operands, everything else is an operator,
//! and a few multi-word constructs count as one operator each:
//!
//! - `it is necessary that`, `it is false that`
//! - `an object of`, `does not invoke` (also spelled `doesn't invoke`)
//! - an attribute prefix `[ordinal] attr of`, or its possessive form
//!   `'s [ordinal] attr`, keyed the same way
//! - a list `[..]` (its commas are not counted; its items are operands)
//!
//! `isn't` counts as `is` plus `not`. QL counting takes every lexical token:
//! identifiers declared in `from` or `exists` and literals are operands, all
//! other tokens (keywords, types, library method names, punctuation) are
//! operators.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::frontend::{article_is_name, parse_text, tokenize, FrontendError, Token, TokenKind};
use crate::qlgen::{lex_ql, LexError, QlTokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Parse(#[from] FrontendError),
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("QL length is zero")]
    DivisionByZero,
}

/// Operator and operand tallies; every derived measure is computed on demand.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HalsteadCounts {
    pub operators: BTreeMap<String, usize>,
    pub operands: BTreeMap<String, usize>,
}

impl HalsteadCounts {
    pub fn add_operator(&mut self, key: impl Into<String>) {
        *self.operators.entry(key.into()).or_default() += 1;
    }

    pub fn add_operand(&mut self, key: impl Into<String>) {
        *self.operands.entry(key.into()).or_default() += 1;
    }

    pub fn distinct_operators(&self) -> usize {
        self.operators.len()
    }

    pub fn distinct_operands(&self) -> usize {
        self.operands.len()
    }

    pub fn total_operators(&self) -> usize {
        self.operators.values().sum()
    }

    pub fn total_operands(&self) -> usize {
        self.operands.values().sum()
    }

    pub fn vocabulary(&self) -> usize {
        self.distinct_operators() + self.distinct_operands()
    }

    pub fn length(&self) -> usize {
        self.total_operators() + self.total_operands()
    }

    pub fn volume(&self) -> f64 {
        let n = self.vocabulary();
        if n == 0 {
            0.0
        } else {
            self.length() as f64 * (n as f64).log2()
        }
    }

    pub fn difficulty(&self) -> f64 {
        let n2 = self.distinct_operands();
        if n2 == 0 {
            return 0.0;
        }
        (self.distinct_operators() as f64 / 2.0) * (self.total_operands() as f64 / n2 as f64)
    }

    pub fn effort(&self) -> f64 {
        self.difficulty() * self.volume()
    }

    /// Seconds, with the Stroud number 18.
    pub fn time(&self) -> f64 {
        self.effort() / 18.0
    }
}

impl Serialize for HalsteadCounts {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HalsteadCounts", 12)?;
        st.serialize_field("n1", &self.distinct_operators())?;
        st.serialize_field("n2", &self.distinct_operands())?;
        st.serialize_field("N1", &self.total_operators())?;
        st.serialize_field("N2", &self.total_operands())?;
        st.serialize_field("vocabulary", &self.vocabulary())?;
        st.serialize_field("length", &self.length())?;
        st.serialize_field("volume", &self.volume())?;
        st.serialize_field("difficulty", &self.difficulty())?;
        st.serialize_field("effort", &self.effort())?;
        st.serialize_field("time", &self.time())?;
        st.serialize_field("operators", &self.operators)?;
        st.serialize_field("operands", &self.operands)?;
        st.end()
    }
}

const PHRASES: &[(&[&str], &str)] = &[
    (&["it", "is", "necessary", "that"], "it is necessary that"),
    (&["it", "is", "false", "that"], "it is false that"),
    (&["an", "object", "of"], "an object of"),
    (&["a", "object", "of"], "an object of"),
    (&["object", "of"], "an object of"),
    (&["does", "not", "invoke"], "does not invoke"),
    (&["doesn't", "invoke"], "does not invoke"),
];

fn phrase_at(tokens: &[Token], i: usize) -> Option<(&'static str, usize)> {
    PHRASES.iter().find_map(|(words, key)| {
        let matches = words.len() <= tokens.len() - i
            && words.iter().zip(&tokens[i..]).all(|(w, t)| t.is_word(w));
        matches.then_some((*key, words.len()))
    })
}

fn prefix_key(ordinal: Option<&Token>, attr: &Token) -> String {
    match ordinal {
        Some(o) => format!("{} {} of", o.text.to_ascii_lowercase(), attr.text),
        None => format!("{} of", attr.text),
    }
}

/// Counts for a controlled-English query; the text must parse.
pub fn halstead_nsra(text: &str) -> Result<HalsteadCounts, MetricsError> {
    parse_text(text)?;
    let tokens = tokenize(text)?;
    let kind_at = |i: usize| tokens.get(i).map(|t| t.kind);
    let of_at = |i: usize| tokens.get(i).is_some_and(|t| t.is_word("of"));
    let mut counts = HalsteadCounts::default();
    let mut in_list = false;
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if let Some((key, len)) = phrase_at(&tokens, i) {
            counts.add_operator(key);
            i += len;
            continue;
        }
        match t.kind {
            TokenKind::Str => counts.add_operand(format!("\"{}\"", t.value())),
            TokenKind::Int => counts.add_operand(t.text.clone()),
            TokenKind::ListOpen => {
                counts.add_operator("[]");
                in_list = true;
            }
            TokenKind::ListClose => in_list = false,
            TokenKind::Comma if in_list => {}
            TokenKind::Comma => counts.add_operator(","),
            TokenKind::Period => counts.add_operator("."),
            TokenKind::ApostropheS => {
                let ord = (kind_at(i + 1) == Some(TokenKind::Ordinal)).then(|| &tokens[i + 1]);
                let at = i + 1 + usize::from(ord.is_some());
                if kind_at(at) == Some(TokenKind::Ident) {
                    counts.add_operator(prefix_key(ord, &tokens[at]));
                    i = at + 1;
                    continue;
                }
                counts.add_operator("'s");
            }
            TokenKind::Ordinal if kind_at(i + 1) == Some(TokenKind::Ident) && of_at(i + 2) => {
                counts.add_operator(prefix_key(Some(t), &tokens[i + 1]));
                i += 3;
                continue;
            }
            TokenKind::Ordinal => counts.add_operator(t.text.to_ascii_lowercase()),
            TokenKind::Ident if of_at(i + 1) => {
                counts.add_operator(prefix_key(None, t));
                i += 2;
                continue;
            }
            TokenKind::Ident => counts.add_operand(t.text.clone()),
            TokenKind::Word if article_is_name(&tokens, i) => counts.add_operand(t.text.clone()),
            TokenKind::Word if t.is_word("isn't") => {
                counts.add_operator("is");
                counts.add_operator("not");
            }
            TokenKind::Word => counts.add_operator(t.text.to_ascii_lowercase()),
        }
        i += 1;
    }
    Ok(counts)
}

/// Counts for QL text.
pub fn halstead_ql(text: &str) -> Result<HalsteadCounts, MetricsError> {
    let tokens = lex_ql(text)?;
    let ident = |i: usize| tokens.get(i).filter(|t| t.kind == QlTokenKind::Ident);
    let mut bound = BTreeSet::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.is("from") {
            // Type name (, Type name)*
            let mut j = i + 1;
            while let (Some(_), Some(name)) = (ident(j), ident(j + 1)) {
                if name.is("where") || name.is("select") {
                    break;
                }
                bound.insert(name.text.clone());
                if !tokens.get(j + 2).is_some_and(|c| c.is(",")) {
                    break;
                }
                j += 3;
            }
        } else if t.is("exists") && tokens.get(i + 1).is_some_and(|p| p.is("(")) {
            if let (Some(_), Some(name)) = (ident(i + 2), ident(i + 3)) {
                bound.insert(name.text.clone());
            }
        }
    }
    let mut counts = HalsteadCounts::default();
    for t in &tokens {
        match t.kind {
            QlTokenKind::Str => counts.add_operand(t.to_string()),
            QlTokenKind::Int => counts.add_operand(t.text.clone()),
            QlTokenKind::Ident if bound.contains(&t.text) => counts.add_operand(t.text.clone()),
            _ => counts.add_operator(t.text.clone()),
        }
    }
    Ok(counts)
}

/// One row of the English versus QL comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub vocab_nsra: usize,
    pub vocab_ql: usize,
    pub length_nsra: usize,
    pub length_ql: usize,
    pub reduction_pct: f64,
    pub vocab_reduction_pct: f64,
    pub effort_ratio: f64,
    pub time_ratio: f64,
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

pub fn compare(
    nsra: &HalsteadCounts,
    ql: &HalsteadCounts,
) -> Result<ComparisonReport, MetricsError> {
    if ql.length() == 0 {
        return Err(MetricsError::DivisionByZero);
    }
    let reduction = |a: usize, b: usize| 100.0 * (1.0 - a as f64 / b as f64);
    Ok(ComparisonReport {
        vocab_nsra: nsra.vocabulary(),
        vocab_ql: ql.vocabulary(),
        length_nsra: nsra.length(),
        length_ql: ql.length(),
        reduction_pct: reduction(nsra.length(), ql.length()),
        vocab_reduction_pct: reduction(nsra.vocabulary(), ql.vocabulary().max(1)),
        effort_ratio: ratio(nsra.effort(), ql.effort()),
        time_ratio: ratio(nsra.time(), ql.time()),
    })
}
