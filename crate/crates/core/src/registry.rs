//! Attribute registry: English attribute words to CodeQL call chains, plus
//! type aliases and the English names of CodeQL types.
//!
//! Profiles are line-oriented text:
//!
//! ```text
//! # rules are the default section
//! receiver = getReceiverType()
//! name = getName() : string
//! type = getType() : object aliased
//! argument = getArgument(@ordinal)
//!
//! [aliases]
//! PublicKey = java.security.PublicKey
//!
//! [types]
//! method access = MethodAccess
//! ```
//!
//! A rule's right-hand side is a dot-separated call chain. Arguments are string
//! literals (`\"` and `\\` escapes), integers, or `@ordinal`, the slot filled
//! from an ordinal adjective (`second` fills 1). The optional flags after `:`
//! are `string` or `object` (default) for the result kind, and `aliased` to
//! qualify compared string literals through the `[aliases]` table.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::frontend::Literal;
use crate::semantics::Call;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepArg {
    Ordinal,
    Str(String),
    Int(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallStep {
    pub method: String,
    pub args: Vec<StepArg>,
}

impl CallStep {
    fn new(method: &str, args: Vec<StepArg>) -> Self {
        CallStep {
            method: method.to_string(),
            args,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultKind {
    StringValued,
    ObjectValued,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeRule {
    pub word: String,
    pub template: Vec<CallStep>,
    pub result: ResultKind,
    /// Compared string literals are mapped through the alias table.
    pub aliased: bool,
}

impl AttributeRule {
    pub fn has_ordinal_slot(&self) -> bool {
        self.template
            .iter()
            .flat_map(|s| &s.args)
            .any(|a| *a == StepArg::Ordinal)
    }

    /// Concrete calls with the ordinal slot filled by `index` (already zero-based).
    pub fn instantiate(&self, index: Option<i64>) -> Vec<Call> {
        self.template
            .iter()
            .map(|step| Call {
                method: step.method.clone(),
                args: step
                    .args
                    .iter()
                    .map(|a| match a {
                        StepArg::Ordinal => Literal::Int(index.unwrap_or(0)),
                        StepArg::Str(s) => Literal::Str(s.clone()),
                        StepArg::Int(i) => Literal::Int(*i),
                    })
                    .collect(),
            })
            .collect()
    }

    /// Renders the chain applied to `base`, e.g. `X.toString().splitAt("/", 0)`.
    pub fn render(&self, base: &str, index: Option<i64>) -> String {
        let mut out = base.to_string();
        for call in self.instantiate(index) {
            out.push('.');
            out.push_str(&call.to_string());
        }
        out
    }
}

impl fmt::Display for StepArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepArg::Ordinal => f.write_str("@ordinal"),
            StepArg::Str(s) => write!(f, "\"{}\"", escape(s)),
            StepArg::Int(i) => write!(f, "{i}"),
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("line {line}: {message}")]
    ConfigParse { line: usize, message: String },
    #[error("attribute `{0}` defined twice")]
    DuplicateAttribute(String),
    #[error("template for `{0}` names the ordinal slot more than once")]
    BadTemplate(String),
    #[error("unknown attribute `{word}` (known: {})", known.join(", "))]
    UnknownAttribute { word: String, known: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Registry {
    pub rules: BTreeMap<String, AttributeRule>,
    pub type_aliases: BTreeMap<String, String>,
    pub ql_type_names: BTreeMap<String, String>,
}

/// The built-in Java cryptography profile.
pub fn builtin_crypto_profile() -> Registry {
    let mut reg = Registry::default();
    let mut rule = |word: &str, template: Vec<CallStep>, result: ResultKind, aliased: bool| {
        reg.rules.insert(
            word.to_string(),
            AttributeRule {
                word: word.to_string(),
                template,
                result,
                aliased,
            },
        );
    };
    use ResultKind::*;
    rule(
        "name",
        vec![CallStep::new("getName", vec![])],
        StringValued,
        false,
    );
    rule(
        "type",
        vec![CallStep::new("getType", vec![])],
        ObjectValued,
        true,
    );
    rule(
        "argument",
        vec![CallStep::new("getArgument", vec![StepArg::Ordinal])],
        ObjectValued,
        false,
    );
    rule(
        "method",
        vec![CallStep::new("getMethod", vec![])],
        ObjectValued,
        false,
    );
    for (word, index) in [("algorithm", 0), ("mode", 1), ("padding", 2)] {
        rule(
            word,
            vec![
                CallStep::new("toString", vec![]),
                CallStep::new(
                    "replaceAll",
                    vec![StepArg::Str("\"".into()), StepArg::Str(String::new())],
                ),
                CallStep::new(
                    "splitAt",
                    vec![StepArg::Str("/".into()), StepArg::Int(index)],
                ),
            ],
            StringValued,
            false,
        );
    }
    for (simple, qualified) in [
        ("PublicKey", "java.security.PublicKey"),
        ("PrivateKey", "java.security.PrivateKey"),
        ("Certificate", "java.security.cert.Certificate"),
    ] {
        reg.type_aliases.insert(simple.into(), qualified.into());
    }
    for (noun, ty) in [
        ("class", "Class"),
        ("variable", "Variable"),
        ("method access", "MethodAccess"),
    ] {
        reg.ql_type_names.insert(noun.into(), ty.into());
    }
    reg
}

/// Built-in profile overlaid with the rules in `config_text`.
pub fn load_profile(config_text: &str) -> Result<Registry, RegistryError> {
    builtin_crypto_profile().overlay(config_text)
}

pub fn lookup_attribute<'r>(
    word: &str,
    reg: &'r Registry,
) -> Result<&'r AttributeRule, RegistryError> {
    reg.lookup(word)
}

impl Registry {
    pub fn lookup(&self, word: &str) -> Result<&AttributeRule, RegistryError> {
        self.rules
            .get(word)
            .ok_or_else(|| RegistryError::UnknownAttribute {
                word: word.to_string(),
                known: self.rules.keys().cloned().collect(),
            })
    }

    pub fn resolve_alias(&self, name: &str) -> Option<&str> {
        self.type_aliases.get(name).map(String::as_str)
    }

    pub fn ql_type(&self, noun: &str) -> Option<&str> {
        self.ql_type_names
            .get(&noun.to_ascii_lowercase())
            .map(String::as_str)
    }

    /// CodeQL type used for method-call declarations.
    pub fn method_access_type(&self) -> &str {
        self.ql_type("method access").unwrap_or("MethodAccess")
    }

    /// Returns a copy with the profile text's entries shadowing existing ones.
    pub fn overlay(&self, config_text: &str) -> Result<Registry, RegistryError> {
        let parsed = parse_profile(config_text)?;
        let mut out = self.clone();
        out.rules.extend(parsed.rules);
        out.type_aliases.extend(parsed.type_aliases);
        out.ql_type_names.extend(parsed.ql_type_names);
        Ok(out)
    }
}

#[derive(Clone, Copy)]
enum Section {
    Rules,
    Aliases,
    Types,
}

fn parse_profile(text: &str) -> Result<Registry, RegistryError> {
    let mut reg = Registry::default();
    let mut section = Section::Rules;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| RegistryError::ConfigParse {
            line: line_no,
            message,
        };
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match name.trim() {
                "rules" => Section::Rules,
                "aliases" => Section::Aliases,
                "types" => Section::Types,
                other => return Err(err(format!("unknown section `[{other}]`"))),
            };
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err("expected `key = value`".into()));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(err("expected `key = value`".into()));
        }
        match section {
            Section::Rules => {
                if !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(err(format!("attribute `{key}` must be a single word")));
                }
                if reg.rules.contains_key(key) {
                    return Err(RegistryError::DuplicateAttribute(key.to_string()));
                }
                let rule = parse_rule(key, value).map_err(|e| match e {
                    RuleError::Syntax(message) => err(message),
                    RuleError::TwoOrdinals => RegistryError::BadTemplate(key.to_string()),
                })?;
                reg.rules.insert(key.to_string(), rule);
            }
            Section::Aliases => {
                if reg.type_aliases.insert(key.into(), value.into()).is_some() {
                    return Err(err(format!("alias `{key}` defined twice")));
                }
            }
            Section::Types => {
                let noun = key
                    .split_whitespace()
                    .collect::<Vec<_>>()
                    .join(" ")
                    .to_ascii_lowercase();
                if reg.ql_type_names.insert(noun, value.into()).is_some() {
                    return Err(err(format!("type noun `{key}` defined twice")));
                }
            }
        }
    }
    Ok(reg)
}

/// Drops a trailing `#` comment, ignoring `#` inside string literals.
fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_str => escaped = true,
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

enum RuleError {
    Syntax(String),
    TwoOrdinals,
}

fn parse_rule(word: &str, value: &str) -> Result<AttributeRule, RuleError> {
    let mut chars = value.char_indices().peekable();
    let mut template = Vec::new();
    let syntax = |m: &str| RuleError::Syntax(m.to_string());

    loop {
        // method name
        let mut method = String::new();
        while let Some(&(_, c)) = chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                method.push(c);
                chars.next();
            } else {
                break;
            }
        }
        if method.is_empty() {
            return Err(syntax("expected a method name"));
        }
        skip_ws(&mut chars);
        if chars.next().map(|(_, c)| c) != Some('(') {
            return Err(RuleError::Syntax(format!("expected `(` after `{method}`")));
        }
        let mut args = Vec::new();
        skip_ws(&mut chars);
        if chars.peek().map(|&(_, c)| c) == Some(')') {
            chars.next();
        } else {
            loop {
                skip_ws(&mut chars);
                args.push(parse_arg(&mut chars)?);
                skip_ws(&mut chars);
                match chars.next().map(|(_, c)| c) {
                    Some(',') => continue,
                    Some(')') => break,
                    _ => return Err(syntax("expected `,` or `)` in argument list")),
                }
            }
        }
        template.push(CallStep { method, args });
        skip_ws(&mut chars);
        match chars.peek().map(|&(_, c)| c) {
            Some('.') => {
                chars.next();
                skip_ws(&mut chars);
            }
            _ => break,
        }
    }

    let rest: String = chars.map(|(_, c)| c).collect();
    let rest = rest.trim();
    let mut result = ResultKind::ObjectValued;
    let mut aliased = false;
    if !rest.is_empty() {
        let Some(flags) = rest.strip_prefix(':') else {
            return Err(RuleError::Syntax(format!(
                "unexpected `{rest}` after call chain"
            )));
        };
        for flag in flags.split_whitespace() {
            match flag {
                "string" => result = ResultKind::StringValued,
                "object" => result = ResultKind::ObjectValued,
                "aliased" => aliased = true,
                other => return Err(RuleError::Syntax(format!("unknown flag `{other}`"))),
            }
        }
    }

    let ordinal_slots = template
        .iter()
        .flat_map(|s| &s.args)
        .filter(|a| **a == StepArg::Ordinal)
        .count();
    if ordinal_slots > 1 {
        return Err(RuleError::TwoOrdinals);
    }
    Ok(AttributeRule {
        word: word.to_string(),
        template,
        result,
        aliased,
    })
}

type Chars<'a> = std::iter::Peekable<std::str::CharIndices<'a>>;

fn skip_ws(chars: &mut Chars<'_>) {
    while chars.peek().is_some_and(|&(_, c)| c.is_whitespace()) {
        chars.next();
    }
}

fn parse_arg(chars: &mut Chars<'_>) -> Result<StepArg, RuleError> {
    match chars.peek().map(|&(_, c)| c) {
        Some('"') => {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next().map(|(_, c)| c) {
                    Some('\\') => match chars.next().map(|(_, c)| c) {
                        Some(c @ ('"' | '\\')) => s.push(c),
                        _ => return Err(RuleError::Syntax("bad escape in string".into())),
                    },
                    Some('"') => return Ok(StepArg::Str(s)),
                    Some(c) => s.push(c),
                    None => return Err(RuleError::Syntax("unterminated string".into())),
                }
            }
        }
        Some('@') => {
            chars.next();
            let mut name = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_alphabetic() {
                    name.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            if name == "ordinal" {
                Ok(StepArg::Ordinal)
            } else {
                Err(RuleError::Syntax(format!("unknown slot `@{name}`")))
            }
        }
        Some(c) if c.is_ascii_digit() || c == '-' => {
            let mut digits = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_digit() || (digits.is_empty() && c == '-') {
                    digits.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            digits
                .parse()
                .map(StepArg::Int)
                .map_err(|_| RuleError::Syntax(format!("bad integer `{digits}`")))
        }
        _ => Err(RuleError::Syntax(
            "expected a string, integer or @ordinal".into(),
        )),
    }
}

/// Serializes a registry back to profile text.
pub fn to_profile_text(reg: &Registry) -> String {
    let mut out = String::new();
    for rule in reg.rules.values() {
        let chain: Vec<String> = rule
            .template
            .iter()
            .map(|s| {
                let args: Vec<String> = s.args.iter().map(|a| a.to_string()).collect();
                format!("{}({})", s.method, args.join(", "))
            })
            .collect();
        let kind = match rule.result {
            ResultKind::StringValued => "string",
            ResultKind::ObjectValued => "object",
        };
        out.push_str(&format!(
            "{} = {} : {}{}\n",
            rule.word,
            chain.join("."),
            kind,
            if rule.aliased { " aliased" } else { "" }
        ));
    }
    out.push_str("\n[aliases]\n");
    for (k, v) in &reg.type_aliases {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out.push_str("\n[types]\n");
    for (k, v) in &reg.ql_type_names {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out
}
