use std::fmt;

use super::FrontendError;

/// Half-open byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    /// Reserved grammar keyword (matched case-insensitively).
    Word,
    /// Ordinal adjective such as `first`; may be out of the supported range.
    Ordinal,
    Str,
    Int,
    Ident,
    ListOpen,
    ListClose,
    Comma,
    Period,
    ApostropheS,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source slice for tokenizer output; normalization may synthesize text.
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn new(kind: TokenKind, text: impl Into<String>, span: Span) -> Self {
        Token {
            kind,
            text: text.into(),
            span,
        }
    }

    pub fn is_word(&self, word: &str) -> bool {
        self.kind == TokenKind::Word && self.text.eq_ignore_ascii_case(word)
    }

    /// Content of a string literal without its delimiters; the text itself otherwise.
    pub fn value(&self) -> &str {
        if self.kind != TokenKind::Str {
            return &self.text;
        }
        let mut chars = self.text.char_indices();
        let first = chars.next().map(|(_, c)| c.len_utf8()).unwrap_or(0);
        let last = self.text.chars().last().map(char::len_utf8).unwrap_or(0);
        if self.text.len() < first + last {
            return "";
        }
        &self.text[first..self.text.len() - last]
    }
}

pub const KEYWORDS: &[&str] = &[
    "a",
    "an",
    "the",
    "object",
    "of",
    "invokes",
    "invoke",
    "does",
    "doesn't",
    "not",
    "isn't",
    "it",
    "is",
    "necessary",
    "false",
    "that",
    "if",
    "then",
    "and",
    "or",
    "in",
    "precedes",
    "follows",
];

pub const ORDINALS: &[&str] = &[
    "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth",
];

const ORDINAL_STEMS: &[&str] = &[
    "eleventh",
    "twelfth",
    "thirteenth",
    "fourteenth",
    "fifteenth",
    "sixteenth",
    "seventeenth",
    "eighteenth",
    "nineteenth",
    "twentieth",
    "thirtieth",
    "fortieth",
    "fiftieth",
    "sixtieth",
    "seventieth",
    "eightieth",
    "ninetieth",
    "hundredth",
    "thousandth",
    "last",
];

/// 1-based position of a supported ordinal word.
pub fn ordinal_value(word: &str) -> Option<u32> {
    let lower = word.to_ascii_lowercase();
    ORDINALS
        .iter()
        .position(|o| *o == lower)
        .map(|i| i as u32 + 1)
}

fn looks_ordinal(word: &str) -> bool {
    let lower = word.to_ascii_lowercase();
    if ORDINALS.contains(&lower.as_str()) || ORDINAL_STEMS.contains(&lower.as_str()) {
        return true;
    }
    // compound forms ("twenty-first" is not lexed as one word) and numeric forms like 11th
    let digits = lower.trim_end_matches(|c: char| c.is_ascii_alphabetic());
    let suffix = &lower[digits.len()..];
    !digits.is_empty()
        && digits.chars().all(|c| c.is_ascii_digit())
        && matches!(suffix, "st" | "nd" | "rd" | "th")
}

fn is_quote_open(c: char) -> Option<char> {
    match c {
        '"' => Some('"'),
        '\u{201C}' => Some('\u{201D}'),
        _ => None,
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits controlled-English text into tokens. Whitespace is skipped; every
/// token's `text` is the exact source slice at `span`.
pub fn tokenize(text: &str) -> Result<Vec<Token>, FrontendError> {
    let mut tokens = Vec::new();
    let mut iter = text.char_indices().peekable();

    while let Some(&(start, c)) = iter.peek() {
        if c.is_whitespace() {
            iter.next();
            continue;
        }

        if let Some(close) = is_quote_open(c) {
            iter.next();
            let mut end = None;
            for (i, ch) in iter.by_ref() {
                // a straight quote may close a typographic opening and vice versa
                if ch == close || ch == '"' || ch == '\u{201D}' {
                    end = Some(i + ch.len_utf8());
                    break;
                }
                if ch == '\n' {
                    break;
                }
            }
            let Some(end) = end else {
                let stop = text[start..]
                    .find('\n')
                    .map(|n| start + n)
                    .unwrap_or(text.len());
                return Err(FrontendError::UnterminatedString {
                    span: Span::new(start, stop.max(start + c.len_utf8())),
                });
            };
            tokens.push(Token::new(
                TokenKind::Str,
                &text[start..end],
                Span::new(start, end),
            ));
            continue;
        }

        let single = match c {
            '[' => Some(TokenKind::ListOpen),
            ']' => Some(TokenKind::ListClose),
            ',' => Some(TokenKind::Comma),
            '.' => Some(TokenKind::Period),
            _ => None,
        };
        if let Some(kind) = single {
            iter.next();
            let end = start + c.len_utf8();
            tokens.push(Token::new(kind, &text[start..end], Span::new(start, end)));
            continue;
        }

        if is_apostrophe(c) {
            let after = start + c.len_utf8();
            let rest = &text[after..];
            let possessive =
                rest.starts_with('s') && !rest[1..].chars().next().is_some_and(is_ident_char);
            if possessive {
                iter.next();
                iter.next();
                let end = after + 1;
                tokens.push(Token::new(
                    TokenKind::ApostropheS,
                    &text[start..end],
                    Span::new(start, end),
                ));
                continue;
            }
            return Err(FrontendError::IllegalCharacter {
                ch: c,
                span: Span::new(start, after),
            });
        }

        if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, ch)) = iter.peek() {
                if !is_ident_char(ch) {
                    break;
                }
                end = i + ch.len_utf8();
                iter.next();
            }
            let word = &text[start..end];
            let kind = if word.chars().all(|ch| ch.is_ascii_digit()) {
                TokenKind::Int
            } else if looks_ordinal(word) {
                TokenKind::Ordinal
            } else {
                return Err(FrontendError::IllegalCharacter {
                    ch: word.chars().find(|ch| !ch.is_ascii_digit()).unwrap_or(c),
                    span: Span::new(start, end),
                });
            };
            tokens.push(Token::new(kind, word, Span::new(start, end)));
            continue;
        }

        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start;
            while let Some(&(i, ch)) = iter.peek() {
                if !is_ident_char(ch) {
                    break;
                }
                end = i + ch.len_utf8();
                iter.next();
            }
            // negative contractions: doesn't, isn't
            let rest = &text[end..];
            if let Some(ap) = rest.chars().next().filter(|ch| is_apostrophe(*ch)) {
                let tail = &rest[ap.len_utf8()..];
                let stem = &text[start..end];
                if stem.ends_with(['n', 'N'])
                    && tail.starts_with(['t', 'T'])
                    && !tail[1..].chars().next().is_some_and(is_ident_char)
                {
                    iter.next();
                    iter.next();
                    end += ap.len_utf8() + 1;
                }
            }
            let word = &text[start..end];
            let canonical = word.replace('\u{2019}', "'").to_ascii_lowercase();
            let kind = if KEYWORDS.contains(&canonical.as_str()) {
                TokenKind::Word
            } else if looks_ordinal(word) {
                TokenKind::Ordinal
            } else if word.contains(['\'', '\u{2019}']) {
                return Err(FrontendError::IllegalCharacter {
                    ch: '\'',
                    span: Span::new(start, end),
                });
            } else {
                TokenKind::Ident
            };
            tokens.push(Token::new(kind, word, Span::new(start, end)));
            continue;
        }

        return Err(FrontendError::IllegalCharacter {
            ch: c,
            span: Span::new(start, start + c.len_utf8()),
        });
    }

    Ok(tokens)
}
