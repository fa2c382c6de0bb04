use super::token::{Span, Token, TokenKind};

/// Rewrites paraphrases into the canonical token stream the parser expects.
///
/// - `doesn't` / `isn't` become `does not` / `is not`;
/// - a possessive chain `X's [ord] A's [ord] B` becomes `[ord] B of [ord] A of X`;
/// - `the` is dropped everywhere, `a`/`an` everywhere except directly after
///   `is` / `is not`, where the article marks a type assumption.
///
/// Rewritten tokens keep the span of the source text they came from.
pub fn normalize(tokens: &[Token]) -> Vec<Token> {
    let expanded = expand_contractions(tokens);
    let rewritten = rewrite_possessives(&expanded);
    drop_articles(&rewritten)
}

fn expand_contractions(tokens: &[Token]) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let lower = tok.text.replace('\u{2019}', "'").to_ascii_lowercase();
        let stem = match (tok.kind, lower.as_str()) {
            (TokenKind::Word, "doesn't") => Some("does"),
            (TokenKind::Word, "isn't") => Some("is"),
            _ => None,
        };
        match stem {
            Some(stem) => {
                let split = tok.span.start + stem.len();
                out.push(Token::new(
                    TokenKind::Word,
                    &tok.text[..stem.len()],
                    Span::new(tok.span.start, split),
                ));
                out.push(Token::new(
                    TokenKind::Word,
                    "not",
                    Span::new(split, tok.span.end),
                ));
            }
            None => out.push(tok.clone()),
        }
    }
    out
}

/// Attribute groups following a possessive marker: `'s [ordinal] attribute`.
fn possessive_group(tokens: &[Token], at: usize) -> Option<(Vec<Token>, usize)> {
    let apos = tokens.get(at)?;
    if apos.kind != TokenKind::ApostropheS {
        return None;
    }
    let mut i = at + 1;
    let mut group = Vec::new();
    if let Some(ord) = tokens.get(i).filter(|t| t.kind == TokenKind::Ordinal) {
        group.push(ord.clone());
        i += 1;
    }
    let attr = tokens.get(i).filter(|t| t.kind == TokenKind::Ident)?;
    group.push(attr.clone());
    group.push(Token::new(TokenKind::Word, "of", apos.span));
    Some((group, i + 1))
}

fn rewrite_possessives(tokens: &[Token]) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len() + 4);
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        let base_ok = matches!(tok.kind, TokenKind::Ident | TokenKind::Str | TokenKind::Int);
        if base_ok {
            let mut groups = Vec::new();
            let mut j = i + 1;
            while let Some((group, next)) = possessive_group(tokens, j) {
                groups.push(group);
                j = next;
            }
            if !groups.is_empty() {
                for group in groups.into_iter().rev() {
                    out.extend(group);
                }
                out.push(tok.clone());
                i = j;
                continue;
            }
        }
        out.push(tok.clone());
        i += 1;
    }
    out
}

/// An article with no noun after it is somebody's variable name.
pub(crate) fn article_is_name(tokens: &[Token], i: usize) -> bool {
    let article = ["the", "a", "an"].iter().any(|w| tokens[i].is_word(w));
    article
        && match tokens.get(i + 1) {
            Some(next) => match next.kind {
                TokenKind::Word => !next.is_word("object"),
                TokenKind::Period | TokenKind::Comma | TokenKind::ListClose => true,
                _ => false,
            },
            None => true,
        }
}

fn drop_articles(tokens: &[Token]) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for (i, tok) in tokens.iter().enumerate() {
        let article = tok.is_word("the") || tok.is_word("a") || tok.is_word("an");
        if !article {
            out.push(tok.clone());
            continue;
        }
        if article_is_name(tokens, i) {
            out.push(Token::new(TokenKind::Ident, tok.text.clone(), tok.span));
            continue;
        }
        let after_is = match out.as_slice() {
            [.., prev] if prev.is_word("is") => true,
            [.., is, not] if is.is_word("is") && not.is_word("not") => true,
            _ => false,
        };
        if after_is && !tok.is_word("the") {
            out.push(tok.clone());
        }
    }
    out
}
