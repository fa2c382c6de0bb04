//! Recursive-descent parser over normalized tokens.
//!
//! Precedence, loosest first: `or`, `and`, then the prefix forms
//! `it is false that S` and `if S then S`. The antecedent of `if` is a full
//! disjunction ending at `then` (optionally preceded by a comma); the
//! consequent is a conjunction, so a following `or` closes it.

use super::ast::{Direction, Exp, Literal, QueryAst, Rhs, Statement};
use super::token::{ordinal_value, Span, Token, TokenKind};
use super::FrontendError;

pub fn parse_query(tokens: &[Token]) -> Result<QueryAst, FrontendError> {
    parse_query_with_spans(tokens).map(|(ast, _)| ast)
}

/// Like [`parse_query`], also returning the source span of each sentence.
pub fn parse_query_with_spans(tokens: &[Token]) -> Result<(QueryAst, Vec<Span>), FrontendError> {
    let mut parser = Parser {
        tokens,
        pos: 0,
        last_subject: None,
    };
    let mut statements = Vec::new();
    let mut spans = Vec::new();
    while !parser.at_end() {
        let start = parser.peek_span();
        statements.push(parser.sentence()?);
        spans.push(start.join(parser.prev_span()));
    }
    if statements.is_empty() {
        return Err(parser.unexpected(&["statement"]));
    }
    Ok((QueryAst { statements }, spans))
}

#[derive(Clone)]
enum Subject {
    Exp(Exp),
    Signature(String),
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    last_subject: Option<Subject>,
}

impl<'t> Parser<'t> {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + offset)
    }

    fn peek_span(&self) -> Span {
        match self.peek() {
            Some(t) => t.span,
            None => {
                let end = self.tokens.last().map(|t| t.span.end).unwrap_or(0);
                Span::new(end, end)
            }
        }
    }

    fn prev_span(&self) -> Span {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.tokens.get(i))
            .map(|t| t.span)
            .unwrap_or_else(|| self.peek_span())
    }

    fn bump(&mut self) -> &'t Token {
        let tok = &self.tokens[self.pos];
        self.pos += 1;
        tok
    }

    fn at_word(&self, word: &str) -> bool {
        self.peek().is_some_and(|t| t.is_word(word))
    }

    fn at_words(&self, words: &[&str]) -> bool {
        words
            .iter()
            .enumerate()
            .all(|(i, w)| self.peek_at(i).is_some_and(|t| t.is_word(w)))
    }

    fn at_kind(&self, kind: TokenKind) -> bool {
        self.peek().is_some_and(|t| t.kind == kind)
    }

    fn eat_word(&mut self, word: &str) -> bool {
        if self.at_word(word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_words(&mut self, words: &[&str]) -> bool {
        if self.at_words(words) {
            self.pos += words.len();
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<&'t Token, FrontendError> {
        if self.at_word(word) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&format!("'{word}'")]))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, FrontendError> {
        if self.at_kind(TokenKind::Ident) {
            Ok(self.bump().text.clone())
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn unexpected(&self, expected: &[&str]) -> FrontendError {
        let found = match self.peek() {
            Some(t) => format!("`{}`", t.text),
            None => "end of input".to_string(),
        };
        FrontendError::Syntax {
            span: self.peek_span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn sentence(&mut self) -> Result<Statement, FrontendError> {
        self.last_subject = None;
        let stmt = if self.eat_words(&["it", "is", "necessary", "that"]) {
            Statement::Necessity(Box::new(self.statement()?))
        } else {
            self.statement()?
        };
        if !self.at_kind(TokenKind::Period) {
            return Err(self.unexpected(&["'.'", "'and'", "'or'"]));
        }
        self.bump();
        Ok(stmt)
    }

    fn statement(&mut self) -> Result<Statement, FrontendError> {
        self.disjunction()
    }

    fn disjunction(&mut self) -> Result<Statement, FrontendError> {
        let mut lhs = self.conjunction()?;
        while self.eat_word("or") {
            let rhs = self.conjunction_continuing()?;
            lhs = Statement::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Statement, FrontendError> {
        let first = self.unary()?;
        self.conjunction_tail(first)
    }

    /// A conjunction right after a connective, where `is ...` may elide the subject.
    fn conjunction_continuing(&mut self) -> Result<Statement, FrontendError> {
        let first = self.unary_continuing()?;
        self.conjunction_tail(first)
    }

    fn conjunction_tail(&mut self, mut lhs: Statement) -> Result<Statement, FrontendError> {
        while self.eat_word("and") {
            let rhs = self.unary_continuing()?;
            lhs = Statement::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary_continuing(&mut self) -> Result<Statement, FrontendError> {
        if self.at_word("is") {
            return match self.last_subject.clone() {
                Some(Subject::Exp(lhs)) => self.basic_tail(lhs),
                Some(Subject::Signature(method)) => self.signature_tail(method),
                None => Err(self.unexpected(&["statement"])),
            };
        }
        self.unary()
    }

    fn unary(&mut self) -> Result<Statement, FrontendError> {
        if self.at_words(&["it", "is", "necessary", "that"]) {
            return Err(FrontendError::NestedNecessity {
                span: self.peek_span(),
            });
        }
        if self.eat_words(&["it", "is", "false", "that"]) {
            let inner = self.unary()?;
            return Ok(Statement::not(inner));
        }
        if self.eat_word("if") {
            let cond = self.disjunction()?;
            if self.at_kind(TokenKind::Comma) {
                self.bump();
            }
            if !self.eat_word("then") {
                return Err(self.unexpected(&["'then'", "'and'", "'or'"]));
            }
            let then = self.conjunction()?;
            return Ok(Statement::implies(cond, then));
        }
        self.simple()
    }

    fn simple(&mut self) -> Result<Statement, FrontendError> {
        if self.eat_words(&["object", "of"]) {
            return self.invocation();
        }

        if self.at_kind(TokenKind::Ident) {
            if let Some(next) = self.peek_at(1) {
                let direction = if next.is_word("precedes") {
                    Some(Direction::Precedes)
                } else if next.is_word("follows") {
                    Some(Direction::Follows)
                } else {
                    None
                };
                if let Some(direction) = direction {
                    let first = self.bump().text.clone();
                    self.bump();
                    let second = self.expect_ident("method name")?;
                    self.last_subject = None;
                    let (before, after) = match direction {
                        Direction::Precedes => (first, second),
                        Direction::Follows => (second, first),
                    };
                    return Ok(Statement::Ordering {
                        before,
                        after,
                        direction,
                    });
                }
            }
        }

        let lhs = self.exp()?;
        if let Exp::Prefixed {
            attribute,
            ordinal: None,
            inner,
        } = &lhs
        {
            if attribute == "signature" {
                if let Exp::Ident(method) = inner.as_ref() {
                    let method = method.clone();
                    let list_follows = self.at_word("is")
                        && (self
                            .peek_at(1)
                            .is_some_and(|t| t.kind == TokenKind::ListOpen)
                            || (self.peek_at(1).is_some_and(|t| t.is_word("not"))
                                && self
                                    .peek_at(2)
                                    .is_some_and(|t| t.kind == TokenKind::ListOpen)));
                    if list_follows {
                        return self.signature_tail(method);
                    }
                }
            }
        }
        if !self.at_word("is") {
            let expected: &[&str] = if matches!(lhs, Exp::Ident(_)) {
                &["'is'", "'precedes'", "'follows'"]
            } else {
                &["'is'"]
            };
            return Err(self.unexpected(expected));
        }
        self.basic_tail(lhs)
    }

    fn invocation(&mut self) -> Result<Statement, FrontendError> {
        let class_name = self.expect_ident("class name")?;
        let positive = if self.eat_word("invokes") {
            true
        } else if self.eat_words(&["does", "not", "invoke"]) {
            false
        } else {
            return Err(self.unexpected(&["'invokes'", "'does not invoke'"]));
        };
        let method_name = self.expect_ident("method name")?;
        self.last_subject = None;
        Ok(Statement::Invocation {
            class_name,
            method_name,
            positive,
        })
    }

    fn signature_tail(&mut self, method: String) -> Result<Statement, FrontendError> {
        self.expect_word("is")?;
        let positive = !self.eat_word("not");
        let list_span = self.peek_span();
        let items = self.list()?;
        let mut type_names = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Literal::Str(s) => type_names.push(s),
                Literal::Int(_) => {
                    return Err(FrontendError::Syntax {
                        span: list_span,
                        expected: vec!["list of type names".into()],
                        found: "integer literal".into(),
                    })
                }
            }
        }
        self.last_subject = Some(Subject::Signature(method.clone()));
        Ok(Statement::Signature {
            method_name: method,
            type_names,
            positive,
        })
    }

    fn basic_tail(&mut self, lhs: Exp) -> Result<Statement, FrontendError> {
        self.expect_word("is")?;
        let negated = self.eat_word("not");
        self.last_subject = Some(Subject::Exp(lhs.clone()));

        if self.eat_word("in") {
            let items = self.list()?;
            return Ok(Statement::Basic {
                lhs,
                negated,
                rhs: Rhs::List(items),
            });
        }

        if self.at_word("a") || self.at_word("an") {
            if negated {
                return Err(self.unexpected(&["expression", "'in'"]));
            }
            if !matches!(lhs, Exp::Ident(_)) {
                return Err(self.unexpected(&["expression", "'in'", "'not'"]));
            }
            self.bump();
            let mut words = Vec::new();
            while self.at_kind(TokenKind::Ident) {
                words.push(self.bump().text.clone());
            }
            if words.is_empty() {
                return Err(self.unexpected(&["type name"]));
            }
            return Ok(Statement::Basic {
                lhs,
                negated,
                rhs: Rhs::TypeAssumption(words.join(" ")),
            });
        }

        let rhs = self.exp()?;
        // `Literal is Exp` reads as `Exp is Literal`
        let (lhs, rhs) = match (&lhs, &rhs) {
            (Exp::Literal(_), Exp::Ident(_) | Exp::Prefixed { .. }) => (rhs, lhs),
            _ => (lhs, rhs),
        };
        self.last_subject = Some(Subject::Exp(lhs.clone()));
        Ok(Statement::Basic {
            lhs,
            negated,
            rhs: Rhs::Exp(rhs),
        })
    }

    fn exp(&mut self) -> Result<Exp, FrontendError> {
        let Some(tok) = self.peek() else {
            return Err(self.unexpected(&["expression"]));
        };
        match tok.kind {
            TokenKind::Str => {
                self.bump();
                Ok(Exp::Literal(Literal::Str(tok.value().to_string())))
            }
            TokenKind::Int => {
                self.bump();
                Ok(Exp::Literal(int_literal(tok)?))
            }
            TokenKind::Ordinal => {
                let ordinal =
                    ordinal_value(&tok.text).ok_or_else(|| FrontendError::UnknownOrdinal {
                        word: tok.text.clone(),
                        span: tok.span,
                    })?;
                self.bump();
                if !self.at_kind(TokenKind::Ident) {
                    return Err(self.unexpected(&["attribute"]));
                }
                let attribute = self.bump().text.clone();
                self.expect_word("of")?;
                let inner = self.exp()?;
                Ok(Exp::prefixed(attribute, Some(ordinal), inner))
            }
            TokenKind::Ident => {
                self.bump();
                if self.eat_word("of") {
                    let inner = self.exp()?;
                    Ok(Exp::prefixed(tok.text.clone(), None, inner))
                } else {
                    Ok(Exp::Ident(tok.text.clone()))
                }
            }
            _ => Err(self.unexpected(&["expression"])),
        }
    }

    fn list(&mut self) -> Result<Vec<Literal>, FrontendError> {
        if !self.at_kind(TokenKind::ListOpen) {
            return Err(self.unexpected(&["'['"]));
        }
        let open = self.bump().span;
        let mut items = Vec::new();
        if self.at_kind(TokenKind::ListClose) {
            let close = self.bump().span;
            return Err(FrontendError::EmptyList {
                span: open.join(close),
            });
        }
        loop {
            let Some(tok) = self.peek() else {
                return Err(self.unexpected(&["list item"]));
            };
            match tok.kind {
                TokenKind::Str => items.push(Literal::Str(tok.value().to_string())),
                TokenKind::Int => items.push(int_literal(tok)?),
                _ => return Err(self.unexpected(&["string literal", "integer literal"])),
            }
            self.bump();
            if self.at_kind(TokenKind::Comma) {
                self.bump();
                continue;
            }
            if self.at_kind(TokenKind::ListClose) {
                self.bump();
                return Ok(items);
            }
            return Err(self.unexpected(&["','", "']'"]));
        }
    }
}

fn int_literal(tok: &Token) -> Result<Literal, FrontendError> {
    tok.text
        .parse::<i64>()
        .map(Literal::Int)
        .map_err(|_| FrontendError::Syntax {
            span: tok.span,
            expected: vec!["integer literal within 64 bits".into()],
            found: format!("`{}`", tok.text),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{normalize, tokenize};

    fn parse(src: &str) -> Result<QueryAst, FrontendError> {
        parse_query(&normalize(&tokenize(src)?))
    }

    fn one(src: &str) -> Statement {
        let mut ast = parse(src).unwrap();
        assert_eq!(ast.statements.len(), 1);
        ast.statements.remove(0)
    }

    #[test]
    fn invocation_pattern() {
        assert_eq!(
            one("An object of Cipher invokes init."),
            Statement::Invocation {
                class_name: "Cipher".into(),
                method_name: "init".into(),
                positive: true
            }
        );
        assert_eq!(
            one("An object of Cipher doesn't invoke init."),
            Statement::Invocation {
                class_name: "Cipher".into(),
                method_name: "init".into(),
                positive: false
            }
        );
    }

    #[test]
    fn ordering_pattern() {
        let expected = Statement::Ordering {
            before: "getInstance".into(),
            after: "init".into(),
            direction: Direction::Precedes,
        };
        assert_eq!(one("getInstance precedes init."), expected);
        match one("init follows getInstance.") {
            Statement::Ordering { before, after, .. } => {
                assert_eq!((before.as_str(), after.as_str()), ("getInstance", "init"))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reversed_equality() {
        let canonical = one(r#"the algorithm of the first argument of getInstance is "RSA"."#);
        let reversed = one(r#""RSA" is the algorithm of getInstance's first argument."#);
        assert_eq!(canonical, reversed);
        let expected_lhs = Exp::prefixed(
            "algorithm",
            None,
            Exp::prefixed("argument", Some(1), Exp::ident("getInstance")),
        );
        assert_eq!(
            canonical,
            Statement::Basic {
                lhs: expected_lhs,
                negated: false,
                rhs: Rhs::Exp(Exp::string("RSA"))
            }
        );
    }

    #[test]
    fn prefix_nesting_is_outermost_first() {
        match one(r#"the type of the second argument of init is "x"."#) {
            Statement::Basic { lhs, .. } => assert_eq!(
                lhs,
                Exp::prefixed(
                    "type",
                    None,
                    Exp::prefixed("argument", Some(2), Exp::ident("init"))
                )
            ),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn type_assumption() {
        assert_eq!(
            one("var1 is a variable."),
            Statement::Basic {
                lhs: Exp::ident("var1"),
                negated: false,
                rhs: Rhs::TypeAssumption("variable".into())
            }
        );
        match one("m is a method access.") {
            Statement::Basic {
                rhs: Rhs::TypeAssumption(t),
                ..
            } => assert_eq!(t, "method access"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn membership_and_negation() {
        assert_eq!(
            one(r#"arg1 is not in ["RSA", "AES"]."#),
            Statement::Basic {
                lhs: Exp::ident("arg1"),
                negated: true,
                rhs: Rhs::List(vec![Literal::Str("RSA".into()), Literal::Str("AES".into())])
            }
        );
    }

    #[test]
    fn precedence_and_over_or() {
        let s = one(r#"a is 1 or b is 2 and c is 3."#);
        let Statement::Or(_, rhs) = s else {
            panic!("expected or at the root")
        };
        assert!(matches!(*rhs, Statement::And(_, _)));
    }

    #[test]
    fn false_binds_to_next_connective() {
        let s = one(r#"It is false that a is 1 and b is 2."#);
        let Statement::And(lhs, _) = s else {
            panic!("expected and at the root")
        };
        assert!(matches!(*lhs, Statement::Not(_)));
    }

    #[test]
    fn implication_with_comma() {
        let s = one(r#"If a is 1, then b is 2."#);
        assert!(matches!(s, Statement::If { .. }));
    }

    #[test]
    fn falsity_splitting_form() {
        let src = r#"It is false that if the type of the second argument of init is "PrivateKey", then the algorithm of getInstance's first argument is "RSA" or it is false that if the algorithm of getInstance's first argument is "AES" then the mode of getInstance's first argument is "CBC"."#;
        let Statement::Or(a, b) = one(src) else {
            panic!("expected or at the root")
        };
        assert!(matches!(*a, Statement::Not(ref i) if matches!(**i, Statement::If { .. })));
        assert!(matches!(*b, Statement::Not(ref i) if matches!(**i, Statement::If { .. })));
    }

    #[test]
    fn elliptical_signature() {
        let s = one(r#"getInstance's signature is not ["int"] and is not ["int", "Key"]."#);
        let Statement::And(a, b) = s else {
            panic!("expected and")
        };
        assert_eq!(
            *a,
            Statement::Signature {
                method_name: "getInstance".into(),
                type_names: vec!["int".into()],
                positive: false
            }
        );
        assert_eq!(
            *b,
            Statement::Signature {
                method_name: "getInstance".into(),
                type_names: vec!["int".into(), "Key".into()],
                positive: false
            }
        );
    }

    #[test]
    fn elliptical_basic() {
        let s = one(r#"x is not "a" and is not "b"."#);
        let Statement::And(_, b) = s else {
            panic!("expected and")
        };
        assert_eq!(
            *b,
            Statement::Basic {
                lhs: Exp::ident("x"),
                negated: true,
                rhs: Rhs::Exp(Exp::string("b"))
            }
        );
    }

    #[test]
    fn necessity() {
        let s = one(r#"It is necessary that x is "a"."#);
        assert!(matches!(s, Statement::Necessity(_)));
        let err = parse(r#"It is necessary that it is necessary that x is "a"."#).unwrap_err();
        assert!(matches!(err, FrontendError::NestedNecessity { .. }));
    }

    #[test]
    fn misspelled_keyword() {
        let src = "getInstance precede init.";
        let err = parse(src).unwrap_err();
        match err {
            FrontendError::Syntax { span, expected, .. } => {
                assert_eq!(&src[span.start..span.end], "precede");
                assert!(expected.iter().any(|e| e == "'precedes'"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_ordinal() {
        let err = parse(r#"the eleventh argument of m is "x"."#).unwrap_err();
        assert!(
            matches!(err, FrontendError::UnknownOrdinal { ref word, .. } if word == "eleventh")
        );
    }

    #[test]
    fn empty_list() {
        let src = "x is in [].";
        let err = parse(src).unwrap_err();
        match err {
            FrontendError::EmptyList { span } => assert_eq!(&src[span.start..span.end], "[]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_period() {
        let src = r#"x is "a""#;
        let err = parse(src).unwrap_err();
        match err {
            FrontendError::Syntax { span, found, .. } => {
                assert_eq!(found, "end of input");
                assert_eq!(span, Span::new(src.len(), src.len()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            parse("   ").unwrap_err(),
            FrontendError::Syntax { .. }
        ));
    }

    #[test]
    fn sentence_spans() {
        let src = "An object of Cipher invokes init. getInstance precedes init.";
        let toks = normalize(&tokenize(src).unwrap());
        let (_, spans) = parse_query_with_spans(&toks).unwrap();
        assert_eq!(spans.len(), 2);
        assert_eq!(
            &src[spans[1].start..spans[1].end],
            "getInstance precedes init."
        );
    }
}
