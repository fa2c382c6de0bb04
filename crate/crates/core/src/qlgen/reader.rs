//! A small reader for the QL subset the renderer emits (and the reference
//! listings use): from/where/select, and/or/not/exists, `=` and `<`
//! comparisons over call chains, literals and `count(...)`.

use crate::frontend::Literal;
use crate::semantics::{BoolExpr, Call, Decl, QlExpr, QueryIR};

use super::lexer::{QlToken, QlTokenKind};
use super::QlgenError;

struct Reader<'t> {
    toks: &'t [QlToken],
    pos: usize,
}

pub(crate) fn read_tokens(toks: &[QlToken]) -> Result<QueryIR, QlgenError> {
    let mut r = Reader { toks, pos: 0 };
    r.query()
}

impl<'t> Reader<'t> {
    fn peek(&self) -> Option<&'t QlToken> {
        self.toks.get(self.pos)
    }

    fn peek_is(&self, text: &str) -> bool {
        self.peek().is_some_and(|t| t.is(text))
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.peek_is(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &str) -> Result<T, QlgenError> {
        Err(QlgenError::Read {
            expected: expected.to_string(),
            found: self
                .peek()
                .map_or("end of input".to_string(), |t| format!("`{t}`")),
        })
    }

    fn expect(&mut self, text: &str) -> Result<(), QlgenError> {
        if self.eat(text) {
            Ok(())
        } else {
            self.fail(&format!("`{text}`"))
        }
    }

    fn ident(&mut self) -> Result<String, QlgenError> {
        match self.peek() {
            Some(t) if t.kind == QlTokenKind::Ident => {
                self.pos += 1;
                Ok(t.text.clone())
            }
            _ => self.fail("identifier"),
        }
    }

    fn query(&mut self) -> Result<QueryIR, QlgenError> {
        let mut decls = Vec::new();
        if self.eat("from") && !self.peek_is("where") && !self.peek_is("select") {
            loop {
                decls.push(self.decl()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        let condition = if self.eat("where") {
            self.disjunction()?
        } else {
            BoolExpr::True
        };
        let mut selects = Vec::new();
        if self.eat("select") {
            // `select 1` is the placeholder for an empty list
            if self.peek().is_some_and(|t| t.kind == QlTokenKind::Int) {
                self.pos += 1;
            } else {
                loop {
                    selects.push(self.ident()?);
                    if !self.eat(",") {
                        break;
                    }
                }
            }
        }
        if self.peek().is_some() {
            return self.fail("end of query");
        }
        Ok(QueryIR {
            decls,
            condition,
            selects,
        })
    }

    fn decl(&mut self) -> Result<Decl, QlgenError> {
        let ty = self.ident()?;
        let name = self.ident()?;
        Ok(Decl::new(name, ty))
    }

    fn disjunction(&mut self) -> Result<BoolExpr, QlgenError> {
        let mut items = vec![self.conjunction()?];
        while self.eat("or") {
            items.push(self.conjunction()?);
        }
        Ok(BoolExpr::any(items))
    }

    fn conjunction(&mut self) -> Result<BoolExpr, QlgenError> {
        let mut items = vec![self.unary()?];
        while self.eat("and") {
            items.push(self.unary()?);
        }
        Ok(BoolExpr::all(items))
    }

    fn unary(&mut self) -> Result<BoolExpr, QlgenError> {
        if self.eat("not") {
            return Ok(BoolExpr::not(self.unary()?));
        }
        if self.eat("exists") {
            self.expect("(")?;
            let decl = self.decl()?;
            self.expect("|")?;
            let body = self.disjunction()?;
            self.expect(")")?;
            return Ok(BoolExpr::exists(decl, body));
        }
        if self.eat("(") {
            let inner = self.disjunction()?;
            self.expect(")")?;
            return Ok(inner);
        }
        for (word, value) in [
            ("any", BoolExpr::True),
            ("none", BoolExpr::not(BoolExpr::True)),
        ] {
            if self.peek_is(word) && self.toks.get(self.pos + 1).is_some_and(|t| t.is("(")) {
                self.pos += 2;
                self.expect(")")?;
                return Ok(value);
            }
        }
        let left = self.term()?;
        if self.eat("=") {
            Ok(BoolExpr::eq(left, self.term()?))
        } else if self.eat("<") {
            Ok(BoolExpr::Lt(left, self.term()?))
        } else {
            self.fail("`=` or `<`")
        }
    }

    fn literal(&mut self) -> Option<Literal> {
        let t = self.peek()?;
        let lit = match t.kind {
            QlTokenKind::Str => Literal::Str(t.text.clone()),
            QlTokenKind::Int => Literal::Int(t.text.parse().ok()?),
            _ => return None,
        };
        self.pos += 1;
        Some(lit)
    }

    fn term(&mut self) -> Result<QlExpr, QlgenError> {
        if let Some(lit) = self.literal() {
            return Ok(QlExpr::Lit(lit));
        }
        if self.peek_is("count") && self.toks.get(self.pos + 1).is_some_and(|t| t.is("(")) {
            self.pos += 2;
            let inner = self.term()?;
            self.expect(")")?;
            return Ok(QlExpr::Count(Box::new(inner)));
        }
        let mut e = QlExpr::var(self.ident()?);
        while self.eat(".") {
            let method = self.ident()?;
            self.expect("(")?;
            let mut args = Vec::new();
            if !self.eat(")") {
                loop {
                    match self.literal() {
                        Some(lit) => args.push(lit),
                        None => return self.fail("literal argument"),
                    }
                    if self.eat(")") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            e = e.call([Call::new(method, args)]);
        }
        Ok(e)
    }
}
