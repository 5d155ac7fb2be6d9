//! Text syntax for the core fragment.
//!
//! ```text
//! expr    := pattern | "(" expr "AND" expr ")" | "(" expr "UNION" expr ")"
//!          | "(" expr "OPT" expr ")" | "(" expr "FILTER" cond ")"
//! pattern := "(" (uri|var) (uri|var) (uri|literal|var) ")"
//! cond    := var "=" (uri|literal|var) | "BOUND" "(" var ")" | "!" cond
//!          | "(" cond "&&" cond ")" | "(" cond "||" cond ")"
//! ```
//!
//! Binary operators are always parenthesized, keywords are uppercase, and
//! `#` starts a comment running to the end of the line.

use std::fmt;

use thiserror::Error;

use crate::algebra::{FilterCondition, SparqlExpression};
use crate::term::{name_char_ok, scan_literal, PatternTerm, Term, TriplePattern, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

pub fn parse_expression(input: &str) -> Result<SparqlExpression, ParseError> {
    let mut p = Parser { input, pos: 0 };
    let expr = p.expr()?;
    p.end()?;
    Ok(expr)
}

pub fn parse_condition(input: &str) -> Result<FilterCondition, ParseError> {
    let mut p = Parser { input, pos: 0 };
    let cond = p.cond()?;
    p.end()?;
    Ok(cond)
}

/// Canonical text; `parse_expression(&print_expression(p)) == p`.
pub fn print_expression(p: &SparqlExpression) -> String {
    Printer(p).to_string()
}

pub fn print_condition(c: &FilterCondition) -> String {
    CondPrinter(c).to_string()
}

struct Printer<'a>(&'a SparqlExpression);

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SparqlExpression::Pattern(tp) => write!(f, "{tp}"),
            SparqlExpression::And(l, r) => write!(f, "({} AND {})", Printer(l), Printer(r)),
            SparqlExpression::Union(l, r) => write!(f, "({} UNION {})", Printer(l), Printer(r)),
            SparqlExpression::Opt(l, r) => write!(f, "({} OPT {})", Printer(l), Printer(r)),
            SparqlExpression::Filter(p, c) => {
                write!(f, "({} FILTER {})", Printer(p), CondPrinter(c))
            }
        }
    }
}

struct CondPrinter<'a>(&'a FilterCondition);

impl fmt::Display for CondPrinter<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            FilterCondition::Eq(x, c) => write!(f, "{x} = {c}"),
            FilterCondition::EqVar(x, y) => write!(f, "{x} = {y}"),
            FilterCondition::Bound(x) => write!(f, "BOUND({x})"),
            FilterCondition::Not(r) => write!(f, "!{}", CondPrinter(r)),
            FilterCondition::And(l, r) => write!(f, "({} && {})", CondPrinter(l), CondPrinter(r)),
            FilterCondition::Or(l, r) => write!(f, "({} || {})", CondPrinter(l), CondPrinter(r)),
        }
    }
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// The token at the cursor, for error messages.
    fn found(&self) -> String {
        let rest = self.rest();
        if rest.is_empty() {
            return "end of input".to_owned();
        }
        let end = rest
            .char_indices()
            .skip(1)
            .find(|(_, c)| c.is_whitespace() || matches!(c, '(' | ')'))
            .map_or(rest.len(), |(i, _)| i);
        format!("{:?}", &rest[..end])
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            expected: expected.into(),
            found: self.found(),
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("{token:?}")))
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn keyword(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(rest.len());
        &rest[..len]
    }

    fn expr(&mut self) -> Result<SparqlExpression, ParseError> {
        self.expect("(")?;
        if self.peek() != Some('(') {
            return self.pattern_tail();
        }
        let left = self.expr()?;
        let kw = self.keyword();
        let built = match kw {
            "AND" | "UNION" | "OPT" => {
                self.pos += kw.len();
                let right = self.expr()?;
                match kw {
                    "AND" => SparqlExpression::and(left, right),
                    "UNION" => SparqlExpression::union(left, right),
                    _ => SparqlExpression::opt(left, right),
                }
            }
            "FILTER" => {
                self.pos += kw.len();
                SparqlExpression::filter(left, self.cond()?)
            }
            _ => return Err(self.error("AND, UNION, OPT or FILTER")),
        };
        self.expect(")")?;
        Ok(built)
    }

    fn pattern_tail(&mut self) -> Result<SparqlExpression, ParseError> {
        let s = self.position_term(Slot::Subject)?;
        let p = self.position_term(Slot::Predicate)?;
        let o = self.position_term(Slot::Object)?;
        self.expect(")")?;
        let tp = TriplePattern::new(s, p, o).expect("slots are checked while parsing");
        Ok(SparqlExpression::Pattern(tp))
    }

    fn position_term(&mut self, slot: Slot) -> Result<PatternTerm, ParseError> {
        match self.peek() {
            Some('?') => Ok(PatternTerm::Var(self.var()?)),
            Some('<') => Ok(PatternTerm::Term(self.uri()?)),
            Some('"') if slot == Slot::Object => Ok(PatternTerm::Term(self.literal()?)),
            Some('_') if self.rest().starts_with("_:") => Err(self.error(format!(
                "{} (blank nodes are not permitted in triple patterns)",
                slot.expected()
            ))),
            _ => Err(self.error(slot.expected())),
        }
    }

    fn var(&mut self) -> Result<Variable, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if !self.eat("?") {
            return Err(self.error("a variable"));
        }
        let rest = self.rest();
        let len = rest.find(|c: char| !name_char_ok(c)).unwrap_or(rest.len());
        if len == 0 {
            self.pos = start;
            return Err(self.error("a variable name after '?'"));
        }
        self.pos += len;
        Ok(Variable::new(&rest[..len]).expect("name characters checked"))
    }

    fn uri(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let Some(close) = rest.find('>') else {
            return Err(self.error("a URI terminated by '>'"));
        };
        match Term::uri(&rest[1..close]) {
            Ok(t) => {
                self.pos += close + 1;
                Ok(t)
            }
            Err(e) => {
                self.pos = start;
                Err(self.error(format!("a valid URI ({e})")))
            }
        }
    }

    fn literal(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        match scan_literal(self.rest()) {
            Some((text, used)) => {
                self.pos += used;
                Ok(Term::literal(text))
            }
            None => Err(self.error("a terminated string literal")),
        }
    }

    fn cond(&mut self) -> Result<FilterCondition, ParseError> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(FilterCondition::not(self.cond()?))
            }
            Some('(') => {
                self.pos += 1;
                let left = self.cond()?;
                let op_and = if self.eat("&&") {
                    true
                } else if self.eat("||") {
                    false
                } else {
                    return Err(self.error("'&&' or '||'"));
                };
                let right = self.cond()?;
                self.expect(")")?;
                Ok(if op_and {
                    FilterCondition::and(left, right)
                } else {
                    FilterCondition::or(left, right)
                })
            }
            Some('?') => {
                let x = self.var()?;
                self.expect("=")?;
                match self.peek() {
                    Some('?') => Ok(FilterCondition::EqVar(x, self.var()?)),
                    Some('<') => Ok(FilterCondition::Eq(x, self.uri()?)),
                    Some('"') => Ok(FilterCondition::Eq(x, self.literal()?)),
                    _ => Err(self.error("a URI, literal or variable")),
                }
            }
            _ if self.keyword() == "BOUND" => {
                self.pos += "BOUND".len();
                self.expect("(")?;
                let x = self.var()?;
                self.expect(")")?;
                Ok(FilterCondition::Bound(x))
            }
            _ => Err(self.error("a filter condition")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Subject,
    Predicate,
    Object,
}

impl Slot {
    fn expected(self) -> &'static str {
        match self {
            Slot::Subject | Slot::Predicate => "a URI or variable",
            Slot::Object => "a URI, literal or variable",
        }
    }
}
