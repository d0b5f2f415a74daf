//! Recursive-descent parser for the text grammar.
//!
//! Grammar (highest to lowest binding): `~`, `&`, `|`, `->`; quantifiers
//! extend maximally to the right. Terms: `*` over `+`, prefix `s`, function
//! application `f(t,...)`, bare constants. Atoms: `P(t,...)`, infix `t = u`
//! and `t <= u`. Identifiers are variables only when bound by a quantifier in
//! scope (or explicitly allowed as free); everything else must be declared.

use super::{ExtraSymbols, Formula, NoExtra, Signature, Term, Theory};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Eq,
    Le,
    Plus,
    Star,
}

#[derive(Debug, Clone)]
struct Sp {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Sp>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let col = i + 1;
            match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                }
                '#' => break,
                '(' => {
                    out.push(Sp { tok: Tok::LParen, line: line_no, col });
                    i += 1;
                }
                ')' => {
                    out.push(Sp { tok: Tok::RParen, line: line_no, col });
                    i += 1;
                }
                ',' => {
                    out.push(Sp { tok: Tok::Comma, line: line_no, col });
                    i += 1;
                }
                '.' => {
                    out.push(Sp { tok: Tok::Dot, line: line_no, col });
                    i += 1;
                }
                '~' => {
                    out.push(Sp { tok: Tok::Tilde, line: line_no, col });
                    i += 1;
                }
                '&' => {
                    out.push(Sp { tok: Tok::Amp, line: line_no, col });
                    i += 1;
                }
                '|' => {
                    out.push(Sp { tok: Tok::Pipe, line: line_no, col });
                    i += 1;
                }
                '=' => {
                    out.push(Sp { tok: Tok::Eq, line: line_no, col });
                    i += 1;
                }
                '+' => {
                    out.push(Sp { tok: Tok::Plus, line: line_no, col });
                    i += 1;
                }
                '*' => {
                    out.push(Sp { tok: Tok::Star, line: line_no, col });
                    i += 1;
                }
                '-' => {
                    if bytes.get(i + 1) == Some(&b'>') {
                        out.push(Sp { tok: Tok::Arrow, line: line_no, col });
                        i += 2;
                    } else {
                        return Err(Error::Parse { line: line_no, col, msg: "expected `->`".into() });
                    }
                }
                '<' => {
                    if bytes.get(i + 1) == Some(&b'=') {
                        out.push(Sp { tok: Tok::Le, line: line_no, col });
                        i += 2;
                    } else {
                        return Err(Error::Parse { line: line_no, col, msg: "expected `<=`".into() });
                    }
                }
                _ if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = i;
                    while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                        i += 1;
                    }
                    out.push(Sp { tok: Tok::Ident(line[start..i].to_string()), line: line_no, col });
                }
                _ => {
                    return Err(Error::Parse { line: line_no, col, msg: format!("unexpected character `{c}`") });
                }
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Sp>,
    pos: usize,
    sig: &'a Signature,
    extra: &'a dyn ExtraSymbols,
    bound: Vec<String>,
    free_allowed: Vec<String>,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a Signature, extra: &'a dyn ExtraSymbols, free: &[&str]) -> Result<Self> {
        let toks = lex(text)?;
        let end = toks
            .last()
            .map(|s| (s.line, s.col + 1))
            .unwrap_or((1, 1));
        Ok(Parser {
            toks,
            pos: 0,
            sig,
            extra,
            bound: Vec::new(),
            free_allowed: free.iter().map(|s| s.to_string()).collect(),
            end,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.col)).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse { line, col, msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn function_arity(&self, name: &str) -> Option<usize> {
        self.sig.function_arity(name).or_else(|| self.extra.extra_function_arity(name))
    }

    fn is_var(&self, name: &str) -> bool {
        self.bound.iter().any(|b| b == name) || self.free_allowed.iter().any(|f| f == name)
    }

    // formula := quantifier | implication
    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Ident(w)) if w == "forall" || w == "exists" => self.quantifier(),
            _ => self.implication(),
        }
    }

    fn quantifier(&mut self) -> Result<Formula> {
        let word = match self.bump() {
            Some(Tok::Ident(w)) => w,
            _ => unreachable!(),
        };
        let var = match self.bump() {
            Some(Tok::Ident(v)) if v != "forall" && v != "exists" => v,
            _ => return Err(self.err("expected a variable after quantifier")),
        };
        self.expect(Tok::Dot, "`.` after quantified variable")?;
        self.bound.push(var.clone());
        let body = self.formula()?;
        self.bound.pop();
        Ok(if word == "forall" { Formula::forall(&var, body) } else { Formula::exists(&var, body) })
    }

    // implication := disjunction ('->' implication)?   (right-associative)
    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = match self.peek() {
                Some(Tok::Ident(w)) if w == "forall" || w == "exists" => self.quantifier()?,
                _ => self.implication()?,
            };
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let rhs = match self.peek() {
                Some(Tok::Ident(w)) if w == "forall" || w == "exists" => self.quantifier()?,
                _ => self.conjunction()?,
            };
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.negation()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = match self.peek() {
                Some(Tok::Ident(w)) if w == "forall" || w == "exists" => self.quantifier()?,
                _ => self.negation()?,
            };
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    fn negation(&mut self) -> Result<Formula> {
        if self.peek() == Some(&Tok::Tilde) {
            self.pos += 1;
            let inner = self.negation()?;
            return Ok(Formula::not(inner));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Ident(w)) if w == "forall" || w == "exists" => self.quantifier(),
            Some(Tok::Ident(name)) if self.sig.is_predicate(&name) && !self.is_var(&name) => {
                self.pos += 1;
                let arity = self.sig.predicate_arity(&name).unwrap();
                let args = if self.peek() == Some(&Tok::LParen) { self.arg_list()? } else { Vec::new() };
                if args.len() != arity {
                    return Err(Error::ArityMismatch { name, declared: arity, given: args.len() });
                }
                Ok(Formula::Atom(name, args))
            }
            Some(Tok::LParen) => {
                // Either a parenthesized formula or a parenthesized term that
                // starts a relational atom; try the term reading first.
                let save = self.pos;
                if let Ok(t) = self.term() {
                    match self.peek() {
                        Some(Tok::Eq) | Some(Tok::Le) => return self.relational(t),
                        _ => {}
                    }
                }
                self.pos = save;
                self.expect(Tok::LParen, "`(`")?;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(_)) => {
                let t = self.term()?;
                self.relational(t)
            }
            _ => Err(self.err("expected a formula")),
        }
    }

    fn relational(&mut self, lhs: Term) -> Result<Formula> {
        match self.bump() {
            Some(Tok::Eq) => {
                let rhs = self.term()?;
                Ok(Formula::eq(lhs, rhs))
            }
            Some(Tok::Le) => {
                if !self.sig.is_predicate("<=") {
                    return Err(self.err("`<=` is not declared in this signature"));
                }
                let rhs = self.term()?;
                Ok(Formula::Atom("<=".into(), vec![lhs, rhs]))
            }
            _ => Err(self.err("expected `=` or `<=`")),
        }
    }

    fn arg_list(&mut self) -> Result<Vec<Term>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected `,` or `)` in argument list"));
                }
            }
        }
        Ok(args)
    }

    // term := product ('+' product)*    (left-associative)
    fn term(&mut self) -> Result<Term> {
        let mut t = self.product()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            let rhs = self.product()?;
            t = Term::app("+", vec![t, rhs]);
        }
        Ok(t)
    }

    fn product(&mut self) -> Result<Term> {
        let mut t = self.term_primary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.term_primary()?;
            t = Term::app("*", vec![t, rhs]);
        }
        Ok(t)
    }

    fn term_primary(&mut self) -> Result<Term> {
        match self.bump() {
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                if self.is_var(&name) {
                    return Ok(Term::Var(name));
                }
                // Successor may be written prefix without parentheses.
                if name == "s" && self.function_arity("s") == Some(1) && self.peek() != Some(&Tok::LParen)
                    && matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::LParen)) {
                        let arg = self.term_primary()?;
                        return Ok(Term::app("s", vec![arg]));
                    }
                match self.function_arity(&name) {
                    Some(0) => Ok(Term::App(name, vec![])),
                    Some(arity) => {
                        if self.peek() != Some(&Tok::LParen) {
                            return Err(Error::ArityMismatch { name, declared: arity, given: 0 });
                        }
                        let args = self.arg_list()?;
                        if args.len() != arity {
                            return Err(Error::ArityMismatch { name, declared: arity, given: args.len() });
                        }
                        Ok(Term::App(name, args))
                    }
                    None => Err(Error::UnknownSymbol(name)),
                }
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err("expected a term"))
            }
        }
    }

    fn finish<T>(&self, value: T) -> Result<T> {
        if self.pos == self.toks.len() {
            Ok(value)
        } else {
            Err(self.err("trailing input"))
        }
    }
}

/// Parses a formula in which every identifier must be declared or bound.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    parse_formula_with_free(text, sig, &NoExtra, &[])
}

/// Parses a formula that may mention the listed free variables and the
/// function symbols of `extra` (typically a Skolem registry).
pub fn parse_formula_with_free(
    text: &str,
    sig: &Signature,
    extra: &dyn ExtraSymbols,
    free: &[&str],
) -> Result<Formula> {
    let mut p = Parser::new(text, sig, extra, free)?;
    let f = p.formula()?;
    p.finish(f)
}

/// Parses a single term (no free variables).
pub fn parse_term(text: &str, sig: &Signature, extra: &dyn ExtraSymbols) -> Result<Term> {
    let mut p = Parser::new(text, sig, extra, &[])?;
    let t = p.term()?;
    p.finish(t)
}

/// Parses a signature line: `signature: f/2 g/1 ; P/2 Q/1`. The part before
/// `;` declares functions, the part after declares predicates.
pub fn parse_signature(line: &str) -> Result<Signature> {
    let body = line
        .trim()
        .strip_prefix("signature:")
        .ok_or_else(|| Error::BadSignature("first line must start with `signature:`".into()))?;
    let (fun_part, pred_part) = match body.split_once(';') {
        Some((f, p)) => (f, p),
        None => (body, ""),
    };
    let parse_items = |part: &str| -> Result<Vec<(String, usize)>> {
        part.split_whitespace()
            .map(|item| {
                let (name, arity) = item
                    .split_once('/')
                    .ok_or_else(|| Error::BadSignature(format!("expected NAME/ARITY, got `{item}`")))?;
                let arity: usize = arity
                    .parse()
                    .map_err(|_| Error::BadSignature(format!("bad arity in `{item}`")))?;
                Ok((name.to_string(), arity))
            })
            .collect()
    };
    Signature::new(parse_items(fun_part)?, parse_items(pred_part)?)
}

/// Parses a theory file: a signature line, then one axiom per line. `#`
/// starts a comment; blank lines are skipped.
pub fn parse_theory_file(name: &str, text: &str) -> Result<Theory> {
    let mut sig: Option<Signature> = None;
    let mut axioms = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match &sig {
            None => sig = Some(parse_signature(line)?),
            Some(s) => {
                let ax = parse_formula(line, s).map_err(|e| match e {
                    Error::Parse { col, msg, .. } => Error::Parse { line: li + 1, col, msg },
                    other => other,
                })?;
                axioms.push(ax);
            }
        }
    }
    let sig = sig.ok_or_else(|| Error::BadSignature("missing signature line".into()))?;
    Theory::new(name, sig, axioms)
}
