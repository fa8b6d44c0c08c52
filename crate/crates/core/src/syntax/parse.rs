use super::{name, Env, Name, Proof, Prop, Signature, Style, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Assign,
    Arrow,
    Bang,
    Lambda,
    Caret,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Arrow => "`=>`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Lambda => "`\\`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = if is_ident_start(c) {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !is_ident_char(d) {
                    break;
                }
                s.push(d);
                bump(&mut chars);
            }
            Tok::Ident(s)
        } else {
            bump(&mut chars);
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '!' | '∀' => Tok::Bang,
                '\\' | 'λ' => Tok::Lambda,
                '^' => Tok::Caret,
                '⇒' => Tok::Arrow,
                ':' => {
                    if chars.peek() == Some(&'=') {
                        bump(&mut chars);
                        Tok::Assign
                    } else {
                        Tok::Colon
                    }
                }
                '=' if chars.peek() == Some(&'>') => {
                    bump(&mut chars);
                    Tok::Arrow
                }
                _ => {
                    return Err(ParseError {
                        line: l,
                        col: k,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push((tok, l, k));
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

/// Recursive-descent parser over the ASCII grammar. With a signature the
/// parser is strict: symbols must be declared and arities must match, and a
/// bare identifier declared as a constant denotes that constant.
pub struct Parser<'s> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    sig: Option<&'s Signature>,
}

impl<'s> Parser<'s> {
    pub fn new(text: &str, sig: Option<&'s Signature>) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            sig,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, msg: impl Into<String>) -> ParseError {
        let (_, line, col) = &self.toks[self.pos];
        ParseError {
            line: *line,
            col: *col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(name(&s))
            }
            t => Err(self.error_here(format!("expected identifier, found {}", t.describe()))),
        }
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error_here(format!("unexpected {}", self.peek().describe())))
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            if *self.peek() != Tok::RParen {
                args.push(self.term()?);
                while *self.peek() == Tok::Comma {
                    self.next();
                    args.push(self.term()?);
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok(args)
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.pos;
        let head = self.ident()?;
        let explicit = *self.peek() == Tok::LParen;
        let args = self.args()?;
        let Some(sig) = self.sig else {
            return Ok(if explicit {
                Term::App(head, args)
            } else {
                Term::Var(head)
            });
        };
        match sig.fun_arity(&head) {
            Some(n) if n == args.len() => Ok(Term::App(head, args)),
            Some(n) => {
                self.pos = at;
                Err(self.error_here(format!(
                    "function `{head}` expects {n} argument(s), got {}",
                    args.len()
                )))
            }
            None if explicit => {
                self.pos = at;
                Err(self.error_here(format!("undeclared function `{head}`")))
            }
            None => Ok(Term::Var(head)),
        }
    }

    pub fn prop(&mut self) -> Result<Prop, ParseError> {
        let lhs = self.prop_unary()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.prop()?;
            return Ok(Prop::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn prop_unary(&mut self) -> Result<Prop, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.next();
                let x = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.prop()?;
                Ok(Prop::Forall(x, Box::new(body)))
            }
            Tok::LParen => {
                self.next();
                let p = self.prop()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            _ => {
                let at = self.pos;
                let p = self.ident()?;
                let args = self.args()?;
                if let Some(sig) = self.sig {
                    match sig.pred_arity(&p) {
                        Some(n) if n == args.len() => {}
                        Some(n) => {
                            self.pos = at;
                            return Err(self.error_here(format!(
                                "predicate `{p}` expects {n} argument(s), got {}",
                                args.len()
                            )));
                        }
                        None => {
                            self.pos = at;
                            return Err(self.error_here(format!("undeclared predicate `{p}`")));
                        }
                    }
                }
                Ok(Prop::Atom(p, args))
            }
        }
    }

    pub fn proof(&mut self, style: Style) -> Result<Proof, ParseError> {
        match self.peek() {
            Tok::Lambda => {
                self.next();
                let a = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.proof(style)?;
                Ok(Proof::Lam(a, Box::new(body)))
            }
            Tok::Caret => {
                if style == Style::Curry {
                    return Err(self.error_here("term abstraction in a Curry-style proof-term"));
                }
                self.next();
                let x = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.proof(style)?;
                Ok(Proof::TLam(x, Box::new(body)))
            }
            _ => self.proof_app(style),
        }
    }

    fn proof_app(&mut self, style: Style) -> Result<Proof, ParseError> {
        let mut acc = self.proof_atom(style)?;
        loop {
            match self.peek() {
                Tok::Ident(_) | Tok::LParen => {
                    let arg = self.proof_atom(style)?;
                    acc = Proof::App(Box::new(acc), Box::new(arg));
                }
                Tok::Lambda | Tok::Caret => {
                    let arg = self.proof(style)?;
                    return Ok(Proof::App(Box::new(acc), Box::new(arg)));
                }
                Tok::LBracket => {
                    if style == Style::Curry {
                        return Err(self.error_here("term application in a Curry-style proof-term"));
                    }
                    self.next();
                    let t = self.term()?;
                    self.expect(Tok::RBracket)?;
                    acc = Proof::TApp(Box::new(acc), t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn proof_atom(&mut self, style: Style) -> Result<Proof, ParseError> {
        if *self.peek() == Tok::LParen {
            self.next();
            let p = self.proof(style)?;
            self.expect(Tok::RParen)?;
            return Ok(p);
        }
        Ok(Proof::Var(self.ident()?))
    }

    /// `a:A, b:B`; the empty string is the empty context.
    pub fn context(&mut self) -> Result<Vec<(Name, Prop)>, ParseError> {
        let mut out = Vec::new();
        if self.at_end() {
            return Ok(out);
        }
        loop {
            let a = self.ident()?;
            self.expect(Tok::Colon)?;
            out.push((a, self.prop()?));
            if *self.peek() != Tok::Comma {
                return Ok(out);
            }
            self.next();
        }
    }

    /// `x:=c, y:=f(c)`.
    pub fn env(&mut self) -> Result<Env, ParseError> {
        let mut out = Env::new();
        if self.at_end() {
            return Ok(out);
        }
        loop {
            let x = self.ident()?;
            self.expect(Tok::Assign)?;
            let t = self.term()?;
            out.insert(x, t);
            if *self.peek() != Tok::Comma {
                return Ok(out);
            }
            self.next();
        }
    }
}

fn whole<'s, T>(
    text: &str,
    sig: Option<&'s Signature>,
    f: impl FnOnce(&mut Parser<'s>) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_term(text: &str, sig: Option<&Signature>) -> Result<Term, ParseError> {
    whole(text, sig, Parser::term)
}

pub fn parse_prop(text: &str, sig: Option<&Signature>) -> Result<Prop, ParseError> {
    whole(text, sig, Parser::prop)
}

pub fn parse_proof(text: &str, style: Style, sig: Option<&Signature>) -> Result<Proof, ParseError> {
    whole(text, sig, |p| p.proof(style))
}

pub fn parse_context(text: &str, sig: Option<&Signature>) -> Result<Vec<(Name, Prop)>, ParseError> {
    whole(text, sig, Parser::context)
}

pub fn parse_env(text: &str, sig: Option<&Signature>) -> Result<Env, ParseError> {
    whole(text, sig, Parser::env)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(
            vec![(name("c"), 0), (name("f"), 1)],
            vec![(name("P"), 0), (name("Q"), 1), (name("A"), 0), (name("B"), 0)],
        )
        .unwrap()
    }

    #[test]
    fn atoms_and_binders() {
        assert_eq!(parse_prop("P", Some(&sig())).unwrap(), Prop::atom("P", vec![]));
        let p = parse_prop("!x. (A => B)", Some(&sig())).unwrap();
        assert_eq!(p, Prop::forall("x", Prop::imp(Prop::atom("A", vec![]), Prop::atom("B", vec![]))));
        let q = parse_prop("!x. A => B", None).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn implication_is_right_associative() {
        let p = parse_prop("A => B => A", None).unwrap();
        let a = Prop::atom("A", vec![]);
        let b = Prop::atom("B", vec![]);
        assert_eq!(p, Prop::imp(a.clone(), Prop::imp(b, a)));
    }

    #[test]
    fn constants_resolve_through_signature() {
        let p = parse_prop("Q(c) => Q(x)", Some(&sig())).unwrap();
        let Prop::Imp(l, r) = p else { panic!() };
        assert_eq!(*l, Prop::atom("Q", vec![Term::constant("c")]));
        assert_eq!(*r, Prop::atom("Q", vec![Term::var("x")]));
    }

    #[test]
    fn arity_errors_carry_position() {
        let e = parse_prop("P => Q(c, c)", Some(&sig())).unwrap_err();
        assert_eq!((e.line, e.col), (1, 6));
        assert!(e.msg.contains("expects 1"));
        assert!(parse_term("f", Some(&sig())).is_err());
        assert!(parse_prop("Z", Some(&sig())).is_err());
    }

    #[test]
    fn proofs() {
        let p = parse_proof("\\a. a a", Style::Curry, None).unwrap();
        let want = Proof::lam("a", Proof::app(Proof::var("a"), Proof::var("a")));
        assert_eq!(p, want);
        let c = parse_proof("^x. h [x] b", Style::Church, None).unwrap();
        let want = Proof::tlam(
            "x",
            Proof::app(Proof::tapp(Proof::var("h"), Term::var("x")), Proof::var("b")),
        );
        assert_eq!(c, want);
        assert!(parse_proof("h [x]", Style::Curry, None).is_err());
        assert!(parse_proof("^x. h", Style::Curry, None).is_err());
    }

    #[test]
    fn application_is_left_associative() {
        let p = parse_proof("a b c", Style::Curry, None).unwrap();
        let want = Proof::app(Proof::app(Proof::var("a"), Proof::var("b")), Proof::var("c"));
        assert_eq!(p, want);
    }

    #[test]
    fn contexts_and_envs() {
        let ctx = parse_context("a:A, b:Q(f(c))", Some(&sig())).unwrap();
        assert_eq!(ctx.len(), 2);
        assert!(parse_context("", None).unwrap().is_empty());
        let env = parse_env("x:=c, y:=f(c)", Some(&sig())).unwrap();
        assert_eq!(env[&name("y")], Term::app("f", vec![Term::constant("c")]));
    }

    #[test]
    fn rejects_trailing_input() {
        assert!(parse_prop("P )", None).is_err());
        assert!(parse_proof("(a", Style::Curry, None).is_err());
        assert!(parse_prop("P # Q", None).is_err());
    }
}
