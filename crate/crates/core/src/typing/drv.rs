//! The `.drv` derivation format: one parenthesized form per node,
//! `(tag field:"value" … child …)`.
//!
//! Tags are `axiom`, `imp-intro`, `imp-elim`, `forall-intro` and
//! `forall-elim`. Every node carries `ctx`, `subj` and `prop`; `wit` holds
//! `A => B` for the implication rules and `!x. A` for the quantifier rules;
//! `forall-elim` adds `term`, `axiom` adds `hyp`. Inside strings only `\"`
//! and `\\` are escapes. `#` starts a comment outside strings.

use std::fmt::Write as _;

use super::{Context, Derivation, Judgement, Rule};
use crate::syntax::{parse_context, parse_proof, parse_prop, parse_term, Name, ParseError, Proof, Prop, Signature, Style};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct DrvError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
    Field(String, String),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, DrvError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    let bump = |c: char, line: &mut usize, col: &mut usize| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        match c {
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    bump(c, &mut line, &mut col);
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '(' | ')' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push((if c == '(' { Tok::Open } else { Tok::Close }, l0, c0));
            }
            c if c.is_ascii_alphabetic() => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                        w.push(c);
                        chars.next();
                        bump(c, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                if chars.peek() == Some(&':') {
                    chars.next();
                    bump(':', &mut line, &mut col);
                    if chars.next() != Some('"') {
                        return Err(DrvError {
                            line,
                            col,
                            msg: format!("field `{w}` needs a quoted value"),
                        });
                    }
                    bump('"', &mut line, &mut col);
                    let mut v = String::new();
                    loop {
                        let Some(c) = chars.next() else {
                            return Err(DrvError {
                                line: l0,
                                col: c0,
                                msg: "unterminated string".into(),
                            });
                        };
                        bump(c, &mut line, &mut col);
                        match c {
                            '"' => break,
                            '\\' if matches!(chars.peek(), Some('"') | Some('\\')) => {
                                let e = chars.next().expect("peeked");
                                bump(e, &mut line, &mut col);
                                v.push(e);
                            }
                            c => v.push(c),
                        }
                    }
                    out.push((Tok::Field(w, v), l0, c0));
                } else {
                    out.push((Tok::Word(w), l0, c0));
                }
            }
            c => {
                return Err(DrvError {
                    line,
                    col,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Reader<'s> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    style: Style,
    sig: Option<&'s Signature>,
}

impl Reader<'_> {
    fn err(&self, at: usize, msg: impl Into<String>) -> DrvError {
        let (line, col) = self
            .toks
            .get(at)
            .or(self.toks.last())
            .map(|t| (t.1, t.2))
            .unwrap_or((1, 1));
        DrvError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn field_err(&self, at: usize, field: &str, e: ParseError) -> DrvError {
        self.err(at, format!("in `{field}`: {e}"))
    }

    fn node(&mut self) -> Result<Derivation, DrvError> {
        let start = self.pos;
        if self.toks.get(self.pos).map(|t| &t.0) != Some(&Tok::Open) {
            return Err(self.err(self.pos, "expected `(`"));
        }
        self.pos += 1;
        let tag = match self.toks.get(self.pos) {
            Some((Tok::Word(w), ..)) => w.clone(),
            _ => return Err(self.err(self.pos, "expected a rule tag")),
        };
        self.pos += 1;
        let mut fields: Vec<(String, String, usize)> = Vec::new();
        let mut premises = Vec::new();
        loop {
            match self.toks.get(self.pos).map(|t| t.0.clone()) {
                Some(Tok::Close) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Open) => premises.push(self.node()?),
                Some(Tok::Field(k, v)) => {
                    if fields.iter().any(|(f, ..)| *f == k) {
                        return Err(self.err(self.pos, format!("field `{k}` given twice")));
                    }
                    fields.push((k, v, self.pos));
                    self.pos += 1;
                }
                Some(Tok::Word(w)) => return Err(self.err(self.pos, format!("unexpected word `{w}`"))),
                None => return Err(self.err(start, "unclosed `(`")),
            }
        }
        let get = |k: &str| fields.iter().find(|(f, ..)| f == k).map(|(_, v, at)| (v.as_str(), *at));
        let need = |k: &str| get(k).ok_or_else(|| self.err(start, format!("`{tag}` node lacks field `{k}`")));
        let (ctx_s, at) = need("ctx")?;
        let ctx = Context(parse_context(ctx_s, self.sig).map_err(|e| self.field_err(at, "ctx", e))?);
        let (subj_s, at) = need("subj")?;
        let subject = parse_proof(subj_s, self.style, self.sig).map_err(|e| self.field_err(at, "subj", e))?;
        let (prop_s, at) = need("prop")?;
        let prop = parse_prop(prop_s, self.sig).map_err(|e| self.field_err(at, "prop", e))?;
        let wit = |this: &Self| -> Result<(Prop, usize), DrvError> {
            let (w, at) = get("wit").ok_or_else(|| this.err(start, format!("`{tag}` node lacks field `wit`")))?;
            Ok((parse_prop(w, this.sig).map_err(|e| this.field_err(at, "wit", e))?, at))
        };
        let rule = match tag.as_str() {
            "axiom" => {
                let hyp: Name = match (get("hyp"), &subject) {
                    (Some((h, _)), _) => crate::syntax::name(h.trim()),
                    (None, Proof::Var(a)) => a.clone(),
                    (None, _) => return Err(self.err(start, "axiom node lacks field `hyp`")),
                };
                Rule::Axiom { hyp }
            }
            "imp-intro" | "imp-elim" => {
                let (w, at) = wit(self)?;
                let Prop::Imp(dom, cod) = w else {
                    return Err(self.err(at, "`wit` must be an implication"));
                };
                if tag == "imp-elim" {
                    Rule::ImpElim { dom: *dom, cod: *cod }
                } else {
                    let hyp = match (get("hyp"), &subject) {
                        (Some((h, _)), _) => crate::syntax::name(h.trim()),
                        (None, Proof::Lam(a, _)) => a.clone(),
                        (None, _) => return Err(self.err(start, "imp-intro subject must be an abstraction")),
                    };
                    Rule::ImpIntro {
                        hyp,
                        dom: *dom,
                        cod: *cod,
                    }
                }
            }
            "forall-intro" | "forall-elim" => {
                let (w, at) = wit(self)?;
                let Prop::Forall(var, body) = w else {
                    return Err(self.err(at, "`wit` must be a universal proposition"));
                };
                if tag == "forall-intro" {
                    Rule::ForallIntro { var, body: *body }
                } else {
                    let (t, at) = need("term")?;
                    let inst = parse_term(t, self.sig).map_err(|e| self.field_err(at, "term", e))?;
                    Rule::ForallElim { var, body: *body, inst }
                }
            }
            other => return Err(self.err(start + 1, format!("unknown rule `{other}`"))),
        };
        if premises.len() != rule.arity() {
            return Err(self.err(
                start,
                format!("`{tag}` takes {} premises, found {}", rule.arity(), premises.len()),
            ));
        }
        Ok(Derivation {
            style: self.style,
            rule,
            concl: Judgement { ctx, subject, prop },
            premises,
        })
    }
}

/// Parses every top-level derivation in the text.
pub fn parse_drv_many(text: &str, style: Style, sig: Option<&Signature>) -> Result<Vec<Derivation>, DrvError> {
    let mut r = Reader {
        toks: lex(text)?,
        pos: 0,
        style,
        sig,
    };
    let mut out = Vec::new();
    while r.pos < r.toks.len() {
        out.push(r.node()?);
    }
    Ok(out)
}

/// Parses exactly one derivation.
pub fn parse_drv(text: &str, style: Style, sig: Option<&Signature>) -> Result<Derivation, DrvError> {
    let mut all = parse_drv_many(text, style, sig)?;
    match all.len() {
        1 => Ok(all.pop().expect("one element")),
        n => Err(DrvError {
            line: 1,
            col: 1,
            msg: format!("expected one derivation, found {n}"),
        }),
    }
}

fn quote(s: &str, out: &mut String) {
    out.push('"');
    let cs: Vec<char> = s.chars().collect();
    for (i, &c) in cs.iter().enumerate() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' if matches!(cs.get(i + 1), None | Some('"') | Some('\\')) => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn field(k: &str, v: &str, out: &mut String) {
    let _ = write!(out, " {k}:");
    quote(v, out);
}

fn print_node(d: &Derivation, indent: usize, out: &mut String) {
    let _ = write!(out, "{:indent$}({}", "", d.rule.tag());
    field("ctx", &d.concl.ctx.to_string(), out);
    field("subj", &d.concl.subject.to_string(), out);
    field("prop", &d.concl.prop.to_string(), out);
    match &d.rule {
        Rule::Axiom { hyp } => field("hyp", hyp, out),
        Rule::ImpIntro { hyp, dom, cod } => {
            field("hyp", hyp, out);
            field("wit", &Prop::imp(dom.clone(), cod.clone()).to_string(), out);
        }
        Rule::ImpElim { dom, cod } => field("wit", &Prop::imp(dom.clone(), cod.clone()).to_string(), out),
        Rule::ForallIntro { var, body } => {
            field("wit", &Prop::Forall(var.clone(), Box::new(body.clone())).to_string(), out)
        }
        Rule::ForallElim { var, body, inst } => {
            field("wit", &Prop::Forall(var.clone(), Box::new(body.clone())).to_string(), out);
            field("term", &inst.to_string(), out);
        }
    }
    for p in &d.premises {
        out.push('\n');
        print_node(p, indent + 2, out);
    }
    out.push(')');
}

pub fn print_drv(d: &Derivation) -> String {
    let mut out = String::new();
    print_node(d, 0, &mut out);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::parse_theory;
    use crate::syntax::Term;
    use crate::typing::check_derivation;

    const DELTA: &str = r#"
# self-application under A --> A => A, with B := A
(imp-elim ctx:"a:A" subj:"(\a. a a) (\a. a a)" prop:"A" wit:"A => A"
  (imp-intro ctx:"a:A" subj:"\a. a a" prop:"A => A" wit:"A => A"
    (imp-elim ctx:"a:A" subj:"a a" prop:"A" wit:"A => A"
      (axiom ctx:"a:A" subj:"a" prop:"A => A" hyp:"a")
      (axiom ctx:"a:A" subj:"a" prop:"A" hyp:"a")))
  (imp-intro ctx:"a:A" subj:"\a. a a" prop:"A" wit:"A => A"
    (imp-elim ctx:"a:A" subj:"a a" prop:"A" wit:"A => A"
      (axiom ctx:"a:A" subj:"a" prop:"A => A" hyp:"a")
      (axiom ctx:"a:A" subj:"a" prop:"A" hyp:"a"))))
"#;

    #[test]
    fn reads_and_checks_delta_delta() {
        let t = parse_theory("pred A/0.\nrule A --> A => A.\n").unwrap();
        let d = parse_drv(DELTA, Style::Curry, Some(&t.signature)).unwrap();
        assert!(check_derivation(&t, &d, 50).is_ok());
        let again = parse_drv(&print_drv(&d), Style::Curry, Some(&t.signature)).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn church_round_trip() {
        let t = parse_theory("pred Q/1.\nfun c/0.\n").unwrap();
        let ctx = Context(vec![(crate::syntax::name("h"), parse_prop("!x. Q(x)", None).unwrap())]);
        let ax = Derivation::axiom(Style::Church, ctx, "h", parse_prop("!x. Q(x)", None).unwrap());
        let d = Derivation::forall_elim(ax, Term::constant("c")).unwrap();
        let text = print_drv(&d);
        assert!(text.contains("term:\"c\""));
        let back = parse_drv(&text, Style::Church, Some(&t.signature)).unwrap();
        assert!(check_derivation(&t, &back, 10).is_ok());
    }

    #[test]
    fn escapes() {
        let mut s = String::new();
        quote("\\a. a \"q\" \\", &mut s);
        let toks = lex(&format!("f:{s}")).unwrap();
        assert_eq!(toks[0].0, Tok::Field("f".into(), "\\a. a \"q\" \\".into()));
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_drv("(axiom ctx:\"\" subj:\"a\")", Style::Curry, None).unwrap_err();
        assert!(e.msg.contains("prop"));
        let e = parse_drv("(imp-elim ctx:\"\" subj:\"a\" prop:\"P\" wit:\"P\")", Style::Curry, None).unwrap_err();
        assert!(e.msg.contains("implication"));
        assert!(parse_drv("(axiom", Style::Curry, None).is_err());
        assert!(parse_drv("", Style::Curry, None).is_err());
    }
}
