//! The line-oriented `.mdm` theory format.

use super::{validate_rule, RewriteRule, Theory};
use crate::syntax::{name, parse_prop, parse_term, Name, ParseError, Signature};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct TheoryError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> TheoryError {
    TheoryError {
        line,
        msg: msg.into(),
    }
}

fn shift(line: usize, offset: usize, e: ParseError) -> TheoryError {
    let col = if e.line == 1 { e.col + offset } else { e.col };
    err(line, format!("column {col}: {}", e.msg))
}

fn decl(line: usize, body: &str) -> Result<Vec<(Name, usize)>, TheoryError> {
    let mut out = Vec::new();
    for item in body.split(',') {
        let (n, a) = item
            .trim()
            .split_once('/')
            .ok_or_else(|| err(line, format!("expected `name/arity`, found `{}`", item.trim())))?;
        let n = n.trim();
        let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if !ok {
            return Err(err(line, format!("bad symbol name `{n}`")));
        }
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| err(line, format!("bad arity `{}`", a.trim())))?;
        out.push((name(n), a));
    }
    Ok(out)
}

/// Parses a theory. Statements end with `.`; `#` starts a comment.
pub fn parse_theory(text: &str) -> Result<Theory, TheoryError> {
    let mut theory_name = String::from("anonymous");
    let mut functions = Vec::new();
    let mut predicates = Vec::new();
    let mut rule_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stmt = raw.split('#').next().unwrap_or("").trim();
        if stmt.is_empty() {
            continue;
        }
        let stmt = stmt
            .strip_suffix('.')
            .ok_or_else(|| err(line, "statement must end with `.`"))?
            .trim_end();
        let (kw, rest) = stmt.split_once(char::is_whitespace).unwrap_or((stmt, ""));
        match kw {
            "theory" => theory_name = rest.trim().to_string(),
            "pred" => predicates.extend(decl(line, rest)?),
            "fun" => functions.extend(decl(line, rest)?),
            "rule" => {
                let offset = raw.find("rule").unwrap_or(0) + 5;
                rule_lines.push((line, offset, rest.to_string()));
            }
            other => return Err(err(line, format!("unknown statement `{other}`"))),
        }
    }
    let sig = Signature::new(functions, predicates).map_err(|e| err(0, e.to_string()))?;
    let mut rules = Vec::new();
    for (line, offset, body) in rule_lines {
        let r = parse_rule(&sig, line, offset, &body)?;
        validate_rule(&sig, &r).map_err(|msg| err(line, msg))?;
        rules.push(r);
    }
    Theory::new(&theory_name, sig, rules)
}

fn parse_rule(sig: &Signature, line: usize, offset: usize, body: &str) -> Result<RewriteRule, TheoryError> {
    let (is_term, body, offset) = match body.strip_prefix("term") {
        Some(rest) if rest.starts_with(char::is_whitespace) && sig.pred_arity("term").is_none() => {
            (true, rest, offset + 4)
        }
        _ => (false, body, offset),
    };
    let (at, oriented) = match (body.find("<->"), body.find("-->")) {
        (Some(i), None) => (i, false),
        (None, Some(i)) => (i, true),
        _ => return Err(err(line, "a rule needs exactly one `<->` or `-->`")),
    };
    let (l, r) = (&body[..at], &body[at + 3..]);
    if is_term {
        let lhs = parse_term(l, Some(sig)).map_err(|e| shift(line, offset, e))?;
        let rhs = parse_term(r, Some(sig)).map_err(|e| shift(line, offset + at + 3, e))?;
        Ok(RewriteRule::term(lhs, rhs, oriented))
    } else {
        let lhs = parse_prop(l, Some(sig)).map_err(|e| shift(line, offset, e))?;
        let rhs = parse_prop(r, Some(sig)).map_err(|e| shift(line, offset + at + 3, e))?;
        Ok(RewriteRule::prop(lhs, rhs, oriented))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::RuleBody;

    #[test]
    fn parses_selfapp() {
        let t = parse_theory("theory selfapp.\npred A/0, B/0.\n# loop\nrule A --> A => A.\n").unwrap();
        assert_eq!(t.name, "selfapp");
        assert_eq!(t.rules().len(), 1);
        assert!(t.rules()[0].oriented);
        let again = parse_theory(&t.to_string()).unwrap();
        assert_eq!(again.rules(), t.rules());
    }

    #[test]
    fn parses_term_rules() {
        let t = parse_theory("pred N/1.\nfun z/0.\nfun s/1.\nrule term s(s(x)) <-> s(x).\n").unwrap();
        assert!(matches!(t.rules()[0].body, RuleBody::Term { .. }));
    }

    #[test]
    fn reports_lines() {
        let e = parse_theory("pred A/0.\n\nrule A <-> C.\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(parse_theory("pred A/0\n").unwrap_err().line, 1);
        assert!(parse_theory("fun c/0.\n").is_err());
        assert!(parse_theory("pred A/0.\nrule A A.\n").is_err());
        let e = parse_theory("pred Q/1.\npred P/0.\nrule Q(x) --> P.\n").unwrap_err();
        assert_eq!(e.line, 3);
    }
}
