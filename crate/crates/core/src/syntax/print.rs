use std::fmt;

use super::{Proof, Prop, Signature, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::App(g, args) if args.is_empty() => f.write_str(g),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Atom(p, args) if args.is_empty() => f.write_str(p),
            Prop::Atom(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Prop::Imp(a, b) => {
                if matches!(**a, Prop::Atom(..)) {
                    write!(f, "{a} => {b}")
                } else {
                    write!(f, "({a}) => {b}")
                }
            }
            Prop::Forall(x, a) => write!(f, "!{x}. {a}"),
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::Var(a) => f.write_str(a),
            Proof::Lam(a, b) => write!(f, "\\{a}. {b}"),
            Proof::TLam(x, b) => write!(f, "^{x}. {b}"),
            Proof::App(g, a) => {
                fmt_head(g, f)?;
                f.write_str(" ")?;
                if matches!(**a, Proof::Var(_)) {
                    write!(f, "{a}")
                } else {
                    write!(f, "({a})")
                }
            }
            Proof::TApp(p, t) => {
                fmt_head(p, f)?;
                write!(f, " [{t}]")
            }
        }
    }
}

fn fmt_head(p: &Proof, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if matches!(p, Proof::Lam(..) | Proof::TLam(..)) {
        write!(f, "({p})")
    } else {
        write!(f, "{p}")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, n) in self.predicates() {
            writeln!(f, "pred {p}/{n}.")?;
        }
        for (g, n) in self.functions() {
            writeln!(f, "fun {g}/{n}.")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::*;

    #[test]
    fn prints_minimal_parentheses() {
        let d = Proof::lam("a", Proof::app(Proof::var("a"), Proof::var("a")));
        assert_eq!(Proof::app(d.clone(), d).to_string(), "(\\a. a a) (\\a. a a)");
        let p = Prop::imp(
            Prop::imp(Prop::atom("A", vec![]), Prop::atom("B", vec![])),
            Prop::forall("x", Prop::atom("Q", vec![Term::var("x")])),
        );
        assert_eq!(p.to_string(), "(A => B) => !x. Q(x)");
        let t = Proof::tapp(Proof::app(Proof::var("h"), Proof::var("b")), Term::constant("c"));
        assert_eq!(t.to_string(), "h b [c]");
    }
}
