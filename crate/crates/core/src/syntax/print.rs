//! Canonical rendering. `parse_formula(render_formula(f))` reproduces `f`
//! exactly, so rendered strings double as stable keys.

use super::{Formula, Term, EQ};

pub fn render_term(t: &Term) -> String {
    let mut s = String::new();
    term(t, 0, &mut s);
    s
}

// Term binding strength: 0 sum, 1 product, 2 primary.
fn term(t: &Term, min: u8, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::App(f, args) if f == "+" => {
            let parens = min > 0;
            if parens {
                out.push('(');
            }
            term(&args[0], 0, out);
            out.push_str(" + ");
            term(&args[1], 1, out);
            if parens {
                out.push(')');
            }
        }
        Term::App(f, args) if f == "*" => {
            let parens = min > 1;
            if parens {
                out.push('(');
            }
            term(&args[0], 1, out);
            out.push_str(" * ");
            term(&args[1], 2, out);
            if parens {
                out.push(')');
            }
        }
        Term::App(f, args) => {
            out.push_str(f);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    term(a, 0, out);
                }
                out.push(')');
            }
        }
    }
}

pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    formula(f, 0, &mut s);
    s
}

fn atom(pred: &str, args: &[Term], out: &mut String) {
    if pred == EQ || pred == "<=" {
        term(&args[0], 0, out);
        out.push(' ');
        out.push_str(if pred == EQ { "=" } else { "<=" });
        out.push(' ');
        term(&args[1], 0, out);
    } else {
        out.push_str(pred);
        if !args.is_empty() {
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                term(a, 0, out);
            }
            out.push(')');
        }
    }
}

// Formula binding strength: 1 `->`, 2 `|`, 3 `&`, 4 `~`/atoms. Quantifiers
// extend maximally right, so they are parenthesized in any operand position.
fn formula(f: &Formula, min: u8, out: &mut String) {
    match f {
        Formula::Atom(p, args) => atom(p, args, out),
        Formula::Not(inner) => {
            out.push('~');
            match inner.as_ref() {
                Formula::Atom(p, args) if p != EQ && p != "<=" => atom(p, args, out),
                Formula::Not(_) => formula(inner, 4, out),
                _ => {
                    out.push('(');
                    formula(inner, 0, out);
                    out.push(')');
                }
            }
        }
        Formula::And(a, b) => {
            let parens = min > 3;
            if parens {
                out.push('(');
            }
            formula(a, 3, out);
            out.push_str(" & ");
            formula(b, 4, out);
            if parens {
                out.push(')');
            }
        }
        Formula::Or(a, b) => {
            let parens = min > 2;
            if parens {
                out.push('(');
            }
            formula(a, 2, out);
            out.push_str(" | ");
            formula(b, 3, out);
            if parens {
                out.push(')');
            }
        }
        Formula::Implies(a, b) => {
            let parens = min > 1;
            if parens {
                out.push('(');
            }
            formula(a, 2, out);
            out.push_str(" -> ");
            formula(b, 1, out);
            if parens {
                out.push(')');
            }
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let parens = min > 0;
            if parens {
                out.push('(');
            }
            out.push_str(if matches!(f, Formula::Forall(..)) { "forall " } else { "exists " });
            out.push_str(v);
            out.push_str(". ");
            formula(body, 0, out);
            if parens {
                out.push(')');
            }
        }
    }
}
