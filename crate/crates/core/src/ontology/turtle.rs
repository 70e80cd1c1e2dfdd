//! Tokenizer and statement parser for the Turtle subset used by the
//! Croissant Tasks schema.
//!
//! Supported: `@prefix` directives, `<iri>` references, prefixed names, the
//! `a` keyword, single-line `"..."` strings, `;` and `,` lists, `.`
//! terminators and `#` comments. Everything else is rejected with a position.

use std::fmt;

use super::OntologyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    PrefixKw,
    IriRef(String),
    PName(String, String),
    A,
    Str(String),
    Dot,
    Semi,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::PrefixKw => f.write_str("@prefix"),
            Tok::IriRef(i) => write!(f, "<{i}>"),
            Tok::PName(p, l) => write!(f, "{p}:{l}"),
            Tok::A => f.write_str("a"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Dot => f.write_str("."),
            Tok::Semi => f.write_str(";"),
            Tok::Comma => f.write_str(","),
        }
    }
}

fn unsupported(pos: Pos, construct: impl Into<String>) -> OntologyError {
    OntologyError::Unsupported {
        line: pos.line,
        column: pos.column,
        construct: construct.into(),
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> OntologyError {
    OntologyError::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn is_pn_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.')
}

pub fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, OntologyError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        match c {
            c if c.is_whitespace() => bump!(),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    bump!();
                }
            }
            '.' => {
                out.push((Tok::Dot, pos));
                bump!();
            }
            ';' => {
                out.push((Tok::Semi, pos));
                bump!();
            }
            ',' => {
                out.push((Tok::Comma, pos));
                bump!();
            }
            '<' => {
                bump!();
                let start = i;
                while i < chars.len() && chars[i] != '>' {
                    if chars[i] == '\n' || chars[i].is_whitespace() {
                        return Err(syntax(pos, "unterminated IRI reference"));
                    }
                    bump!();
                }
                if i >= chars.len() {
                    return Err(syntax(pos, "unterminated IRI reference"));
                }
                let iri: String = chars[start..i].iter().collect();
                bump!();
                out.push((Tok::IriRef(iri), pos));
            }
            '"' => {
                if chars.get(i + 1) == Some(&'"') && chars.get(i + 2) == Some(&'"') {
                    return Err(unsupported(pos, "long string literal"));
                }
                bump!();
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return Err(syntax(pos, "unterminated string literal")),
                        Some('"') => {
                            bump!();
                            break;
                        }
                        Some('\\') => {
                            let esc_pos = Pos { line, column: col };
                            bump!();
                            let e = match chars.get(i) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                Some('\'') => '\'',
                                _ => return Err(syntax(esc_pos, "unsupported escape sequence")),
                            };
                            s.push(e);
                            bump!();
                        }
                        Some(&ch) => {
                            s.push(ch);
                            bump!();
                        }
                    }
                }
                match chars.get(i) {
                    Some('@') => return Err(unsupported(Pos { line, column: col }, "language tag")),
                    Some('^') => return Err(unsupported(Pos { line, column: col }, "typed literal")),
                    _ => {}
                }
                out.push((Tok::Str(s), pos));
            }
            '@' => {
                let start = i;
                bump!();
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    bump!();
                }
                let kw: String = chars[start..i].iter().collect();
                if kw == "@prefix" {
                    out.push((Tok::PrefixKw, pos));
                } else {
                    return Err(unsupported(pos, format!("directive `{kw}`")));
                }
            }
            '[' | ']' => return Err(unsupported(pos, "blank node property list")),
            '(' | ')' => return Err(unsupported(pos, "collection")),
            '\'' => return Err(unsupported(pos, "single-quoted literal")),
            c if c.is_alphabetic() || c == ':' || c == '_' => {
                let start = i;
                while i < chars.len() && (is_pn_char(chars[i]) || chars[i] == ':') {
                    bump!();
                }
                // a trailing '.' belongs to the statement, not the name
                while i > start + 1 && chars[i - 1] == '.' {
                    i -= 1;
                    col -= 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word == "a" {
                    out.push((Tok::A, pos));
                } else if let Some((p, l)) = word.split_once(':') {
                    if p == "_" {
                        return Err(unsupported(pos, "blank node"));
                    }
                    if l.contains(':') {
                        return Err(syntax(pos, format!("malformed prefixed name `{word}`")));
                    }
                    out.push((Tok::PName(p.to_string(), l.to_string()), pos));
                } else if word.eq_ignore_ascii_case("prefix") || word.eq_ignore_ascii_case("base") {
                    return Err(unsupported(pos, format!("SPARQL-style `{word}`")));
                } else if word == "true" || word == "false" {
                    return Err(unsupported(pos, "boolean literal"));
                } else {
                    return Err(syntax(pos, format!("unexpected bare word `{word}`")));
                }
            }
            c if c.is_ascii_digit() || c == '+' || c == '-' => {
                return Err(unsupported(pos, "numeric literal"));
            }
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

/// One term in subject, predicate or object position, before prefix expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Iri(String),
    PName(String, String),
    A,
    Literal(String),
}

#[derive(Debug, Clone)]
pub struct Statement {
    pub subject: (Term, Pos),
    pub predicates: Vec<((Term, Pos), Vec<(Term, Pos)>)>,
}

#[derive(Debug, Clone)]
pub enum Item {
    Prefix { name: String, namespace: String, pos: Pos },
    Statement(Statement),
}

pub fn parse_items(tokens: &[(Tok, Pos)]) -> Result<Vec<Item>, OntologyError> {
    let mut items = Vec::new();
    let mut i = 0;
    let end_pos = tokens.last().map(|(_, p)| *p).unwrap_or(Pos { line: 1, column: 1 });

    let term = |idx: usize| -> Result<(Term, Pos), OntologyError> {
        match tokens.get(idx) {
            Some((Tok::IriRef(s), p)) => Ok((Term::Iri(s.clone()), *p)),
            Some((Tok::PName(a, b), p)) => Ok((Term::PName(a.clone(), b.clone()), *p)),
            Some((Tok::A, p)) => Ok((Term::A, *p)),
            Some((Tok::Str(s), p)) => Ok((Term::Literal(s.clone()), *p)),
            Some((t, p)) => Err(syntax(*p, format!("expected a term, found `{t}`"))),
            None => Err(syntax(end_pos, "unterminated statement")),
        }
    };

    while i < tokens.len() {
        let (tok, pos) = &tokens[i];
        if *tok == Tok::PrefixKw {
            let (name, npos) = match tokens.get(i + 1) {
                Some((Tok::PName(p, l), np)) if l.is_empty() => (p.clone(), *np),
                Some((t, p)) => return Err(syntax(*p, format!("expected `name:` after @prefix, found `{t}`"))),
                None => return Err(syntax(*pos, "unterminated @prefix directive")),
            };
            let namespace = match tokens.get(i + 2) {
                Some((Tok::IriRef(ns), _)) => ns.clone(),
                Some((t, p)) => return Err(syntax(*p, format!("expected <namespace>, found `{t}`"))),
                None => return Err(syntax(npos, "unterminated @prefix directive")),
            };
            match tokens.get(i + 3) {
                Some((Tok::Dot, _)) => {}
                Some((t, p)) => return Err(syntax(*p, format!("expected `.` after @prefix, found `{t}`"))),
                None => return Err(syntax(npos, "unterminated @prefix directive")),
            }
            items.push(Item::Prefix { name, namespace, pos: *pos });
            i += 4;
            continue;
        }

        let subject = term(i)?;
        match subject.0 {
            Term::Literal(_) | Term::A => {
                return Err(syntax(subject.1, "statement subject must be an IRI"));
            }
            _ => {}
        }
        i += 1;
        let mut predicates = Vec::new();
        loop {
            let verb = term(i)?;
            if matches!(verb.0, Term::Literal(_)) {
                return Err(syntax(verb.1, "predicate must be an IRI or `a`"));
            }
            i += 1;
            let mut objects = vec![term(i)?];
            i += 1;
            while matches!(tokens.get(i), Some((Tok::Comma, _))) {
                objects.push(term(i + 1)?);
                i += 2;
            }
            predicates.push((verb, objects));
            match tokens.get(i) {
                Some((Tok::Semi, _)) => {
                    i += 1;
                    // tolerate a dangling `;` before the terminator
                    if matches!(tokens.get(i), Some((Tok::Dot, _))) {
                        i += 1;
                        break;
                    }
                }
                Some((Tok::Dot, _)) => {
                    i += 1;
                    break;
                }
                Some((t, p)) => return Err(syntax(*p, format!("expected `;`, `,` or `.`, found `{t}`"))),
                None => return Err(syntax(end_pos, "unterminated statement")),
            }
        }
        items.push(Item::Statement(Statement { subject, predicates }));
    }
    Ok(items)
}

/// Escapes a string for a double-quoted Turtle literal.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
