use std::fmt::Write as _;

use crate::model::{Iri, Literal, Term, Triple, TripleSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct NtError {
    pub line: usize,
    pub message: String,
}

fn escape_literal(text: &str, out: &mut String) {
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
}

pub fn render_term(term: &Term) -> String {
    match term {
        Term::Iri(iri) => format!("<{iri}>"),
        Term::Literal(lit) => {
            let mut out = String::from("\"");
            escape_literal(&lit.lexical, &mut out);
            out.push('"');
            if let Some(lang) = &lit.lang {
                out.push('@');
                out.push_str(lang);
            } else if let Some(dt) = &lit.datatype {
                let _ = write!(out, "^^<{dt}>");
            }
            out
        }
    }
}

pub fn render_triple(t: &Triple) -> String {
    format!("<{}> <{}> {} .", t.subject, t.predicate, render_term(&t.object))
}

/// Canonical N-Triples: one line per triple, lines sorted by codepoint,
/// newline-terminated. Equal sets serialize to identical bytes.
pub fn serialize_ntriples(graph: &TripleSet) -> String {
    let mut lines: Vec<String> = graph.iter().map(render_triple).collect();
    lines.sort();
    lines.dedup();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

struct Cursor<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, NtError> {
        Err(NtError { line: self.line, message: message.into() })
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start_matches([' ', '\t']);
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest.starts_with(c) {
            self.rest = &self.rest[c.len_utf8()..];
            true
        } else {
            false
        }
    }

    fn next_char(&mut self) -> Option<char> {
        let c = self.rest.chars().next()?;
        self.rest = &self.rest[c.len_utf8()..];
        Some(c)
    }

    fn hex(&mut self, digits: usize) -> Result<char, NtError> {
        if self.rest.len() < digits || !self.rest.is_char_boundary(digits) {
            return self.err("truncated unicode escape");
        }
        let (hex, rest) = self.rest.split_at(digits);
        let Ok(code) = u32::from_str_radix(hex, 16) else {
            return self.err(format!("bad unicode escape `{hex}`"));
        };
        self.rest = rest;
        match char::from_u32(code) {
            Some(c) => Ok(c),
            None => self.err(format!("escape U+{code:X} is not a scalar value")),
        }
    }

    fn iri(&mut self) -> Result<Iri, NtError> {
        if !self.eat('<') {
            if self.rest.starts_with("_:") {
                return self.err("blank nodes are not supported");
            }
            return self.err("expected `<`");
        }
        let mut value = String::new();
        loop {
            match self.next_char() {
                None => return self.err("unterminated IRI"),
                Some('>') => break,
                Some('\\') => match self.next_char() {
                    Some('u') => value.push(self.hex(4)?),
                    Some('U') => value.push(self.hex(8)?),
                    _ => return self.err("bad escape in IRI"),
                },
                Some(c) => value.push(c),
            }
        }
        Iri::new(value).map_err(|e| NtError { line: self.line, message: e.to_string() })
    }

    fn literal(&mut self) -> Result<Literal, NtError> {
        self.eat('"');
        let mut lexical = String::new();
        loop {
            match self.next_char() {
                None => return self.err("unterminated literal"),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.next_char() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex(4)?,
                        Some('U') => self.hex(8)?,
                        _ => return self.err("bad escape in literal"),
                    };
                    lexical.push(c);
                }
                Some(c) => lexical.push(c),
            }
        }
        if self.eat('@') {
            let end = self.rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '-')).unwrap_or(self.rest.len());
            if end == 0 {
                return self.err("empty language tag");
            }
            let (lang, rest) = self.rest.split_at(end);
            self.rest = rest;
            return Ok(Literal::lang(lexical, lang));
        }
        if self.rest.starts_with("^^") {
            self.rest = &self.rest[2..];
            let dt = self.iri()?;
            return Ok(Literal::typed(lexical, dt));
        }
        Ok(Literal::plain(lexical))
    }

    fn term(&mut self) -> Result<Term, NtError> {
        if self.rest.starts_with('"') {
            Ok(Term::Literal(self.literal()?))
        } else {
            Ok(Term::Iri(self.iri()?))
        }
    }
}

/// Parses N-Triples without blank nodes. Errors carry the 1-based line.
pub fn parse_ntriples(text: &str) -> Result<TripleSet, NtError> {
    let mut out = TripleSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let mut cur = Cursor { rest: raw.trim_end_matches('\r'), line: idx + 1 };
        cur.skip_ws();
        if cur.rest.is_empty() || cur.rest.starts_with('#') {
            continue;
        }
        let subject = cur.iri()?;
        cur.skip_ws();
        let predicate = cur.iri()?;
        cur.skip_ws();
        let object = cur.term()?;
        cur.skip_ws();
        if !cur.eat('.') {
            return cur.err("expected `.`");
        }
        cur.skip_ws();
        if !(cur.rest.is_empty() || cur.rest.starts_with('#')) {
            return cur.err(format!("trailing content `{}`", cur.rest));
        }
        out.insert(Triple::new(subject, predicate, object));
    }
    Ok(out)
}
