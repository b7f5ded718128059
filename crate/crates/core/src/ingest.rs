//! Headline records and tokenization.
//!
//! Input is UTF-8, one record per line, four tab-separated fields:
//! `id`, `publisher`, `date`, `text`. The text field is last; tabs, newlines
//! and backslashes inside it are written as `\t`, `\n` and `\\`. Blank lines
//! and lines starting with `#` are ignored.
//!
//! Dates are ISO-8601 (`2016-02-26`, `2016-02-26T09:30:00Z`) or day-first
//! `D/M/YY` / `D/M/YYYY`. Two-digit years are read as 2000–2099, and
//! `3/4/16` is the 3rd of April.

use std::fmt;
use std::ops::Range;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct RecordError {
    pub line: usize,
    pub kind: RecordErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecordErrorKind {
    #[error("expected 4 tab-separated fields, found {0}")]
    FieldCount(usize),
    #[error("empty {0} field")]
    EmptyField(&'static str),
    #[error("unparseable date `{0}`")]
    BadDate(String),
    #[error("bad escape sequence in text")]
    BadEscape,
}

/// Publication time of a headline; a bare date when no time of day is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Timestamp {
    Date(NaiveDate),
    DateTime(DateTime<Utc>),
}

impl Timestamp {
    pub fn date(&self) -> NaiveDate {
        match self {
            Timestamp::Date(d) => *d,
            Timestamp::DateTime(dt) => dt.date_naive(),
        }
    }

    /// Midnight UTC for bare dates.
    pub fn instant(&self) -> DateTime<Utc> {
        match self {
            Timestamp::Date(d) => d.and_hms_opt(0, 0, 0).expect("midnight").and_utc(),
            Timestamp::DateTime(dt) => *dt,
        }
    }

    pub fn naive(&self) -> NaiveDateTime {
        self.instant().naive_utc()
    }

    pub fn parse(raw: &str) -> Option<Timestamp> {
        let raw = raw.trim();
        if let Ok(d) = NaiveDate::parse_from_str(raw, "%Y-%m-%d") {
            return Some(Timestamp::Date(d));
        }
        if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
            return Some(Timestamp::DateTime(dt.with_timezone(&Utc)));
        }
        if let Ok(dt) = NaiveDateTime::parse_from_str(raw, "%Y-%m-%dT%H:%M:%S") {
            return Some(Timestamp::DateTime(dt.and_utc()));
        }
        parse_day_first(raw).map(Timestamp::Date)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timestamp::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
            Timestamp::DateTime(dt) => write!(f, "{}", dt.format("%Y-%m-%dT%H:%M:%SZ")),
        }
    }
}

fn parse_day_first(raw: &str) -> Option<NaiveDate> {
    let mut parts = raw.split('/');
    let (d, m, y) = (parts.next()?, parts.next()?, parts.next()?);
    if parts.next().is_some() {
        return None;
    }
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !(all_digits(d) && all_digits(m) && all_digits(y)) || d.len() > 2 || m.len() > 2 {
        return None;
    }
    let year: i32 = match y.len() {
        2 => 2000 + y.parse::<i32>().ok()?,
        4 => y.parse().ok()?,
        _ => return None,
    };
    NaiveDate::from_ymd_opt(year, m.parse().ok()?, d.parse().ok()?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadlineRecord {
    pub id: String,
    pub publisher: String,
    pub timestamp: Timestamp,
    pub text: String,
}

fn unescape(text: &str) -> Option<String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next()? {
            't' => out.push('\t'),
            'n' => out.push('\n'),
            '\\' => out.push('\\'),
            _ => return None,
        }
    }
    Some(out)
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out
}

/// Parses one input line; `line` is only used for error reporting.
pub fn parse_record(raw: &str, line: usize) -> Result<HeadlineRecord, RecordError> {
    let err = |kind| RecordError { line, kind };
    let raw = raw.strip_suffix('\r').unwrap_or(raw);
    let fields: Vec<&str> = raw.split('\t').collect();
    if fields.len() != 4 {
        return Err(err(RecordErrorKind::FieldCount(fields.len())));
    }
    let id = fields[0].trim();
    let publisher = fields[1].trim();
    if id.is_empty() {
        return Err(err(RecordErrorKind::EmptyField("id")));
    }
    if publisher.is_empty() {
        return Err(err(RecordErrorKind::EmptyField("publisher")));
    }
    let timestamp =
        Timestamp::parse(fields[2]).ok_or_else(|| err(RecordErrorKind::BadDate(fields[2].trim().to_string())))?;
    let text = unescape(fields[3]).ok_or_else(|| err(RecordErrorKind::BadEscape))?;
    if text.trim().is_empty() {
        return Err(err(RecordErrorKind::EmptyField("text")));
    }
    Ok(HeadlineRecord { id: id.to_string(), publisher: publisher.to_string(), timestamp, text })
}

pub fn serialize_record(record: &HeadlineRecord) -> String {
    format!("{}\t{}\t{}\t{}", record.id, record.publisher, record.timestamp, escape(&record.text))
}

/// Whether an input line carries a record at all.
pub fn is_record_line(raw: &str) -> bool {
    let t = raw.trim();
    !t.is_empty() && !t.starts_with('#')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Mention,
    Hashtag,
    Url,
    Number,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    /// Byte offsets into the raw text.
    pub span: Range<usize>,
    /// Index into [`TokenSequence::quoted`] when inside a quoted span.
    pub quote: Option<usize>,
}

impl Token {
    pub fn is_wordlike(&self) -> bool {
        matches!(self.kind, TokenKind::Word | TokenKind::Number | TokenKind::Mention | TokenKind::Hashtag)
    }

    pub fn lower(&self) -> String {
        self.surface.to_lowercase()
    }

    pub fn is_capitalized(&self) -> bool {
        self.surface.chars().next().is_some_and(char::is_uppercase)
    }
}

/// A double-quoted stretch of the headline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotedSpan {
    /// Includes the quotation marks.
    pub surface: String,
    pub span: Range<usize>,
    /// Token index range, quotation-mark tokens included.
    pub tokens: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    pub raw: String,
    /// Non-overlapping, ascending.
    pub tokens: Vec<Token>,
    pub quoted: Vec<QuotedSpan>,
    pub urls: Vec<Token>,
    /// False when the text had unbalanced quotes.
    pub quotes_balanced: bool,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, idx: usize) -> Option<&Token> {
        self.tokens.get(idx)
    }

    /// Raw text covering tokens `range`.
    pub fn text_of(&self, range: Range<usize>) -> &str {
        if range.is_empty() {
            return "";
        }
        let start = self.tokens[range.start].span.start;
        let end = self.tokens[range.end - 1].span.end;
        &self.raw[start..end]
    }

    pub fn byte_span(&self, range: Range<usize>) -> Range<usize> {
        if range.is_empty() {
            return 0..0;
        }
        self.tokens[range.start].span.start..self.tokens[range.end - 1].span.end
    }

    pub fn quote_at(&self, idx: usize) -> Option<&QuotedSpan> {
        self.tokens.get(idx).and_then(|t| t.quote).map(|q| &self.quoted[q])
    }
}

const NUMBER_WORDS: &[&str] = &[
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty", "thirty",
    "forty", "fifty", "sixty", "seventy", "eighty", "ninety", "hundred", "hundreds", "thousand",
    "thousands", "million", "millions", "dozen", "dozens",
];

pub fn is_number_word(word: &str) -> bool {
    let lower = word.to_lowercase();
    NUMBER_WORDS.contains(&lower.as_str())
        || (lower.bytes().next().is_some_and(|b| b.is_ascii_digit())
            && lower.bytes().all(|b| b.is_ascii_digit() || b == b',' || b == b'.'))
}

fn is_quote_mark(c: char) -> bool {
    matches!(c, '"' | '“' | '”')
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '’' | '-' | '.' | ',' | '&')
}

/// Splits headline text into tokens. URLs are dropped from the token list and
/// kept in `urls`; `@handles` and `#tags` stay whole; quoted spans are recorded
/// alongside their inner tokens.
///
/// # Panics
/// On empty (all-whitespace) text.
pub fn normalize(text: &str) -> TokenSequence {
    assert!(!text.trim().is_empty(), "normalize requires nonempty text");
    let mut tokens = Vec::new();
    let mut urls = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[start..];
        if rest.starts_with("http://") || rest.starts_with("https://") || rest.starts_with("www.") {
            let mut j = i;
            while j < chars.len() && !chars[j].1.is_whitespace() {
                j += 1;
            }
            let end = byte_at(j);
            urls.push(Token { surface: text[start..end].to_string(), kind: TokenKind::Url, span: start..end, quote: None });
            i = j;
            continue;
        }
        if (c == '@' || c == '#') && chars.get(i + 1).is_some_and(|&(_, n)| n.is_alphanumeric() || n == '_') {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = byte_at(j);
            let kind = if c == '@' { TokenKind::Mention } else { TokenKind::Hashtag };
            tokens.push(Token { surface: text[start..end].to_string(), kind, span: start..end, quote: None });
            i = j;
            continue;
        }
        if is_word_char(c) {
            let mut j = i + 1;
            loop {
                if j < chars.len() && is_word_char(chars[j].1) {
                    j += 1;
                } else if j + 1 < chars.len() && is_joiner(chars[j].1) && is_word_char(chars[j + 1].1) {
                    // a comma only joins digit groups ("1,000")
                    if chars[j].1 == ',' && !(chars[j - 1].1.is_ascii_digit() && chars[j + 1].1.is_ascii_digit()) {
                        break;
                    }
                    j += 2;
                } else {
                    break;
                }
            }
            let end = byte_at(j);
            let surface = &text[start..end];
            let kind = if is_number_word(surface) { TokenKind::Number } else { TokenKind::Word };
            tokens.push(Token { surface: surface.to_string(), kind, span: start..end, quote: None });
            i = j;
            continue;
        }
        let end = byte_at(i + 1);
        tokens.push(Token { surface: text[start..end].to_string(), kind: TokenKind::Punct, span: start..end, quote: None });
        i += 1;
    }

    let marks: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.kind == TokenKind::Punct && t.surface.chars().all(is_quote_mark))
        .map(|(idx, _)| idx)
        .collect();
    let quotes_balanced = marks.len().is_multiple_of(2);
    let mut quoted = Vec::new();
    if quotes_balanced {
        for pair in marks.chunks(2) {
            let (open, close) = (pair[0], pair[1]);
            let q = quoted.len();
            for t in &mut tokens[open..=close] {
                t.quote = Some(q);
            }
            let span = tokens[open].span.start..tokens[close].span.end;
            quoted.push(QuotedSpan { surface: text[span.clone()].to_string(), span, tokens: open..close + 1 });
        }
    }

    TokenSequence { raw: text.to_string(), tokens, quoted, urls, quotes_balanced }
}
