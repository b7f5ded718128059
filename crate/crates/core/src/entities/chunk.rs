//! Splits a headline around its event verb into argument chunks.

use std::ops::Range;

use serde::Deserialize;

use crate::events::{EventMention, VerbForm};
use crate::ingest::{TokenKind, TokenSequence};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChunkConfig {
    /// Words that open a new argument chunk.
    pub prepositions: Vec<String>,
    /// Prepositions folded into the head chunk when they follow the verb
    /// directly (`meets with`).
    pub head_particles: Vec<String>,
}

impl Default for ChunkConfig {
    fn default() -> Self {
        let words = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect();
        ChunkConfig {
            prepositions: words(&["with", "in", "at", "on", "over", "for", "from", "by"]),
            head_particles: words(&["with"]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkKind {
    /// The argument closest before the verb.
    Subject,
    Head,
    Argument,
    Quoted,
    /// `to <verb> ...`, running to the end of its region.
    Infinitive,
    /// Everything after a colon that follows the verb.
    Clause,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub kind: ChunkKind,
    /// Opening preposition, excluded from `tokens`.
    pub marker: Option<String>,
    pub tokens: Range<usize>,
    pub text: String,
    pub preverbal: bool,
}

impl Chunk {
    pub fn is_literal(&self) -> bool {
        matches!(self.kind, ChunkKind::Quoted | ChunkKind::Infinitive | ChunkKind::Clause)
    }
}

const QUANTIFIER_FOLLOWERS: &[&str] = &["least", "most"];

struct Segmenter<'a> {
    tok: &'a TokenSequence,
    config: &'a ChunkConfig,
    preverbal: bool,
    out: Vec<Chunk>,
    start: Option<usize>,
    marker: Option<String>,
}

impl<'a> Segmenter<'a> {
    fn push(&mut self, kind: ChunkKind, marker: Option<String>, tokens: Range<usize>) {
        let tokens = trim_punct(self.tok, tokens);
        if tokens.is_empty() {
            return;
        }
        let text = self.tok.text_of(tokens.clone()).to_string();
        self.out.push(Chunk { kind, marker, tokens, text, preverbal: self.preverbal });
    }

    fn flush(&mut self, end: usize) {
        let marker = self.marker.take();
        if let Some(start) = self.start.take() {
            self.push(ChunkKind::Argument, marker, start..end);
        }
    }

    fn run(&mut self, range: Range<usize>) {
        let tokens = &self.tok.tokens;
        let mut i = range.start;
        while i < range.end {
            let t = &tokens[i];
            if let Some(q) = t.quote {
                let span = &self.tok.quoted[q];
                if span.tokens.start == i {
                    self.flush(i);
                    let end = span.tokens.end.min(range.end);
                    self.push(ChunkKind::Quoted, None, i..end);
                    i = end;
                    continue;
                }
            }
            if t.kind == TokenKind::Punct {
                self.flush(i);
                if t.surface == ":" && !self.preverbal {
                    self.push(ChunkKind::Clause, None, i + 1..range.end);
                    return;
                }
                i += 1;
                continue;
            }
            let lower = t.lower();
            let next = tokens.get(i + 1).filter(|_| i + 1 < range.end);
            if lower == "to" && t.kind == TokenKind::Word {
                let verb_follows = next.is_some_and(|n| n.kind == TokenKind::Word && !n.is_capitalized());
                if verb_follows {
                    self.flush(i);
                    self.push(ChunkKind::Infinitive, None, i..range.end);
                    return;
                }
                self.flush(i);
                self.marker = Some(lower);
                i += 1;
                continue;
            }
            let quantifier = lower == "at" && next.is_some_and(|n| QUANTIFIER_FOLLOWERS.contains(&n.lower().as_str()));
            if t.kind == TokenKind::Word && !quantifier && self.config.prepositions.contains(&lower) {
                self.flush(i);
                self.marker = Some(lower);
                i += 1;
                continue;
            }
            if self.start.is_none() {
                self.start = Some(i);
            }
            i += 1;
        }
        self.flush(range.end);
    }
}

fn trim_punct(tok: &TokenSequence, mut range: Range<usize>) -> Range<usize> {
    let loose = |i: usize| tok.tokens[i].kind == TokenKind::Punct && tok.tokens[i].quote.is_none();
    while !range.is_empty() && loose(range.start) {
        range.start += 1;
    }
    while !range.is_empty() && loose(range.end - 1) {
        range.end -= 1;
    }
    range
}

fn segment(tok: &TokenSequence, config: &ChunkConfig, range: Range<usize>, preverbal: bool) -> Vec<Chunk> {
    let mut seg = Segmenter { tok, config, preverbal, out: Vec::new(), start: None, marker: None };
    seg.run(range);
    seg.out
}

/// Chunks in text order: pre-verbal arguments (the last unmarked one becomes
/// the subject), the head, then post-verbal arguments.
pub fn chunk_with(tok: &TokenSequence, mention: &EventMention, config: &ChunkConfig) -> Vec<Chunk> {
    let head = mention.head;
    let mut head_start = head;
    if mention.head_form() == VerbForm::Infinitive {
        if let Some(to) = (0..head).rev().find(|&i| tok.tokens[i].kind != TokenKind::Punct) {
            if tok.tokens[to].lower() == "to" {
                head_start = to;
            }
        }
    }
    let mut head_end = head + 1;
    if tok.get(head_end).is_some_and(|t| config.head_particles.contains(&t.lower())) {
        head_end += 1;
    }

    let mut chunks = segment(tok, config, 0..head_start, true);
    if let Some(subject) = chunks
        .iter_mut()
        .rev()
        .find(|c| c.kind == ChunkKind::Argument && c.marker.is_none())
    {
        subject.kind = ChunkKind::Subject;
    }
    chunks.push(Chunk {
        kind: ChunkKind::Head,
        marker: None,
        tokens: head_start..head_end,
        text: tok.text_of(head_start..head_end).to_string(),
        preverbal: false,
    });
    chunks.extend(segment(tok, config, head_end..tok.len(), false));
    chunks
}

pub fn chunk(tok: &TokenSequence, mention: &EventMention) -> Vec<Chunk> {
    chunk_with(tok, mention, &ChunkConfig::default())
}
