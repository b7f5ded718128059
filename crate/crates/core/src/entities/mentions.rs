//! Entity recognition over chunks, catalog linking, minting, disambiguation
//! and implicit-entity resolution.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::ops::Range;

use chrono::NaiveDate;

use super::catalog::{alias_key, CatalogEntity, EntityCatalog};
use super::chunk::{Chunk, ChunkKind};
use crate::ingest::{Token, TokenKind, TokenSequence};
use crate::model::Iri;
use crate::triplify::IriPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MentionKind {
    Named,
    /// An `@handle`.
    Handle,
    QuotedTopic,
    Number,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Link {
    Linked(Iri),
    Minted(Iri),
    Unresolved,
}

impl Link {
    pub fn iri(&self) -> Option<&Iri> {
        match self {
            Link::Linked(iri) | Link::Minted(iri) => Some(iri),
            Link::Unresolved => None,
        }
    }
}

/// `<Organization> <Position>` or `<Position> of <Organization>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicitPattern {
    pub position: String,
    pub organization: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityMention {
    pub text: String,
    /// Byte span in the raw headline.
    pub span: Range<usize>,
    pub tokens: Range<usize>,
    pub chunk: usize,
    pub kind: MentionKind,
    pub link: Link,
    pub entity_type: Option<String>,
    /// Canonical label once linked to the catalog.
    pub label: Option<String>,
    pub implicit: Option<ImplicitPattern>,
}

impl EntityMention {
    fn new(tok: &TokenSequence, chunk: usize, tokens: Range<usize>, kind: MentionKind) -> Self {
        EntityMention {
            text: tok.text_of(tokens.clone()).to_string(),
            span: tok.byte_span(tokens.clone()),
            tokens,
            chunk,
            kind,
            link: Link::Unresolved,
            entity_type: None,
            label: None,
            implicit: None,
        }
    }

    pub fn is_entity(&self) -> bool {
        self.link.iri().is_some()
    }
}

const QUANTIFIERS: &[&[&str]] = &[
    &["at", "least"],
    &["at", "most"],
    &["more", "than"],
    &["up", "to"],
    &["nearly"],
    &["about"],
    &["around"],
    &["almost"],
    &["some"],
];

const PERSON_WORDS: &[&str] = &[
    "people", "persons", "person", "dead", "civilians", "soldiers", "pilots", "children", "men", "women",
    "students", "officers", "troops", "police", "policemen", "workers", "passengers", "victims", "migrants",
    "refugees", "fighters", "militants", "protesters", "tourists", "miners", "others", "killed",
];

fn lower(t: &Token) -> String {
    t.surface.to_lowercase()
}

fn key_of(tokens: &[Token]) -> String {
    alias_key(&tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" "))
}

fn all_wordlike(tokens: &[Token]) -> bool {
    !tokens.is_empty() && tokens.iter().all(Token::is_wordlike)
}

struct Scanner<'a> {
    tok: &'a TokenSequence,
    catalog: &'a EntityCatalog,
    range: Range<usize>,
}

impl Scanner<'_> {
    fn slice(&self, start: usize, len: usize) -> Option<&[Token]> {
        let end = start + len;
        (len > 0 && end <= self.range.end).then(|| &self.tok.tokens[start..end])
    }

    /// Longest catalog alias starting at `i`.
    fn alias_at(&self, i: usize) -> usize {
        (1..=self.catalog.longest_alias())
            .rev()
            .find(|&len| {
                self.slice(i, len)
                    .is_some_and(|s| all_wordlike(s) && self.catalog.has_alias(&key_of(s)))
            })
            .unwrap_or(0)
    }

    fn position_at(&self, i: usize) -> usize {
        (1..=3)
            .rev()
            .find(|&len| self.slice(i, len).is_some_and(|s| all_wordlike(s) && self.catalog.is_position(&key_of(s))))
            .unwrap_or(0)
    }

    fn implicit_at(&self, i: usize) -> Option<(usize, ImplicitPattern)> {
        let org = self.alias_at(i);
        if org > 0 {
            let pos = self.position_at(i + org);
            if pos > 0 {
                let pattern = ImplicitPattern {
                    position: key_of(&self.tok.tokens[i + org..i + org + pos]),
                    organization: key_of(&self.tok.tokens[i..i + org]),
                };
                return Some((org + pos, pattern));
            }
        }
        let pos = self.position_at(i);
        if pos > 0 && self.slice(i + pos, 1).is_some_and(|s| lower(&s[0]) == "of") {
            let org = self.alias_at(i + pos + 1);
            if org > 0 {
                let pattern = ImplicitPattern {
                    position: key_of(&self.tok.tokens[i..i + pos]),
                    organization: key_of(&self.tok.tokens[i + pos + 1..i + pos + 1 + org]),
                };
                return Some((pos + 1 + org, pattern));
            }
        }
        None
    }

    fn count_at(&self, i: usize) -> usize {
        let tokens = &self.tok.tokens;
        let mut j = i;
        for q in QUANTIFIERS {
            let matches = q.iter().enumerate().all(|(k, w)| {
                j + k < self.range.end && lower(&tokens[j + k]) == *w
            });
            if matches && j + q.len() < self.range.end && tokens[j + q.len()].kind == TokenKind::Number {
                j += q.len();
                break;
            }
        }
        if tokens[j].kind != TokenKind::Number {
            return 0;
        }
        while j < self.range.end && tokens[j].kind == TokenKind::Number {
            j += 1;
        }
        let mut end = j;
        for (k, t) in tokens.iter().enumerate().take((j + 3).min(self.range.end)).skip(j) {
            if t.kind != TokenKind::Word {
                break;
            }
            if PERSON_WORDS.contains(&lower(t).as_str()) {
                end = k + 1;
                break;
            }
        }
        end - i
    }
}

/// Title-cased run, not counting a lone headline-initial capital.
fn is_title_run(tokens: &[Token], start: usize) -> bool {
    !tokens.is_empty()
        && tokens.iter().all(|t| t.kind == TokenKind::Word && t.is_capitalized())
        && !(tokens.len() == 1 && start == 0)
}

/// Finds entity mentions inside each non-head chunk.
///
/// Quoted, infinitive and clause chunks become one literal topic mention.
/// Elsewhere, at each position the scanner tries an implicit role pattern,
/// a casualty count, then the longest catalog alias. Chunks with no hit
/// yield one mention spanning the chunk; leftover title-cased runs in
/// chunks with hits become named mentions.
pub fn recognize_entities(chunks: &[Chunk], tok: &TokenSequence, catalog: &EntityCatalog) -> Vec<EntityMention> {
    let mut out = Vec::new();
    for (ci, chunk) in chunks.iter().enumerate() {
        match chunk.kind {
            ChunkKind::Head => continue,
            _ if chunk.is_literal() => {
                out.push(EntityMention::new(tok, ci, chunk.tokens.clone(), MentionKind::QuotedTopic));
                continue;
            }
            _ => {}
        }
        let scanner = Scanner { tok, catalog, range: chunk.tokens.clone() };
        let mut found = Vec::new();
        let mut leftover: Vec<usize> = Vec::new();
        let mut i = chunk.tokens.start;
        while i < chunk.tokens.end {
            let t = &tok.tokens[i];
            if !t.is_wordlike() {
                leftover.push(usize::MAX);
                i += 1;
                continue;
            }
            let alias = scanner.alias_at(i);
            if let Some((len, pattern)) = scanner.implicit_at(i).filter(|(len, _)| *len >= alias) {
                let mut m = EntityMention::new(tok, ci, i..i + len, MentionKind::Other);
                m.implicit = Some(pattern);
                found.push(m);
                i += len;
                leftover.push(usize::MAX);
                continue;
            }
            let count = scanner.count_at(i);
            if count > 0 {
                found.push(EntityMention::new(tok, ci, i..i + count, MentionKind::Number));
                i += count;
                leftover.push(usize::MAX);
                continue;
            }
            if alias > 0 {
                let kind = if alias == 1 && t.kind == TokenKind::Mention { MentionKind::Handle } else { MentionKind::Named };
                found.push(EntityMention::new(tok, ci, i..i + alias, kind));
                i += alias;
                leftover.push(usize::MAX);
                continue;
            }
            if t.kind == TokenKind::Mention {
                found.push(EntityMention::new(tok, ci, i..i + 1, MentionKind::Handle));
                leftover.push(usize::MAX);
                i += 1;
                continue;
            }
            leftover.push(i);
            i += 1;
        }

        if found.is_empty() {
            let range = chunk.tokens.clone();
            let kind = if is_title_run(&tok.tokens[range.clone()], range.start) {
                MentionKind::Named
            } else {
                MentionKind::Other
            };
            out.push(EntityMention::new(tok, ci, range, kind));
            continue;
        }

        // title-cased leftovers, split at hits and non-capitalized tokens
        let mut run: Vec<usize> = Vec::new();
        leftover.push(usize::MAX);
        for idx in leftover {
            let keep = idx != usize::MAX && tok.tokens[idx].kind == TokenKind::Word && tok.tokens[idx].is_capitalized();
            if keep {
                run.push(idx);
                continue;
            }
            if let (Some(&first), Some(&last)) = (run.first(), run.last()) {
                if is_title_run(&tok.tokens[first..=last], first) {
                    found.push(EntityMention::new(tok, ci, first..last + 1, MentionKind::Named));
                }
            }
            run.clear();
        }
        found.sort_by_key(|m| m.tokens.start);
        out.extend(found);
    }
    out
}

/// What linking decided for one named mention or handle.
#[derive(Debug, Clone, PartialEq)]
pub enum LinkOutcome<'a> {
    Linked(&'a CatalogEntity),
    Minted { iri: Iri, entity_type: String },
    Ambiguous(Vec<&'a CatalogEntity>),
}

const ORG_SUFFIXES: &[&str] = &[
    "church", "bank", "party", "council", "company", "inc", "corp", "university", "agency", "ministry", "army",
    "force", "group", "association", "union", "committee", "court", "parliament", "government",
];

/// Type guess for a minted entity from its surface form.
pub fn guess_type(surface: &str) -> String {
    if surface.starts_with('@') {
        return "Agent".to_string();
    }
    let words: Vec<&str> = surface.split_whitespace().collect();
    let last = words.last().map(|w| w.to_lowercase()).unwrap_or_default();
    let title = words.iter().all(|w| w.chars().next().is_some_and(char::is_uppercase));
    if ORG_SUFFIXES.contains(&last.as_str()) {
        "Organization".to_string()
    } else if title && (2..=3).contains(&words.len()) {
        "Person".to_string()
    } else {
        "Thing".to_string()
    }
}

/// IRI for an entity with no catalog match; derived from the surface only,
/// and kept clear of catalog IRIs.
pub fn mint_iri(surface: &str, catalog: &EntityCatalog, policy: &IriPolicy) -> Iri {
    let mut iri = policy.entity_iri(surface);
    while catalog.contains(iri.as_str()) {
        iri = Iri::new(format!("{}_minted", iri)).expect("suffix keeps IRI valid");
    }
    iri
}

pub fn link_entity<'a>(m: &EntityMention, catalog: &'a EntityCatalog, policy: &IriPolicy) -> LinkOutcome<'a> {
    let candidates = catalog.candidates(&m.text);
    match candidates.len() {
        0 => LinkOutcome::Minted { iri: mint_iri(&m.text, catalog, policy), entity_type: guess_type(&m.text) },
        1 => LinkOutcome::Linked(candidates[0]),
        _ => LinkOutcome::Ambiguous(candidates),
    }
}

/// Context available to disambiguation.
#[derive(Debug, Clone)]
pub struct LinkContext<'a> {
    pub tokens: &'a TokenSequence,
    pub at: NaiveDate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disambiguation {
    pub mention: String,
    pub selected: Iri,
    pub score: f64,
    pub runner_up: Option<(Iri, f64)>,
}

pub const EXACT_WEIGHT: f64 = 2.0;
pub const KEYWORD_WEIGHT: f64 = 1.0;
pub const ROLE_WEIGHT: f64 = 0.5;

/// 1 while a role is held at `at`, halving for every year since the most
/// recent role ended, 0 before any role starts.
fn role_validity(entity: &CatalogEntity, at: NaiveDate) -> f64 {
    entity
        .roles
        .iter()
        .map(|r| {
            if r.holds_at(at) {
                1.0
            } else if let Some(to) = r.valid_to.filter(|to| *to < at) {
                let years = (at - to).num_days() as f64 / 365.25;
                0.5f64.powf(years)
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

pub fn candidate_score(m: &EntityMention, candidate: &CatalogEntity, ctx: &LinkContext<'_>) -> f64 {
    let exact = if alias_key(&m.text) == alias_key(&candidate.label) { 1.0 } else { 0.0 };
    let context: Vec<String> = ctx
        .tokens
        .tokens
        .iter()
        .enumerate()
        .filter(|(i, t)| t.is_wordlike() && !m.tokens.contains(i))
        .map(|(_, t)| alias_key(&t.surface))
        .collect();
    let joined = format!(" {} ", context.join(" "));
    let overlap = candidate
        .keywords
        .iter()
        .filter(|k| joined.contains(&format!(" {k} ")))
        .collect::<BTreeSet<_>>()
        .len() as f64;
    EXACT_WEIGHT * exact + KEYWORD_WEIGHT * overlap + ROLE_WEIGHT * role_validity(candidate, ctx.at)
}

/// Picks the best-scoring candidate; ties go to the smaller IRI, so the
/// result does not depend on candidate order.
pub fn disambiguate(m: &EntityMention, candidates: &[&CatalogEntity], ctx: &LinkContext<'_>) -> Disambiguation {
    assert!(!candidates.is_empty(), "disambiguate needs candidates");
    let mut scored: Vec<(&CatalogEntity, f64)> =
        candidates.iter().map(|c| (*c, candidate_score(m, c, ctx))).collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.iri.cmp(&b.0.iri)));
    scored.dedup_by(|a, b| a.0.iri == b.0.iri);
    let (best, score) = scored[0];
    Disambiguation {
        mention: m.text.clone(),
        selected: best.iri.clone(),
        score,
        runner_up: scored.get(1).map(|(c, s)| (c.iri.clone(), *s)),
    }
}

/// Resolves `Instagram CEO` / `leader of Russian Orthodox Church` to whoever
/// held that role on `at`.
pub fn resolve_implicit(m: &EntityMention, catalog: &EntityCatalog, at: NaiveDate) -> Option<Iri> {
    let pattern = m.implicit.as_ref()?;
    catalog
        .role_holders(&pattern.position, &pattern.organization, at)
        .first()
        .map(|e| e.iri.clone())
}

/// Runs linking over all mentions in place and returns disambiguation audit
/// records.
pub fn link_mentions(
    mentions: &mut [EntityMention],
    catalog: &EntityCatalog,
    policy: &IriPolicy,
    ctx: &LinkContext<'_>,
) -> Vec<Disambiguation> {
    let mut audit = Vec::new();
    for m in mentions.iter_mut() {
        match m.kind {
            MentionKind::QuotedTopic | MentionKind::Number => {}
            MentionKind::Other => {
                if let Some(iri) = resolve_implicit(m, catalog, ctx.at) {
                    let entity = catalog.get(&iri).expect("holder is in catalog");
                    m.entity_type = Some(entity.entity_type.clone());
                    m.label = Some(entity.label.clone());
                    m.link = Link::Linked(iri);
                }
            }
            MentionKind::Named | MentionKind::Handle => match link_entity(m, catalog, policy) {
                LinkOutcome::Linked(entity) => {
                    m.entity_type = Some(entity.entity_type.clone());
                    m.label = Some(entity.label.clone());
                    m.link = Link::Linked(entity.iri.clone());
                }
                LinkOutcome::Minted { iri, entity_type } => {
                    m.entity_type = Some(entity_type);
                    m.link = Link::Minted(iri);
                }
                LinkOutcome::Ambiguous(candidates) => {
                    let d = disambiguate(m, &candidates, ctx);
                    let entity = catalog.get(&d.selected).expect("candidate is in catalog");
                    m.entity_type = Some(entity.entity_type.clone());
                    m.label = Some(entity.label.clone());
                    m.link = Link::Linked(d.selected.clone());
                    audit.push(d);
                }
            },
        }
    }
    audit
}

impl PartialOrd for Disambiguation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (&self.mention, &self.selected).partial_cmp(&(&other.mention, &other.selected))
    }
}
