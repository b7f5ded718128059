//! Maps chunk-level mentions onto the roles of the event class frame.

use crate::ingest::TokenSequence;
use crate::model::{roles, EntityRef, EventClass, Filler, RoleFiller, RoleFrame};

use super::chunk::{Chunk, ChunkKind};
use super::mentions::{EntityMention, Link, MentionKind};

const PASSIVE_FOLLOWERS: &[&str] = &[
    "when", "after", "as", "while", "during", "amid", "by", "in", "at", "on", "over", "near",
];

const AGENT_TYPES: &[&str] = &["Person", "Organization", "Agent"];

/// `pilots ... killed when ...`: a past participle head that ends the clause
/// or is followed by a subordinator or preposition.
pub fn is_passive(tok: &TokenSequence, head: usize) -> bool {
    let surface = tok.tokens[head].lower();
    if !surface.ends_with("ed") && !matches!(surface.as_str(), "slain" | "shot" | "met" | "fought") {
        return false;
    }
    match tok.get(head + 1) {
        None => true,
        Some(next) => PASSIVE_FOLLOWERS.contains(&next.lower().as_str()),
    }
}

/// Text of a literal filler with quotation marks and stray punctuation removed.
pub fn literal_text(text: &str) -> String {
    let stripped: String = text.chars().filter(|c| !matches!(c, '"' | '“' | '”')).collect();
    stripped
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .trim_end_matches([',', ';', ':'])
        .trim()
        .to_string()
}

pub fn filler_of(m: &EntityMention) -> Filler {
    match (&m.link, &m.entity_type) {
        (Link::Linked(iri) | Link::Minted(iri), ty) => Filler::Entity(EntityRef {
            iri: iri.clone(),
            label: m.label.clone().unwrap_or_else(|| m.text.clone()),
            entity_type: ty.clone().unwrap_or_else(|| "Thing".to_string()),
        }),
        (Link::Unresolved, _) => Filler::Literal(literal_text(&m.text)),
    }
}

fn is_place(m: &EntityMention) -> bool {
    m.is_entity() && m.entity_type.as_deref() == Some("Place")
}

fn is_agent(m: &EntityMention) -> bool {
    m.is_entity() && m.entity_type.as_deref().is_some_and(|t| AGENT_TYPES.contains(&t))
}

struct Assigner<'a> {
    frame: &'a RoleFrame,
    out: Vec<RoleFiller>,
}

impl Assigner<'_> {
    fn put(&mut self, role: &str, filler: Filler) {
        if self.out.iter().any(|r| r.role == role && r.filler == filler) {
            return;
        }
        let Some(spec) = self.frame.role(role) else {
            return self.put(roles::INVOLVED, filler);
        };
        let taken = self.out.iter().any(|r| r.role == role);
        if taken && !spec.repeatable {
            if role != roles::INVOLVED && filler.as_entity().is_some() {
                self.put(roles::INVOLVED, filler);
            }
            return;
        }
        self.out.push(RoleFiller { role: role.to_string(), filler });
    }
}

/// Assigns role fillers and reports missing required roles as warnings.
pub fn assign_roles(
    frame: &RoleFrame,
    chunks: &[Chunk],
    mentions: &[EntityMention],
    tok: &TokenSequence,
    head: usize,
) -> (Vec<RoleFiller>, Vec<String>) {
    let mut a = Assigner { frame, out: Vec::new() };
    let chunk_of = |m: &EntityMention| &chunks[m.chunk];
    let from_chunk = |m: &EntityMention| chunk_of(m).marker.as_deref() == Some("from");

    // places first, wherever they appear
    let mut rest: Vec<&EntityMention> = Vec::new();
    for m in mentions {
        if is_place(m) && !from_chunk(m) {
            a.put(roles::LOCATION, filler_of(m));
        } else {
            rest.push(m);
        }
    }
    let subject: Vec<&EntityMention> = rest.iter().copied().filter(|m| chunk_of(m).kind == ChunkKind::Subject).collect();
    let post: Vec<&EntityMention> = rest.iter().copied().filter(|m| !chunk_of(m).preverbal).collect();
    let other_pre: Vec<&EntityMention> = rest
        .iter()
        .copied()
        .filter(|m| chunk_of(m).preverbal && chunk_of(m).kind != ChunkKind::Subject)
        .collect();

    match &frame.class {
        EventClass::Meet => {
            for m in &subject {
                if m.is_entity() {
                    a.put(roles::PARTICIPANT, filler_of(m));
                }
            }
            for m in rest.iter().filter(|m| m.kind == MentionKind::QuotedTopic) {
                a.put(roles::TOPIC, filler_of(m));
            }
            for m in post.iter().filter(|m| m.is_entity()) {
                a.put(roles::PARTICIPANT, filler_of(m));
            }
        }
        EventClass::Communication => {
            for m in subject.iter().filter(|m| m.is_entity()) {
                a.put(roles::GIVER, filler_of(m));
            }
            let literal = |kinds: &[ChunkKind]| {
                rest.iter().copied().find(|m| m.kind == MentionKind::QuotedTopic && kinds.contains(&chunk_of(m).kind))
            };
            let message = literal(&[ChunkKind::Quoted, ChunkKind::Clause]).or_else(|| literal(&[ChunkKind::Infinitive]));
            if let Some(m) = message {
                a.put(roles::MESSAGE, filler_of(m));
            }
            let message_start = message.map_or(usize::MAX, |m| m.tokens.start);
            for m in post.iter().filter(|m| m.is_entity()) {
                let marker = chunk_of(m).marker.as_deref();
                let recipient = matches!(marker, Some("to") | Some("with"))
                    || (marker.is_none() && m.tokens.start < message_start);
                a.put(if recipient { roles::RECIPIENT } else { roles::INVOLVED }, filler_of(m));
            }
        }
        EventClass::Murder if is_passive(tok, head) => {
            for m in &subject {
                match m.kind {
                    MentionKind::Number => a.put(roles::COUNT, filler_of(m)),
                    _ if m.is_entity() => a.put(roles::VICTIM, filler_of(m)),
                    _ => a.put(roles::VICTIM, filler_of(m)),
                }
            }
            for m in &post {
                let marker = chunk_of(m).marker.as_deref();
                if marker == Some("by") {
                    let role = if is_agent(m) { roles::PERPETRATOR } else { roles::CAUSE };
                    a.put(role, filler_of(m));
                } else if marker.is_none() && m.kind == MentionKind::Other {
                    a.put(roles::CAUSE, filler_of(m));
                } else if m.is_entity() {
                    a.put(roles::INVOLVED, filler_of(m));
                }
            }
        }
        EventClass::Murder => {
            for m in &subject {
                let role = if is_agent(m) { roles::PERPETRATOR } else { roles::CAUSE };
                a.put(role, filler_of(m));
            }
            let first_unmarked = chunks
                .iter()
                .position(|c| !c.preverbal && c.kind == ChunkKind::Argument && c.marker.is_none());
            for m in &post {
                match m.kind {
                    MentionKind::Number => a.put(roles::COUNT, filler_of(m)),
                    _ if m.is_entity() => {
                        let role = if m.entity_type.as_deref() == Some("Person") { roles::VICTIM } else { roles::INVOLVED };
                        a.put(role, filler_of(m));
                    }
                    MentionKind::Other if Some(m.chunk) == first_unmarked => a.put(roles::VICTIM, filler_of(m)),
                    _ => {}
                }
            }
        }
        EventClass::Other(_) => {
            let first = frame.roles.first().map(|r| r.name.clone());
            for m in &subject {
                match &first {
                    Some(role) if !roles::GENERIC.contains(&role.as_str()) => a.put(role, filler_of(m)),
                    _ => a.put(roles::INVOLVED, filler_of(m)),
                }
            }
            for m in post.iter().filter(|m| m.is_entity()) {
                a.put(roles::INVOLVED, filler_of(m));
            }
        }
    }
    for m in other_pre.iter().chain(rest.iter().filter(|m| from_chunk(m))) {
        if m.is_entity() {
            a.put(roles::INVOLVED, filler_of(m));
        }
    }

    let warnings = frame
        .required()
        .filter(|spec| !a.out.iter().any(|r| r.role == spec.name))
        .map(|spec| format!("missing required role {}", spec.name))
        .collect();
    (a.out, warnings)
}
