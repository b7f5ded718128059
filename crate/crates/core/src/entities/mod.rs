//! Entity annotation: chunking, recognition, linking and role assignment.

mod catalog;
mod chunk;
mod mentions;
mod roles;

pub use catalog::{alias_key, CatalogEntity, CatalogError, EntityCatalog, RoleRecord, DEFAULT_CATALOG};
pub use chunk::{chunk, chunk_with, Chunk, ChunkConfig, ChunkKind};
pub use mentions::{
    candidate_score, disambiguate, guess_type, link_entity, link_mentions, mint_iri, recognize_entities,
    resolve_implicit, Disambiguation, EntityMention, ImplicitPattern, Link, LinkContext, LinkOutcome, MentionKind,
};
pub use roles::{assign_roles, filler_of, is_passive, literal_text};

use crate::events::EventMention;
use crate::ingest::{HeadlineRecord, Timestamp, TokenSequence};
use crate::model::{Classification, EventInstance, FrameRegistry, ModelError, Provenance, VerbMention};
use crate::triplify::IriPolicy;

/// Everything entity annotation reads besides the headline itself.
#[derive(Debug, Clone, Copy)]
pub struct AnnotationContext<'a> {
    pub catalog: &'a EntityCatalog,
    pub policy: &'a IriPolicy,
    pub chunking: &'a ChunkConfig,
    pub frames: &'a FrameRegistry,
}

#[derive(Debug, Clone)]
pub struct Annotation {
    pub chunks: Vec<Chunk>,
    pub mentions: Vec<EntityMention>,
    pub instance: EventInstance,
    pub disambiguations: Vec<Disambiguation>,
}

/// Builds the event instance for one classified headline.
pub fn annotate_entities(
    record: &HeadlineRecord,
    tok: &TokenSequence,
    event: &EventMention,
    classification: Classification,
    ctx: AnnotationContext<'_>,
) -> Result<Annotation, ModelError> {
    let frame = ctx.frames.frame_for(classification.class())?;
    let chunks = chunk_with(tok, event, ctx.chunking);
    let mut mentions = recognize_entities(&chunks, tok, ctx.catalog);
    let link_ctx = LinkContext { tokens: tok, at: record.timestamp.date() };
    let disambiguations = link_mentions(&mut mentions, ctx.catalog, ctx.policy, &link_ctx);
    let (roles, warnings) = assign_roles(frame, &chunks, &mentions, tok, event.head);

    let head = &tok.tokens[event.head];
    let instance = EventInstance {
        instance_id: ctx.policy.instance_iri(classification.class(), &record.id),
        record_id: record.id.clone(),
        mention: VerbMention { surface: head.surface.clone(), token: event.head, span: head.span.clone() },
        time: match record.timestamp {
            Timestamp::DateTime(_) => Some(record.timestamp.naive()),
            Timestamp::Date(_) => None,
        },
        roles,
        provenance: Provenance { publisher: record.publisher.trim().to_string(), extracted_on: record.timestamp.date() },
        alternates: event.alternates().map(|c| c.classification.clone()).collect(),
        warnings,
        classification,
    };
    instance.check_roles(frame)?;
    Ok(Annotation { chunks, mentions, instance, disambiguations })
}
