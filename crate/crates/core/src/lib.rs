//! Headline-to-event-graph extraction: lexicon-driven event recognition,
//! entity linking, singleton-property triples and event interlinking.

pub mod entities;
pub mod events;
pub mod ingest;
pub mod interlink;
pub mod lexicon;
pub mod model;
pub mod pipeline;
pub mod query;
pub mod triplify;
