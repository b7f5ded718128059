//! Event, entity and triple types shared by every pipeline stage.

mod event;
pub mod rdf;
mod requirements;

pub use event::{
    frame_for, roles, Classification, EntityRef, EventClass, EventInstance, Filler, FrameRegistry,
    Provenance, RoleFiller, RoleFrame, RoleSpec, VerbMention,
};
pub use rdf::{vocab, Iri, Literal, Term, Triple, TripleSet};
pub use requirements::{
    validate_data_model, DataModelDescriptor, EntityTypeDecl, Granularity, PropertyDecl,
    RequirementReport, Status, Verdict,
};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown event class `{0}`")]
    UnknownClass(String),
    #[error("class `{0}` does not take a verb subgroup")]
    SubgroupNotAllowed(String),
    #[error("role `{role}` is not part of the {class} frame")]
    RoleNotInFrame { role: String, class: String },
    #[error("not an absolute IRI: `{0}`")]
    InvalidIri(String),
    #[error("invalid data-model descriptor: {0}")]
    Descriptor(String),
}
